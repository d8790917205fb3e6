/** Job submission and polling. Polls at one second with multiplicative
 * backoff; no server push. The scheduler is injectable for tests. */

import type { ApiClient } from "./api.js";
import type { JobRecord } from "./types.js";

export const POLL_BASE_MS = 1000;
export const POLL_BACKOFF = 1.5;
export const POLL_MAX_MS = 10_000;

export function nextPollDelay(previous: number): number {
  return Math.min(Math.round(previous * POLL_BACKOFF), POLL_MAX_MS);
}

export type Scheduler = (fn: () => void, delayMs: number) => void;

export interface PollHandle {
  cancel(): void;
}

export function pollJob(
  client: ApiClient,
  jobId: string,
  onUpdate: (job: JobRecord) => void,
  onError: (error: unknown) => void,
  schedule: Scheduler = (fn, ms) => {
    setTimeout(fn, ms);
  },
): PollHandle {
  let cancelled = false;
  let delay = POLL_BASE_MS;

  const tick = async (): Promise<void> => {
    if (cancelled) return;
    let job: JobRecord;
    try {
      job = await client.job(jobId);
    } catch (error) {
      onError(error);
      return;
    }
    if (cancelled) return;
    onUpdate(job);
    if (job.status === "Done" || job.status === "Failed") {
      return;
    }
    delay = nextPollDelay(delay);
    schedule(() => {
      void tick();
    }, delay);
  };

  schedule(() => {
    void tick();
  }, POLL_BASE_MS);
  return {
    cancel() {
      cancelled = true;
    },
  };
}

import { describe, expect, it } from "vitest";

import { ApiClient } from "../src/api.js";
import { nextPollDelay, pollJob, POLL_BASE_MS, POLL_MAX_MS } from "../src/jobs.js";
import type { JobRecord } from "../src/types.js";

function jobRecord(status: JobRecord["status"]): JobRecord {
  return {
    id: "j1",
    kind: "Simulation",
    status,
    submitted_at: 0,
    finished_at: status === "Done" ? 1 : null,
    request: {},
    result: status === "Done" ? ({ makespan_mean: 1 } as never) : undefined,
  };
}

describe("poll scheduling", () => {
  it("backs off multiplicatively and caps", () => {
    let delay = POLL_BASE_MS;
    const seen = [delay];
    for (let i = 0; i < 10; i += 1) {
      delay = nextPollDelay(delay);
      seen.push(delay);
    }
    for (let i = 1; i < seen.length; i += 1) {
      expect(seen[i]).toBeGreaterThanOrEqual(seen[i - 1]);
      expect(seen[i]).toBeLessThanOrEqual(POLL_MAX_MS);
    }
    expect(seen[seen.length - 1]).toBe(POLL_MAX_MS);
  });

  it("polls until the job is done, then stops", async () => {
    const sequence = ["Queued", "Running", "Running", "Done"] as const;
    let call = 0;
    const fetchFn = async (): Promise<Response> =>
      new Response(JSON.stringify(jobRecord(sequence[Math.min(call++, sequence.length - 1)])), {
        status: 200,
      });
    const client = new ApiClient("", fetchFn);

    const delays: number[] = [];
    const pending: Array<() => void> = [];
    const schedule = (fn: () => void, ms: number) => {
      delays.push(ms);
      pending.push(fn);
    };
    const updates: string[] = [];
    pollJob(client, "j1", (job) => updates.push(job.status), () => {}, schedule);

    // drain the scheduler until the poller stops queueing ticks
    while (pending.length > 0) {
      const fn = pending.shift()!;
      fn();
      await new Promise((resolve) => setTimeout(resolve, 0));
    }
    expect(updates).toEqual(["Queued", "Running", "Running", "Done"]);
    expect(call).toBe(4);
    expect(delays[0]).toBe(POLL_BASE_MS);
    for (let i = 1; i < delays.length; i += 1) {
      expect(delays[i]).toBeGreaterThanOrEqual(delays[i - 1]);
    }
  });

  it("stops polling after cancel", async () => {
    const fetchFn = async (): Promise<Response> =>
      new Response(JSON.stringify(jobRecord("Running")), { status: 200 });
    const client = new ApiClient("", fetchFn);
    const pending: Array<() => void> = [];
    const updates: string[] = [];
    const handle = pollJob(
      client,
      "j1",
      (job) => updates.push(job.status),
      () => {},
      (fn) => pending.push(fn),
    );
    pending.shift()!();
    await new Promise((resolve) => setTimeout(resolve, 0));
    expect(updates).toEqual(["Running"]);
    handle.cancel();
    while (pending.length > 0) {
      pending.shift()!();
      await new Promise((resolve) => setTimeout(resolve, 0));
    }
    expect(updates).toEqual(["Running"]);
  });
});

/** Typed client over the /api/v1 routes. `fetchFn` is injectable so tests
 * can exercise paths and payloads without a server. */

import type {
  ApiError,
  DesignQueryDraft,
  GraphSnapshot,
  JobRecord,
  PatternDetail,
  PatternSummary,
  SynthesizeResponse,
} from "./types.js";

export type FetchLike = (input: string, init?: RequestInit) => Promise<Response>;

export class ApiRequestError extends Error {
  constructor(
    public readonly status: number,
    public readonly body: ApiError,
  ) {
    super(`${body.code}: ${body.message}`);
  }
}

export class ApiClient {
  constructor(
    private readonly base: string = "",
    private readonly fetchFn: FetchLike = (input, init) => globalThis.fetch(input, init),
  ) {}

  private async request<T>(path: string, init?: RequestInit): Promise<T> {
    const response = await this.fetchFn(`${this.base}${path}`, init);
    const text = await response.text();
    const body = text ? JSON.parse(text) : null;
    if (!response.ok) {
      const error: ApiError =
        body && typeof body.code === "string"
          ? body
          : { code: `http_${response.status}`, message: text || "request failed" };
      throw new ApiRequestError(response.status, error);
    }
    return body as T;
  }

  patterns(): Promise<PatternSummary[]> {
    return this.request("/api/v1/patterns");
  }

  pattern(id: string): Promise<PatternDetail> {
    return this.request(`/api/v1/patterns/${encodeURIComponent(id)}`);
  }

  graph(): Promise<GraphSnapshot> {
    return this.request("/api/v1/graph");
  }

  synthesize(draft: DesignQueryDraft): Promise<SynthesizeResponse> {
    return this.request("/api/v1/synthesize", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(draft),
    });
  }

  simulate(config: unknown): Promise<{ job_id: string }> {
    return this.request("/api/v1/simulate", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify(config),
    });
  }

  sweep(config: unknown, grid: Record<string, number[]>): Promise<{ job_id: string }> {
    return this.request("/api/v1/sweep", {
      method: "POST",
      headers: { "Content-Type": "application/json" },
      body: JSON.stringify({ config, grid }),
    });
  }

  job(id: string): Promise<JobRecord> {
    return this.request(`/api/v1/jobs/${encodeURIComponent(id)}`);
  }
}

import { describe, expect, it } from "vitest";

import { ApiClient, ApiRequestError } from "../src/api.js";
import type { DesignQueryDraft } from "../src/types.js";

function fakeFetch(
  handler: (input: string, init?: RequestInit) => { status: number; body: unknown },
) {
  const calls: Array<{ input: string; init?: RequestInit }> = [];
  const fetchFn = async (input: string, init?: RequestInit): Promise<Response> => {
    calls.push({ input, init });
    const { status, body } = handler(input, init);
    return new Response(JSON.stringify(body), {
      status,
      headers: { "Content-Type": "application/json" },
    });
  };
  return { fetchFn, calls };
}

const DRAFT: DesignQueryDraft = {
  fault_models: ["Failure"],
  capabilities: ["Recovery"],
  domain: "any",
  entry_mode: "DomainFirst",
  seed_patterns: [],
  exclude: [],
  weights: {
    design_complexity: 0.2,
    time_overhead_fault_free: 0.2,
    time_overhead_per_event: 0.2,
    space_overhead: 0.2,
    power_overhead: 0.2,
  },
  max_candidates: 50,
};

describe("api client", () => {
  it("hits the versioned routes", async () => {
    const { fetchFn, calls } = fakeFetch(() => ({ status: 200, body: [] }));
    const client = new ApiClient("", fetchFn);
    await client.patterns();
    await client.graph();
    await client.job("abc123");
    expect(calls.map((c) => c.input)).toEqual([
      "/api/v1/patterns",
      "/api/v1/graph",
      "/api/v1/jobs/abc123",
    ]);
  });

  it("posts the query draft verbatim", async () => {
    const { fetchFn, calls } = fakeFetch(() => ({
      status: 200,
      body: { query: DRAFT, narrative: "", candidates: [], explanations: [] },
    }));
    const client = new ApiClient("", fetchFn);
    const response = await client.synthesize(DRAFT);
    expect(calls[0].init?.method).toBe("POST");
    expect(JSON.parse(String(calls[0].init?.body))).toEqual(DRAFT);
    // query round-trip: the echoed query equals the submitted draft
    expect(response.query).toEqual(DRAFT);
  });

  it("wraps structured errors with status codes", async () => {
    const { fetchFn } = fakeFetch(() => ({
      status: 422,
      body: { code: "unsatisfiable_query", message: "no pattern offers Masking for Fault" },
    }));
    const client = new ApiClient("", fetchFn);
    try {
      await client.synthesize(DRAFT);
      expect.unreachable("should have thrown");
    } catch (error) {
      expect(error).toBeInstanceOf(ApiRequestError);
      const apiError = error as ApiRequestError;
      expect(apiError.status).toBe(422);
      expect(apiError.body.code).toBe("unsatisfiable_query");
    }
  });

  it("sends sweep bodies as {config, grid}", async () => {
    const { fetchFn, calls } = fakeFetch(() => ({ status: 202, body: { job_id: "j1" } }));
    const client = new ApiClient("", fetchFn);
    await client.sweep({ seed: 1 }, { interval: [50, 100] });
    const body = JSON.parse(String(calls[0].init?.body));
    expect(body).toEqual({ config: { seed: 1 }, grid: { interval: [50, 100] } });
  });
});

import { describe, expect, it } from "vitest";

import { emptyDraft, toggle, validateDraft } from "../src/queryForm.js";

describe("query draft validation mirrors the service invariants", () => {
  it("rejects an empty draft (submit disabled)", () => {
    const verdict = validateDraft(emptyDraft());
    expect(verdict.ok).toBe(false);
    expect(verdict.problems.join(" ")).toContain("fault model");
    expect(verdict.problems.join(" ")).toContain("capability");
  });

  it("rejects a draft without capabilities even with fault models set", () => {
    const draft = { ...emptyDraft(), fault_models: ["Failure" as const] };
    const verdict = validateDraft(draft);
    expect(verdict.ok).toBe(false);
    expect(verdict.problems).toHaveLength(1);
  });

  it("accepts a minimal valid draft", () => {
    const draft = {
      ...emptyDraft(),
      fault_models: ["Failure" as const],
      capabilities: ["Recovery" as const],
    };
    expect(validateDraft(draft)).toEqual({ ok: true, problems: [] });
  });

  it("requires seeds for implementation-first", () => {
    const draft = {
      ...emptyDraft(),
      fault_models: ["Error" as const],
      capabilities: ["Masking" as const],
      entry_mode: "ImplementationFirst" as const,
    };
    expect(validateDraft(draft).ok).toBe(false);
    const seeded = { ...draft, seed_patterns: ["forward-error-correction-code"] };
    expect(validateDraft(seeded).ok).toBe(true);
  });

  it("flags seed/exclude overlap and bad weights", () => {
    const draft = {
      ...emptyDraft(),
      fault_models: ["Failure" as const],
      capabilities: ["Recovery" as const],
      seed_patterns: ["rollback"],
      exclude: ["rollback"],
    };
    expect(validateDraft(draft).problems.join(" ")).toContain("rollback");
    const zeroWeights = {
      ...emptyDraft(),
      fault_models: ["Failure" as const],
      capabilities: ["Recovery" as const],
      weights: {
        design_complexity: 0,
        time_overhead_fault_free: 0,
        time_overhead_per_event: 0,
        space_overhead: 0,
        power_overhead: 0,
      },
    };
    expect(validateDraft(zeroWeights).ok).toBe(false);
  });
});

describe("toggle helper", () => {
  it("adds then removes", () => {
    expect(toggle(["a"], "b")).toEqual(["a", "b"]);
    expect(toggle(["a", "b"], "b")).toEqual(["a"]);
  });
});

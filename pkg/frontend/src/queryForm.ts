/** Query-draft state and the client-side validation that mirrors the
 * service's DesignQuery invariants. Pure logic; the DOM wiring lives in
 * main.ts so this stays testable. */

import type { Capability, CostVector, DesignQueryDraft, EntryMode, FaultModel } from "./types.js";

export const ALL_FAULT_MODELS: FaultModel[] = ["Fault", "Error", "Failure"];
export const ALL_CAPABILITIES: Capability[] = ["Detection", "Containment", "Recovery", "Masking"];
export const ALL_ENTRY_MODES: EntryMode[] = [
  "DomainFirst",
  "FaultModelFirst",
  "CapabilityFirst",
  "ImplementationFirst",
];

export const EQUAL_WEIGHTS: CostVector = {
  design_complexity: 0.2,
  time_overhead_fault_free: 0.2,
  time_overhead_per_event: 0.2,
  space_overhead: 0.2,
  power_overhead: 0.2,
};

export function emptyDraft(): DesignQueryDraft {
  return {
    fault_models: [],
    capabilities: [],
    domain: "any",
    entry_mode: "DomainFirst",
    seed_patterns: [],
    exclude: [],
    weights: { ...EQUAL_WEIGHTS },
    max_candidates: 50,
  };
}

export interface ValidationResult {
  ok: boolean;
  problems: string[];
}

export function validateDraft(draft: DesignQueryDraft): ValidationResult {
  const problems: string[] = [];
  if (draft.fault_models.length === 0) {
    problems.push("pick at least one fault model class");
  }
  if (draft.capabilities.length === 0) {
    problems.push("pick at least one capability");
  }
  if (draft.entry_mode === "ImplementationFirst" && draft.seed_patterns.length === 0) {
    problems.push("implementation-first queries need at least one seed pattern");
  }
  if (draft.max_candidates < 1) {
    problems.push("max candidates must be positive");
  }
  const weightValues = Object.values(draft.weights);
  if (weightValues.some((w) => w < 0 || !Number.isFinite(w))) {
    problems.push("weights must be non-negative numbers");
  } else if (weightValues.every((w) => w === 0)) {
    problems.push("at least one weight must be positive");
  }
  const overlap = draft.seed_patterns.filter((p) => draft.exclude.includes(p));
  if (overlap.length > 0) {
    problems.push(`seeds also excluded: ${overlap.join(", ")}`);
  }
  return { ok: problems.length === 0, problems };
}

export function toggle<T>(values: T[], value: T): T[] {
  return values.includes(value) ? values.filter((v) => v !== value) : [...values, value];
}

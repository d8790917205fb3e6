/** Pinned comparison set. Every pinned entry shows exactly the same
 * metric columns so candidates and runs line up. */

import type { SimReportSummary, SolutionCandidate } from "./types.js";

export const COMPARISON_COLUMNS = [
  "score",
  "complexity",
  "fault_free_overhead",
  "per_event_s",
  "space_overhead",
  "makespan_mean",
  "efficiency_mean",
] as const;

export type ComparisonColumn = (typeof COMPARISON_COLUMNS)[number];

export interface ComparisonEntry {
  key: string;
  label: string;
  values: Record<ComparisonColumn, number | null>;
}

export function candidateEntry(key: string, candidate: SolutionCandidate): ComparisonEntry {
  return {
    key,
    label: `${candidate.state_binding} + ${candidate.instances.map((i) => i.pattern).join("+")}`,
    values: {
      score: candidate.score,
      complexity: candidate.cost.design_complexity,
      fault_free_overhead: candidate.cost.time_overhead_fault_free,
      per_event_s: candidate.cost.time_overhead_per_event,
      space_overhead: candidate.cost.space_overhead,
      makespan_mean: null,
      efficiency_mean: null,
    },
  };
}

export function withReport(entry: ComparisonEntry, report: SimReportSummary): ComparisonEntry {
  return {
    ...entry,
    values: {
      ...entry.values,
      makespan_mean: report.makespan_mean,
      efficiency_mean: report.efficiency_mean,
    },
  };
}

export class ComparisonSet {
  private entries = new Map<string, ComparisonEntry>();

  /** Last write wins per key (job id or candidate key). */
  pin(entry: ComparisonEntry): void {
    this.entries.set(entry.key, entry);
  }

  unpin(key: string): void {
    this.entries.delete(key);
  }

  list(): ComparisonEntry[] {
    return [...this.entries.values()];
  }

  columns(): readonly ComparisonColumn[] {
    return COMPARISON_COLUMNS;
  }
}

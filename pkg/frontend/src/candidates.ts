/** Candidate-list view model. Every number in a row is lifted verbatim
 * from the API response; this module only reshapes and formats. */

import type { SolutionCandidate } from "./types.js";

export interface CandidateRow {
  rank: number;
  score: number;
  stateBinding: string;
  patterns: string[];
  sequence: string[];
  costBar: { axis: string; value: number }[];
  raw: SolutionCandidate;
}

const COST_AXES: [string, keyof SolutionCandidate["cost"]][] = [
  ["complexity", "design_complexity"],
  ["fault-free", "time_overhead_fault_free"],
  ["per-event", "time_overhead_per_event"],
  ["space", "space_overhead"],
  ["power", "power_overhead"],
];

export function buildCandidateTable(candidates: SolutionCandidate[]): CandidateRow[] {
  return candidates.map((candidate, i) => ({
    rank: i + 1,
    score: candidate.score,
    stateBinding: candidate.state_binding,
    patterns: candidate.instances.map((inst) => inst.pattern),
    sequence: [...candidate.sequence],
    costBar: COST_AXES.map(([axis, key]) => ({ axis, value: candidate.cost[key] })),
    raw: candidate,
  }));
}

/** Normalized widths (0..1 of the column max) for the score bars. */
export function scoreBarWidths(rows: CandidateRow[]): number[] {
  const max = rows.reduce((m, row) => Math.max(m, row.score), 0);
  if (max === 0) {
    return rows.map(() => 0);
  }
  return rows.map((row) => row.score / max);
}

export function formatScore(score: number): string {
  return score.toFixed(6);
}

export function formatSeconds(seconds: number): string {
  return `${seconds.toFixed(2)} s`;
}

export function formatFraction(fraction: number): string {
  return `${(fraction * 100).toFixed(2)}%`;
}

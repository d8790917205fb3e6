/** Wire formats mirrored from the /api/v1 service. The UI never derives
 * domain numbers locally; these shapes are rendered as received. */

export type PatternClass = "Strategy" | "Architectural" | "Structural" | "State";
export type FaultModel = "Fault" | "Error" | "Failure";
export type Capability = "Detection" | "Containment" | "Recovery" | "Masking";
export type RelationKind =
  | "Abstraction"
  | "Specialization"
  | "UsedWith"
  | "Conflict"
  | "Similarity"
  | "Domain";
export type EntryMode =
  | "DomainFirst"
  | "FaultModelFirst"
  | "CapabilityFirst"
  | "ImplementationFirst";

export interface PatternSummary {
  id: string;
  name: string;
  class: PatternClass;
  capabilities: Capability[];
  handles: FaultModel[];
  complexity: number;
}

export interface PatternDetail extends Omit<PatternSummary, "name"> {
  name: string;
  parents: string[];
  problem: string;
  solution: string;
  forces: string;
  consequences: string;
  parameters: ParameterSpec[];
}

export interface ParameterSpec {
  name: string;
  unit: string;
  domain:
    | { type: "interval"; min: number; max: number; integer?: boolean }
    | { type: "choice"; values: number[] };
  default: number;
}

export interface GraphVertex {
  id: string;
  cluster: PatternClass;
}

export interface GraphEdge {
  from: string;
  to: string;
  kind: RelationKind;
  origin: "PaperDerived" | "Inferred" | "UserDeclared";
  annotations?: Record<string, number>;
}

export interface GraphSnapshot {
  vertices: GraphVertex[];
  edges: GraphEdge[];
}

export interface CostVector {
  design_complexity: number;
  time_overhead_fault_free: number;
  time_overhead_per_event: number;
  space_overhead: number;
  power_overhead: number;
}

export interface DesignQueryDraft {
  fault_models: FaultModel[];
  capabilities: Capability[];
  domain: string;
  entry_mode: EntryMode;
  seed_patterns: string[];
  exclude: string[];
  weights: CostVector;
  max_candidates: number;
}

export interface PatternInstance {
  pattern: string;
  bindings: Record<string, number>;
}

export interface SolutionCandidate {
  state_binding: string;
  instances: PatternInstance[];
  chains: string[][];
  covered_capabilities: Capability[];
  covered_fault_models: FaultModel[];
  cost: CostVector;
  score: number;
  sequence: string[];
}

export interface SynthesizeResponse {
  query: DesignQueryDraft;
  narrative: string;
  candidates: SolutionCandidate[];
  explanations: string[];
}

export interface SimReportSummary {
  makespan_mean: number;
  makespan_p50: number;
  makespan_p95: number;
  efficiency_mean: number;
  useful_mean?: number;
  events: Record<string, number>;
  overhead_breakdown: Record<string, number>;
  cost: CostVector;
  aborted_trials: number;
}

export interface SweepRow {
  bindings: Record<string, number>;
  report: {
    makespan_mean: number;
    makespan_p50: number;
    makespan_p95: number;
    efficiency_mean: number;
    space_overhead: number;
    events: Record<string, number>;
  };
}

export interface SweepResult {
  parameters: string[];
  rows: SweepRow[];
}

export type JobStatus = "Queued" | "Running" | "Done" | "Failed";

export interface JobRecord {
  id: string;
  kind: "Simulation" | "Sweep";
  status: JobStatus;
  submitted_at: number;
  finished_at: number | null;
  request: unknown;
  result?: SimReportSummary | SweepResult;
  error?: string;
}

export interface ApiError {
  code: string;
  message: string;
}

"""Discrete-event fault-injection simulator for candidate solutions.

Each trial runs one job of `total_work` useful seconds against stochastic
fault arrivals. Faults activate into errors and escalate into failures per
the system probabilities; registered pattern handlers mask, detect, and
recover in fixed precedence. Trials are seeded independently from
(seed, trial index) so results are reproducible regardless of execution
parallelism.

Accounting: every wall-clock second lands in exactly one category (useful
work, checkpointing, recovery, replication, monitoring, rejuvenation, or
lost work) and the reported makespan is the ordered sum of those
categories, so the identity makespan == useful + sum(overheads) holds
exactly in every trial.
"""
from __future__ import annotations

import csv
import io
import itertools
import json
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Sequence

import numpy as np

from .catalog import Catalog, FaultModelClass, PatternClass, builtin_catalog
from .costmodel import CostVector, aggregate_cost, majority_masking_capacity
from .synthesis import PatternInstance
from .system import InterarrivalModel, SystemModel, Workload


class SimulationError(Exception):
    pass


# Patterns with registered behavioral handlers; anything else is rejected.
SUPPORTED_PATTERNS = frozenset(
    {
        "rollback",
        "rollforward",
        "reinitialization",
        "rejuvenation",
        "restructure",
        "monitoring",
        "prediction",
        "n-modular-redundancy",
        "forward-error-correction-code",
        "recovery-block",
    }
)

# Recovery dispatch order: cheapest/most targeted first.
_RECOVERY_PRECEDENCE = ("rollforward", "rollback", "rejuvenation", "restructure", "reinitialization")

OVERHEAD_CATEGORIES = (
    "checkpointing",
    "recovery",
    "replication",
    "monitoring",
    "rejuvenation",
    "lost_work",
)

EVENT_COUNTERS = (
    "injected_faults",
    "activated_errors",
    "failures",
    "detected",
    "masked",
    "recovered",
    "unrecovered_failures",
    "predicted",
    "false_positives",
    "checkpoints",
    "rejuvenations",
    "votes_held",
    "votes_uncorrected",
)

_DEGRADE_FLOOR = 0.01


@dataclass(frozen=True)
class SimSolution:
    """The slice of a solution the simulator consumes."""

    state_binding: str
    instances: tuple[PatternInstance, ...]

    def to_dict(self) -> dict[str, Any]:
        return {
            "state_binding": self.state_binding,
            "instances": [inst.to_dict() for inst in self.instances],
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "SimSolution":
        known = {"state_binding", "instances"}
        # Full solution-candidate documents are accepted; derived fields are
        # recomputed by the consumers that need them.
        derived = {
            "chains",
            "covered_capabilities",
            "covered_fault_models",
            "cost",
            "score",
            "sequence",
        }
        unknown = set(data) - known - derived
        if unknown:
            raise SimulationError(f"unknown solution fields: {sorted(unknown)}")
        return cls(
            state_binding=str(data["state_binding"]),
            instances=tuple(PatternInstance.from_dict(i) for i in data["instances"]),
        )


@dataclass(frozen=True)
class SimConfig:
    system: SystemModel
    workload: Workload
    solution: SimSolution
    seed: int = 0
    trials: int = 1
    trace: bool = False
    event_budget: int = 1_000_000
    per_trial: bool = False

    def __post_init__(self) -> None:
        if self.trials < 1:
            raise SimulationError("trials must be >= 1")
        if self.event_budget < 1:
            raise SimulationError("event_budget must be >= 1")

    def to_dict(self) -> dict[str, Any]:
        return {
            "system": self.system.to_dict(),
            "workload": self.workload.to_dict(),
            "solution": self.solution.to_dict(),
            "seed": self.seed,
            "trials": self.trials,
            "trace": self.trace,
            "event_budget": self.event_budget,
            "per_trial": self.per_trial,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "SimConfig":
        known = {"system", "workload", "solution", "seed", "trials", "trace", "event_budget", "per_trial"}
        unknown = set(data) - known
        if unknown:
            raise SimulationError(f"unknown simulation config fields: {sorted(unknown)}")
        try:
            return cls(
                system=SystemModel.from_dict(data["system"]),
                workload=Workload.from_dict(data["workload"]),
                solution=SimSolution.from_dict(data["solution"]),
                seed=int(data.get("seed", 0)),
                trials=int(data.get("trials", 1)),
                trace=bool(data.get("trace", False)),
                event_budget=int(data.get("event_budget", 1_000_000)),
                per_trial=bool(data.get("per_trial", False)),
            )
        except KeyError as exc:
            raise SimulationError(f"simulation config missing field {exc.args[0]!r}") from None

    @classmethod
    def from_json(cls, text: str) -> "SimConfig":
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise SimulationError(f"config parse error: {exc.msg} (line {exc.lineno})") from None
        return cls.from_dict(doc)


@dataclass(frozen=True)
class TraceEvent:
    time: float
    kind: str
    node: int
    detail: str

    def to_dict(self) -> dict[str, Any]:
        return {"time": self.time, "kind": self.kind, "node": self.node, "detail": self.detail}


@dataclass(frozen=True)
class SimReport:
    makespan_mean: float
    makespan_p50: float
    makespan_p95: float
    efficiency_mean: float
    useful_mean: float
    events: Mapping[str, int]
    overhead_breakdown: Mapping[str, float]
    cost: CostVector
    aborted_trials: int
    per_trial: tuple[Mapping[str, Any], ...] | None = None
    trace: tuple[TraceEvent, ...] | None = None

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "makespan_mean": self.makespan_mean,
            "makespan_p50": self.makespan_p50,
            "makespan_p95": self.makespan_p95,
            "efficiency_mean": self.efficiency_mean,
            "useful_mean": self.useful_mean,
            "events": dict(self.events),
            "overhead_breakdown": dict(self.overhead_breakdown),
            "cost": self.cost.to_dict(),
            "aborted_trials": self.aborted_trials,
        }
        if self.per_trial is not None:
            out["per_trial"] = [dict(t) for t in self.per_trial]
        if self.trace is not None:
            out["trace"] = [e.to_dict() for e in self.trace]
        return out

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"


@dataclass
class _TrialResult:
    useful: float
    buckets: dict[str, float]
    counters: dict[str, int]
    aborted: bool
    trace: list[TraceEvent] | None

    @property
    def makespan(self) -> float:
        total = self.useful
        for category in OVERHEAD_CATEGORIES:
            total += self.buckets[category]
        return total


def _interarrival(rng: np.random.Generator, system: SystemModel, mean: float) -> float:
    if system.interarrival_model is InterarrivalModel.WEIBULL:
        shape = system.weibull_shape or 1.0
        scale = mean / math.gamma(1.0 + 1.0 / shape)
        return float(scale * rng.weibull(shape))
    return float(rng.exponential(mean))


class _Trial:
    """State machine for one replication."""

    def __init__(self, cfg: SimConfig, catalog: Catalog, index: int, collect_trace: bool):
        self.cfg = cfg
        self.catalog = catalog
        self.system = cfg.system
        self.rng = np.random.default_rng(np.random.SeedSequence([cfg.seed, index]))
        self.collect_trace = collect_trace
        self.trace: list[TraceEvent] | None = [] if collect_trace else None

        self.params: dict[str, dict[str, float]] = {}
        for inst in cfg.solution.instances:
            pattern = catalog.get(inst.pattern)
            self.params[inst.pattern] = catalog.resolve_bindings(pattern, inst.bindings)
        self.handles = {
            inst.pattern: catalog.get(inst.pattern).handles for inst in cfg.solution.instances
        }
        self.has = self.params.__contains__

        self.work_target = cfg.workload.total_work / cfg.workload.parallel_efficiency
        self.mtbe = self.system.mean_time_between_events

        # Fault-free fractional overheads by bucket (multiplicative factor).
        shares: dict[str, float] = {}
        if self.has("monitoring"):
            shares["monitoring"] = shares.get("monitoring", 0.0) + self.params["monitoring"]["overhead"]
        if self.has("recovery-block"):
            shares["monitoring"] = (
                shares.get("monitoring", 0.0) + self.params["recovery-block"]["acceptance_test_cost"]
            )
        if self.has("rollforward"):
            shares["checkpointing"] = (
                shares.get("checkpointing", 0.0) + self.params["rollforward"]["log_cost"]
            )
        if self.has("forward-error-correction-code"):
            shares["replication"] = (
                shares.get("replication", 0.0)
                + self.params["forward-error-correction-code"]["codec_cost"]
            )
        if self.has("n-version-design"):
            shares["replication"] = (
                shares.get("replication", 0.0) + self.params["n-version-design"]["cost_multiplier"] - 1.0
            )
        self.ff_shares = dict(sorted(shares.items()))
        self.ff_factor = 1.0
        for value in self.ff_shares.values():
            self.ff_factor *= 1.0 + value

        self.t = 0.0
        self.useful = 0.0
        self.work_done = 0.0
        self.ckpt_base = 0.0
        self.degrade = 1.0
        self.poisoned = False
        self.aborted = False
        self.events_handled = 0
        self.buckets = {category: 0.0 for category in OVERHEAD_CATEGORIES}
        self.counters = {name: 0 for name in EVENT_COUNTERS}
        self.pending_detect: float = math.inf

        # nMR replica corruption processes (one substream per replica).
        self.nmr_n = 0
        self.replica_err: list[float] = []
        self.replica_rngs: list[np.random.Generator] = []
        if self.has("n-modular-redundancy"):
            self.nmr_n = int(self.params["n-modular-redundancy"]["N"])
            self.replica_rngs = [
                np.random.default_rng(np.random.SeedSequence([cfg.seed, index, 1, replica]))
                for replica in range(self.nmr_n)
            ]
            self.replica_err = [
                self._next_replica_error(replica, 0.0) for replica in range(self.nmr_n)
            ]

        # Main fault stream is replaced by the per-replica processes when
        # the solution replicates the whole system.
        if self.nmr_n or not math.isfinite(self.mtbe):
            self.next_fault = math.inf
        else:
            self.next_fault = _interarrival(self.rng, self.system, self.mtbe)

        self.next_fp = math.inf
        if self.has("prediction") and math.isfinite(self.mtbe):
            fpr = self.params["prediction"]["false_positive_rate"]
            if fpr > 0:
                self.next_fp = float(self.rng.exponential(self.mtbe / fpr))

        self.next_rejuv = math.inf
        if self.has("rejuvenation"):
            self.next_rejuv = self.params["rejuvenation"]["period"]

        # Vote cadence: checkpoint boundaries when rollback is co-present,
        # else a fixed wall interval of a tenth of the mean event gap.
        self.vote_at_checkpoints = self.nmr_n > 0 and self.has("rollback")
        self.next_vote = math.inf
        self.vote_interval = math.inf
        if self.nmr_n and not self.vote_at_checkpoints and math.isfinite(self.mtbe):
            self.vote_interval = self.mtbe / 10.0
            self.next_vote = self.vote_interval

    # -- RNG streams -------------------------------------------------------

    def _next_replica_error(self, replica: int, start: float) -> float:
        """Next activated error on a replica after `start` (activation-thinned)."""
        p_act = self.system.p_activation
        if p_act <= 0 or not math.isfinite(self.mtbe):
            return math.inf
        rng = self.replica_rngs[replica]
        t = start
        while True:
            t += _interarrival(rng, self.system, self.mtbe)
            if rng.random() < p_act:
                return t

    # -- accounting --------------------------------------------------------

    def _advance(self, dt: float, category: str) -> None:
        if dt < 0:
            raise SimulationError("time cannot move backward")
        self.t += dt
        self.buckets[category] += dt

    def _advance_work(self, useful: float, wall: float) -> None:
        self.t += wall
        self.useful += useful
        self.work_done += useful
        ff_part = useful * self.ff_factor - useful
        remaining = ff_part
        names = list(self.ff_shares)
        total_share = sum(self.ff_shares.values())
        for i, name in enumerate(names):
            if i == len(names) - 1:
                part = remaining
            else:
                part = ff_part * (self.ff_shares[name] / total_share)
                remaining -= part
            self.buckets[name] += part
        degr = wall - useful * self.ff_factor
        if degr:
            self.buckets["lost_work"] += degr

    def _discard_work(self, amount: float) -> None:
        self.useful -= amount
        self.buckets["lost_work"] += amount

    def _record(self, kind: str, node: int, detail: str) -> None:
        if self.trace is not None:
            self.trace.append(TraceEvent(self.t, kind, node, detail))

    def _budget(self) -> None:
        self.events_handled += 1
        if self.events_handled > self.cfg.event_budget:
            raise _BudgetExhausted()

    # -- event handling ----------------------------------------------------

    def _dispatch_recovery(self, event: FaultModelClass) -> bool:
        for pid in _RECOVERY_PRECEDENCE:
            if not self.has(pid) or event not in self.handles[pid]:
                continue
            p = self.params[pid]
            if pid == "rollback":
                lost = self.work_done - self.ckpt_base
                self.work_done = self.ckpt_base
                self._discard_work(lost)
                self._advance(p["restart_cost"], "recovery")
                self._record("Recover", 0, f"rollback to {self.ckpt_base:.3f} s of work")
            elif pid == "rollforward":
                self._advance(p["replay_cost"], "recovery")
                self._record("Recover", 0, "rollforward replay")
            elif pid == "rejuvenation":
                self._advance(p["cost"], "rejuvenation")
                if self.nmr_n:
                    self._reset_replicas()
                self._record("Recover", 0, "rejuvenation restore")
            elif pid == "restructure":
                self._advance(p["cost"], "recovery")
                self.degrade = max(self.degrade * p["degraded_capacity"], _DEGRADE_FLOOR)
                self._record("Recover", 0, f"restructure, capacity now {self.degrade:.3f}")
            elif pid == "reinitialization":
                lost = self.work_done
                self.work_done = 0.0
                self.ckpt_base = 0.0
                self._discard_work(lost)
                self._advance(p["cost"], "recovery")
                self._record("Recover", 0, "reinitialization from pristine state")
            self.counters["recovered"] += 1
            self.pending_detect = math.inf
            return True
        return False

    def _restart_from_scratch(self) -> None:
        self.counters["unrecovered_failures"] += 1
        self._discard_work(self.useful)
        self.useful = 0.0
        self.work_done = 0.0
        self.ckpt_base = 0.0
        self.degrade = 1.0
        self.poisoned = False
        self.pending_detect = math.inf
        if self.nmr_n:
            self._reset_replicas()

    def _handle_failure(self, node: int) -> None:
        self.counters["failures"] += 1
        self._record("Failure", node, "error reached the service interface")
        if not self._dispatch_recovery(FaultModelClass.FAILURE):
            self._restart_from_scratch()

    def _handle_error(self, node: int) -> None:
        self.counters["activated_errors"] += 1
        self._record("Error", node, "fault activated")
        # Masking first: coded state, then adjudicated blocks.
        if self.has("forward-error-correction-code"):
            p = self.params["forward-error-correction-code"]
            # The code needs a scoped protection domain; a stateless binding
            # leaves nothing encoded. One event corrupts one symbol, so the
            # hit is correctable whenever the code corrects >= 1 symbol.
            protected = (
                self.system.checkpoint_state_fraction
                if self.cfg.solution.state_binding != "stateless"
                else 0.0
            )
            hit_protected = self.rng.random() < protected
            if hit_protected and int(p["r"]) // 2 >= 1:
                self.counters["masked"] += 1
                self._record("Detect", node, "coded state corrected in place")
                return
        if self.has("recovery-block"):
            self.counters["masked"] += 1
            self._record("Detect", node, "acceptance test rejected primary; alternate ran")
            return
        # Detection next.
        if self.has("monitoring"):
            if self.pending_detect is math.inf:
                latency = self.params["monitoring"]["detection_latency"]
                self.pending_detect = self.t + latency
            return
        # Silent error: surfaces only as a failure.
        if self.rng.random() < self.system.p_error_to_failure:
            self._handle_failure(node)

    def _handle_fault(self) -> None:
        self._budget()
        node = int(self.rng.integers(self.system.node_count))
        self.counters["injected_faults"] += 1
        self._record("Fault", node, "fault injected")
        if self.has("prediction"):
            p = self.params["prediction"]
            if self.rng.random() < p["accuracy"]:
                self.counters["predicted"] += 1
                self._advance(p["action_cost"], "monitoring")
                self._record("Detect", node, "fault predicted and neutralized")
                return
        if self.rng.random() < self.system.p_activation:
            self._handle_error(node)

    def _handle_detect(self) -> None:
        self._budget()
        self.pending_detect = math.inf
        self.counters["detected"] += 1
        self._record("Detect", 0, "monitoring flagged the error")
        if self._dispatch_recovery(FaultModelClass.ERROR):
            return
        if self.rng.random() < self.system.p_error_to_failure:
            self._handle_failure(0)

    def _reset_replicas(self) -> None:
        for replica in range(self.nmr_n):
            self.replica_err[replica] = self._next_replica_error(replica, self.t)

    def _do_vote(self) -> None:
        self._budget()
        self.counters["votes_held"] += 1
        erroneous = [r for r in range(self.nmr_n) if self.replica_err[r] <= self.t]
        n_err = len(erroneous)
        if n_err:
            self.counters["injected_faults"] += n_err
            self.counters["activated_errors"] += n_err
        if n_err <= majority_masking_capacity(self.nmr_n):
            if n_err:
                self.counters["masked"] += n_err
                for replica in erroneous:
                    self.replica_err[replica] = self._next_replica_error(replica, self.t)
            self._record("Vote", 0, f"majority vote, {n_err} replica(s) corrected")
            return
        self.counters["votes_uncorrected"] += 1
        self._record("Vote", 0, f"vote lost, {n_err} of {self.nmr_n} replicas erroneous")
        self._reset_replicas()
        if not self._dispatch_recovery(FaultModelClass.ERROR):
            self.poisoned = True

    def _do_checkpoint(self) -> None:
        """Spend checkpoint time; interruptible by fault arrivals."""
        remaining = self.params["rollback"]["checkpoint_cost"]
        progress_mark = self.work_done
        while remaining > 0:
            if self.next_fault <= self.t:
                self._handle_fault()
                self.next_fault = self.t + _interarrival(self.rng, self.system, self.mtbe)
                if self.work_done != progress_mark:
                    return  # recovery rolled state back; checkpoint aborted
                continue
            window = self.next_fault - self.t
            if window < remaining:
                self._advance(window, "checkpointing")
                remaining -= window
                self._handle_fault()
                self.next_fault = self.t + _interarrival(self.rng, self.system, self.mtbe)
                if self.work_done != progress_mark:
                    return
            else:
                self._advance(remaining, "checkpointing")
                remaining = 0.0
        self.ckpt_base = self.work_done
        self.counters["checkpoints"] += 1
        self._record("Checkpoint", 0, f"state committed at {self.ckpt_base:.3f} s of work")

    # -- main loop ---------------------------------------------------------

    def run(self) -> _TrialResult:
        try:
            self._run_loop()
        except _BudgetExhausted:
            self.aborted = True
        return _TrialResult(
            useful=self.useful,
            buckets=self.buckets,
            counters=self.counters,
            aborted=self.aborted,
            trace=self.trace,
        )

    def _run_loop(self) -> None:
        target = self.work_target
        has_rollback = self.has("rollback")
        tau = self.params["rollback"]["interval"] if has_rollback else math.inf
        while True:
            if self.work_done >= target - 1e-9:
                if self.nmr_n:
                    self._do_vote()
                    if self.work_done < target - 1e-9:
                        continue  # vote recovery rolled work back
                if self.poisoned:
                    self.counters["failures"] += 1
                    self._record("Failure", 0, "undetected corruption found at completion")
                    self._restart_from_scratch()
                    continue
                self._record("Complete", 0, "workload finished")
                return

            boundary = target
            at_checkpoint = False
            if has_rollback:
                next_ckpt = self.ckpt_base + tau
                if next_ckpt < target - 1e-9:
                    boundary = min(boundary, next_ckpt)
                    at_checkpoint = next_ckpt <= boundary
            useful_needed = boundary - self.work_done
            wall_needed = useful_needed * self.ff_factor / self.degrade
            t_boundary = self.t + wall_needed

            milestones = [
                (t_boundary, 0, "boundary"),
                (self.next_fault, 1, "fault"),
                (self.pending_detect, 2, "detect"),
                (self.next_vote, 3, "vote"),
                (self.next_rejuv, 4, "rejuv"),
                (self.next_fp, 5, "fp"),
            ]
            t_ev, _, kind = min(milestones)

            if kind == "boundary":
                self._advance_work(useful_needed, wall_needed)
                if at_checkpoint and self.work_done < target - 1e-9:
                    if self.vote_at_checkpoints:
                        before = self.work_done
                        self._do_vote()
                        if self.work_done != before:
                            continue  # lost vote recovered via rollback
                    self._do_checkpoint()
                continue

            if t_ev > self.t:
                dt = t_ev - self.t
                useful_done = dt * self.degrade / self.ff_factor
                self._advance_work(useful_done, dt)

            if kind == "fault":
                self._handle_fault()
                self.next_fault = self.t + _interarrival(self.rng, self.system, self.mtbe)
            elif kind == "detect":
                self._handle_detect()
            elif kind == "vote":
                self._do_vote()
                self.next_vote = self.t + self.vote_interval
            elif kind == "rejuv":
                self._budget()
                self.counters["rejuvenations"] += 1
                self._advance(self.params["rejuvenation"]["cost"], "rejuvenation")
                if self.nmr_n:
                    self._reset_replicas()
                self._record("Rejuvenate", 0, "periodic selective restore")
                self.next_rejuv = self.t + self.params["rejuvenation"]["period"]
            elif kind == "fp":
                self._budget()
                self.counters["false_positives"] += 1
                self._advance(self.params["prediction"]["action_cost"], "monitoring")
                self._record("Detect", 0, "false-positive prediction acted on")
                fpr = self.params["prediction"]["false_positive_rate"]
                self.next_fp = self.t + float(self.rng.exponential(self.mtbe / fpr))


class _BudgetExhausted(Exception):
    pass


def _validate_solution(cfg: SimConfig, catalog: Catalog) -> None:
    # An instance-free solution is a valid baseline (bare workload) run.
    binding = catalog.get(cfg.solution.state_binding)
    if binding.pattern_class is not PatternClass.STATE:
        raise SimulationError(f"state binding {cfg.solution.state_binding!r} is not a state pattern")
    seen: set[str] = set()
    for inst in cfg.solution.instances:
        pattern = catalog.get(inst.pattern)
        if pattern.pattern_class is not PatternClass.STRUCTURAL:
            raise SimulationError(f"instance {inst.pattern!r} is not a structural pattern")
        if inst.pattern not in SUPPORTED_PATTERNS:
            raise SimulationError(f"no behavioral handler registered for {inst.pattern!r}")
        if inst.pattern in seen:
            raise SimulationError(f"duplicate instance for pattern {inst.pattern!r}")
        seen.add(inst.pattern)
        resolved = catalog.resolve_bindings(pattern, inst.bindings)
        for name, value in resolved.items():
            if not math.isfinite(value):
                raise SimulationError(f"binding {name}={value!r} is not finite")
    if "rollback" in seen:
        inst = next(i for i in cfg.solution.instances if i.pattern == "rollback")
        resolved = catalog.resolve_bindings(catalog.get("rollback"), inst.bindings)
        if resolved["checkpoint_cost"] >= resolved["interval"]:
            raise SimulationError("rollback checkpoint_cost must be below the interval")


def run_simulation(
    cfg: SimConfig, catalog: Catalog | None = None, *, workers: int | None = None
) -> SimReport:
    """Run `cfg.trials` independent replications and aggregate the report.

    Trials are seeded from (seed, trial index); the aggregation order is
    fixed by trial index, so reports are byte-identical for any `workers`.
    """
    catalog = catalog or builtin_catalog()
    _validate_solution(cfg, catalog)

    def one(index: int) -> _TrialResult:
        return _Trial(cfg, catalog, index, collect_trace=cfg.trace and index == 0).run()

    if workers and workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(one, range(cfg.trials)))
    else:
        results = [one(i) for i in range(cfg.trials)]

    makespans = np.array([r.makespan for r in results], dtype=float)
    total_work = cfg.workload.total_work
    efficiency = float(np.mean(total_work / makespans))
    events = {name: sum(r.counters[name] for r in results) for name in EVENT_COUNTERS}
    breakdown = {
        category: float(np.mean([r.buckets[category] for r in results]))
        for category in OVERHEAD_CATEGORIES
    }
    per_trial = None
    if cfg.per_trial:
        per_trial = tuple(
            {
                "makespan": r.makespan,
                "useful": r.useful,
                "overhead_breakdown": dict(r.buckets),
                "events": dict(r.counters),
                "aborted": r.aborted,
            }
            for r in results
        )
    trace = tuple(results[0].trace) if cfg.trace and results[0].trace is not None else None
    return SimReport(
        makespan_mean=float(np.mean(makespans)),
        makespan_p50=float(np.percentile(makespans, 50, method="linear")),
        makespan_p95=float(np.percentile(makespans, 95, method="linear")),
        efficiency_mean=efficiency,
        useful_mean=float(np.mean([r.useful for r in results])),
        events=events,
        overhead_breakdown=breakdown,
        cost=(
            aggregate_cost(catalog, cfg.solution.instances, cfg.system)
            if cfg.solution.instances
            else CostVector()
        ),
        aborted_trials=sum(1 for r in results if r.aborted),
        per_trial=per_trial,
        trace=trace,
    )


@dataclass(frozen=True)
class SweepRow:
    bindings: Mapping[str, float]
    report: SimReport

    def to_dict(self) -> dict[str, Any]:
        return {"bindings": dict(self.bindings), "report": _summary(self.report)}


def _summary(report: SimReport) -> dict[str, Any]:
    return {
        "makespan_mean": report.makespan_mean,
        "makespan_p50": report.makespan_p50,
        "makespan_p95": report.makespan_p95,
        "efficiency_mean": report.efficiency_mean,
        "space_overhead": report.cost.space_overhead,
        "events": dict(report.events),
    }


@dataclass(frozen=True)
class SweepTable:
    parameters: tuple[str, ...]
    rows: tuple[SweepRow, ...]

    def to_dict(self) -> dict[str, Any]:
        return {"parameters": list(self.parameters), "rows": [r.to_dict() for r in self.rows]}

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    def to_csv(self) -> str:
        buf = io.StringIO()
        metric_columns = (
            "makespan_mean",
            "makespan_p50",
            "makespan_p95",
            "efficiency_mean",
            "space_overhead",
        )
        writer = csv.writer(buf, quoting=csv.QUOTE_MINIMAL, lineterminator="\n")
        writer.writerow(list(self.parameters) + list(metric_columns))
        for row in self.rows:
            summary = _summary(row.report)
            writer.writerow(
                [repr(row.bindings[p]) for p in self.parameters]
                + [repr(summary[m]) for m in metric_columns]
            )
        return buf.getvalue()


def _split_grid_key(key: str) -> tuple[str | None, str]:
    if "." in key:
        pattern, _, name = key.partition(".")
        return pattern, name
    return None, key


def sweep(
    cfg: SimConfig,
    grid: Mapping[str, Sequence[float]],
    catalog: Catalog | None = None,
    *,
    workers: int | None = None,
) -> SweepTable:
    """Cartesian-product runs over parameter substitutions.

    Grid keys are parameter names (optionally qualified as
    "pattern.parameter"); each must exist in at least one instance and all
    values must lie in the parameter's domain. Each cell reuses the base
    seed, so cells are paired-seed comparable.
    """
    catalog = catalog or builtin_catalog()
    _validate_solution(cfg, catalog)
    for key, values in grid.items():
        pattern_filter, name = _split_grid_key(key)
        owners = [
            inst
            for inst in cfg.solution.instances
            if (pattern_filter is None or inst.pattern == pattern_filter)
            and catalog.get(inst.pattern).parameter(name) is not None
        ]
        if not owners:
            raise SimulationError(f"no instance carries swept parameter {key!r}")
        for inst in owners:
            spec = catalog.get(inst.pattern).parameter(name)
            assert spec is not None
            for value in values:
                if not spec.domain.contains(float(value)):
                    raise SimulationError(
                        f"grid value {value!r} outside domain of {inst.pattern}.{name}"
                    )

    keys = list(grid)
    rows: list[SweepRow] = []
    value_lists = [list(grid[k]) for k in keys]
    for combo in itertools.product(*value_lists) if keys else [()]:
        assignment = dict(zip(keys, combo))
        instances = []
        for inst in cfg.solution.instances:
            bindings = dict(inst.bindings)
            for key, value in assignment.items():
                pattern_filter, name = _split_grid_key(key)
                if pattern_filter is not None and inst.pattern != pattern_filter:
                    continue
                if catalog.get(inst.pattern).parameter(name) is not None:
                    bindings[name] = float(value)
            instances.append(PatternInstance(inst.pattern, bindings))
        cell_cfg = SimConfig(
            system=cfg.system,
            workload=cfg.workload,
            solution=SimSolution(cfg.solution.state_binding, tuple(instances)),
            seed=cfg.seed,
            trials=cfg.trials,
            trace=False,
            event_budget=cfg.event_budget,
            per_trial=False,
        )
        rows.append(SweepRow(bindings=assignment, report=run_simulation(cell_cfg, catalog, workers=workers)))
    return SweepTable(parameters=tuple(keys), rows=tuple(rows))


@dataclass(frozen=True)
class AnalyticEstimate:
    expected_makespan: float
    optimal_interval: float | None
    checkpointing_unnecessary: bool
    fault_free_makespan: float

    def to_dict(self) -> dict[str, Any]:
        return {
            "expected_makespan": self.expected_makespan,
            "optimal_interval": self.optimal_interval,
            "checkpointing_unnecessary": self.checkpointing_unnecessary,
            "fault_free_makespan": self.fault_free_makespan,
        }


def analytic_checkpoint_model(
    system: SystemModel,
    inst: PatternInstance,
    workload: Workload,
    catalog: Catalog | None = None,
) -> AnalyticEstimate:
    """First-order closed-form cross-check for the rollback pattern.

    Expected makespan W * (1 + d/t) * (1 + (t/2 + R)/M) and optimal
    interval sqrt(2*d*M); a coarse approximation valid for d << t << M
    with exponential interarrivals.
    """
    catalog = catalog or builtin_catalog()
    if inst.pattern != "rollback":
        raise SimulationError("the analytic model covers the rollback pattern")
    if system.interarrival_model is not InterarrivalModel.EXPONENTIAL:
        raise SimulationError("the analytic model assumes exponential interarrivals")
    p = catalog.resolve_bindings(catalog.get("rollback"), inst.bindings)
    tau, delta, restart = p["interval"], p["checkpoint_cost"], p["restart_cost"]
    if delta >= tau:
        raise SimulationError("analytic model requires checkpoint_cost < interval")
    work = workload.total_work / workload.parallel_efficiency
    fault_free = work * (1.0 + delta / tau)
    mtbe = system.mean_time_between_events
    if not math.isfinite(mtbe):
        return AnalyticEstimate(
            expected_makespan=fault_free,
            optimal_interval=None,
            checkpointing_unnecessary=True,
            fault_free_makespan=fault_free,
        )
    expected = fault_free * (1.0 + (tau / 2.0 + restart) / mtbe)
    return AnalyticEstimate(
        expected_makespan=expected,
        optimal_interval=math.sqrt(2.0 * delta * mtbe),
        checkpointing_unnecessary=False,
        fault_free_makespan=fault_free,
    )

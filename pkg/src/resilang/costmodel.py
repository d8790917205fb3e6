"""Cost accounting for resilience solutions.

Five overhead axes per pattern instance, closed-form per-instance cost
formulas, multiplicative/additive aggregation across a candidate, and
weighted scalar scoring (lower is better).
"""
from __future__ import annotations

import math
from dataclasses import dataclass, fields
from typing import TYPE_CHECKING, Any, Iterable, Mapping

if TYPE_CHECKING:  # avoid runtime cycles; these are duck-typed at call sites
    from .catalog import Catalog
    from .synthesis import PatternInstance
    from .system import SystemModel

# Aggregated design complexity saturates here (5 instances x ordinal 5).
COMPLEXITY_CAP = 25.0

COST_COMPONENTS = (
    "design_complexity",
    "time_overhead_fault_free",
    "time_overhead_per_event",
    "space_overhead",
    "power_overhead",
)


class CostModelError(ValueError):
    """Raised for unknown patterns or out-of-domain parameter bindings."""


@dataclass(frozen=True)
class CostVector:
    """One cost point: ordinal complexity plus four non-negative overheads.

    Time overheads are a fraction of base runtime (fault-free) and seconds
    per event; space and power overheads are fractions of base resources.
    """

    design_complexity: float = 0.0
    time_overhead_fault_free: float = 0.0
    time_overhead_per_event: float = 0.0
    space_overhead: float = 0.0
    power_overhead: float = 0.0

    def __post_init__(self) -> None:
        for f in fields(self):
            v = getattr(self, f.name)
            if not math.isfinite(v) or v < 0:
                raise CostModelError(
                    f"cost component {f.name} must be finite and >= 0, got {v!r}"
                )

    def to_dict(self) -> dict[str, float]:
        return {name: float(getattr(self, name)) for name in COST_COMPONENTS}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "CostVector":
        unknown = set(data) - set(COST_COMPONENTS)
        if unknown:
            raise CostModelError(f"unknown cost components: {sorted(unknown)}")
        return cls(**{k: float(v) for k, v in data.items()})


@dataclass(frozen=True)
class CostWeights:
    """Relative importance of each cost axis; normalized to sum to 1."""

    design_complexity: float = 1.0
    time_overhead_fault_free: float = 1.0
    time_overhead_per_event: float = 1.0
    space_overhead: float = 1.0
    power_overhead: float = 1.0

    def __post_init__(self) -> None:
        total = 0.0
        for f in fields(self):
            v = getattr(self, f.name)
            if not math.isfinite(v) or v < 0:
                raise CostModelError(f"weight {f.name} must be finite and >= 0")
            total += v
        if total <= 0:
            raise CostModelError("at least one weight must be positive")
        for f in fields(self):
            object.__setattr__(self, f.name, getattr(self, f.name) / total)

    def to_dict(self) -> dict[str, float]:
        return {name: float(getattr(self, name)) for name in COST_COMPONENTS}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "CostWeights":
        unknown = set(data) - set(COST_COMPONENTS)
        if unknown:
            raise CostModelError(f"unknown weight components: {sorted(unknown)}")
        return cls(**{k: float(v) for k, v in data.items()})


def majority_masking_capacity(n: int) -> int:
    """Replica errors a majority vote over n replicas can mask: floor((n-1)/2)."""
    if n < 1:
        raise CostModelError("replica count must be >= 1")
    return (n - 1) // 2


def score(v: CostVector, w: CostWeights, per_event_scale: float) -> float:
    """Weighted sum of normalized components; lower is better.

    `per_event_scale` (seconds, typically the system's mean time between
    events) makes the per-event axis dimensionless. Complexity is divided
    by the aggregation cap; fraction axes are used as-is.
    """
    if per_event_scale <= 0:
        raise CostModelError("per_event_scale must be positive")
    per_event = 0.0
    if math.isfinite(per_event_scale):
        per_event = v.time_overhead_per_event / per_event_scale
    return (
        w.design_complexity * (v.design_complexity / COMPLEXITY_CAP)
        + w.time_overhead_fault_free * v.time_overhead_fault_free
        + w.time_overhead_per_event * per_event
        + w.space_overhead * v.space_overhead
        + w.power_overhead * v.power_overhead
    )


def _combine(base: CostVector, **extra: float) -> CostVector:
    merged = base.to_dict()
    for key, value in extra.items():
        merged[key] = merged[key] + value
    return CostVector.from_dict(merged)


def instance_cost(cat: "Catalog", inst: "PatternInstance", sys: "SystemModel") -> CostVector:
    """Static cost of one structural pattern instance on the given system.

    Bindings are validated against the pattern's parameter domains and
    defaults fill unspecified parameters. Power overhead defaults to the
    computed space overhead (replicated hardware draws proportional power)
    on top of the catalog's base cost.
    """
    pattern = cat.patterns.get(inst.pattern)
    if pattern is None:
        raise CostModelError(f"unknown pattern id: {inst.pattern!r}")
    b = cat.resolve_bindings(pattern, inst.bindings)
    pid = pattern.id
    mtbe = sys.mean_time_between_events
    base = _combine(pattern.base_cost, design_complexity=float(pattern.complexity))

    if pid == "rollback":
        # Mean lost work is half an interval; restart adds the fixed cost.
        return _combine(
            base,
            time_overhead_fault_free=b["checkpoint_cost"] / b["interval"],
            time_overhead_per_event=b["restart_cost"] + b["interval"] / 2.0,
            space_overhead=sys.checkpoint_state_fraction,
            power_overhead=sys.checkpoint_state_fraction,
        )
    if pid == "rollforward":
        return _combine(
            base,
            time_overhead_fault_free=b["log_cost"],
            time_overhead_per_event=b["replay_cost"],
            space_overhead=sys.checkpoint_state_fraction,
            power_overhead=sys.checkpoint_state_fraction,
        )
    if pid == "n-modular-redundancy":
        extra_replicas = b["N"] - 1.0
        return _combine(
            base,
            space_overhead=extra_replicas,
            power_overhead=extra_replicas,
        )
    if pid == "forward-error-correction-code":
        ratio = b["r"] / b["k"]
        return _combine(
            base,
            time_overhead_fault_free=b["codec_cost"],
            space_overhead=ratio,
            power_overhead=ratio,
        )
    if pid == "monitoring":
        return _combine(
            base,
            time_overhead_fault_free=b["overhead"],
            time_overhead_per_event=b["detection_latency"],
        )
    if pid == "prediction":
        # False positives fire at rate false_positive_rate per mean event
        # gap; real events charge the proactive action when predicted.
        fault_free = 0.0
        if math.isfinite(mtbe) and mtbe > 0:
            fault_free = b["false_positive_rate"] * b["action_cost"] / mtbe
        return _combine(
            base,
            time_overhead_fault_free=fault_free,
            time_overhead_per_event=b["accuracy"] * b["action_cost"],
        )
    if pid == "rejuvenation":
        return _combine(
            base,
            time_overhead_fault_free=b["cost"] / b["period"],
            time_overhead_per_event=b["cost"],
        )
    if pid == "reinitialization":
        # Full recompute on top of the reset cost; the mean event gap is a
        # static proxy for the forward progress thrown away per event.
        lost = mtbe if math.isfinite(mtbe) else 0.0
        return _combine(base, time_overhead_per_event=b["cost"] + lost)
    if pid == "restructure":
        return _combine(base, time_overhead_per_event=b["cost"])
    if pid == "n-version-design":
        return _combine(
            base,
            time_overhead_fault_free=b["cost_multiplier"] - 1.0,
            space_overhead=b["versions"] - 1.0,
            power_overhead=b["versions"] - 1.0,
        )
    if pid == "recovery-block":
        return _combine(base, time_overhead_fault_free=b["acceptance_test_cost"])
    # Patterns without a registered formula (user catalog extensions) cost
    # whatever their catalog record declares.
    return base


def aggregate_cost(
    cat: "Catalog", instances: Iterable["PatternInstance"], sys: "SystemModel"
) -> CostVector:
    """Combine instance costs: fractional time and power compose
    multiplicatively, space and per-event seconds add, complexity adds and
    saturates at the scale cap.
    """
    costs = [instance_cost(cat, inst, sys) for inst in instances]
    if not costs:
        raise CostModelError("a solution carries at least one instance")
    if len(costs) == 1:  # identity aggregation, exactly
        return costs[0]
    ff = 1.0
    power = 1.0
    per_event = 0.0
    space = 0.0
    complexity = 0.0
    for c in costs:
        ff *= 1.0 + c.time_overhead_fault_free
        power *= 1.0 + c.power_overhead
        per_event += c.time_overhead_per_event
        space += c.space_overhead
        complexity += c.design_complexity
    return CostVector(
        design_complexity=min(complexity, COMPLEXITY_CAP),
        time_overhead_fault_free=ff - 1.0,
        time_overhead_per_event=per_event,
        space_overhead=space,
        power_overhead=power - 1.0,
    )

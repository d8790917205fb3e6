"""Modeled system and workload the simulator and cost model run against."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Any, Mapping


class SystemModelError(ValueError):
    pass


class InterarrivalModel(enum.Enum):
    EXPONENTIAL = "Exponential"
    WEIBULL = "Weibull"


@dataclass(frozen=True)
class SystemModel:
    """Aggregate fault process plus the state/propagation probabilities.

    `fault_rate_per_node` is events per hour per node; the aggregate mean
    time between events follows from the node count.
    """

    node_count: int = 1
    fault_rate_per_node: float = 0.0
    p_activation: float = 0.5
    p_error_to_failure: float = 0.5
    checkpoint_state_fraction: float = 0.5
    interarrival_model: InterarrivalModel = InterarrivalModel.EXPONENTIAL
    weibull_shape: float | None = None

    def __post_init__(self) -> None:
        if self.node_count < 1:
            raise SystemModelError("node_count must be >= 1")
        if not math.isfinite(self.fault_rate_per_node) or self.fault_rate_per_node < 0:
            raise SystemModelError("fault_rate_per_node must be finite and >= 0")
        for name in ("p_activation", "p_error_to_failure", "checkpoint_state_fraction"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise SystemModelError(f"{name} must lie in [0, 1]")
        if self.interarrival_model is InterarrivalModel.WEIBULL:
            if self.weibull_shape is None or self.weibull_shape <= 0:
                raise SystemModelError("Weibull interarrivals need a positive shape")
        elif self.weibull_shape is not None:
            raise SystemModelError("weibull_shape only applies to Weibull interarrivals")

    @property
    def mean_time_between_events(self) -> float:
        """Aggregate MTBE in seconds; infinite when the fault rate is zero."""
        rate = self.node_count * self.fault_rate_per_node
        if rate == 0:
            return math.inf
        return 3600.0 / rate

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "node_count": self.node_count,
            "fault_rate_per_node": self.fault_rate_per_node,
            "p_activation": self.p_activation,
            "p_error_to_failure": self.p_error_to_failure,
            "checkpoint_state_fraction": self.checkpoint_state_fraction,
            "interarrival_model": self.interarrival_model.value,
        }
        if self.weibull_shape is not None:
            out["weibull_shape"] = self.weibull_shape
        return out

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "SystemModel":
        allowed = {
            "node_count",
            "fault_rate_per_node",
            "p_activation",
            "p_error_to_failure",
            "checkpoint_state_fraction",
            "interarrival_model",
            "weibull_shape",
        }
        unknown = set(data) - allowed
        if unknown:
            raise SystemModelError(f"unknown system fields: {sorted(unknown)}")
        kwargs = dict(data)
        if "interarrival_model" in kwargs:
            raw = kwargs["interarrival_model"]
            try:
                kwargs["interarrival_model"] = InterarrivalModel(raw)
            except ValueError:
                raise SystemModelError(f"unknown interarrival model: {raw!r}") from None
        return cls(**kwargs)


@dataclass(frozen=True)
class Workload:
    """Useful computation to finish, with a parallel-scaling efficiency."""

    total_work: float
    parallel_efficiency: float = 1.0

    def __post_init__(self) -> None:
        if not math.isfinite(self.total_work) or self.total_work <= 0:
            raise SystemModelError("total_work must be finite and > 0")
        if not 0.0 < self.parallel_efficiency <= 1.0:
            raise SystemModelError("parallel_efficiency must lie in (0, 1]")

    def to_dict(self) -> dict[str, Any]:
        return {
            "total_work": self.total_work,
            "parallel_efficiency": self.parallel_efficiency,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "Workload":
        unknown = set(data) - {"total_work", "parallel_efficiency"}
        if unknown:
            raise SystemModelError(f"unknown workload fields: {sorted(unknown)}")
        return cls(**data)


# Default context for static costing when no explicit system is supplied:
# 100 nodes at 0.036 events/hour/node gives a 1000 s aggregate MTBE.
REFERENCE_SYSTEM = SystemModel(
    node_count=100,
    fault_rate_per_node=0.036,
    p_activation=0.5,
    p_error_to_failure=0.5,
    checkpoint_state_fraction=0.5,
)

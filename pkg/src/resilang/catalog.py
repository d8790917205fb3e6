"""Pattern data model and the built-in resilience pattern catalog.

The catalog is the source of truth for the language: 3 strategy, 5
architectural, 11 structural, and 4 state patterns, each carrying its
classification, parentage, fault-model applicability, capabilities,
tunable parameters, and prose description. User catalogs extend or
override the built-ins through a strict JSON document format.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Iterable, Mapping

from .costmodel import CostVector

CATALOG_VERSION = "1.0"

# Parent links that the shipped pattern texts do not declare outright; the
# graph builder flags the corresponding edges as inferred.
INFERRED_PARENT_LINKS = frozenset(
    {("prediction", "fault-diagnosis"), ("rollforward", "checkpoint-recovery")}
)


class CatalogError(Exception):
    pass


class CatalogParseError(CatalogError):
    """Malformed catalog document; carries the line/column when known."""

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        if line is not None:
            message = f"{message} (line {line}, column {column})"
        super().__init__(message)
        self.line = line
        self.column = column


class CatalogSchemaError(CatalogError):
    """Structurally valid JSON that does not obey the catalog schema."""


class PatternClass(enum.Enum):
    STRATEGY = "Strategy"
    ARCHITECTURAL = "Architectural"
    STRUCTURAL = "Structural"
    STATE = "State"


# Behavioral layering, abstract to concrete.
BEHAVIORAL_ORDER = (
    PatternClass.STRATEGY,
    PatternClass.ARCHITECTURAL,
    PatternClass.STRUCTURAL,
)


class FaultModelClass(enum.Enum):
    FAULT = "Fault"
    ERROR = "Error"
    FAILURE = "Failure"


class Capability(enum.Enum):
    DETECTION = "Detection"
    CONTAINMENT = "Containment"
    RECOVERY = "Recovery"
    MASKING = "Masking"


@dataclass(frozen=True)
class Interval:
    """Closed numeric interval; optionally restricted to integers."""

    lo: float
    hi: float
    integer: bool = False

    def __post_init__(self) -> None:
        if not (self.lo <= self.hi):
            raise CatalogSchemaError(f"interval bounds out of order: [{self.lo}, {self.hi}]")

    def contains(self, value: float) -> bool:
        if self.integer and float(value) != int(value):
            return False
        return self.lo <= value <= self.hi

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {"type": "interval", "min": self.lo, "max": self.hi}
        if self.integer:
            out["integer"] = True
        return out


@dataclass(frozen=True)
class Choice:
    """Enumerated set of admissible values."""

    values: tuple[float, ...]

    def __post_init__(self) -> None:
        if not self.values:
            raise CatalogSchemaError("choice domain must not be empty")

    def contains(self, value: float) -> bool:
        return value in self.values

    def to_dict(self) -> dict[str, Any]:
        return {"type": "choice", "values": list(self.values)}


Domain = Interval | Choice


def _domain_from_dict(data: Mapping[str, Any]) -> Domain:
    kind = data.get("type")
    if kind == "interval":
        unknown = set(data) - {"type", "min", "max", "integer"}
        if unknown:
            raise CatalogSchemaError(f"unknown interval fields: {sorted(unknown)}")
        return Interval(
            lo=float(data["min"]), hi=float(data["max"]), integer=bool(data.get("integer", False))
        )
    if kind == "choice":
        unknown = set(data) - {"type", "values"}
        if unknown:
            raise CatalogSchemaError(f"unknown choice fields: {sorted(unknown)}")
        return Choice(values=tuple(float(v) for v in data["values"]))
    raise CatalogSchemaError(f"unknown parameter domain type: {kind!r}")


@dataclass(frozen=True)
class ParameterSpec:
    name: str
    unit: str
    domain: Domain
    default: float

    def __post_init__(self) -> None:
        if not self.domain.contains(self.default):
            raise CatalogSchemaError(
                f"default {self.default!r} for parameter {self.name!r} lies outside its domain"
            )

    def to_dict(self) -> dict[str, Any]:
        return {
            "name": self.name,
            "unit": self.unit,
            "domain": self.domain.to_dict(),
            "default": self.default,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "ParameterSpec":
        unknown = set(data) - {"name", "unit", "domain", "default"}
        if unknown:
            raise CatalogSchemaError(f"unknown parameter fields: {sorted(unknown)}")
        try:
            return cls(
                name=str(data["name"]),
                unit=str(data["unit"]),
                domain=_domain_from_dict(data["domain"]),
                default=float(data["default"]),
            )
        except KeyError as exc:
            raise CatalogSchemaError(f"parameter record missing field {exc.args[0]!r}") from None


PATTERN_FIELDS = (
    "id",
    "name",
    "class",
    "parents",
    "problem",
    "solution",
    "forces",
    "consequences",
    "handles",
    "capabilities",
    "parameters",
    "base_cost",
    "complexity",
)


@dataclass(frozen=True)
class Pattern:
    id: str
    name: str
    pattern_class: PatternClass
    parents: tuple[str, ...]
    problem: str
    solution: str
    forces: str
    consequences: str
    handles: frozenset[FaultModelClass]
    capabilities: frozenset[Capability]
    parameters: tuple[ParameterSpec, ...]
    base_cost: CostVector
    complexity: int

    @property
    def is_behavioral(self) -> bool:
        return self.pattern_class is not PatternClass.STATE

    def parameter(self, name: str) -> ParameterSpec | None:
        for spec in self.parameters:
            if spec.name == name:
                return spec
        return None

    def to_dict(self) -> dict[str, Any]:
        return {
            "id": self.id,
            "name": self.name,
            "class": self.pattern_class.value,
            "parents": list(self.parents),
            "problem": self.problem,
            "solution": self.solution,
            "forces": self.forces,
            "consequences": self.consequences,
            "handles": sorted(h.value for h in self.handles),
            "capabilities": sorted(c.value for c in self.capabilities),
            "parameters": [p.to_dict() for p in self.parameters],
            "base_cost": self.base_cost.to_dict(),
            "complexity": self.complexity,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "Pattern":
        unknown = set(data) - set(PATTERN_FIELDS)
        if unknown:
            raise CatalogSchemaError(f"unknown pattern fields: {sorted(unknown)}")
        missing = set(PATTERN_FIELDS) - set(data)
        if missing:
            raise CatalogSchemaError(f"pattern record missing fields: {sorted(missing)}")
        try:
            pattern_class = PatternClass(data["class"])
        except ValueError:
            raise CatalogSchemaError(f"unknown pattern class: {data['class']!r}") from None
        try:
            handles = frozenset(FaultModelClass(h) for h in data["handles"])
        except ValueError as exc:
            raise CatalogSchemaError(f"unknown fault model class: {exc}") from None
        try:
            capabilities = frozenset(Capability(c) for c in data["capabilities"])
        except ValueError as exc:
            raise CatalogSchemaError(f"unknown capability: {exc}") from None
        complexity = data["complexity"]
        if not isinstance(complexity, int) or not 1 <= complexity <= 5:
            raise CatalogSchemaError(
                f"complexity must be an integer in [1, 5], got {complexity!r}"
            )
        return cls(
            id=str(data["id"]),
            name=str(data["name"]),
            pattern_class=pattern_class,
            parents=tuple(str(p) for p in data["parents"]),
            problem=str(data["problem"]),
            solution=str(data["solution"]),
            forces=str(data["forces"]),
            consequences=str(data["consequences"]),
            handles=handles,
            capabilities=capabilities,
            parameters=tuple(ParameterSpec.from_dict(p) for p in data["parameters"]),
            base_cost=CostVector.from_dict(data["base_cost"]),
            complexity=complexity,
        )


@dataclass(frozen=True)
class Violation:
    code: str
    message: str
    subject: str

    def __str__(self) -> str:  # human diagnostics
        return f"[{self.code}] {self.subject}: {self.message}"


@dataclass(frozen=True)
class Catalog:
    """Immutable id-keyed pattern collection."""

    patterns: Mapping[str, Pattern]
    version: str = CATALOG_VERSION

    def __len__(self) -> int:
        return len(self.patterns)

    def get(self, pattern_id: str) -> Pattern:
        try:
            return self.patterns[pattern_id]
        except KeyError:
            raise CatalogError(f"unknown pattern id: {pattern_id!r}") from None

    def ids(self) -> list[str]:
        return sorted(self.patterns)

    def by_class(self, pattern_class: PatternClass) -> list[Pattern]:
        return sorted(
            (p for p in self.patterns.values() if p.pattern_class is pattern_class),
            key=lambda p: p.id,
        )

    def strategy_roots(self) -> list[Pattern]:
        return self.by_class(PatternClass.STRATEGY)

    def resolve_bindings(
        self, pattern: Pattern, bindings: Mapping[str, float] | None
    ) -> dict[str, float]:
        """Fill defaults and enforce parameter domains for one instance."""
        bindings = dict(bindings or {})
        resolved: dict[str, float] = {}
        for spec in pattern.parameters:
            value = float(bindings.pop(spec.name, spec.default))
            if not spec.domain.contains(value):
                raise CatalogError(
                    f"binding {spec.name}={value!r} outside domain for {pattern.id!r}"
                )
            resolved[spec.name] = value
        if bindings:
            raise CatalogError(
                f"unknown parameters for {pattern.id!r}: {sorted(bindings)}"
            )
        return resolved

    def root_fault_cover(self, pattern_id: str) -> frozenset[FaultModelClass]:
        """Union of handles over the strategy roots reachable by parentage."""
        pattern = self.get(pattern_id)
        seen: set[str] = set()
        cover: set[FaultModelClass] = set()
        stack = [pattern]
        while stack:
            current = stack.pop()
            if current.id in seen:
                continue
            seen.add(current.id)
            if current.pattern_class is PatternClass.STRATEGY:
                cover |= current.handles
            for parent_id in current.parents:
                if parent_id in self.patterns:
                    stack.append(self.patterns[parent_id])
        return frozenset(cover)


def _cost(**kwargs: float) -> dict[str, float]:
    base = {name: 0.0 for name in CostVector().to_dict()}
    base.update(kwargs)
    return base


def _interval(lo: float, hi: float, integer: bool = False) -> dict[str, Any]:
    out: dict[str, Any] = {"type": "interval", "min": lo, "max": hi}
    if integer:
        out["integer"] = True
    return out


def _param(name: str, unit: str, domain: dict[str, Any], default: float) -> dict[str, Any]:
    return {"name": name, "unit": unit, "domain": domain, "default": default}


# Odd replica counts only; bounded to keep the domain enumerable.
_ODD_REPLICAS = {"type": "choice", "values": [float(n) for n in range(3, 100, 2)]}

_BUILTIN_RECORDS: list[dict[str, Any]] = [
    # ---- strategy ----
    {
        "id": "fault-treatment",
        "name": "Fault Treatment",
        "class": "Strategy",
        "parents": [],
        "problem": "Latent defects and anomalies present in a system can activate at any time and escalate into errors or partial or complete failures.",
        "solution": "Watch the health of the system and act on suspect components before a defect activates, so that expensive recovery or compensation is never needed.",
        "forces": "Observation machinery competes with the observed system for resources, and a defect may activate during the window needed to recognize it.",
        "consequences": "Prevents activation when it works, at the price of a standing monitoring apparatus that perturbs normal operation.",
        "handles": ["Fault"],
        "capabilities": ["Detection", "Recovery"],
        "parameters": [],
        "base_cost": _cost(),
        "complexity": 1,
    },
    {
        "id": "recovery",
        "name": "Recovery",
        "class": "Strategy",
        "parents": [],
        "problem": "Errors and partial or complete failures interrupt applications and leave them unable to continue correctly.",
        "solution": "Re-establish a correct earlier operating state by compartmentalizing and preserving state during healthy operation and substituting it after an event.",
        "forces": "Preserving recoverable state costs time and storage even when nothing goes wrong.",
        "consequences": "Events are survived by restoring preserved error-free state; the overhead grows with the amount of state captured and how often snapshots are taken.",
        "handles": ["Error", "Failure"],
        "capabilities": ["Recovery"],
        "parameters": [],
        "base_cost": _cost(),
        "complexity": 1,
    },
    {
        "id": "compensation",
        "name": "Compensation",
        "class": "Strategy",
        "parents": [],
        "problem": "Errors or partial or complete failures corrupt results or halt applications outright.",
        "solution": "Carry enough redundant modules or information that a damaged module can be substituted without stopping the system.",
        "forces": "Redundancy taxes execution time or resources whether or not any event ever occurs.",
        "consequences": "A failed module is replaced by a functionally identical replica; keeping replicas identical and independent carries standing cost.",
        "handles": ["Error", "Failure"],
        "capabilities": ["Detection", "Masking"],
        "parameters": [],
        "base_cost": _cost(),
        "complexity": 1,
    },
    # ---- architectural ----
    {
        "id": "fault-diagnosis",
        "name": "Fault Diagnosis",
        "class": "Architectural",
        "parents": ["fault-treatment"],
        "problem": "Without knowing where a fault sits and what it touches, remedial action is guesswork.",
        "solution": "Pair the system with an observer that analyzes monitored parameters to locate and characterize defects.",
        "forces": "Diagnosis takes time during which the fault may activate, and its accuracy must be high to be useful.",
        "consequences": "Reports the presence and location of defects but takes no corrective action itself.",
        "handles": ["Fault"],
        "capabilities": ["Detection"],
        "parameters": [],
        "base_cost": _cost(),
        "complexity": 2,
    },
    {
        "id": "reconfiguration",
        "name": "Reconfiguration",
        "class": "Architectural",
        "parents": ["fault-treatment", "recovery"],
        "problem": "A fault, error, or failure can leave the current interconnection of components unable to operate correctly.",
        "solution": "Alter the connectivity among well-defined modules so a functionally equivalent subset carries on, preventing activation or recovering from the event.",
        "forces": "The design must encapsulate function into modules whose subsets remain functionally equivalent to the whole.",
        "consequences": "Operation continues on a reorganized module set; correctness rests on that equivalence.",
        "handles": ["Fault", "Error", "Failure"],
        "capabilities": ["Recovery"],
        "parameters": [],
        "base_cost": _cost(),
        "complexity": 3,
    },
    {
        "id": "checkpoint-recovery",
        "name": "Checkpoint Recovery",
        "class": "Architectural",
        "parents": ["recovery"],
        "problem": "An unrecoverable error or failure stops application progress outright.",
        "solution": "Persist partial or complete system state to stable storage during healthy operation, or log nondeterministic events, and reconstruct a known-good state after an event.",
        "forces": "Stable storage and logging consume resources and slow failure-free execution.",
        "consequences": "Saved snapshots or logs recreate the last error-free state before restart; overhead scales with snapshot size and frequency.",
        "handles": ["Error", "Failure"],
        "capabilities": ["Recovery"],
        "parameters": [],
        "base_cost": _cost(),
        "complexity": 3,
    },
    {
        "id": "redundancy",
        "name": "Redundancy",
        "class": "Architectural",
        "parents": ["compensation"],
        "problem": "Physical faults trigger errors and failures that interrupt applications.",
        "solution": "Operate identical copies of a component on the assumption that a random physical event is unlikely to strike replicas identically.",
        "forces": "Replication costs time or space regardless of whether any event occurs.",
        "consequences": "A group of N identical replicas masks events in any one of them, assuming the replicas operate independently.",
        "handles": ["Error", "Failure"],
        "capabilities": ["Masking"],
        "parameters": [],
        "base_cost": _cost(),
        "complexity": 3,
    },
    {
        "id": "design-diversity",
        "name": "Design Diversity",
        "class": "Architectural",
        "parents": ["compensation"],
        "problem": "Mistakes made during design, or defective design tools, make every identical copy malfunction or fail at once.",
        "solution": "Build independently designed implementations of one specification so that a design flaw is unlikely to be shared.",
        "forces": "Distinct implementations multiply designer effort and verification cost.",
        "consequences": "Requires separate teams and tools per version to systematically avoid common design bugs.",
        "handles": ["Error", "Failure"],
        "capabilities": ["Masking"],
        "parameters": [],
        "base_cost": _cost(),
        "complexity": 4,
    },
    # ---- structural ----
    {
        "id": "monitoring",
        "name": "Monitoring",
        "class": "Structural",
        "parents": ["fault-diagnosis"],
        "problem": "Defects and anomalies surface as errors or failures unless they are noticed first.",
        "solution": "Observe system parameters and infer faults by cause-to-effect or effect-to-cause analysis.",
        "forces": "The observer's interactions can perturb the observed system.",
        "consequences": "Standing observation hardware or software adds overhead to normal operation.",
        "handles": ["Fault"],
        "capabilities": ["Detection"],
        "parameters": [
            _param("overhead", "fraction", _interval(0.0, 1.0), 0.02),
            _param("detection_latency", "seconds", _interval(0.0, 3600.0), 5.0),
        ],
        "base_cost": _cost(),
        "complexity": 2,
    },
    {
        "id": "prediction",
        "name": "Prediction",
        "class": "Structural",
        "parents": ["fault-diagnosis"],
        "problem": "Conditions that precede faults can be recognized in time to act before an error or failure occurs.",
        "solution": "Anticipate fault events with association rules or statistical models over observed parameters.",
        "forces": "Prediction must be fast and accurate; false positives trigger wasted action.",
        "consequences": "Adds overhead proportional to model complexity, plus the cost of acting on wrong predictions.",
        "handles": ["Fault"],
        "capabilities": ["Detection"],
        "parameters": [
            _param("accuracy", "fraction", _interval(0.0, 1.0), 0.5),
            _param("false_positive_rate", "fraction", _interval(0.0, 1.0), 0.05),
            _param("action_cost", "seconds", _interval(0.0, 3600.0), 10.0),
        ],
        "base_cost": _cost(),
        "complexity": 3,
    },
    {
        "id": "restructure",
        "name": "Restructure",
        "class": "Structural",
        "parents": ["reconfiguration"],
        "problem": "An event leaves the current arrangement of interconnected subsystems unable to operate correctly.",
        "solution": "Change the interconnection to isolate the affected subsystem and continue with the rest.",
        "forces": "The survivor configuration may run degraded on fewer subsystems.",
        "consequences": "Only the affected subsystem is excluded; guaranteeing the remainder is functionally equivalent is often hard.",
        "handles": ["Fault", "Error", "Failure"],
        "capabilities": ["Recovery"],
        "parameters": [
            _param("cost", "seconds", _interval(0.0, 3600.0), 30.0),
            _param("degraded_capacity", "fraction", _interval(0.05, 1.0), 0.9),
        ],
        "base_cost": _cost(),
        "complexity": 4,
    },
    {
        "id": "rejuvenation",
        "name": "Rejuvenation",
        "class": "Structural",
        "parents": ["reconfiguration"],
        "problem": "An event corrupts part of a subsystem's state and normal operation cannot continue while it persists.",
        "solution": "Identify the affected part and restore or recreate just that state before resuming.",
        "forces": "Pinpointing the affected scope costs substantial analysis and selective reset effort.",
        "consequences": "Recovery touches only the damaged slice of state, but depends on identifying it precisely.",
        "handles": ["Fault", "Error", "Failure"],
        "capabilities": ["Recovery"],
        "parameters": [
            _param("period", "seconds", _interval(1.0, 604800.0), 3600.0),
            _param("cost", "seconds", _interval(0.0, 3600.0), 30.0),
        ],
        "base_cost": _cost(),
        "complexity": 4,
    },
    {
        "id": "reinitialization",
        "name": "Reinitialization",
        "class": "Structural",
        "parents": ["reconfiguration"],
        "problem": "An event damages the system beyond what targeted repair can restore.",
        "solution": "Reset the system to pristine state and resume from the beginning.",
        "forces": "All forward progress is lost, acceptable only when the effects are otherwise unrecoverable.",
        "consequences": "Slow, but removes every effect of the event completely.",
        "handles": ["Fault", "Error", "Failure"],
        "capabilities": ["Recovery"],
        "parameters": [_param("cost", "seconds", _interval(0.0, 86400.0), 60.0)],
        "base_cost": _cost(),
        "complexity": 2,
    },
    {
        "id": "rollback",
        "name": "Rollback",
        "class": "Structural",
        "parents": ["checkpoint-recovery"],
        "problem": "An error or failure halts the forward progress of the running system.",
        "solution": "Capture state periodically, optionally logging nondeterministic events, and on an event restore the most recent stable snapshot.",
        "forces": "Frequent capture slows execution but shrinks the work lost to an event.",
        "consequences": "Failure-free overhead is proportional to snapshot size and frequency; lost work varies inversely with frequency.",
        "handles": ["Error", "Failure"],
        "capabilities": ["Recovery"],
        "parameters": [
            _param("interval", "seconds", _interval(1.0, 86400.0), 100.0),
            _param("checkpoint_cost", "seconds", _interval(0.0, 3600.0), 10.0),
            _param("restart_cost", "seconds", _interval(0.0, 3600.0), 30.0),
        ],
        "base_cost": _cost(),
        "complexity": 3,
    },
    {
        "id": "rollforward",
        "name": "Rollforward",
        "class": "Structural",
        "parents": ["checkpoint-recovery"],
        "problem": "An error or failure interrupts correct operation and redoing old work is too expensive.",
        "solution": "Commit state or logs continuously so execution restarts from the point reached just before the event.",
        "forces": "The post-event state must need minimal recomputation.",
        "consequences": "Per-event handling is usually cheaper than restoring an older snapshot and repeating the work.",
        "handles": ["Error", "Failure"],
        "capabilities": ["Recovery"],
        "parameters": [
            _param("log_cost", "fraction", _interval(0.0, 1.0), 0.05),
            _param("replay_cost", "seconds", _interval(0.0, 3600.0), 15.0),
        ],
        "base_cost": _cost(),
        "complexity": 4,
    },
    {
        "id": "forward-error-correction-code",
        "name": "Forward Error Correction Code",
        "class": "Structural",
        "parents": ["redundancy"],
        "problem": "Corrupted information in stored or transmitted state breaks correct operation.",
        "solution": "Encode k information symbols with r appended check symbols; decoding verifies integrity and repairs corrupted symbols in place.",
        "forces": "Stronger codes cost more encoding and decoding time and space but repair more simultaneous symbol errors.",
        "consequences": "Every access to encoded state pays codec overhead; repairable damage is bounded by the check symbols maintained.",
        "handles": ["Error"],
        "capabilities": ["Masking"],
        "parameters": [
            _param("k", "count", _interval(1, 4096, integer=True), 8),
            _param("r", "count", _interval(1, 1024, integer=True), 2),
            _param("codec_cost", "fraction", _interval(0.0, 1.0), 0.03),
        ],
        "base_cost": _cost(),
        "complexity": 3,
    },
    {
        "id": "n-modular-redundancy",
        "name": "N-Modular Redundancy",
        "class": "Structural",
        "parents": ["redundancy"],
        "problem": "Errors and partial or complete failures must be survived without interrupting service.",
        "solution": "Run a group of N identical replicas of the system, spatially, temporally, or on demand, and adjudicate their outputs by vote.",
        "forces": "N-fold replication is expensive, and the replication boundary with its inputs and outputs must be chosen carefully.",
        "consequences": "Identical replicas keep design effort low while replication consumes resources or time. A common sizing rule of thumb asks for 2N+1 replicas to outvote 2N corrupted outputs; majority adjudication over N replicas masks floor((N-1)/2) simultaneous replica errors.",
        "handles": ["Error", "Failure"],
        "capabilities": ["Detection", "Masking"],
        "parameters": [_param("N", "count", _ODD_REPLICAS, 3)],
        "base_cost": _cost(),
        "complexity": 2,
    },
    {
        "id": "n-version-design",
        "name": "N-Version Design",
        "class": "Structural",
        "parents": ["design-diversity"],
        "problem": "Design bugs shared by all copies of one implementation surface at runtime as errors or failures.",
        "solution": "Execute independently developed versions of the same specification and compare their outputs.",
        "forces": "Versions must come from different teams and tools and be verified independently.",
        "consequences": "Functionally identical yet independently designed versions demand a significant amount of design and implementation effort, especially for complex specifications.",
        "handles": ["Error", "Failure"],
        "capabilities": ["Masking"],
        "parameters": [
            _param("versions", "count", _interval(2, 9, integer=True), 3),
            _param("cost_multiplier", "multiplier", _interval(1.0, 10.0), 1.1),
        ],
        "base_cost": _cost(),
        "complexity": 5,
    },
    {
        "id": "recovery-block",
        "name": "Recovery Block",
        "class": "Structural",
        "parents": ["design-diversity"],
        "problem": "Human design errors or faulty tools yield functional blocks that fail during operation.",
        "solution": "Partition the system into blocks carrying a primary implementation, alternates for exceptional cases, and an adjudicator that accepts or rejects each result.",
        "forces": "The adjudicator must catch design-flaw errors without costing a full second design.",
        "consequences": "Hinges on a comprehensive acceptance test able to vet the primary's results against varied design bugs.",
        "handles": ["Error", "Failure"],
        "capabilities": ["Masking"],
        "parameters": [
            _param("acceptance_test_cost", "fraction", _interval(0.0, 1.0), 0.05),
            _param("alternates", "count", _interval(1, 5, integer=True), 1),
        ],
        "base_cost": _cost(),
        "complexity": 4,
    },
    # ---- state ----
    {
        "id": "persistent-state",
        "name": "Persistent State",
        "class": "State",
        "parents": [],
        "problem": "State computed once at initialization and never modified has protection needs unlike the rest of the system.",
        "solution": "Encapsulate the scope of state that is written at startup and only read thereafter.",
        "forces": "Delimiting truly immutable state demands detailed knowledge of system structure and operation.",
        "consequences": "Behavioral patterns can exploit immutability for cheap detection and repair within this scope.",
        "handles": [],
        "capabilities": ["Containment"],
        "parameters": [],
        "base_cost": _cost(),
        "complexity": 2,
    },
    {
        "id": "dynamic-state",
        "name": "Dynamic State",
        "class": "State",
        "parents": [],
        "problem": "State that changes as the system makes forward progress needs consistency-aware protection.",
        "solution": "Scope the state whose values evolve during operation as the protection domain.",
        "forces": "Precisely bounding mutable state requires complex analysis.",
        "consequences": "Mitigation actions inside this scope can be chosen to keep evolving state consistent.",
        "handles": [],
        "capabilities": ["Containment"],
        "parameters": [],
        "base_cost": _cost(),
        "complexity": 3,
    },
    {
        "id": "environment-state",
        "name": "Environment State",
        "class": "State",
        "parents": [],
        "problem": "The supporting services a system relies on have protection needs distinct from the primary function.",
        "solution": "Scope the state belonging to common support services separately from the primary function.",
        "forces": "Separating service state cleanly requires modular design and well-defined abstractions.",
        "consequences": "Detection and mitigation can be instantiated specifically within the supporting services.",
        "handles": [],
        "capabilities": ["Containment"],
        "parameters": [],
        "base_cost": _cost(),
        "complexity": 2,
    },
    {
        "id": "stateless",
        "name": "Stateless",
        "class": "State",
        "parents": [],
        "problem": "Some resilience behaviors need a well-defined null scope rather than a concrete protection domain.",
        "solution": "Provide an explicit empty protection domain for behaviors that do not need to guard any state.",
        "forces": "With no scoped state, judging the impact of a solution on the system is harder.",
        "consequences": "Behaviors bound to the null scope act without side effects on system state, and no containment boundary is established.",
        "handles": [],
        "capabilities": [],
        "parameters": [],
        "base_cost": _cost(),
        "complexity": 1,
    },
]


@lru_cache(maxsize=1)
def builtin_catalog() -> Catalog:
    """The fixed built-in catalog: 3 + 5 + 11 + 4 = 23 patterns."""
    patterns = {rec["id"]: Pattern.from_dict(rec) for rec in _BUILTIN_RECORDS}
    catalog = Catalog(patterns=patterns, version=CATALOG_VERSION)
    violations = validate_catalog(catalog)
    if violations:  # defensive: shipped data must be valid by construction
        raise CatalogError("built-in catalog invalid: " + "; ".join(map(str, violations)))
    return catalog


def load_catalog(document: str, *, merge_builtin: bool = True) -> Catalog:
    """Parse a catalog document and merge it over the built-ins.

    Merging is last-writer-wins per pattern id. An empty document yields
    the built-in catalog unchanged. Dangling parent ids and malformed
    records raise schema/parse errors.
    """
    base = dict(builtin_catalog().patterns) if merge_builtin else {}
    version = builtin_catalog().version if merge_builtin else CATALOG_VERSION
    text = document.strip()
    if text:
        try:
            doc = json.loads(text)
        except json.JSONDecodeError as exc:
            raise CatalogParseError(exc.msg, exc.lineno, exc.colno) from None
        if not isinstance(doc, dict):
            raise CatalogSchemaError("catalog document must be a JSON object")
        unknown = set(doc) - {"version", "patterns"}
        if unknown:
            raise CatalogSchemaError(f"unknown catalog fields: {sorted(unknown)}")
        if "version" in doc:
            version = str(doc["version"])
        for record in doc.get("patterns", []):
            if not isinstance(record, dict):
                raise CatalogSchemaError("pattern records must be JSON objects")
            pattern = Pattern.from_dict(record)
            base[pattern.id] = pattern
    catalog = Catalog(patterns=base, version=version)
    for pattern in catalog.patterns.values():
        for parent in pattern.parents:
            if parent not in catalog.patterns:
                raise CatalogSchemaError(
                    f"pattern {pattern.id!r} references dangling parent id {parent!r}"
                )
    return catalog


def catalog_to_json(catalog: Catalog) -> str:
    """Canonical catalog document: sorted keys, two-space indent, newline end."""
    doc = {
        "version": catalog.version,
        "patterns": [catalog.patterns[pid].to_dict() for pid in sorted(catalog.patterns)],
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def validate_catalog(catalog: Catalog) -> list[Violation]:
    """All invariant violations in the catalog; empty means valid."""
    violations: list[Violation] = []
    for pid in sorted(catalog.patterns):
        p = catalog.patterns[pid]
        if p.id != pid:
            violations.append(Violation("id-mismatch", "key and record id differ", pid))
        for parent_id in p.parents:
            if parent_id not in catalog.patterns:
                violations.append(
                    Violation("dangling-parent", f"parent {parent_id!r} not in catalog", pid)
                )
        if p.pattern_class is PatternClass.STRATEGY and p.parents:
            violations.append(Violation("strategy-root", "strategy pattern must be a root", pid))
        if p.pattern_class is PatternClass.STATE and p.parents:
            violations.append(Violation("state-root", "state pattern must be a root", pid))
        if p.pattern_class in (PatternClass.ARCHITECTURAL, PatternClass.STRUCTURAL):
            if not p.parents:
                violations.append(
                    Violation(
                        "missing-parent",
                        f"{p.pattern_class.value.lower()} pattern must declare a parent",
                        pid,
                    )
                )
        expected_parent_class = {
            PatternClass.ARCHITECTURAL: PatternClass.STRATEGY,
            PatternClass.STRUCTURAL: PatternClass.ARCHITECTURAL,
        }.get(p.pattern_class)
        if expected_parent_class is not None:
            for parent_id in p.parents:
                parent = catalog.patterns.get(parent_id)
                if parent is not None and parent.pattern_class is not expected_parent_class:
                    violations.append(
                        Violation(
                            "parent-class",
                            f"{p.pattern_class.value.lower()} parent must be "
                            f"{expected_parent_class.value.lower()}, "
                            f"{parent_id!r} is {parent.pattern_class.value.lower()}",
                            pid,
                        )
                    )
        if p.pattern_class is PatternClass.STATE:
            if p.handles:
                violations.append(
                    Violation("state-handles", "state patterns handle no event classes", pid)
                )
            if not p.capabilities <= {Capability.CONTAINMENT}:
                violations.append(
                    Violation(
                        "state-capabilities",
                        "state pattern capabilities are limited to containment",
                        pid,
                    )
                )
        elif p.parents:
            inherited: set[FaultModelClass] = set()
            for parent_id in p.parents:
                parent = catalog.patterns.get(parent_id)
                if parent is not None:
                    inherited |= parent.handles
            if not p.handles <= inherited:
                extra = sorted(h.value for h in p.handles - inherited)
                violations.append(
                    Violation(
                        "handles-inheritance",
                        f"handles {extra} not covered by any parent",
                        pid,
                    )
                )
    return violations

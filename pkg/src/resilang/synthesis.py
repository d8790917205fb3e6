"""Solution synthesis: derive ranked pattern-language sequences from a query.

A candidate solution binds one state pattern (the protection domain) to a
minimal set of structural pattern instances that jointly cover every
requested (fault model, capability) demand, is free of conflicts, and is
scored by the weighted cost model. All four query entry modes explore the
same candidate space; the mode shapes the narrative, not the result set.
"""
from __future__ import annotations

import enum
import itertools
import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping, Sequence

from .catalog import Capability, Catalog, FaultModelClass, Pattern, PatternClass
from .costmodel import CostVector, CostWeights, aggregate_cost, score
from .graph import PatternGraph, RelationKind, ancestry, neighbors
from .system import REFERENCE_SYSTEM, SystemModel

ANY_DOMAIN = "any"

# A detection + recovery + masking triple exhausts the behavioral axes;
# larger combinations only duplicate coverage.
MAX_INSTANCES = 3


class SynthesisError(Exception):
    pass


class UnsatisfiableQueryError(SynthesisError):
    """No conflict-free pattern combination can satisfy the query."""

    def __init__(self, explanation: str):
        super().__init__(explanation)
        self.explanation = explanation


class EntryMode(enum.Enum):
    DOMAIN_FIRST = "DomainFirst"
    FAULT_MODEL_FIRST = "FaultModelFirst"
    CAPABILITY_FIRST = "CapabilityFirst"
    IMPLEMENTATION_FIRST = "ImplementationFirst"


@dataclass(frozen=True)
class PatternInstance:
    """A structural pattern with concrete parameter bindings."""

    pattern: str
    bindings: Mapping[str, float] = field(default_factory=dict)

    def to_dict(self) -> dict[str, Any]:
        return {"pattern": self.pattern, "bindings": dict(sorted(self.bindings.items()))}

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "PatternInstance":
        unknown = set(data) - {"pattern", "bindings"}
        if unknown:
            raise SynthesisError(f"unknown instance fields: {sorted(unknown)}")
        return cls(
            pattern=str(data["pattern"]),
            bindings={str(k): float(v) for k, v in data.get("bindings", {}).items()},
        )


@dataclass(frozen=True)
class DesignQuery:
    fault_models: frozenset[FaultModelClass]
    capabilities: frozenset[Capability]
    domain: str = ANY_DOMAIN
    entry_mode: EntryMode = EntryMode.DOMAIN_FIRST
    seed_patterns: frozenset[str] = frozenset()
    exclude: frozenset[str] = frozenset()
    weights: CostWeights = CostWeights()
    max_candidates: int = 50

    def __post_init__(self) -> None:
        if not self.fault_models:
            raise SynthesisError("query requires at least one fault model class")
        if not self.capabilities:
            raise SynthesisError("query requires at least one capability")
        if self.max_candidates < 1:
            raise SynthesisError("max_candidates must be positive")
        if self.entry_mode is EntryMode.IMPLEMENTATION_FIRST and not self.seed_patterns:
            raise SynthesisError("implementation-first queries require seed patterns")

    def to_dict(self) -> dict[str, Any]:
        return {
            "fault_models": sorted(f.value for f in self.fault_models),
            "capabilities": sorted(c.value for c in self.capabilities),
            "domain": self.domain,
            "entry_mode": self.entry_mode.value,
            "seed_patterns": sorted(self.seed_patterns),
            "exclude": sorted(self.exclude),
            "weights": self.weights.to_dict(),
            "max_candidates": self.max_candidates,
        }

    @classmethod
    def from_dict(cls, data: Mapping[str, Any]) -> "DesignQuery":
        known = {
            "fault_models",
            "capabilities",
            "domain",
            "entry_mode",
            "seed_patterns",
            "exclude",
            "weights",
            "max_candidates",
        }
        unknown = set(data) - known
        if unknown:
            raise SynthesisError(f"unknown query fields: {sorted(unknown)}")
        try:
            fault_models = frozenset(FaultModelClass(f) for f in data["fault_models"])
            capabilities = frozenset(Capability(c) for c in data["capabilities"])
        except (KeyError, ValueError) as exc:
            raise SynthesisError(f"bad query enums: {exc}") from None
        kwargs: dict[str, Any] = {
            "fault_models": fault_models,
            "capabilities": capabilities,
        }
        if "domain" in data:
            kwargs["domain"] = str(data["domain"])
        if "entry_mode" in data:
            try:
                kwargs["entry_mode"] = EntryMode(data["entry_mode"])
            except ValueError:
                raise SynthesisError(f"unknown entry mode: {data['entry_mode']!r}") from None
        if "seed_patterns" in data:
            kwargs["seed_patterns"] = frozenset(str(p) for p in data["seed_patterns"])
        if "exclude" in data:
            kwargs["exclude"] = frozenset(str(p) for p in data["exclude"])
        if "weights" in data:
            kwargs["weights"] = CostWeights.from_dict(data["weights"])
        if "max_candidates" in data:
            kwargs["max_candidates"] = int(data["max_candidates"])
        return cls(**kwargs)


@dataclass(frozen=True)
class SolutionCandidate:
    state_binding: str
    instances: tuple[PatternInstance, ...]
    chains: tuple[tuple[str, ...], ...]
    covered_capabilities: frozenset[Capability]
    covered_fault_models: frozenset[FaultModelClass]
    cost: CostVector
    score: float
    sequence: tuple[str, ...]

    def instance_ids(self) -> frozenset[str]:
        return frozenset(inst.pattern for inst in self.instances)

    def to_dict(self) -> dict[str, Any]:
        return {
            "state_binding": self.state_binding,
            "instances": [inst.to_dict() for inst in self.instances],
            "chains": [list(chain) for chain in self.chains],
            "covered_capabilities": sorted(c.value for c in self.covered_capabilities),
            "covered_fault_models": sorted(f.value for f in self.covered_fault_models),
            "cost": self.cost.to_dict(),
            "score": self.score,
            "sequence": list(self.sequence),
        }


@dataclass(frozen=True)
class CompatibilityReport:
    ok: bool
    conflicts: tuple[tuple[str, str], ...]
    capability_gaps: tuple[str, ...]
    fault_model_gaps: tuple[str, ...]

    def to_dict(self) -> dict[str, Any]:
        return {
            "ok": self.ok,
            "conflicts": [list(pair) for pair in self.conflicts],
            "capability_gaps": list(self.capability_gaps),
            "fault_model_gaps": list(self.fault_model_gaps),
        }


def candidates_to_json(candidates: Sequence[SolutionCandidate]) -> str:
    """Canonical JSON array for a ranked candidate list."""
    return json.dumps([c.to_dict() for c in candidates], sort_keys=True, indent=2) + "\n"


def _conflict_pairs(graph: PatternGraph) -> set[tuple[str, str]]:
    return {e.pair for e in graph.edges if e.kind is RelationKind.CONFLICT}


def _used_with_pairs(graph: PatternGraph) -> set[tuple[str, str]]:
    return {e.pair for e in graph.edges if e.kind is RelationKind.USED_WITH}


def _covers_pair(
    catalog: Catalog, sid: str, fault: FaultModelClass, capability: Capability
) -> bool:
    pattern = catalog.get(sid)
    return capability in pattern.capabilities and fault in catalog.root_fault_cover(sid)


def _coverage_ok(
    catalog: Catalog,
    members: Iterable[str],
    state_binding: str,
    query: DesignQuery,
) -> bool:
    members = list(members)
    binding = catalog.get(state_binding)
    if Capability.CONTAINMENT in query.capabilities:
        if Capability.CONTAINMENT not in binding.capabilities:
            return False
    behavioral_caps = query.capabilities - {Capability.CONTAINMENT}
    for fault in query.fault_models:
        if not any(fault in catalog.root_fault_cover(sid) for sid in members):
            return False
        for capability in behavioral_caps:
            if not any(_covers_pair(catalog, sid, fault, capability) for sid in members):
                return False
    return True


def _sequence_for(
    graph: PatternGraph, state_binding: str, instance_ids: Sequence[str]
) -> tuple[tuple[str, ...], tuple[tuple[str, ...], ...]]:
    """Abstract-to-concrete application order plus the per-instance chains."""
    chains: list[tuple[str, ...]] = []
    for sid in sorted(instance_ids):
        for chain in ancestry(graph, sid):
            chains.append(tuple(chain))
    sequence: list[str] = [state_binding]
    for chain in sorted(chains):
        for pid in reversed(chain):  # chains are concrete-first
            if pid not in sequence:
                sequence.append(pid)
    return tuple(sequence), tuple(sorted(chains))


def synthesize(
    graph: PatternGraph,
    catalog: Catalog,
    query: DesignQuery,
    system: SystemModel = REFERENCE_SYSTEM,
) -> list[SolutionCandidate]:
    """Ranked, minimal, conflict-free solutions for the query.

    Exhaustive over all (state binding, structural subset) combinations up
    to the instance cap, sorted ascending by score with lexicographic
    sequence tie-breaks. Raises UnsatisfiableQueryError with a nearest-miss
    explanation when the space is empty.
    """
    for pid in itertools.chain(query.seed_patterns, query.exclude):
        catalog.get(pid)  # raises on unknown ids
    if query.domain != ANY_DOMAIN:
        if catalog.get(query.domain).pattern_class is not PatternClass.STATE:
            raise SynthesisError(f"domain {query.domain!r} is not a state pattern")

    overlap = query.seed_patterns & query.exclude
    if overlap:
        raise UnsatisfiableQueryError(
            f"seed patterns {sorted(overlap)} are also excluded"
        )
    for sid in query.seed_patterns:
        if catalog.get(sid).pattern_class is not PatternClass.STRUCTURAL:
            raise SynthesisError(f"seed pattern {sid!r} is not structural")

    conflicts = _conflict_pairs(graph)
    used_with = _used_with_pairs(graph)

    seeds = tuple(sorted(query.seed_patterns))
    for a, b in itertools.combinations(seeds, 2):
        if tuple(sorted((a, b))) in conflicts:
            raise UnsatisfiableQueryError(
                f"required patterns {a!r} and {b!r} carry a declared conflict edge"
            )

    pool = [
        p.id
        for p in catalog.by_class(PatternClass.STRUCTURAL)
        if p.id not in query.exclude
    ]
    state_pool = [
        p.id
        for p in catalog.by_class(PatternClass.STATE)
        if p.id not in query.exclude and (query.domain == ANY_DOMAIN or p.id == query.domain)
    ]
    if Capability.CONTAINMENT in query.capabilities:
        state_pool = [
            sid
            for sid in state_pool
            if Capability.CONTAINMENT in catalog.get(sid).capabilities
        ]

    misses: list[str] = []
    if not state_pool:
        misses.append(
            "no admissible state binding"
            + (
                " provides a containment scope"
                if Capability.CONTAINMENT in query.capabilities
                else ""
            )
        )
    behavioral_caps = sorted(
        query.capabilities - {Capability.CONTAINMENT}, key=lambda c: c.value
    )
    for fault in sorted(query.fault_models, key=lambda f: f.value):
        if not any(fault in catalog.root_fault_cover(sid) for sid in pool):
            misses.append(f"no structural pattern reaches a strategy handling {fault.value}")
            continue
        for capability in behavioral_caps:
            if not any(_covers_pair(catalog, sid, fault, capability) for sid in pool):
                misses.append(
                    f"no structural pattern offers {capability.value} for {fault.value} events"
                )
    if misses:
        raise UnsatisfiableQueryError("; ".join(misses))

    max_size = max(MAX_INSTANCES, len(seeds))
    extras_pool = [sid for sid in pool if sid not in query.seed_patterns]
    candidates: list[SolutionCandidate] = []
    seen: set[tuple[str, frozenset[str]]] = set()
    for extra_count in range(0, max_size - len(seeds) + 1):
        for extras in itertools.combinations(extras_pool, extra_count):
            members = tuple(sorted(seeds + extras))
            if not members:
                continue
            if any(
                tuple(sorted(pair)) in conflicts
                for pair in itertools.combinations(members, 2)
            ):
                continue
            composable = all(
                tuple(sorted(pair)) in used_with
                or not (
                    catalog.get(pair[0]).capabilities & catalog.get(pair[1]).capabilities
                )
                for pair in itertools.combinations(members, 2)
            )
            if not composable:
                continue
            for binding in state_pool:
                if any(tuple(sorted((binding, sid))) in conflicts for sid in members):
                    continue
                if not _coverage_ok(catalog, members, binding, query):
                    continue
                removable = [
                    sid
                    for sid in members
                    if sid not in query.seed_patterns
                    and _coverage_ok(
                        catalog, [m for m in members if m != sid], binding, query
                    )
                ]
                if removable:
                    continue  # not minimal
                key = (binding, frozenset(members))
                if key in seen:
                    continue
                seen.add(key)
                candidates.append(
                    _build_candidate(graph, catalog, query, system, binding, members)
                )

    if not candidates:
        raise UnsatisfiableQueryError(
            "constraints admit no conflict-free covering combination "
            f"(fault models {sorted(f.value for f in query.fault_models)}, "
            f"capabilities {sorted(c.value for c in query.capabilities)})"
        )
    candidates.sort(key=lambda c: (c.score, c.sequence))
    return candidates[: query.max_candidates]


def _build_candidate(
    graph: PatternGraph,
    catalog: Catalog,
    query: DesignQuery,
    system: SystemModel,
    binding: str,
    members: Sequence[str],
) -> SolutionCandidate:
    instances = tuple(
        PatternInstance(sid, catalog.resolve_bindings(catalog.get(sid), None))
        for sid in sorted(members)
    )
    sequence, chains = _sequence_for(graph, binding, members)
    covered_fm: set[FaultModelClass] = set()
    covered_caps: set[Capability] = set(catalog.get(binding).capabilities)
    for sid in members:
        covered_fm |= catalog.root_fault_cover(sid)
        covered_caps |= catalog.get(sid).capabilities
    cost = aggregate_cost(catalog, instances, system)
    return SolutionCandidate(
        state_binding=binding,
        instances=instances,
        chains=chains,
        covered_capabilities=frozenset(covered_caps),
        covered_fault_models=frozenset(covered_fm),
        cost=cost,
        score=score(cost, query.weights, system.mean_time_between_events),
        sequence=sequence,
    )


def check_compatibility(
    graph: PatternGraph,
    candidate: SolutionCandidate,
    query: DesignQuery | None = None,
) -> CompatibilityReport:
    """Conflict-edge violations and coverage gaps for a candidate."""
    members = sorted(candidate.instance_ids() | {candidate.state_binding})
    for pid in members:
        if pid not in graph.vertices:
            raise SynthesisError(f"unknown pattern id: {pid!r}")
    conflict_pairs = _conflict_pairs(graph)
    conflicts = tuple(
        pair
        for pair in itertools.combinations(members, 2)
        if tuple(sorted(pair)) in conflict_pairs
    )
    capability_gaps: tuple[str, ...] = ()
    fault_model_gaps: tuple[str, ...] = ()
    if query is not None:
        capability_gaps = tuple(
            sorted(
                c.value
                for c in query.capabilities - candidate.covered_capabilities
            )
        )
        fault_model_gaps = tuple(
            sorted(
                f.value
                for f in query.fault_models - candidate.covered_fault_models
            )
        )
    ok = not conflicts and not capability_gaps and not fault_model_gaps
    return CompatibilityReport(
        ok=ok,
        conflicts=conflicts,
        capability_gaps=capability_gaps,
        fault_model_gaps=fault_model_gaps,
    )


def explain(graph: PatternGraph, candidate: SolutionCandidate) -> str:
    """Deterministic narrative for a candidate: binding rationale, chains
    abstract to concrete, composition edges, and the cost summary."""
    lines: list[str] = []
    if candidate.state_binding == "stateless":
        lines.append(
            "Protection domain: stateless binding; no protection domain is scoped, "
            "so behaviors act without state side effects."
        )
    else:
        lines.append(
            f"Protection domain: {candidate.state_binding} scopes the protected state "
            "and sets the containment boundary."
        )
    for chain in candidate.chains:
        hops = list(reversed(chain))  # abstract to concrete
        rendered = hops[0]
        for nxt in hops[1:]:
            rendered += f" —specialization→ {nxt}"
        lines.append(f"Derivation: {rendered}.")
    members = sorted(candidate.instance_ids())
    used_with = _used_with_pairs(graph)
    for a, b in itertools.combinations(members, 2):
        if tuple(sorted((a, b))) in used_with:
            lines.append(f"Composition: {a} and {b} are declared used-with partners.")
    conflict_pairs = _conflict_pairs(graph)
    checked = [
        f"{a}/{b}"
        for a, b in itertools.combinations(sorted(set(members) | {candidate.state_binding}), 2)
    ]
    conflicted = [
        pair
        for pair in itertools.combinations(sorted(set(members) | {candidate.state_binding}), 2)
        if tuple(sorted(pair)) in conflict_pairs
    ]
    if conflicted:
        lines.append(
            "Conflicts found: " + ", ".join(f"{a} vs {b}" for a, b in conflicted) + "."
        )
    else:
        lines.append(f"Conflict check: {len(checked)} pattern pairs examined, none conflict.")
    c = candidate.cost
    lines.append(
        "Cost: complexity {:.0f}, fault-free overhead {:.4f}, per-event {:.2f} s, "
        "space {:.4f}, power {:.4f}; score {:.6f}.".format(
            c.design_complexity,
            c.time_overhead_fault_free,
            c.time_overhead_per_event,
            c.space_overhead,
            c.power_overhead,
            candidate.score,
        )
    )
    return "\n".join(lines)


def mode_narrative(query: DesignQuery) -> str:
    """Entry-mode specific framing used by the CLI, service, and UI."""
    fm = ", ".join(sorted(f.value for f in query.fault_models))
    caps = ", ".join(sorted(c.value for c in query.capabilities))
    if query.entry_mode is EntryMode.DOMAIN_FIRST:
        start = (
            f"Traversal starts at the state patterns (domain: {query.domain}) and walks "
            "outward to behavioral patterns."
        )
    elif query.entry_mode is EntryMode.FAULT_MODEL_FIRST:
        start = (
            f"Traversal starts at the strategy roots handling {fm} and descends to "
            "derivative patterns."
        )
    elif query.entry_mode is EntryMode.CAPABILITY_FIRST:
        start = f"Traversal starts in the clusters offering {caps} semantics."
    else:
        seeds = ", ".join(sorted(query.seed_patterns))
        start = (
            f"Traversal starts from the structural seeds ({seeds}) and walks abstraction "
            "links toward strategies and state patterns."
        )
    return f"{start} Requested fault models: {fm}. Requested capabilities: {caps}."

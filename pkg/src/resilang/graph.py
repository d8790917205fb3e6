"""The pattern-language graph: one vertex per pattern, typed relation edges.

Specialization/abstraction edges are synthesized from catalog parentage
(with inverse closure), symmetric relations are stored once per unordered
pair, and protection-domain edges connect state patterns to strategy
roots. Exports (DOT and JSON) are byte-deterministic.
"""
from __future__ import annotations

import enum
import json
from dataclasses import dataclass, field
from typing import Any, Iterable, Mapping

from .catalog import (
    Catalog,
    CatalogError,
    INFERRED_PARENT_LINKS,
    PatternClass,
    Violation,
    validate_catalog,
)


class GraphError(Exception):
    pass


class RelationKind(enum.Enum):
    ABSTRACTION = "Abstraction"
    SPECIALIZATION = "Specialization"
    USED_WITH = "UsedWith"
    CONFLICT = "Conflict"
    SIMILARITY = "Similarity"
    DOMAIN = "Domain"


SYMMETRIC_KINDS = frozenset(
    {RelationKind.USED_WITH, RelationKind.CONFLICT, RelationKind.SIMILARITY}
)

# Overlays may only contribute these kinds; the specialization hierarchy
# always comes from catalog parentage.
OVERLAY_KINDS = frozenset(
    {RelationKind.USED_WITH, RelationKind.CONFLICT, RelationKind.SIMILARITY, RelationKind.DOMAIN}
)


class EdgeOrigin(enum.Enum):
    PAPER_DERIVED = "PaperDerived"
    INFERRED = "Inferred"
    USER_DECLARED = "UserDeclared"


@dataclass(frozen=True)
class RelationEdge:
    from_id: str
    to_id: str
    kind: RelationKind
    origin: EdgeOrigin
    annotations: tuple[tuple[str, float], ...] = ()

    def __post_init__(self) -> None:
        if self.from_id == self.to_id:
            raise GraphError(f"self edge on {self.from_id!r}")

    @property
    def pair(self) -> tuple[str, str]:
        return tuple(sorted((self.from_id, self.to_id)))  # type: ignore[return-value]

    def annotations_dict(self) -> dict[str, float]:
        return dict(self.annotations)

    def sort_key(self) -> tuple[str, str, str]:
        return (self.kind.value, self.from_id, self.to_id)

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "from": self.from_id,
            "to": self.to_id,
            "kind": self.kind.value,
            "origin": self.origin.value,
        }
        if self.annotations:
            out["annotations"] = self.annotations_dict()
        return out


_ANNOTATION_KEYS = frozenset(
    {
        "design_complexity",
        "time_overhead_fault_free",
        "time_overhead_per_event",
        "space_overhead",
        "power_overhead",
    }
)


def _edge_from_dict(data: Mapping[str, Any], *, allowed_kinds: frozenset[RelationKind]) -> RelationEdge:
    unknown = set(data) - {"from", "to", "kind", "origin", "annotations"}
    if unknown:
        raise GraphError(f"unknown edge fields: {sorted(unknown)}")
    try:
        kind = RelationKind(data["kind"])
    except (KeyError, ValueError):
        raise GraphError(f"unknown relation kind: {data.get('kind')!r}") from None
    if kind not in allowed_kinds:
        raise GraphError(f"relation kind {kind.value} not allowed here")
    try:
        origin = EdgeOrigin(data.get("origin", EdgeOrigin.USER_DECLARED.value))
    except ValueError:
        raise GraphError(f"unknown edge origin: {data.get('origin')!r}") from None
    annotations = data.get("annotations", {})
    if not isinstance(annotations, Mapping):
        raise GraphError("edge annotations must be an object")
    bad = set(annotations) - _ANNOTATION_KEYS
    if bad:
        raise GraphError(f"unknown annotation keys: {sorted(bad)}")
    return RelationEdge(
        from_id=str(data["from"]),
        to_id=str(data["to"]),
        kind=kind,
        origin=origin,
        annotations=tuple(sorted((k, float(v)) for k, v in annotations.items())),
    )


@dataclass(frozen=True)
class EdgeOverlay:
    """User-declared relation edges layered over the built-in defaults."""

    edges: tuple[RelationEdge, ...] = ()

    @classmethod
    def from_json(cls, text: str) -> "EdgeOverlay":
        stripped = text.strip()
        if not stripped:
            return cls()
        try:
            doc = json.loads(stripped)
        except json.JSONDecodeError as exc:
            raise GraphError(f"overlay parse error: {exc.msg} (line {exc.lineno})") from None
        if not isinstance(doc, dict) or set(doc) - {"edges"}:
            raise GraphError('overlay document must be {"edges": [...]}')
        edges = []
        for item in doc.get("edges", []):
            edge = _edge_from_dict(item, allowed_kinds=OVERLAY_KINDS)
            if edge.origin is not EdgeOrigin.USER_DECLARED:
                raise GraphError("overlay edges must declare origin UserDeclared")
            edges.append(edge)
        return cls(edges=tuple(edges))


@dataclass(frozen=True)
class PatternGraph:
    """Immutable language graph; queries are read-only."""

    vertices: Mapping[str, PatternClass]
    edges: tuple[RelationEdge, ...]

    def edges_of_kind(self, kind: RelationKind) -> list[RelationEdge]:
        return [e for e in self.edges if e.kind is kind]

    def has_edge(self, a: str, b: str, kind: RelationKind) -> bool:
        if kind in SYMMETRIC_KINDS:
            pair = tuple(sorted((a, b)))
            return any(e.kind is kind and e.pair == pair for e in self.edges)
        return any(e.kind is kind and e.from_id == a and e.to_id == b for e in self.edges)


# Symmetric relations shipped by default. The similarity between the two
# log-replay recovery styles is declared in the source pattern texts; the
# used-with pairings (detection feeding recovery) are inferred.
_DEFAULT_SIMILARITY = (("rollforward", "rollback", EdgeOrigin.PAPER_DERIVED),)
_DEFAULT_USED_WITH = (
    ("monitoring", "rollback", EdgeOrigin.INFERRED),
    ("monitoring", "rollforward", EdgeOrigin.INFERRED),
    ("monitoring", "rejuvenation", EdgeOrigin.INFERRED),
    ("prediction", "restructure", EdgeOrigin.INFERRED),
)


def _canonical_symmetric(edge: RelationEdge) -> RelationEdge:
    a, b = edge.pair
    if (edge.from_id, edge.to_id) == (a, b):
        return edge
    return RelationEdge(a, b, edge.kind, edge.origin, edge.annotations)


def build_language_graph(catalog: Catalog, overlay: EdgeOverlay | None = None) -> PatternGraph:
    """Construct the validated pattern-language graph for a catalog."""
    violations = validate_catalog(catalog)
    if violations:
        raise GraphError(
            "catalog must be valid before building the graph: "
            + "; ".join(str(v) for v in violations)
        )
    overlay = overlay or EdgeOverlay()
    vertices = {pid: catalog.patterns[pid].pattern_class for pid in catalog.patterns}

    edges: list[RelationEdge] = []
    for pid in sorted(catalog.patterns):
        pattern = catalog.patterns[pid]
        for parent in pattern.parents:
            origin = (
                EdgeOrigin.INFERRED
                if (pid, parent) in INFERRED_PARENT_LINKS
                else EdgeOrigin.PAPER_DERIVED
            )
            edges.append(RelationEdge(pid, parent, RelationKind.SPECIALIZATION, origin))
            edges.append(RelationEdge(parent, pid, RelationKind.ABSTRACTION, origin))

    # Symmetric defaults, overridable per unordered pair. UsedWith and
    # Conflict share one keyspace so a user conflict displaces a default
    # used-with pairing (and vice versa) instead of coexisting with it.
    composability: dict[tuple[str, str], RelationEdge] = {}
    similarity: dict[tuple[str, str], RelationEdge] = {}
    for a, b, origin in _DEFAULT_USED_WITH:
        edge = _canonical_symmetric(RelationEdge(a, b, RelationKind.USED_WITH, origin))
        composability[edge.pair] = edge
    for a, b, origin in _DEFAULT_SIMILARITY:
        edge = _canonical_symmetric(RelationEdge(a, b, RelationKind.SIMILARITY, origin))
        similarity[edge.pair] = edge

    domain_edges: dict[tuple[str, str], RelationEdge] = {}
    overlay_domain_sources: set[str] = set()
    for edge in overlay.edges:
        for endpoint in (edge.from_id, edge.to_id):
            if endpoint not in vertices:
                raise GraphError(f"overlay references unknown pattern id {endpoint!r}")
        if edge.kind is RelationKind.DOMAIN:
            _check_domain_endpoints(edge, vertices)
            overlay_domain_sources.add(edge.from_id)
            domain_edges[(edge.from_id, edge.to_id)] = edge
        elif edge.kind is RelationKind.SIMILARITY:
            edge = _canonical_symmetric(edge)
            similarity[edge.pair] = edge
        else:  # UsedWith / Conflict
            edge = _canonical_symmetric(edge)
            composability[edge.pair] = edge

    # Default protection-domain edges: every state pattern scopes every
    # strategy root, unless the overlay declared domains for that state.
    state_ids = sorted(p for p, c in vertices.items() if c is PatternClass.STATE)
    root_ids = sorted(p for p, c in vertices.items() if c is PatternClass.STRATEGY)
    for sid in state_ids:
        if sid in overlay_domain_sources:
            continue
        for rid in root_ids:
            domain_edges[(sid, rid)] = RelationEdge(
                sid, rid, RelationKind.DOMAIN, EdgeOrigin.INFERRED
            )

    edges.extend(composability.values())
    edges.extend(similarity.values())
    edges.extend(domain_edges.values())
    graph = PatternGraph(vertices=vertices, edges=tuple(sorted(edges, key=RelationEdge.sort_key)))
    problems = validate_graph(graph)
    if problems:
        raise GraphError("constructed graph invalid: " + "; ".join(str(v) for v in problems))
    return graph


def _check_domain_endpoints(edge: RelationEdge, vertices: Mapping[str, PatternClass]) -> None:
    if vertices[edge.from_id] is not PatternClass.STATE:
        raise GraphError(
            f"domain edge source {edge.from_id!r} must be a state pattern"
        )
    if vertices[edge.to_id] is PatternClass.STATE:
        raise GraphError(
            f"domain edge target {edge.to_id!r} must be a behavioral pattern"
        )


def validate_graph(graph: PatternGraph) -> list[Violation]:
    """All violations of the graph invariants; empty means valid."""
    violations: list[Violation] = []
    vertices = graph.vertices

    for edge in graph.edges:
        for endpoint in (edge.from_id, edge.to_id):
            if endpoint not in vertices:
                violations.append(
                    Violation("dangling-endpoint", f"edge endpoint {endpoint!r} unknown", endpoint)
                )

    spec_edges = {(e.from_id, e.to_id) for e in graph.edges if e.kind is RelationKind.SPECIALIZATION}
    abs_edges = {(e.from_id, e.to_id) for e in graph.edges if e.kind is RelationKind.ABSTRACTION}
    for a, b in sorted(spec_edges):
        if (b, a) not in abs_edges:
            violations.append(
                Violation("inverse-closure", f"specialization {a}->{b} lacks abstraction inverse", a)
            )
    for a, b in sorted(abs_edges):
        if (b, a) not in spec_edges:
            violations.append(
                Violation("inverse-closure", f"abstraction {a}->{b} lacks specialization inverse", a)
            )

    # Specialization must step exactly one behavioral layer toward strategy.
    layer = {PatternClass.STRATEGY: 0, PatternClass.ARCHITECTURAL: 1, PatternClass.STRUCTURAL: 2}
    for a, b in sorted(spec_edges):
        ca, cb = vertices.get(a), vertices.get(b)
        if ca is None or cb is None:
            continue
        if ca is PatternClass.STATE or cb is PatternClass.STATE:
            violations.append(
                Violation("specialization-class", f"{a}->{b} touches a state pattern", a)
            )
        elif layer[ca] - layer[cb] != 1:
            violations.append(
                Violation(
                    "specialization-class",
                    f"{a} ({ca.value}) must specialize one layer above, got {b} ({cb.value})",
                    a,
                )
            )

    cycle = _find_cycle(spec_edges)
    if cycle:
        violations.append(
            Violation("specialization-cycle", "specialization cycle: " + " -> ".join(cycle), cycle[0])
        )

    symmetric_seen: dict[tuple[str, str, RelationKind], int] = {}
    for edge in graph.edges:
        if edge.kind in SYMMETRIC_KINDS:
            if (edge.from_id, edge.to_id) != edge.pair:
                violations.append(
                    Violation(
                        "symmetric-storage",
                        f"{edge.kind.value} edge {edge.from_id}->{edge.to_id} not stored in "
                        "canonical unordered orientation",
                        edge.from_id,
                    )
                )
            key = (*edge.pair, edge.kind)
            symmetric_seen[key] = symmetric_seen.get(key, 0) + 1
    for (a, b, kind), count in sorted(symmetric_seen.items(), key=lambda kv: (kv[0][0], kv[0][1])):
        if count > 1:
            violations.append(
                Violation("symmetric-duplicate", f"{kind.value} edge {a}--{b} stored {count} times", a)
            )

    pairs_used = {e.pair for e in graph.edges if e.kind is RelationKind.USED_WITH}
    pairs_conflict = {e.pair for e in graph.edges if e.kind is RelationKind.CONFLICT}
    for a, b in sorted(pairs_used & pairs_conflict):
        violations.append(
            Violation(
                "relation-exclusivity",
                f"{a} and {b} carry both used-with and conflict edges",
                a,
            )
        )

    for edge in graph.edges:
        if edge.kind is RelationKind.DOMAIN:
            src = vertices.get(edge.from_id)
            dst = vertices.get(edge.to_id)
            if src is not None and src is not PatternClass.STATE:
                violations.append(
                    Violation("domain-endpoints", f"domain source {edge.from_id!r} not a state pattern", edge.from_id)
                )
            if dst is not None and dst is PatternClass.STATE:
                violations.append(
                    Violation("domain-endpoints", f"domain target {edge.to_id!r} not behavioral", edge.to_id)
                )

    if not cycle:
        for pid in sorted(vertices):
            if vertices[pid] is PatternClass.STRUCTURAL:
                chains = _ancestry_chains(graph, pid)
                if not any(
                    graph.vertices.get(chain[-1]) is PatternClass.STRATEGY for chain in chains
                ):
                    violations.append(
                        Violation(
                            "unreachable-strategy",
                            "structural pattern has no specialization path to a strategy root",
                            pid,
                        )
                    )
    return violations


def _find_cycle(edges: set[tuple[str, str]]) -> list[str] | None:
    adjacency: dict[str, list[str]] = {}
    for a, b in sorted(edges):
        adjacency.setdefault(a, []).append(b)
    WHITE, GRAY, BLACK = 0, 1, 2
    color: dict[str, int] = {}
    path: list[str] = []

    def visit(node: str) -> list[str] | None:
        color[node] = GRAY
        path.append(node)
        for nxt in adjacency.get(node, []):
            state = color.get(nxt, WHITE)
            if state == GRAY:
                return path[path.index(nxt):] + [nxt]
            if state == WHITE:
                found = visit(nxt)
                if found:
                    return found
        color[node] = BLACK
        path.pop()
        return None

    for node in sorted(adjacency):
        if color.get(node, WHITE) == WHITE:
            found = visit(node)
            if found:
                return found
    return None


def neighbors(graph: PatternGraph, pattern_id: str, kind: RelationKind) -> set[str]:
    """Ids one `kind` hop from the pattern (both ways for symmetric kinds)."""
    if pattern_id not in graph.vertices:
        raise GraphError(f"unknown pattern id: {pattern_id!r}")
    out: set[str] = set()
    for edge in graph.edges:
        if edge.kind is not kind:
            continue
        if edge.from_id == pattern_id:
            out.add(edge.to_id)
        elif kind in SYMMETRIC_KINDS and edge.to_id == pattern_id:
            out.add(edge.from_id)
    return out


def _ancestry_chains(graph: PatternGraph, pattern_id: str) -> list[list[str]]:
    successors: dict[str, list[str]] = {}
    for edge in graph.edges:
        if edge.kind is RelationKind.SPECIALIZATION:
            successors.setdefault(edge.from_id, []).append(edge.to_id)
    for targets in successors.values():
        targets.sort()
    chains: list[list[str]] = []

    def walk(node: str, trail: list[str]) -> None:
        nxt = successors.get(node, [])
        if not nxt:
            chains.append(trail)
            return
        for target in nxt:
            walk(target, trail + [target])

    walk(pattern_id, [pattern_id])
    return sorted(chains)


def ancestry(graph: PatternGraph, pattern_id: str) -> list[list[str]]:
    """Every specialization chain from the pattern to a strategy root,
    concrete first, ordered lexicographically."""
    if pattern_id not in graph.vertices:
        raise GraphError(f"unknown pattern id: {pattern_id!r}")
    if graph.vertices[pattern_id] is PatternClass.STATE:
        raise GraphError(f"state pattern {pattern_id!r} has no behavioral ancestry")
    return _ancestry_chains(graph, pattern_id)


_CLUSTER_ORDER = (
    PatternClass.STRATEGY,
    PatternClass.ARCHITECTURAL,
    PatternClass.STRUCTURAL,
    PatternClass.STATE,
)

_CLUSTER_FILL = {
    PatternClass.STRATEGY: "#d6e4f0",
    PatternClass.ARCHITECTURAL: "#fdebd0",
    PatternClass.STRUCTURAL: "#ddefdd",
    PatternClass.STATE: "#ead9f2",
}

_EDGE_STYLE = {
    RelationKind.SPECIALIZATION: 'color="#1f4e79"',
    RelationKind.ABSTRACTION: 'color="#1f4e79", style=dashed',
    RelationKind.USED_WITH: 'color="#2e7d32", dir=none',
    RelationKind.CONFLICT: 'color="#c0392b", dir=none, style=bold',
    RelationKind.SIMILARITY: 'color="#757575", dir=none, style=dotted',
    RelationKind.DOMAIN: 'color="#6a3d9a", style=dashed, arrowhead=open',
}


def export_dot(graph: PatternGraph) -> str:
    """Deterministic DOT rendering: one cluster per class, styles per kind."""
    lines = [
        "digraph pattern_language {",
        "  rankdir=BT;",
        '  node [shape=box, style="rounded,filled"];',
    ]
    for cls in _CLUSTER_ORDER:
        members = sorted(pid for pid, c in graph.vertices.items() if c is cls)
        lines.append(f"  subgraph cluster_{cls.value.lower()} {{")
        lines.append(f'    label="{cls.value}";')
        lines.append("    style=filled;")
        lines.append(f'    color="{_CLUSTER_FILL[cls]}";')
        for pid in members:
            lines.append(f'    "{pid}";')
        lines.append("  }")
    for edge in sorted(graph.edges, key=RelationEdge.sort_key):
        style = _EDGE_STYLE[edge.kind]
        lines.append(
            f'  "{edge.from_id}" -> "{edge.to_id}" '
            f'[{style}, tooltip="{edge.kind.value} ({edge.origin.value})"];'
        )
    lines.append("}")
    return "\n".join(lines) + "\n"


def export_graph_json(graph: PatternGraph) -> str:
    """Canonical JSON mirror of the in-memory graph."""
    doc = {
        "vertices": [
            {"id": pid, "cluster": graph.vertices[pid].value} for pid in sorted(graph.vertices)
        ],
        "edges": [e.to_dict() for e in sorted(graph.edges, key=RelationEdge.sort_key)],
    }
    return json.dumps(doc, sort_keys=True, indent=2) + "\n"


def graph_from_json(text: str) -> PatternGraph:
    """Rebuild a graph from its JSON export."""
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise GraphError(f"graph parse error: {exc.msg} (line {exc.lineno})") from None
    if not isinstance(doc, dict) or set(doc) - {"vertices", "edges"}:
        raise GraphError('graph document must be {"vertices": [...], "edges": [...]}')
    vertices: dict[str, PatternClass] = {}
    for item in doc.get("vertices", []):
        unknown = set(item) - {"id", "cluster"}
        if unknown:
            raise GraphError(f"unknown vertex fields: {sorted(unknown)}")
        try:
            vertices[str(item["id"])] = PatternClass(item["cluster"])
        except (KeyError, ValueError):
            raise GraphError(f"bad vertex record: {item!r}") from None
    edges = tuple(
        sorted(
            (
                _edge_from_dict(item, allowed_kinds=frozenset(RelationKind))
                for item in doc.get("edges", [])
            ),
            key=RelationEdge.sort_key,
        )
    )
    return PatternGraph(vertices=vertices, edges=edges)

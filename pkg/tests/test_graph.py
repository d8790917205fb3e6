import json

import pytest

from resilang.catalog import PatternClass, builtin_catalog
from resilang.graph import (
    EdgeOrigin,
    EdgeOverlay,
    GraphError,
    PatternGraph,
    RelationEdge,
    RelationKind,
    ancestry,
    build_language_graph,
    export_dot,
    export_graph_json,
    graph_from_json,
    neighbors,
    validate_graph,
)

# Every "derivative of" declaration in the shipped pattern texts.
CANONICAL_PARENT_LINKS = {
    ("fault-diagnosis", "fault-treatment"),
    ("reconfiguration", "fault-treatment"),
    ("reconfiguration", "recovery"),
    ("checkpoint-recovery", "recovery"),
    ("redundancy", "compensation"),
    ("design-diversity", "compensation"),
    ("monitoring", "fault-diagnosis"),
    ("restructure", "reconfiguration"),
    ("rejuvenation", "reconfiguration"),
    ("reinitialization", "reconfiguration"),
    ("rollback", "checkpoint-recovery"),
    ("forward-error-correction-code", "redundancy"),
    ("n-modular-redundancy", "redundancy"),
    ("n-version-design", "design-diversity"),
    ("recovery-block", "design-diversity"),
}

INFERRED_LINKS = {
    ("prediction", "fault-diagnosis"),
    ("rollforward", "checkpoint-recovery"),
}


def test_specialization_edge_census(graph):
    spec = {
        (e.from_id, e.to_id): e.origin
        for e in graph.edges
        if e.kind is RelationKind.SPECIALIZATION
    }
    assert set(spec) == CANONICAL_PARENT_LINKS | INFERRED_LINKS
    for link in CANONICAL_PARENT_LINKS:
        assert spec[link] is EdgeOrigin.PAPER_DERIVED
    for link in INFERRED_LINKS:
        assert spec[link] is EdgeOrigin.INFERRED


def test_inverse_closure(graph):
    spec = {(e.from_id, e.to_id) for e in graph.edges if e.kind is RelationKind.SPECIALIZATION}
    abst = {(e.from_id, e.to_id) for e in graph.edges if e.kind is RelationKind.ABSTRACTION}
    assert {(b, a) for a, b in spec} == abst


def test_builtin_graph_valid(graph):
    assert validate_graph(graph) == []


def test_similarity_between_replay_styles(graph):
    assert graph.has_edge("rollforward", "rollback", RelationKind.SIMILARITY)
    assert graph.has_edge("rollback", "rollforward", RelationKind.SIMILARITY)


def test_default_domain_edges(graph):
    domain = [(e.from_id, e.to_id) for e in graph.edges if e.kind is RelationKind.DOMAIN]
    assert len(domain) == 12  # 4 state patterns x 3 strategy roots
    for state, root in domain:
        assert graph.vertices[state] is PatternClass.STATE
        assert graph.vertices[root] is PatternClass.STRATEGY


def test_overlay_conflict_passthrough(catalog):
    overlay = EdgeOverlay.from_json(
        json.dumps(
            {
                "edges": [
                    {
                        "from": "reinitialization",
                        "to": "rollforward",
                        "kind": "Conflict",
                        "origin": "UserDeclared",
                    }
                ]
            }
        )
    )
    g = build_language_graph(catalog, overlay)
    assert g.has_edge("reinitialization", "rollforward", RelationKind.CONFLICT)
    edge = next(e for e in g.edges if e.kind is RelationKind.CONFLICT)
    assert edge.origin is EdgeOrigin.USER_DECLARED


def test_overlay_dangling_id_rejected(catalog):
    overlay = EdgeOverlay.from_json(
        json.dumps({"edges": [{"from": "nope", "to": "rollback", "kind": "Conflict", "origin": "UserDeclared"}]})
    )
    with pytest.raises(GraphError, match="nope"):
        build_language_graph(catalog, overlay)


def test_overlay_domain_endpoint_rule(catalog):
    overlay = EdgeOverlay.from_json(
        json.dumps({"edges": [{"from": "rollback", "to": "recovery", "kind": "Domain", "origin": "UserDeclared"}]})
    )
    with pytest.raises(GraphError, match="state pattern"):
        build_language_graph(catalog, overlay)


def test_overlay_conflict_displaces_default_used_with(catalog):
    overlay = EdgeOverlay.from_json(
        json.dumps(
            {"edges": [{"from": "monitoring", "to": "rollback", "kind": "Conflict", "origin": "UserDeclared"}]}
        )
    )
    g = build_language_graph(catalog, overlay)
    assert g.has_edge("monitoring", "rollback", RelationKind.CONFLICT)
    assert not g.has_edge("monitoring", "rollback", RelationKind.USED_WITH)
    assert validate_graph(g) == []


def test_neighbors_abstraction(graph):
    assert neighbors(graph, "compensation", RelationKind.ABSTRACTION) == {
        "redundancy",
        "design-diversity",
    }


def test_neighbors_specialization(graph):
    assert neighbors(graph, "rollback", RelationKind.SPECIALIZATION) == {"checkpoint-recovery"}


def test_neighbors_no_default_conflicts(graph):
    assert neighbors(graph, "monitoring", RelationKind.CONFLICT) == set()


def test_neighbors_unknown_id(graph):
    with pytest.raises(GraphError):
        neighbors(graph, "does-not-exist", RelationKind.CONFLICT)


def test_ancestry_rollback(graph):
    assert ancestry(graph, "rollback") == [["rollback", "checkpoint-recovery", "recovery"]]


def test_ancestry_restructure_reaches_both_roots(graph):
    chains = ancestry(graph, "restructure")
    roots = {chain[-1] for chain in chains}
    assert roots == {"fault-treatment", "recovery"}
    assert chains == sorted(chains)


def test_ancestry_root_is_self(graph):
    assert ancestry(graph, "recovery") == [["recovery"]]


def test_ancestry_rejects_state_pattern(graph):
    with pytest.raises(GraphError, match="state pattern"):
        ancestry(graph, "stateless")


def test_every_structural_vertex_reaches_a_strategy(graph, catalog):
    order = {
        PatternClass.STRUCTURAL: 2,
        PatternClass.ARCHITECTURAL: 1,
        PatternClass.STRATEGY: 0,
    }
    for pattern in catalog.by_class(PatternClass.STRUCTURAL):
        chains = ancestry(graph, pattern.id)
        assert chains
        for chain in chains:
            classes = [graph.vertices[pid] for pid in chain]
            assert classes[0] is PatternClass.STRUCTURAL
            assert classes[-1] is PatternClass.STRATEGY
            ranks = [order[c] for c in classes]
            assert ranks == sorted(ranks, reverse=True)


def test_dot_export_deterministic(graph):
    first = export_dot(graph)
    second = export_dot(graph)
    assert first == second
    for label in ("Strategy", "Architectural", "Structural", "State"):
        assert f'label="{label}";' in first
    assert first.count("subgraph cluster_") == 4


def test_dot_conflict_style(catalog):
    overlay = EdgeOverlay.from_json(
        json.dumps(
            {"edges": [{"from": "reinitialization", "to": "rollforward", "kind": "Conflict", "origin": "UserDeclared"}]}
        )
    )
    g = build_language_graph(catalog, overlay)
    dot = export_dot(g)
    conflict_lines = [line for line in dot.splitlines() if "Conflict" in line]
    assert len(conflict_lines) == 1
    assert "style=bold" in conflict_lines[0]


def test_json_export_round_trip(graph):
    text = export_graph_json(graph)
    rebuilt = graph_from_json(text)
    assert dict(rebuilt.vertices) == dict(graph.vertices)
    assert rebuilt.edges == graph.edges
    assert export_graph_json(rebuilt) == text


def test_validate_detects_specialization_cycle():
    vertices = {
        "a": PatternClass.STRUCTURAL,
        "b": PatternClass.ARCHITECTURAL,
    }
    edges = (
        RelationEdge("a", "b", RelationKind.SPECIALIZATION, EdgeOrigin.USER_DECLARED),
        RelationEdge("b", "a", RelationKind.ABSTRACTION, EdgeOrigin.USER_DECLARED),
        RelationEdge("b", "a", RelationKind.SPECIALIZATION, EdgeOrigin.USER_DECLARED),
        RelationEdge("a", "b", RelationKind.ABSTRACTION, EdgeOrigin.USER_DECLARED),
    )
    violations = validate_graph(PatternGraph(vertices=vertices, edges=edges))
    assert any(v.code == "specialization-cycle" for v in violations)


def test_validate_detects_exclusivity_breach():
    vertices = {"a": PatternClass.STRUCTURAL, "b": PatternClass.STRUCTURAL}
    edges = (
        RelationEdge("a", "b", RelationKind.USED_WITH, EdgeOrigin.USER_DECLARED),
        RelationEdge("a", "b", RelationKind.CONFLICT, EdgeOrigin.USER_DECLARED),
    )
    violations = validate_graph(PatternGraph(vertices=vertices, edges=edges))
    assert any(v.code == "relation-exclusivity" for v in violations)


def test_validate_detects_missing_inverse():
    vertices = {"a": PatternClass.STRUCTURAL, "b": PatternClass.ARCHITECTURAL}
    edges = (RelationEdge("a", "b", RelationKind.SPECIALIZATION, EdgeOrigin.USER_DECLARED),)
    violations = validate_graph(PatternGraph(vertices=vertices, edges=edges))
    assert any(v.code == "inverse-closure" for v in violations)


def test_edge_annotations_survive_round_trip(catalog):
    overlay = EdgeOverlay.from_json(
        json.dumps(
            {
                "edges": [
                    {
                        "from": "monitoring",
                        "to": "prediction",
                        "kind": "UsedWith",
                        "origin": "UserDeclared",
                        "annotations": {"time_overhead_fault_free": -0.01},
                    }
                ]
            }
        )
    )
    g = build_language_graph(catalog, overlay)
    text = export_graph_json(g)
    rebuilt = graph_from_json(text)
    edge = next(
        e
        for e in rebuilt.edges
        if e.kind is RelationKind.USED_WITH and e.pair == ("monitoring", "prediction")
    )
    assert edge.annotations_dict() == {"time_overhead_fault_free": -0.01}

import json

import pytest
from hypothesis import given, strategies as st

from resilang.catalog import (
    Capability,
    CatalogError,
    CatalogParseError,
    CatalogSchemaError,
    FaultModelClass,
    Pattern,
    PatternClass,
    builtin_catalog,
    catalog_to_json,
    load_catalog,
    validate_catalog,
)


def test_census(catalog):
    assert len(catalog) == 23
    counts = {cls: len(catalog.by_class(cls)) for cls in PatternClass}
    assert counts == {
        PatternClass.STRATEGY: 3,
        PatternClass.ARCHITECTURAL: 5,
        PatternClass.STRUCTURAL: 11,
        PatternClass.STATE: 4,
    }


def test_builtin_is_valid_and_deterministic(catalog):
    assert validate_catalog(catalog) == []
    assert builtin_catalog() is catalog  # cached, idempotent
    assert catalog_to_json(catalog) == catalog_to_json(builtin_catalog())


def test_rollback_parentage(catalog):
    rollback = catalog.get("rollback")
    assert rollback.pattern_class is PatternClass.STRUCTURAL
    assert rollback.parents == ("checkpoint-recovery",)


def test_stateless_shape(catalog):
    stateless = catalog.get("stateless")
    assert stateless.pattern_class is PatternClass.STATE
    assert stateless.handles == frozenset()
    assert stateless.capabilities == frozenset()


def test_nmr_replica_parameter(catalog):
    spec = catalog.get("n-modular-redundancy").parameter("N")
    assert spec is not None
    assert spec.default == 3
    assert spec.domain.contains(3) and spec.domain.contains(5)
    assert not spec.domain.contains(4) and not spec.domain.contains(1)


def test_strategy_fault_models(catalog):
    assert catalog.get("fault-treatment").handles == frozenset({FaultModelClass.FAULT})
    expected = frozenset({FaultModelClass.ERROR, FaultModelClass.FAILURE})
    assert catalog.get("recovery").handles == expected
    assert catalog.get("compensation").handles == expected


def test_parent_class_layering(catalog):
    order = [PatternClass.STRATEGY, PatternClass.ARCHITECTURAL, PatternClass.STRUCTURAL]
    for pattern in catalog.patterns.values():
        if pattern.pattern_class in (PatternClass.STRATEGY, PatternClass.STATE):
            assert pattern.parents == ()
            continue
        assert pattern.parents
        for parent_id in pattern.parents:
            parent = catalog.get(parent_id)
            assert (
                order.index(pattern.pattern_class) - order.index(parent.pattern_class) == 1
            )


def test_handles_inherited_from_parents(catalog):
    for pattern in catalog.patterns.values():
        if pattern.pattern_class is PatternClass.STATE or not pattern.parents:
            continue
        inherited = frozenset()
        for parent_id in pattern.parents:
            inherited |= catalog.get(parent_id).handles
        assert pattern.handles <= inherited, pattern.id


def test_state_patterns_containment_only(catalog):
    for pattern in catalog.by_class(PatternClass.STATE):
        assert pattern.handles == frozenset()
        assert pattern.capabilities <= {Capability.CONTAINMENT}


def test_load_empty_document_is_identity():
    merged = load_catalog("")
    base = builtin_catalog()
    assert merged.patterns == dict(base.patterns)
    assert catalog_to_json(merged) == catalog_to_json(base)


def _user_pattern(pid="proactive-migration", parent="reconfiguration", cls="Structural"):
    return {
        "id": pid,
        "name": "Proactive Migration",
        "class": cls,
        "parents": [parent],
        "problem": "A node showing early wear indicators will eventually fail mid-run.",
        "solution": "Move the workload off the suspect node before it fails.",
        "forces": "Migration costs bandwidth and a pause.",
        "consequences": "Workloads avoid predicted failures at the price of migrations.",
        "handles": ["Fault", "Error"],
        "capabilities": ["Recovery"],
        "parameters": [],
        "base_cost": {
            "design_complexity": 0.0,
            "time_overhead_fault_free": 0.0,
            "time_overhead_per_event": 0.0,
            "space_overhead": 0.0,
            "power_overhead": 0.0,
        },
        "complexity": 3,
    }


def test_load_user_extension_adds_pattern():
    doc = json.dumps({"version": "user-1", "patterns": [_user_pattern()]})
    merged = load_catalog(doc)
    assert len(merged) == 24
    assert merged.get("proactive-migration").parents == ("reconfiguration",)
    assert validate_catalog(merged) == []


def test_load_override_is_last_writer_wins():
    record = builtin_catalog().get("monitoring").to_dict()
    record["complexity"] = 5
    merged = load_catalog(json.dumps({"patterns": [record]}))
    assert len(merged) == 23
    assert merged.get("monitoring").complexity == 5


def test_load_dangling_parent_is_schema_error():
    doc = json.dumps({"patterns": [_user_pattern(parent="nonexistent")]})
    with pytest.raises(CatalogSchemaError, match="nonexistent"):
        load_catalog(doc)


def test_load_unknown_field_rejected():
    record = _user_pattern()
    record["surprise"] = True
    with pytest.raises(CatalogSchemaError, match="surprise"):
        load_catalog(json.dumps({"patterns": [record]}))


def test_load_unknown_class_rejected():
    with pytest.raises(CatalogSchemaError, match="class"):
        load_catalog(json.dumps({"patterns": [_user_pattern(cls="Tactical")]}))


def test_parse_error_carries_position():
    with pytest.raises(CatalogParseError, match=r"line \d+"):
        load_catalog('{"patterns": [,]}')


def test_validate_strategy_with_parent():
    patterns = dict(builtin_catalog().patterns)
    bad = builtin_catalog().get("recovery").to_dict()
    bad["parents"] = ["compensation"]
    patterns["recovery"] = Pattern.from_dict(bad)
    from resilang.catalog import Catalog

    violations = validate_catalog(Catalog(patterns=patterns))
    assert any(v.code == "strategy-root" for v in violations)


def test_validate_structural_with_strategy_parent():
    # Exhaustive class-pair check: structural parents must be architectural.
    base = builtin_catalog()
    patterns = dict(base.patterns)
    bad = base.get("rollback").to_dict()
    bad["parents"] = ["recovery"]
    from resilang.catalog import Catalog

    patterns["rollback"] = Pattern.from_dict(bad)
    violations = validate_catalog(Catalog(patterns=patterns))
    assert any(
        v.code == "parent-class" and "architectural" in v.message for v in violations
    )


def test_validate_class_pair_table():
    # Every (child class, parent class) combination vs the layering rule.
    base = builtin_catalog()
    representatives = {
        PatternClass.STRATEGY: "recovery",
        PatternClass.ARCHITECTURAL: "checkpoint-recovery",
        PatternClass.STRUCTURAL: "rollback",
        PatternClass.STATE: "dynamic-state",
    }
    allowed = {
        (PatternClass.ARCHITECTURAL, PatternClass.STRATEGY),
        (PatternClass.STRUCTURAL, PatternClass.ARCHITECTURAL),
    }
    from resilang.catalog import Catalog

    for child_cls in (PatternClass.ARCHITECTURAL, PatternClass.STRUCTURAL):
        for parent_cls, parent_id in representatives.items():
            child_id = representatives[child_cls]
            record = base.get(child_id).to_dict()
            record["parents"] = [parent_id]
            record["handles"] = []
            patterns = dict(base.patterns)
            patterns[child_id] = Pattern.from_dict(record)
            violations = validate_catalog(Catalog(patterns=patterns))
            pair_ok = (child_cls, parent_cls) in allowed
            has_class_violation = any(
                v.code == "parent-class" and v.subject == child_id for v in violations
            )
            assert has_class_violation != pair_ok, (child_cls, parent_cls)


def test_round_trip_builtin():
    text = catalog_to_json(builtin_catalog())
    reloaded = load_catalog(text)
    assert reloaded.patterns == dict(builtin_catalog().patterns)
    assert catalog_to_json(reloaded) == text


@given(
    complexity=st.integers(min_value=1, max_value=5),
    handles=st.sets(st.sampled_from(["Error", "Failure"]), min_size=0),
    capability=st.sampled_from(["Detection", "Recovery", "Masking"]),
)
def test_round_trip_with_random_extension(complexity, handles, capability):
    record = _user_pattern(pid="fuzzed-pattern", parent="checkpoint-recovery")
    record["complexity"] = complexity
    record["handles"] = sorted(handles)
    record["capabilities"] = [capability]
    merged = load_catalog(json.dumps({"patterns": [record]}))
    text = catalog_to_json(merged)
    again = load_catalog(text)
    assert again.patterns == dict(merged.patterns)
    assert catalog_to_json(again) == text


def test_resolve_bindings_defaults_and_domain(catalog):
    rollback = catalog.get("rollback")
    resolved = catalog.resolve_bindings(rollback, {"interval": 200.0})
    assert resolved == {"interval": 200.0, "checkpoint_cost": 10.0, "restart_cost": 30.0}
    with pytest.raises(CatalogError, match="outside domain"):
        catalog.resolve_bindings(rollback, {"interval": -1.0})
    with pytest.raises(CatalogError, match="unknown parameters"):
        catalog.resolve_bindings(rollback, {"tau": 10.0})

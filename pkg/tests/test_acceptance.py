"""Acceptance gate: one test per criterion, each printing a PASS/FAIL line.

Run with `pytest tests/test_acceptance.py -v -s` to see the per-criterion
lines alongside the pytest verdicts.
"""
import json
import math
import time

import pytest

from oracles import brute_force_candidates, expected_uncorrected_vote_rate
from resilang.catalog import (
    Capability,
    FaultModelClass,
    PatternClass,
    builtin_catalog,
    load_catalog,
    validate_catalog,
)
from resilang.graph import (
    EdgeOrigin,
    RelationKind,
    build_language_graph,
    export_dot,
    export_graph_json,
    graph_from_json,
    validate_graph,
)
from resilang.simulator import (
    OVERHEAD_CATEGORIES,
    SimConfig,
    SimSolution,
    analytic_checkpoint_model,
    run_simulation,
    sweep,
)
from resilang.synthesis import (
    DesignQuery,
    EntryMode,
    UnsatisfiableQueryError,
    candidates_to_json,
    synthesize,
)
from resilang.system import SystemModel, Workload


def _verdict(criterion: str, ok: bool, detail: str = "") -> None:
    status = "PASS" if ok else "FAIL"
    suffix = f" ({detail})" if detail else ""
    print(f"[{status}] {criterion}{suffix}")
    assert ok, f"{criterion}{suffix}"


MTBE_1000 = SystemModel(
    node_count=1,
    fault_rate_per_node=3.6,
    p_activation=1.0,
    p_error_to_failure=1.0,
)


def _rollback(interval=100.0, checkpoint_cost=10.0, restart_cost=30.0):
    from resilang.synthesis import PatternInstance

    return PatternInstance(
        "rollback",
        {"interval": interval, "checkpoint_cost": checkpoint_cost, "restart_cost": restart_cost},
    )


def test_criterion_1_catalog_census():
    start = time.perf_counter()
    catalog = builtin_catalog()
    counts = {cls: len(catalog.by_class(cls)) for cls in PatternClass}
    histogram_ok = len(catalog) == 23 and counts == {
        PatternClass.STRATEGY: 3,
        PatternClass.ARCHITECTURAL: 5,
        PatternClass.STRUCTURAL: 11,
        PatternClass.STATE: 4,
    }
    clean = validate_catalog(catalog) == []
    elapsed = time.perf_counter() - start
    _verdict(
        "criterion 1: catalog census 23 patterns (3,5,11,4), zero violations",
        histogram_ok and clean and elapsed < 1.0,
        f"{elapsed:.3f} s",
    )


# The fifteen parent declarations the shipped pattern texts make outright,
# plus the two links the catalog fills in (flagged as inferred).
DECLARED_LINKS = {
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


def test_criterion_2_graph_fidelity():
    start = time.perf_counter()
    graph = build_language_graph(builtin_catalog())
    spec = {
        (e.from_id, e.to_id): e.origin
        for e in graph.edges
        if e.kind is RelationKind.SPECIALIZATION
    }
    census_ok = set(spec) == DECLARED_LINKS | INFERRED_LINKS
    origins_ok = all(spec[link] is EdgeOrigin.PAPER_DERIVED for link in DECLARED_LINKS) and all(
        spec[link] is EdgeOrigin.INFERRED for link in INFERRED_LINKS
    )
    abst = {(e.from_id, e.to_id) for e in graph.edges if e.kind is RelationKind.ABSTRACTION}
    inverse_ok = {(b, a) for a, b in spec} == abst
    dag_ok = validate_graph(graph) == []
    elapsed = time.perf_counter() - start
    _verdict(
        "criterion 2: specialization census matches declarations, inferred links flagged, "
        "inverse closure and DAG hold",
        census_ok and origins_ok and inverse_ok and dag_ok and elapsed < 1.0,
        f"{len(DECLARED_LINKS)} declared + {len(INFERRED_LINKS)} inferred, {elapsed:.3f} s",
    )


def test_criterion_3_synthesis_oracle_equivalence():
    start = time.perf_counter()
    catalog = builtin_catalog()
    graph = build_language_graph(catalog)
    mismatches = []
    for fault in FaultModelClass:
        for cap in Capability:
            oracle = brute_force_candidates(catalog, graph, {fault}, {cap})
            try:
                candidates = synthesize(
                    graph,
                    catalog,
                    DesignQuery(
                        fault_models=frozenset({fault}),
                        capabilities=frozenset({cap}),
                        max_candidates=1_000_000,
                    ),
                )
                mine = {(c.state_binding, c.instance_ids()) for c in candidates}
            except UnsatisfiableQueryError:
                mine = set()
            if mine != oracle:
                mismatches.append((fault.value, cap.value))
    elapsed = time.perf_counter() - start
    _verdict(
        "criterion 3: synthesis equals brute-force enumerator on all 12 single-pair queries",
        not mismatches and elapsed < 30.0,
        f"{elapsed:.2f} s" + (f", mismatches: {mismatches}" if mismatches else ""),
    )


def test_criterion_4_entry_mode_invariance():
    catalog = builtin_catalog()
    graph = build_language_graph(catalog)
    fixed = dict(
        fault_models=frozenset({FaultModelClass.ERROR, FaultModelClass.FAILURE}),
        capabilities=frozenset({Capability.DETECTION, Capability.RECOVERY}),
        seed_patterns=frozenset({"rollback"}),
        max_candidates=1_000_000,
    )
    serialized = {
        mode.value: candidates_to_json(
            synthesize(graph, catalog, DesignQuery(entry_mode=mode, **fixed))
        )
        for mode in EntryMode
    }
    _verdict(
        "criterion 4: all four entry modes return identical candidate sets",
        len(set(serialized.values())) == 1,
        ", ".join(sorted(serialized)),
    )


def test_criterion_5_zero_fault_identities():
    quiet = SystemModel(node_count=1, fault_rate_per_node=0.0)
    bare = run_simulation(
        SimConfig(
            system=quiet,
            workload=Workload(total_work=10000.0),
            solution=SimSolution("stateless", ()),
            seed=1,
        )
    )
    bare_ok = bare.makespan_mean == 10000.0 and all(v == 0 for v in bare.events.values())

    ckpt = run_simulation(
        SimConfig(
            system=quiet,
            workload=Workload(total_work=10000.0),
            solution=SimSolution("dynamic-state", (_rollback(),)),
            seed=1,
            per_trial=True,
        )
    )
    expected = 10000.0 + (math.ceil(10000.0 / 100.0) - 1) * 10.0
    ckpt_ok = ckpt.makespan_mean == expected

    noisy = run_simulation(
        SimConfig(
            system=MTBE_1000,
            workload=Workload(total_work=10000.0),
            solution=SimSolution("dynamic-state", (_rollback(),)),
            seed=42,
            trials=200,
            per_trial=True,
        )
    )
    identity_ok = True
    for trial in list(ckpt.per_trial) + list(noisy.per_trial):
        total = trial["useful"]
        for category in OVERHEAD_CATEGORIES:
            total += trial["overhead_breakdown"][category]
        if trial["makespan"] != total:
            identity_ok = False
            break
    _verdict(
        "criterion 5: zero-fault identities exact and accounting identity holds per trial",
        bare_ok and ckpt_ok and identity_ok,
        f"bare={bare.makespan_mean}, ckpt={ckpt.makespan_mean} (expected {expected})",
    )


def test_criterion_6_checkpoint_interval_oracle():
    start = time.perf_counter()
    workload = Workload(total_work=10000.0)
    base = SimConfig(
        system=MTBE_1000,
        workload=workload,
        solution=SimSolution("dynamic-state", (_rollback(),)),
        seed=42,
        trials=1000,
    )
    table = sweep(base, {"interval": [float(tau) for tau in range(25, 401, 25)]})
    best = min(table.rows, key=lambda row: row.report.makespan_mean)
    tau_star = math.sqrt(2.0 * 10.0 * 1000.0)
    tau_ok = abs(best.bindings["interval"] - tau_star) / tau_star <= 0.20

    inst = _rollback(interval=tau_star)
    at_star = run_simulation(
        SimConfig(
            system=MTBE_1000,
            workload=workload,
            solution=SimSolution("dynamic-state", (inst,)),
            seed=42,
            trials=1000,
        )
    )
    estimate = analytic_checkpoint_model(MTBE_1000, inst, workload)
    makespan_ok = (
        abs(at_star.makespan_mean - estimate.expected_makespan)
        <= 0.10 * estimate.expected_makespan
    )
    elapsed = time.perf_counter() - start
    _verdict(
        "criterion 6: empirical optimal interval within 20% of sqrt(2*d*M); makespan at "
        "the optimum within 10% of the analytic estimate",
        tau_ok and makespan_ok and elapsed < 60.0,
        f"best={best.bindings['interval']:.0f} vs {tau_star:.1f}; "
        f"sim={at_star.makespan_mean:.0f} vs analytic={estimate.expected_makespan:.0f}; "
        f"{elapsed:.1f} s",
    )


def test_criterion_7_nmr_voting_oracle():
    start = time.perf_counter()
    p = 0.01
    mtbe = -1.0 / math.log(1.0 - p)
    system = SystemModel(
        node_count=1,
        fault_rate_per_node=3600.0 / mtbe,
        p_activation=1.0,
        p_error_to_failure=1.0,
    )

    def run_nmr(n):
        from resilang.synthesis import PatternInstance

        return run_simulation(
            SimConfig(
                system=system,
                workload=Workload(total_work=100000.0),
                solution=SimSolution(
                    "dynamic-state",
                    (
                        PatternInstance("n-modular-redundancy", {"N": n}),
                        _rollback(interval=1.0, checkpoint_cost=0.0, restart_cost=0.0),
                    ),
                ),
                seed=7,
            )
        )

    r3 = run_nmr(3)
    held = r3.events["votes_held"]
    rate3 = r3.events["votes_uncorrected"] / held
    expected = expected_uncorrected_vote_rate(3, p)
    se = math.sqrt(expected * (1 - expected) / held)
    within = abs(rate3 - expected) <= 3 * se

    r5 = run_nmr(5)
    rate5 = r5.events["votes_uncorrected"] / r5.events["votes_held"]
    elapsed = time.perf_counter() - start
    _verdict(
        "criterion 7: uncorrected-vote rate within 3 SE of the binomial form; "
        "five replicas strictly lower",
        held >= 100000 and within and rate5 < rate3 and elapsed < 60.0,
        f"measured={rate3:.3e} vs expected={expected:.3e} over {held} votes; "
        f"N=5 rate={rate5:.3e}; {elapsed:.1f} s",
    )


def test_criterion_8_pattern_behavior_orderings():
    from resilang.synthesis import PatternInstance

    def stats(values):
        mean = sum(values) / len(values)
        var = sum((v - mean) ** 2 for v in values) / (len(values) - 1)
        return mean, math.sqrt(var / len(values))

    def run_solution(*instances, work=1000.0):
        return run_simulation(
            SimConfig(
                system=MTBE_1000,
                workload=Workload(total_work=work),
                solution=SimSolution("dynamic-state", tuple(instances)),
                seed=11,
                trials=300,
                per_trial=True,
            )
        )

    rb = run_solution(_rollback())
    ri = run_solution(PatternInstance("reinitialization", {"cost": 30.0}))
    lost_rb, se_rb = stats([t["overhead_breakdown"]["lost_work"] for t in rb.per_trial])
    lost_ri, se_ri = stats([t["overhead_breakdown"]["lost_work"] for t in ri.per_trial])
    reinit_ok = lost_ri >= lost_rb - 2 * (se_rb + se_ri)

    rf = run_solution(
        PatternInstance("rollforward", {"log_cost": 0.05, "replay_cost": 15.0}), work=2000.0
    )
    rb2 = run_solution(_rollback(), work=2000.0)

    def per_event(report):
        values = []
        for trial in report.per_trial:
            handled = trial["events"]["recovered"]
            if handled:
                values.append(
                    (
                        trial["overhead_breakdown"]["recovery"]
                        + trial["overhead_breakdown"]["lost_work"]
                    )
                    / handled
                )
        return stats(values)

    pe_rf, se_rf = per_event(rf)
    pe_rb, se_rb2 = per_event(rb2)
    # replay_cost 15 < R + tau/2 = 80
    rollforward_ok = pe_rf < pe_rb + 2 * (se_rf + se_rb2) and pe_rf < pe_rb
    _verdict(
        "criterion 8: reinitialization loses at least as much work as rollback; "
        "rollforward per-event time beats rollback when replay is cheap",
        reinit_ok and rollforward_ok,
        f"lost {lost_ri:.0f} vs {lost_rb:.0f} s; per-event {pe_rf:.1f} vs {pe_rb:.1f} s",
    )


def test_criterion_9_determinism_suite():
    cfg = SimConfig(
        system=MTBE_1000,
        workload=Workload(total_work=5000.0),
        solution=SimSolution("dynamic-state", (_rollback(),)),
        seed=99,
        trials=60,
        per_trial=True,
    )
    report_seq = run_simulation(cfg).to_json()
    report_par = run_simulation(cfg, workers=4).to_json()
    sim_ok = report_seq == report_par

    graph = build_language_graph(builtin_catalog())
    dot_ok = export_dot(graph) == export_dot(graph)
    json_text = export_graph_json(graph)
    json_ok = json_text == export_graph_json(graph_from_json(json_text))

    from resilang.catalog import catalog_to_json
    from resilang.cli import main as cli_main

    catalog_text = catalog_to_json(builtin_catalog())
    reload_ok = load_catalog(catalog_text).patterns == dict(builtin_catalog().patterns)

    import io
    from contextlib import redirect_stdout

    buffers = []
    for _ in range(2):
        buf = io.StringIO()
        with redirect_stdout(buf):
            code = cli_main(
                ["synth", "--fault-model", "failure", "--capability", "recovery", "--json"]
            )
        assert code == 0
        buffers.append(buf.getvalue())
    cli_ok = buffers[0] == buffers[1] and json.loads(buffers[0])

    _verdict(
        "criterion 9: simulator byte-identical across worker counts; exports byte-identical; "
        "CLI JSON round-trips",
        bool(sim_ok and dot_ok and json_ok and reload_ok and cli_ok),
        "sim/dot/json/catalog/cli all stable",
    )

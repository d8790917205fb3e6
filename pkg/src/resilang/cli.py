"""Command-line front end for scripted and CI use.

Exit codes are stable: 0 success, 1 validation violations found, 2 usage
error, 3 unsatisfiable query, 4 runtime failure. Human-readable tables go
to stdout with fixed decimal formatting; `--json` switches to the
canonical JSON forms; diagnostics go to stderr.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__
from .catalog import (
    Capability,
    Catalog,
    CatalogError,
    FaultModelClass,
    PatternClass,
    builtin_catalog,
    catalog_to_json,
    load_catalog,
    validate_catalog,
)
from .costmodel import COST_COMPONENTS, CostWeights
from .graph import EdgeOverlay, GraphError, build_language_graph, export_dot, export_graph_json, validate_graph
from .simulator import SimConfig, SimulationError, run_simulation, sweep
from .synthesis import (
    ANY_DOMAIN,
    DesignQuery,
    EntryMode,
    SynthesisError,
    UnsatisfiableQueryError,
    candidates_to_json,
    explain,
    mode_narrative,
    synthesize,
)

EXIT_OK = 0
EXIT_VIOLATIONS = 1
EXIT_USAGE = 2
EXIT_UNSATISFIABLE = 3
EXIT_RUNTIME = 4


class _CliParser(argparse.ArgumentParser):
    def error(self, message: str) -> None:  # type: ignore[override]
        self.print_usage(sys.stderr)
        print(f"error: {message}", file=sys.stderr)
        raise SystemExit(EXIT_USAGE)


def _load_catalog_arg(path: str | None) -> Catalog:
    if path is None:
        return builtin_catalog()
    return load_catalog(Path(path).read_text(encoding="utf-8"))


def _load_overlay_arg(path: str | None) -> EdgeOverlay | None:
    if path is None:
        return None
    return EdgeOverlay.from_json(Path(path).read_text(encoding="utf-8"))


def _parse_class(text: str) -> PatternClass:
    for cls in PatternClass:
        if cls.value.lower() == text.lower():
            return cls
    raise ValueError(f"unknown pattern class {text!r}")


def _parse_enum_list(text: str, enum_cls: type) -> frozenset:
    values = []
    for chunk in text.split(","):
        chunk = chunk.strip()
        if not chunk:
            continue
        match = next((v for v in enum_cls if v.value.lower() == chunk.lower()), None)
        if match is None:
            raise ValueError(f"unknown {enum_cls.__name__} value {chunk!r}")
        values.append(match)
    return frozenset(values)


_MODE_ALIASES = {
    "domain-first": EntryMode.DOMAIN_FIRST,
    "fault-model-first": EntryMode.FAULT_MODEL_FIRST,
    "capability-first": EntryMode.CAPABILITY_FIRST,
    "implementation-first": EntryMode.IMPLEMENTATION_FIRST,
}


def _parse_weights(text: str) -> CostWeights:
    parts = [p.strip() for p in text.split(",")]
    if len(parts) != 5:
        raise ValueError("weights take exactly five comma-separated numbers")
    values = [float(p) for p in parts]
    return CostWeights(**dict(zip(COST_COMPONENTS, values)))


def _table(rows: list[list[str]], header: list[str]) -> str:
    widths = [len(h) for h in header]
    for row in rows:
        for i, cell in enumerate(row):
            widths[i] = max(widths[i], len(cell))
    lines = [
        "  ".join(h.ljust(widths[i]) for i, h in enumerate(header)),
        "  ".join("-" * widths[i] for i in range(len(header))),
    ]
    for row in rows:
        lines.append("  ".join(cell.ljust(widths[i]) for i, cell in enumerate(row)))
    return "\n".join(lines)


# ---- catalog subcommands --------------------------------------------------


def _cmd_catalog_list(args: argparse.Namespace) -> int:
    catalog = _load_catalog_arg(args.catalog)
    patterns = [catalog.patterns[pid] for pid in sorted(catalog.patterns)]
    if args.pattern_class:
        cls = _parse_class(args.pattern_class)
        patterns = [p for p in patterns if p.pattern_class is cls]
    if args.json:
        doc = [p.to_dict() for p in patterns]
        print(json.dumps(doc, sort_keys=True, indent=2))
        return EXIT_OK
    rows = [
        [
            p.id,
            p.pattern_class.value,
            ",".join(sorted(h.value for h in p.handles)) or "-",
            ",".join(sorted(c.value for c in p.capabilities)) or "-",
            str(p.complexity),
        ]
        for p in patterns
    ]
    print(_table(rows, ["id", "class", "handles", "capabilities", "complexity"]))
    return EXIT_OK


def _cmd_catalog_show(args: argparse.Namespace) -> int:
    catalog = _load_catalog_arg(args.catalog)
    pattern = catalog.get(args.id)
    if args.json:
        print(json.dumps(pattern.to_dict(), sort_keys=True, indent=2))
        return EXIT_OK
    print(f"{pattern.name} ({pattern.id}) [{pattern.pattern_class.value}]")
    if pattern.parents:
        print(f"  derivative of: {', '.join(pattern.parents)}")
    print(f"  handles:       {', '.join(sorted(h.value for h in pattern.handles)) or '-'}")
    print(f"  capabilities:  {', '.join(sorted(c.value for c in pattern.capabilities)) or '-'}")
    print(f"  complexity:    {pattern.complexity}")
    for label in ("problem", "solution", "forces", "consequences"):
        print(f"  {label}: {getattr(pattern, label)}")
    if pattern.parameters:
        print("  parameters:")
        for spec in pattern.parameters:
            print(f"    {spec.name} ({spec.unit}) default {spec.default:g}")
    return EXIT_OK


def _cmd_catalog_validate(args: argparse.Namespace) -> int:
    catalog = _load_catalog_arg(args.catalog)
    violations = validate_catalog(catalog)
    for violation in violations:
        print(str(violation), file=sys.stderr)
    print(f"{len(catalog)} patterns, {len(violations)} violation(s)")
    return EXIT_VIOLATIONS if violations else EXIT_OK


def _cmd_catalog_export(args: argparse.Namespace) -> int:
    catalog = _load_catalog_arg(args.catalog)
    sys.stdout.write(catalog_to_json(catalog))
    return EXIT_OK


# ---- graph subcommands ------------------------------------------------------


def _cmd_graph_export(args: argparse.Namespace) -> int:
    catalog = _load_catalog_arg(args.catalog)
    graph = build_language_graph(catalog, _load_overlay_arg(args.overlay))
    if args.format == "dot":
        sys.stdout.write(export_dot(graph))
    else:
        sys.stdout.write(export_graph_json(graph))
    return EXIT_OK


def _cmd_graph_validate(args: argparse.Namespace) -> int:
    catalog = _load_catalog_arg(args.catalog)
    graph = build_language_graph(catalog, _load_overlay_arg(args.overlay))
    violations = validate_graph(graph)
    for violation in violations:
        print(str(violation), file=sys.stderr)
    print(f"{len(graph.vertices)} vertices, {len(graph.edges)} edges, {len(violations)} violation(s)")
    return EXIT_VIOLATIONS if violations else EXIT_OK


# ---- synth ------------------------------------------------------------------


def _cmd_synth(args: argparse.Namespace) -> int:
    catalog = _load_catalog_arg(args.catalog)
    graph = build_language_graph(catalog, _load_overlay_arg(args.overlay))
    fault_models = _parse_enum_list(args.fault_model, FaultModelClass)
    capabilities = _parse_enum_list(args.capability, Capability)
    mode = _MODE_ALIASES.get(args.mode.lower())
    if mode is None:
        raise ValueError(f"unknown entry mode {args.mode!r}")
    seeds = frozenset(s.strip() for s in args.seeds.split(",") if s.strip()) if args.seeds else frozenset()
    exclude = (
        frozenset(s.strip() for s in args.exclude.split(",") if s.strip())
        if args.exclude
        else frozenset()
    )
    query = DesignQuery(
        fault_models=fault_models,
        capabilities=capabilities,
        domain=args.domain.lower() if args.domain.lower() == ANY_DOMAIN else args.domain,
        entry_mode=mode,
        seed_patterns=seeds,
        exclude=exclude,
        weights=_parse_weights(args.weights) if args.weights else CostWeights(),
        max_candidates=args.top,
    )
    candidates = synthesize(graph, catalog, query)
    if args.json:
        sys.stdout.write(candidates_to_json(candidates))
        return EXIT_OK
    print(mode_narrative(query))
    rows = [
        [
            str(rank + 1),
            f"{c.score:.6f}",
            c.state_binding,
            "+".join(sorted(c.instance_ids())),
            " > ".join(c.sequence),
        ]
        for rank, c in enumerate(candidates)
    ]
    print(_table(rows, ["rank", "score", "domain", "patterns", "sequence"]))
    if args.explain and candidates:
        print()
        print(explain(graph, candidates[0]))
    return EXIT_OK


# ---- sim --------------------------------------------------------------------


def _read_sim_config(args: argparse.Namespace) -> SimConfig:
    cfg = SimConfig.from_json(Path(args.config).read_text(encoding="utf-8"))
    overrides: dict[str, object] = {}
    if args.seed is not None:
        overrides["seed"] = args.seed
    if args.trials is not None:
        overrides["trials"] = args.trials
    if getattr(args, "trace", None):
        overrides["trace"] = True
    if overrides:
        data = cfg.to_dict()
        data.update(overrides)
        cfg = SimConfig.from_dict(data)
    return cfg


def _cmd_sim_run(args: argparse.Namespace) -> int:
    catalog = _load_catalog_arg(args.catalog)
    cfg = _read_sim_config(args)
    report = run_simulation(cfg, catalog, workers=args.workers)
    if args.trace and report.trace is not None:
        with open(args.trace, "w", encoding="utf-8") as fh:
            for event in report.trace:
                fh.write(json.dumps(event.to_dict(), sort_keys=True) + "\n")
    if args.json:
        sys.stdout.write(report.to_json())
        return EXIT_OK
    print(f"trials:           {cfg.trials}")
    print(f"makespan mean:    {report.makespan_mean:.4f} s")
    print(f"makespan p50/p95: {report.makespan_p50:.4f} / {report.makespan_p95:.4f} s")
    print(f"efficiency mean:  {report.efficiency_mean:.6f}")
    print(f"aborted trials:   {report.aborted_trials}")
    print("events: " + ", ".join(f"{k}={v}" for k, v in report.events.items() if v))
    print(
        "overheads (mean s): "
        + ", ".join(f"{k}={v:.4f}" for k, v in report.overhead_breakdown.items())
    )
    return EXIT_OK


def _parse_grid(specs: list[str]) -> dict[str, list[float]]:
    grid: dict[str, list[float]] = {}
    for spec in specs:
        name, _, values = spec.partition("=")
        if not values:
            raise ValueError(f"bad grid spec {spec!r}; expected param=v1,v2,...")
        grid[name.strip()] = [float(v) for v in values.split(",") if v.strip()]
    return grid


def _cmd_sim_sweep(args: argparse.Namespace) -> int:
    catalog = _load_catalog_arg(args.catalog)
    cfg = _read_sim_config(args)
    grid = _parse_grid(args.grid)
    table = sweep(cfg, grid, catalog, workers=args.workers)
    if args.json:
        sys.stdout.write(table.to_json())
    else:
        sys.stdout.write(table.to_csv())
    return EXIT_OK


# ---- parser ----------------------------------------------------------------


def _build_parser() -> _CliParser:
    parser = _CliParser(prog="resilang", description="resilience pattern-language toolkit")
    parser.add_argument("--version", action="version", version=f"resilang {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p_catalog = sub.add_parser("catalog", help="catalog inspection and validation")
    catalog_sub = p_catalog.add_subparsers(dest="subcommand", required=True)
    p = catalog_sub.add_parser("list", help="list patterns")
    p.add_argument("--class", dest="pattern_class", default=None, help="filter by pattern class")
    p.add_argument("--catalog", default=None, help="user catalog JSON file")
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_catalog_list)
    p = catalog_sub.add_parser("show", help="show one pattern")
    p.add_argument("id")
    p.add_argument("--catalog", default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_catalog_show)
    p = catalog_sub.add_parser("validate", help="validate a catalog")
    p.add_argument("--catalog", default=None)
    p.set_defaults(func=_cmd_catalog_validate)
    p = catalog_sub.add_parser("export", help="emit the canonical catalog document")
    p.add_argument("--catalog", default=None)
    p.set_defaults(func=_cmd_catalog_export)

    p_graph = sub.add_parser("graph", help="pattern-language graph")
    graph_sub = p_graph.add_subparsers(dest="subcommand", required=True)
    p = graph_sub.add_parser("export", help="export the graph")
    p.add_argument("--format", choices=("dot", "json"), default="dot")
    p.add_argument("--catalog", default=None)
    p.add_argument("--overlay", default=None)
    p.set_defaults(func=_cmd_graph_export)
    p = graph_sub.add_parser("validate", help="validate the graph")
    p.add_argument("--catalog", default=None)
    p.add_argument("--overlay", default=None)
    p.set_defaults(func=_cmd_graph_validate)

    p = sub.add_parser("synth", help="synthesize ranked solutions for a design query")
    p.add_argument("--fault-model", required=True, help="comma-separated: fault,error,failure")
    p.add_argument("--capability", required=True, help="comma-separated: detection,containment,recovery,masking")
    p.add_argument("--domain", default=ANY_DOMAIN, help="state pattern id or 'any'")
    p.add_argument("--mode", default="domain-first", help="|".join(_MODE_ALIASES))
    p.add_argument("--seeds", default=None, help="comma-separated structural ids to require")
    p.add_argument("--exclude", default=None, help="comma-separated ids to exclude")
    p.add_argument("--weights", default=None, help="five comma-separated non-negative numbers")
    p.add_argument("--top", type=int, default=50, help="maximum candidates returned")
    p.add_argument("--explain", action="store_true", help="narrate the best candidate")
    p.add_argument("--catalog", default=None)
    p.add_argument("--overlay", default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_synth)

    p_sim = sub.add_parser("sim", help="fault-injection simulation")
    sim_sub = p_sim.add_subparsers(dest="subcommand", required=True)
    p = sim_sub.add_parser("run", help="run a simulation config")
    p.add_argument("--config", required=True, help="SimConfig JSON file")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--trace", default=None, help="write the event trace as JSON lines")
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--catalog", default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_sim_run)
    p = sim_sub.add_parser("sweep", help="parameter sweep over a config")
    p.add_argument("--config", required=True)
    p.add_argument("--grid", action="append", required=True, help="param=v1,v2,... (repeatable)")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--trials", type=int, default=None)
    p.add_argument("--workers", type=int, default=None)
    p.add_argument("--catalog", default=None)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_sim_sweep)

    return parser


def main(argv: list[str] | None = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return args.func(args)
    except UnsatisfiableQueryError as exc:
        print(f"unsatisfiable query: {exc.explanation}", file=sys.stderr)
        return EXIT_UNSATISFIABLE
    except (ValueError, CatalogError, GraphError, SynthesisError, SimulationError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_RUNTIME


if __name__ == "__main__":
    raise SystemExit(main())

"""HTTP JSON API over the catalog, graph, synthesis, and simulation jobs.

All routes live under /api/v1. The catalog and graph are immutable
snapshots taken at startup; simulation and sweep jobs run asynchronously
on a bounded worker pool and are retained in memory (LRU, most recent
1000) with an optional append-only journal for restart recovery.
"""
from __future__ import annotations

import argparse
import json
import os
import threading
import time
import uuid
from collections import OrderedDict
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from pathlib import Path
from typing import Any

from fastapi import FastAPI, Request
from fastapi.responses import JSONResponse, PlainTextResponse
from fastapi.staticfiles import StaticFiles

from . import __version__
from .catalog import Catalog, CatalogError, builtin_catalog, load_catalog, validate_catalog
from .graph import EdgeOverlay, GraphError, build_language_graph, export_dot, export_graph_json
from .simulator import SimConfig, SimulationError, run_simulation, sweep
from .synthesis import (
    DesignQuery,
    SynthesisError,
    UnsatisfiableQueryError,
    explain,
    mode_narrative,
    synthesize,
)

JOB_RETENTION = 1000


@dataclass
class JobRecord:
    id: str
    kind: str  # "Simulation" | "Sweep"
    status: str = "Queued"  # Queued -> Running -> Done | Failed
    submitted_at: float = 0.0
    finished_at: float | None = None
    request: dict[str, Any] = field(default_factory=dict)
    result: dict[str, Any] | None = None
    error: str | None = None

    def to_dict(self) -> dict[str, Any]:
        out: dict[str, Any] = {
            "id": self.id,
            "kind": self.kind,
            "status": self.status,
            "submitted_at": self.submitted_at,
            "finished_at": self.finished_at,
            "request": self.request,
        }
        if self.status == "Done":
            out["result"] = self.result
        if self.status == "Failed":
            out["error"] = self.error
        return out


class JobStore:
    """In-memory job registry with LRU retention and tombstones."""

    def __init__(self, retention: int = JOB_RETENTION, journal: Path | None = None):
        self._jobs: OrderedDict[str, JobRecord] = OrderedDict()
        self._evicted: set[str] = set()
        self._lock = threading.Lock()
        self._retention = retention
        self._journal = journal
        if journal is not None and journal.exists():
            self._replay_journal(journal)

    def _replay_journal(self, journal: Path) -> None:
        for line in journal.read_text(encoding="utf-8").splitlines():
            line = line.strip()
            if not line:
                continue
            try:
                data = json.loads(line)
                record = JobRecord(
                    id=data["id"],
                    kind=data["kind"],
                    status=data["status"],
                    submitted_at=data.get("submitted_at", 0.0),
                    finished_at=data.get("finished_at"),
                    request=data.get("request", {}),
                    result=data.get("result"),
                    error=data.get("error"),
                )
            except (KeyError, ValueError, json.JSONDecodeError):
                continue  # a torn journal line is not fatal
            self._insert(record)

    def _insert(self, record: JobRecord) -> None:
        self._jobs[record.id] = record
        while len(self._jobs) > self._retention:
            evicted_id, _ = self._jobs.popitem(last=False)
            self._evicted.add(evicted_id)

    def create(self, kind: str, request: dict[str, Any]) -> JobRecord:
        record = JobRecord(
            id=uuid.uuid4().hex[:12],
            kind=kind,
            submitted_at=time.time(),
            request=request,
        )
        with self._lock:
            self._insert(record)
        return record

    def update(self, job_id: str, **changes: Any) -> None:
        with self._lock:
            record = self._jobs.get(job_id)
            if record is None:
                return
            for key, value in changes.items():
                setattr(record, key, value)
            if record.status in ("Done", "Failed") and self._journal is not None:
                with self._journal.open("a", encoding="utf-8") as fh:
                    fh.write(json.dumps(record.to_dict(), sort_keys=True) + "\n")

    def get(self, job_id: str) -> tuple[JobRecord | None, bool]:
        """(record, evicted) pair; evicted means the id existed but was dropped."""
        with self._lock:
            record = self._jobs.get(job_id)
            if record is not None:
                self._jobs.move_to_end(job_id)
                return record, False
            return None, job_id in self._evicted


def _error_body(code: str, message: str) -> dict[str, str]:
    return {"code": code, "message": message}


def create_app(
    catalog: Catalog | None = None,
    overlay: EdgeOverlay | None = None,
    *,
    workers: int | None = None,
    retention: int = JOB_RETENTION,
    journal: Path | None = None,
    static_dir: Path | None = None,
) -> FastAPI:
    catalog = catalog or builtin_catalog()
    violations = validate_catalog(catalog)
    if violations:
        raise CatalogError(
            "catalog invalid at startup: " + "; ".join(str(v) for v in violations)
        )
    graph = build_language_graph(catalog, overlay)

    app = FastAPI(title="resilang", version=__version__)
    store = JobStore(retention=retention, journal=journal)
    pool = ThreadPoolExecutor(max_workers=workers or os.cpu_count() or 2)
    app.state.jobs = store
    app.state.pool = pool

    graph_json = export_graph_json(graph)
    graph_dot = export_dot(graph)
    pattern_summaries = [
        {
            "id": p.id,
            "name": p.name,
            "class": p.pattern_class.value,
            "capabilities": sorted(c.value for c in p.capabilities),
            "handles": sorted(h.value for h in p.handles),
            "complexity": p.complexity,
        }
        for p in (catalog.patterns[pid] for pid in sorted(catalog.patterns))
    ]

    @app.exception_handler(404)
    async def not_found(request: Request, exc: Exception) -> JSONResponse:
        return JSONResponse(status_code=404, content=_error_body("not_found", "no such route or resource"))

    @app.get("/api/v1/health")
    def health() -> dict[str, Any]:
        return {"status": "ok", "version": __version__, "patterns": len(catalog)}

    @app.get("/api/v1/patterns")
    def patterns() -> list[dict[str, Any]]:
        return pattern_summaries

    @app.get("/api/v1/patterns/{pattern_id}")
    def pattern_detail(pattern_id: str) -> JSONResponse:
        if pattern_id not in catalog.patterns:
            return JSONResponse(
                status_code=404, content=_error_body("unknown_pattern", f"no pattern {pattern_id!r}")
            )
        return JSONResponse(content=catalog.patterns[pattern_id].to_dict())

    @app.get("/api/v1/graph")
    def graph_export() -> JSONResponse:
        return JSONResponse(content=json.loads(graph_json))

    @app.get("/api/v1/graph.dot")
    def graph_dot_export() -> PlainTextResponse:
        return PlainTextResponse(content=graph_dot, media_type="text/vnd.graphviz")

    @app.post("/api/v1/synthesize")
    async def synthesize_route(request: Request) -> JSONResponse:
        try:
            body = await request.json()
        except json.JSONDecodeError:
            return JSONResponse(status_code=400, content=_error_body("bad_json", "request body is not JSON"))
        try:
            query = DesignQuery.from_dict(body)
            candidates = synthesize(graph, catalog, query)
        except UnsatisfiableQueryError as exc:
            return JSONResponse(
                status_code=422,
                content=_error_body("unsatisfiable_query", exc.explanation),
            )
        except (SynthesisError, CatalogError) as exc:
            return JSONResponse(status_code=400, content=_error_body("bad_query", str(exc)))
        return JSONResponse(
            content={
                "query": query.to_dict(),
                "narrative": mode_narrative(query),
                "candidates": [c.to_dict() for c in candidates],
                "explanations": [explain(graph, c) for c in candidates],
            }
        )

    def _submit(kind: str, body: dict[str, Any], runner: Any) -> JSONResponse:
        record = store.create(kind, body)

        def run() -> None:
            store.update(record.id, status="Running")
            try:
                result = runner()
            except (SimulationError, CatalogError, SynthesisError, ValueError) as exc:
                store.update(record.id, status="Failed", error=str(exc), finished_at=time.time())
                return
            store.update(record.id, status="Done", result=result, finished_at=time.time())

        pool.submit(run)
        return JSONResponse(status_code=202, content={"job_id": record.id})

    @app.post("/api/v1/simulate")
    async def simulate_route(request: Request) -> JSONResponse:
        try:
            body = await request.json()
        except json.JSONDecodeError:
            return JSONResponse(status_code=400, content=_error_body("bad_json", "request body is not JSON"))
        try:
            cfg = SimConfig.from_dict(body)
        except (SimulationError, ValueError, TypeError, KeyError) as exc:
            return JSONResponse(status_code=400, content=_error_body("bad_config", str(exc)))
        return _submit("Simulation", body, lambda: run_simulation(cfg, catalog).to_dict())

    @app.post("/api/v1/sweep")
    async def sweep_route(request: Request) -> JSONResponse:
        try:
            body = await request.json()
        except json.JSONDecodeError:
            return JSONResponse(status_code=400, content=_error_body("bad_json", "request body is not JSON"))
        if not isinstance(body, dict) or "config" not in body or "grid" not in body:
            return JSONResponse(
                status_code=400,
                content=_error_body("bad_request", 'sweep body must carry "config" and "grid"'),
            )
        try:
            cfg = SimConfig.from_dict(body["config"])
            grid = {str(k): [float(v) for v in vs] for k, vs in body["grid"].items()}
        except (SimulationError, ValueError, TypeError, AttributeError) as exc:
            return JSONResponse(status_code=400, content=_error_body("bad_config", str(exc)))
        return _submit("Sweep", body, lambda: sweep(cfg, grid, catalog).to_dict())

    @app.get("/api/v1/jobs/{job_id}")
    def job_detail(job_id: str) -> JSONResponse:
        record, evicted = store.get(job_id)
        if record is None:
            if evicted:
                return JSONResponse(
                    status_code=410, content=_error_body("evicted", "job result no longer retained")
                )
            return JSONResponse(status_code=404, content=_error_body("unknown_job", f"no job {job_id!r}"))
        return JSONResponse(content=record.to_dict())

    if static_dir is not None and static_dir.is_dir():
        app.mount("/", StaticFiles(directory=str(static_dir), html=True), name="ui")

    return app


def main(argv: list[str] | None = None) -> int:
    parser = argparse.ArgumentParser(prog="resilang-serve", description="resilang HTTP API server")
    parser.add_argument(
        "--bind",
        default=None,
        help="host:port to bind (overrides RESILANG_BIND; default 127.0.0.1:8351)",
    )
    parser.add_argument("--catalog", type=Path, default=None, help="user catalog JSON file")
    parser.add_argument("--overlay", type=Path, default=None, help="edge overlay JSON file")
    parser.add_argument("--workers", type=int, default=None, help="max concurrent jobs")
    parser.add_argument("--journal", type=Path, default=None, help="append-only job journal file")
    parser.add_argument("--static", type=Path, default=None, help="static UI bundle directory")
    args = parser.parse_args(argv)

    bind = args.bind or os.environ.get("RESILANG_BIND") or "127.0.0.1:8351"
    host, _, port_text = bind.rpartition(":")
    if not host or not port_text.isdigit():
        print(f"error: bad bind address {bind!r} (expected host:port)")
        return 2

    try:
        catalog = (
            load_catalog(args.catalog.read_text(encoding="utf-8")) if args.catalog else builtin_catalog()
        )
        overlay = (
            EdgeOverlay.from_json(args.overlay.read_text(encoding="utf-8")) if args.overlay else None
        )
        app = create_app(
            catalog,
            overlay,
            workers=args.workers,
            journal=args.journal,
            static_dir=args.static,
        )
    except (CatalogError, GraphError, OSError) as exc:
        print(f"startup validation failed: {exc}")
        return 1

    import uvicorn

    uvicorn.run(app, host=host, port=int(port_text), log_level="info")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())

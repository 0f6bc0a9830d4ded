"""HTTP control surface for runs.

A thin FastAPI layer over the run engine: list and inspect runs, resolve
intervention gates (with optimistic version locking), read usage and
trace data, and follow run events over server-sent events. The console
frontend consumes exactly this surface.
"""

from __future__ import annotations

import json
import time
from typing import Iterator

from fastapi import Body, FastAPI, HTTPException, Query
from fastapi.responses import StreamingResponse

from researchflow.errors import (
    GateAlreadyDecided,
    GateVersionConflict,
    InvalidConfig,
    UnknownGate,
    UnknownRun,
)
from researchflow.orchestrator.config import load_config
from researchflow.orchestrator.engine import RunEngine

EVENT_IDLE_TIMEOUT_S = 2.0
EVENT_POLL_S = 0.05


class RunManager:
    """In-process registry of engines keyed by run id."""

    def __init__(self):
        self.engines: dict[str, RunEngine] = {}
        self.statuses: dict[str, str] = {}

    def register(self, engine: RunEngine) -> RunEngine:
        self.engines[engine.manifest.run_id] = engine
        self.statuses[engine.manifest.run_id] = engine.manifest.stage
        return engine

    def create(self, config_path: str) -> RunEngine:
        return self.register(RunEngine(load_config(config_path)))

    def get(self, run_id: str) -> RunEngine:
        if run_id not in self.engines:
            raise UnknownRun(f"no run {run_id!r}")
        return self.engines[run_id]

    def advance(self, run_id: str) -> str:
        status = self.get(run_id).run()
        self.statuses[run_id] = status
        return status


def _run_view(engine: RunEngine, status: str | None = None) -> dict:
    manifest = engine.manifest
    return {
        "run_id": manifest.run_id,
        "mode": manifest.mode,
        "stage": manifest.stage,
        "status": status,
        "open_gates": [g.to_dict() for g in manifest.open_gates()],
        "logical_clock": manifest.logical_clock,
        "budgets": manifest.budgets.to_dict(),
    }


def create_app(manager: RunManager | None = None) -> FastAPI:
    manager = manager or RunManager()
    app = FastAPI(title="researchflow control API")
    app.state.manager = manager

    @app.get("/runs")
    def list_runs() -> list[dict]:
        return [_run_view(engine, manager.statuses.get(run_id))
                for run_id, engine in sorted(manager.engines.items())]

    @app.post("/runs", status_code=201)
    def start_run(payload: dict = Body(...)) -> dict:
        config_path = payload.get("config_path")
        if not config_path:
            raise HTTPException(422, "config_path is required")
        try:
            engine = manager.create(config_path)
        except InvalidConfig as exc:
            raise HTTPException(422, str(exc)) from exc
        status = engine.manifest.stage
        if payload.get("autostart", True):
            status = manager.advance(engine.manifest.run_id)
        return _run_view(engine, status)

    def _engine(run_id: str) -> RunEngine:
        try:
            return manager.get(run_id)
        except UnknownRun as exc:
            raise HTTPException(404, str(exc)) from exc

    @app.get("/runs/{run_id}")
    def get_run(run_id: str) -> dict:
        return _run_view(_engine(run_id), manager.statuses.get(run_id))

    @app.get("/runs/{run_id}/gates")
    def list_gates(run_id: str) -> list[dict]:
        return [g.to_dict() for g in _engine(run_id).manifest.gates]

    @app.post("/runs/{run_id}/gates/{gate_id}/resolve")
    def resolve(run_id: str, gate_id: str,
                payload: dict = Body(...)) -> dict:
        engine = _engine(run_id)
        decision = payload.get("decision")
        if decision not in ("approved", "rejected"):
            raise HTTPException(422,
                                "decision must be approved or rejected")
        try:
            gate = engine.resolve_gate(
                gate_id, decision,
                operator=payload.get("operator", "operator"),
                note=payload.get("note", ""),
                expected_version=payload.get("version"))
        except UnknownGate as exc:
            raise HTTPException(404, str(exc)) from exc
        except (GateAlreadyDecided, GateVersionConflict) as exc:
            raise HTTPException(409, str(exc)) from exc
        status = engine.manifest.stage
        if payload.get("continue", True) and not engine.manifest.halted:
            status = manager.advance(run_id)
        return {"gate": gate.to_dict(), "run": _run_view(engine, status)}

    @app.get("/runs/{run_id}/usage")
    def usage(run_id: str) -> dict:
        engine = _engine(run_id)
        return {"ledger": engine.gateway.ledger_report(),
                "budgets": engine.manifest.budgets.to_dict()}

    @app.get("/runs/{run_id}/trace")
    def trace(run_id: str) -> dict:
        engine = _engine(run_id)
        return {"stage_records": [r.to_dict()
                                  for r in engine.manifest.stage_records],
                "events": list(engine.events)}

    @app.get("/runs/{run_id}/events")
    def events(run_id: str, after: int = Query(-1)) -> StreamingResponse:
        engine = _engine(run_id)

        def stream() -> Iterator[str]:
            cursor = after
            idle_since = time.monotonic()
            while True:
                pending = [e for e in list(engine.events)
                           if e["seq"] > cursor]
                for event in pending:
                    cursor = event["seq"]
                    idle_since = time.monotonic()
                    yield (f"id: {event['seq']}\n"
                           f"event: {event['type']}\n"
                           f"data: {json.dumps(event, sort_keys=True)}\n\n")
                terminal = engine.manifest.stage in ("complete", "halted")
                if terminal and not pending:
                    return
                if time.monotonic() - idle_since > EVENT_IDLE_TIMEOUT_S:
                    return
                time.sleep(EVENT_POLL_S)

        return StreamingResponse(stream(), media_type="text/event-stream")

    return app

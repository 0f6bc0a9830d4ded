"""Sandboxed stage execution with action-observation cycle accounting.

A stage run is one cycle: the workspace is materialized into the stage
directory, the entry script executes under sandbox limits, and the
observation (exit status, stdout/stderr, produced files) is digested
into a CycleRecord. Cycle indices are contiguous per stage, and the
study total is the sum over stages.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from pathlib import Path

from researchflow.analysis.plan import AnalysisStage
from researchflow.analysis.workspace import CodeWorkspace
from researchflow.errors import StageOutputMissing
from researchflow.safety.sandbox import (
    ExecutionLimits,
    ExecutionResult,
    enforce_limits,
)

PYTHON = "python3"


@dataclass
class CycleRecord:
    index: int
    action: str  # edit | execute | inspect
    observation_digest: str
    verdicts: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {"index": self.index, "action": self.action,
                "observation_digest": self.observation_digest,
                "verdicts": self.verdicts}


class CycleLog:
    """Per-stage cycle records with contiguity enforced on append."""

    def __init__(self):
        self._stages: dict[str, list[CycleRecord]] = {}

    def append(self, stage: str, action: str, observation: str,
               verdicts: list[str] | None = None) -> CycleRecord:
        records = self._stages.setdefault(stage, [])
        record = CycleRecord(
            index=len(records), action=action,
            observation_digest=hashlib.sha256(
                observation.encode("utf-8")).hexdigest()[:16],
            verdicts=list(verdicts or []))
        records.append(record)
        return record

    def stage_cycles(self, stage: str) -> int:
        return len(self._stages.get(stage, []))

    def study_total(self) -> int:
        return sum(len(r) for r in self._stages.values())

    def per_stage(self) -> dict[str, int]:
        return {name: len(records)
                for name, records in sorted(self._stages.items())}

    def verify_contiguous(self) -> bool:
        return all(
            [r.index for r in records] == list(range(len(records)))
            for records in self._stages.values())

    def to_jsonl(self) -> str:
        lines = []
        for stage in sorted(self._stages):
            for record in self._stages[stage]:
                lines.append(json.dumps(
                    {"stage": stage, **record.to_dict()}, sort_keys=True))
        return "\n".join(lines) + ("\n" if lines else "")


@dataclass
class StageExecution:
    stage: str
    result: ExecutionResult
    produced_files: list[str]
    cycle: CycleRecord
    missing_outputs: list[str] = field(default_factory=list)


def _snapshot(workdir: Path) -> set[str]:
    return {str(p.relative_to(workdir))
            for p in workdir.rglob("*") if p.is_file()}


def execute_stage(ws: CodeWorkspace, stage: AnalysisStage,
                  limits: ExecutionLimits, workdir: Path,
                  cycle_log: CycleLog,
                  require_outputs: bool = True) -> StageExecution:
    """Run one stage attempt in the sandbox and log the cycle.

    Declared outputs absent after a clean run raise StageOutputMissing;
    timeout/storage outcomes come back as the execution result status so
    the consensus loop can decide to revise.
    """
    workdir = Path(workdir)
    workdir.mkdir(parents=True, exist_ok=True)
    ws.materialize(workdir)
    before = _snapshot(workdir)

    entry = stage.entry or f"{stage.name}.py"
    result = enforce_limits([PYTHON, entry], workdir, limits)
    produced = sorted(_snapshot(workdir) - before)

    observation = json.dumps(
        {"status": result.status, "exit_code": result.exit_code,
         "stdout": result.stdout, "stderr": result.stderr,
         "produced": produced}, sort_keys=True)
    cycle = cycle_log.append(stage.name, "execute", observation)
    ws.execution_results.append(
        {"stage": stage.name, "status": result.status,
         "exit_code": result.exit_code, "produced": produced})

    missing = [out for out in stage.outputs
               if not (workdir / out).exists()]
    if result.ok and require_outputs and missing:
        raise StageOutputMissing(
            f"stage {stage.name!r} completed without declared outputs: "
            f"{missing}")
    return StageExecution(stage=stage.name, result=result,
                          produced_files=produced, cycle=cycle,
                          missing_outputs=missing)

"""Run manifest and the fixed stage graph.

Twelve stages: the nine workflow stages plus collection_wait and the
terminal complete/halted states. The only back edge is
re_evaluation -> methodology (taken when the re-evaluation decision
routes work back to the method agent); everything else is a straight
line ending at complete.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from researchflow.errors import BudgetExceeded, IllegalTransition
from researchflow.orchestrator.budgets import Budgets
from researchflow.orchestrator.gates import InterventionGate

STAGES = [
    "ideation", "methodology", "deployment", "collection_wait", "analysis",
    "re_evaluation", "visuals", "manuscript", "review", "document",
    "complete", "halted",
]

# stage -> allowed successors on a done record
STAGE_GRAPH: dict[str, list[str]] = {
    "ideation": ["methodology"],
    "methodology": ["deployment"],
    "deployment": ["collection_wait"],
    "collection_wait": ["analysis"],
    "analysis": ["re_evaluation"],
    "re_evaluation": ["visuals", "methodology"],  # the single back edge
    "visuals": ["manuscript"],
    "manuscript": ["review"],
    "review": ["document"],
    "document": ["complete"],
    "complete": [],
    "halted": [],
}

# re-evaluation decisions that send flow back to the method agent
BACK_EDGE_DECISIONS = {
    "PrecisionEnhancement", "StudyEnhancement", "TheoryRevision",
}


@dataclass
class StageRecord:
    stage: str
    status: str  # pending | running | done | failed
    started: int = 0  # logical ticks
    ended: int = 0
    tokens_used: int = 0
    cost: float = 0.0
    artifacts: list[str] = field(default_factory=list)

    def __post_init__(self):
        if self.tokens_used < 0:
            raise ValueError("tokens_used must be >= 0")
        if self.status == "done" and not self.artifacts:
            raise ValueError("a done stage must produce artifacts")

    def to_dict(self) -> dict:
        return {"stage": self.stage, "status": self.status,
                "started": self.started, "ended": self.ended,
                "tokens_used": self.tokens_used, "cost": self.cost,
                "artifacts": self.artifacts}

    @classmethod
    def from_dict(cls, data: dict) -> "StageRecord":
        return cls(**data)


@dataclass
class RunManifest:
    run_id: str
    mode: str  # autonomous | collaborative
    stage: str = "ideation"
    seed: int = 0
    budgets: Budgets = field(default_factory=Budgets)
    artifact_refs: dict[str, list[str]] = field(default_factory=dict)
    gates: list[InterventionGate] = field(default_factory=list)
    stage_records: list[StageRecord] = field(default_factory=list)
    logical_clock: int = 0

    def __post_init__(self):
        if self.mode not in ("autonomous", "collaborative"):
            raise ValueError(f"unknown mode {self.mode!r}")
        if self.stage not in STAGES:
            raise ValueError(f"unknown stage {self.stage!r}")

    def tick(self) -> int:
        self.logical_clock += 1
        return self.logical_clock

    def gate(self, gate_id: str) -> InterventionGate | None:
        for gate in self.gates:
            if gate.gate_id == gate_id:
                return gate
        return None

    def open_gates(self) -> list[InterventionGate]:
        return [g for g in self.gates if g.status == "open"]

    @property
    def halted(self) -> bool:
        return self.stage == "halted"

    def to_dict(self) -> dict:
        return {
            "run_id": self.run_id, "mode": self.mode, "stage": self.stage,
            "seed": self.seed, "budgets": self.budgets.to_dict(),
            "artifact_refs": {k: list(v)
                              for k, v in sorted(self.artifact_refs.items())},
            "gates": [g.to_dict() for g in self.gates],
            "stage_records": [r.to_dict() for r in self.stage_records],
            "logical_clock": self.logical_clock,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "RunManifest":
        return cls(
            run_id=data["run_id"], mode=data["mode"], stage=data["stage"],
            seed=data["seed"], budgets=Budgets.from_dict(data["budgets"]),
            artifact_refs={k: list(v)
                           for k, v in data["artifact_refs"].items()},
            gates=[InterventionGate.from_dict(g) for g in data["gates"]],
            stage_records=[StageRecord.from_dict(r)
                           for r in data["stage_records"]],
            logical_clock=data["logical_clock"],
        )


def advance(manifest: RunManifest, completed: StageRecord,
            decision: str | None = None) -> RunManifest:
    """Apply one completed stage record and move to the successor.

    A failed record halts the run. Budget charges happen before the
    transition; exceeding a cap halts the run without recording the
    overage."""
    if completed.status not in ("done", "failed"):
        raise IllegalTransition(
            f"cannot advance on a {completed.status!r} record")
    if completed.stage != manifest.stage:
        raise IllegalTransition(
            f"record for stage {completed.stage!r} but run is at "
            f"{manifest.stage!r}")
    if manifest.stage in ("complete", "halted"):
        raise IllegalTransition(f"run is terminal at {manifest.stage!r}")

    try:
        manifest.budgets.charge(tokens=completed.tokens_used,
                                cost=completed.cost)
    except BudgetExceeded:
        manifest.stage_records.append(completed)
        manifest.stage = "halted"
        raise

    manifest.stage_records.append(completed)
    if completed.status == "failed":
        manifest.stage = "halted"
        return manifest

    manifest.artifact_refs.setdefault(completed.stage, [])
    manifest.artifact_refs[completed.stage].extend(completed.artifacts)

    successors = STAGE_GRAPH[manifest.stage]
    if manifest.stage == "re_evaluation":
        target = ("methodology" if decision in BACK_EDGE_DECISIONS
                  else "visuals")
    else:
        target = successors[0]
    if target not in successors:
        raise IllegalTransition(
            f"{manifest.stage} -> {target} is not a declared edge")
    manifest.stage = target
    manifest.tick()
    return manifest

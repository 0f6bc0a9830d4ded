"""Run orchestration: manifest and stage graph, budgets, intervention
gates, artifact store, checkpoints, the run engine, config loading, and
the HTTP control surface."""

from researchflow.orchestrator.budgets import Budgets
from researchflow.orchestrator.manifest import (
    BACK_EDGE_DECISIONS,
    STAGE_GRAPH,
    STAGES,
    RunManifest,
    StageRecord,
    advance,
)
from researchflow.orchestrator.gates import (
    GATE_KINDS,
    InterventionGate,
    open_gate,
    resolve_gate,
)
from researchflow.orchestrator.artifacts import ArtifactStore
from researchflow.orchestrator.checkpoints import Checkpoint, CheckpointStore
from researchflow.orchestrator.config import RunConfig, load_config
from researchflow.orchestrator.engine import RunEngine

__all__ = [
    "ArtifactStore",
    "BACK_EDGE_DECISIONS",
    "Budgets",
    "Checkpoint",
    "CheckpointStore",
    "GATE_KINDS",
    "InterventionGate",
    "RunConfig",
    "RunEngine",
    "RunManifest",
    "STAGES",
    "STAGE_GRAPH",
    "StageRecord",
    "advance",
    "load_config",
    "open_gate",
    "resolve_gate",
]

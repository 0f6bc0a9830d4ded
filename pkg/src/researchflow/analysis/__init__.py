"""Data-analysis orchestration: exclusion-protocol planning, anchored-edit
code workspaces, sandboxed stage execution, and consensus review."""

from researchflow.analysis.plan import (
    AnalysisPlan,
    AnalysisStage,
    ExclusionRule,
    apply_exclusions,
    plan_analysis,
    topological_order,
)
from researchflow.analysis.workspace import (
    CodeWorkspace,
    EditBlock,
    apply_edit,
    replay,
)
from researchflow.analysis.stages import (
    CycleLog,
    CycleRecord,
    StageExecution,
    execute_stage,
)
from researchflow.analysis.consensus import (
    ConsensusVerdict,
    StageResolution,
    decide_votes,
    resolve_stage,
    seek_consensus,
)

__all__ = [
    "AnalysisPlan",
    "AnalysisStage",
    "CodeWorkspace",
    "ConsensusVerdict",
    "CycleLog",
    "CycleRecord",
    "EditBlock",
    "ExclusionRule",
    "StageExecution",
    "StageResolution",
    "apply_edit",
    "apply_exclusions",
    "decide_votes",
    "execute_stage",
    "plan_analysis",
    "replay",
    "resolve_stage",
    "seek_consensus",
    "topological_order",
]

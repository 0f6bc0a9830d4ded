"""Generic agent-node runtime: propose-validate-refine loops, sub-agent
spawning, reasoning traces, and judge arbitration."""

from researchflow.kernel.nodes import AgentKind, AgentNode, AgentRegistry
from researchflow.kernel.loop import (
    AcceptanceTest,
    CheckResult,
    IterationPolicy,
    ReasoningTrace,
    TaskEnvelope,
    TaskResult,
    TraceStep,
    run_task,
    should_replan,
)
from researchflow.kernel.judge import JudgeVerdict, arbitrate

__all__ = [
    "AgentKind",
    "AgentNode",
    "AgentRegistry",
    "AcceptanceTest",
    "CheckResult",
    "IterationPolicy",
    "JudgeVerdict",
    "ReasoningTrace",
    "TaskEnvelope",
    "TaskResult",
    "TraceStep",
    "arbitrate",
    "run_task",
    "should_replan",
]

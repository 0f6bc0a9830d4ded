"""Propose-validate-refine loop with the three iteration policies.

Initiation, replanning, and termination are explicit: sub-agent initiation
lives in the registry, replanning fires when validation fails outright or
marginal improvement stalls below the patience threshold, and termination
happens on acceptance or iteration exhaustion.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass, field
from enum import Enum
from typing import Callable

from researchflow.kernel.nodes import AgentNode


@dataclass(frozen=True)
class IterationPolicy:
    max_iterations: int = 8
    recursion_limit: int = 4
    patience_epsilon: float = 0.02
    patience_window: int = 2

    def __post_init__(self):
        if self.max_iterations < 1:
            raise ValueError("max_iterations must be >= 1")
        if self.patience_window < 1:
            raise ValueError("patience_window must be >= 1")
        if self.patience_epsilon < 0:
            raise ValueError("patience_epsilon must be >= 0")


@dataclass
class CheckResult:
    passed: bool
    score: float
    # Hard failure means validation itself broke (tool error, malformed
    # candidate) as opposed to a candidate that merely scored low.
    hard_failure: bool = False

    def __post_init__(self):
        if not 0.0 <= self.score <= 1.0:
            raise ValueError(f"score {self.score} outside [0, 1]")


@dataclass
class AcceptanceTest:
    name: str
    check: Callable[[str], CheckResult]


@dataclass
class TaskEnvelope:
    goal: str
    acceptance_tests: list[AcceptanceTest]
    input_artifacts: list[str] = field(default_factory=list)
    policy: IterationPolicy = field(default_factory=IterationPolicy)

    def __post_init__(self):
        if not self.acceptance_tests:
            raise ValueError("envelope requires at least one acceptance test")


class StepKind(str, Enum):
    PROPOSAL = "proposal"
    SELF_EVALUATION = "self_evaluation"
    TOOL_CALL = "tool_call"
    OBSERVATION = "observation"
    REFINEMENT = "refinement"


@dataclass
class TraceStep:
    kind: StepKind
    content_digest: str
    timestamp: int  # logical clock tick, deterministic across replays
    detail: dict = field(default_factory=dict)


@dataclass
class ReasoningTrace:
    agent_id: str
    steps: list[TraceStep] = field(default_factory=list)
    final_score: float = 0.0

    def append(self, kind: StepKind, content: str, detail: dict | None = None) -> TraceStep:
        step = TraceStep(kind=kind, content_digest=_digest(content),
                         timestamp=len(self.steps), detail=detail or {})
        self.steps.append(step)
        return step

    def to_jsonl(self) -> str:
        lines = []
        for i, s in enumerate(self.steps):
            lines.append(json.dumps(
                {"agent_id": self.agent_id, "step": i, "kind": s.kind.value,
                 "digest": s.content_digest, "timestamp": s.timestamp,
                 "detail": s.detail},
                sort_keys=True))
        return "\n".join(lines) + ("\n" if lines else "")

    def verify_metacognition(self) -> bool:
        """Every proposal must be followed by at least one self-evaluation."""
        pending = False
        for s in self.steps:
            if s.kind is StepKind.PROPOSAL:
                if pending:
                    return False
                pending = True
            elif s.kind is StepKind.SELF_EVALUATION:
                pending = False
        return not pending


@dataclass
class TaskResult:
    status: str  # "accepted" | "exhausted"
    artifacts: dict
    trace: ReasoningTrace
    iterations: int
    score_history: list[float]
    replan_iterations: list[int]


def should_replan(score_history: list[float], policy: IterationPolicy,
                  validation_failed: bool = False) -> bool:
    """Replanning trigger: validation failed outright, or the last
    patience_window consecutive marginal improvements are each strictly
    below the patience threshold. Never fires on the first iteration."""
    if not score_history:
        raise ValueError("score history must be non-empty")
    if validation_failed:
        return True
    deltas = [b - a for a, b in zip(score_history, score_history[1:])]
    w = policy.patience_window
    if len(deltas) < w:
        return False
    return all(d < policy.patience_epsilon for d in deltas[-w:])


def run_task(node: AgentNode, env: TaskEnvelope,
             propose: Callable[[dict], str]) -> TaskResult:
    """Iterate propose -> validate -> refine until acceptance or exhaustion.

    `propose` receives a context dict (goal, iteration, feedback from the
    previous evaluation) and returns a candidate artifact. Acceptance tests
    validate the candidate; all must pass for the accepted status.
    """
    policy = env.policy
    trace = ReasoningTrace(agent_id=node.agent_id)
    history: list[float] = []
    replans: list[int] = []
    candidate = ""
    feedback: list[dict] = []

    for iteration in range(1, policy.max_iterations + 1):
        context = {
            "goal": env.goal,
            "iteration": iteration,
            "input_artifacts": env.input_artifacts,
            "feedback": feedback,
        }
        candidate = propose(context)
        trace.append(StepKind.PROPOSAL, candidate, {"iteration": iteration})

        results = [(t.name, t.check(candidate)) for t in env.acceptance_tests]
        scores = [r.score for _, r in results]
        mean_score = sum(scores) / len(scores)
        hard_failed = any(r.hard_failure for _, r in results)
        history.append(mean_score)
        trace.append(StepKind.SELF_EVALUATION, json.dumps(
            {"scores": scores, "mean": mean_score}, sort_keys=True),
            {"iteration": iteration, "mean_score": mean_score,
             "hard_failure": hard_failed})

        if all(r.passed for _, r in results) and not hard_failed:
            trace.final_score = mean_score
            return TaskResult("accepted", {"candidate": candidate}, trace,
                              iteration, history, replans)

        feedback = [{"test": name, "passed": r.passed, "score": r.score}
                    for name, r in results]
        if should_replan(history, policy, validation_failed=hard_failed):
            replans.append(iteration)
            trace.append(StepKind.REFINEMENT, "replan",
                         {"iteration": iteration, "replan": True})

    trace.final_score = history[-1] if history else 0.0
    return TaskResult("exhausted", {"candidate": candidate}, trace,
                      policy.max_iterations, history, replans)


def _digest(content: str) -> str:
    return hashlib.sha256(content.encode("utf-8")).hexdigest()[:16]

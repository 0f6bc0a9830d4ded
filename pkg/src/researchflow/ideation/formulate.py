"""Phase 2: formulation of a draft research idea.

Expansion, hypothesis formulation, review, and improvement run under the
kernel's propose-validate-refine loop; the acceptance tests here are the
review agent's completeness checks.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable

from researchflow.errors import ExhaustedWithoutAcceptance
from researchflow.ideation.generate import IdeaSuggestion
from researchflow.kernel import (
    AcceptanceTest,
    AgentKind,
    AgentNode,
    CheckResult,
    IterationPolicy,
    TaskEnvelope,
    run_task,
)

REQUIRED_FIELDS = ["hypothesis", "rationale", "predicted_outcomes"]


@dataclass
class ResearchIdea:
    idea_id: str
    hypothesis: str
    rationale: str
    predicted_outcomes: list[str]
    variables: dict = field(default_factory=dict)
    novelty_evidence: dict = field(default_factory=dict)
    feasibility: dict = field(default_factory=dict)
    status: str = "draft"  # draft | validated | rejected
    seed_rank: int = 0
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "idea_id": self.idea_id, "hypothesis": self.hypothesis,
            "rationale": self.rationale,
            "predicted_outcomes": self.predicted_outcomes,
            "variables": self.variables,
            "novelty_evidence": self.novelty_evidence,
            "feasibility": self.feasibility, "status": self.status,
            "seed_rank": self.seed_rank, "metadata": self.metadata,
        }


def _completeness_check(candidate: str) -> CheckResult:
    try:
        data = json.loads(candidate)
    except json.JSONDecodeError:
        return CheckResult(passed=False, score=0.0, hard_failure=True)
    present = [f for f in REQUIRED_FIELDS if data.get(f)]
    score = len(present) / len(REQUIRED_FIELDS)
    return CheckResult(passed=score == 1.0, score=score)


def formulate(suggestion: IdeaSuggestion,
              propose: Callable[[dict], str],
              policy: IterationPolicy | None = None,
              node: AgentNode | None = None):
    """Expand a ranked suggestion into a draft ResearchIdea.

    `propose` supplies candidate idea documents (a model call in live
    mode, scripted in tests). Returns (idea, task_result) so callers can
    inspect the review-loop trace.
    """
    node = node or AgentNode(agent_id=f"idea-{suggestion.suggestion_id}",
                             role_key="idea-agent",
                             kind=AgentKind.SPECIALIST)
    envelope = TaskEnvelope(
        goal=f"formulate: {suggestion.title}",
        acceptance_tests=[AcceptanceTest("completeness",
                                         _completeness_check)],
        input_artifacts=[json.dumps(suggestion.to_dict(), sort_keys=True)],
        policy=policy or IterationPolicy())
    result = run_task(node, envelope, propose)
    if result.status != "accepted":
        raise ExhaustedWithoutAcceptance(
            f"formulation of {suggestion.suggestion_id!r} exhausted after "
            f"{result.iterations} iterations")
    data = json.loads(result.artifacts["candidate"])
    idea = ResearchIdea(
        idea_id=f"idea-{suggestion.suggestion_id}",
        hypothesis=data["hypothesis"],
        rationale=data["rationale"],
        predicted_outcomes=list(data["predicted_outcomes"]),
        variables=data.get("variables", {}),
        feasibility={"required_instruments":
                     data.get("required_instruments",
                              suggestion.required_instruments)},
        seed_rank=suggestion.rank,
        metadata={"title": suggestion.title})
    return idea, result

"""Judge arbitration over candidate reasoning traces.

An external judge scores each candidate trace; the verdict picks the
argmax, with ties broken by the lowest trace (agent) id so arbitration is
deterministic under scripted judges.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from researchflow.kernel.loop import ReasoningTrace


@dataclass
class JudgeVerdict:
    candidate_ids: list[str]
    scores: dict[str, float]
    chosen_id: str
    rationale: str


def arbitrate(traces: list[ReasoningTrace],
              judge: Callable[[list[ReasoningTrace]], dict[str, float]],
              rationale: str = "") -> JudgeVerdict:
    """Score all traces via the judge callable and select the winner.

    Requires at least two candidates; a single trace needs no arbitration
    and indicates a caller bug.
    """
    if len(traces) < 2:
        raise ValueError("arbitration requires at least two traces")
    ids = [t.agent_id for t in traces]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate trace ids")
    scores = judge(traces)
    missing = set(ids) - set(scores)
    if missing:
        raise ValueError(f"judge omitted scores for {sorted(missing)}")
    best = max(scores[i] for i in ids)
    chosen = min(i for i in ids if scores[i] == best)
    return JudgeVerdict(candidate_ids=ids, scores={i: scores[i] for i in ids},
                        chosen_id=chosen, rationale=rationale)

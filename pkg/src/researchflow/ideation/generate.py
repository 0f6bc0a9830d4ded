"""Phase 1: suggestion generation.

Five sub-steps in order — brainstorm, dedupe, filter, rank, re-rank —
each logged with input/output sizes. Dedupe keys on the normalized
title plus near-identical summaries; the filter drops proposals marked
impractical or requiring instruments outside the registry.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field

from researchflow.errors import BackendFailure, EmptyAfterFilter
from researchflow.gateway.service import CompletionRequest, ModelGateway
from researchflow.knowledge.scorer import cosine_token_similarity

SUMMARY_DUP_THRESHOLD = 0.9
_PUNCT_RE = re.compile(r"[^a-z0-9 ]+")


@dataclass
class IdeaSuggestion:
    suggestion_id: str
    title: str
    summary: str
    merit_score: float
    rank: int = 0
    required_instruments: list[str] = field(default_factory=list)
    practical: bool = True

    def to_dict(self) -> dict:
        return {
            "suggestion_id": self.suggestion_id, "title": self.title,
            "summary": self.summary, "merit_score": self.merit_score,
            "rank": self.rank,
            "required_instruments": self.required_instruments,
            "practical": self.practical,
        }


def normalize_title(title: str) -> str:
    return " ".join(_PUNCT_RE.sub(" ", title.lower()).split())


def dedupe(suggestions: list[IdeaSuggestion]) -> list[IdeaSuggestion]:
    """Keep the first of any redundant pair: identical normalized title,
    or summaries with cosine similarity at/above the threshold."""
    kept: list[IdeaSuggestion] = []
    seen_titles: set[str] = set()
    for s in suggestions:
        key = normalize_title(s.title)
        if key in seen_titles:
            continue
        if any(cosine_token_similarity(s.summary, k.summary)
               >= SUMMARY_DUP_THRESHOLD for k in kept):
            continue
        seen_titles.add(key)
        kept.append(s)
    return kept


def _parse_brainstorm(text: str) -> list[IdeaSuggestion]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise BackendFailure(f"unparseable brainstorm output: {exc}") from exc
    items = data.get("suggestions", data) if isinstance(data, dict) else data
    if not isinstance(items, list):
        raise BackendFailure("brainstorm output is not a suggestion list")
    out = []
    for i, item in enumerate(items, start=1):
        out.append(IdeaSuggestion(
            suggestion_id=item.get("id", f"sugg-{i:03d}"),
            title=item.get("title", ""),
            summary=item.get("summary", ""),
            merit_score=float(item.get("merit", 0.5)),
            required_instruments=list(item.get("instruments", [])),
            practical=bool(item.get("practical", True))))
    return out


def _rank(suggestions: list[IdeaSuggestion]) -> list[IdeaSuggestion]:
    ordered = sorted(suggestions,
                     key=lambda s: (-s.merit_score, s.title, s.suggestion_id))
    for i, s in enumerate(ordered, start=1):
        s.rank = i
    return ordered


def _rerank(suggestions: list[IdeaSuggestion],
            gateway: ModelGateway) -> list[IdeaSuggestion]:
    """Ask for a permutation of suggestion ids; anything that is not a
    permutation leaves the merit ranking untouched."""
    ids = [s.suggestion_id for s in suggestions]
    exchange = gateway.complete(CompletionRequest(
        role_key="idea-agent", module="ideation",
        context="re-rank by scientific merit: " + json.dumps(ids)))
    try:
        proposed = json.loads(exchange.text)
    except json.JSONDecodeError:
        proposed = None
    if isinstance(proposed, dict):
        proposed = proposed.get("order")
    if not isinstance(proposed, list) or sorted(proposed) != sorted(ids):
        return suggestions
    by_id = {s.suggestion_id: s for s in suggestions}
    ordered = [by_id[i] for i in proposed]
    for i, s in enumerate(ordered, start=1):
        s.rank = i
    return ordered


def generate_suggestions(gateway: ModelGateway, n: int,
                         seed_guidance: str | None = None,
                         registry=None) -> tuple[list[IdeaSuggestion], list[dict]]:
    """Run the five-step generation pipeline.

    Returns (ranked suggestions, step log). Without seed guidance the
    agent self-selects fields; with a registry, suggestions requiring
    undeclared instruments are filtered out.
    """
    context = seed_guidance or "self-select relevant research fields"
    if registry is not None:
        context += "; available instruments: " + ",".join(registry.names())
    exchange = gateway.complete(CompletionRequest(
        role_key="idea-agent", module="ideation", context=context))
    raw = _parse_brainstorm(exchange.text)
    log = [{"step": "brainstorm", "in": 0, "out": len(raw)}]

    unique = dedupe(raw)
    log.append({"step": "dedupe", "in": len(raw), "out": len(unique)})

    filtered = [
        s for s in unique
        if s.practical and (registry is None or
                            all(i in registry for i in s.required_instruments))
    ]
    log.append({"step": "filter", "in": len(unique), "out": len(filtered)})
    if not filtered:
        raise EmptyAfterFilter(
            "no suggestions survived the practicality filter")

    ranked = _rank(filtered)
    log.append({"step": "rank", "in": len(filtered), "out": len(ranked)})

    reranked = _rerank(ranked, gateway)
    log.append({"step": "rerank", "in": len(ranked), "out": len(reranked)})

    final = reranked[:n]
    for i, s in enumerate(final, start=1):
        s.rank = i
    return final, log

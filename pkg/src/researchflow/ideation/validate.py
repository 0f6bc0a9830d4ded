"""Phase 3: validation — literature context, novelty, feasibility.

Novelty checks the hypothesis against the idea's own logged searches
(depth-1 external, then depth-2 within the direction repo); a hit above
the similarity threshold rejects. Feasibility is instrument-registry
membership. Search outages leave the idea in draft with a warning
rather than failing the phase.
"""

from __future__ import annotations

from researchflow.errors import AllSourcesFailed, EmptyRepo, SearchUnavailable
from researchflow.ideation.formulate import ResearchIdea
from researchflow.knowledge import KnowledgeEngine, SearchQuery
from researchflow.knowledge.records import QueryDepth
from researchflow.knowledge.scorer import cosine_token_similarity

NOVELTY_THRESHOLD = 0.85


def check_novelty(idea: ResearchIdea, engine: KnowledgeEngine,
                  repo_id: str = "main",
                  threshold: float = NOVELTY_THRESHOLD) -> dict:
    """Depth-1 then depth-2 novelty evidence for the hypothesis."""
    outcome = engine.search_external(SearchQuery(
        depth=QueryDepth.BROAD, text=idea.hypothesis, k=10))
    searched = [r.canonical_id for r in outcome.records]
    hits = []
    for record in outcome.records:
        sim = cosine_token_similarity(
            idea.hypothesis, f"{record.title} {record.abstract}")
        if sim > threshold:
            hits.append({"canonical_id": record.canonical_id,
                         "similarity": round(sim, 4), "depth": 1})
    try:
        repo_hits, _ = engine.query_repo(repo_id, SearchQuery(
            depth=QueryDepth.MULTI_ARTICLE, text=idea.hypothesis, k=10))
    except (EmptyRepo, KeyError):
        repo_hits = []
    for chunk, _score in repo_hits:
        sim = cosine_token_similarity(idea.hypothesis, chunk.text)
        if sim > threshold:
            hits.append({"canonical_id": chunk.doc_id,
                         "similarity": round(sim, 4), "depth": 2})

    evidence = {
        "verdict": "not_novel" if hits else "novel",
        "searched_records": searched,
        "conflicts": hits,
        "warnings": outcome.warnings,
    }
    if not searched and not repo_hits:
        evidence["attestation"] = "empty_search"
    return evidence


def check_feasibility(idea: ResearchIdea, registry) -> dict:
    required = idea.feasibility.get("required_instruments", [])
    missing = [name for name in required if name not in registry]
    return {
        "required_instruments": required,
        "missing_instruments": missing,
        "constraint_fit": not missing,
        "verdict": "feasible" if not missing else "infeasible",
    }


def validate_idea(idea: ResearchIdea, engine: KnowledgeEngine, registry,
                  repo_id: str = "main",
                  threshold: float = NOVELTY_THRESHOLD) -> ResearchIdea:
    """Run novelty and feasibility checks and set the idea's status.

    validated requires novelty verdict novel AND feasibility verdict
    feasible; search unavailability keeps the idea in draft."""
    try:
        novelty = check_novelty(idea, engine, repo_id, threshold)
    except (AllSourcesFailed, SearchUnavailable) as exc:
        idea.metadata.setdefault("warnings", []).append(
            f"novelty search unavailable: {exc}")
        return idea  # stays draft

    feasibility = check_feasibility(idea, registry)
    idea.novelty_evidence = novelty
    idea.feasibility.update(feasibility)
    if novelty["verdict"] == "novel" and feasibility["verdict"] == "feasible":
        idea.status = "validated"
    else:
        idea.status = "rejected"
    return idea

"""Three-depth search engine over external databases and local repos.

Depth 1 fans out to the configured database clients, merges and dedupes
by canonical id, and degrades gracefully when individual sources fail.
Depths 2 and 3 hit a per-direction knowledge repository; an optional
synthesis callback turns raw hits into a prose answer via a model call.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from researchflow.errors import AllSourcesFailed
from researchflow.knowledge.records import DocumentRecord, QueryDepth, SearchQuery
from researchflow.knowledge.repo import KnowledgeRepo


@dataclass
class SearchOutcome:
    records: list[DocumentRecord]
    warnings: list[str] = field(default_factory=list)
    examined_count: int = 0  # metadata fetches count toward this metric


class KnowledgeEngine:
    def __init__(self, clients: list, repos: dict[str, KnowledgeRepo] | None = None):
        self.clients = list(clients)
        self.repos = repos or {}
        self.examined_total = 0

    def repo(self, repo_id: str, **kwargs) -> KnowledgeRepo:
        if repo_id not in self.repos:
            self.repos[repo_id] = KnowledgeRepo(repo_id, **kwargs)
        return self.repos[repo_id]

    def search_external(self, query: SearchQuery) -> SearchOutcome:
        """Depth-1 broad search: merge, dedupe by canonical id, rank by
        source order then id. Partial source failures produce warnings;
        all sources failing raises."""
        if query.depth is not QueryDepth.BROAD:
            raise ValueError("search_external handles depth-1 queries only")
        if not self.clients:
            raise AllSourcesFailed("no database clients configured")
        merged: dict[str, DocumentRecord] = {}
        warnings = []
        failures = 0
        for client in self.clients:
            try:
                records = client.search(query.text,
                                        year_range=query.year_range,
                                        limit=max(query.k, 1))
            except Exception as exc:
                failures += 1
                warnings.append(f"{client.name}: {exc}")
                continue
            for rec in records:
                merged.setdefault(rec.canonical_id, rec)
        if failures == len(self.clients):
            raise AllSourcesFailed("; ".join(warnings))
        records = list(merged.values())[:query.k] if query.k else list(merged.values())
        self.examined_total += len(merged)
        return SearchOutcome(records=records, warnings=warnings,
                             examined_count=len(merged))

    def query_repo(self, repo_id: str, query: SearchQuery,
                   synthesize: Callable[[str, list], str] | None = None):
        """Depth-2/3 retrieval against one repository; optionally passes
        hits to a synthesis callback (a model call in live mode)."""
        repo = self.repo(repo_id)
        hits = repo.query(query)
        answer = synthesize(query.text, hits) if synthesize else None
        return hits, answer

"""Per-research-direction knowledge repository.

Holds document records and their chunk index, tracks accesses, and prunes
low-relevance documents to stay under its size cap. Ingest tiling is
deterministic (fixed chunk length, no overlap) and idempotent, so the
same document always yields the same chunk ids.
"""

from __future__ import annotations

import json
import threading
from dataclasses import dataclass
from pathlib import Path

from researchflow.errors import EmptyRepo, UnknownDocument
from researchflow.knowledge.records import Chunk, DocumentRecord, QueryDepth, SearchQuery
from researchflow.knowledge.scorer import LexicalScorer, Scorer

CHUNK_LEN = 1000


@dataclass
class RelevancePolicy:
    min_score: float = 0.5
    recency_window: int = 50  # logical ticks

    def score(self, access_count: int, last_access: int, now: int) -> float:
        recency = max(0, self.recency_window - (now - last_access))
        return access_count + recency / self.recency_window


class KnowledgeRepo:
    def __init__(self, repo_id: str, cap: int = 1000,
                 scorer: Scorer | None = None,
                 relevance: RelevancePolicy | None = None):
        self.repo_id = repo_id
        self.cap = cap
        self.scorer = scorer or LexicalScorer()
        self.relevance = relevance or RelevancePolicy()
        self._docs: dict[str, DocumentRecord] = {}
        self._chunks: dict[str, list[Chunk]] = {}
        self._access_count: dict[str, int] = {}
        self._last_access: dict[str, int] = {}
        self._tick = 0
        self._lock = threading.RLock()
        self.access_log: list[dict] = []

    # --- document lifecycle ---

    def add_record(self, record: DocumentRecord) -> None:
        with self._lock:
            if record.canonical_id not in self._docs:
                self._docs[record.canonical_id] = record
                self._access_count.setdefault(record.canonical_id, 0)
                self._last_access.setdefault(record.canonical_id, self._tick)

    def ingest(self, record: DocumentRecord, full_text: str) -> list[Chunk]:
        """Tile full text into fixed-length chunks and index them.

        Idempotent: re-ingesting a document replaces its chunks with an
        identical set. Prunes first when at cap."""
        with self._lock:
            already = record.canonical_id in self._chunks
            if not already and len(self._docs) >= self.cap \
                    and record.canonical_id not in self._docs:
                self.prune()
            self.add_record(record)
            chunks = [
                Chunk.make(record.canonical_id, start,
                           min(start + CHUNK_LEN, len(full_text)),
                           full_text[start:start + CHUNK_LEN])
                for start in range(0, len(full_text), CHUNK_LEN)
            ]
            self._chunks[record.canonical_id] = chunks
            record.full_text_status = "ingested"
            return chunks

    def prune(self) -> list[str]:
        """Drop documents below the relevance threshold, then the least
        relevant until under cap. Returns removed doc ids."""
        with self._lock:
            now = self._tick
            scores = {
                doc_id: self.relevance.score(
                    self._access_count.get(doc_id, 0),
                    self._last_access.get(doc_id, 0), now)
                for doc_id in self._docs
            }
            removed = [d for d, s in scores.items()
                       if s < self.relevance.min_score]
            survivors = [d for d in self._docs if d not in removed]
            overflow = len(survivors) - self.cap
            if overflow > 0:
                survivors_sorted = sorted(
                    survivors, key=lambda d: (scores[d], d))
                removed.extend(survivors_sorted[:overflow])
            for doc_id in removed:
                self._docs.pop(doc_id, None)
                self._chunks.pop(doc_id, None)
                self._access_count.pop(doc_id, None)
                self._last_access.pop(doc_id, None)
            return sorted(removed)

    # --- retrieval ---

    def query(self, query: SearchQuery) -> list[tuple[Chunk, float]]:
        """Top-k chunks by similarity, descending, ties by chunk id."""
        with self._lock:
            if query.depth is QueryDepth.SINGLE_PAPER:
                if query.target_doc_id not in self._docs:
                    raise UnknownDocument(query.target_doc_id)
                candidates = self._chunks.get(query.target_doc_id, [])
            elif query.depth is QueryDepth.MULTI_ARTICLE:
                if not self._chunks:
                    raise EmptyRepo(self.repo_id)
                candidates = [c for chunks in self._chunks.values()
                              for c in chunks]
            else:
                raise ValueError("repo queries are depth 2 or 3 only")
            if query.k <= 0:
                return []
            scored = [(c, self.scorer.score(query.text, c.text))
                      for c in candidates]
            scored.sort(key=lambda cs: (-cs[1], cs[0].chunk_id))
            hits = scored[:query.k]
            self._tick += 1
            for chunk, _score in hits:
                self._access_count[chunk.doc_id] = \
                    self._access_count.get(chunk.doc_id, 0) + 1
                self._last_access[chunk.doc_id] = self._tick
            self.access_log.append({
                "tick": self._tick, "depth": int(query.depth),
                "query": query.text,
                "hit_docs": sorted({c.doc_id for c, _ in hits}),
            })
            return hits

    # --- introspection ---

    @property
    def documents(self) -> list[DocumentRecord]:
        return list(self._docs.values())

    def has_document(self, doc_id: str) -> bool:
        return doc_id in self._docs

    def chunks_of(self, doc_id: str) -> list[Chunk]:
        return list(self._chunks.get(doc_id, []))

    def all_chunks(self) -> list[Chunk]:
        return [c for chunks in self._chunks.values() for c in chunks]

    def verify_integrity(self) -> bool:
        """Every chunk's provenance resolves to a held document."""
        return all(doc_id in self._docs for doc_id in self._chunks)

    # --- persistence ---

    def save(self, directory: Path) -> None:
        directory = Path(directory)
        directory.mkdir(parents=True, exist_ok=True)
        docs_dir = directory / "documents"
        docs_dir.mkdir(exist_ok=True)
        for doc_id, record in sorted(self._docs.items()):
            safe = doc_id.replace("/", "_")
            (docs_dir / f"{safe}.json").write_text(
                json.dumps(record.to_dict(), sort_keys=True, indent=2) + "\n")
        index = {
            "repo_id": self.repo_id, "cap": self.cap, "tick": self._tick,
            "chunks": {
                doc_id: [{"start": c.start, "end": c.end, "text": c.text}
                         for c in chunks]
                for doc_id, chunks in sorted(self._chunks.items())
            },
            "access_count": self._access_count,
            "last_access": self._last_access,
        }
        (directory / "chunk_index.json").write_text(
            json.dumps(index, sort_keys=True) + "\n")
        with (directory / "access_log.jsonl").open("w") as fh:
            for entry in self.access_log:
                fh.write(json.dumps(entry, sort_keys=True) + "\n")

    @classmethod
    def load(cls, directory: Path, scorer: Scorer | None = None
             ) -> "KnowledgeRepo":
        directory = Path(directory)
        index = json.loads((directory / "chunk_index.json").read_text())
        repo = cls(index["repo_id"], cap=index["cap"], scorer=scorer)
        repo._tick = index["tick"]
        for doc_file in sorted((directory / "documents").glob("*.json")):
            record = DocumentRecord.from_dict(json.loads(doc_file.read_text()))
            repo._docs[record.canonical_id] = record
        for doc_id, chunks in index["chunks"].items():
            repo._chunks[doc_id] = [
                Chunk.make(doc_id, c["start"], c["end"], c["text"])
                for c in chunks]
        repo._access_count = dict(index["access_count"])
        repo._last_access = dict(index["last_access"])
        log_path = directory / "access_log.jsonl"
        if log_path.exists():
            repo.access_log = [json.loads(line) for line in
                               log_path.read_text().splitlines() if line]
        return repo

"""Document, chunk, and query records for the knowledge engine."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import IntEnum


@dataclass
class DocumentRecord:
    canonical_id: str  # DOI preferred
    source_db: str
    title: str
    abstract: str = ""
    full_text_status: str = "metadata_only"  # metadata_only | ingested
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "canonical_id": self.canonical_id,
            "source_db": self.source_db,
            "title": self.title,
            "abstract": self.abstract,
            "full_text_status": self.full_text_status,
            "metadata": self.metadata,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "DocumentRecord":
        return cls(**data)


@dataclass(frozen=True)
class Chunk:
    chunk_id: str
    doc_id: str
    start: int
    end: int
    text: str

    @classmethod
    def make(cls, doc_id: str, start: int, end: int, text: str) -> "Chunk":
        return cls(chunk_id=f"{doc_id}:{start:08d}", doc_id=doc_id,
                   start=start, end=end, text=text)


class QueryDepth(IntEnum):
    BROAD = 1          # external academic database search
    MULTI_ARTICLE = 2  # within-repo multi-article retrieval
    SINGLE_PAPER = 3   # paper-specific question answering


@dataclass
class SearchQuery:
    depth: QueryDepth
    text: str
    k: int = 10
    year_range: tuple[int, int] | None = None
    field_tags: list[str] = field(default_factory=list)
    target_doc_id: str | None = None

    def __post_init__(self):
        if self.depth is QueryDepth.SINGLE_PAPER and not self.target_doc_id:
            raise ValueError("depth-3 queries require a target document id")

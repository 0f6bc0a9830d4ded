"""d-RAG memory: per-direction knowledge repositories, chunk-indexed
retrieval at three depths, external database clients, and relevance
pruning."""

from researchflow.knowledge.records import Chunk, DocumentRecord, SearchQuery
from researchflow.knowledge.repo import KnowledgeRepo, RelevancePolicy
from researchflow.knowledge.scorer import LexicalScorer
from researchflow.knowledge.clients import FixtureClient
from researchflow.knowledge.engine import KnowledgeEngine, SearchOutcome

__all__ = [
    "Chunk",
    "DocumentRecord",
    "FixtureClient",
    "KnowledgeEngine",
    "KnowledgeRepo",
    "LexicalScorer",
    "RelevancePolicy",
    "SearchOutcome",
    "SearchQuery",
]

"""Similarity scorers behind one interface.

The default lexical scorer is deterministic (cosine over token counts) so
retrieval tests need no embedding service; a vector backend can be
plugged in behind the same score(query, text) surface.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from typing import Protocol

_TOKEN_RE = re.compile(r"[a-z0-9]+")


def tokenize(text: str) -> list[str]:
    return _TOKEN_RE.findall(text.lower())


class Scorer(Protocol):
    def score(self, query: str, text: str) -> float: ...


class LexicalScorer:
    """Cosine similarity over token count vectors."""

    def score(self, query: str, text: str) -> float:
        q = Counter(tokenize(query))
        t = Counter(tokenize(text))
        if not q or not t:
            return 0.0
        dot = sum(q[w] * t[w] for w in q)
        norm = math.sqrt(sum(v * v for v in q.values())) * math.sqrt(
            sum(v * v for v in t.values()))
        return dot / norm if norm else 0.0


def cosine_token_similarity(a: str, b: str) -> float:
    """Symmetric helper used by dedupe and novelty checks."""
    return LexicalScorer().score(a, b)

"""Citation verification against a DOI resolver.

Each reference is checked twice: DOI syntax first (must be a "10."
prefix with registrant/suffix structure), then an actual resolver
lookup that attaches metadata. Status encodes the outcome — callers
never see an exception, they see failed/unresolvable records, and the
manuscript assembler only accepts verified ones.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

DOI_RE = re.compile(r"^10\.\d{4,9}/\S+$")


@dataclass
class CitationRecord:
    key: str
    doi: str
    metadata: dict = field(default_factory=dict)
    status: str = "pending"  # pending | verified | failed | unresolvable

    def to_dict(self) -> dict:
        return {"key": self.key, "doi": self.doi, "metadata": self.metadata,
                "status": self.status}


class FixtureResolver:
    """In-memory doi.org stand-in: a mapping of DOI -> metadata."""

    def __init__(self, known: dict[str, dict]):
        self._known = dict(known)
        self.lookups = 0

    def resolve(self, doi: str) -> dict | None:
        self.lookups += 1
        return self._known.get(doi)


def doi_syntax_valid(doi: str) -> bool:
    return bool(DOI_RE.match(doi))


def verify_citation(record: CitationRecord, resolver) -> CitationRecord:
    """Syntax check, then resolver lookup; the record's status carries
    the outcome."""
    if not doi_syntax_valid(record.doi):
        record.status = "failed"
        return record
    metadata = resolver.resolve(record.doi)
    if metadata is None:
        record.status = "unresolvable"
        return record
    record.metadata = dict(metadata)
    record.status = "verified"
    return record


def verify_all(records: list[CitationRecord], resolver) -> list[CitationRecord]:
    return [verify_citation(r, resolver) for r in records]

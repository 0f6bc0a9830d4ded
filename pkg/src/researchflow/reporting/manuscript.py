"""Manuscript assembly.

Sections follow a fixed scaffold; every in-text citation key (written
as [@key]) must resolve to a verified citation record, and the
references list is generated from exactly the verified records that are
actually cited. Word counts are reported per section and in total.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from researchflow.errors import MissingSection, UnverifiedCitation
from researchflow.reporting.citations import CitationRecord
from researchflow.reporting.visuals import FigurePlan

SECTION_ORDER = [
    "title", "abstract", "introduction", "methods", "results",
    "discussion",
]

CITE_RE = re.compile(r"\[@([A-Za-z0-9_:.-]+)\]")

# Live-run magnitudes, documentation constants.
WORD_COUNT_RANGE = (7000, 8000)
REFERENCE_COUNT_RANGE = (40, 50)


@dataclass
class Manuscript:
    sections: dict[str, str]
    figure_plan: FigurePlan
    citations: dict[str, CitationRecord]
    references: list[str] = field(default_factory=list)
    word_counts: dict[str, int] = field(default_factory=dict)

    @property
    def total_words(self) -> int:
        return sum(self.word_counts.values())

    def body_text(self) -> str:
        return "\n\n".join(self.sections[name] for name in SECTION_ORDER)

    def cited_keys(self) -> list[str]:
        seen: list[str] = []
        for name in SECTION_ORDER:
            for key in CITE_RE.findall(self.sections[name]):
                if key not in seen:
                    seen.append(key)
        return seen


def assemble_manuscript(sections: dict[str, str], figure_plan: FigurePlan,
                        citations: list[CitationRecord]) -> Manuscript:
    """Check scaffold completeness and citation soundness, then build
    the manuscript with its generated references list."""
    missing = [name for name in SECTION_ORDER
               if not sections.get(name, "").strip()]
    if missing:
        raise MissingSection(f"missing or empty sections: {missing}")

    verified = {c.key: c for c in citations if c.status == "verified"}
    manuscript = Manuscript(
        sections={name: sections[name] for name in SECTION_ORDER},
        figure_plan=figure_plan, citations=verified)

    bad = [key for key in manuscript.cited_keys() if key not in verified]
    if bad:
        raise UnverifiedCitation(
            f"in-text citations without verified records: {bad}")

    manuscript.references = [
        _format_reference(verified[key]) for key in manuscript.cited_keys()
    ]
    manuscript.word_counts = {
        name: len(sections[name].split()) for name in SECTION_ORDER
    }
    return manuscript


def _format_reference(record: CitationRecord) -> str:
    meta = record.metadata
    bits = [meta.get("title", record.key)]
    if meta.get("venue"):
        bits.append(meta["venue"])
    if meta.get("year"):
        bits.append(str(meta["year"]))
    return f"[{record.key}] " + ". ".join(bits) + f". doi:{record.doi}"

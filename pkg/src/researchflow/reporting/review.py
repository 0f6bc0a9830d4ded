"""Peer-style manuscript review.

Four fixed dimensions, each reviewed via a gateway call. Findings carry
severity, location, and an actionable recommendation; a finding that
arrives without a location is normalized to the whole document with a
warning rather than dropped. Major findings trigger one revision pass
followed by a single re-review.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Callable

from researchflow.gateway.service import CompletionRequest, ModelGateway
from researchflow.reporting.manuscript import Manuscript

DIMENSIONS = [
    "theoretical_foundation", "methodological_rigour",
    "statistical_appropriateness", "writing_quality",
]

WHOLE_DOCUMENT = "whole-document"


@dataclass
class ReviewFinding:
    severity: str  # major | minor
    dimension: str
    location: str
    recommendation: str

    def to_dict(self) -> dict:
        return {"severity": self.severity, "dimension": self.dimension,
                "location": self.location,
                "recommendation": self.recommendation}


@dataclass
class ReviewReport:
    findings: list[ReviewFinding]
    warnings: list[str] = field(default_factory=list)

    @property
    def majors(self) -> list[ReviewFinding]:
        return [f for f in self.findings if f.severity == "major"]

    @property
    def minors(self) -> list[ReviewFinding]:
        return [f for f in self.findings if f.severity == "minor"]


def _parse_findings(text: str, dimension: str,
                    warnings: list[str]) -> list[ReviewFinding]:
    try:
        data = json.loads(text)
    except json.JSONDecodeError:
        return []
    items = data.get("findings", data) if isinstance(data, dict) else data
    if not isinstance(items, list):
        return []
    out = []
    for item in items:
        severity = item.get("severity", "minor")
        location = item.get("location", "").strip()
        if not location:
            location = WHOLE_DOCUMENT
            warnings.append(
                f"finding in {dimension} lacked a location; normalized "
                f"to {WHOLE_DOCUMENT}")
        out.append(ReviewFinding(
            severity=severity if severity in ("major", "minor") else "minor",
            dimension=dimension, location=location,
            recommendation=item.get("recommendation", "revise")))
    return out


def review_manuscript(manuscript: Manuscript, gateway: ModelGateway,
                      role_key: str = "reviewer",
                      module: str = "review") -> ReviewReport:
    """One full review pass across all four dimensions."""
    findings: list[ReviewFinding] = []
    warnings: list[str] = []
    for dimension in DIMENSIONS:
        exchange = gateway.complete(CompletionRequest(
            role_key=role_key, module=module,
            context=f"review dimension {dimension}; "
                    f"total words {manuscript.total_words}"))
        findings.extend(_parse_findings(exchange.text, dimension, warnings))
    return ReviewReport(findings=findings, warnings=warnings)


def review_and_revise(manuscript: Manuscript, gateway: ModelGateway,
                      revise: Callable[[Manuscript, list[ReviewFinding]],
                                       Manuscript],
                      role_key: str = "reviewer"
                      ) -> tuple[Manuscript, list[ReviewReport]]:
    """Review; if major findings exist, apply one targeted revision and
    re-review once. Two passes maximum."""
    first = review_manuscript(manuscript, gateway, role_key)
    if not first.majors:
        return manuscript, [first]
    revised = revise(manuscript, first.majors)
    second = review_manuscript(revised, gateway, role_key)
    return revised, [first, second]

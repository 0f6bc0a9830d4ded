"""LLM response screening.

Every provider response is screened before any agent sees it: entropy
analysis, URL / fenced-code detection, blacklisted keyword scan, language
pattern-shift detection, and syntax validation when code is expected.
Hard rules (blacklisted keyword, unexpected code block, unexpected URL,
entropy outside the configured band) reject; pattern shift and semantic
consistency are soft flags only.
"""

from __future__ import annotations

import math
import re
from collections import Counter
from dataclasses import dataclass, field

URL_RE = re.compile(r"\bhttps?://[^\s)\]>'\"]+", re.IGNORECASE)
FENCED_CODE_RE = re.compile(r"```.*?```", re.DOTALL)

# Entropy band for prose; code-expected responses skip the band check.
DEFAULT_ENTROPY_BAND = (0.5, 5.5)


@dataclass
class ScreenExpectations:
    code_permitted: bool = False
    urls_permitted: bool = False
    blacklist: list[str] = field(default_factory=list)
    entropy_band: tuple[float, float] | None = DEFAULT_ENTROPY_BAND
    pattern_shift_threshold: float = 1.2


@dataclass
class UnexpectedElement:
    kind: str  # code_block | external_url | blacklisted_keyword
    excerpt: str


@dataclass
class ResponseScreenReport:
    entropy_bits_per_char: float
    pattern_shift_flag: bool
    semantic_consistency_flag: bool
    syntax_valid: bool
    unexpected_elements: list[UnexpectedElement]
    verdict: str  # pass | reject

    def to_dict(self) -> dict:
        return {
            "entropy_bits_per_char": self.entropy_bits_per_char,
            "pattern_shift_flag": self.pattern_shift_flag,
            "semantic_consistency_flag": self.semantic_consistency_flag,
            "syntax_valid": self.syntax_valid,
            "unexpected_elements": [
                {"kind": e.kind, "excerpt": e.excerpt}
                for e in self.unexpected_elements
            ],
            "verdict": self.verdict,
        }


def shannon_entropy(text: str) -> float:
    """Shannon entropy of the character distribution, bits per char."""
    if not text:
        return 0.0
    counts = Counter(text)
    n = len(text)
    return -sum((c / n) * math.log2(c / n) for c in counts.values())


def pattern_shift_score(text: str) -> float:
    """Character-bigram distribution divergence between response halves.

    L1 distance between normalized bigram frequencies; 0 for identical
    halves, up to 2 for disjoint distributions.
    """
    if len(text) < 8:
        return 0.0
    mid = len(text) // 2
    a, b = text[:mid], text[mid:]

    def bigrams(s):
        c = Counter(s[i:i + 2] for i in range(len(s) - 1))
        total = sum(c.values()) or 1
        return {k: v / total for k, v in c.items()}

    fa, fb = bigrams(a), bigrams(b)
    keys = set(fa) | set(fb)
    return sum(abs(fa.get(k, 0.0) - fb.get(k, 0.0)) for k in keys)


def _code_syntax_valid(text: str) -> bool:
    blocks = FENCED_CODE_RE.findall(text)
    sources = [b.strip("`").split("\n", 1)[-1] for b in blocks] if blocks else [text]
    for src in sources:
        try:
            compile(src, "<screen>", "exec")
        except SyntaxError:
            return False
    return True


def screen_response(text: str,
                    expectations: ScreenExpectations | None = None) -> ResponseScreenReport:
    """Screen one response; always returns a report, never raises."""
    exp = expectations or ScreenExpectations()
    unexpected: list[UnexpectedElement] = []

    lowered = text.lower()
    for word in exp.blacklist:
        if word.lower() in lowered:
            unexpected.append(UnexpectedElement("blacklisted_keyword", word))

    code_blocks = FENCED_CODE_RE.findall(text)
    if code_blocks and not exp.code_permitted:
        unexpected.append(UnexpectedElement("code_block", code_blocks[0][:80]))

    urls = URL_RE.findall(text)
    if urls and not exp.urls_permitted:
        for url in urls:
            unexpected.append(UnexpectedElement("external_url", url[:120]))

    entropy = shannon_entropy(text)
    entropy_bad = False
    if exp.entropy_band is not None and not exp.code_permitted and text:
        lo, hi = exp.entropy_band
        entropy_bad = not (lo <= entropy <= hi)

    syntax_valid = _code_syntax_valid(text) if exp.code_permitted else True
    shift = pattern_shift_score(text) > exp.pattern_shift_threshold

    reject = bool(unexpected) or entropy_bad
    return ResponseScreenReport(
        entropy_bits_per_char=entropy,
        pattern_shift_flag=shift,
        semantic_consistency_flag=False,  # judge-backed in live mode only
        syntax_valid=syntax_valid,
        unexpected_elements=unexpected,
        verdict="reject" if reject else "pass",
    )

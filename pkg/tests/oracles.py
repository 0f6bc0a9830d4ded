"""Independent oracles used by the test suite.

Each oracle is a deliberately naive restatement of a rule the engine
implements, kept free of any engine imports so the two sides stay
independent.
"""

from __future__ import annotations

import heapq
import math
from collections import Counter


def dl_distance_bfs(a: str, b: str) -> int:
    """Unrestricted Damerau-Levenshtein by uniform-cost search over edit
    operations (insert, delete, substitute, adjacent transpose). Only
    viable for short strings."""
    alphabet = sorted(set(a) | set(b)) or ["a"]
    max_len = max(len(a), len(b)) + 1
    seen = {a: 0}
    heap = [(0, a)]
    while heap:
        cost, s = heapq.heappop(heap)
        if s == b:
            return cost
        if cost > seen.get(s, math.inf):
            continue
        neighbors = []
        for i in range(len(s)):
            neighbors.append(s[:i] + s[i + 1:])  # delete
            for ch in alphabet:
                if ch != s[i]:
                    neighbors.append(s[:i] + ch + s[i + 1:])  # substitute
        if len(s) < max_len:
            for i in range(len(s) + 1):
                for ch in alphabet:
                    neighbors.append(s[:i] + ch + s[i:])  # insert
        for i in range(len(s) - 1):
            neighbors.append(s[:i] + s[i + 1] + s[i] + s[i + 2:])  # transpose
        for n in neighbors:
            nc = cost + 1
            if nc < seen.get(n, math.inf):
                seen[n] = nc
                heapq.heappush(heap, (nc, n))
    raise AssertionError("search exhausted without reaching target")


def _one_edit_neighborhood(s: str, alphabet: list[str]) -> set[str]:
    out = {s}
    for i in range(len(s)):
        out.add(s[:i] + s[i + 1:])
        for ch in alphabet:
            out.add(s[:i] + ch + s[i + 1:])
    for i in range(len(s) + 1):
        for ch in alphabet:
            out.add(s[:i] + ch + s[i:])
    for i in range(len(s) - 1):
        out.add(s[:i] + s[i + 1] + s[i] + s[i + 2:])
    return out


def dl_within_two(a: str, b: str) -> bool:
    """Whether DL distance <= 2, by one-edit neighborhood intersection.

    d(a,b) <= 2 iff the one-edit neighborhoods (which include the strings
    themselves) intersect."""
    alphabet = sorted(set(a) | set(b)) or ["a"]
    na = _one_edit_neighborhood(a, alphabet)
    if b in na:
        return True
    nb = _one_edit_neighborhood(b, alphabet)
    return bool(na & nb)


def entropy_oracle(text: str) -> float:
    """Direct Shannon-entropy restatement."""
    if not text:
        return 0.0
    counts = Counter(text)
    n = len(text)
    h = 0.0
    for c in counts.values():
        p = c / n
        h -= p * math.log(p, 2)
    return h


def power_n_correlation(r: float, alpha: float, power: float,
                        tails: int = 2) -> int:
    """Required N for a Pearson correlation via Fisher z, computed by
    direct search over n using the normal power function."""
    from scipy.stats import norm  # test-side only

    z_a = norm.ppf(1 - alpha / tails)
    fz = abs(math.atanh(r))
    n = 4
    while n < 10_000_000:
        achieved = norm.cdf(math.sqrt(n - 3) * fz - z_a)
        if achieved >= power:
            return max(n, 3)
        n += 1
    raise AssertionError("no n found")


def normalized_title_survivors(titles: list[str]) -> list[int]:
    """Indices surviving a first-wins dedupe on lowercased,
    punctuation-stripped, whitespace-collapsed titles."""
    import re

    seen = set()
    survivors = []
    for i, title in enumerate(titles):
        key = " ".join(re.sub(r"[^a-z0-9 ]+", " ", title.lower()).split())
        if key not in seen:
            seen.add(key)
            survivors.append(i)
    return survivors


def toposort_valid(order: list[str], deps: dict[str, list[str]]) -> bool:
    """Whether `order` is a permutation of deps' keys with every node
    after all of its dependencies."""
    if sorted(order) != sorted(deps):
        return False
    position = {name: i for i, name in enumerate(order)}
    return all(position[d] < position[name]
               for name, ds in deps.items() for d in ds)


def reeval_oracle(bf: float, p: float, alpha: float, achieved_power: float,
                  direction: str, precision_adequate: bool,
                  consistent_with_established: bool,
                  power_floor: float = 0.8) -> tuple[str, str]:
    """Verbatim restatement of the evidence classification table and the
    decision mapping. Returns (evidence_class, decision)."""
    conclusive = (bf > 10) or (p < alpha and achieved_power >= power_floor)
    if direction == "null" and bf < 1 / 10:
        conclusive = True
    if conclusive:
        if direction == "contradicts_theory":
            cls = "conclusive_contradictory"
        elif direction == "null":
            cls = "strong_null"
        else:
            cls = "conclusive_support"
    elif direction == "supports_theory" and not precision_adequate:
        cls = "consistent_imprecise"
    else:
        cls = "inconclusive"

    if cls == "conclusive_contradictory":
        decision = "NovelTheoryGeneration"
    elif cls == "consistent_imprecise":
        decision = "PrecisionEnhancement"
    elif cls == "strong_null":
        decision = ("AlternativeHypothesis" if consistent_with_established
                    else "TheoryRevision")
    elif cls == "conclusive_support":
        decision = "Complete"
    else:
        decision = "StudyEnhancement"
    return cls, decision


def replan_oracle(scores: list[float], epsilon: float, window: int,
                  validation_failed: bool = False) -> bool:
    """Restatement of the replanning trigger: validation failure, or the
    last `window` consecutive improvements each strictly below epsilon
    (never on the first iteration)."""
    if validation_failed:
        return True
    deltas = [scores[i + 1] - scores[i] for i in range(len(scores) - 1)]
    if len(deltas) < window:
        return False
    return all(d < epsilon for d in deltas[-window:])

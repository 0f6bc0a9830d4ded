"""Recursive package vetting.

Each requested library is checked against blacklist/whitelist status,
typosquatting (bounded Damerau-Levenshtein distance to a whitelisted
name), popularity, publisher verification, description keywords, and
release history. Checks apply recursively to dependencies with cycle
detection; a parent's verdict is never more lenient than its worst
dependency's.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from researchflow.errors import RegistryUnavailable


class Verdict(str, Enum):
    ALLOW = "allow"
    REVIEW = "review"
    DENY = "deny"


_STRICTNESS = {Verdict.ALLOW: 0, Verdict.REVIEW: 1, Verdict.DENY: 2}


def stricter(a: Verdict, b: Verdict) -> Verdict:
    return a if _STRICTNESS[a] >= _STRICTNESS[b] else b


def damerau_levenshtein(a: str, b: str) -> int:
    """Unrestricted Damerau-Levenshtein distance (Lowrance-Wagner).

    A true metric (symmetric, triangle inequality), unlike the
    optimal-string-alignment variant.
    """
    la, lb = len(a), len(b)
    maxdist = la + lb
    # d has two extra leading rows/cols for the transposition lookback
    d = [[maxdist] * (lb + 2) for _ in range(la + 2)]
    for i in range(la + 1):
        d[i + 1][1] = i
        d[i + 1][0] = maxdist
    for j in range(lb + 1):
        d[1][j + 1] = j
        d[0][j + 1] = maxdist
    last_row: dict[str, int] = {}
    for i in range(1, la + 1):
        last_col = 0
        for j in range(1, lb + 1):
            i1 = last_row.get(b[j - 1], 0)
            j1 = last_col
            cost = 0 if a[i - 1] == b[j - 1] else 1
            if cost == 0:
                last_col = j
            d[i + 1][j + 1] = min(
                d[i][j] + cost,            # substitute / match
                d[i + 1][j] + 1,           # insert
                d[i][j + 1] + 1,           # delete
                d[i1][j1] + (i - i1 - 1) + 1 + (j - j1 - 1),  # transpose
            )
        last_row[a[i - 1]] = i
    return d[la + 1][lb + 1]


@dataclass
class PackagePolicy:
    whitelist: list[str] = field(default_factory=list)
    blacklist: list[str] = field(default_factory=list)
    description_blacklist: list[str] = field(default_factory=list)
    popularity_threshold: int = 10_000  # downloads per month
    min_release_age_days: int = 30
    min_release_count: int = 2


@dataclass
class TyposquatCheck:
    nearest_whitelisted: str | None
    edit_distance: int | None

    @property
    def hit(self) -> bool:
        return self.edit_distance is not None and 1 <= self.edit_distance <= 2


@dataclass
class PackageReport:
    name: str
    version: str
    blacklist_hit: bool
    whitelist_hit: bool
    typosquat: TyposquatCheck
    popularity_ok: bool
    publisher_verified: bool
    description_flagged: bool
    release_history_ok: bool
    dependencies: list["PackageReport"] = field(default_factory=list)
    verdict: Verdict = Verdict.REVIEW
    notes: list[str] = field(default_factory=list)


def _typosquat_check(name: str, whitelist: list[str]) -> TyposquatCheck:
    if not whitelist:
        return TyposquatCheck(None, None)
    nearest = min(whitelist, key=lambda w: (damerau_levenshtein(name, w), w))
    return TyposquatCheck(nearest, damerau_levenshtein(name, nearest))


def vet_package(name: str, version: str, registry_metadata: dict,
                policy: PackagePolicy,
                _seen: set[str] | None = None) -> PackageReport:
    """Vet one package plus its dependency tree.

    `registry_metadata` maps package name to its registry record (a live
    client materializes the same shape). A missing record yields a
    review verdict rather than an exception, per RegistryUnavailable
    handling.
    """
    seen = _seen if _seen is not None else set()
    try:
        meta = _lookup(registry_metadata, name)
    except RegistryUnavailable:
        return PackageReport(
            name=name, version=version, blacklist_hit=False,
            whitelist_hit=False, typosquat=_typosquat_check(name, policy.whitelist),
            popularity_ok=False, publisher_verified=False,
            description_flagged=False, release_history_ok=False,
            verdict=Verdict.REVIEW, notes=["registry unavailable"])

    blacklist_hit = name in policy.blacklist
    whitelist_hit = name in policy.whitelist
    squat = _typosquat_check(name, policy.whitelist)
    popularity_ok = meta.get("downloads_per_month", 0) >= policy.popularity_threshold
    publisher_verified = bool(meta.get("publisher_verified", False))
    description = str(meta.get("description", "")).lower()
    description_flagged = any(w.lower() in description
                              for w in policy.description_blacklist)
    releases = meta.get("releases", [])
    release_history_ok = (
        len(releases) >= policy.min_release_count
        and max((r.get("age_days", 0) for r in releases), default=0)
        >= policy.min_release_age_days)

    verdict = _own_verdict(blacklist_hit, whitelist_hit, squat, popularity_ok,
                           publisher_verified, description_flagged,
                           release_history_ok)

    dep_reports = []
    seen.add(name)
    for dep in meta.get("dependencies", []):
        if dep in seen:
            continue  # cycle or shared dependency already vetted up-tree
        dep_report = vet_package(dep, "*", registry_metadata, policy, seen)
        dep_reports.append(dep_report)
        verdict = stricter(verdict, dep_report.verdict)

    return PackageReport(
        name=name, version=version, blacklist_hit=blacklist_hit,
        whitelist_hit=whitelist_hit, typosquat=squat,
        popularity_ok=popularity_ok, publisher_verified=publisher_verified,
        description_flagged=description_flagged,
        release_history_ok=release_history_ok,
        dependencies=dep_reports, verdict=verdict)


def _own_verdict(blacklist_hit, whitelist_hit, squat, popularity_ok,
                 publisher_verified, description_flagged,
                 release_history_ok) -> Verdict:
    if blacklist_hit:
        return Verdict.DENY
    if squat.hit and not whitelist_hit:
        return Verdict.DENY
    if whitelist_hit:
        return Verdict.ALLOW
    if description_flagged:
        return Verdict.DENY
    if not (popularity_ok and publisher_verified and release_history_ok):
        return Verdict.REVIEW
    return Verdict.ALLOW


def _lookup(registry_metadata: dict, name: str) -> dict:
    if registry_metadata is None:
        raise RegistryUnavailable("no registry configured")
    if name not in registry_metadata:
        raise RegistryUnavailable(f"no registry record for {name!r}")
    return registry_metadata[name]

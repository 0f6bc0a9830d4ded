"""Analysis planning: staged pipeline + exclusion protocol.

The plan is a DAG of named stages (cleaning through interpretation) plus
the exclusion protocol. Every exclusion rule must either trace verbatim
to a pre-registration criterion or carry an explicit deviation note;
silent drift between registered and implemented thresholds is exactly
the failure mode the alignment check exists to catch.
"""

from __future__ import annotations

import operator
from dataclasses import dataclass, field

from researchflow.design.prereg import PreRegistration
from researchflow.errors import AlignmentFailure

_OPS = {
    "<": operator.lt, "<=": operator.le, ">": operator.gt,
    ">=": operator.ge, "==": operator.eq, "!=": operator.ne,
}

DEFAULT_STAGE_NAMES = [
    "cleaning", "exclusions", "derived_datasets", "statistical_tests",
    "interpretation",
]


@dataclass
class ExclusionRule:
    """Predicate descriptor: exclude records where `field op value`."""
    name: str
    level: str  # participant | trial
    field: str
    op: str
    value: float | int | str | bool
    citation: str = ""
    deviation_note: str = ""

    def matches(self, record: dict) -> bool:
        if self.field not in record:
            return False
        return _OPS[self.op](record[self.field], self.value)

    def to_dict(self) -> dict:
        return {
            "name": self.name, "level": self.level, "field": self.field,
            "op": self.op, "value": self.value, "citation": self.citation,
            "deviation_note": self.deviation_note,
        }


@dataclass
class AnalysisStage:
    name: str
    goal: str
    inputs: list[str] = field(default_factory=list)
    outputs: list[str] = field(default_factory=list)
    depends_on: list[str] = field(default_factory=list)
    entry: str = ""  # script filename inside the code workspace

    def to_dict(self) -> dict:
        return {
            "name": self.name, "goal": self.goal, "inputs": self.inputs,
            "outputs": self.outputs, "depends_on": self.depends_on,
            "entry": self.entry,
        }


@dataclass
class AnalysisPlan:
    stages: list[AnalysisStage]
    exclusion_rules: list[ExclusionRule]
    attestation: dict = field(default_factory=dict)

    def stage(self, name: str) -> AnalysisStage:
        for s in self.stages:
            if s.name == name:
                return s
        raise KeyError(name)

    def to_dict(self) -> dict:
        return {
            "stages": [s.to_dict() for s in self.stages],
            "exclusion_rules": [r.to_dict() for r in self.exclusion_rules],
            "attestation": self.attestation,
        }


def topological_order(stages: list[AnalysisStage]) -> list[str]:
    """Stable topological sort (Kahn; declaration order breaks ties)."""
    names = [s.name for s in stages]
    if len(set(names)) != len(names):
        raise ValueError("duplicate stage names")
    deps = {s.name: list(s.depends_on) for s in stages}
    for name, ds in deps.items():
        for d in ds:
            if d not in deps:
                raise ValueError(f"stage {name!r} depends on unknown {d!r}")
    order: list[str] = []
    remaining = list(names)
    while remaining:
        ready = [n for n in remaining
                 if all(d in order for d in deps[n])]
        if not ready:
            raise ValueError("stage graph has a cycle")
        order.append(ready[0])
        remaining.remove(ready[0])
    return order


def _trace_rules(rules: list[ExclusionRule],
                 prereg: PreRegistration) -> list[dict]:
    """Check every rule against the pre-registration.

    Returns the deviation records; raises AlignmentFailure for any rule
    that neither traces to a registered criterion nor carries an explicit
    deviation note.
    """
    registered = {c.name: c for c in prereg.exclusion_criteria}
    deviations: list[dict] = []
    for rule in rules:
        crit = registered.get(rule.name)
        if crit is not None:
            exact = (crit.field == rule.field and crit.op == rule.op
                     and crit.value == rule.value and crit.level == rule.level)
            if exact:
                continue
            if not rule.deviation_note:
                raise AlignmentFailure(
                    f"rule {rule.name!r} drifts from the pre-registered "
                    f"criterion ({crit.field} {crit.op} {crit.value} vs "
                    f"{rule.field} {rule.op} {rule.value}) without a "
                    f"deviation note")
            deviations.append({
                "rule": rule.name, "kind": "threshold_drift",
                "registered": crit.to_dict(), "implemented": rule.to_dict(),
                "note": rule.deviation_note,
            })
            continue
        if not rule.citation:
            raise AlignmentFailure(
                f"rule {rule.name!r} is not pre-registered and carries no "
                f"citation")
        if not rule.deviation_note:
            raise AlignmentFailure(
                f"rule {rule.name!r} is not pre-registered and carries no "
                f"deviation note")
        deviations.append({
            "rule": rule.name, "kind": "unregistered_rule",
            "implemented": rule.to_dict(), "note": rule.deviation_note,
        })
    return deviations


def plan_analysis(prereg: PreRegistration, inspection,
                  extra_rules: list[ExclusionRule] | None = None
                  ) -> AnalysisPlan:
    """Build the staged plan and attest its pre-registration alignment.

    Registered exclusion criteria are copied into the plan verbatim;
    extra rules must carry a citation and a deviation note.
    """
    if prereg is None or inspection is None:
        raise ValueError("plan_analysis requires prereg and inspection")

    rules = [
        ExclusionRule(name=c.name, level=c.level, field=c.field, op=c.op,
                      value=c.value, citation=c.citation)
        for c in prereg.exclusion_criteria
    ]
    rules.extend(extra_rules or [])
    deviations = _trace_rules(rules, prereg)

    stages = [
        AnalysisStage(
            name="cleaning",
            goal="normalize raw participant files per inspection schema",
            inputs=["raw/"], outputs=["derived/clean.csv"]),
        AnalysisStage(
            name="exclusions",
            goal="apply the registered exclusion protocol",
            inputs=["derived/clean.csv"],
            outputs=["derived/included.csv", "derived/excluded.csv"],
            depends_on=["cleaning"]),
        AnalysisStage(
            name="derived_datasets",
            goal="compute per-participant and per-condition aggregates",
            inputs=["derived/included.csv"],
            outputs=["derived/aggregates.csv"],
            depends_on=["exclusions"]),
        AnalysisStage(
            name="statistical_tests",
            goal="run the pre-registered statistical tests",
            inputs=["derived/aggregates.csv"],
            outputs=["reports/stats.json"],
            depends_on=["derived_datasets"]),
        AnalysisStage(
            name="interpretation",
            goal="summarize findings against the hypotheses",
            inputs=["reports/stats.json"],
            outputs=["reports/interpretation.json"],
            depends_on=["statistical_tests"]),
    ]
    attestation = {
        "aligned": not deviations,
        "deviations": deviations,
        "analysable_count": getattr(inspection, "analysable_count", None),
    }
    return AnalysisPlan(stages=stages, exclusion_rules=rules,
                        attestation=attestation)


def apply_exclusions(records: list[dict], rules: list[ExclusionRule],
                     level: str = "participant"
                     ) -> tuple[list[dict], list[dict]]:
    """Partition records into (kept, excluded); each excluded record is
    annotated with the rule that removed it (first match wins)."""
    kept: list[dict] = []
    excluded: list[dict] = []
    active = [r for r in rules if r.level == level]
    for record in records:
        hit = next((r for r in active if r.matches(record)), None)
        if hit is None:
            kept.append(record)
        else:
            excluded.append({**record, "excluded_by": hit.name})
    return kept, excluded

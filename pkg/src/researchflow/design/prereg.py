"""OSF-style pre-registration construction and validation.

Seven sections, all mandatory; exclusion criteria are machine-readable
predicate descriptors so the analysis engine can apply and audit them
later. Serialization is canonical (sorted keys, fixed layout) so
serialize -> parse -> serialize is byte-stable.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

from researchflow.design.power import PowerAnalysisSpec
from researchflow.design.protocol import Protocol

SECTIONS = [
    "hypotheses", "independent_variables", "dependent_variables",
    "sampling_procedure", "exclusion_criteria", "analysis_plan",
    "anticipated_outcomes",
]


@dataclass
class ExclusionCriterion:
    """Machine-readable predicate: drop rows/participants where
    `field op value` holds."""
    name: str
    level: str  # participant | trial
    field: str
    op: str  # < <= > >= == !=
    value: float | int | str
    citation: str = "pre-registration"

    def to_dict(self) -> dict:
        return {"name": self.name, "level": self.level, "field": self.field,
                "op": self.op, "value": self.value, "citation": self.citation}

    @classmethod
    def from_dict(cls, data: dict) -> "ExclusionCriterion":
        return cls(**data)


@dataclass
class PreRegistration:
    hypotheses: list[str]
    independent_variables: list[dict]
    dependent_variables: list[dict]
    sampling_procedure: dict  # includes required_n
    exclusion_criteria: list[ExclusionCriterion]
    analysis_plan: list[dict]
    anticipated_outcomes: list[str]
    power_analysis: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "hypotheses": self.hypotheses,
            "independent_variables": self.independent_variables,
            "dependent_variables": self.dependent_variables,
            "sampling_procedure": self.sampling_procedure,
            "exclusion_criteria": [c.to_dict() for c in self.exclusion_criteria],
            "analysis_plan": self.analysis_plan,
            "anticipated_outcomes": self.anticipated_outcomes,
            "power_analysis": self.power_analysis,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PreRegistration":
        return cls(
            hypotheses=data["hypotheses"],
            independent_variables=data["independent_variables"],
            dependent_variables=data["dependent_variables"],
            sampling_procedure=data["sampling_procedure"],
            exclusion_criteria=[ExclusionCriterion.from_dict(c)
                                for c in data["exclusion_criteria"]],
            analysis_plan=data["analysis_plan"],
            anticipated_outcomes=data["anticipated_outcomes"],
            power_analysis=data.get("power_analysis", {}),
        )

    def serialize(self) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=2) + "\n"

    @property
    def required_n(self) -> int | None:
        return self.sampling_procedure.get("required_n")


def build_preregistration(protocol: Protocol, power: PowerAnalysisSpec,
                          idea: dict) -> PreRegistration:
    if power.result is None:
        raise ValueError("power analysis result missing")
    exclusions = [
        ExclusionCriterion(**c) if isinstance(c, dict) else c
        for c in idea.get("exclusion_criteria", [])
    ]
    return PreRegistration(
        hypotheses=idea.get("hypotheses", []),
        independent_variables=[
            {"name": c["name"], "task": c["task"], "levels": c.get("levels", [])}
            for c in protocol.conditions],
        dependent_variables=[
            {"name": m["name"], "definition": m.get("definition", "")}
            for m in protocol.measurements],
        sampling_procedure={
            "platform": idea.get("platform", "online recruitment"),
            "required_n": power.result.required_n,
            "eligibility": idea.get("eligibility", {}),
        },
        exclusion_criteria=exclusions,
        analysis_plan=idea.get("analysis_plan", []),
        anticipated_outcomes=idea.get("anticipated_outcomes", []),
        power_analysis=power.to_dict(),
    )


def validate_prereg(prereg: PreRegistration) -> list[str]:
    """Empty findings iff the pre-registration invariants hold."""
    findings = []
    data = prereg.to_dict()
    for section in SECTIONS:
        if not data[section]:
            findings.append(f"section {section!r} is empty")
    for crit in prereg.exclusion_criteria:
        if crit.op not in ("<", "<=", ">", ">=", "==", "!="):
            findings.append(
                f"exclusion criterion {crit.name!r} has invalid op {crit.op!r}")
        if crit.level not in ("participant", "trial"):
            findings.append(
                f"exclusion criterion {crit.name!r} has invalid level")
    if prereg.required_n is None:
        findings.append("sampling_procedure missing required_n")
    return findings


def render_preregistration(prereg: PreRegistration) -> str:
    """Human-readable text rendering stored next to the JSON artifact."""
    lines = ["PRE-REGISTRATION", "=" * 16, ""]
    data = prereg.to_dict()
    for section in SECTIONS + ["power_analysis"]:
        lines.append(section.replace("_", " ").title())
        lines.append("-" * len(section))
        value = data[section]
        if isinstance(value, list):
            for item in value:
                if isinstance(item, dict):
                    lines.append("  - " + json.dumps(item, sort_keys=True))
                else:
                    lines.append(f"  - {item}")
        else:
            lines.append("  " + json.dumps(value, sort_keys=True))
        lines.append("")
    return "\n".join(lines)

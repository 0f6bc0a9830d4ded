"""Structured re-evaluation decision architecture.

Classifies accumulated statistical evidence with conventional thresholds
(Bayes factor > 10; p below alpha with sufficient power) as practical
heuristics, then maps the evidence class to the pipeline's next move:
contradictory evidence triggers novel theory generation, consistent but
imprecise results trigger precision enhancement, strong null evidence
triggers theory revision or alternative hypothesis testing depending on
fit with established frameworks, and inconclusive evidence triggers study
enhancement.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

from researchflow.errors import InvalidSummary

BF_CONCLUSIVE = 10.0
DEFAULT_POWER_FLOOR = 0.8


class EffectDirection(str, Enum):
    SUPPORTS_THEORY = "supports_theory"
    CONTRADICTS_THEORY = "contradicts_theory"
    NULL = "null"


class EvidenceClass(str, Enum):
    CONCLUSIVE_CONTRADICTORY = "conclusive_contradictory"
    CONSISTENT_IMPRECISE = "consistent_imprecise"
    STRONG_NULL = "strong_null"
    CONCLUSIVE_SUPPORT = "conclusive_support"
    INCONCLUSIVE = "inconclusive"


class Decision(str, Enum):
    NOVEL_THEORY_GENERATION = "NovelTheoryGeneration"
    PRECISION_ENHANCEMENT = "PrecisionEnhancement"
    THEORY_REVISION = "TheoryRevision"
    ALTERNATIVE_HYPOTHESIS = "AlternativeHypothesis"
    STUDY_ENHANCEMENT = "StudyEnhancement"
    COMPLETE = "Complete"
    PARAMETER_SPACE_MAPPING = "ParameterSpaceMapping"


# Where each decision routes the pipeline next.
ROUTING = {
    Decision.NOVEL_THEORY_GENERATION: "idea_backlog",
    Decision.PRECISION_ENHANCEMENT: "method_agent",
    Decision.THEORY_REVISION: "method_agent",
    Decision.ALTERNATIVE_HYPOTHESIS: "idea_backlog",
    Decision.STUDY_ENHANCEMENT: "method_agent",
    Decision.COMPLETE: "none",
}


@dataclass
class EvidenceSummary:
    bayes_factor: float  # BF10 convention: > 1 favors the alternative
    p_value: float
    alpha: float
    achieved_power: float
    effect_direction: EffectDirection
    precision_adequate: bool

    def validate(self) -> None:
        if self.bayes_factor <= 0:
            raise InvalidSummary("bayes_factor must be > 0")
        if not 0 <= self.p_value <= 1:
            raise InvalidSummary("p_value outside [0, 1]")
        if not 0 < self.alpha < 1:
            raise InvalidSummary("alpha outside (0, 1)")
        if not 0 <= self.achieved_power <= 1:
            raise InvalidSummary("achieved_power outside [0, 1]")


@dataclass
class TheoryContext:
    consistent_with_established: bool
    framework_refs: list[str] = field(default_factory=list)


@dataclass
class ReEvalDecision:
    decision: Decision
    evidence_class: EvidenceClass
    rationale: str
    routed_followup: str
    backlog_notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "decision": self.decision.value,
            "evidence_class": self.evidence_class.value,
            "rationale": self.rationale,
            "routed_followup": self.routed_followup,
            "backlog_notes": self.backlog_notes,
        }


def classify(ev: EvidenceSummary,
             power_floor: float = DEFAULT_POWER_FLOOR) -> EvidenceClass:
    """Map an evidence summary to its evidence class.

    Conclusive means BF10 > 10 or a significant p with sufficient power;
    for null-direction evidence BF10 < 1/10 also counts as conclusive
    (evidence actively favoring the null).
    """
    ev.validate()
    conclusive = (ev.bayes_factor > BF_CONCLUSIVE
                  or (ev.p_value < ev.alpha and ev.achieved_power >= power_floor))
    if ev.effect_direction is EffectDirection.NULL and ev.bayes_factor < 1 / BF_CONCLUSIVE:
        conclusive = True
    if conclusive:
        if ev.effect_direction is EffectDirection.CONTRADICTS_THEORY:
            return EvidenceClass.CONCLUSIVE_CONTRADICTORY
        if ev.effect_direction is EffectDirection.NULL:
            return EvidenceClass.STRONG_NULL
        return EvidenceClass.CONCLUSIVE_SUPPORT
    if (ev.effect_direction is EffectDirection.SUPPORTS_THEORY
            and not ev.precision_adequate):
        return EvidenceClass.CONSISTENT_IMPRECISE
    return EvidenceClass.INCONCLUSIVE


def decide(cls: EvidenceClass, ctx: TheoryContext,
           note_parameter_space: bool = False) -> ReEvalDecision:
    """Map an evidence class (plus theory context) to the next move."""
    if cls is EvidenceClass.CONCLUSIVE_CONTRADICTORY:
        decision = Decision.NOVEL_THEORY_GENERATION
        rationale = "conclusive evidence contradicts the working theory"
    elif cls is EvidenceClass.CONSISTENT_IMPRECISE:
        decision = Decision.PRECISION_ENHANCEMENT
        rationale = "results consistent with theory but imprecise"
    elif cls is EvidenceClass.STRONG_NULL:
        if ctx.consistent_with_established:
            decision = Decision.ALTERNATIVE_HYPOTHESIS
            rationale = "strong null consistent with current understanding"
        else:
            decision = Decision.THEORY_REVISION
            rationale = "strong null conflicting with established frameworks"
    elif cls is EvidenceClass.CONCLUSIVE_SUPPORT:
        decision = Decision.COMPLETE
        rationale = "conclusive support; study complete"
    else:
        decision = Decision.STUDY_ENHANCEMENT
        rationale = "inconclusive evidence"

    notes = []
    if decision is Decision.COMPLETE and note_parameter_space:
        # Never a routing decision; recorded for the idea backlog only.
        notes.append(Decision.PARAMETER_SPACE_MAPPING.value)
    return ReEvalDecision(decision=decision, evidence_class=cls,
                          rationale=rationale,
                          routed_followup=ROUTING[decision],
                          backlog_notes=notes)


def evaluate(ev: EvidenceSummary, ctx: TheoryContext,
             power_floor: float = DEFAULT_POWER_FLOOR,
             note_parameter_space: bool = False) -> ReEvalDecision:
    return decide(classify(ev, power_floor), ctx, note_parameter_space)

import json

import pytest

from researchflow.design import (
    InstrumentRegistry,
    PowerAnalysisSpec,
    PreRegistration,
    Protocol,
    TestFamily,
    build_preregistration,
    closed_form_required_n,
    compute_power,
    design_protocol,
    render_preregistration,
    validate_prereg,
)
from researchflow.design.power import achieved_power, run_power_script
from researchflow.design.prereg import ExclusionCriterion
from researchflow.design.protocol import Instrument
from researchflow.errors import ExhaustedWithoutAcceptance
from researchflow.kernel import AgentRegistry, IterationPolicy

from oracles import power_n_correlation


REGISTRY = InstrumentRegistry([
    Instrument("VWM", "task"),
    Instrument("MRT", "task"),
    Instrument("VVIQ2", "questionnaire"),
])


def corr_spec(r=0.2, alpha=0.05, power=0.8):
    return PowerAnalysisSpec(TestFamily.CORRELATION, r, alpha, power)


def good_protocol_dict(tasks=None):
    tasks = tasks or ["VWM", "MRT", "VVIQ2"]
    return {
        "tasks": tasks,
        "conditions": [{"name": "load", "task": tasks[0], "levels": [1, 4]}],
        "trial_structure": {"blocks": 3, "trials_per_block": 40},
        "counterbalancing": "block order counterbalanced across participants",
        "measurements": [{"name": "accuracy", "definition": "prop correct"}],
    }


class TestClosedFormPower:
    def test_reference_case_194(self):
        assert closed_form_required_n(corr_spec(0.2, 0.05, 0.8)) == 194

    def test_matches_search_oracle_on_grid(self):
        for r in (0.1, 0.2, 0.3, 0.4, 0.5):
            for alpha in (0.01, 0.05):
                for power in (0.8, 0.9, 0.95):
                    n = closed_form_required_n(corr_spec(r, alpha, power))
                    oracle = power_n_correlation(r, alpha, power)
                    assert abs(n - oracle) <= 1, (r, alpha, power)

    def test_degenerate_effect_clamps_to_floor(self):
        assert closed_form_required_n(corr_spec(r=0.9999999)) == 3

    def test_monotone_in_effect_size(self):
        ns = [closed_form_required_n(corr_spec(r))
              for r in (0.1, 0.2, 0.3, 0.4, 0.5)]
        assert ns == sorted(ns, reverse=True)

    def test_monotone_in_target_power(self):
        ns = [closed_form_required_n(corr_spec(power=p))
              for p in (0.5, 0.7, 0.8, 0.9, 0.95)]
        assert ns == sorted(ns)

    def test_achieved_power_meets_target(self):
        for r in (0.1, 0.3, 0.5):
            spec = corr_spec(r)
            n = closed_form_required_n(spec)
            assert achieved_power(spec, n) >= spec.target_power

    def test_mean_difference_family(self):
        spec = PowerAnalysisSpec(TestFamily.MEAN_DIFFERENCE, 0.5, 0.05, 0.8)
        n = closed_form_required_n(spec)
        # normal-approximation per-group n for d=0.5 is 63
        assert n == 63
        assert achieved_power(spec, n) >= 0.8

    def test_anova_family(self):
        spec = PowerAnalysisSpec(TestFamily.ANOVA_LIKE, 0.25, 0.05, 0.8,
                                 groups=3)
        n = closed_form_required_n(spec)
        assert achieved_power(spec, n) >= 0.8
        assert achieved_power(spec, n - 1) < 0.8


class TestSandboxAgreement:
    def test_dual_route_agreement(self, tmp_path):
        spec = compute_power(corr_spec(0.2, 0.05, 0.8), tmp_path)
        assert spec.result.required_n == 194
        assert abs(spec.result.sandbox_n - 194) <= 1
        assert spec.result.achieved_power_at_n >= 0.8

    def test_batch_script_grid(self, tmp_path):
        specs = [corr_spec(r, a, p)
                 for r in (0.1, 0.3) for a in (0.05,) for p in (0.8, 0.9)]
        results = run_power_script(specs, tmp_path)
        for spec, sandbox in zip(specs, results):
            assert abs(sandbox["required_n"]
                       - closed_form_required_n(spec)) <= 1


class TestDesignProtocol:
    def _node(self):
        return AgentRegistry().register_root("method-agent")

    def test_accepted_protocol_lists_instruments(self):
        candidate = json.dumps(good_protocol_dict())
        protocol, result = design_protocol(
            self._node(), "imagery and memory", REGISTRY,
            propose=lambda ctx: candidate)
        assert protocol.tasks == ["VWM", "MRT", "VVIQ2"]
        assert result.iterations == 1

    def test_unregistered_instrument_fails(self):
        candidate = json.dumps(good_protocol_dict(["EEG-64ch"]))
        with pytest.raises(ExhaustedWithoutAcceptance):
            design_protocol(self._node(), "idea", REGISTRY,
                            propose=lambda ctx: candidate,
                            policy=IterationPolicy(max_iterations=2))

    def test_two_cycle_review(self):
        bad = json.dumps(good_protocol_dict(["EEG-64ch"]))
        good = json.dumps(good_protocol_dict())
        responses = iter([bad, good])
        _protocol, result = design_protocol(
            self._node(), "idea", REGISTRY,
            propose=lambda ctx: next(responses))
        assert result.iterations == 2


def fixture_prereg():
    protocol = Protocol.from_dict(good_protocol_dict())
    spec = corr_spec()
    spec_n = closed_form_required_n(spec)
    from researchflow.design.power import PowerResult
    spec.result = PowerResult(spec_n, achieved_power(spec, spec_n))
    idea = {
        "hypotheses": ["VWM capacity predicts imagery vividness"],
        "exclusion_criteria": [
            {"name": "low_accuracy", "level": "participant",
             "field": "accuracy", "op": "<", "value": 0.65,
             "citation": "pre-registration"}],
        "analysis_plan": [{"stage": "correlation", "test": "pearson"}],
        "anticipated_outcomes": ["positive correlation"],
    }
    return build_preregistration(protocol, spec, idea)


class TestPreRegistration:
    def test_complete_fixture_zero_findings(self):
        assert validate_prereg(fixture_prereg()) == []

    def test_missing_exclusion_criteria_finding(self):
        prereg = fixture_prereg()
        prereg.exclusion_criteria = []
        findings = validate_prereg(prereg)
        assert any("exclusion_criteria" in f for f in findings)

    def test_roundtrip_byte_stable(self):
        prereg = fixture_prereg()
        first = prereg.serialize()
        second = PreRegistration.from_dict(json.loads(first)).serialize()
        assert first == second

    def test_render_contains_all_sections(self):
        text = render_preregistration(fixture_prereg())
        for heading in ("Hypotheses", "Exclusion Criteria", "Analysis Plan"):
            assert heading in text

    def test_exclusion_criteria_machine_readable(self):
        prereg = fixture_prereg()
        crit = prereg.exclusion_criteria[0]
        assert isinstance(crit, ExclusionCriterion)
        assert (crit.field, crit.op, crit.value) == ("accuracy", "<", 0.65)

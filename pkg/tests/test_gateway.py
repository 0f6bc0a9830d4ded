import random

import pytest

from researchflow.errors import (
    AllCandidatesUnavailable,
    NoBinding,
    ProviderError,
    RateLimitTimeout,
    ScreeningReject,
)
from researchflow.gateway import (
    CompletionRequest,
    ModelGateway,
    RateLimitPolicy,
    ScriptedBackend,
    SlidingWindowLimiter,
    UsageLedger,
)
from researchflow.gateway.bindings import default_binding_table
from researchflow.gateway.ledger import UnitPrices


def make_gateway(script, **kwargs):
    return ModelGateway(default_binding_table(), ScriptedBackend(script), **kwargs)


class TestRouting:
    def test_vision_role_routes_to_vision_model(self):
        table = default_binding_table()
        descriptor = table.route("panel-inspection")
        assert descriptor.vision

    def test_fallback_to_second_candidate(self):
        table = default_binding_table()
        primary = table.route("master")
        table.mark_unavailable(primary.provider, primary.model)
        second = table.route("master")
        assert (second.provider, second.model) != (primary.provider, primary.model)

    def test_unknown_role(self):
        with pytest.raises(NoBinding):
            default_binding_table().route("unknown-role")

    def test_all_unavailable(self):
        table = default_binding_table()
        for cand in table.get("judge").candidates:
            table.mark_unavailable(cand.provider, cand.model)
        with pytest.raises(AllCandidatesUnavailable):
            table.route("judge")


class TestComplete:
    def test_scripted_passthrough_records_tokens(self):
        gw = make_gateway({"master": ["the plan is sound and complete"]})
        ex = gw.complete(CompletionRequest("master", "ideation", "ctx words here"))
        assert ex.text == "the plan is sound and complete"
        assert ex.input_tokens == 3
        assert ex.output_tokens == 6
        assert ex.screen_report.verdict == "pass"

    def test_blacklisted_url_rejected(self):
        gw = make_gateway({"master": ["fetch http://evil.example/payload now"]})
        with pytest.raises(ScreeningReject) as exc:
            gw.complete(CompletionRequest("master", "ideation", "c"))
        kinds = [e.kind for e in exc.value.report.unexpected_elements]
        assert "external_url" in kinds

    def test_retry_then_success(self):
        script = {"master": [{"text": "recovered fine after the blip",
                              "fail_times": 2}]}
        gw = make_gateway(script, retries=3)
        ex = gw.complete(CompletionRequest("master", "ideation", "c"))
        assert ex.attempts == 3
        assert ex.text.startswith("recovered")

    def test_provider_error_after_retries(self):
        script = {"master": [{"text": "never", "fail_times": 99}]}
        gw = make_gateway(script, retries=3)
        with pytest.raises(ProviderError):
            gw.complete(CompletionRequest("master", "ideation", "c"))

    def test_screening_totality(self):
        # Every logged exchange carries a screen report.
        gw = make_gateway({"master": ["alpha beta gamma delta"] })
        for _ in range(5):
            gw.complete(CompletionRequest("master", "ideation", "c"))
        assert all(ex.screen_report is not None for ex in gw.exchange_log)


class TestLedger:
    def test_empty_run_all_zero(self):
        gw = make_gateway({})
        table = gw.ledger_report()
        assert all(row["calls"] == 0 for row in table["modules"].values())
        assert table["total"]["calls"] == 0

    def test_totals_equal_exchange_log_sum(self):
        rng = random.Random(3)
        words = ["alpha", "beta", "gamma", "delta"]
        script = {"master": [" ".join(rng.choices(words, k=rng.randrange(1, 9)))
                             for _ in range(40)]}
        gw = make_gateway(script)
        modules = ["ideation", "analysis", "manuscript"]
        for i in range(40):
            gw.complete(CompletionRequest(
                "master", modules[i % 3], "ctx " * rng.randrange(1, 5)))
        table = gw.ledger_report()
        assert table["total"]["input_tokens"] == sum(
            ex.input_tokens for ex in gw.exchange_log)
        assert table["total"]["output_tokens"] == sum(
            ex.output_tokens for ex in gw.exchange_log)
        assert table["total"]["calls"] == len(gw.exchange_log)
        # additivity over module rows
        assert table["total"]["input_tokens"] == sum(
            r["input_tokens"] for r in table["modules"].values())

    def test_cost_follows_unit_prices(self):
        ledger = UsageLedger({"m": UnitPrices(input_per_mtok=2.0,
                                              output_per_mtok=10.0)})
        ledger.record("ideation", "m", 1_000_000, 500_000)
        assert ledger.total_cost == pytest.approx(2.0 + 5.0)


class FakeClock:
    def __init__(self):
        self.now = 0.0

    def __call__(self):
        return self.now

    def sleep(self, seconds):
        self.now += seconds


class TestRateLimiter:
    def test_window_conformance(self):
        clock = FakeClock()
        policy = RateLimitPolicy(requests_per_minute=10,
                                 tokens_per_minute=10_000, burst=2)
        limiter = SlidingWindowLimiter({"p": policy}, clock=clock,
                                       sleeper=clock.sleep)
        granted_times = []
        for _ in range(40):
            limiter.acquire("p", tokens=10, max_wait_s=600)
            granted_times.append(clock.now)
            clock.sleep(0.5)
        # Every 60s sliding window admits at most limit + burst grants.
        for t in granted_times:
            in_window = [g for g in granted_times if t - 60 < g <= t]
            assert len(in_window) <= 10 + 2

    def test_timeout(self):
        clock = FakeClock()
        policy = RateLimitPolicy(requests_per_minute=1, tokens_per_minute=100)
        limiter = SlidingWindowLimiter({"p": policy}, clock=clock,
                                       sleeper=clock.sleep)
        limiter.acquire("p", max_wait_s=1)
        with pytest.raises(RateLimitTimeout):
            limiter.acquire("p", max_wait_s=1)

    def test_unknown_provider_unthrottled(self):
        limiter = SlidingWindowLimiter({})
        limiter.acquire("scripted")  # no policy, no blocking


class TestCheckpointState:
    def test_backend_cursor_roundtrip(self):
        script = {"master": ["one", "two", "three"]}
        gw = make_gateway(script)
        gw.complete(CompletionRequest("master", "ideation", "c"))
        state = gw.state_dict()

        gw2 = make_gateway(script)
        gw2.load_state(state)
        ex = gw2.complete(CompletionRequest("master", "ideation", "c"))
        assert ex.text == "two"

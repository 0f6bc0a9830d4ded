"""Gateway service: the single path every model call takes.

Route -> rate limit -> call with retries -> screen -> record usage.
No agent ever observes an unscreened response; every stored exchange
carries its screen report. A full live study averaged tens of millions of
tokens (documented mean 32.5M), which is why accounting sits on this one
choke point.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable

from researchflow.errors import ProviderError, ScreeningReject
from researchflow.gateway.backends import Backend, TransientBackendError
from researchflow.gateway.bindings import BindingTable, ModelDescriptor
from researchflow.gateway.ledger import UsageLedger
from researchflow.gateway.ratelimit import SlidingWindowLimiter
from researchflow.safety.screening import (
    ResponseScreenReport,
    ScreenExpectations,
    screen_response,
)

# The nine workflow modules the usage table is keyed by.
WORKFLOW_MODULES = [
    "ideation", "methodology", "deployment", "analysis", "re_evaluation",
    "visuals", "manuscript", "review", "document",
]

DEFAULT_RETRIES = 3


@dataclass
class CompletionRequest:
    role_key: str
    module: str
    context: str
    max_output: int = 4096


@dataclass
class CompletionExchange:
    request: CompletionRequest
    model: ModelDescriptor
    text: str
    input_tokens: int
    output_tokens: int
    latency_s: float
    attempts: int
    screen_report: ResponseScreenReport

    def to_dict(self) -> dict:
        return {
            "role_key": self.request.role_key,
            "module": self.request.module,
            "model": f"{self.model.provider}/{self.model.model}",
            "input_tokens": self.input_tokens,
            "output_tokens": self.output_tokens,
            "attempts": self.attempts,
            "screen_verdict": self.screen_report.verdict,
        }


class ModelGateway:
    def __init__(self, bindings: BindingTable, backend: Backend,
                 ledger: UsageLedger | None = None,
                 limiter: SlidingWindowLimiter | None = None,
                 retries: int = DEFAULT_RETRIES,
                 backoff_base_s: float = 0.5,
                 sleeper: Callable[[float], None] = None,
                 blacklist: list[str] | None = None,
                 audit_hook: Callable[[str, dict], None] | None = None):
        self.bindings = bindings
        self.backend = backend
        self.ledger = ledger or UsageLedger()
        self.limiter = limiter or SlidingWindowLimiter({})
        self.retries = retries
        self.backoff_base_s = backoff_base_s
        self.sleeper = sleeper or (lambda s: None)
        self.blacklist = blacklist or []
        self.audit_hook = audit_hook
        self.exchange_log: list[CompletionExchange] = []

    def route(self, role_key: str) -> ModelDescriptor:
        return self.bindings.route(role_key)

    def complete(self, request: CompletionRequest) -> CompletionExchange:
        """One screened, accounted model call with retry and backoff."""
        binding = self.bindings.get(request.role_key)
        model = self.bindings.route(request.role_key)
        self.limiter.acquire(model.provider,
                             tokens=len(request.context.split()))

        last_error = None
        response = None
        attempts = 0
        for attempt in range(1, self.retries + 1):
            attempts = attempt
            try:
                response = self.backend.generate(
                    request.role_key, request.context, request.max_output)
                break
            except TransientBackendError as exc:
                last_error = exc
                self.sleeper(self.backoff_base_s * (2 ** (attempt - 1)))
        if response is None:
            raise ProviderError(
                f"backend failed after {self.retries} attempts: {last_error}")

        expectations = ScreenExpectations(
            code_permitted=binding.code_permitted,
            urls_permitted=binding.urls_permitted,
            blacklist=self.blacklist,
            entropy_band=None if binding.code_permitted else (0.5, 5.5))
        report = screen_response(response.text, expectations)

        exchange = CompletionExchange(
            request=request, model=model, text=response.text,
            input_tokens=response.input_tokens,
            output_tokens=response.output_tokens,
            latency_s=response.latency_s, attempts=attempts,
            screen_report=report)
        self.exchange_log.append(exchange)
        self.ledger.record(request.module, model.model,
                           response.input_tokens, response.output_tokens)
        if self.audit_hook:
            self.audit_hook("gateway_exchange", exchange.to_dict())
        if report.verdict == "reject":
            raise ScreeningReject(
                f"response for {request.role_key!r} failed screening",
                report=report)
        return exchange

    def ledger_report(self) -> dict:
        return self.ledger.module_table(WORKFLOW_MODULES)

    # --- checkpoint support ---

    def state_dict(self) -> dict:
        backend_state = {}
        if hasattr(self.backend, "state_dict"):
            backend_state = self.backend.state_dict()
        return {
            "backend": backend_state,
            "ledger": self.ledger.state_dict(),
            "exchange_count": len(self.exchange_log),
        }

    def load_state(self, state: dict) -> None:
        if hasattr(self.backend, "load_state"):
            self.backend.load_state(state.get("backend", {}))
        self.ledger.load_state(state.get("ledger", {}))

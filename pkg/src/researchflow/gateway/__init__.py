"""Mixture-of-Agents model gateway: role-to-model routing with fallback,
rate limiting, retries, response screening, and usage accounting."""

from researchflow.gateway.bindings import (
    BindingTable,
    ModelBinding,
    ModelDescriptor,
    default_binding_table,
)
from researchflow.gateway.backends import (
    Backend,
    BackendResponse,
    ScriptedBackend,
    TransientBackendError,
)
from researchflow.gateway.ledger import UsageLedger
from researchflow.gateway.ratelimit import RateLimitPolicy, SlidingWindowLimiter
from researchflow.gateway.service import CompletionExchange, CompletionRequest, ModelGateway

__all__ = [
    "Backend",
    "BackendResponse",
    "BindingTable",
    "CompletionExchange",
    "CompletionRequest",
    "default_binding_table",
    "ModelBinding",
    "ModelDescriptor",
    "ModelGateway",
    "RateLimitPolicy",
    "ScriptedBackend",
    "SlidingWindowLimiter",
    "TransientBackendError",
    "UsageLedger",
]

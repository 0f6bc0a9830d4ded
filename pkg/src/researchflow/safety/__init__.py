"""Safety layer: package vetting, execution limits, response screening,
and the append-only audit log."""

from researchflow.safety.audit import AuditEvent, AuditLog
from researchflow.safety.packages import (
    PackagePolicy,
    PackageReport,
    Verdict,
    damerau_levenshtein,
    vet_package,
)
from researchflow.safety.sandbox import ExecutionLimits, ExecutionResult, enforce_limits
from researchflow.safety.screening import (
    ResponseScreenReport,
    ScreenExpectations,
    screen_response,
    shannon_entropy,
)

__all__ = [
    "AuditEvent",
    "AuditLog",
    "ExecutionLimits",
    "ExecutionResult",
    "PackagePolicy",
    "PackageReport",
    "ResponseScreenReport",
    "ScreenExpectations",
    "Verdict",
    "damerau_levenshtein",
    "enforce_limits",
    "screen_response",
    "shannon_entropy",
    "vet_package",
]

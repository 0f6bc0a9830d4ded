"""Shared exception hierarchy.

Errors are grouped by subsystem; all inherit from ResearchFlowError so
callers can catch at whatever granularity they need.
"""


class ResearchFlowError(Exception):
    """Base class for all engine errors."""


# --- orchestrator ---

class BudgetExceeded(ResearchFlowError):
    """A run budget (tokens, cost, or wall clock) was exhausted; run halts."""


class IllegalTransition(ResearchFlowError):
    """A stage transition outside the declared stage graph was requested."""


class DigestMismatch(ResearchFlowError):
    """Checkpoint payload does not hash to its recorded state digest."""


class UnknownRun(ResearchFlowError):
    pass


class GateAlreadyDecided(ResearchFlowError):
    pass


class UnknownGate(ResearchFlowError):
    pass


# --- agent kernel ---

class BackendFailure(ResearchFlowError):
    """Model backend failed after retries."""


class SafetyReject(ResearchFlowError):
    """Response screening rejected a backend response."""


class RecursionLimitExceeded(ResearchFlowError):
    pass


class SpecialistCannotSpawn(ResearchFlowError):
    pass


# --- model gateway ---

class NoBinding(ResearchFlowError):
    pass


class AllCandidatesUnavailable(ResearchFlowError):
    pass


class RateLimitTimeout(ResearchFlowError):
    pass


class ScreeningReject(ResearchFlowError):
    """Carries the screen report that caused the rejection."""

    def __init__(self, message, report=None):
        super().__init__(message)
        self.report = report


class ProviderError(ResearchFlowError):
    """Provider call failed after all retry attempts."""


# --- knowledge engine ---

class AllSourcesFailed(ResearchFlowError):
    pass


class RepoCapExceeded(ResearchFlowError):
    pass


class EmptyRepo(ResearchFlowError):
    pass


class UnknownDocument(ResearchFlowError):
    pass


# --- safety sentinel ---

class RegistryUnavailable(ResearchFlowError):
    pass


class SandboxTimeout(ResearchFlowError):
    pass


class StorageExceeded(ResearchFlowError):
    pass


class EnvProvisionFailure(ResearchFlowError):
    pass


class LogCorrupt(ResearchFlowError):
    """Audit log digest chain broken; carries the first bad offset."""

    def __init__(self, message, offset=None):
        super().__init__(message)
        self.offset = offset


# --- ideation ---

class EmptyAfterFilter(ResearchFlowError):
    pass


class ExhaustedWithoutAcceptance(ResearchFlowError):
    pass


class SearchUnavailable(ResearchFlowError):
    pass


# --- study design ---

class OracleMismatch(ResearchFlowError):
    """Sandbox-computed sample size disagrees with the closed-form result."""


class SandboxFailure(ResearchFlowError):
    pass


# --- field deployment ---

class PlatformRejected(ResearchFlowError):
    pass


class PlatformUnavailable(ResearchFlowError):
    pass


class GateNotApproved(ResearchFlowError):
    pass


class RepoUnavailable(ResearchFlowError):
    pass


class SchemaViolation(ResearchFlowError):
    """PII-like column detected in a participant file; file quarantined."""


# --- analysis engine ---

class AlignmentFailure(ResearchFlowError):
    """Analysis plan contradicts pre-registration without a deviation note."""


class AnchorNotFound(ResearchFlowError):
    pass


class AnchorAmbiguous(ResearchFlowError):
    pass


class StageOutputMissing(ResearchFlowError):
    pass


# --- re-evaluation ---

class InvalidSummary(ResearchFlowError):
    pass


# --- reporting ---

class NoArtifacts(ResearchFlowError):
    pass


class RenderFailure(ResearchFlowError):
    pass


class InspectionExhausted(ResearchFlowError):
    pass


class UnverifiedCitation(ResearchFlowError):
    pass


class MissingSection(ResearchFlowError):
    pass


class BuildFailure(ResearchFlowError):
    pass


class DanglingReference(ResearchFlowError):
    pass


class InvalidConfig(ResearchFlowError):
    pass


class GateVersionConflict(ResearchFlowError):
    pass


class StageFailed(ResearchFlowError):
    pass

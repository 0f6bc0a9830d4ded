"""Role-key to model bindings with ordered fallback candidates.

The shipped default table mirrors a plausible frontier-model line-up; any
role that requires vision may only bind vision-capable candidates.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from researchflow.errors import AllCandidatesUnavailable, NoBinding


@dataclass(frozen=True)
class ModelDescriptor:
    provider: str
    model: str
    vision: bool = False
    reasoning_tier: str = "standard"  # standard | extended


@dataclass
class ModelBinding:
    role_key: str
    candidates: list[ModelDescriptor]
    requires_vision: bool = False
    code_permitted: bool = False
    urls_permitted: bool = False

    def __post_init__(self):
        if not self.candidates:
            raise ValueError(f"binding {self.role_key!r} has no candidates")
        if self.requires_vision:
            bad = [c.model for c in self.candidates if not c.vision]
            if bad:
                raise ValueError(
                    f"vision role {self.role_key!r} binds non-vision models {bad}")


class BindingTable:
    def __init__(self, bindings: list[ModelBinding] | None = None):
        self._bindings: dict[str, ModelBinding] = {}
        self._unavailable: set[tuple[str, str]] = set()
        for b in bindings or []:
            self.add(b)

    def add(self, binding: ModelBinding) -> None:
        self._bindings[binding.role_key] = binding

    def get(self, role_key: str) -> ModelBinding:
        if role_key not in self._bindings:
            raise NoBinding(f"no binding for role {role_key!r}")
        return self._bindings[role_key]

    def mark_unavailable(self, provider: str, model: str) -> None:
        self._unavailable.add((provider, model))

    def mark_available(self, provider: str, model: str) -> None:
        self._unavailable.discard((provider, model))

    def route(self, role_key: str) -> ModelDescriptor:
        """First available candidate for the role, skipping marked-down
        models per the fallback order."""
        binding = self.get(role_key)
        for cand in binding.candidates:
            if (cand.provider, cand.model) not in self._unavailable:
                return cand
        raise AllCandidatesUnavailable(
            f"all candidates for role {role_key!r} unavailable")

    def roles(self) -> list[str]:
        return sorted(self._bindings)


def default_binding_table() -> BindingTable:
    """Fixture line-up used by desk-scale runs and tests."""
    sonnet = ModelDescriptor("anthropic", "claude-sonnet-4", vision=True,
                             reasoning_tier="extended")
    o3mini = ModelDescriptor("openai", "o3-mini", reasoning_tier="extended")
    o1 = ModelDescriptor("openai", "o1", reasoning_tier="extended")
    grok = ModelDescriptor("xai", "grok-3")
    pixtral = ModelDescriptor("mistral", "pixtral-large", vision=True)
    gemini = ModelDescriptor("google", "gemini-2.5-pro", vision=True,
                             reasoning_tier="extended")

    table = BindingTable()
    table.add(ModelBinding("master", [sonnet, gemini]))
    table.add(ModelBinding("idea-agent", [gemini, sonnet]))
    table.add(ModelBinding("method-agent", [o1, sonnet]))
    table.add(ModelBinding("power-analysis", [o3mini, o1]))
    table.add(ModelBinding("implementation-agent", [sonnet, grok]))
    table.add(ModelBinding("coder", [sonnet, o3mini], code_permitted=True))
    table.add(ModelBinding("troubleshooter", [grok, o3mini], code_permitted=True))
    table.add(ModelBinding("verifier", [o1, gemini]))
    table.add(ModelBinding("analysis-agent", [sonnet, o1], code_permitted=True))
    table.add(ModelBinding("re-evaluation", [o1, sonnet]))
    table.add(ModelBinding("visuals-agent", [sonnet, gemini], code_permitted=True))
    table.add(ModelBinding("panel-inspection", [pixtral, sonnet, gemini],
                           requires_vision=True))
    table.add(ModelBinding("manuscript-agent", [gemini, sonnet],
                           urls_permitted=True))
    table.add(ModelBinding("archivist", [gemini, sonnet], urls_permitted=True))
    table.add(ModelBinding("reviewer", [o1, gemini]))
    table.add(ModelBinding("judge", [o1, gemini]))
    table.add(ModelBinding("novelty-agent", [gemini, o3mini]))
    table.add(ModelBinding("feasibility-agent", [o3mini, grok]))
    table.add(ModelBinding("prereg-agent", [o1, sonnet]))
    table.add(ModelBinding("document-agent", [sonnet, gemini],
                           code_permitted=True))
    return table

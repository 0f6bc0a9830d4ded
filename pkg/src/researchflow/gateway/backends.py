"""Model backends behind one interface.

The scripted backend replays canned responses per role key (from an
in-memory mapping or a fixture file), making whole-pipeline runs fully
deterministic. Its per-role cursors are part of checkpointed run state so
a restored run resumes mid-script.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Protocol

from researchflow.errors import ProviderError


class TransientBackendError(Exception):
    """Retryable provider failure (rate limit blips, 5xx, timeouts)."""


@dataclass
class BackendResponse:
    text: str
    input_tokens: int
    output_tokens: int
    latency_s: float = 0.0


class Backend(Protocol):
    def generate(self, role_key: str, context: str,
                 max_output: int) -> BackendResponse: ...


def _count_tokens(text: str) -> int:
    # Whitespace tokenization is enough for accounting at desk scale.
    return len(text.split())


class ScriptedBackend:
    """Replays responses per role key in order.

    Script shape: {role_key: [response, ...]} where each response is a
    string or {"text": ..., "fail_times": n} to inject n transient
    failures before succeeding. When a role's list is exhausted the last
    entry repeats, so loops with variable iteration counts stay scripted.
    """

    def __init__(self, script: dict[str, list]):
        self.script = {k: list(v) for k, v in script.items()}
        self.cursors: dict[str, int] = {}
        self._fail_budget: dict[tuple[str, int], int] = {}

    @classmethod
    def from_file(cls, path: str | Path) -> "ScriptedBackend":
        data = json.loads(Path(path).read_text())
        return cls(data)

    def generate(self, role_key: str, context: str,
                 max_output: int = 4096) -> BackendResponse:
        if role_key not in self.script or not self.script[role_key]:
            raise ProviderError(f"no scripted responses for role {role_key!r}")
        entries = self.script[role_key]
        cursor = self.cursors.get(role_key, 0)
        index = min(cursor, len(entries) - 1)
        entry = entries[index]
        if isinstance(entry, dict) and "fail_times" in entry:
            key = (role_key, index)
            remaining = self._fail_budget.get(key, entry["fail_times"])
            if remaining > 0:
                self._fail_budget[key] = remaining - 1
                raise TransientBackendError(
                    f"scripted transient failure for {role_key!r}")
            text = entry.get("text", "")
        elif isinstance(entry, dict):
            text = entry.get("text", json.dumps(entry, sort_keys=True))
        else:
            text = str(entry)
        self.cursors[role_key] = cursor + 1
        return BackendResponse(
            text=text,
            input_tokens=_count_tokens(context),
            output_tokens=_count_tokens(text),
            latency_s=0.0,
        )

    # --- checkpoint support ---

    def state_dict(self) -> dict:
        return {"cursors": dict(self.cursors)}

    def load_state(self, state: dict) -> None:
        self.cursors = dict(state.get("cursors", {}))
        self._fail_budget = {}


class EchoBackend:
    """Echoes the context back; handy for plumbing tests."""

    def generate(self, role_key: str, context: str,
                 max_output: int = 4096) -> BackendResponse:
        text = context[:max_output]
        return BackendResponse(text, _count_tokens(context), _count_tokens(text))

    def state_dict(self) -> dict:
        return {}

    def load_state(self, state: dict) -> None:
        pass

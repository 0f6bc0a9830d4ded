"""Experimental protocol design against the instrument registry.

The registry declares which tasks and questionnaires the run is permitted
to use (mirroring ethics-approval constraints); a protocol referencing
anything outside it fails validation. Drafting runs under the agent
kernel's review loop.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from researchflow.errors import ExhaustedWithoutAcceptance
from researchflow.kernel import (
    AcceptanceTest,
    AgentNode,
    CheckResult,
    IterationPolicy,
    TaskEnvelope,
    run_task,
)


@dataclass
class Instrument:
    name: str
    kind: str  # task | questionnaire
    constraints: dict = field(default_factory=dict)


class InstrumentRegistry:
    def __init__(self, instruments: list[Instrument]):
        self._by_name = {i.name: i for i in instruments}

    @classmethod
    def from_file(cls, path: Path) -> "InstrumentRegistry":
        data = json.loads(Path(path).read_text())
        return cls([Instrument(**item) for item in data["instruments"]])

    def __contains__(self, name: str) -> bool:
        return name in self._by_name

    def names(self) -> list[str]:
        return sorted(self._by_name)

    def get(self, name: str) -> Instrument:
        return self._by_name[name]


@dataclass
class Protocol:
    tasks: list[str]
    conditions: list[dict]  # {name, task, levels}
    trial_structure: dict
    counterbalancing: str
    measurements: list[dict]  # {name, definition}

    def validate_against(self, registry: InstrumentRegistry) -> list[str]:
        problems = []
        for task in self.tasks:
            if task not in registry:
                problems.append(f"task {task!r} not in instrument registry")
        declared = set(self.tasks)
        for cond in self.conditions:
            if cond.get("task") not in declared:
                problems.append(
                    f"condition {cond.get('name')!r} references undeclared task")
        return problems

    def to_dict(self) -> dict:
        return {
            "tasks": self.tasks,
            "conditions": self.conditions,
            "trial_structure": self.trial_structure,
            "counterbalancing": self.counterbalancing,
            "measurements": self.measurements,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Protocol":
        return cls(tasks=data["tasks"], conditions=data["conditions"],
                   trial_structure=data["trial_structure"],
                   counterbalancing=data["counterbalancing"],
                   measurements=data["measurements"])


def design_protocol(node: AgentNode, idea_summary: str,
                    registry: InstrumentRegistry,
                    propose: Callable[[dict], str],
                    policy: IterationPolicy | None = None) -> tuple[Protocol, object]:
    """Draft a protocol through the review loop until it passes registry
    checks and structural completeness."""

    def check(candidate: str) -> CheckResult:
        try:
            protocol = Protocol.from_dict(json.loads(candidate))
        except (json.JSONDecodeError, KeyError, TypeError):
            return CheckResult(passed=False, score=0.0, hard_failure=True)
        problems = protocol.validate_against(registry)
        complete = bool(protocol.tasks and protocol.conditions
                        and protocol.measurements)
        score = 1.0 if (not problems and complete) else 0.3
        return CheckResult(passed=not problems and complete, score=score)

    env = TaskEnvelope(
        goal=f"design experimental protocol for: {idea_summary}",
        acceptance_tests=[AcceptanceTest("registry_and_completeness", check)],
        policy=policy or IterationPolicy())
    result = run_task(node, env, propose)
    if result.status != "accepted":
        raise ExhaustedWithoutAcceptance(
            "protocol review loop exhausted without acceptance")
    return Protocol.from_dict(json.loads(result.artifacts["candidate"])), result

"""Agent nodes and the spawn registry.

Orchestrators coordinate and may spawn sub-agents; specialists execute a
single honed skill and may not spawn. The registry keeps the whole agent
population as a forest rooted at the master agent, with atomic depth
checks so concurrent spawns cannot exceed the recursion limit.
"""

from __future__ import annotations

import threading
from dataclasses import dataclass
from enum import Enum

from researchflow.errors import RecursionLimitExceeded, SpecialistCannotSpawn


class AgentKind(str, Enum):
    ORCHESTRATOR = "orchestrator"
    SPECIALIST = "specialist"


@dataclass(frozen=True)
class AgentNode:
    agent_id: str
    role_key: str
    kind: AgentKind
    parent: str | None = None
    depth: int = 0


class AgentRegistry:
    """Forest of agent nodes with lineage tracking.

    Spawn is serialized under a lock so the depth <= recursion_limit
    invariant holds under concurrent callers.
    """

    def __init__(self, recursion_limit: int = 4):
        self.recursion_limit = recursion_limit
        self._nodes: dict[str, AgentNode] = {}
        self._children: dict[str, list[str]] = {}
        self._lock = threading.Lock()
        self._counter = 0

    def register_root(self, role_key: str, kind: AgentKind = AgentKind.ORCHESTRATOR) -> AgentNode:
        with self._lock:
            node = AgentNode(self._next_id(role_key), role_key, kind, parent=None, depth=0)
            self._nodes[node.agent_id] = node
            self._children[node.agent_id] = []
            return node

    def spawn(self, parent: AgentNode, role_key: str,
              kind: AgentKind = AgentKind.SPECIALIST) -> AgentNode:
        if parent.kind is not AgentKind.ORCHESTRATOR:
            raise SpecialistCannotSpawn(
                f"specialist {parent.agent_id!r} cannot spawn sub-agents")
        with self._lock:
            if parent.agent_id not in self._nodes:
                raise KeyError(f"unknown parent {parent.agent_id!r}")
            depth = parent.depth + 1
            if depth > self.recursion_limit:
                raise RecursionLimitExceeded(
                    f"depth {depth} exceeds recursion limit {self.recursion_limit}")
            child = AgentNode(self._next_id(role_key), role_key, kind,
                              parent=parent.agent_id, depth=depth)
            self._nodes[child.agent_id] = child
            self._children[parent.agent_id].append(child.agent_id)
            self._children[child.agent_id] = []
            return child

    def get(self, agent_id: str) -> AgentNode:
        return self._nodes[agent_id]

    def children_of(self, agent_id: str) -> list[AgentNode]:
        return [self._nodes[c] for c in self._children.get(agent_id, [])]

    def lineage(self, agent_id: str) -> list[AgentNode]:
        """Path from the root down to agent_id, inclusive."""
        chain = []
        node = self._nodes[agent_id]
        while node is not None:
            chain.append(node)
            node = self._nodes[node.parent] if node.parent else None
        return list(reversed(chain))

    def all_nodes(self) -> list[AgentNode]:
        return list(self._nodes.values())

    def _next_id(self, role_key: str) -> str:
        self._counter += 1
        return f"{role_key}#{self._counter:04d}"

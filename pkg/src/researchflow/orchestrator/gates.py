"""Intervention gates: blocking human decision points.

Gate creation is policy-checked (autonomous mode only ever creates
study_launch gates), decisions are immutable once made, and a rejected
gate halts the run. Every decision is auditable.
"""

from __future__ import annotations

from dataclasses import dataclass

from researchflow.errors import GateAlreadyDecided, UnknownGate

GATE_KINDS = ["study_launch", "prereg_approval", "stage_review"]


@dataclass
class InterventionGate:
    gate_id: str
    kind: str
    status: str = "open"  # open | approved | rejected
    decided_by: str = ""
    note: str = ""
    version: int = 0  # bumped on decision; optimistic-lock token for UIs

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")

    def to_dict(self) -> dict:
        return {"gate_id": self.gate_id, "kind": self.kind,
                "status": self.status, "decided_by": self.decided_by,
                "note": self.note, "version": self.version}

    @classmethod
    def from_dict(cls, data: dict) -> "InterventionGate":
        return cls(**data)


def open_gate(manifest, kind: str) -> InterventionGate | None:
    """Create a gate if the mode's creation policy allows it.

    In autonomous mode only study_launch gates exist; requests for
    other kinds return None and the pipeline continues ungated."""
    if manifest.mode == "autonomous" and kind != "study_launch":
        return None
    gate = InterventionGate(
        gate_id=f"gate-{len(manifest.gates) + 1:03d}-{kind}", kind=kind)
    manifest.gates.append(gate)
    return gate


def resolve_gate(manifest, gate_id: str, decision: str, operator: str,
                 note: str = "", audit=None):
    """Decide an open gate. Approved unblocks; rejected halts the run."""
    if decision not in ("approved", "rejected"):
        raise ValueError(f"decision must be approved|rejected, "
                         f"got {decision!r}")
    gate = manifest.gate(gate_id)
    if gate is None:
        raise UnknownGate(gate_id)
    if gate.status != "open":
        raise GateAlreadyDecided(
            f"gate {gate_id!r} already {gate.status} by {gate.decided_by!r}")
    gate.status = decision
    gate.decided_by = operator
    gate.note = note
    gate.version += 1
    if audit is not None:
        audit.append(operator, "gate_decided",
                     {"gate_id": gate_id, "kind": gate.kind,
                      "decision": decision, "note": note})
    if decision == "rejected":
        manifest.stage = "halted"
    return manifest

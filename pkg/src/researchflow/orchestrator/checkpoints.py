"""Checkpointing: durable, digest-verified run state snapshots.

A checkpoint is canonical JSON plus a content hash; restore refuses a
payload whose hash does not match. Sequence numbers are strictly
increasing per run, and the latest checkpoint is discoverable from the
checkpoint directory alone.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

from researchflow.errors import DigestMismatch, UnknownRun


@dataclass(frozen=True)
class Checkpoint:
    run_id: str
    sequence_no: int
    stage: str
    state_digest: str
    payload_ref: Path


def _digest(payload: str) -> str:
    return hashlib.sha256(payload.encode("utf-8")).hexdigest()


class CheckpointStore:
    def __init__(self, root: Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def _sequence_nos(self) -> list[int]:
        return sorted(int(p.stem.split("_")[1])
                      for p in self.root.glob("cp_*.json"))

    def save(self, run_id: str, stage: str, state: dict) -> Checkpoint:
        existing = self._sequence_nos()
        sequence_no = (existing[-1] + 1) if existing else 1
        payload = json.dumps(state, sort_keys=True, indent=2) + "\n"
        digest = _digest(payload)
        path = self.root / f"cp_{sequence_no:05d}.json"
        envelope = {
            "run_id": run_id, "sequence_no": sequence_no, "stage": stage,
            "state_digest": digest, "state": state,
        }
        path.write_text(json.dumps(envelope, sort_keys=True, indent=2) + "\n")
        return Checkpoint(run_id=run_id, sequence_no=sequence_no,
                          stage=stage, state_digest=digest, payload_ref=path)

    def load(self, path: Path) -> tuple[Checkpoint, dict]:
        path = Path(path)
        if not path.exists():
            raise UnknownRun(f"no checkpoint at {path}")
        envelope = json.loads(path.read_text())
        payload = json.dumps(envelope["state"], sort_keys=True,
                             indent=2) + "\n"
        if _digest(payload) != envelope["state_digest"]:
            raise DigestMismatch(f"checkpoint {path} digest mismatch")
        checkpoint = Checkpoint(
            run_id=envelope["run_id"], sequence_no=envelope["sequence_no"],
            stage=envelope["stage"], state_digest=envelope["state_digest"],
            payload_ref=path)
        return checkpoint, envelope["state"]

    def latest(self) -> tuple[Checkpoint, dict]:
        nos = self._sequence_nos()
        if not nos:
            raise UnknownRun(f"no checkpoints under {self.root}")
        return self.load(self.root / f"cp_{nos[-1]:05d}.json")

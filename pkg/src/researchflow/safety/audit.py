"""Append-only audit log with a digest chain.

One JSON line per event; each event embeds the digest of its predecessor,
so any tampering is detected (with the exact offset) when the log is
reopened or verified.
"""

from __future__ import annotations

import hashlib
import json
import time
from dataclasses import dataclass
from pathlib import Path

from researchflow.errors import LogCorrupt

GENESIS = "0" * 64


@dataclass
class AuditEvent:
    offset: int
    timestamp: float
    actor: str
    action: str
    payload_digest: str
    prev_digest: str
    digest: str = ""

    def body(self) -> dict:
        return {
            "offset": self.offset,
            "timestamp": self.timestamp,
            "actor": self.actor,
            "action": self.action,
            "payload_digest": self.payload_digest,
            "prev_digest": self.prev_digest,
        }


def _event_digest(body: dict) -> str:
    return hashlib.sha256(
        json.dumps(body, sort_keys=True, separators=(",", ":")).encode()).hexdigest()


def payload_digest(payload) -> str:
    return hashlib.sha256(
        json.dumps(payload, sort_keys=True, default=str).encode()).hexdigest()


class AuditLog:
    """Durable append-only event log; verifies its chain on open."""

    def __init__(self, path: Path):
        self.path = Path(path)
        self._next_offset = 0
        self._prev_digest = GENESIS
        if self.path.exists():
            self._replay()
        else:
            self.path.parent.mkdir(parents=True, exist_ok=True)
            self.path.touch()

    def _replay(self) -> None:
        prev = GENESIS
        offset = 0
        with self.path.open() as fh:
            for line in fh:
                line = line.strip()
                if not line:
                    continue
                try:
                    rec = json.loads(line)
                except json.JSONDecodeError:
                    raise LogCorrupt(f"unparseable event at offset {offset}",
                                     offset=offset)
                body = {k: rec.get(k) for k in
                        ("offset", "timestamp", "actor", "action",
                         "payload_digest", "prev_digest")}
                if rec.get("offset") != offset:
                    raise LogCorrupt(f"offset gap at {offset}", offset=offset)
                if rec.get("prev_digest") != prev:
                    raise LogCorrupt(f"chain break at offset {offset}",
                                     offset=offset)
                if rec.get("digest") != _event_digest(body):
                    raise LogCorrupt(f"digest mismatch at offset {offset}",
                                     offset=offset)
                prev = rec["digest"]
                offset += 1
        self._next_offset = offset
        self._prev_digest = prev

    def append(self, actor: str, action: str, payload=None) -> int:
        """Append one event; durable before return. Returns its offset."""
        event = AuditEvent(
            offset=self._next_offset,
            timestamp=time.time(),
            actor=actor,
            action=action,
            payload_digest=payload_digest(payload if payload is not None else {}),
            prev_digest=self._prev_digest,
        )
        event.digest = _event_digest(event.body())
        record = dict(event.body(), digest=event.digest)
        with self.path.open("a") as fh:
            fh.write(json.dumps(record, sort_keys=True) + "\n")
            fh.flush()
        self._prev_digest = event.digest
        self._next_offset += 1
        return event.offset

    def events(self) -> list[dict]:
        out = []
        with self.path.open() as fh:
            for line in fh:
                if line.strip():
                    out.append(json.loads(line))
        return out

    def __len__(self) -> int:
        return self._next_offset

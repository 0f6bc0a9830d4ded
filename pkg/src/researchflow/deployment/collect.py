"""Participant data collection from the hosting repository.

Fetches every per-participant raw CSV, screens columns against the PII
blocklist (violations quarantine the file), and classifies completeness:
empty = zero data rows, incomplete = missing any required task block,
else complete. The analysable sample is the complete participants.
"""

from __future__ import annotations

import csv
import io
import json
from dataclasses import dataclass, field
from pathlib import Path
from typing import Protocol

from researchflow.errors import RepoUnavailable

PII_BLOCKLIST = {
    "email", "name", "first_name", "last_name", "phone", "address",
    "ip", "ip_address", "dob", "date_of_birth", "postcode", "zip",
}

REQUIRED_BLOCKS = ["VWM", "MRT", "VVIQ2"]


@dataclass
class ParticipantFile:
    participant_id: str
    filename: str
    rows: int
    blocks_present: list[str]
    classification: str  # complete | incomplete | empty
    quarantined: bool = False
    quarantine_reason: str = ""


@dataclass
class ParticipantDataset:
    files: list[ParticipantFile]
    enrolled: int
    raw_dir: Path | None = None
    warnings: list[str] = field(default_factory=list)

    def count(self, classification: str) -> int:
        return sum(1 for f in self.files if f.classification == classification)

    @property
    def analysable(self) -> int:
        return self.count("complete")

    def manifest(self) -> dict:
        return {
            "enrolled": self.enrolled,
            "complete": self.count("complete"),
            "incomplete": self.count("incomplete"),
            "empty": self.count("empty"),
            "quarantined": sum(1 for f in self.files if f.quarantined),
            "files": [
                {"participant_id": f.participant_id, "filename": f.filename,
                 "rows": f.rows, "classification": f.classification,
                 "quarantined": f.quarantined}
                for f in sorted(self.files, key=lambda f: f.filename)
            ],
        }


class HostingRepoClient(Protocol):
    def list_files(self) -> list[str]: ...
    def fetch(self, filename: str) -> str: ...


class MockHostingRepo:
    """Deterministic hosting-repository twin.

    Synthesizes per-participant CSVs from a seed: `empty_ids` produce
    header-only files, `incomplete_ids` omit one required block, the rest
    carry all blocks. Shapes mirror the live run (288 enrolled, 1 empty,
    10 incomplete, 277 complete)."""

    def __init__(self, enrolled: int, empty_ids: list[int] | None = None,
                 incomplete_ids: list[int] | None = None,
                 trials_per_block: int = 4, unavailable: bool = False,
                 extra_columns: dict[int, str] | None = None):
        self.enrolled = enrolled
        self.empty_ids = set(empty_ids or [])
        self.incomplete_ids = set(incomplete_ids or [])
        self.trials_per_block = trials_per_block
        self.unavailable = unavailable
        # participant index -> extra column name (PII fuzzing hook)
        self.extra_columns = extra_columns or {}

    def _participant_id(self, index: int) -> str:
        return f"P{index:04d}"

    def list_files(self) -> list[str]:
        if self.unavailable:
            raise RepoUnavailable("hosting repository unreachable")
        return [f"{self._participant_id(i)}.csv"
                for i in range(1, self.enrolled + 1)]

    def fetch(self, filename: str) -> str:
        if self.unavailable:
            raise RepoUnavailable("hosting repository unreachable")
        index = int(filename[1:5])
        columns = ["participant_id", "block", "trial", "response", "rt",
                   "correct"]
        if index in self.extra_columns:
            columns.append(self.extra_columns[index])
        out = io.StringIO()
        writer = csv.writer(out)
        writer.writerow(columns)
        if index in self.empty_ids:
            return out.getvalue()
        blocks = list(REQUIRED_BLOCKS)
        if index in self.incomplete_ids:
            blocks = blocks[:-1]  # drop the final task block
        pid = self._participant_id(index)
        for block in blocks:
            for trial in range(1, self.trials_per_block + 1):
                # deterministic synthetic responses
                rt = 300 + ((index * 31 + trial * 7) % 500)
                correct = 1 if (index + trial) % 5 else 0
                row = [pid, block, trial, (index * trial) % 8, rt, correct]
                if index in self.extra_columns:
                    row.append("REDACTABLE")
                writer.writerow(row)
        return out.getvalue()


def _classify(rows: list[dict]) -> tuple[str, list[str]]:
    if not rows:
        return "empty", []
    blocks = sorted({r.get("block", "") for r in rows})
    missing = [b for b in REQUIRED_BLOCKS if b not in blocks]
    return ("incomplete" if missing else "complete"), blocks


def collect_results(repo: HostingRepoClient, out_dir: Path | None = None
                    ) -> ParticipantDataset:
    """Fetch all participant files, quarantine PII-bearing ones, classify
    completeness, and persist the raw tree plus a manifest."""
    filenames = repo.list_files()
    files: list[ParticipantFile] = []
    warnings: list[str] = []
    raw_dir = Path(out_dir) if out_dir else None
    quarantine_dir = raw_dir / "quarantine" if raw_dir else None
    if raw_dir:
        raw_dir.mkdir(parents=True, exist_ok=True)

    for filename in sorted(filenames):
        content = repo.fetch(filename)
        reader = csv.DictReader(io.StringIO(content))
        header = [h.strip().lower() for h in (reader.fieldnames or [])]
        pii = sorted(set(header) & PII_BLOCKLIST)
        participant_id = filename.rsplit(".", 1)[0]
        if pii:
            # PII-like column: quarantine the file, never persist it in
            # the raw tree, and alert.
            if quarantine_dir:
                quarantine_dir.mkdir(parents=True, exist_ok=True)
                (quarantine_dir / filename).write_text(
                    f"quarantined: pii columns {pii}\n")
            warnings.append(
                f"schema violation in {filename}: PII-like columns {pii}")
            files.append(ParticipantFile(
                participant_id=participant_id, filename=filename, rows=0,
                blocks_present=[], classification="incomplete",
                quarantined=True,
                quarantine_reason=f"pii columns {pii}"))
            continue
        rows = list(reader)
        classification, blocks = _classify(rows)
        if raw_dir:
            (raw_dir / filename).write_text(content)
        files.append(ParticipantFile(
            participant_id=participant_id, filename=filename,
            rows=len(rows), blocks_present=blocks,
            classification=classification))

    dataset = ParticipantDataset(files=files, enrolled=len(filenames),
                                 raw_dir=raw_dir, warnings=warnings)
    if raw_dir:
        (raw_dir / "manifest.json").write_text(
            json.dumps(dataset.manifest(), sort_keys=True, indent=2) + "\n")
    return dataset

"""Dataset inspection: per-file-type schema inference and quality flags.

The report is the analysis engine's input contract: file counts, column
schemas with inferred types, and flags for missing or out-of-range
values.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field

from researchflow.deployment.collect import ParticipantDataset

MISSING_FLAG_THRESHOLD = 0.2  # fraction of empty cells in a column


@dataclass
class ColumnSchema:
    name: str
    inferred_type: str  # int | float | str
    missing_fraction: float


@dataclass
class DataInspectionReport:
    file_count: int
    schemas: dict  # file type tag -> {columns, row_count}
    quality_flags: list[str] = field(default_factory=list)
    analysable_count: int = 0
    enrolled: int = 0

    def to_dict(self) -> dict:
        return {
            "file_count": self.file_count,
            "schemas": self.schemas,
            "quality_flags": self.quality_flags,
            "analysable_count": self.analysable_count,
            "enrolled": self.enrolled,
        }


def _infer_type(values: list[str]) -> str:
    kind = "int"
    for v in values:
        if v == "":
            continue
        try:
            int(v)
        except ValueError:
            try:
                float(v)
                kind = "float" if kind != "str" else "str"
            except ValueError:
                return "str"
    return kind


def inspect_dataset(dataset: ParticipantDataset) -> DataInspectionReport:
    columns: dict[str, list[str]] = {}
    total_rows = 0
    if dataset.raw_dir:
        for pf in dataset.files:
            if pf.quarantined:
                continue
            path = dataset.raw_dir / pf.filename
            if not path.exists():
                continue
            reader = csv.DictReader(io.StringIO(path.read_text()))
            for row in reader:
                total_rows += 1
                for name, value in row.items():
                    columns.setdefault(name, []).append(value or "")

    schema_cols = []
    flags = []
    for name in sorted(columns):
        values = columns[name]
        missing = sum(1 for v in values if v == "") / len(values)
        schema_cols.append({
            "name": name, "type": _infer_type(values),
            "missing_fraction": round(missing, 4),
        })
        if missing > MISSING_FLAG_THRESHOLD:
            flags.append(
                f"column {name!r} missing fraction {missing:.2f} exceeds "
                f"{MISSING_FLAG_THRESHOLD}")

    for pf in dataset.files:
        if pf.classification == "empty":
            flags.append(f"{pf.filename}: no data rows")
        if pf.quarantined:
            flags.append(f"{pf.filename}: quarantined ({pf.quarantine_reason})")

    return DataInspectionReport(
        file_count=len(dataset.files),
        schemas={"participant_csv": {"columns": schema_cols,
                                     "row_count": total_rows}},
        quality_flags=flags,
        analysable_count=dataset.analysable,
        enrolled=dataset.enrolled,
    )

"""Anchored-edit code workspace.

Every mutation is an EditBlock: an exact anchor text that must occur
exactly once in the target file (empty anchor creates the file). History
is the source of truth — replaying it from an empty workspace rebuilds
the identical tree, which is what makes generated analysis code
reviewable after the fact.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from pathlib import Path

from researchflow.errors import AnchorAmbiguous, AnchorNotFound


@dataclass(frozen=True)
class EditBlock:
    target: str
    anchor: str
    replacement: str

    def to_dict(self) -> dict:
        return {"target": self.target, "anchor": self.anchor,
                "replacement": self.replacement}

    @classmethod
    def from_dict(cls, data: dict) -> "EditBlock":
        return cls(**data)


@dataclass
class CodeWorkspace:
    files: dict[str, str] = field(default_factory=dict)
    history: list[EditBlock] = field(default_factory=list)
    execution_results: list[dict] = field(default_factory=list)

    def tree_digest(self) -> str:
        h = hashlib.sha256()
        for name in sorted(self.files):
            h.update(name.encode("utf-8"))
            h.update(b"\x00")
            h.update(self.files[name].encode("utf-8"))
            h.update(b"\x00")
        return h.hexdigest()

    def line_count(self) -> int:
        return sum(len(text.splitlines()) for text in self.files.values())

    def materialize(self, root: Path) -> None:
        root = Path(root)
        for name, text in self.files.items():
            path = root / name
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text)


def apply_edit(ws: CodeWorkspace, edit: EditBlock) -> CodeWorkspace:
    """Apply one anchored edit in place and record it in history."""
    if edit.anchor == "":
        if edit.target in ws.files:
            raise AnchorAmbiguous(
                f"empty anchor on existing file {edit.target!r}")
        ws.files[edit.target] = edit.replacement
        ws.history.append(edit)
        return ws
    if edit.target not in ws.files:
        raise AnchorNotFound(f"no such file {edit.target!r}")
    content = ws.files[edit.target]
    count = content.count(edit.anchor)
    if count == 0:
        raise AnchorNotFound(
            f"anchor not found in {edit.target!r}")
    if count > 1:
        raise AnchorAmbiguous(
            f"anchor occurs {count} times in {edit.target!r}")
    ws.files[edit.target] = content.replace(edit.anchor, edit.replacement, 1)
    ws.history.append(edit)
    return ws


def replay(history: list[EditBlock]) -> CodeWorkspace:
    """Rebuild a workspace from scratch by re-applying its history."""
    ws = CodeWorkspace()
    for edit in history:
        apply_edit(ws, edit)
    return ws

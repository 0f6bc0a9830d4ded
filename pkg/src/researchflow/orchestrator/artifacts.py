"""Deterministic artifact store for one run.

All writes are canonical (JSON with sorted keys and a trailing newline)
so two runs of the same scripted fixture produce byte-identical trees.
The tree digest over relative paths + content hashes is the equality
check used by crash/restore verification.
"""

from __future__ import annotations

import hashlib
import json
import shutil
from pathlib import Path


class ArtifactStore:
    def __init__(self, root: Path):
        self.root = Path(root)
        self.root.mkdir(parents=True, exist_ok=True)

    def path(self, rel: str) -> Path:
        path = (self.root / rel).resolve()
        if self.root.resolve() not in path.parents \
                and path != self.root.resolve():
            raise ValueError(f"artifact path {rel!r} escapes the store")
        return path

    def write_text(self, rel: str, content: str) -> str:
        path = self.path(rel)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(content)
        return rel

    def write_bytes(self, rel: str, content: bytes) -> str:
        path = self.path(rel)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_bytes(content)
        return rel

    def write_json(self, rel: str, data) -> str:
        return self.write_text(
            rel, json.dumps(data, sort_keys=True, indent=2) + "\n")

    def read_json(self, rel: str):
        return json.loads(self.path(rel).read_text())

    def import_tree(self, src: Path, rel_prefix: str) -> list[str]:
        """Copy an external directory into the store."""
        out = []
        src = Path(src)
        for path in sorted(p for p in src.rglob("*") if p.is_file()):
            rel = f"{rel_prefix}/{path.relative_to(src)}"
            dest = self.path(rel)
            dest.parent.mkdir(parents=True, exist_ok=True)
            shutil.copyfile(path, dest)
            out.append(rel)
        return out

    def exists(self, rel: str) -> bool:
        return self.path(rel).exists()

    def list_files(self) -> list[str]:
        return sorted(str(p.relative_to(self.root))
                      for p in self.root.rglob("*") if p.is_file())

    def file_digests(self) -> dict[str, str]:
        return {
            rel: hashlib.sha256(self.path(rel).read_bytes()).hexdigest()
            for rel in self.list_files()
        }

    def tree_digest(self) -> str:
        h = hashlib.sha256()
        for rel, digest in sorted(self.file_digests().items()):
            h.update(rel.encode("utf-8"))
            h.update(b"\x00")
            h.update(digest.encode("ascii"))
            h.update(b"\x00")
        return h.hexdigest()

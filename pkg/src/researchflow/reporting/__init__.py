"""Reporting engine: visuals, citation-verified manuscript assembly,
peer-style review, and final document construction to PDF."""

from researchflow.reporting.citations import (
    CitationRecord,
    FixtureResolver,
    doi_syntax_valid,
    verify_all,
    verify_citation,
)
from researchflow.reporting.visuals import (
    Figure,
    FigurePlan,
    PanelSpec,
    TableSpec,
    plan_visuals,
    render_panel,
)
from researchflow.reporting.manuscript import (
    SECTION_ORDER,
    Manuscript,
    assemble_manuscript,
)
from researchflow.reporting.review import (
    DIMENSIONS,
    ReviewFinding,
    ReviewReport,
    review_and_revise,
    review_manuscript,
)
from researchflow.reporting.document import (
    DocumentBuild,
    build_document,
    check_cross_references,
)

__all__ = [
    "DIMENSIONS",
    "CitationRecord",
    "DocumentBuild",
    "Figure",
    "FigurePlan",
    "FixtureResolver",
    "Manuscript",
    "PanelSpec",
    "ReviewFinding",
    "ReviewReport",
    "SECTION_ORDER",
    "TableSpec",
    "assemble_manuscript",
    "build_document",
    "check_cross_references",
    "doi_syntax_valid",
    "plan_visuals",
    "render_panel",
    "review_and_revise",
    "review_manuscript",
    "verify_all",
    "verify_citation",
]

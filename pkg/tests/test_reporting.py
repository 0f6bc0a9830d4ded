import json
import struct

import pytest

from researchflow.errors import (
    DanglingReference,
    InspectionExhausted,
    MissingSection,
    NoArtifacts,
    RenderFailure,
    UnverifiedCitation,
)
from researchflow.gateway import ModelGateway, ScriptedBackend, default_binding_table
from researchflow.reporting import (
    CitationRecord,
    FixtureResolver,
    PanelSpec,
    assemble_manuscript,
    build_document,
    doi_syntax_valid,
    plan_visuals,
    render_panel,
    review_and_revise,
    review_manuscript,
    verify_all,
    verify_citation,
)
from researchflow.reporting import pdftools
from researchflow.safety.sandbox import ExecutionLimits


def scripted_gateway(script):
    return ModelGateway(bindings=default_binding_table(),
                        backend=ScriptedBackend(script))


class TestPlanVisuals:
    def test_three_result_tables_each_covered(self):
        names = ["derived/aggregates.csv", "derived/clean.csv",
                 "reports/stats.json", "reports/model_fit.json",
                 "reports/descriptives.json"]
        plan = plan_visuals(names)
        # coverage rule: every report artifact has a table
        covered = {t.data_artifact for t in plan.tables}
        assert covered == {n for n in names if n.endswith(".json")}
        assert plan.referenced_artifacts() <= set(names)

    def test_empty_artifacts(self):
        with pytest.raises(NoArtifacts):
            plan_visuals([])

    def test_panel_ids_unique_within_figures(self):
        plan = plan_visuals([f"derived/d{i}.csv" for i in range(6)])
        for figure in plan.figures:
            ids = [p.panel_id for p in figure.panels]
            assert len(ids) == len(set(ids))


def write_scatter_csv(path):
    path.parent.mkdir(parents=True, exist_ok=True)
    rows = ["x,y"] + [f"{i},{(i * 7) % 13}" for i in range(30)]
    path.write_text("\n".join(rows) + "\n")


def png_dimensions(image: bytes):
    # independent check of the PNG header: signature + IHDR
    assert image[:8] == b"\x89PNG\r\n\x1a\n"
    width, height = struct.unpack(">II", image[16:24])
    return width, height


class TestRenderPanel:
    limits = ExecutionLimits(requested_timeout_s=60)

    def spec(self):
        return PanelSpec(panel_id="fig1a", data_artifact="data.csv",
                         chart_kind="scatter")

    def test_scatter_fixture_produces_bounded_image(self, tmp_path):
        write_scatter_csv(tmp_path / "data.csv")
        spec = render_panel(self.spec(), self.limits, tmp_path)
        image = (tmp_path / spec.image_ref).read_bytes()
        width, height = png_dimensions(image)
        assert 100 <= width <= 2000 and 100 <= height <= 2000
        assert spec.accepted

    def test_reject_twice_then_accept_is_three_attempts(self, tmp_path):
        write_scatter_csv(tmp_path / "data.csv")
        verdicts = iter(["revise", "revise", "accept"])
        spec = render_panel(self.spec(), self.limits, tmp_path,
                            inspect=lambda img, attempt: next(verdicts))
        assert spec.inspection_verdicts == ["revise", "revise", "accept"]
        assert len(spec.versions) == 3  # all candidates persisted
        assert spec.image_ref == spec.versions[-1]

    def test_exhaustion(self, tmp_path):
        write_scatter_csv(tmp_path / "data.csv")
        with pytest.raises(InspectionExhausted):
            render_panel(self.spec(), self.limits, tmp_path,
                         inspect=lambda img, attempt: "revise",
                         max_attempts=2)

    def test_missing_artifact(self, tmp_path):
        with pytest.raises(RenderFailure):
            render_panel(self.spec(), self.limits, tmp_path)

    def test_render_determinism(self, tmp_path):
        a_dir = tmp_path / "a"
        b_dir = tmp_path / "b"
        for d in (a_dir, b_dir):
            write_scatter_csv(d / "data.csv")
        a = render_panel(self.spec(), self.limits, a_dir)
        b = render_panel(self.spec(), self.limits, b_dir)
        assert (a_dir / a.image_ref).read_bytes() == \
            (b_dir / b.image_ref).read_bytes()


RESOLVER = FixtureResolver({
    "10.1038/nature12373": {"title": "Known work", "year": 2013,
                            "venue": "Nature"},
    "10.1234/abcd.5": {"title": "Other work", "year": 2020,
                       "venue": "J Imagery"},
})


class TestVerifyCitation:
    def test_valid_doi_resolves(self):
        rec = verify_citation(
            CitationRecord(key="known", doi="10.1038/nature12373"), RESOLVER)
        assert rec.status == "verified"
        assert rec.metadata["title"] == "Known work"

    def test_bad_prefix_fails_syntax(self):
        rec = verify_citation(CitationRecord(key="x", doi="11.1234/x"),
                              RESOLVER)
        assert rec.status == "failed"

    def test_valid_syntax_unknown_doi_unresolvable(self):
        rec = verify_citation(
            CitationRecord(key="ghost", doi="10.9999/not.there"), RESOLVER)
        assert rec.status == "unresolvable"

    def test_syntax_grammar(self):
        assert doi_syntax_valid("10.1038/nature12373")
        assert doi_syntax_valid("10.123456789/x")
        assert not doi_syntax_valid("10.123/")
        assert not doi_syntax_valid("doi:10.1038/x")
        assert not doi_syntax_valid("10./x")
        assert not doi_syntax_valid("10.12/ spaced")


def sections(extra_results=""):
    return {
        "title": "Vividness and Rotation",
        "abstract": "We test imagery vividness. " * 10,
        "introduction": "Prior work [@known] suggests a link. " * 20,
        "methods": "We measured rotation speed. " * 20,
        "results": ("Figure 1 shows the correlation [@other]. "
                    + extra_results + " ") * 10,
        "discussion": "Findings align with [@known]. " * 20,
    }


def verified_citations():
    return verify_all([
        CitationRecord(key="known", doi="10.1038/nature12373"),
        CitationRecord(key="other", doi="10.1234/abcd.5"),
    ], RESOLVER)


def figure_plan():
    return plan_visuals(["derived/aggregates.csv", "derived/clean.csv",
                         "reports/stats.json"])


class TestAssemble:
    def test_complete_fixture(self):
        ms = assemble_manuscript(sections(), figure_plan(),
                                 verified_citations())
        assert len(ms.references) == len(ms.cited_keys()) == 2
        assert ms.total_words == sum(ms.word_counts.values())
        assert ms.total_words > 100

    def test_fabricated_citation_named(self):
        cites = verified_citations() + [
            CitationRecord(key="fake", doi="10.1111/fabricated",
                           status="unresolvable")]
        bad_sections = sections()
        bad_sections["discussion"] += " Contradicting [@fake]."
        with pytest.raises(UnverifiedCitation, match="fake"):
            assemble_manuscript(bad_sections, figure_plan(), cites)

    def test_missing_section(self):
        partial = sections()
        partial["methods"] = "   "
        with pytest.raises(MissingSection, match="methods"):
            assemble_manuscript(partial, figure_plan(),
                                verified_citations())

    def test_references_only_cited_verified_records(self):
        # a verified record that is never cited must not be listed
        cites = verified_citations() + verify_all(
            [CitationRecord(key="uncited", doi="10.1234/abcd.5")], RESOLVER)
        ms = assemble_manuscript(sections(), figure_plan(), cites)
        assert not any("uncited" in r for r in ms.references)


def findings_payload(items):
    return json.dumps({"findings": items})


class TestReview:
    def manuscript(self):
        return assemble_manuscript(sections(), figure_plan(),
                                   verified_citations())

    def test_two_major_three_minor_triggers_revision(self):
        pass1 = [
            findings_payload([
                {"severity": "major", "location": "introduction",
                 "recommendation": "cite the opposing account"},
                {"severity": "major", "location": "results",
                 "recommendation": "report effect size"},
            ]),
            findings_payload([
                {"severity": "minor", "location": "methods",
                 "recommendation": "clarify trial count"},
                {"severity": "minor", "location": "discussion",
                 "recommendation": "shorten"},
                {"severity": "minor", "location": "abstract",
                 "recommendation": "add sample size"},
            ]),
            findings_payload([]),
            findings_payload([]),
        ]
        pass2 = [findings_payload([])] * 4
        gateway = scripted_gateway({"reviewer": pass1 + pass2})
        revisions = []

        def revise(ms, majors):
            revisions.append(list(majors))
            return ms

        _ms, reports = review_and_revise(self.manuscript(), gateway, revise)
        assert len(reports) == 2  # revision triggered a second pass
        assert len(reports[0].majors) == 2
        assert len(reports[0].minors) == 3
        assert len(revisions) == 1 and len(revisions[0]) == 2
        assert not reports[1].findings

    def test_zero_findings_single_pass(self):
        gateway = scripted_gateway({"reviewer": [findings_payload([])] * 4})
        _ms, reports = review_and_revise(
            self.manuscript(), gateway, lambda ms, majors: ms)
        assert len(reports) == 1
        assert not reports[0].findings

    def test_missing_location_normalized_with_warning(self):
        gateway = scripted_gateway({"reviewer": [
            findings_payload([{"severity": "minor",
                               "recommendation": "tighten prose"}]),
            findings_payload([]), findings_payload([]),
            findings_payload([]),
        ]})
        report = review_manuscript(self.manuscript(), gateway)
        assert report.findings[0].location == "whole-document"
        assert report.warnings

    def test_every_finding_has_location_and_recommendation(self):
        gateway = scripted_gateway({"reviewer": [
            findings_payload([{"severity": "major", "location": "results",
                               "recommendation": "add CI"}])] * 4})
        report = review_manuscript(self.manuscript(), gateway)
        assert all(f.location and f.recommendation
                   for f in report.findings)


class TestBuildDocument:
    def manuscript(self, extra_results=""):
        return assemble_manuscript(sections(extra_results), figure_plan(),
                                   verified_citations())

    def test_two_figures_numbered_in_order(self, tmp_path):
        build = build_document(self.manuscript("See also Figure 2."),
                               "latex", tmp_path)
        assert build.page_count >= 1
        text = pdftools.extract_text(build.pdf_path.read_bytes())
        import re
        captions = [int(m.group(1))
                    for m in re.finditer(r"^Figure (\d+)\.", text,
                                         re.MULTILINE)]
        assert captions == sorted(captions)
        assert set(captions) == {1, 2}

    def test_dangling_figure_reference(self, tmp_path):
        with pytest.raises(DanglingReference):
            build_document(self.manuscript("Contrast with Figure 7."),
                           "latex", tmp_path)

    def test_dangling_table_reference(self, tmp_path):
        with pytest.raises(DanglingReference):
            build_document(self.manuscript("Table 4 lists them."),
                           "latex", tmp_path)

    def test_cross_format_same_section_order(self, tmp_path):
        ms = self.manuscript()
        latex = build_document(ms, "latex", tmp_path / "latex")
        word = build_document(ms, "word", tmp_path / "word")

        def heading_order(build):
            text = pdftools.extract_text(build.pdf_path.read_bytes())
            names = ["Abstract", "Introduction", "Methods", "Results",
                     "Discussion", "References"]
            return sorted(names, key=text.find)

        assert heading_order(latex) == heading_order(word)
        assert "main.tex" in latex.source_files
        assert "document.xml" in word.source_files
        assert "<document>" in word.source_files["document.xml"]

    def test_citation_soundness_in_built_pdf(self, tmp_path):
        ms = self.manuscript()
        build = build_document(ms, "latex", tmp_path)
        text = pdftools.extract_text(build.pdf_path.read_bytes())
        for key in ms.cited_keys():
            assert key in text  # appears via references list
        assert "fake" not in text

    def test_build_deterministic(self, tmp_path):
        ms = self.manuscript()
        a = build_document(ms, "latex", tmp_path / "a")
        b = build_document(ms, "latex", tmp_path / "b")
        assert a.pdf_path.read_bytes() == b.pdf_path.read_bytes()

    def test_unknown_format(self, tmp_path):
        with pytest.raises(ValueError):
            build_document(self.manuscript(), "pdfa", tmp_path)


class TestPdfTools:
    def test_page_count_multipage(self, tmp_path):
        long_sections = sections()
        long_sections["discussion"] = "Long discussion sentence. " * 900
        ms = assemble_manuscript(long_sections, figure_plan(),
                                 verified_citations())
        build = build_document(ms, "latex", tmp_path)
        pdf = build.pdf_path.read_bytes()
        assert pdftools.page_count(pdf) == build.page_count
        assert build.page_count >= 2

    def test_escape_handling(self):
        assert pdftools._unescape(rb"a\(b\)c\\d") == b"a(b)c\\d"
        assert pdftools._unescape(rb"\101\102") == b"AB"

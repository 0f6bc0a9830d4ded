import random
from dataclasses import dataclass

import pytest

from researchflow.deployment import (
    MockHostingRepo,
    MockRecruitmentPlatform,
    RecruitmentParams,
    collect_results,
    create_draft_study,
    inspect_dataset,
    publish,
)
from researchflow.deployment.collect import PII_BLOCKLIST
from researchflow.errors import (
    GateNotApproved,
    PlatformRejected,
    PlatformUnavailable,
    RepoUnavailable,
)
from researchflow.safety import AuditLog


@dataclass
class FakeGate:
    kind: str = "study_launch"
    status: str = "approved"


def valid_params(n=288):
    return RecruitmentParams(
        sample_size=n, min_age=18, max_age=50,
        normal_vision_required=True, reward=9.0,
        experiment_url="https://run.example/exp")


class TestCreateDraft:
    def test_valid_params_create_draft(self):
        platform = MockRecruitmentPlatform()
        draft = create_draft_study(valid_params(), 288, platform)
        assert draft.status == "draft"
        assert platform.get_status(draft.study_id).status == "draft"

    def test_sample_size_mismatch_rejected_before_platform_call(self):
        platform = MockRecruitmentPlatform()
        with pytest.raises(PlatformRejected):
            create_draft_study(valid_params(n=100), 288, platform)
        assert platform.calls == 0

    def test_platform_5xx_retries_logged(self):
        platform = MockRecruitmentPlatform(fail_times=5)
        with pytest.raises(PlatformUnavailable):
            create_draft_study(valid_params(), 288, platform, retries=3)
        assert platform.retry_log.count("create_draft") == 3


class TestPublish:
    def test_approved_gate_goes_live(self, tmp_path):
        platform = MockRecruitmentPlatform()
        draft = create_draft_study(valid_params(), 288, platform)
        audit = AuditLog(tmp_path / "audit.jsonl")
        live = publish(draft, FakeGate(), platform, audit)
        assert live.status == "live"
        assert len(audit) == 1

    def test_unapproved_gate_hard_refusal(self):
        platform = MockRecruitmentPlatform()
        draft = create_draft_study(valid_params(), 288, platform)
        with pytest.raises(GateNotApproved):
            publish(draft, FakeGate(status="open"), platform)
        with pytest.raises(GateNotApproved):
            publish(draft, None, platform)

    def test_double_publish_idempotent_single_audit_event(self, tmp_path):
        platform = MockRecruitmentPlatform()
        draft = create_draft_study(valid_params(), 288, platform)
        audit = AuditLog(tmp_path / "audit.jsonl")
        publish(draft, FakeGate(), platform, audit)
        again = publish(draft, FakeGate(), platform, audit)
        assert again.status == "live"
        assert len(audit) == 1


def live_run_repo():
    # Mirrors the live deployment: 288 enrolled, 1 empty, 10 incomplete.
    return MockHostingRepo(enrolled=288, empty_ids=[7],
                           incomplete_ids=list(range(20, 30)))


class TestCollect:
    def test_live_run_partition_277_complete(self, tmp_path):
        ds = collect_results(live_run_repo(), tmp_path / "raw")
        assert ds.enrolled == 288
        assert ds.count("empty") == 1
        assert ds.count("incomplete") == 10
        assert ds.analysable == 277

    def test_partition_sums_to_enrolled(self, tmp_path):
        rng = random.Random(5)
        for _ in range(5):
            n = rng.randrange(5, 40)
            ids = rng.sample(range(1, n + 1), k=min(6, n))
            repo = MockHostingRepo(enrolled=n, empty_ids=ids[:2],
                                   incomplete_ids=ids[2:])
            ds = collect_results(repo)
            assert (ds.count("complete") + ds.count("incomplete")
                    + ds.count("empty")) == ds.enrolled

    def test_pii_column_quarantined(self, tmp_path):
        repo = MockHostingRepo(enrolled=3, extra_columns={2: "email"})
        ds = collect_results(repo, tmp_path / "raw")
        quarantined = [f for f in ds.files if f.quarantined]
        assert len(quarantined) == 1
        assert quarantined[0].filename == "P0002.csv"
        assert not (tmp_path / "raw" / "P0002.csv").exists()
        assert (tmp_path / "raw" / "quarantine" / "P0002.csv").exists()
        assert ds.warnings

    def test_adversarial_pii_columns_never_persisted(self, tmp_path):
        rng = random.Random(9)
        pii_names = sorted(PII_BLOCKLIST)
        extra = {i: rng.choice(pii_names) for i in range(1, 8)}
        repo = MockHostingRepo(enrolled=7, extra_columns=extra)
        ds = collect_results(repo, tmp_path / "raw")
        persisted = [p.name for p in (tmp_path / "raw").glob("*.csv")]
        assert persisted == []
        assert all(f.quarantined for f in ds.files)

    def test_zero_participants(self, tmp_path):
        ds = collect_results(MockHostingRepo(enrolled=0), tmp_path / "raw")
        assert ds.enrolled == 0
        report = inspect_dataset(ds)
        assert report.file_count == 0

    def test_repo_unavailable(self):
        with pytest.raises(RepoUnavailable):
            collect_results(MockHostingRepo(enrolled=3, unavailable=True))


class TestInspect:
    def test_279_file_fixture(self, tmp_path):
        repo = MockHostingRepo(enrolled=279)
        ds = collect_results(repo, tmp_path / "raw")
        report = inspect_dataset(ds)
        assert report.file_count == 279
        cols = report.schemas["participant_csv"]["columns"]
        assert {c["name"] for c in cols} == {
            "participant_id", "block", "trial", "response", "rt", "correct"}

    def test_missing_value_quality_flag(self, tmp_path):
        class HoleyRepo(MockHostingRepo):
            def fetch(self, filename):
                content = super().fetch(filename)
                lines = content.splitlines()
                # blank out the response column in 30% of rows
                out = [lines[0]]
                for i, line in enumerate(lines[1:]):
                    parts = line.split(",")
                    if i % 3 == 0:
                        parts[3] = ""
                    out.append(",".join(parts))
                return "\n".join(out) + "\n"

        ds = collect_results(HoleyRepo(enrolled=4), tmp_path / "raw")
        report = inspect_dataset(ds)
        assert any("response" in flag for flag in report.quality_flags)

    def test_schema_types_inferred(self, tmp_path):
        ds = collect_results(MockHostingRepo(enrolled=2), tmp_path / "raw")
        report = inspect_dataset(ds)
        types = {c["name"]: c["type"]
                 for c in report.schemas["participant_csv"]["columns"]}
        assert types["rt"] == "int"
        assert types["block"] == "str"

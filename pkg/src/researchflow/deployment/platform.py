"""Recruitment platform surface (Prolific-compatible).

Draft studies are created via the platform client; moving a draft live is
only possible through an approved study-launch gate, enforced here by
construction: publish() takes the gate object and refuses anything not
approved.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Protocol

from researchflow.errors import (
    GateNotApproved,
    PlatformRejected,
    PlatformUnavailable,
)

URL_RE = re.compile(r"^https?://[^\s]+$")


@dataclass
class RecruitmentParams:
    sample_size: int
    min_age: int
    max_age: int
    normal_vision_required: bool
    reward: float
    experiment_url: str
    completion_codes: list[str] = field(default_factory=list)

    def validate(self, prereg_required_n: int) -> list[str]:
        problems = []
        if self.sample_size != prereg_required_n:
            problems.append(
                f"sample_size {self.sample_size} != pre-registered "
                f"required_n {prereg_required_n}")
        if not URL_RE.match(self.experiment_url):
            problems.append(f"malformed experiment URL {self.experiment_url!r}")
        if self.reward <= 0:
            problems.append("reward must be > 0")
        if not 0 < self.min_age <= self.max_age:
            problems.append("invalid age bounds")
        return problems

    def to_dict(self) -> dict:
        return {
            "sample_size": self.sample_size, "min_age": self.min_age,
            "max_age": self.max_age,
            "normal_vision_required": self.normal_vision_required,
            "reward": self.reward, "experiment_url": self.experiment_url,
            "completion_codes": self.completion_codes,
        }


@dataclass
class StudyDraft:
    study_id: str
    status: str  # draft | live | paused | complete
    params: dict
    created_tick: int = 0


class PlatformClient(Protocol):
    def create_draft(self, params: RecruitmentParams) -> StudyDraft: ...
    def publish(self, study_id: str) -> StudyDraft: ...
    def get_status(self, study_id: str) -> StudyDraft: ...


class MockRecruitmentPlatform:
    """In-memory platform twin with failure injection for tests."""

    def __init__(self, fail_times: int = 0):
        self.studies: dict[str, StudyDraft] = {}
        self.fail_times = fail_times
        self.calls = 0
        self.retry_log: list[str] = []

    def _maybe_fail(self, op: str) -> None:
        self.calls += 1
        if self.fail_times > 0:
            self.fail_times -= 1
            self.retry_log.append(op)
            raise PlatformUnavailable(f"simulated 5xx during {op}")

    def create_draft(self, params: RecruitmentParams) -> StudyDraft:
        self._maybe_fail("create_draft")
        if params.sample_size <= 0:
            raise PlatformRejected("platform rejected non-positive sample size")
        study_id = f"study-{len(self.studies) + 1:04d}"
        draft = StudyDraft(study_id=study_id, status="draft",
                           params=params.to_dict())
        self.studies[study_id] = draft
        return draft

    def publish(self, study_id: str) -> StudyDraft:
        self._maybe_fail("publish")
        study = self.studies[study_id]
        if study.status == "draft":
            study.status = "live"
        return study

    def get_status(self, study_id: str) -> StudyDraft:
        return self.studies[study_id]


def create_draft_study(params: RecruitmentParams, prereg_required_n: int,
                       platform: PlatformClient,
                       retries: int = 3) -> StudyDraft:
    """Validate params against the pre-registration, then create the
    platform draft (with bounded retry on transient platform errors).
    The caller opens the study-launch gate on success."""
    problems = params.validate(prereg_required_n)
    if problems:
        raise PlatformRejected("; ".join(problems))
    last = None
    for _ in range(retries):
        try:
            return platform.create_draft(params)
        except PlatformUnavailable as exc:
            last = exc
    raise PlatformUnavailable(
        f"platform unavailable after {retries} attempts: {last}")


def publish(study: StudyDraft, gate, platform: PlatformClient,
            audit=None) -> StudyDraft:
    """Move a draft live. Hard refusal without an approved study_launch
    gate; idempotent for already-live studies."""
    if gate is None or getattr(gate, "kind", None) != "study_launch" \
            or getattr(gate, "status", None) != "approved":
        raise GateNotApproved(
            "publish requires an approved study_launch gate")
    current = platform.get_status(study.study_id)
    if current.status == "live":
        return current  # idempotent no-op, no second audit event
    published = platform.publish(study.study_id)
    if audit is not None:
        audit.append("implementation-agent", "study_published",
                     {"study_id": study.study_id})
    return published

"""Implementation agent surfaces: recruitment platform client, launch
gating, participant data collection, and data inspection."""

from researchflow.deployment.platform import (
    MockRecruitmentPlatform,
    RecruitmentParams,
    StudyDraft,
    create_draft_study,
    publish,
)
from researchflow.deployment.collect import (
    MockHostingRepo,
    ParticipantDataset,
    ParticipantFile,
    collect_results,
)
from researchflow.deployment.inspect import DataInspectionReport, inspect_dataset

__all__ = [
    "DataInspectionReport",
    "MockHostingRepo",
    "MockRecruitmentPlatform",
    "ParticipantDataset",
    "ParticipantFile",
    "RecruitmentParams",
    "StudyDraft",
    "collect_results",
    "create_draft_study",
    "inspect_dataset",
    "publish",
]

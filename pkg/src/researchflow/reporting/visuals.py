"""Visualisation planning and panel rendering.

The figure plan maps every analysis artifact family to at least one
visual. Panels render through the same sandbox as analysis code; an
inspection loop (vision role in live mode, scripted in tests) accepts
or demands another attempt, and every candidate version is persisted so
a human can pick among them in collaborative mode.
"""

from __future__ import annotations

import json
import os
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable

from researchflow.errors import InspectionExhausted, NoArtifacts, RenderFailure
from researchflow.safety.sandbox import ExecutionLimits, enforce_limits

# Live-run magnitude, kept for documentation and sanity checks.
PANELS_PER_MANUSCRIPT_RANGE = (10, 20)

DEFAULT_MAX_ATTEMPTS = 3


@dataclass
class PanelSpec:
    panel_id: str
    data_artifact: str
    chart_kind: str  # scatter | bar | line | histogram
    caption: str = ""
    script: str = ""
    image_ref: str = ""
    versions: list[str] = field(default_factory=list)
    inspection_verdicts: list[str] = field(default_factory=list)

    @property
    def accepted(self) -> bool:
        return "accept" in self.inspection_verdicts

    def to_dict(self) -> dict:
        return {"panel_id": self.panel_id,
                "data_artifact": self.data_artifact,
                "chart_kind": self.chart_kind, "caption": self.caption,
                "image_ref": self.image_ref, "versions": self.versions,
                "inspection_verdicts": self.inspection_verdicts}


@dataclass
class TableSpec:
    table_id: str
    data_artifact: str
    caption: str = ""

    def to_dict(self) -> dict:
        return {"table_id": self.table_id,
                "data_artifact": self.data_artifact, "caption": self.caption}


@dataclass
class Figure:
    figure_id: str
    panels: list[PanelSpec]
    caption: str = ""


@dataclass
class FigurePlan:
    figures: list[Figure]
    tables: list[TableSpec]

    def panel_count(self) -> int:
        return sum(len(f.panels) for f in self.figures)

    def referenced_artifacts(self) -> set[str]:
        refs = {p.data_artifact for f in self.figures for p in f.panels}
        refs |= {t.data_artifact for t in self.tables}
        return refs


def plan_visuals(artifact_names: list[str]) -> FigurePlan:
    """One figure panel per derived CSV family, one table per report
    artifact. Raises when there is nothing to visualize."""
    names = sorted(set(artifact_names))
    if not names:
        raise NoArtifacts("no analysis artifacts to plan visuals from")
    csvs = [n for n in names if n.endswith(".csv")]
    reports = [n for n in names if n.endswith(".json")]

    figures = []
    for i, name in enumerate(csvs, start=1):
        stem = Path(name).stem
        figures.append(Figure(
            figure_id=f"fig{i}",
            panels=[PanelSpec(panel_id=f"fig{i}a", data_artifact=name,
                              chart_kind="scatter",
                              caption=f"Overview of {stem}.")],
            caption=f"Figure {i}. {stem} overview."))
    tables = [
        TableSpec(table_id=f"tab{i}", data_artifact=name,
                  caption=f"Table {i}. Summary of {Path(name).stem}.")
        for i, name in enumerate(reports, start=1)
    ]
    return FigurePlan(figures=figures, tables=tables)


_RENDER_TEMPLATE = """\
import csv
import json

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

params = json.loads('''{params}''')
xs, ys = [], []
with open(params["data"]) as fh:
    for row in csv.DictReader(fh):
        values = [v for v in row.values() if v not in (None, "")]
        if len(values) >= 2:
            try:
                xs.append(float(values[-2]))
                ys.append(float(values[-1]))
            except ValueError:
                continue
fig, ax = plt.subplots(figsize=(4, 3), dpi=100)
if params["kind"] == "scatter":
    ax.scatter(xs, ys, s=12)
else:
    ax.plot(xs, ys)
ax.set_xlabel("x")
ax.set_ylabel("y")
fig.tight_layout()
fig.savefig(params["out"], metadata={{"Software": None}})
"""


def default_render_script(data_artifact: str, out_name: str,
                          chart_kind: str) -> str:
    params = json.dumps({"data": data_artifact, "out": out_name,
                         "kind": chart_kind})
    return _RENDER_TEMPLATE.format(params=params)


def render_panel(spec: PanelSpec, limits: ExecutionLimits, workdir: Path,
                 inspect: Callable[[bytes, int], str] | None = None,
                 max_attempts: int = DEFAULT_MAX_ATTEMPTS) -> PanelSpec:
    """Render in the sandbox, then loop on the inspection verdict.

    Every attempt's image is kept as a version; acceptance requires a
    passing verdict before the attempt budget runs out.
    """
    workdir = Path(workdir)
    workdir.mkdir(parents=True, exist_ok=True)
    data_path = workdir / spec.data_artifact
    if not data_path.exists():
        raise RenderFailure(
            f"data artifact {spec.data_artifact!r} missing for panel "
            f"{spec.panel_id!r}")
    inspect = inspect or (lambda image, attempt: "accept")

    for attempt in range(1, max_attempts + 1):
        out_name = f"{spec.panel_id}_v{attempt}.png"
        # custom scripts read the output filename from PANEL_OUT
        script = spec.script or default_render_script(
            spec.data_artifact, out_name, spec.chart_kind)
        script_path = workdir / f"render_{spec.panel_id}.py"
        script_path.write_text(script)
        env = dict(os.environ, PANEL_OUT=out_name)
        result = enforce_limits(["python3", script_path.name], workdir,
                                limits, env=env)
        image_path = workdir / out_name
        if not result.ok or not image_path.exists() \
                or image_path.stat().st_size == 0:
            raise RenderFailure(
                f"panel {spec.panel_id!r} render failed: "
                f"{result.status}: {result.stderr[-400:]}")
        spec.versions.append(out_name)
        verdict = inspect(image_path.read_bytes(), attempt)
        spec.inspection_verdicts.append(verdict)
        if verdict == "accept":
            spec.image_ref = out_name
            if not spec.caption:
                spec.caption = (f"{spec.chart_kind} of "
                                f"{Path(spec.data_artifact).stem}")
            return spec
    raise InspectionExhausted(
        f"panel {spec.panel_id!r} rejected {max_attempts} times")

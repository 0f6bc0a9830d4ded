"""The run engine: drives one research run across the stage graph.

One step() executes the current stage's handler, records usage against
the budgets, advances the manifest, and writes a checkpoint — so a crash
at any stage boundary restores losslessly from the latest checkpoint and
the artifact tree comes out byte-identical to an uninterrupted run.

All state a handler needs from earlier stages is read back from the
artifact store, never from engine attributes, which is what makes
restore-and-continue equivalent to never having crashed.
"""

from __future__ import annotations

import json
import threading
import time
from pathlib import Path

from researchflow.analysis import (
    CodeWorkspace,
    CycleLog,
    EditBlock,
    apply_edit,
    execute_stage,
    plan_analysis,
    seek_consensus,
    topological_order,
)
from researchflow.deployment import (
    MockHostingRepo,
    MockRecruitmentPlatform,
    RecruitmentParams,
    collect_results,
    create_draft_study,
    inspect_dataset,
    publish,
)
from researchflow.design import (
    InstrumentRegistry,
    PowerAnalysisSpec,
    PreRegistration,
    TestFamily,
    build_preregistration,
    compute_power,
    design_protocol,
    render_preregistration,
    validate_prereg,
)
from researchflow.errors import (
    BudgetExceeded,
    GateVersionConflict,
    StageFailed,
)
from researchflow.gateway import (
    CompletionRequest,
    ModelGateway,
    ScriptedBackend,
    default_binding_table,
)
from researchflow.ideation import (
    formulate,
    generate_suggestions,
    tournament,
    validate_idea,
)
from researchflow.kernel import AgentKind, AgentNode
from researchflow.knowledge import FixtureClient, KnowledgeEngine
from researchflow.orchestrator.artifacts import ArtifactStore
from researchflow.orchestrator.budgets import Budgets
from researchflow.orchestrator.checkpoints import CheckpointStore
from researchflow.orchestrator.config import RunConfig
from researchflow.orchestrator.gates import open_gate, resolve_gate
from researchflow.orchestrator.manifest import RunManifest, StageRecord, advance
from researchflow.reeval import (
    EffectDirection,
    EvidenceSummary,
    TheoryContext,
    evaluate,
)
from researchflow.reporting import (
    CitationRecord,
    FixtureResolver,
    assemble_manuscript,
    build_document,
    plan_visuals,
    render_panel,
    review_and_revise,
    verify_all,
)
from researchflow.safety.audit import AuditLog
from researchflow.safety.sandbox import ExecutionLimits

ANALYSIS_LIMITS = ExecutionLimits(requested_timeout_s=55, ceiling_s=60)
RENDER_LIMITS = ExecutionLimits(requested_timeout_s=55, ceiling_s=60)


class _DirectoryRepo:
    """Hosting-repo view over an on-disk directory of participant files;
    lets the analysis stage re-read collected data from the artifact
    store with the same classification logic as live collection."""

    def __init__(self, root: Path):
        self.root = Path(root)

    def list_files(self) -> list[str]:
        return sorted(p.name for p in self.root.glob("*.csv"))

    def fetch(self, filename: str) -> str:
        return (self.root / filename).read_text()


class RunEngine:
    def __init__(self, config: RunConfig, resume: bool = False):
        self.config = config
        self.run_dir = config.run_dir
        self.run_dir.mkdir(parents=True, exist_ok=True)
        self.store = ArtifactStore(self.run_dir / "artifacts")
        self.checkpoints = CheckpointStore(self.run_dir / "checkpoints")
        self.audit = AuditLog(self.run_dir / "audit.jsonl")

        backend = ScriptedBackend.from_file(config.fixture_path("script"))
        self.gateway = ModelGateway(
            default_binding_table(), backend,
            audit_hook=lambda event, payload:
                self.audit.append("model-gateway", event, payload))
        self.registry = InstrumentRegistry.from_file(
            config.fixture_path("registry"))
        resolver_data = json.loads(
            config.fixture_path("resolver").read_text())
        self.citation_keys = resolver_data["records"]
        self.resolver = FixtureResolver(resolver_data["known"])
        corpus = json.loads(config.fixture_path("corpus").read_text())
        self.knowledge = KnowledgeEngine(
            clients=[FixtureClient("fixture-db", corpus)])
        self.platform = MockRecruitmentPlatform()
        self.repo = MockHostingRepo(**config.platform)

        self.events: list[dict] = []
        self._lock = threading.RLock()

        if resume:
            _cp, state = self.checkpoints.latest()
            self.manifest = RunManifest.from_dict(state["manifest"])
            self.gateway.load_state(state["gateway"])
        else:
            self.manifest = RunManifest(
                run_id=config.run_id, mode=config.mode, seed=config.seed,
                budgets=Budgets(**config.budgets))
            self._save_config()
            self.checkpoint()

    # --- lifecycle ---------------------------------------------------------

    @classmethod
    def restore(cls, config: RunConfig) -> "RunEngine":
        return cls(config, resume=True)

    def checkpoint(self) -> None:
        state = {"manifest": self.manifest.to_dict(),
                 "gateway": self.gateway.state_dict()}
        self.checkpoints.save(self.manifest.run_id, self.manifest.stage,
                              state)

    def _save_config(self) -> None:
        data = {
            "run_id": self.config.run_id, "mode": self.config.mode,
            "seed": self.config.seed, "out_dir": str(self.config.out_dir),
            "gate_policy": self.config.gate_policy,
            "n_ideas": self.config.n_ideas,
            "budgets": self.config.budgets,
            "fixtures": {k: str(v)
                         for k, v in self.config.fixtures.items()},
            "platform": self.config.platform, "power": self.config.power,
            "recruitment": self.config.recruitment,
            "seed_guidance": self.config.seed_guidance,
        }
        (self.run_dir / "config.json").write_text(
            json.dumps(data, sort_keys=True, indent=2) + "\n")

    def _emit(self, event_type: str, data: dict) -> dict:
        with self._lock:
            event = {"seq": len(self.events), "type": event_type,
                     "stage": self.manifest.stage, "data": data}
            self.events.append(event)
            with (self.run_dir / "trace.jsonl").open("a") as fh:
                fh.write(json.dumps(event, sort_keys=True) + "\n")
            return event

    def _tmp(self, name: str) -> Path:
        path = self.run_dir / "tmp" / name
        path.mkdir(parents=True, exist_ok=True)
        return path

    # --- stepping ------------------------------------------------------------

    def step(self) -> str:
        """Run the current stage to its boundary. Returns the step
        outcome: done | waiting_gate | complete | halted."""
        with self._lock:
            stage = self.manifest.stage
            if stage in ("complete", "halted"):
                return stage
            handler = self._handlers()[stage]
            tokens_before = self.gateway.ledger.total_tokens
            cost_before = self.gateway.ledger.total_cost
            started = self.manifest.tick()
            wall_start = time.monotonic()

            try:
                outcome = handler()
            except StageFailed as exc:
                record = StageRecord(
                    stage=stage, status="failed", started=started,
                    ended=self.manifest.logical_clock,
                    tokens_used=(self.gateway.ledger.total_tokens
                                 - tokens_before),
                    cost=round(self.gateway.ledger.total_cost
                               - cost_before, 9))
                advance(self.manifest, record)
                self.checkpoint()
                self._emit("run_halted", {"stage": stage,
                                          "reason": str(exc)})
                return "halted"

            if self.manifest.halted:  # e.g. a gate was rejected mid-stage
                self.checkpoint()
                self._emit("run_halted", {"stage": stage})
                return "halted"
            if outcome.get("waiting"):
                # usage up to the gate is charged now; the stage record
                # written after resume covers only the remainder
                try:
                    self.manifest.budgets.charge(
                        tokens=(self.gateway.ledger.total_tokens
                                - tokens_before),
                        cost=(self.gateway.ledger.total_cost
                              - cost_before),
                        wall_clock_s=time.monotonic() - wall_start)
                except BudgetExceeded as exc:
                    self.manifest.stage = "halted"
                    self.checkpoint()
                    self._emit("run_halted", {"stage": stage,
                                              "reason": str(exc)})
                    return "halted"
                self.checkpoint()
                self._emit("waiting_gate",
                           {"gates": [g.to_dict()
                                      for g in self.manifest.open_gates()]})
                return "waiting_gate"

            record = StageRecord(
                stage=stage, status="done", started=started,
                ended=self.manifest.logical_clock,
                tokens_used=self.gateway.ledger.total_tokens - tokens_before,
                cost=round(self.gateway.ledger.total_cost - cost_before, 9),
                artifacts=outcome["artifacts"])
            try:
                self.manifest.budgets.charge(
                    wall_clock_s=time.monotonic() - wall_start)
                advance(self.manifest, record,
                        decision=outcome.get("decision"))
            except BudgetExceeded as exc:
                self.manifest.stage = "halted"
                self.checkpoint()
                self._emit("run_halted", {"stage": stage,
                                          "reason": str(exc)})
                return "halted"
            self.checkpoint()
            self._emit("stage_completed",
                       {"completed": stage, "next": self.manifest.stage,
                        "decision": outcome.get("decision")})
            if self.manifest.stage in ("complete", "halted"):
                return self.manifest.stage
            return "done"

    def run(self) -> str:
        """Step until the run is terminal or blocked on an open gate."""
        while True:
            result = self.step()
            if result in ("complete", "halted", "waiting_gate"):
                return result

    def resolve_gate(self, gate_id: str, decision: str, operator: str,
                     note: str = "", expected_version: int | None = None):
        with self._lock:
            gate = self.manifest.gate(gate_id)
            if (gate is not None and expected_version is not None
                    and gate.version != expected_version):
                raise GateVersionConflict(
                    f"gate {gate_id!r} is at version {gate.version}, "
                    f"caller expected {expected_version}")
            resolve_gate(self.manifest, gate_id, decision, operator,
                         note=note, audit=self.audit)
            self.checkpoint()
            self._emit("gate_decided",
                       {"gate_id": gate_id, "decision": decision,
                        "operator": operator})
            return self.manifest.gate(gate_id)

    # --- shared helpers --------------------------------------------------------

    def _complete(self, role_key: str, module: str, context: str) -> str:
        return self.gateway.complete(CompletionRequest(
            role_key=role_key, module=module, context=context)).text

    def _log_execution(self, actor: str, kind: str, detail: dict) -> None:
        self.audit.append(actor, "sandbox_execution",
                          {"kind": kind, **detail})

    def _existing(self, prefix: str) -> list[str]:
        return [rel for rel in self.store.list_files()
                if rel.startswith(prefix)]

    def _analysis_artifact_names(self) -> list[str]:
        return [rel[len("analysis/"):]
                for rel in self._existing("analysis/derived/")
                + self._existing("analysis/reports/")]

    def _figure_plan(self):
        return plan_visuals(self._analysis_artifact_names())

    def _citation_records(self):
        records = [CitationRecord(key=r["key"], doi=r["doi"])
                   for r in self.citation_keys]
        return verify_all(records, self.resolver)

    def _assemble(self, sections: dict):
        return assemble_manuscript(sections, self._figure_plan(),
                                   self._citation_records())

    # --- stage handlers ----------------------------------------------------------

    def _handlers(self):
        return {
            "ideation": self._stage_ideation,
            "methodology": self._stage_methodology,
            "deployment": self._stage_deployment,
            "collection_wait": self._stage_collection_wait,
            "analysis": self._stage_analysis,
            "re_evaluation": self._stage_re_evaluation,
            "visuals": self._stage_visuals,
            "manuscript": self._stage_manuscript,
            "review": self._stage_review,
            "document": self._stage_document,
        }

    def _stage_ideation(self) -> dict:
        suggestions, step_log = generate_suggestions(
            self.gateway, self.config.n_ideas,
            seed_guidance=self.config.seed_guidance, registry=self.registry)

        def propose(_context: dict) -> str:
            return self._complete("idea-agent", "ideation",
                                  "expand the suggestion into a full "
                                  "research idea")

        ideas = []
        for suggestion in suggestions:
            idea, _result = formulate(suggestion, propose)
            ideas.append(validate_idea(idea, self.knowledge, self.registry))
        validated = [i for i in ideas if i.status == "validated"]
        if len(validated) < 2:
            raise StageFailed(
                f"ideation produced {len(validated)} validated ideas; "
                f"the tournament needs at least 2")
        result = tournament(validated, self.gateway,
                            judge_roles=["judge", "judge"])
        champion = next(i for i in validated
                        if i.idea_id == result.champion)

        artifacts = [
            self.store.write_json("ideation/suggestions.json", {
                "steps": step_log,
                "suggestions": [s.to_dict() for s in suggestions]}),
            self.store.write_json("ideation/ideas.json",
                                  [i.to_dict() for i in ideas]),
            self.store.write_json("ideation/tournament.json",
                                  result.to_dict()),
            self.store.write_json("ideation/champion.json",
                                  champion.to_dict()),
        ]
        return {"artifacts": artifacts}

    def _stage_methodology(self) -> dict:
        existing = self._existing("methodology/")
        gate = next((g for g in self.manifest.gates
                     if g.kind == "prereg_approval"), None)
        if existing and gate is not None:
            if gate.status == "open":
                return {"waiting": True}
            return {"artifacts": existing}

        champion = self.store.read_json("ideation/champion.json")
        node = AgentNode(agent_id="method-1", role_key="method-agent",
                         kind=AgentKind.SPECIALIST)
        protocol, _result = design_protocol(
            node, champion["hypothesis"], self.registry,
            propose=lambda _ctx: self._complete(
                "method-agent", "methodology",
                f"design a protocol for: {champion['hypothesis']}"))

        spec = PowerAnalysisSpec(
            family=TestFamily(self.config.power["family"]),
            effect_size=self.config.power["effect_size"],
            alpha=self.config.power["alpha"],
            target_power=self.config.power["target_power"])
        compute_power(spec, self._tmp("power"))
        self._log_execution("method-agent", "power_analysis",
                            {"required_n": spec.result.required_n})

        variables = champion.get("variables", {})
        idea_payload = {
            "hypotheses": [champion["hypothesis"]],
            "exclusion_criteria": variables.get("exclusion_criteria", []),
            "analysis_plan": variables.get("analysis_plan", []),
            "anticipated_outcomes": champion.get("predicted_outcomes", []),
            "eligibility": variables.get("eligibility", {}),
            "platform": variables.get("platform", "online recruitment"),
        }
        prereg = build_preregistration(protocol, spec, idea_payload)
        findings = validate_prereg(prereg)
        if findings:
            raise StageFailed(f"pre-registration invalid: {findings}")

        artifacts = [
            self.store.write_json("methodology/protocol.json",
                                  protocol.to_dict()),
            self.store.write_json("methodology/power.json",
                                  {"spec": spec.to_dict(),
                                   "sandbox_runs": 1}),
            self.store.write_json("methodology/prereg.json",
                                  prereg.to_dict()),
            self.store.write_text("methodology/prereg.txt",
                                  render_preregistration(prereg)),
        ]
        if self.manifest.mode == "collaborative":
            gate = open_gate(self.manifest, "prereg_approval")
            self.audit.append("orchestrator", "gate_opened",
                              {"gate_id": gate.gate_id, "kind": gate.kind})
            self._emit("gate_opened", gate.to_dict())
            if self.config.gate_policy == "auto":
                self.resolve_gate(gate.gate_id, "approved", "auto-operator",
                                  note="auto-approved by gate policy")
            if gate.status == "open":
                return {"waiting": True}
        return {"artifacts": artifacts}

    def _stage_deployment(self) -> dict:
        prereg = PreRegistration.from_dict(
            self.store.read_json("methodology/prereg.json"))
        gate = next((g for g in self.manifest.gates
                     if g.kind == "study_launch"), None)
        if gate is None:
            note = self._complete(
                "implementation-agent", "deployment",
                f"prepare recruitment for n={prereg.required_n}")
            params = RecruitmentParams(sample_size=prereg.required_n,
                                       **self.config.recruitment)
            draft = create_draft_study(params, prereg.required_n,
                                       self.platform)
            self.store.write_json("deployment/draft.json", {
                "study_id": draft.study_id, "status": draft.status,
                "params": draft.params, "implementation_note": note})
            gate = open_gate(self.manifest, "study_launch")
            self.audit.append("orchestrator", "gate_opened",
                              {"gate_id": gate.gate_id, "kind": gate.kind})
            self._emit("gate_opened", gate.to_dict())
            if self.config.gate_policy == "auto":
                self.resolve_gate(gate.gate_id, "approved", "auto-operator",
                                  note="auto-approved by gate policy")
        if gate.status == "open":
            return {"waiting": True}
        if gate.status == "rejected":
            return {"waiting": True}  # manifest is already halted

        draft_info = self.store.read_json("deployment/draft.json")
        if draft_info["study_id"] not in self.platform.studies:
            # fresh process after restore: rebuild the mock platform draft
            params = RecruitmentParams(**draft_info["params"])
            draft = create_draft_study(params, prereg.required_n,
                                       self.platform)
        else:
            draft = self.platform.get_status(draft_info["study_id"])
        published = publish(draft, gate, self.platform, audit=self.audit)
        artifacts = ["deployment/draft.json",
                     self.store.write_json("deployment/study.json", {
                         "study_id": published.study_id,
                         "status": published.status,
                         "gate_id": gate.gate_id,
                         "retry_log": self.platform.retry_log})]
        return {"artifacts": artifacts}

    def _stage_collection_wait(self) -> dict:
        raw_tmp = self._tmp("raw")
        dataset = collect_results(self.repo, raw_tmp)
        artifacts = self.store.import_tree(raw_tmp, "raw")
        artifacts.append(self.store.write_json("collection/manifest.json",
                                               dataset.manifest()))
        return {"artifacts": artifacts}

    def _stage_analysis(self) -> dict:
        workdir = self._tmp("analysis")
        dataset = collect_results(_DirectoryRepo(self.store.path("raw")),
                                  workdir / "raw")
        inspection = inspect_dataset(dataset)
        prereg = PreRegistration.from_dict(
            self.store.read_json("methodology/prereg.json"))
        plan = plan_analysis(prereg, inspection)
        if not plan.attestation["aligned"]:
            raise StageFailed(
                f"analysis plan deviates from the pre-registration: "
                f"{plan.attestation['deviations']}")

        ws = CodeWorkspace()
        scripts_dir = self.config.fixture_path("analysis_dir")
        for path in sorted(scripts_dir.glob("*.py")):
            apply_edit(ws, EditBlock(target=path.name, anchor="",
                                     replacement=path.read_text()))

        cycle_log = CycleLog()
        by_name = {s.name: s for s in plan.stages}
        for name in topological_order(plan.stages):
            execution = execute_stage(ws, by_name[name], ANALYSIS_LIMITS,
                                      workdir, cycle_log)
            self._log_execution(
                "analysis-agent", "analysis_stage",
                {"stage": name, "status": execution.result.status})
            if not execution.result.ok:
                raise StageFailed(
                    f"analysis stage {name!r} failed: "
                    f"{execution.result.status}")
            verdict = seek_consensus(
                json.dumps({"stage": name,
                            "produced": execution.produced_files},
                           sort_keys=True),
                self.gateway)
            cycle_log.append(name, "inspect", verdict.decision,
                             verdicts=(verdict.troubleshooter_votes
                                       + verdict.verification_votes))
            if verdict.decision != "accept":
                raise StageFailed(
                    f"consensus rejected analysis stage {name!r}")

        artifacts = [
            self.store.write_json("analysis/inspection.json",
                                  inspection.to_dict()),
            self.store.write_json("analysis/plan.json", {
                "stages": [s.to_dict() for s in plan.stages],
                "exclusion_rules": [r.to_dict()
                                    for r in plan.exclusion_rules],
                "attestation": plan.attestation}),
            self.store.write_text("analysis/cycles.jsonl",
                                  cycle_log.to_jsonl()),
            self.store.write_json("analysis/workspace.json", {
                "files": sorted(ws.files),
                "edits": len(ws.history),
                "tree_digest": ws.tree_digest()}),
        ]
        artifacts += self.store.import_tree(workdir / "derived",
                                            "analysis/derived")
        artifacts += self.store.import_tree(workdir / "reports",
                                            "analysis/reports")
        return {"artifacts": artifacts}

    def _stage_re_evaluation(self) -> dict:
        stats = self.store.read_json("analysis/reports/stats.json")
        power = self.store.read_json("methodology/power.json")
        narrative = self._complete(
            "re-evaluation", "re_evaluation",
            f"summarize the evidence: {json.dumps(stats, sort_keys=True)}")
        ev = EvidenceSummary(
            bayes_factor=stats["bf10"], p_value=stats["p"],
            alpha=stats["alpha"],
            achieved_power=power["spec"]["result"]["achieved_power_at_n"],
            effect_direction=EffectDirection(stats["effect_direction"]),
            precision_adequate=stats["precision_adequate"])
        decision = evaluate(ev, TheoryContext(
            consistent_with_established=True))
        artifacts = [self.store.write_json("re_evaluation/decision.json", {
            **decision.to_dict(), "narrative": narrative,
            "evidence": stats})]
        return {"artifacts": artifacts,
                "decision": decision.decision.value}

    def _stage_visuals(self) -> dict:
        plan = self._figure_plan()
        workdir = self._tmp("visuals")
        for name in sorted(plan.referenced_artifacts()):
            if name.endswith(".csv"):
                dest = workdir / name
                dest.parent.mkdir(parents=True, exist_ok=True)
                dest.write_bytes(
                    self.store.path(f"analysis/{name}").read_bytes())

        def inspect(_image: bytes, _attempt: int) -> str:
            text = self._complete("panel-inspection", "visuals",
                                  "inspect the rendered panel")
            return "accept" if text.lower().startswith("accept") else "revise"

        artifacts = []
        for figure in plan.figures:
            for panel in figure.panels:
                render_panel(panel, RENDER_LIMITS, workdir, inspect=inspect)
                self._log_execution(
                    "visuals-agent", "panel_render",
                    {"panel": panel.panel_id,
                     "attempts": len(panel.versions)})
                artifacts.append(self.store.write_bytes(
                    f"figures/{panel.panel_id}.png",
                    (workdir / panel.image_ref).read_bytes()))
        artifacts.append(self.store.write_json("visuals/plan.json", {
            "figures": [{
                "figure_id": f.figure_id, "caption": f.caption,
                "panels": [{
                    "panel_id": p.panel_id,
                    "data_artifact": p.data_artifact,
                    "chart_kind": p.chart_kind, "caption": p.caption,
                    "versions": p.versions,
                    "inspection_verdicts": p.inspection_verdicts,
                    "image_ref": p.image_ref} for p in f.panels],
            } for f in plan.figures],
            "tables": [{"table_id": t.table_id,
                        "data_artifact": t.data_artifact,
                        "caption": t.caption} for t in plan.tables]}))
        return {"artifacts": artifacts}

    def _stage_manuscript(self) -> dict:
        stats = self.store.read_json("analysis/reports/stats.json")
        text = self._complete(
            "manuscript-agent", "manuscript",
            f"draft the manuscript from the study record; headline "
            f"result: {json.dumps(stats, sort_keys=True)}")
        sections = json.loads(text)
        manuscript = self._assemble(sections)
        artifacts = [
            self.store.write_json("manuscript/sections.json",
                                  manuscript.sections),
            self.store.write_json("manuscript/citations.json",
                                  [c.to_dict()
                                   for c in self._citation_records()]),
            self.store.write_json("manuscript/manuscript.json", {
                "word_counts": manuscript.word_counts,
                "total_words": manuscript.total_words,
                "cited_keys": manuscript.cited_keys(),
                "references": manuscript.references}),
        ]
        return {"artifacts": artifacts}

    def _stage_review(self) -> dict:
        sections = self.store.read_json("manuscript/sections.json")
        manuscript = self._assemble(sections)

        def revise(current, majors):
            revised = dict(current.sections)
            notes = "; ".join(f.recommendation for f in majors)
            revised["discussion"] += (
                f" In revision we addressed the reviewers' major "
                f"concerns ({notes}) by stating the boundary conditions "
                f"of the recruited sample explicitly and tempering the "
                f"generalization claims accordingly.")
            return self._assemble(revised)

        final, reports = review_and_revise(manuscript, self.gateway, revise)
        artifacts = [
            self.store.write_json("review/findings.json", [
                {"findings": [f.to_dict() for f in report.findings],
                 "warnings": report.warnings} for report in reports]),
            self.store.write_json("manuscript/final_sections.json",
                                  final.sections),
        ]
        return {"artifacts": artifacts}

    def _stage_document(self) -> dict:
        sections = self.store.read_json("manuscript/final_sections.json")
        manuscript = self._assemble(sections)
        builds = {}
        artifacts = []
        for fmt in ("latex", "word"):
            out_dir = self.store.path(f"document/{fmt}")
            build = build_document(manuscript, fmt, out_dir)
            builds[fmt] = {"page_count": build.page_count,
                           "build_log": build.build_log,
                           "sources": sorted(build.source_files)}
            artifacts += self._existing(f"document/{fmt}/")
        artifacts.append(self.store.write_json("document/build.json",
                                               builds))
        return {"artifacts": sorted(set(artifacts))}

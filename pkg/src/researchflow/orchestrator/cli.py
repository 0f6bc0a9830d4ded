"""Command-line interface.

`run start` drives a configured run to completion (or to its first open
gate), `run resume` restores from the latest checkpoint, and the `gate`
group lets an operator decide intervention gates from the terminal.
"""

from __future__ import annotations

import json
from pathlib import Path

import click

from researchflow.errors import ResearchFlowError
from researchflow.orchestrator.config import RunConfig, load_config
from researchflow.orchestrator.engine import RunEngine


def config_from_run_dir(run_dir: Path) -> RunConfig:
    """Rebuild the config an existing run was started with."""
    path = Path(run_dir) / "config.json"
    if not path.exists():
        raise click.ClickException(f"{path} not found; is {run_dir} a run "
                                   f"directory?")
    data = json.loads(path.read_text())
    # out_dir in the saved copy is absolute; run_dir must match it
    return RunConfig(**data)


def _report(engine: RunEngine, status: str) -> None:
    manifest = engine.manifest
    click.echo(f"run {manifest.run_id}: {status} (stage={manifest.stage})")
    for gate in manifest.open_gates():
        click.echo(f"  open gate: {gate.gate_id} ({gate.kind})")
    if status == "complete":
        click.echo(f"  artifacts: {engine.store.root}")


@click.group()
def main() -> None:
    """Autonomous research-workflow runs."""


@main.group()
def run() -> None:
    """Start, resume, and inspect runs."""


@run.command("start")
@click.option("--config", "config_path", required=True,
              type=click.Path(exists=True, path_type=Path))
def run_start(config_path: Path) -> None:
    """Start a new run from a config file."""
    try:
        engine = RunEngine(load_config(config_path))
        status = engine.run()
    except ResearchFlowError as exc:
        raise click.ClickException(str(exc)) from exc
    _report(engine, status)


@run.command("resume")
@click.argument("run_dir", type=click.Path(exists=True, path_type=Path))
def run_resume(run_dir: Path) -> None:
    """Resume a run from its latest checkpoint."""
    try:
        engine = RunEngine.restore(config_from_run_dir(run_dir))
        status = engine.run()
    except ResearchFlowError as exc:
        raise click.ClickException(str(exc)) from exc
    _report(engine, status)


@run.command("status")
@click.argument("run_dir", type=click.Path(exists=True, path_type=Path))
def run_status(run_dir: Path) -> None:
    """Show the latest checkpointed state of a run."""
    engine = RunEngine.restore(config_from_run_dir(run_dir))
    manifest = engine.manifest
    click.echo(f"run {manifest.run_id} stage={manifest.stage} "
               f"mode={manifest.mode}")
    click.echo(f"  tokens spent: {manifest.budgets.spent_tokens}")
    for record in manifest.stage_records:
        click.echo(f"  {record.stage}: {record.status} "
                   f"({record.tokens_used} tokens)")
    for gate in manifest.gates:
        click.echo(f"  gate {gate.gate_id}: {gate.status}")


@main.group()
def gate() -> None:
    """Decide intervention gates."""


def _decide(run_dir: Path, gate_id: str, decision: str, operator: str,
            note: str, resume_after: bool) -> None:
    try:
        engine = RunEngine.restore(config_from_run_dir(run_dir))
        engine.resolve_gate(gate_id, decision, operator, note=note)
        status = "waiting_gate"
        if resume_after and not engine.manifest.halted:
            status = engine.run()
        elif engine.manifest.halted:
            status = "halted"
    except ResearchFlowError as exc:
        raise click.ClickException(str(exc)) from exc
    click.echo(f"gate {gate_id}: {decision} by {operator}")
    _report(engine, status)


@gate.command("approve")
@click.argument("run_dir", type=click.Path(exists=True, path_type=Path))
@click.argument("gate_id")
@click.option("--operator", required=True)
@click.option("--note", default="")
@click.option("--resume/--no-resume", "resume_after", default=True,
              help="continue the run after approving")
def gate_approve(run_dir: Path, gate_id: str, operator: str, note: str,
                 resume_after: bool) -> None:
    """Approve an open gate (and by default continue the run)."""
    _decide(run_dir, gate_id, "approved", operator, note, resume_after)


@gate.command("reject")
@click.argument("run_dir", type=click.Path(exists=True, path_type=Path))
@click.argument("gate_id")
@click.option("--operator", required=True)
@click.option("--note", default="")
def gate_reject(run_dir: Path, gate_id: str, operator: str,
                note: str) -> None:
    """Reject an open gate; the run halts."""
    _decide(run_dir, gate_id, "rejected", operator, note,
            resume_after=False)


@gate.command("list")
@click.argument("run_dir", type=click.Path(exists=True, path_type=Path))
def gate_list(run_dir: Path) -> None:
    """List all gates of a run."""
    engine = RunEngine.restore(config_from_run_dir(run_dir))
    if not engine.manifest.gates:
        click.echo("no gates")
    for g in engine.manifest.gates:
        click.echo(f"{g.gate_id} kind={g.kind} status={g.status} "
                   f"version={g.version} decided_by={g.decided_by or '-'}")


@main.command("fixture")
@click.argument("directory", type=click.Path(path_type=Path))
@click.option("--mode", default="autonomous",
              type=click.Choice(["autonomous", "collaborative"]))
@click.option("--gate-policy", default="auto",
              type=click.Choice(["auto", "manual"]))
def fixture(directory: Path, mode: str, gate_policy: str) -> None:
    """Write a self-contained dry-run fixture directory."""
    from researchflow.fixtures import make_dryrun_fixture
    config_path = make_dryrun_fixture(directory, mode=mode,
                                      gate_policy=gate_policy)
    click.echo(f"fixture written; config at {config_path}")


@main.command("serve")
@click.option("--host", default="127.0.0.1")
@click.option("--port", default=8000, type=int)
def serve(host: str, port: int) -> None:
    """Serve the HTTP control API."""
    import uvicorn

    from researchflow.orchestrator.api import create_app
    uvicorn.run(create_app(), host=host, port=port)


if __name__ == "__main__":
    main()

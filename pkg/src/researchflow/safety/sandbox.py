"""Bounded process execution.

Runs a command in an isolated working directory with a wall-clock timeout
(agent-requested, capped by a hard ceiling) and a storage cap enforced by
sampling the directory footprint while the process runs.
"""

from __future__ import annotations

import os
import signal
import subprocess
import time
from dataclasses import dataclass
from pathlib import Path

from researchflow.errors import EnvProvisionFailure

SAMPLE_INTERVAL_S = 0.05


@dataclass(frozen=True)
class ExecutionLimits:
    requested_timeout_s: float
    ceiling_s: float = 60.0
    storage_cap_bytes: int = 10 * 1024 * 1024
    isolated_env_id: str = "default"

    @property
    def effective_timeout_s(self) -> float:
        return min(self.requested_timeout_s, self.ceiling_s)


@dataclass
class ExecutionResult:
    status: str  # ok | error | timeout | storage_exceeded
    exit_code: int | None
    wall_time_s: float
    peak_storage_bytes: int
    stdout: str
    stderr: str

    @property
    def ok(self) -> bool:
        return self.status == "ok"


def directory_size(path: Path) -> int:
    total = 0
    for root, _dirs, files in os.walk(path):
        for f in files:
            try:
                total += os.path.getsize(os.path.join(root, f))
            except OSError:
                pass
    return total


def enforce_limits(argv: list[str], workdir: Path,
                   limits: ExecutionLimits,
                   env: dict | None = None) -> ExecutionResult:
    """Execute argv inside workdir under the given limits.

    The process is killed at the effective timeout or when the workdir
    grows past the storage cap; either way a result is returned, not
    raised, so callers can fold the outcome into their observation.
    """
    workdir = Path(workdir)
    if not workdir.is_dir():
        raise EnvProvisionFailure(f"workdir {workdir} does not exist")

    baseline = directory_size(workdir)
    start = time.monotonic()
    try:
        proc = subprocess.Popen(
            argv, cwd=str(workdir),
            stdout=subprocess.PIPE, stderr=subprocess.PIPE,
            text=True, start_new_session=True, env=env)
    except OSError as exc:
        raise EnvProvisionFailure(str(exc)) from exc

    status = "ok"
    peak = 0
    deadline = start + limits.effective_timeout_s
    while True:
        if proc.poll() is not None:
            break
        now = time.monotonic()
        grown = directory_size(workdir) - baseline
        peak = max(peak, grown)
        if grown > limits.storage_cap_bytes:
            status = "storage_exceeded"
            _kill(proc)
            break
        if now >= deadline:
            status = "timeout"
            _kill(proc)
            break
        time.sleep(min(SAMPLE_INTERVAL_S, max(deadline - now, 0.001)))

    try:
        stdout, stderr = proc.communicate(timeout=10)
    except subprocess.TimeoutExpired:
        _kill(proc)
        stdout, stderr = proc.communicate()
    wall = time.monotonic() - start
    peak = max(peak, directory_size(workdir) - baseline)
    if status == "ok" and proc.returncode != 0:
        status = "error"
    return ExecutionResult(
        status=status, exit_code=proc.returncode, wall_time_s=wall,
        peak_storage_bytes=peak, stdout=stdout or "", stderr=stderr or "")


def _kill(proc: subprocess.Popen) -> None:
    try:
        os.killpg(proc.pid, signal.SIGKILL)
    except (ProcessLookupError, PermissionError):
        proc.kill()

"""Run configuration: one file describing an entire run.

YAML or TOML in, a validated RunConfig out. Relative paths are resolved
against the config file's directory so a fixture directory is fully
relocatable. Secrets never live in the config file; they are looked up
in the environment by name.
"""

from __future__ import annotations

import os

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib
from dataclasses import dataclass, field
from pathlib import Path

import yaml

from researchflow.errors import InvalidConfig

# Environment variables a live (non-scripted) run would read. A dry run
# against scripted backends and mock platforms needs none of them.
SECRET_ENV_PREFIX = "MODEL_API_KEY_"
RECRUITMENT_SECRET_ENV = "RECRUITMENT_API_KEY"

MODES = ("autonomous", "collaborative")
GATE_POLICIES = ("auto", "manual")


@dataclass
class RunConfig:
    run_id: str
    mode: str = "autonomous"
    seed: int = 0
    out_dir: Path = Path("runs")
    gate_policy: str = "auto"  # auto-approve study_launch or wait for operator
    n_ideas: int = 4
    budgets: dict = field(default_factory=dict)
    # fixture paths (scripted backend, DOI resolver, instrument registry,
    # knowledge corpus, analysis stage scripts directory)
    fixtures: dict = field(default_factory=dict)
    platform: dict = field(default_factory=dict)  # hosting-repo shape
    power: dict = field(default_factory=dict)
    recruitment: dict = field(default_factory=dict)
    seed_guidance: str = ""

    def __post_init__(self):
        if self.mode not in MODES:
            raise InvalidConfig(f"mode must be one of {MODES}, "
                                f"got {self.mode!r}")
        if self.gate_policy not in GATE_POLICIES:
            raise InvalidConfig(f"gate_policy must be one of "
                                f"{GATE_POLICIES}, got {self.gate_policy!r}")
        if self.n_ideas < 2:
            raise InvalidConfig("n_ideas must be >= 2 (tournament arity)")
        self.out_dir = Path(self.out_dir)

    def fixture_path(self, key: str) -> Path:
        try:
            return Path(self.fixtures[key])
        except KeyError:
            raise InvalidConfig(f"missing fixture path {key!r}") from None

    @property
    def run_dir(self) -> Path:
        return self.out_dir / self.run_id


_PATH_FIXTURES = ("script", "resolver", "registry", "corpus", "analysis_dir")


def load_config(path: str | Path) -> RunConfig:
    path = Path(path)
    if not path.exists():
        raise InvalidConfig(f"config file {path} does not exist")
    if path.suffix in (".yaml", ".yml"):
        data = yaml.safe_load(path.read_text())
    elif path.suffix == ".toml":
        data = tomllib.loads(path.read_text())
    else:
        raise InvalidConfig(f"unsupported config format {path.suffix!r}")
    if not isinstance(data, dict):
        raise InvalidConfig("config root must be a mapping")

    base = path.parent
    fixtures = dict(data.get("fixtures", {}))
    for key in _PATH_FIXTURES:
        if key in fixtures:
            fixtures[key] = str((base / fixtures[key]).resolve())
    out_dir = Path(data.get("out_dir", "runs"))
    if not out_dir.is_absolute():
        out_dir = (base / out_dir).resolve()

    known = {f.name for f in RunConfig.__dataclass_fields__.values()}
    unknown = set(data) - known
    if unknown:
        raise InvalidConfig(f"unknown config keys: {sorted(unknown)}")
    try:
        return RunConfig(**{**data, "fixtures": fixtures,
                            "out_dir": out_dir})
    except TypeError as exc:
        raise InvalidConfig(str(exc)) from exc


def available_secrets(environ: dict | None = None) -> dict[str, str]:
    """Names of configured secrets found in the environment.

    Values are never returned or logged — only which names are set."""
    environ = os.environ if environ is None else environ
    found = {}
    for name in sorted(environ):
        if name.startswith(SECRET_ENV_PREFIX) or name == RECRUITMENT_SECRET_ENV:
            found[name] = "set"
    return found

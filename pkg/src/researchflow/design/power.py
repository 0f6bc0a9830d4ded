"""A priori sample-size determination.

Each supported test family has a built-in closed-form calculation, and
every computed sample size is cross-checked against analysis code that is
generated as source text and executed inside the safety sandbox. The two
routes must agree within one participant; persistent disagreement is a
troubleshooter-escalation condition.

Closed forms:
  correlation      N = ((z_{1-a/tails} + z_power) / atanh(r))^2 + 3
  mean_difference  n_per_group = 2 ((z_{1-a/tails} + z_power) / d)^2
  anova_like       smallest N with noncentral-F power >= target
"""

from __future__ import annotations

import json
import math
import sys
from dataclasses import dataclass, field
from enum import Enum
from pathlib import Path

from scipy.stats import f as f_dist, ncf, norm

from researchflow.errors import OracleMismatch, SandboxFailure
from researchflow.safety.sandbox import ExecutionLimits, enforce_limits

MIN_N = 3


class TestFamily(str, Enum):
    CORRELATION = "correlation"
    MEAN_DIFFERENCE = "mean_difference"
    ANOVA_LIKE = "anova_like"


@dataclass
class PowerResult:
    required_n: int
    achieved_power_at_n: float
    sandbox_n: int | None = None


@dataclass
class PowerAnalysisSpec:
    family: TestFamily
    effect_size: float
    alpha: float
    target_power: float
    tails: int = 2
    groups: int = 3  # anova_like only
    effect_source: str = "assumed"  # citation ref from the archivist, or "assumed"
    result: PowerResult | None = None

    def __post_init__(self):
        if not 0 < self.alpha < 1:
            raise ValueError("alpha must be in (0, 1)")
        if not 0 < self.target_power < 1:
            raise ValueError("target_power must be in (0, 1)")
        if self.tails not in (1, 2):
            raise ValueError("tails must be 1 or 2")
        if self.effect_size == 0:
            raise ValueError("effect size must be non-zero")

    def to_dict(self) -> dict:
        data = {
            "family": self.family.value,
            "effect_size": self.effect_size,
            "alpha": self.alpha,
            "target_power": self.target_power,
            "tails": self.tails,
            "groups": self.groups,
            "effect_source": self.effect_source,
        }
        if self.result:
            data["result"] = {
                "required_n": self.result.required_n,
                "achieved_power_at_n": round(self.result.achieved_power_at_n, 6),
                "sandbox_n": self.result.sandbox_n,
            }
        return data


def _z(q: float) -> float:
    return float(norm.ppf(q))


def achieved_power(spec: PowerAnalysisSpec, n: int) -> float:
    z_a = _z(1 - spec.alpha / spec.tails)
    if spec.family is TestFamily.CORRELATION:
        if n <= 3:
            return 0.0
        fz = abs(math.atanh(spec.effect_size))
        return float(norm.cdf(math.sqrt(n - 3) * fz - z_a))
    if spec.family is TestFamily.MEAN_DIFFERENCE:
        d = abs(spec.effect_size)
        return float(norm.cdf(d * math.sqrt(n / 2) - z_a))
    k = spec.groups
    total = n  # n is total N for anova
    if total - k < 1:
        return 0.0
    lam = spec.effect_size ** 2 * total
    crit = f_dist.ppf(1 - spec.alpha, k - 1, total - k)
    return float(1 - ncf.cdf(crit, k - 1, total - k, lam))


def closed_form_required_n(spec: PowerAnalysisSpec) -> int:
    """Built-in calculation; degenerate effect sizes clamp to the floor."""
    z_a = _z(1 - spec.alpha / spec.tails)
    z_b = _z(spec.target_power)
    if spec.family is TestFamily.CORRELATION:
        r = abs(spec.effect_size)
        if r >= 0.999999:
            return MIN_N
        n = ((z_a + z_b) / math.atanh(r)) ** 2 + 3
        return max(MIN_N, math.ceil(n))
    if spec.family is TestFamily.MEAN_DIFFERENCE:
        d = abs(spec.effect_size)
        n_per = 2 * ((z_a + z_b) / d) ** 2
        return max(MIN_N, math.ceil(n_per))
    # anova_like: search total N under the noncentral-F approximation
    k = spec.groups
    n = k + 1
    while n < 1_000_000:
        if achieved_power(spec, n) >= spec.target_power:
            return max(MIN_N, n)
        n += 1
    raise ValueError("no attainable sample size")


_SCRIPT_TEMPLATE = '''\
"""Generated power-analysis script: iterative search over n."""
import json
import math

from scipy.stats import f as f_dist, ncf, norm

SPECS = {specs_json}


def power_at(spec, n):
    z_a = float(norm.ppf(1 - spec["alpha"] / spec["tails"]))
    fam = spec["family"]
    if fam == "correlation":
        if n <= 3:
            return 0.0
        return float(norm.cdf(math.sqrt(n - 3) * abs(math.atanh(spec["effect_size"])) - z_a))
    if fam == "mean_difference":
        return float(norm.cdf(abs(spec["effect_size"]) * math.sqrt(n / 2) - z_a))
    k = spec["groups"]
    if n - k < 1:
        return 0.0
    lam = spec["effect_size"] ** 2 * n
    crit = f_dist.ppf(1 - spec["alpha"], k - 1, n - k)
    return float(1 - ncf.cdf(crit, k - 1, n - k, lam))


results = []
for spec in SPECS:
    n = 3
    while n < 1_000_000 and power_at(spec, n) < spec["target_power"]:
        n += 1
    results.append({{"required_n": n, "achieved_power": power_at(spec, n)}})

print(json.dumps({{"results": results}}))
'''


def generate_power_script(specs: list[PowerAnalysisSpec]) -> str:
    payload = [
        {"family": s.family.value, "effect_size": s.effect_size,
         "alpha": s.alpha, "target_power": s.target_power,
         "tails": s.tails, "groups": s.groups}
        for s in specs
    ]
    return _SCRIPT_TEMPLATE.format(specs_json=json.dumps(payload))


def run_power_script(specs: list[PowerAnalysisSpec], workdir: Path,
                     limits: ExecutionLimits | None = None) -> list[dict]:
    workdir = Path(workdir)
    workdir.mkdir(parents=True, exist_ok=True)
    script = workdir / "power_analysis.py"
    script.write_text(generate_power_script(specs))
    limits = limits or ExecutionLimits(requested_timeout_s=120, ceiling_s=300)
    result = enforce_limits([sys.executable, script.name], workdir, limits)
    if not result.ok:
        raise SandboxFailure(
            f"power script failed ({result.status}): {result.stderr[-500:]}")
    return json.loads(result.stdout)["results"]


def compute_power(spec: PowerAnalysisSpec, workdir: Path,
                  limits: ExecutionLimits | None = None,
                  retries: int = 2) -> PowerAnalysisSpec:
    """Fill spec.result, requiring sandbox and closed-form agreement
    within one participant."""
    oracle_n = closed_form_required_n(spec)
    last_sandbox_n = None
    for _attempt in range(retries + 1):
        sandbox = run_power_script([spec], workdir, limits)[0]
        last_sandbox_n = sandbox["required_n"]
        if abs(last_sandbox_n - oracle_n) <= 1:
            spec.result = PowerResult(
                required_n=oracle_n,
                achieved_power_at_n=achieved_power(spec, oracle_n),
                sandbox_n=last_sandbox_n)
            return spec
    raise OracleMismatch(
        f"sandbox n={last_sandbox_n} vs closed-form n={oracle_n} "
        f"for {spec.family.value}")

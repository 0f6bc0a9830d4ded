"""Run budgets: tokens, cost, wall clock.

Budgets are enforced before effects are committed — charge() refuses to
record usage that would cross a cap and signals the run to halt, so
remaining budget is non-increasing and never negative.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from researchflow.errors import BudgetExceeded

DEFAULT_MAX_TOKENS = 60_000_000
DEFAULT_MAX_COST = 250.0
DEFAULT_MAX_WALL_CLOCK_S = 48 * 3600.0


@dataclass
class Budgets:
    max_tokens: int = DEFAULT_MAX_TOKENS
    max_cost: float = DEFAULT_MAX_COST
    max_wall_clock_s: float = DEFAULT_MAX_WALL_CLOCK_S
    spent_tokens: int = 0
    spent_cost: float = 0.0
    spent_wall_clock_s: float = 0.0

    def charge(self, tokens: int = 0, cost: float = 0.0,
               wall_clock_s: float = 0.0) -> None:
        if tokens < 0 or cost < 0 or wall_clock_s < 0:
            raise ValueError("usage cannot be negative")
        if (self.spent_tokens + tokens > self.max_tokens
                or self.spent_cost + cost > self.max_cost
                or self.spent_wall_clock_s + wall_clock_s
                > self.max_wall_clock_s):
            raise BudgetExceeded(
                f"budget exhausted (tokens {self.spent_tokens}+{tokens}/"
                f"{self.max_tokens}, cost {self.spent_cost}+{cost}/"
                f"{self.max_cost}, wall {self.spent_wall_clock_s}+"
                f"{wall_clock_s}/{self.max_wall_clock_s})")
        self.spent_tokens += tokens
        self.spent_cost += cost
        self.spent_wall_clock_s += wall_clock_s

    @property
    def remaining_tokens(self) -> int:
        return self.max_tokens - self.spent_tokens

    def to_dict(self) -> dict:
        return {
            "max_tokens": self.max_tokens, "max_cost": self.max_cost,
            "max_wall_clock_s": self.max_wall_clock_s,
            "spent_tokens": self.spent_tokens,
            "spent_cost": self.spent_cost,
            "spent_wall_clock_s": self.spent_wall_clock_s,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "Budgets":
        return cls(**data)

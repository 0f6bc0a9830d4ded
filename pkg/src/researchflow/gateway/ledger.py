"""Usage ledger: per (module, model) token and cost accounting.

Run totals are always the sum over module entries; cost is tokens times
the configured unit prices (per million tokens, input and output priced
separately).
"""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass
class UsageEntry:
    calls: int = 0
    input_tokens: int = 0
    output_tokens: int = 0
    cost: float = 0.0


@dataclass
class UnitPrices:
    input_per_mtok: float = 3.0
    output_per_mtok: float = 15.0


class UsageLedger:
    def __init__(self, prices: dict[str, UnitPrices] | None = None):
        self.prices = prices or {}
        self._entries: dict[tuple[str, str], UsageEntry] = {}

    def record(self, module: str, model: str,
               input_tokens: int, output_tokens: int) -> None:
        if input_tokens < 0 or output_tokens < 0:
            raise ValueError("token counts must be >= 0")
        entry = self._entries.setdefault((module, model), UsageEntry())
        prices = self.prices.get(model, UnitPrices())
        entry.calls += 1
        entry.input_tokens += input_tokens
        entry.output_tokens += output_tokens
        entry.cost += (input_tokens * prices.input_per_mtok
                       + output_tokens * prices.output_per_mtok) / 1e6

    def module_table(self, modules: list[str] | None = None) -> dict:
        """Per-module usage rows plus run totals.

        When a module list is given (the nine workflow modules), rows are
        emitted for each of them even when all-zero."""
        rows: dict[str, UsageEntry] = {}
        for (module, _model), entry in self._entries.items():
            row = rows.setdefault(module, UsageEntry())
            row.calls += entry.calls
            row.input_tokens += entry.input_tokens
            row.output_tokens += entry.output_tokens
            row.cost += entry.cost
        if modules is not None:
            rows = {m: rows.get(m, UsageEntry()) for m in modules}
        total = UsageEntry()
        for row in rows.values():
            total.calls += row.calls
            total.input_tokens += row.input_tokens
            total.output_tokens += row.output_tokens
            total.cost += row.cost
        return {
            "modules": {
                m: {"calls": r.calls, "input_tokens": r.input_tokens,
                    "output_tokens": r.output_tokens, "cost": round(r.cost, 6)}
                for m, r in sorted(rows.items())
            },
            "total": {"calls": total.calls,
                      "input_tokens": total.input_tokens,
                      "output_tokens": total.output_tokens,
                      "cost": round(total.cost, 6)},
        }

    @property
    def total_tokens(self) -> int:
        return sum(e.input_tokens + e.output_tokens
                   for e in self._entries.values())

    @property
    def total_cost(self) -> float:
        return sum(e.cost for e in self._entries.values())

    # --- checkpoint support ---

    def state_dict(self) -> dict:
        return {
            "entries": [
                {"module": m, "model": model, "calls": e.calls,
                 "input_tokens": e.input_tokens,
                 "output_tokens": e.output_tokens, "cost": e.cost}
                for (m, model), e in sorted(self._entries.items())
            ]
        }

    def load_state(self, state: dict) -> None:
        self._entries = {}
        for row in state.get("entries", []):
            self._entries[(row["module"], row["model"])] = UsageEntry(
                calls=row["calls"], input_tokens=row["input_tokens"],
                output_tokens=row["output_tokens"], cost=row["cost"])

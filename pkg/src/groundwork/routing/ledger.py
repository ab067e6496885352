"""Token budget enforcement and per-call cost accounting."""

from __future__ import annotations

import threading
from dataclasses import dataclass
from typing import Dict, List, Tuple

from .policy import DEFAULT_BUDGET_TOKENS, Tier, default_tiers

TOKENS_PER_RATE_UNIT = 1_000_000


class BudgetExceededError(Exception):
    """Recording the usage would push token totals past the budget.

    Nothing is recorded when this is raised; the episode must terminate
    with the best answer obtained so far.
    """


@dataclass(frozen=True)
class UsageRecord:
    tier: str
    input_tokens: int
    output_tokens: int
    cost: float


class CostLedger:
    """Tracks token usage against a hard budget.

    Appends are serialized with a lock so a process-wide aggregate ledger
    can be shared; within an episode the ledger is owned by that episode.
    """

    def __init__(
        self,
        budget_tokens: int = DEFAULT_BUDGET_TOKENS,
        tiers: Dict[str, Tier] | None = None,
    ) -> None:
        if budget_tokens < 0:
            raise ValueError("budget must be non-negative")
        self.budget_tokens = budget_tokens
        self._tiers = dict(tiers) if tiers is not None else default_tiers()
        self._records: List[UsageRecord] = []
        self._total_tokens = 0
        self._total_cost = 0.0
        self._lock = threading.Lock()

    @property
    def records(self) -> Tuple[UsageRecord, ...]:
        with self._lock:
            return tuple(self._records)

    @property
    def total_tokens(self) -> int:
        with self._lock:
            return self._total_tokens

    @property
    def total_cost(self) -> float:
        with self._lock:
            return self._total_cost

    @property
    def remaining_tokens(self) -> int:
        with self._lock:
            return self.budget_tokens - self._total_tokens

    def would_fit(self, tokens: int) -> bool:
        """Pre-call check against the remaining budget."""
        return tokens <= self.remaining_tokens

    def record_usage(self, tier: str, input_tokens: int, output_tokens: int) -> float:
        """Append a usage record and return its cost.

        cost = input/1M * input_rate + output/1M * output_rate.
        Raises :class:`BudgetExceededError` (recording nothing) when the
        call would exceed the budget.
        """
        if input_tokens < 0 or output_tokens < 0:
            raise ValueError("token counts must be non-negative")
        rates = self._tiers[tier]
        with self._lock:
            total = input_tokens + output_tokens
            if self._total_tokens + total > self.budget_tokens:
                raise BudgetExceededError(
                    f"{total} tokens would exceed budget "
                    f"({self._total_tokens}/{self.budget_tokens} used)"
                )
            cost = (
                input_tokens / TOKENS_PER_RATE_UNIT * rates.input_rate
                + output_tokens / TOKENS_PER_RATE_UNIT * rates.output_rate
            )
            self._records.append(UsageRecord(tier, input_tokens, output_tokens, cost))
            self._total_tokens += total
            self._total_cost += cost
            return cost


def record_usage(ledger: CostLedger, tier: str, input_tokens: int, output_tokens: int) -> float:
    """Module-level convenience wrapper over :meth:`CostLedger.record_usage`."""
    return ledger.record_usage(tier, input_tokens, output_tokens)

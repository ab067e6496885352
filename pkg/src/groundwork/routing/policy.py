"""Tier table and escalation thresholds.

Defaults mirror the production configuration: three tiers at published
per-million-token rates, a fast-accept band at 0.8, and reflection below
0.6 capped at two rounds.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Dict, Tuple

TIER_ORDER = ("fast", "standard", "strong")

DEFAULT_BUDGET_TOKENS = 150_000
DEFAULT_MAX_OUTPUT_TOKENS = 1024


@dataclass(frozen=True)
class Tier:
    """One capability/cost level. Rates are currency units per 1M tokens."""

    name: str
    model_id: str
    input_rate: float
    output_rate: float

    def __post_init__(self) -> None:
        if self.input_rate < 0 or self.output_rate < 0:
            raise ValueError("rates must be non-negative")


def default_tiers() -> Dict[str, Tier]:
    return {
        "fast": Tier("fast", "gpt-4.1-mini", 0.40, 1.60),
        "standard": Tier("standard", "gpt-4.1", 2.00, 8.00),
        "strong": Tier("strong", "anthropic/claude-opus-4-6", 15.00, 75.00),
    }


@dataclass
class TierPolicy:
    """Escalation thresholds plus the tier table."""

    accept_fast: float = 0.8
    reflect_threshold: float = 0.6
    max_reflections: int = 2
    max_output_tokens: int = DEFAULT_MAX_OUTPUT_TOKENS
    tiers: Dict[str, Tier] = field(default_factory=default_tiers)

    def __post_init__(self) -> None:
        if not 0 < self.reflect_threshold <= self.accept_fast <= 1:
            raise ValueError(
                f"need 0 < reflect_threshold <= accept_fast <= 1, got "
                f"{self.reflect_threshold} / {self.accept_fast}"
            )
        if self.max_reflections < 0:
            raise ValueError("max_reflections must be >= 0")
        missing = [name for name in TIER_ORDER if name not in self.tiers]
        if missing:
            raise ValueError(f"tier table missing {missing}")

    def tier(self, name: str) -> Tier:
        return self.tiers[name]


def should_reflect(sigma: float, policy: TierPolicy) -> bool:
    """Reflection triggers strictly below the threshold."""
    if not 0 <= sigma <= 1:
        raise ValueError(f"confidence must be in [0, 1], got {sigma!r}")
    return sigma < policy.reflect_threshold

"""Answer-uncertainty measures and information-gain action selection."""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Sequence, Tuple

PROBABILITY_SUM_TOLERANCE = 1e-9


class InvalidDistributionError(ValueError):
    """Probabilities are negative, do not sum to 1, or answers repeat."""


class EmptyCandidatesError(ValueError):
    """Action selection requires at least one candidate."""


@dataclass(frozen=True)
class AnswerDistribution:
    """A normalized distribution over distinct candidate answers."""

    entries: Tuple[Tuple[str, float], ...]

    def __post_init__(self) -> None:
        answers = [answer for answer, _ in self.entries]
        if len(set(answers)) != len(answers):
            raise InvalidDistributionError("answers must be distinct")
        probs = [p for _, p in self.entries]
        if any(p < 0 for p in probs):
            raise InvalidDistributionError("probabilities must be non-negative")
        if abs(sum(probs) - 1.0) > PROBABILITY_SUM_TOLERANCE:
            raise InvalidDistributionError(f"probabilities sum to {sum(probs)!r}, not 1")


@dataclass(frozen=True)
class CandidateAction:
    """A possible next step with its estimated information gain in bits.

    Gains are supplied by the caller (backend confidence estimates or
    heuristics); this module only ranks them.
    """

    id: str
    description: str
    estimated_gain: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.estimated_gain):
            raise ValueError(f"estimated gain must be finite, got {self.estimated_gain!r}")


def answer_entropy(dist: AnswerDistribution) -> float:
    """Shannon entropy of the answer distribution in bits (0 log 0 = 0)."""
    return -sum(p * math.log2(p) for _, p in dist.entries if p > 0)


def select_action(candidates: Sequence[CandidateAction]) -> CandidateAction:
    """The candidate with maximum estimated gain; ties go to the smallest id."""
    if not candidates:
        raise EmptyCandidatesError("no candidate actions")
    return min(candidates, key=lambda c: (-c.estimated_gain, c.id))

"""The tiered reasoning episode.

One episode answers one task: a fast-tier probe, acceptance at high
confidence, otherwise knowledge augmentation with computed scene facts
and a standard-tier pass, then up to ``max_reflections`` rounds of
reflect-and-escalate to the strong tier. Every backend call is budget
pre-checked and recorded in the episode's cost ledger.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, List, Mapping, Optional, Tuple

from ..scene.model import FactSheet
from .backends import Backend, BackendAnswer, BackendFailure, BackendRequest
from .ledger import BudgetExceededError, CostLedger, UsageRecord
from .policy import TierPolicy

# Rough chars-per-token divisor for the pre-call budget estimate.
CHARS_PER_TOKEN = 4


class BudgetExhaustedError(Exception):
    """The episode could not afford even its first backend call."""


@dataclass
class KnowledgeState:
    """Accumulated observations, computed facts, and working notes."""

    observations: List[str] = field(default_factory=list)
    computed_facts: Optional[FactSheet] = None
    intermediate: List[str] = field(default_factory=list)
    step: int = 0

    def augment_with_facts(self, facts: Optional[FactSheet]) -> None:
        self.computed_facts = facts
        self.step += 1

    def add_note(self, note: str) -> None:
        self.intermediate.append(note)
        self.step += 1

    def fact_lines(self) -> Tuple[str, ...]:
        lines = list(self.observations)
        if self.computed_facts is not None:
            lines.extend(self.computed_facts.lines)
        lines.extend(self.intermediate)
        return tuple(lines)


@dataclass(frozen=True)
class RouterOutcome:
    """Terminal state of one reasoning episode."""

    answer: str
    confidence: float
    tier_sequence: Tuple[str, ...]
    reflections: int
    usage: Tuple[UsageRecord, ...]
    total_tokens: int
    total_cost: float
    budget_exhausted: bool = False


def reflection_note(answer: str, confidence: float) -> str:
    """Fixed-template working note appended before escalating."""
    return (
        f"previous answer {answer!r} had confidence {confidence:.2f}; "
        "re-examine the computed facts before answering again"
    )


def estimate_request_tokens(request: BackendRequest) -> int:
    """Pre-call estimate: prompt plus facts at ~4 chars/token, plus the output cap."""
    chars = len(request.prompt) + sum(len(line) for line in request.facts)
    return chars // CHARS_PER_TOKEN + request.max_output_tokens


class _StopEpisode(Exception):
    """Internal: budget ran out mid-episode; return the best answer so far."""


def run_episode(
    task: str,
    backends: Mapping[str, Backend],
    scene_facts: Optional[FactSheet],
    policy: TierPolicy,
    ledger: CostLedger,
    on_reflection: Optional[Callable[[int, str], None]] = None,
) -> RouterOutcome:
    """Run the escalation loop and return the final answer.

    Tier sequence is always a prefix pattern of
    [fast, standard, strong, strong]: the fast answer is accepted at
    confidence >= ``accept_fast``; the standard answer (over augmented
    knowledge) at confidence >= ``reflect_threshold``; below that, each
    round appends a reflection note and escalates to the strong tier, at
    most ``max_reflections`` times. If the budget runs out mid-episode
    the latest recorded answer is returned with ``budget_exhausted``
    set; if even the first call cannot be afforded,
    :class:`BudgetExhaustedError` is raised.
    """
    for name in ("fast", "standard", "strong"):
        if name not in backends:
            raise ValueError(f"missing backend for tier {name!r}")

    knowledge = KnowledgeState()
    tier_sequence: List[str] = []
    reflections = 0

    def call(tier: str) -> BackendAnswer:
        request = BackendRequest(
            tier=tier,
            prompt=task,
            facts=knowledge.fact_lines(),
            max_output_tokens=policy.max_output_tokens,
        )
        if not ledger.would_fit(estimate_request_tokens(request)):
            raise _StopEpisode()
        try:
            answer = backends[tier].complete(request)
        except Exception as exc:
            raise BackendFailure(tier, str(exc)) from exc
        try:
            ledger.record_usage(tier, answer.input_tokens, answer.output_tokens)
        except BudgetExceededError:
            raise _StopEpisode() from None
        tier_sequence.append(tier)
        return answer

    def outcome(answer: BackendAnswer, exhausted: bool = False) -> RouterOutcome:
        return RouterOutcome(
            answer=answer.answer,
            confidence=answer.confidence,
            tier_sequence=tuple(tier_sequence),
            reflections=reflections,
            usage=ledger.records,
            total_tokens=ledger.total_tokens,
            total_cost=ledger.total_cost,
            budget_exhausted=exhausted,
        )

    try:
        current = call("fast")
    except _StopEpisode:
        raise BudgetExhaustedError("budget cannot cover the first backend call") from None
    if current.confidence >= policy.accept_fast:
        return outcome(current)

    knowledge.augment_with_facts(scene_facts)
    try:
        current = call("standard")
        for round_index in range(1, policy.max_reflections + 1):
            if current.confidence >= policy.reflect_threshold:
                return outcome(current)
            note = reflection_note(current.answer, current.confidence)
            knowledge.add_note(note)
            reflections += 1
            if on_reflection is not None:
                on_reflection(round_index, note)
            current = call("strong")
    except _StopEpisode:
        return outcome(current, exhausted=True)
    return outcome(current)

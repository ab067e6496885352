"""Entropy measures, tier escalation, cost accounting, and backends."""

from .backends import (
    Backend,
    BackendAnswer,
    BackendFailure,
    BackendRequest,
    FailingBackend,
    HttpBackend,
    MockBackend,
    make_mock_backend,
)
from .entropy import (
    AnswerDistribution,
    CandidateAction,
    EmptyCandidatesError,
    InvalidDistributionError,
    answer_entropy,
    select_action,
)
from .episode import (
    BudgetExhaustedError,
    KnowledgeState,
    RouterOutcome,
    estimate_request_tokens,
    reflection_note,
    run_episode,
)
from .ledger import BudgetExceededError, CostLedger, UsageRecord, record_usage
from .policy import (
    DEFAULT_BUDGET_TOKENS,
    DEFAULT_MAX_OUTPUT_TOKENS,
    TIER_ORDER,
    Tier,
    TierPolicy,
    default_tiers,
    should_reflect,
)

__all__ = [
    "DEFAULT_BUDGET_TOKENS",
    "DEFAULT_MAX_OUTPUT_TOKENS",
    "TIER_ORDER",
    "AnswerDistribution",
    "Backend",
    "BackendAnswer",
    "BackendFailure",
    "BackendRequest",
    "BudgetExceededError",
    "BudgetExhaustedError",
    "CandidateAction",
    "CostLedger",
    "EmptyCandidatesError",
    "FailingBackend",
    "HttpBackend",
    "InvalidDistributionError",
    "KnowledgeState",
    "MockBackend",
    "RouterOutcome",
    "Tier",
    "TierPolicy",
    "UsageRecord",
    "answer_entropy",
    "default_tiers",
    "estimate_request_tokens",
    "make_mock_backend",
    "record_usage",
    "reflection_note",
    "run_episode",
    "select_action",
    "should_reflect",
]

"""Binary answer grading with six scoring functions."""

from .corpus import CorpusRecord, load_corpus
from .functions import (
    DEFAULT_EPSILON,
    DEFAULT_FUZZY_THRESHOLD,
    FUNCTION_NAMES,
    EmptyGoldError,
    GradingError,
    NoNumberFoundError,
    ScoreResult,
    ScoringSpec,
    UnknownFunctionError,
    UnparseablePredictionError,
    exact_match,
    extract_number,
    fuzzy_match,
    grade,
    json_match,
    must_exclude,
    must_include,
    numerical_match,
    token_f1,
    tokenize,
)

__all__ = [
    "DEFAULT_EPSILON",
    "DEFAULT_FUZZY_THRESHOLD",
    "FUNCTION_NAMES",
    "CorpusRecord",
    "EmptyGoldError",
    "GradingError",
    "NoNumberFoundError",
    "ScoreResult",
    "ScoringSpec",
    "UnknownFunctionError",
    "UnparseablePredictionError",
    "exact_match",
    "extract_number",
    "fuzzy_match",
    "grade",
    "json_match",
    "load_corpus",
    "must_exclude",
    "must_include",
    "numerical_match",
    "token_f1",
    "tokenize",
]

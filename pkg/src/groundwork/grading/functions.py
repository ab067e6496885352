"""The six answer-grading functions.

Every function returns a binary :class:`ScoreResult` (score 0 or 1) with
a machine-readable explanation. All functions are pure and stateless.
"""

from __future__ import annotations

import json
import re
from collections import Counter
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence

DEFAULT_FUZZY_THRESHOLD = 0.8
DEFAULT_EPSILON = 0.05

FUNCTION_NAMES = ("fuzzy", "exact", "must-include", "must-exclude", "json", "numerical")


class GradingError(Exception):
    """Base class for grading errors."""


class EmptyGoldError(GradingError):
    """The gold answer tokenizes to nothing, so overlap is undefined."""


class NoNumberFoundError(GradingError):
    """The prediction contains no numeric literal."""


class UnparseablePredictionError(GradingError):
    """No well-formed JSON object could be extracted from the prediction."""


class UnknownFunctionError(GradingError):
    """Scoring spec names a function outside the closed set."""


@dataclass(frozen=True)
class ScoreResult:
    score: int
    detail: str

    def __post_init__(self) -> None:
        if self.score not in (0, 1):
            raise ValueError(f"score must be 0 or 1, got {self.score!r}")


@dataclass(frozen=True)
class ScoringSpec:
    """Names one grading function plus its gold value and parameters.

    ``params`` keys: ``threshold`` (fuzzy, default 0.8), ``epsilon``
    (numerical and json number fields, default 0.05), ``required`` /
    ``banned`` (substring lists for must-include / must-exclude; the
    list may equivalently be supplied as ``gold``).
    """

    function: str
    gold: Any = None
    params: Dict[str, Any] = field(default_factory=dict)

    def __post_init__(self) -> None:
        if self.function not in FUNCTION_NAMES:
            raise UnknownFunctionError(f"unknown scoring function {self.function!r}")
        threshold = self.params.get("threshold")
        if threshold is not None and not 0 < threshold <= 1:
            raise ValueError(f"threshold must be in (0, 1], got {threshold!r}")
        epsilon = self.params.get("epsilon")
        if epsilon is not None and epsilon < 0:
            raise ValueError(f"epsilon must be >= 0, got {epsilon!r}")

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ScoringSpec":
        return cls(
            function=data["function"],
            gold=data.get("gold"),
            params=dict(data.get("params") or {}),
        )

    def _substrings(self, key: str) -> List[str]:
        value = self.params.get(key)
        if value is None:
            value = self.gold if isinstance(self.gold, (list, tuple)) else []
        return list(value)


def _normalize(text: str) -> str:
    return text.strip().lower()


def exact_match(pred: str, gold: str) -> ScoreResult:
    """Case-insensitive equality after trimming."""
    hit = _normalize(pred) == _normalize(gold)
    return ScoreResult(int(hit), f"normalized {_normalize(pred)!r} vs {_normalize(gold)!r}")


_TOKEN_SPLIT = re.compile(r"[^a-z0-9]+")


def tokenize(text: str) -> List[str]:
    """Lowercase, split on non-alphanumeric runs, drop empties, keep duplicates."""
    return [tok for tok in _TOKEN_SPLIT.split(text.lower()) if tok]


def token_f1(pred: str, gold: str) -> float:
    """Token-multiset F1 between two strings (symmetric, in [0, 1])."""
    pred_tokens = tokenize(pred)
    gold_tokens = tokenize(gold)
    if not gold_tokens:
        raise EmptyGoldError("gold answer has no tokens")
    if not pred_tokens:
        return 0.0
    overlap = sum((Counter(pred_tokens) & Counter(gold_tokens)).values())
    if overlap == 0:
        return 0.0
    return 2.0 * overlap / (len(pred_tokens) + len(gold_tokens))


def fuzzy_match(pred: str, gold: str, threshold: float = DEFAULT_FUZZY_THRESHOLD) -> ScoreResult:
    """Token-multiset F1 against a threshold; F1 >= threshold passes."""
    if not 0 < threshold <= 1:
        raise ValueError(f"threshold must be in (0, 1], got {threshold!r}")
    f1 = token_f1(pred, gold)
    overlap = sorted((Counter(tokenize(pred)) & Counter(tokenize(gold))).elements())
    return ScoreResult(int(f1 >= threshold), f"f1={f1:.4f} threshold={threshold} overlap={overlap}")


def must_include(pred: str, required: Sequence[str]) -> ScoreResult:
    """All required substrings must occur (case-insensitive containment)."""
    haystack = pred.lower()
    missing = [sub for sub in required if sub.lower() not in haystack]
    return ScoreResult(int(not missing), f"missing={missing}")


def must_exclude(pred: str, banned: Sequence[str]) -> ScoreResult:
    """No banned substring may occur (case-insensitive containment)."""
    haystack = pred.lower()
    found = [sub for sub in banned if sub.lower() in haystack]
    return ScoreResult(int(not found), f"found={found}")


# First numeric literal: optional sign, thousands-separated or plain
# decimal, or a bare fraction like ".5".
_NUMBER = re.compile(r"[-+]?(?:\d{1,3}(?:,\d{3})+|\d+)(?:\.\d+)?|[-+]?\.\d+")


def extract_number(text: str) -> float:
    match = _NUMBER.search(text)
    if not match:
        raise NoNumberFoundError(f"no numeric literal in {text!r}")
    return float(match.group(0).replace(",", ""))


def numerical_match(pred: str, gold: float, epsilon: float = DEFAULT_EPSILON) -> ScoreResult:
    """Relative tolerance with an absolute floor: |p - gold| <= eps * max(1, |gold|)."""
    if epsilon < 0:
        raise ValueError(f"epsilon must be >= 0, got {epsilon!r}")
    parsed = extract_number(pred)
    bound = epsilon * max(1.0, abs(gold))
    hit = abs(parsed - gold) <= bound
    return ScoreResult(int(hit), f"parsed={parsed} gold={gold} |diff|={abs(parsed - gold)} bound={bound}")


def _extract_json_object(text: str) -> Any:
    """First well-formed JSON object in the text, even when embedded in prose."""
    decoder = json.JSONDecoder()
    for start in range(len(text)):
        if text[start] != "{":
            continue
        try:
            value, _ = decoder.raw_decode(text, start)
        except json.JSONDecodeError:
            continue
        return value
    raise UnparseablePredictionError(f"no JSON object found in {text!r}")


def _json_fields_match(pred: Any, gold: Any, epsilon: float, path: str) -> Optional[str]:
    """Return the first failing field path, or None when all gold fields match.

    Numbers use the epsilon rule, strings compare case-insensitively
    after trimming, arrays element-wise in order; extra prediction
    fields are ignored.
    """
    if isinstance(gold, dict):
        if not isinstance(pred, dict):
            return path or "<root>"
        for key, gold_value in gold.items():
            child = f"{path}.{key}" if path else str(key)
            if key not in pred:
                return child
            failing = _json_fields_match(pred[key], gold_value, epsilon, child)
            if failing:
                return failing
        return None
    if isinstance(gold, list):
        if not isinstance(pred, list) or len(pred) != len(gold):
            return path or "<root>"
        for i, (p, g) in enumerate(zip(pred, gold)):
            failing = _json_fields_match(p, g, epsilon, f"{path}[{i}]")
            if failing:
                return failing
        return None
    if isinstance(gold, bool) or isinstance(pred, bool):
        return None if pred is gold else (path or "<root>")
    if isinstance(gold, (int, float)) and isinstance(pred, (int, float)):
        hit = abs(pred - gold) <= epsilon * max(1.0, abs(gold))
        return None if hit else (path or "<root>")
    if isinstance(gold, str) and isinstance(pred, str):
        return None if _normalize(pred) == _normalize(gold) else (path or "<root>")
    return None if pred == gold else (path or "<root>")


def json_match(pred: str, gold: Any, epsilon: float = DEFAULT_EPSILON) -> ScoreResult:
    """Every gold field must be present and equal in the predicted object."""
    parsed = _extract_json_object(pred)
    failing = _json_fields_match(parsed, gold, epsilon, "")
    if failing:
        return ScoreResult(0, f"failing path: {failing}")
    return ScoreResult(1, "all gold fields matched")


def grade(spec: ScoringSpec, pred: str) -> ScoreResult:
    """Dispatch to the function named by ``spec`` with its parameters."""
    if spec.function == "exact":
        return exact_match(pred, str(spec.gold))
    if spec.function == "fuzzy":
        return fuzzy_match(pred, str(spec.gold), spec.params.get("threshold", DEFAULT_FUZZY_THRESHOLD))
    if spec.function == "must-include":
        return must_include(pred, spec._substrings("required"))
    if spec.function == "must-exclude":
        return must_exclude(pred, spec._substrings("banned"))
    if spec.function == "json":
        return json_match(pred, spec.gold, spec.params.get("epsilon", DEFAULT_EPSILON))
    if spec.function == "numerical":
        return numerical_match(pred, float(spec.gold), spec.params.get("epsilon", DEFAULT_EPSILON))
    raise UnknownFunctionError(f"unknown scoring function {spec.function!r}")

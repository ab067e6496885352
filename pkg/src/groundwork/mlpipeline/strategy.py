"""Strategy template selection.

``classify_strategy`` applies an ordered keyword rule table over the
task type and data notes; the first matching row wins and unmatched
metadata falls through to GENERAL. Rule table (checked in order):

    autogluon   explicit "autogluon" request in constraints or task type
    vision      image | vision | photo | picture | pixel
    timeseries  forecast | time series | time-series | timeseries | temporal
    nlp         text | nlp | language | sentiment | ner | tweet | review | essay
    tabular     tabular | classification | regression | binary | multiclass
    general     anything else

Template documents live in ``templates/`` (one per strategy); their ML
content is executed by the code-generating backend, never by this
engine.
"""

from __future__ import annotations

from enum import Enum
from importlib import resources

from .metadata import CompetitionMetadata


class StrategyKind(str, Enum):
    TABULAR = "tabular"
    NLP = "nlp"
    VISION = "vision"
    TIMESERIES = "timeseries"
    GENERAL = "general"
    AUTOGLUON = "autogluon-fallback"


_RULES = (
    (StrategyKind.VISION, ("image", "vision", "photo", "picture", "pixel")),
    (StrategyKind.TIMESERIES, ("forecast", "time series", "time-series", "timeseries", "temporal")),
    (StrategyKind.NLP, ("text", "nlp", "language", "sentiment", "ner", "tweet", "review", "essay")),
    (StrategyKind.TABULAR, ("tabular", "classification", "regression", "binary", "multiclass")),
)

_TEMPLATE_FILES = {
    StrategyKind.TABULAR: "tabular.md",
    StrategyKind.NLP: "nlp.md",
    StrategyKind.VISION: "vision.md",
    StrategyKind.TIMESERIES: "timeseries.md",
    StrategyKind.GENERAL: "general.md",
    StrategyKind.AUTOGLUON: "autogluon.md",
}


def classify_strategy(meta: CompetitionMetadata) -> StrategyKind:
    """Map metadata to exactly one strategy kind; deterministic and total.

    The task type is scanned first; only when it matches no rule are the
    data notes consulted, so incidental words in long descriptions do
    not override an explicit task type.
    """
    haystack = " ".join((meta.task_type, meta.data_notes, " ".join(meta.constraints))).lower()
    if "autogluon" in haystack:
        return StrategyKind.AUTOGLUON
    for scope in (meta.task_type.lower(), meta.data_notes.lower()):
        for kind, keywords in _RULES:
            if any(keyword in scope for keyword in keywords):
                return kind
    return StrategyKind.GENERAL


def load_template(kind: StrategyKind) -> str:
    """The prompt document for one strategy."""
    return (
        resources.files("groundwork.mlpipeline")
        .joinpath(f"templates/{_TEMPLATE_FILES[kind]}")
        .read_text(encoding="utf-8")
    )

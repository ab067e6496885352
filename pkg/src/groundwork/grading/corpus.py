"""Golden grading corpus loading.

One JSON record per line:

    {"function": ..., "gold": ..., "params": {...}, "pred": ..., "expected": 0|1}

``function``/``gold``/``params`` form the :class:`ScoringSpec`;
``expected`` is the frozen binary score the spec must reproduce.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterator

from .functions import ScoringSpec


@dataclass(frozen=True)
class CorpusRecord:
    spec: ScoringSpec
    pred: str
    expected: int


def load_corpus(path: Path) -> Iterator[CorpusRecord]:
    with open(path, encoding="utf-8") as handle:
        for line_no, line in enumerate(handle, start=1):
            line = line.strip()
            if not line or line.startswith("#"):
                continue
            data = json.loads(line)
            expected = data["expected"]
            if expected not in (0, 1):
                raise ValueError(f"line {line_no}: expected score must be 0 or 1")
            yield CorpusRecord(
                spec=ScoringSpec.from_dict(data),
                pred=data["pred"],
                expected=expected,
            )

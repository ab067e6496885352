"""Competition metadata extraction and metric direction resolution."""

from __future__ import annotations

import csv
import re
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional, Tuple

# Metric names containing any of these read as "lower is better".
MINIMIZE_METRIC_HINTS = (
    "error", "loss", "rmse", "mse", "mae", "rmsle", "logloss", "deviance",
    "wer", "cer", "mape", "smape", "crps", "distance", "perplexity",
)

DESCRIPTION_FILENAMES = ("description.md", "description.txt", "README.md")


@dataclass
class CompetitionMetadata:
    competition_id: str = ""
    task_type: str = ""
    metric: str = ""
    metric_direction: Optional[str] = None  # "maximize" | "minimize" | None (inferred)
    data_notes: str = ""
    target_column: Optional[str] = None
    constraints: Tuple[str, ...] = ()

    def __post_init__(self) -> None:
        if self.metric_direction not in (None, "maximize", "minimize"):
            raise ValueError(f"metric_direction must be maximize/minimize, got {self.metric_direction!r}")


def resolve_metric_direction(meta: CompetitionMetadata) -> str:
    """Explicit direction when present, else inferred from the metric name.

    Error-like metric names minimize; everything else maximizes.
    """
    if meta.metric_direction:
        return meta.metric_direction
    lowered = meta.metric.lower()
    if any(hint in lowered for hint in MINIMIZE_METRIC_HINTS):
        return "minimize"
    return "maximize"


_KEY_LINE = re.compile(r"^(competition|task|metric|direction|target)\s*:\s*(.+)$", re.IGNORECASE)


def read_workspace_metadata(workspace: Path) -> CompetitionMetadata:
    """Parse metadata from an extracted competition workspace.

    Reads ``key: value`` lines (competition, task, metric, direction,
    target) from the description file; the full description text becomes
    ``data_notes``. A missing target column falls back to the second
    column of ``sample_submission.csv``.
    """
    workspace = Path(workspace)
    text = ""
    for name in DESCRIPTION_FILENAMES:
        candidate = workspace / name
        if candidate.exists():
            text = candidate.read_text(encoding="utf-8")
            break
    fields = {}
    for line in text.splitlines():
        match = _KEY_LINE.match(line.strip())
        if match:
            fields[match.group(1).lower()] = match.group(2).strip()
    target = fields.get("target")
    if not target:
        sample = workspace / "sample_submission.csv"
        if sample.exists():
            with open(sample, newline="", encoding="utf-8") as handle:
                header = next(csv.reader(handle), [])
            if len(header) >= 2:
                target = header[1]
    direction = fields.get("direction", "").lower() or None
    if direction not in (None, "maximize", "minimize"):
        direction = None
    return CompetitionMetadata(
        competition_id=fields.get("competition", workspace.name),
        task_type=fields.get("task", ""),
        metric=fields.get("metric", ""),
        metric_direction=direction,
        data_notes=text,
        target_column=target,
    )

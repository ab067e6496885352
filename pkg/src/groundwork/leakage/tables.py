"""Minimal string-cell table used by the leak checks."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional, Sequence


@dataclass
class Table:
    """Named columns over rows of string cells."""

    columns: List[str]
    rows: List[List[str]] = field(default_factory=list)

    def __post_init__(self) -> None:
        if len(set(self.columns)) != len(self.columns):
            raise ValueError("column names must be unique")
        for i, row in enumerate(self.rows):
            if len(row) != len(self.columns):
                raise ValueError(f"row {i} has {len(row)} cells, expected {len(self.columns)}")

    @classmethod
    def from_csv(cls, path: Path) -> "Table":
        with open(path, newline="", encoding="utf-8") as handle:
            reader = csv.reader(handle)
            try:
                columns = next(reader)
            except StopIteration:
                raise ValueError(f"{path}: empty CSV") from None
            return cls(columns=columns, rows=[row for row in reader if row])

    def column(self, name: str) -> List[str]:
        index = self.columns.index(name)
        return [row[index] for row in self.rows]

    def __len__(self) -> int:
        return len(self.rows)


@dataclass
class TabularDataset:
    """Train/test split under audit."""

    train: Table
    test: Table
    target_column: Optional[str] = None
    time_column: Optional[str] = None

    def __post_init__(self) -> None:
        if self.target_column and self.target_column in self.test.columns:
            raise ValueError(f"target column {self.target_column!r} must be absent from test")

    def shared_columns(self) -> List[str]:
        test_cols = set(self.test.columns)
        return [c for c in self.train.columns if c in test_cols]


_ID_NAME_EXACT = {"id", "index", "key"}


def looks_like_id_column(name: str) -> bool:
    lowered = name.lower()
    return lowered in _ID_NAME_EXACT or lowered.endswith("_id") or name.endswith("Id")


def detect_id_columns(data: TabularDataset) -> List[str]:
    """Shared columns that are id-like by name or unique-valued in train."""
    detected = []
    for name in data.shared_columns():
        if data.target_column and name == data.target_column:
            continue
        values = data.train.column(name)
        if looks_like_id_column(name) or (values and len(set(values)) == len(values)):
            detected.append(name)
    return detected

"""Competition-specific leak hints.

The registry is one JSON file of entries so the exploit policy stays
auditable in a single place; it is loaded at startup (no hot reload).
Schema per entry: ``competition_id``, ``detection_predicate``,
``hint_text``.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from importlib import resources
from pathlib import Path
from typing import List, Optional, Sequence


@dataclass(frozen=True)
class LeakHintEntry:
    competition_id: str
    detection_predicate: str
    hint_text: str


def load_registry(path: Optional[Path] = None) -> List[LeakHintEntry]:
    """Load hint entries from ``path`` or the bundled default registry."""
    if path is not None:
        raw = Path(path).read_text(encoding="utf-8")
    else:
        raw = resources.files("groundwork.leakage").joinpath("data/leak_registry.json").read_text(
            encoding="utf-8"
        )
    entries = [
        LeakHintEntry(
            competition_id=item["competition_id"],
            detection_predicate=item["detection_predicate"],
            hint_text=item["hint_text"],
        )
        for item in json.loads(raw)
    ]
    seen = set()
    for entry in entries:
        key = entry.competition_id.lower()
        if key in seen:
            raise ValueError(f"duplicate registry entry {entry.competition_id!r}")
        seen.add(key)
    return entries


def lookup_hint(competition_id: str, registry: Sequence[LeakHintEntry]) -> Optional[LeakHintEntry]:
    """Exact, case-insensitive competition-id match; None when unregistered."""
    wanted = competition_id.strip().lower()
    for entry in registry:
        if entry.competition_id.lower() == wanted:
            return entry
    return None

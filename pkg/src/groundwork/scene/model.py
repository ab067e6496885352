"""Data model for spatial scene graphs.

Positions are abstract scene units. An optional ``scale`` factor
(units per meter) stored on the graph converts metric radii supplied by
callers; no unit is assumed when the factor is absent.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass, field
from typing import Dict, List, Mapping, Optional, Tuple


class SceneError(Exception):
    """Base class for scene-graph errors."""


class ManifestSyntaxError(SceneError):
    """Manifest document does not conform to the grammar."""


class InvalidPositionError(SceneError):
    """A coordinate is NaN or infinite."""


class UnknownEntityError(SceneError, KeyError):
    """Entity id not present in the graph."""


class NegativeRadiusError(SceneError, ValueError):
    """Radius queries require r >= 0."""


_WS_RUN = re.compile(r"\s+")


def normalize_label(label: str) -> str:
    """Lowercase, trim, collapse internal whitespace.

    Singular/plural forms are deliberately not unified.
    """
    return _WS_RUN.sub(" ", label.strip().lower())


@dataclass(frozen=True)
class SpatialEntity:
    """A located object in the scene."""

    id: str
    label: str
    pos: Tuple[float, float]
    attrs: Mapping[str, str] = field(default_factory=dict)
    zone: Optional[str] = None

    def __post_init__(self) -> None:
        if not self.label:
            raise ValueError("entity label must be non-empty")
        if not all(math.isfinite(c) for c in self.pos):
            raise InvalidPositionError(f"non-finite position {self.pos!r} for {self.id!r}")


@dataclass(frozen=True)
class SpatialRelation:
    """An edge between two entities carrying the computed distance."""

    subject: str
    predicate: str
    object: str
    distance: float

    def __post_init__(self) -> None:
        if self.subject == self.object:
            raise ValueError("relation endpoints must differ")
        if self.distance < 0:
            raise ValueError("relation distance must be non-negative")


@dataclass(frozen=True)
class ManifestEntry:
    """One extracted entity prior to graph construction."""

    label: str
    pos: Tuple[float, float]
    attrs: Mapping[str, str] = field(default_factory=dict)
    zone: Optional[str] = None
    count_hint: Optional[int] = None


@dataclass(frozen=True)
class EntityManifest:
    """Ordered extraction output plus per-label counts from the detector pass."""

    entries: Tuple[ManifestEntry, ...]
    detector_counts: Mapping[str, int] = field(default_factory=dict)

    def __post_init__(self) -> None:
        for label, count in self.detector_counts.items():
            if count < 0:
                raise ValueError(f"negative detector count for {label!r}")


@dataclass(frozen=True)
class SpatialConstraint:
    """A clearance or containment rule evaluated over the graph.

    ``kind`` is one of ``min-distance``, ``max-distance``,
    ``zone-containment``. For the distance kinds ``threshold`` is a
    positive distance in scene units; for zone containment it is ignored
    and ``zone`` names the required zone.
    """

    kind: str
    subject_label: str
    object_label: Optional[str] = None
    threshold: float = 0.0
    zone: Optional[str] = None

    KINDS = ("min-distance", "max-distance", "zone-containment")

    def __post_init__(self) -> None:
        if self.kind not in self.KINDS:
            raise ValueError(f"unknown constraint kind {self.kind!r}")
        if self.kind in ("min-distance", "max-distance") and not self.threshold > 0:
            raise ValueError("distance constraints require threshold > 0")
        if self.kind == "zone-containment" and not self.zone:
            raise ValueError("zone-containment requires a zone name")


@dataclass(frozen=True)
class Violation:
    """A single constraint violation with the measured value."""

    constraint: SpatialConstraint
    subject_id: str
    object_id: Optional[str]
    measured: object  # distance (float) or actual zone (str or None)
    threshold: object  # distance (float) or required zone (str)


@dataclass(frozen=True)
class FactSheet:
    """Canonical textual serialization of a graph.

    ``entity_index`` maps entity id to the 1-based line number of its
    entity line within ``lines``.
    """

    lines: Tuple[str, ...]
    entity_index: Mapping[str, int]

    @property
    def text(self) -> str:
        return "\n".join(self.lines)


class SceneGraph:
    """Immutable spatial graph; all query methods are read-only.

    Construction (via :func:`groundwork.scene.graph.build_graph`) is
    single-threaded; afterwards concurrent unsynchronized queries are safe.
    """

    def __init__(
        self,
        entities: List[SpatialEntity],
        relations: List[SpatialRelation],
        scale: Optional[float] = None,
        diagnostics: Optional[List[str]] = None,
    ) -> None:
        by_id: Dict[str, SpatialEntity] = {}
        for ent in entities:
            if ent.id in by_id:
                raise ValueError(f"duplicate entity id {ent.id!r}")
            by_id[ent.id] = ent
        for rel in relations:
            if rel.subject not in by_id or rel.object not in by_id:
                raise ValueError(f"relation endpoint missing: {rel.subject!r} -> {rel.object!r}")
        self._entities = tuple(entities)
        self._by_id = by_id
        self._relations = tuple(relations)
        self.scale = scale
        self.diagnostics = tuple(diagnostics or ())

    @property
    def entities(self) -> Tuple[SpatialEntity, ...]:
        return self._entities

    @property
    def relations(self) -> Tuple[SpatialRelation, ...]:
        return self._relations

    def entity(self, entity_id: str) -> SpatialEntity:
        try:
            return self._by_id[entity_id]
        except KeyError:
            raise UnknownEntityError(entity_id) from None

    def __contains__(self, entity_id: str) -> bool:
        return entity_id in self._by_id

    def __len__(self) -> int:
        return len(self._entities)

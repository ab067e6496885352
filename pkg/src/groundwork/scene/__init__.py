"""Spatial scene graphs: manifest parsing, construction, deterministic queries."""

from .graph import (
    NEAREST_NEIGHBORS,
    build_graph,
    check_constraints,
    count_by_label,
    distance,
    query_near,
    to_fact_sheet,
)
from .manifest import parse_entity_manifest
from .model import (
    EntityManifest,
    FactSheet,
    InvalidPositionError,
    ManifestEntry,
    ManifestSyntaxError,
    NegativeRadiusError,
    SceneError,
    SceneGraph,
    SpatialConstraint,
    SpatialEntity,
    SpatialRelation,
    UnknownEntityError,
    Violation,
    normalize_label,
)

__all__ = [
    "NEAREST_NEIGHBORS",
    "EntityManifest",
    "FactSheet",
    "InvalidPositionError",
    "ManifestEntry",
    "ManifestSyntaxError",
    "NegativeRadiusError",
    "SceneError",
    "SceneGraph",
    "SpatialConstraint",
    "SpatialEntity",
    "SpatialRelation",
    "UnknownEntityError",
    "Violation",
    "build_graph",
    "check_constraints",
    "count_by_label",
    "distance",
    "normalize_label",
    "parse_entity_manifest",
    "query_near",
    "to_fact_sheet",
]

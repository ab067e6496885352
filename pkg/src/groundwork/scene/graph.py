"""Graph construction and deterministic spatial queries."""

from __future__ import annotations

import math
from collections import Counter
from typing import Dict, List, Optional, Sequence, Tuple

from .model import (
    EntityManifest,
    FactSheet,
    NegativeRadiusError,
    SceneGraph,
    SpatialConstraint,
    SpatialEntity,
    SpatialRelation,
    Violation,
    normalize_label,
)

# Each entity is linked to its NEAREST_NEIGHBORS closest peers with a
# "near" edge; pairs are deduplicated, so degree can exceed this bound.
NEAREST_NEIGHBORS = 3

FACT_SHEET_HEADER = "scene graph"


def _euclidean(a: Tuple[float, float], b: Tuple[float, float]) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def build_graph(manifest: EntityManifest, scale: Optional[float] = None) -> SceneGraph:
    """Materialize a scene graph from a parsed manifest.

    Ids are ``<normalized-label>-<k>`` with ``k`` a 1-based per-label
    counter in first-appearance order. Edges link each entity to its
    :data:`NEAREST_NEIGHBORS` nearest peers (ties broken by id),
    deduplicated as unordered pairs, with predicate ``near``.

    Detector counts that disagree with the built graph are recorded in
    ``graph.diagnostics``; the graph count always wins at query time.
    """
    per_label: Counter = Counter()
    entities: List[SpatialEntity] = []
    for entry in manifest.entries:
        label = normalize_label(entry.label)
        per_label[label] += 1
        entities.append(
            SpatialEntity(
                id=f"{label}-{per_label[label]}",
                label=label,
                pos=entry.pos,
                attrs=dict(entry.attrs),
                zone=entry.zone,
            )
        )

    by_id = {ent.id: ent for ent in entities}
    relations: List[SpatialRelation] = []
    seen_pairs = set()
    for ent in entities:
        others = sorted(
            (other for other in entities if other.id != ent.id),
            key=lambda other: (_euclidean(ent.pos, other.pos), other.id),
        )
        for other in others[:NEAREST_NEIGHBORS]:
            pair = tuple(sorted((ent.id, other.id)))
            if pair in seen_pairs:
                continue
            seen_pairs.add(pair)
            relations.append(
                SpatialRelation(
                    subject=pair[0],
                    predicate="near",
                    object=pair[1],
                    distance=_euclidean(by_id[pair[0]].pos, by_id[pair[1]].pos),
                )
            )

    diagnostics: List[str] = []
    graph_counts = Counter(ent.label for ent in entities)
    for label, detected in sorted(manifest.detector_counts.items()):
        built = graph_counts.get(label, 0)
        if built != detected:
            diagnostics.append(
                f"count mismatch for {label!r}: graph has {built}, detector reported {detected}"
            )
    return SceneGraph(entities, relations, scale=scale, diagnostics=diagnostics)


def distance(graph: SceneGraph, a: str, b: str) -> float:
    """Euclidean distance between two entities, in scene units."""
    return _euclidean(graph.entity(a).pos, graph.entity(b).pos)


def query_near(graph: SceneGraph, entity_id: str, radius: float) -> List[SpatialEntity]:
    """All entities other than ``entity_id`` within ``radius`` (inclusive).

    Sorted ascending by distance; ties broken by id. The boundary is
    inclusive: an entity at exactly ``radius`` is returned.
    """
    if radius < 0:
        raise NegativeRadiusError(f"radius must be >= 0, got {radius}")
    origin = graph.entity(entity_id)
    hits = [
        (d, ent)
        for ent in graph.entities
        if ent.id != entity_id and (d := _euclidean(origin.pos, ent.pos)) <= radius
    ]
    hits.sort(key=lambda pair: (pair[0], pair[1].id))
    return [ent for _, ent in hits]


def count_by_label(graph: SceneGraph, label: str) -> int:
    """Number of entities whose normalized label matches ``label``."""
    wanted = normalize_label(label)
    return sum(1 for ent in graph.entities if ent.label == wanted)


def check_constraints(graph: SceneGraph, constraints: Sequence[SpatialConstraint]) -> List[Violation]:
    """Evaluate constraints and return every violation.

    min-distance violates on pairs strictly below the threshold,
    max-distance strictly above; equality satisfies both. Pairs of
    matching labels are unordered (each checked once). Zone containment
    violates per subject entity whose zone differs from the required one.
    """
    violations: List[Violation] = []
    for constraint in constraints:
        if constraint.kind == "zone-containment":
            wanted = normalize_label(constraint.subject_label)
            for ent in graph.entities:
                if ent.label == wanted and ent.zone != constraint.zone:
                    violations.append(
                        Violation(constraint, ent.id, None, ent.zone, constraint.zone)
                    )
            continue
        subj_label = normalize_label(constraint.subject_label)
        obj_label = normalize_label(constraint.object_label or constraint.subject_label)
        for subj, obj in _label_pairs(graph, subj_label, obj_label):
            measured = _euclidean(subj.pos, obj.pos)
            if constraint.kind == "min-distance" and measured < constraint.threshold:
                violations.append(
                    Violation(constraint, subj.id, obj.id, measured, constraint.threshold)
                )
            elif constraint.kind == "max-distance" and measured > constraint.threshold:
                violations.append(
                    Violation(constraint, subj.id, obj.id, measured, constraint.threshold)
                )
    return violations


def _label_pairs(graph: SceneGraph, subj_label: str, obj_label: str):
    subjects = [ent for ent in graph.entities if ent.label == subj_label]
    objects = [ent for ent in graph.entities if ent.label == obj_label]
    if subj_label == obj_label:
        for i, subj in enumerate(subjects):
            for obj in subjects[i + 1:]:
                yield subj, obj
    else:
        for subj in subjects:
            for obj in objects:
                yield subj, obj


def to_fact_sheet(graph: SceneGraph) -> FactSheet:
    """Render the canonical fact sheet.

    Line order: header; one entity line per entity sorted by id; one
    count line per distinct label sorted by label; one distance line per
    relation sorted by (subject, object). Distances are rendered with one
    decimal place. The output is a pure function of the graph.
    """
    lines: List[str] = [
        f"{FACT_SHEET_HEADER}: {len(graph.entities)} entities, {len(graph.relations)} relations"
    ]
    entity_index: Dict[str, int] = {}
    for ent in sorted(graph.entities, key=lambda e: e.id):
        parts = [f"entity {ent.id}: label={ent.label} pos=({ent.pos[0]}, {ent.pos[1]})"]
        if ent.zone is not None:
            parts.append(f"zone={ent.zone}")
        for key in sorted(ent.attrs):
            parts.append(f"{key}={ent.attrs[key]}")
        lines.append(" ".join(parts))
        entity_index[ent.id] = len(lines)
    for label, count in sorted(Counter(ent.label for ent in graph.entities).items()):
        lines.append(f"count {label}: {count}")
    for rel in sorted(graph.relations, key=lambda r: (r.subject, r.object)):
        lines.append(f"distance {rel.subject} -> {rel.object}: {rel.distance:.1f}")
    return FactSheet(lines=tuple(lines), entity_index=entity_index)

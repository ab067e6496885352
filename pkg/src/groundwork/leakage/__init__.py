"""Train/test leakage auditing: four checks plus the hint registry."""

from .audit import (
    CHECK_ORDER,
    EXPLOIT_SEVERITY_THRESHOLD,
    LeakAuditReport,
    LeakFinding,
    NoSharedColumnsError,
    UnparseableTimestampsError,
    audit_byte_hashes,
    audit_id_overlap,
    audit_row_fingerprints,
    audit_temporal,
    fnv1a64,
    render_preamble,
    row_fingerprint,
    run_audit,
)
from .registry import LeakHintEntry, load_registry, lookup_hint
from .tables import TabularDataset, Table, detect_id_columns, looks_like_id_column

__all__ = [
    "CHECK_ORDER",
    "EXPLOIT_SEVERITY_THRESHOLD",
    "LeakAuditReport",
    "LeakFinding",
    "LeakHintEntry",
    "NoSharedColumnsError",
    "TabularDataset",
    "Table",
    "UnparseableTimestampsError",
    "audit_byte_hashes",
    "audit_id_overlap",
    "audit_row_fingerprints",
    "audit_temporal",
    "detect_id_columns",
    "fnv1a64",
    "load_registry",
    "looks_like_id_column",
    "lookup_hint",
    "render_preamble",
    "row_fingerprint",
    "run_audit",
]

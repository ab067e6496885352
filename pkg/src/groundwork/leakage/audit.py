"""The four train/test leakage checks and the codegen preamble.

Row fingerprints use FNV-1a 64-bit over a canonical serialization
(shared non-target columns in sorted name order, trimmed cells joined
with the unit separator ``\\x1f``). The algorithm is frozen; tests pin
exact digests. File identity uses SHA-256 over raw bytes.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from datetime import datetime
from pathlib import Path
from typing import List, Optional, Sequence, Tuple

from .registry import LeakHintEntry, lookup_hint
from .tables import TabularDataset, detect_id_columns

CHECK_ORDER = ("id-overlap", "row-fingerprint", "temporal", "byte-hash")

# Findings at or above this severity are flagged for exploitation in the
# preamble; configurable via run_audit(exploit_threshold=...).
EXPLOIT_SEVERITY_THRESHOLD = 0.5

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_UNIT_SEP = "\x1f"


class NoSharedColumnsError(ValueError):
    """Train and test share no usable non-target columns."""


class UnparseableTimestampsError(ValueError):
    """The time column could not be parsed as numbers or ISO dates."""


@dataclass(frozen=True)
class LeakFinding:
    check: str
    severity: float
    evidence: str
    exploit_sketch: str = ""

    def __post_init__(self) -> None:
        if not 0 <= self.severity <= 1:
            raise ValueError(f"severity must be in [0, 1], got {self.severity!r}")


@dataclass(frozen=True)
class LeakAuditReport:
    findings: Tuple[LeakFinding, ...]
    matched_hint: Optional[LeakHintEntry]
    preamble: str


def fnv1a64(data: bytes) -> int:
    """FNV-1a, 64-bit; stable across runs and platforms."""
    digest = _FNV_OFFSET
    for byte in data:
        digest ^= byte
        digest = (digest * _FNV_PRIME) & 0xFFFFFFFFFFFFFFFF
    return digest


def row_fingerprint(cells: Sequence[str]) -> int:
    """Fingerprint of one row's cells, already in sorted-column order."""
    return fnv1a64(_UNIT_SEP.join(cell.strip() for cell in cells).encode("utf-8"))


def audit_id_overlap(data: TabularDataset) -> LeakFinding:
    """Severity = |test ids ∩ train ids| / |test ids| on the worst shared id column.

    Missing id columns yield a zero-severity finding, never a failure.
    """
    candidates = detect_id_columns(data)
    if not candidates:
        return LeakFinding("id-overlap", 0.0, "no shared id-like column between train and test")
    best: Tuple[float, str, int, int] = (0.0, candidates[0], 0, 0)
    for name in candidates:
        train_ids = set(data.train.column(name))
        test_ids = set(data.test.column(name))
        overlap = len(test_ids & train_ids)
        severity = overlap / len(test_ids) if test_ids else 0.0
        if severity > best[0]:
            best = (severity, name, overlap, len(test_ids))
    severity, column, overlap, total = best
    return LeakFinding(
        "id-overlap",
        severity,
        f"column {column!r}: {overlap} of {total} test ids appear in train",
        exploit_sketch=(
            f"join test to train on {column!r} and copy the training target "
            "for overlapping rows"
        ) if severity > 0 else "",
    )


def audit_row_fingerprints(data: TabularDataset) -> LeakFinding:
    """Severity = fraction of test rows whose fingerprint occurs in train."""
    shared = sorted(
        name for name in data.shared_columns()
        if name != data.target_column
    )
    if not shared:
        raise NoSharedColumnsError("train and test share no non-target columns")

    def fingerprints(table) -> List[int]:
        indices = [table.columns.index(name) for name in shared]
        return [row_fingerprint([row[i] for i in indices]) for row in table.rows]

    train_prints = set(fingerprints(data.train))
    test_prints = fingerprints(data.test)
    duplicated = sum(1 for print_ in test_prints if print_ in train_prints)
    severity = duplicated / len(test_prints) if test_prints else 0.0
    return LeakFinding(
        "row-fingerprint",
        severity,
        f"{duplicated} of {len(test_prints)} test rows duplicate a train row "
        f"on columns {shared}",
        exploit_sketch=(
            "fingerprint test rows over the shared feature columns and copy "
            "train targets for exact content duplicates"
        ) if severity > 0 else "",
    )


def _parse_timestamps(values: Sequence[str]) -> List[float]:
    try:
        return [float(v) for v in values]
    except ValueError:
        pass
    try:
        return [datetime.fromisoformat(v.strip().replace("Z", "+00:00")).timestamp() for v in values]
    except ValueError:
        raise UnparseableTimestampsError(
            "time column values are neither numeric nor ISO-8601"
        ) from None


def audit_temporal(data: TabularDataset) -> LeakFinding:
    """Severity = fraction of test timestamps inside the train time range (<= max)."""
    if not data.time_column:
        raise ValueError("no time column configured")
    if data.time_column not in data.train.columns or data.time_column not in data.test.columns:
        raise ValueError(f"time column {data.time_column!r} missing from train or test")
    train_times = _parse_timestamps(data.train.column(data.time_column))
    test_times = _parse_timestamps(data.test.column(data.time_column))
    if not train_times or not test_times:
        return LeakFinding("temporal", 0.0, "train or test has no timestamps")
    train_max = max(train_times)
    inside = sum(1 for t in test_times if t <= train_max)
    severity = inside / len(test_times)
    return LeakFinding(
        "temporal",
        severity,
        f"{inside} of {len(test_times)} test timestamps are <= train max; "
        f"train range [{min(train_times)}, {train_max}], "
        f"test range [{min(test_times)}, {max(test_times)}]",
        exploit_sketch=(
            "test rows overlap the training period; nearest-in-time train "
            "targets may transfer directly"
        ) if severity > 0 else "",
    )


def audit_byte_hashes(train_files: Sequence[Path], test_files: Sequence[Path]) -> LeakFinding:
    """Severity = fraction of test files byte-identical to some train file."""
    errors: List[str] = []

    def hash_file(path: Path) -> Optional[str]:
        try:
            return hashlib.sha256(Path(path).read_bytes()).hexdigest()
        except OSError as exc:
            errors.append(f"{path}: {exc}")
            return None

    train_hashes = {h for h in (hash_file(p) for p in train_files) if h}
    test_hashes = [hash_file(p) for p in test_files]
    matched = sum(1 for h in test_hashes if h and h in train_hashes)
    severity = matched / len(test_files) if test_files else 0.0
    evidence = f"{matched} of {len(test_files)} test files are byte-identical to a train file"
    if errors:
        evidence += f"; unreadable: {errors}"
    return LeakFinding(
        "byte-hash",
        severity,
        evidence,
        exploit_sketch=(
            "hash test file bytes, look them up among train files, and copy "
            "the matching labels"
        ) if severity > 0 else "",
    )


_PREAMBLE_INSTRUCTIONS = """\
## Data leakage audit
Before training any model, check the extracted data for train/test leakage
and exploit anything you find:
1. Compare id-like columns between train and test for row-level overlap.
2. Compute row fingerprints (hash of non-target features) to detect content duplication.
3. Check temporal ordering when a timestamp column exists (test rows inside the train range).
4. Hash file bytes for media data to detect identical train/test files.
If a leak covers part of the test set, predict leaked rows directly and fall
back to the trained model for the rest."""


def render_preamble(
    findings: Sequence[LeakFinding],
    hint: Optional[LeakHintEntry],
    exploit_threshold: float = EXPLOIT_SEVERITY_THRESHOLD,
) -> str:
    """Compose the codegen preamble: registered hint first, then the
    generic instructions and findings in fixed check order."""
    sections: List[str] = []
    if hint is not None:
        sections.append(
            f"## Registered leak hint ({hint.competition_id})\n"
            f"Detection: {hint.detection_predicate}\n{hint.hint_text}"
        )
    sections.append(_PREAMBLE_INSTRUCTIONS)
    by_check = {finding.check: finding for finding in findings}
    lines = ["### Audit findings"]
    for check in CHECK_ORDER:
        finding = by_check.get(check)
        if finding is None:
            continue
        flag = "  [EXPLOIT RECOMMENDED]" if finding.severity >= exploit_threshold else ""
        lines.append(f"- {check}: severity {finding.severity:.3f} — {finding.evidence}{flag}")
        if finding.exploit_sketch:
            lines.append(f"  exploit: {finding.exploit_sketch}")
    sections.append("\n".join(lines))
    return "\n\n".join(sections)


def run_audit(
    data: Optional[TabularDataset] = None,
    files: Optional[Tuple[Sequence[Path], Sequence[Path]]] = None,
    competition_id: str = "",
    registry: Sequence[LeakHintEntry] = (),
    exploit_threshold: float = EXPLOIT_SEVERITY_THRESHOLD,
) -> LeakAuditReport:
    """Run every applicable check; never raises.

    Per-check failures downgrade to zero-severity findings with the
    error recorded as evidence, and the preamble is always rendered:
    the audit fires whether or not a hint is registered.
    """
    findings: List[LeakFinding] = []

    def guarded(check: str, runner) -> LeakFinding:
        try:
            return runner()
        except Exception as exc:
            return LeakFinding(check, 0.0, f"check skipped: {exc}")

    if data is not None:
        findings.append(guarded("id-overlap", lambda: audit_id_overlap(data)))
        findings.append(guarded("row-fingerprint", lambda: audit_row_fingerprints(data)))
        if data.time_column:
            findings.append(guarded("temporal", lambda: audit_temporal(data)))
        else:
            findings.append(LeakFinding("temporal", 0.0, "check skipped: no time column"))
    else:
        findings.append(LeakFinding("id-overlap", 0.0, "check skipped: no tabular data"))
        findings.append(LeakFinding("row-fingerprint", 0.0, "check skipped: no tabular data"))
        findings.append(LeakFinding("temporal", 0.0, "check skipped: no tabular data"))

    if files is not None:
        train_files, test_files = files
        findings.append(
            guarded("byte-hash", lambda: audit_byte_hashes(train_files, test_files))
        )
    else:
        findings.append(LeakFinding("byte-hash", 0.0, "check skipped: no file lists"))

    hint = lookup_hint(competition_id, registry) if competition_id else None
    preamble = render_preamble(findings, hint, exploit_threshold)
    return LeakAuditReport(findings=tuple(findings), matched_hint=hint, preamble=preamble)

"""Competition pipeline state machine.

Drives codegen -> sandboxed execution -> self-healing (bounded repair
attempts) -> dummy fallback, then the score-driven refinement loop that
keeps whichever submission scores better under the competition's metric
direction and discards regressions. Every decision is appended to a
JSONL trace in the workspace for audit.
"""

from __future__ import annotations

import csv
import json
import math
import re
import shutil
import time
from collections import Counter
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, List, Mapping, Optional

from ..leakage import TabularDataset, Table, load_registry, run_audit
from ..routing.backends import Backend, BackendRequest
from .diagnostics import ErrorClass, classify_error
from .executors import ExecutionResult, Executor
from .metadata import CompetitionMetadata, resolve_metric_direction
from .strategy import StrategyKind, classify_strategy, load_template

SUBMISSION_NAME = "submission.csv"
KEPT_SUBMISSION_NAME = "kept_submission.csv"
TRACE_NAME = "pipeline_trace.jsonl"

SCORE_LINE = re.compile(
    r"^\s*VALIDATION_SCORE:\s*([-+]?(?:\d+\.?\d*|\.\d+)(?:[eE][-+]?\d+)?)\s*$",
    re.MULTILINE,
)


class WorkspaceError(Exception):
    """The extracted workspace is missing required inputs."""


class NoTestDataError(WorkspaceError):
    """Dummy fallback needs the sample submission and train targets."""


@dataclass
class PipelineLimits:
    execution_timeout: float = 300.0
    heal_iterations: int = 3
    refinement_iterations: int = 2
    refinement_wall_time: float = 900.0

    @property
    def max_attempts(self) -> int:
        return 1 + self.heal_iterations


@dataclass
class AttemptRecord:
    index: int
    script: str
    exit_status: int
    stdout: str
    stderr: str
    wall_time: float
    error_class: Optional[str] = None


@dataclass
class RefinementRecord:
    iteration: int
    summary: str
    score: Optional[float]
    kept: bool


@dataclass
class PipelineState:
    strategy: StrategyKind
    attempts: List[AttemptRecord] = field(default_factory=list)
    best_score: Optional[float] = None
    kept_submission: Optional[Path] = None
    refinements: List[RefinementRecord] = field(default_factory=list)
    wall_clock_used: float = 0.0
    used_fallback: bool = False
    current_script: str = ""


def parse_validation_score(stdout: str) -> Optional[float]:
    """Value of the last well-formed ``VALIDATION_SCORE:`` line, if any.

    Generated scripts may print intermediate scores; the last one wins.
    NaN/inf values are treated as absent.
    """
    matches = SCORE_LINE.findall(stdout)
    if not matches:
        return None
    try:
        value = float(matches[-1])
    except ValueError:
        return None
    return value if math.isfinite(value) else None


def compose_codegen_prompt(meta: CompetitionMetadata, strategy: StrategyKind, preamble: str) -> str:
    return "\n\n".join(
        part for part in (
            preamble,
            load_template(strategy),
            _metadata_block(meta),
            "Print the validation score as `VALIDATION_SCORE: <float>` and write "
            f"`{SUBMISSION_NAME}` to the working directory. Reply with the complete "
            "Python script only.",
        ) if part
    )


def compose_heal_prompt(script: str, error_class: ErrorClass, stderr: str) -> str:
    tail = "\n".join(stderr.splitlines()[-30:])
    return (
        f"The script below failed with a {error_class.value} error. Produce a minimal "
        "patch and reply with the complete corrected script only.\n\n"
        f"stderr (tail):\n{tail}\n\noriginal code:\n{script}"
    )


def compose_refinement_prompt(
    meta: CompetitionMetadata, script: str, score: float, direction: str, preamble: str
) -> str:
    return "\n\n".join(
        part for part in (
            preamble,
            f"The pipeline below scored VALIDATION_SCORE: {score} on metric "
            f"{meta.metric or 'unknown'} (direction: {direction}). Propose exactly one "
            "targeted improvement (stronger model family, K-fold cross validation, "
            "target encoding, feature engineering, stacking, ...) and reply with the "
            "complete improved script only, starting with a one-line comment naming "
            "the change.",
            f"current code:\n{script}",
        ) if part
    )


def _metadata_block(meta: CompetitionMetadata) -> str:
    lines = [
        f"competition: {meta.competition_id}",
        f"task: {meta.task_type}",
        f"metric: {meta.metric} (direction: {resolve_metric_direction(meta)})",
        f"target column: {meta.target_column}",
    ]
    if meta.data_notes:
        lines.append(f"notes:\n{meta.data_notes}")
    return "\n".join(lines)


def audit_preamble_for_workspace(
    meta: CompetitionMetadata, workspace: Path, registry=None
) -> str:
    """Run the leak audit over the workspace CSVs and render the preamble.

    Missing or unreadable CSVs simply downgrade the checks; the preamble
    is rendered regardless.
    """
    workspace = Path(workspace)
    data = None
    try:
        train_path, test_path = workspace / "train.csv", workspace / "test.csv"
        if train_path.exists() and test_path.exists():
            train, test = Table.from_csv(train_path), Table.from_csv(test_path)
            target = meta.target_column if meta.target_column in train.columns else None
            if target in test.columns:
                target = None
            data = TabularDataset(train=train, test=test, target_column=target)
    except Exception:
        data = None
    if registry is None:
        registry = load_registry()
    report = run_audit(data=data, competition_id=meta.competition_id, registry=registry)
    return report.preamble


def _summarize_script(script: str) -> str:
    for line in script.splitlines():
        line = line.strip()
        if line:
            return line[:120]
    return "<empty script>"


class _Trace:
    def __init__(self, path: Optional[Path]) -> None:
        self.path = path

    def emit(self, event: str, **payload) -> None:
        if self.path is None:
            return
        record = {"event": event, **payload}
        with open(self.path, "a", encoding="utf-8") as handle:
            handle.write(json.dumps(record) + "\n")


def run_pipeline(
    meta: CompetitionMetadata,
    workspace: Path,
    backends: Mapping[str, Backend],
    executor: Executor,
    limits: Optional[PipelineLimits] = None,
    preamble: Optional[str] = None,
    clock: Callable[[], float] = time.monotonic,
    on_heal: Optional[Callable[[int, ErrorClass], None]] = None,
) -> PipelineState:
    """Generate, execute, heal, and fall back; returns a terminal state.

    The terminal state always has ``kept_submission`` set: either the
    copied artifact of a successful run or the dummy fallback. At most
    ``1 + heal_iterations`` attempts run; each failed attempt records its
    error class and feeds a minimal-patch request back to the backend.
    """
    workspace = Path(workspace)
    limits = limits or PipelineLimits()
    trace = _Trace(workspace / TRACE_NAME)
    strategy = classify_strategy(meta)
    if preamble is None:
        preamble = audit_preamble_for_workspace(meta, workspace)
    state = PipelineState(strategy=strategy)
    started = clock()

    prompt = compose_codegen_prompt(meta, strategy, preamble)
    script = backends["standard"].complete(
        BackendRequest(tier="standard", prompt=prompt)
    ).answer
    trace.emit("codegen", strategy=strategy.value, prompt_chars=len(prompt))

    submission = workspace / SUBMISSION_NAME
    kept = workspace / KEPT_SUBMISSION_NAME
    for attempt_index in range(1, limits.max_attempts + 1):
        result = executor.run(script, workspace, limits.execution_timeout)
        error_class = _diagnose(result, submission)
        state.attempts.append(
            AttemptRecord(
                index=attempt_index,
                script=script,
                exit_status=result.exit_status,
                stdout=result.stdout,
                stderr=result.stderr,
                wall_time=result.wall_time,
                error_class=None if error_class is None else error_class.value,
            )
        )
        trace.emit(
            "attempt",
            index=attempt_index,
            exit_status=result.exit_status,
            error_class=None if error_class is None else error_class.value,
            wall_time=result.wall_time,
        )
        if error_class is None:
            state.best_score = parse_validation_score(result.stdout)
            shutil.copyfile(submission, kept)
            state.kept_submission = kept
            state.current_script = script
            trace.emit("success", attempt=attempt_index, score=state.best_score)
            break
        if attempt_index < limits.max_attempts:
            if on_heal is not None:
                on_heal(attempt_index, error_class)
            script = backends["standard"].complete(
                BackendRequest(
                    tier="standard",
                    prompt=compose_heal_prompt(script, error_class, result.stderr),
                )
            ).answer
    else:
        state.kept_submission = make_dummy_submission(meta, workspace)
        state.used_fallback = True
        trace.emit("dummy-fallback", path=str(state.kept_submission))

    state.wall_clock_used = clock() - started
    return state


def _diagnose(result: ExecutionResult, submission: Path) -> Optional[ErrorClass]:
    """None on success; otherwise the error class driving the heal prompt."""
    if result.timed_out:
        return ErrorClass.TIMEOUT
    if result.exit_status != 0:
        return classify_error(result.stderr)
    if not submission.exists():
        return ErrorClass.FILE_NOT_FOUND
    return None


def _improves(score: float, best: float, direction: str) -> bool:
    return score > best if direction == "maximize" else score < best


def refine(
    state: PipelineState,
    meta: CompetitionMetadata,
    workspace: Path,
    backends: Mapping[str, Backend],
    executor: Executor,
    limits: Optional[PipelineLimits] = None,
    preamble: str = "",
    clock: Callable[[], float] = time.monotonic,
    on_refine: Optional[Callable[[int], None]] = None,
) -> PipelineState:
    """Score-driven improvement loop with rollback.

    Each iteration asks the strong tier for one targeted improvement,
    re-runs, and keeps the new submission only when it strictly improves
    the score under the metric direction; regressions and scoreless runs
    are recorded and discarded. No iteration starts once the wall clock
    (from this phase's start) reaches ``refinement_wall_time``, and at
    most ``refinement_iterations`` run.
    """
    if state.best_score is None:
        raise ValueError("refinement requires a parsed validation score")
    workspace = Path(workspace)
    limits = limits or PipelineLimits()
    trace = _Trace(workspace / TRACE_NAME)
    direction = resolve_metric_direction(meta)
    submission = workspace / SUBMISSION_NAME
    kept = workspace / KEPT_SUBMISSION_NAME
    phase_start = clock()

    for iteration in range(1, limits.refinement_iterations + 1):
        elapsed = clock() - phase_start
        if elapsed >= limits.refinement_wall_time:
            trace.emit("refinement-halt", iteration=iteration, elapsed=elapsed)
            break
        if on_refine is not None:
            on_refine(iteration)
        refined_script = backends["strong"].complete(
            BackendRequest(
                tier="strong",
                prompt=compose_refinement_prompt(
                    meta, state.current_script, state.best_score, direction, preamble
                ),
            )
        ).answer
        result = executor.run(refined_script, workspace, limits.execution_timeout)
        score = parse_validation_score(result.stdout) if result.succeeded else None
        improved = (
            score is not None
            and submission.exists()
            and _improves(score, state.best_score, direction)
        )
        if improved:
            shutil.copyfile(submission, kept)
            state.best_score = score
            state.current_script = refined_script
            state.kept_submission = kept
        state.refinements.append(
            RefinementRecord(
                iteration=iteration,
                summary=_summarize_script(refined_script),
                score=score,
                kept=improved,
            )
        )
        trace.emit("refinement", iteration=iteration, score=score, kept=improved)
    state.wall_clock_used += clock() - phase_start
    return state


def make_dummy_submission(meta: CompetitionMetadata, workspace: Path) -> Path:
    """Constant-prediction fallback guaranteeing a scoreable file.

    Classification predicts the mode of the train target (ties go to the
    lexicographically smallest label), regression the mean. The output
    matches the sample submission's header and row count.
    """
    workspace = Path(workspace)
    sample_path = workspace / "sample_submission.csv"
    train_path = workspace / "train.csv"
    if not sample_path.exists():
        raise NoTestDataError("sample_submission.csv not found")
    if not train_path.exists():
        raise NoTestDataError("train.csv not found")

    train = Table.from_csv(train_path)
    with open(sample_path, newline="", encoding="utf-8") as handle:
        reader = csv.reader(handle)
        header = next(reader)
        sample_rows = [row for row in reader if row]

    target = meta.target_column
    if target not in train.columns:
        target = header[1] if len(header) >= 2 and header[1] in train.columns else train.columns[-1]
    targets = train.column(target)
    if not targets:
        raise NoTestDataError("train table has no rows")

    constant = _constant_prediction(meta, targets)
    out_path = workspace / SUBMISSION_NAME
    with open(out_path, "w", newline="", encoding="utf-8") as handle:
        writer = csv.writer(handle)
        writer.writerow(header)
        for row in sample_rows:
            writer.writerow([row[0]] + [constant] * (len(header) - 1))
    return out_path


def _constant_prediction(meta: CompetitionMetadata, targets: List[str]) -> str:
    task = meta.task_type.lower()
    if "regress" in task:
        numeric = True
    elif "classif" in task:
        numeric = False
    else:
        numeric = all(_is_float(value) for value in targets)
    if numeric:
        return str(sum(float(v) for v in targets) / len(targets))
    counts = Counter(targets)
    top = max(counts.values())
    return min(label for label, count in counts.items() if count == top)


def _is_float(value: str) -> bool:
    try:
        float(value)
    except ValueError:
        return False
    return True

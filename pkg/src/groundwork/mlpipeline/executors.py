"""Script execution backends.

The pipeline state machine only sees the ``Executor`` protocol:
(script, workspace, timeout) -> exit status, captured output, wall time.
``SubprocessExecutor`` is the real sandbox; ``ScriptedExecutor`` plays
back canned results (optionally writing files into the workspace) so
the loop logic is testable without an interpreter.
"""

from __future__ import annotations

import subprocess
import sys
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Dict, List, Optional, Protocol, Sequence


@dataclass(frozen=True)
class ExecutionResult:
    exit_status: int
    stdout: str
    stderr: str
    wall_time: float
    timed_out: bool = False

    @property
    def succeeded(self) -> bool:
        return self.exit_status == 0 and not self.timed_out


class Executor(Protocol):
    def run(self, script: str, workspace: Path, timeout: float) -> ExecutionResult: ...


class SubprocessExecutor:
    """Runs the script with the current interpreter, cwd = workspace."""

    script_name = "pipeline_script.py"

    def run(self, script: str, workspace: Path, timeout: float) -> ExecutionResult:
        workspace = Path(workspace)
        script_path = workspace / self.script_name
        script_path.write_text(script, encoding="utf-8")
        start = time.monotonic()
        try:
            proc = subprocess.run(
                [sys.executable, str(script_path)],
                cwd=workspace,
                capture_output=True,
                text=True,
                timeout=timeout,
            )
            return ExecutionResult(
                exit_status=proc.returncode,
                stdout=proc.stdout,
                stderr=proc.stderr,
                wall_time=time.monotonic() - start,
            )
        except subprocess.TimeoutExpired as exc:
            return ExecutionResult(
                exit_status=-1,
                stdout=(exc.stdout or b"").decode() if isinstance(exc.stdout, bytes) else (exc.stdout or ""),
                stderr=f"TimeoutExpired: script exceeded {timeout}s",
                wall_time=time.monotonic() - start,
                timed_out=True,
            )


@dataclass
class ScriptedRun:
    """One canned execution: the result plus files it pretends to write."""

    result: ExecutionResult
    files: Dict[str, str] = field(default_factory=dict)


class ScriptedExecutor:
    """Plays back scripted runs in order, repeating the last one.

    When a ``clock`` is supplied (any object with ``advance(seconds)``),
    each run advances it by the run's wall time so tests can simulate
    elapsed time deterministically.
    """

    def __init__(self, runs: Sequence[ScriptedRun], clock: Optional[object] = None) -> None:
        if not runs:
            raise ValueError("scripted executor needs at least one run")
        self._runs = list(runs)
        self._clock = clock
        self.calls: List[str] = []

    def run(self, script: str, workspace: Path, timeout: float) -> ExecutionResult:
        index = min(len(self.calls), len(self._runs) - 1)
        self.calls.append(script)
        scripted = self._runs[index]
        for relpath, content in scripted.files.items():
            target = Path(workspace) / relpath
            target.parent.mkdir(parents=True, exist_ok=True)
            target.write_text(content, encoding="utf-8")
        if self._clock is not None:
            self._clock.advance(scripted.result.wall_time)
        return scripted.result


class FakeClock:
    """Deterministic monotonic clock for simulated-time tests."""

    def __init__(self, start: float = 0.0) -> None:
        self.now = start

    def __call__(self) -> float:
        return self.now

    def advance(self, seconds: float) -> None:
        self.now += seconds

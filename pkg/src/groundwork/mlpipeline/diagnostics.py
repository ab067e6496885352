"""Stderr classification for the self-healing loop.

The pattern table is ordered; the first matching row wins and anything
unmatched is ``other``. Patterns are authored against the standard
CPython/numpy/OS error strings and verified against real tracebacks in
the test suite.
"""

from __future__ import annotations

from enum import Enum
from typing import Tuple


class ErrorClass(str, Enum):
    IMPORT_ERROR = "import-error"
    SHAPE_MISMATCH = "shape-mismatch"
    MEMORY_OVERFLOW = "memory-overflow"
    TIMEOUT = "timeout"
    FILE_NOT_FOUND = "file-not-found"
    OTHER = "other"


# (error class, case-sensitive substrings); first match wins.
PATTERN_TABLE: Tuple[Tuple[ErrorClass, Tuple[str, ...]], ...] = (
    (ErrorClass.IMPORT_ERROR, ("ModuleNotFoundError", "ImportError", "No module named")),
    (ErrorClass.SHAPE_MISMATCH, (
        "could not be broadcast",
        "not aligned",
        "shape mismatch",
        "size mismatch",
        "inconsistent numbers of samples",
        "is invalid for input of size",
    )),
    (ErrorClass.MEMORY_OVERFLOW, ("MemoryError", "Killed", "out of memory", "OOM", "Cannot allocate memory")),
    (ErrorClass.TIMEOUT, ("TimeoutExpired", "timed out", "TimeoutError")),
    (ErrorClass.FILE_NOT_FOUND, ("FileNotFoundError", "No such file or directory")),
)


def classify_error(stderr: str) -> ErrorClass:
    """First matching rule in the ordered pattern table, default other."""
    for error_class, patterns in PATTERN_TABLE:
        if any(pattern in stderr for pattern in patterns):
            return error_class
    return ErrorClass.OTHER

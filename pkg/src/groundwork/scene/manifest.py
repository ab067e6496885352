"""Parser for entity manifest documents.

The manifest is the structured interchange format any vision backend can
emit after entity extraction. Grammar (also in ``docs/formats.md``):

    entities:
      <label> @ (<x>, <y>) [zone=<zone>] [count=<n>] [<key>=<value> ...]
      ...
    counts:
      <label>: <n>
      ...

* Blank lines and ``#`` comments are ignored.
* Section headers are a bare word followed by ``:``; only ``entities``
  and ``counts`` are recognized, anything else rejects the document.
* ``label`` is free text up to the `` @ `` separator; after the closing
  parenthesis come whitespace-separated ``key=value`` attributes.
  ``zone`` and ``count`` are reserved keys; all others land in ``attrs``.
* The ``counts`` section holds per-label totals from the detection pass
  and may be absent.
"""

from __future__ import annotations

import math
import re
from typing import Dict, List, Optional, Tuple

from .model import (
    EntityManifest,
    InvalidPositionError,
    ManifestEntry,
    ManifestSyntaxError,
    normalize_label,
)

_SECTION = re.compile(r"^([A-Za-z][\w-]*):\s*$")
_ENTRY = re.compile(
    r"^(?P<label>.+?)\s+@\s+\(\s*(?P<x>[^,\s()]+)\s*,\s*(?P<y>[^,\s()]+)\s*\)\s*(?P<rest>.*)$"
)
_COUNT = re.compile(r"^(?P<label>.+?):\s*(?P<count>-?\d+)\s*$")


def _parse_coord(token: str, line_no: int) -> float:
    try:
        value = float(token)
    except ValueError:
        raise ManifestSyntaxError(f"line {line_no}: bad coordinate {token!r}") from None
    if not math.isfinite(value):
        raise InvalidPositionError(f"line {line_no}: non-finite coordinate {token!r}")
    return value


def _parse_entry(line: str, line_no: int) -> ManifestEntry:
    match = _ENTRY.match(line)
    if not match:
        raise ManifestSyntaxError(f"line {line_no}: expected '<label> @ (x, y) ...', got {line!r}")
    pos = (_parse_coord(match["x"], line_no), _parse_coord(match["y"], line_no))
    attrs: Dict[str, str] = {}
    zone: Optional[str] = None
    count_hint: Optional[int] = None
    for token in match["rest"].split():
        if "=" not in token:
            raise ManifestSyntaxError(f"line {line_no}: expected key=value, got {token!r}")
        key, value = token.split("=", 1)
        if key == "zone":
            zone = value
        elif key == "count":
            try:
                count_hint = int(value)
            except ValueError:
                raise ManifestSyntaxError(f"line {line_no}: bad count {value!r}") from None
        else:
            attrs[key] = value
    return ManifestEntry(label=match["label"], pos=pos, attrs=attrs, zone=zone, count_hint=count_hint)


def parse_entity_manifest(text: str) -> EntityManifest:
    """Parse a manifest document into entries plus detector counts.

    Raises :class:`ManifestSyntaxError` for grammar violations (including
    unknown sections) and :class:`InvalidPositionError` for NaN or
    infinite coordinates.
    """
    entries: List[ManifestEntry] = []
    counts: Dict[str, int] = {}
    section: Optional[str] = None
    for line_no, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        header = _SECTION.match(line)
        if header:
            name = header.group(1).lower()
            if name not in ("entities", "counts"):
                raise ManifestSyntaxError(f"line {line_no}: unknown section {name!r}")
            section = name
            continue
        if section == "entities":
            entries.append(_parse_entry(line, line_no))
        elif section == "counts":
            match = _COUNT.match(line)
            if not match:
                raise ManifestSyntaxError(f"line {line_no}: expected 'label: n', got {line!r}")
            count = int(match["count"])
            if count < 0:
                raise ManifestSyntaxError(f"line {line_no}: negative count {count}")
            counts[normalize_label(match["label"])] = count
        else:
            raise ManifestSyntaxError(f"line {line_no}: content before any section: {line!r}")
    return EntityManifest(entries=tuple(entries), detector_counts=counts)

"""Deterministic CSV/JSON report emission.

Reports must be byte-identical across runs with the same config and seed.
The only run-dependent value — the wall-clock timestamp — is isolated in a
single header line (`# timestamp: ...` in CSV, a dedicated `"timestamp"`
line in indented JSON) so consumers can compare everything below it.
"""

from __future__ import annotations

import csv
import io
import json
import os
from datetime import datetime, timezone
from fractions import Fraction
from typing import Dict, List, Optional, Sequence

SCHEMA_VERSION = "1"


def _timestamp() -> str:
    return datetime.now(timezone.utc).isoformat(timespec="seconds")


def format_cell(value) -> str:
    """Canonical, run-independent cell formatting."""
    if isinstance(value, float):
        return repr(value)
    if isinstance(value, Fraction):
        return str(value)
    if isinstance(value, bool):
        return "true" if value else "false"
    return str(value)


def write_csv(
    path: str, header: Sequence[str], rows: Sequence[Sequence], timestamp: Optional[str] = None
) -> None:
    """RFC-4180-style CSV with an isolated timestamp header line."""
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n", quoting=csv.QUOTE_MINIMAL)
    writer.writerow(list(header))
    for row in rows:
        writer.writerow([format_cell(v) for v in row])
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write("# timestamp: %s\n" % (timestamp or _timestamp()))
        fh.write("# schema-version: %s\n" % SCHEMA_VERSION)
        fh.write(buf.getvalue())


def write_json(path: str, payload: Dict, timestamp: Optional[str] = None) -> None:
    """Indented JSON whose timestamp occupies its own line."""
    body = {"timestamp": timestamp or _timestamp(), "schema_version": SCHEMA_VERSION}
    body.update(payload)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(body, fh, indent=2, sort_keys=False)
        fh.write("\n")


def strip_timestamp(path: str) -> List[str]:
    """Report lines with the timestamp header removed, for comparisons."""
    with open(path, encoding="utf-8") as fh:
        return [
            line
            for line in fh
            if not line.startswith("# timestamp:") and '"timestamp":' not in line
        ]


def ensure_outdir(path: str) -> str:
    os.makedirs(path, exist_ok=True)
    return path

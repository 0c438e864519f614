"""Machine-readable command output (JSON documents and flat CSV tables)."""

from __future__ import annotations

import csv
import io
import json
import sys
from dataclasses import dataclass, field

__all__ = ["Report", "emit_report", "render_report"]


@dataclass
class Report:
    """A command result.

    ``payload`` is the JSON document.  ``records`` is the same content
    flattened to one dict per row for CSV output.  Wall-clock measurements
    live under ``payload["timing"]`` only, so the rest of the document is
    reproducible byte for byte.
    """

    payload: dict
    records: list = field(default_factory=list)


def render_report(report: Report, fmt: str = "json") -> str:
    if fmt == "json":
        return json.dumps(report.payload, indent=2, allow_nan=False) + "\n"
    if fmt == "csv":
        buf = io.StringIO()
        if report.records:
            writer = csv.DictWriter(buf, fieldnames=list(report.records[0]), lineterminator="\n")
            writer.writeheader()
            writer.writerows(report.records)
        return buf.getvalue()
    raise ValueError(f"unknown output format {fmt!r}")


def emit_report(report: Report, fmt: str = "json", path=None) -> None:
    """Write ``report`` as UTF-8 to ``path``, or to standard output when ``path`` is None."""
    text = render_report(report, fmt)
    if path is None or str(path) == "-":
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(text)

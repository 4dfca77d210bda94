"""CSV and JSON writers with fixed, reproducible number formatting."""

import csv
import io
import json
import logging
import sys
from collections.abc import Iterable, Mapping, Sequence
from pathlib import Path
from typing import Any

logger = logging.getLogger(__name__)


def format_float(x: float) -> str:
    """Shortest-safe text for a float: 17 significant digits, '.' decimal."""
    return format(float(x), ".17g")


def complex_to_json(z: complex) -> dict[str, float]:
    z = complex(z)
    return {"re": z.real, "im": z.imag}


def render_csv(
    header: Sequence[str],
    rows: Iterable[Sequence[float]],
    footer: Mapping[str, str] | None = None,
) -> str:
    """CSV text with a header row and '#'-prefixed footer lines."""
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([format_float(v) for v in row])
    for key, value in (footer or {}).items():
        buffer.write(f"# {key}: {value}\n")
    return buffer.getvalue()


def render_json(data: Any) -> str:
    return json.dumps(data, indent=2, sort_keys=True) + "\n"


def emit(text: str, out: Path | None) -> None:
    """Write text to out, or to stdout when out is None."""
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    out.parent.mkdir(parents=True, exist_ok=True)
    out.write_text(text)
    logger.info(f"Wrote {out}")

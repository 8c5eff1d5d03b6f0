from __future__ import annotations

import csv
import io
import json
from collections.abc import Iterable, Sequence
from pathlib import Path

from metronoids.models.contracts import JSONDict
from metronoids.normalizers.numeric import clean_numbers, format_number

METADATA_PREFIX = "# run "


def _render_cell(value: object) -> str:
    if value is None:
        return ""
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (int, float)):
        return str(value) if isinstance(value, int) else format_number(value)
    try:
        return format_number(float(value))  # numpy scalars
    except (TypeError, ValueError):
        return str(value)


def render_csv(header: Sequence[str], rows: Iterable[Sequence[object]], metadata: JSONDict | None = None) -> str:
    buffer = io.StringIO()
    if metadata is not None:
        buffer.write(METADATA_PREFIX + json.dumps(clean_numbers(metadata), sort_keys=True, separators=(",", ":")) + "\n")
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    for row in rows:
        writer.writerow([_render_cell(v) for v in row])
    return buffer.getvalue()


def write_csv(path: Path, header: Sequence[str], rows: Iterable[Sequence[object]], metadata: JSONDict | None = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render_csv(header, rows, metadata), encoding="utf-8")
    return path


def read_metadata(path: Path) -> JSONDict | None:
    first = Path(path).read_text(encoding="utf-8").split("\n", 1)[0]
    if not first.startswith(METADATA_PREFIX):
        return None
    return json.loads(first[len(METADATA_PREFIX):])

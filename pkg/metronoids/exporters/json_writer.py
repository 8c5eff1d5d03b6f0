from __future__ import annotations

import json
from pathlib import Path
from typing import Any

from metronoids.models.contracts import Certificate, JSONDict
from metronoids.normalizers.numeric import clean_numbers, format_number


INDENT = "  "


def _encode(value: Any, depth: int) -> str:
    if isinstance(value, float):
        return format_number(value)
    if isinstance(value, dict):
        if not value:
            return "{}"
        pad = INDENT * (depth + 1)
        items = [f"{pad}{json.dumps(key)}: {_encode(value[key], depth + 1)}" for key in sorted(value)]
        return "{\n" + ",\n".join(items) + "\n" + INDENT * depth + "}"
    if isinstance(value, list):
        if not value:
            return "[]"
        pad = INDENT * (depth + 1)
        return "[\n" + ",\n".join(pad + _encode(item, depth + 1) for item in value) + "\n" + INDENT * depth + "]"
    return json.dumps(value)


def dumps(payload: Any) -> str:
    """Canonical JSON: sorted keys, two-space indent, floats as '.17g', no NaN or inf."""
    return _encode(clean_numbers(payload), 0) + "\n"


def write_json(path: Path, payload: JSONDict, metadata: JSONDict | None = None) -> Path:
    document = dict(payload)
    if metadata is not None:
        document["metadata"] = metadata
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(dumps(document), encoding="utf-8")
    return path


def certificate_to_dict(cert: Certificate) -> JSONDict:
    return {
        "body": cert.body.to_dict(),
        "measure": cert.measure.to_dict(),
        "cost": cert.cost,
        "kind": cert.kind,
        "net_size": cert.verified.net_size,
        "worst_slack": cert.verified.worst_slack,
        "validation_status": cert.verified.status,
    }

"""Read body, measure and sampler documents, validated against the versioned schemas."""

from __future__ import annotations

import json
from pathlib import Path
from typing import Any

import numpy as np

from metronoids.errors import MeasureParseError
from metronoids.models.contracts import ConvexBody, DiscreteMeasure, SamplerSpec
from metronoids.validators.schema_validator import SchemaValidator

_validator = SchemaValidator()


def load_json(path: Path) -> Any:
    text = Path(path).read_text(encoding="utf-8")
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise MeasureParseError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from exc


def _require_valid(payload: Any, schema_name: str, source: str) -> None:
    errors = _validator.validate(payload, schema_name)
    if errors:
        raise MeasureParseError(f"{source}: " + "; ".join(errors))


def _check_dims(rows: list[list[float]], dim: int, source: str, what: str) -> None:
    for idx, row in enumerate(rows):
        if len(row) != dim:
            raise MeasureParseError(f"{source}: {what}[{idx}] has {len(row)} coordinates, expected dim={dim}")


def body_from_dict(payload: Any, source: str = "<body>") -> ConvexBody:
    _require_valid(payload, "body.schema.json", source)
    dim = payload["dim"]
    if "points" in payload:
        _check_dims(payload["points"], dim, source, "/points")
        return ConvexBody(payload["type"], dim, points=np.array(payload["points"], dtype=float))
    return ConvexBody(payload["type"], dim, radius=payload["radius"])


def measure_from_dict(payload: Any, source: str = "<measure>") -> DiscreteMeasure:
    _require_valid(payload, "measure.schema.json", source)
    dim = payload["dim"]
    atoms = payload["atoms"]
    _check_dims([a["x"] for a in atoms], dim, source, "/atoms/x")
    if not atoms:
        return DiscreteMeasure.empty(dim)
    return DiscreteMeasure(
        np.array([a["x"] for a in atoms], dtype=float).reshape(-1, dim),
        np.array([a["w"] for a in atoms], dtype=float),
    )


def sampler_from_dict(payload: Any, source: str = "<sampler>") -> SamplerSpec:
    _require_valid(payload, "sampler.schema.json", source)
    fields = {k: v for k, v in payload.items() if k != "body"}
    if "body" in payload:
        fields["body"] = body_from_dict(payload["body"], source)
    return SamplerSpec(**fields)


def load_body(path: Path) -> ConvexBody:
    return body_from_dict(load_json(path), str(path))


def load_measure(path: Path) -> DiscreteMeasure:
    return measure_from_dict(load_json(path), str(path))


def load_sampler(path: Path) -> SamplerSpec:
    return sampler_from_dict(load_json(path), str(path))

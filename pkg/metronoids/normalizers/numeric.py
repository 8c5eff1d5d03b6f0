from __future__ import annotations

import math
import re
from dataclasses import dataclass

import numpy as np

from metronoids.errors import PreconditionError

SEPARATOR_RE = re.compile(r"[,\s;]+")


@dataclass(frozen=True)
class ParsedVector:
    raw: str
    values: tuple[float, ...] | None
    parse_status: str
    parse_warnings: list[str]


def format_number(value: float) -> str:
    """17 significant digits, '.' decimal separator, no locale."""
    number = float(value)
    if not math.isfinite(number):
        raise PreconditionError(f"refusing to write non-finite number {number!r}")
    return format(number, ".17g")


def clean_numbers(payload: object) -> object:
    """Recursively turn numpy scalars/arrays into plain floats and lists, rejecting NaN and inf."""
    if isinstance(payload, dict):
        return {str(k): clean_numbers(v) for k, v in payload.items()}
    if isinstance(payload, (list, tuple)):
        return [clean_numbers(v) for v in payload]
    if isinstance(payload, np.ndarray):
        return clean_numbers(payload.tolist())
    if isinstance(payload, (bool, np.bool_)):
        return bool(payload)
    if isinstance(payload, (int, np.integer)):
        return int(payload)
    if isinstance(payload, (float, np.floating)):
        number = float(payload)
        if not math.isfinite(number):
            raise PreconditionError(f"refusing to write non-finite number {number!r}")
        return number
    return payload


def parse_vector(raw: str) -> ParsedVector:
    text = raw.strip().strip("[]()")
    if text == "":
        return ParsedVector(raw=raw, values=None, parse_status="blank", parse_warnings=[])
    warnings: list[str] = []
    if "," in text and " " in text:
        warnings.append("MIXED_SEPARATORS")
    try:
        values = tuple(float(tok) for tok in SEPARATOR_RE.split(text) if tok)
    except ValueError:
        return ParsedVector(raw=raw, values=None, parse_status="invalid", parse_warnings=warnings + ["UNPARSABLE"])
    if not all(math.isfinite(v) for v in values):
        return ParsedVector(raw=raw, values=None, parse_status="invalid", parse_warnings=warnings + ["NON_FINITE"])
    return ParsedVector(raw=raw, values=values, parse_status="parsed", parse_warnings=warnings)


def parse_direction(raw: str, dim: int | None = None) -> np.ndarray:
    """A nonzero direction from '1,0' or '1 0', normalized to unit length."""
    parsed = parse_vector(raw)
    if parsed.values is None:
        raise PreconditionError(f"cannot read a direction from {raw!r}")
    vec = np.array(parsed.values)
    if dim is not None and vec.size != dim:
        raise PreconditionError(f"direction {raw!r} has {vec.size} coordinates, expected {dim}")
    norm = float(np.linalg.norm(vec))
    if norm == 0.0:
        raise PreconditionError("direction must be nonzero")
    return vec / norm


def parse_coordinates(raw: str) -> list[int]:
    parsed = parse_vector(raw)
    if parsed.values is None or any(v != int(v) for v in parsed.values):
        raise PreconditionError(f"cannot read coordinate indices from {raw!r}")
    return [int(v) for v in parsed.values]

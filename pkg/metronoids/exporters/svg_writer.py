from __future__ import annotations

import json
from pathlib import Path
from xml.sax.saxutils import escape

import numpy as np

from metronoids.engine.vertices import vertices
from metronoids.errors import DimensionMismatchError
from metronoids.geometry.bodies import zonotope_vertices_2d
from metronoids.geometry.polygons import polygon_hull
from metronoids.models.contracts import DiscreteMeasure, JSONDict, Metronoid
from metronoids.normalizers.numeric import clean_numbers, format_number

LAYER_COLORS = (("hull", "red"), ("zonotope", "blue"), ("metronoid", "purple"))
MARGIN = 0.1


def figure_layers(mu: DiscreteMeasure) -> dict[str, np.ndarray]:
    """Atom hull, one-sided zonotope of the weighted atoms, and the metronoid polygon."""
    if mu.dim != 2:
        raise DimensionMismatchError(f"figures are drawn in the plane, measure lives in R^{mu.dim}")
    return {
        "hull": polygon_hull(mu.positions),
        "zonotope": zonotope_vertices_2d(mu.weights[:, None] * mu.positions, symmetric=False),
        "metronoid": vertices(Metronoid(mu)),
    }


def _fmt(value: float) -> str:
    return format_number(round(float(value), 12) + 0.0)


def _points_attr(poly: np.ndarray) -> str:
    return " ".join(f"{_fmt(x)},{_fmt(-y)}" for x, y in poly)


def _render_shape(poly: np.ndarray, color: str, dot: float) -> str:
    if len(poly) == 1:
        x, y = poly[0]
        return f'<circle cx="{_fmt(x)}" cy="{_fmt(-y)}" r="{_fmt(dot)}" fill="{color}"/>'
    if len(poly) == 2:
        return f'<polyline points="{_points_attr(poly)}" fill="none" stroke="{color}" stroke-width="{_fmt(dot / 2)}"/>'
    return (
        f'<polygon points="{_points_attr(poly)}" fill="{color}" fill-opacity="0.25" '
        f'stroke="{color}" stroke-width="{_fmt(dot / 2)}"/>'
    )


def render_svg(layers: dict[str, np.ndarray], metadata: JSONDict | None = None) -> str:
    everything = np.vstack(list(layers.values()))
    lo, hi = everything.min(axis=0), everything.max(axis=0)
    span = float(max((hi - lo).max(), 1e-9))
    pad = MARGIN * span
    x0, y0 = lo[0] - pad, -hi[1] - pad
    width, height = (hi[0] - lo[0]) + 2 * pad, (hi[1] - lo[1]) + 2 * pad
    dot = 0.01 * span
    parts = [
        '<?xml version="1.0" encoding="UTF-8" standalone="no"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" viewBox="{_fmt(x0)} {_fmt(y0)} {_fmt(width)} {_fmt(height)}">',
    ]
    if metadata is not None:
        parts.append(f"<metadata>{escape(json.dumps(clean_numbers(metadata), sort_keys=True))}</metadata>")
    for name, color in LAYER_COLORS:
        parts.append(f'<g id="{name}">{_render_shape(layers[name], color, dot)}</g>')
    parts.append("</svg>")
    return "\n".join(parts) + "\n"


def write_figure(path: Path, mu: DiscreteMeasure, metadata: JSONDict | None = None) -> Path:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(render_svg(figure_layers(mu), metadata), encoding="utf-8")
    return path

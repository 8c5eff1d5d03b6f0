from __future__ import annotations

import json
from pathlib import Path

import numpy as np
import pytest

from metronoids.errors import DimensionMismatchError, MeasureParseError
from metronoids.exporters.csv_writer import read_metadata, render_csv, write_csv
from metronoids.exporters.json_writer import certificate_to_dict, dumps, write_json
from metronoids.exporters.svg_writer import figure_layers, render_svg, write_figure
from metronoids.loaders.files import load_body, load_measure, load_sampler, measure_from_dict
from metronoids.models.contracts import DiscreteMeasure
from metronoids.validators.schema_validator import SchemaValidator
from metronoids.vertex_index.certificates import cross_polytope_certificate

METADATA = {"version": "0.1.0", "command": "tables", "seed": 7, "parameters": {}, "run_id": "00000000deadbeef"}


def _write(path: Path, payload: object) -> Path:
    path.write_text(json.dumps(payload), encoding="utf-8")
    return path


def test_load_body_and_measure(tmp_path: Path) -> None:
    body = load_body(_write(tmp_path / "k.json", {"type": "vpolytope", "dim": 2, "points": [[1, 0], [0, 1], [-1, -1]]}))
    assert body.kind == "vpolytope"
    assert body.points.shape == (3, 2)
    mu = load_measure(_write(tmp_path / "mu.json", {"dim": 2, "atoms": [{"x": [1, 2], "w": 0.5}, {"x": [0, 0], "w": 1}]}))
    assert mu.weights.tolist() == [0.5, 1.0]
    empty = measure_from_dict({"dim": 3, "atoms": []})
    assert len(empty) == 0 and empty.dim == 3


def test_load_sampler_builds_the_body(tmp_path: Path) -> None:
    payload = {"variant": "body", "dim": 2, "count": 50, "seed": 3, "body": {"type": "cube", "dim": 2, "radius": 1}, "scale": 2}
    spec = load_sampler(_write(tmp_path / "s.json", payload))
    assert spec.body.kind == "cube"
    assert spec.density_factor == pytest.approx(np.exp(2.0))


def test_loader_errors_point_at_the_problem(tmp_path: Path) -> None:
    broken = tmp_path / "broken.json"
    broken.write_text('{"dim": 2,\n "atoms": [}', encoding="utf-8")
    with pytest.raises(MeasureParseError, match="line 2"):
        load_measure(broken)
    with pytest.raises(MeasureParseError, match="/atoms/0/w"):
        measure_from_dict({"dim": 1, "atoms": [{"x": [1], "w": -1}]})
    with pytest.raises(MeasureParseError, match="expected dim=2"):
        measure_from_dict({"dim": 2, "atoms": [{"x": [1, 2, 3], "w": 1}]})


def test_json_writer_is_canonical(tmp_path: Path) -> None:
    text = dumps({"b": np.float64(0.1), "a": [np.int32(1)]})
    assert text.index('"a"') < text.index('"b"')
    assert '"b": 0.10000000000000001' in text
    assert json.loads(text) == {"a": [1], "b": 0.1}
    assert dumps({"empty": [], "flag": True, "x": 2.5}) == '{\n  "empty": [],\n  "flag": true,\n  "x": 2.5\n}\n'
    path = write_json(tmp_path / "out" / "cert.json", certificate_to_dict(cross_polytope_certificate(2)), METADATA)
    document = json.loads(path.read_text(encoding="utf-8"))
    assert document["cost"] == pytest.approx(4.0)
    assert document["validation_status"] == "PASSED"
    assert SchemaValidator().validate(document, "certificate.schema.json") == []


def test_csv_writer_metadata_line(tmp_path: Path) -> None:
    text = render_csv(("n", "value", "ok"), [[2, 0.1, True], [3, np.float64(1.0), None]], METADATA)
    lines = text.splitlines()
    assert lines[0].startswith("# run {")
    assert lines[1] == "n,value,ok"
    assert lines[2] == "2,0.10000000000000001,true"
    assert lines[3] == "3,1,"
    path = write_csv(tmp_path / "t.csv", ("n",), [[1]], METADATA)
    assert read_metadata(path) == METADATA
    assert read_metadata(write_csv(tmp_path / "bare.csv", ("n",), [[1]])) is None


def test_svg_figure_layers(tmp_path: Path) -> None:
    mu = DiscreteMeasure([[1, 0], [-1, 0], [0, 1], [0, -1]], [0.5, 0.5, 0.5, 0.5])
    layers = figure_layers(mu)
    assert set(layers) == {"hull", "zonotope", "metronoid"}
    assert len(layers["hull"]) == 4
    svg = render_svg(layers, METADATA)
    assert svg.startswith('<?xml version="1.0"')
    for layer in ('id="hull"', 'id="zonotope"', 'id="metronoid"', "<metadata>"):
        assert layer in svg
    path = write_figure(tmp_path / "fig" / "m.svg", mu, METADATA)
    assert path.read_text(encoding="utf-8") == svg
    with pytest.raises(DimensionMismatchError):
        figure_layers(DiscreteMeasure([[1, 0, 0]], [1.0]))

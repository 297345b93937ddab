import json

import numpy as np
import pytest

from convexlab.bodies import (AngleGrid, FourierBody, Polygon, SupportVector,
                              disk, square_body, support_values)
from convexlab.fileio import (CSV_COLUMNS, flow_lines, manifest_path,
                              read_body, read_manifest, read_records,
                              write_body, write_manifest, write_records)
from convexlab.steiner import symmetrization_flow
from convexlab.sweep import DeficitRecord


def test_polygon_round_trip(tmp_path):
    path = tmp_path / "tri.json"
    tri = Polygon(np.array([[0.1, -0.2], [1.3, 0.05], [0.2, 0.9]]),
                  label="tri")
    write_body(path, tri)
    back = read_body(path)
    assert isinstance(back, Polygon)
    assert back.label == "tri"
    np.testing.assert_array_equal(back.vertices, tri.vertices)


def test_fourier_round_trip_exact(tmp_path):
    path = tmp_path / "mode.json"
    body = FourierBody(1.0 + 1e-16, np.array([0.0, 0.0, 0.0, 1 / 30]),
                       np.array([0.0, 1e-9]), label="m4")
    write_body(path, body)
    back = read_body(path)
    assert isinstance(back, FourierBody)
    # repr-level JSON floats survive the round trip bit for bit
    assert back.a0 == body.a0
    np.testing.assert_array_equal(back.cos, body.cos)
    np.testing.assert_array_equal(back.sin, body.sin)


def test_support_vector_round_trip(tmp_path):
    grid = AngleGrid(64)
    vec = SupportVector(grid, support_values(square_body(), grid),
                        label="sq64")
    path = tmp_path / "sq.json"
    write_body(path, vec)
    back = read_body(path)
    assert isinstance(back, SupportVector)
    assert back.grid.n == 64
    np.testing.assert_array_equal(back.values, vec.values)


def test_unknown_kind_rejected(tmp_path):
    path = tmp_path / "bad.json"
    path.write_text(json.dumps({"kind": "mesh", "label": "x"}))
    with pytest.raises(ValueError, match="unknown body kind"):
        read_body(path)


def test_records_round_trip(tmp_path):
    records = [
        DeficitRecord("a-000", 1e-4, 2e-3, 9.8696, 1e-13, 0.002),
        DeficitRecord("a-001", 0.4 / 3, 0.1 + 1e-16, 8.0, 0.0, 0.02),
    ]
    path = tmp_path / "run.csv"
    write_records(path, records)
    text = path.read_text()
    assert text.splitlines()[0] == ",".join(CSV_COLUMNS)
    assert read_records(path) == records


def test_records_bytes_deterministic(tmp_path):
    records = [DeficitRecord("a-000", 0.1, 0.2, 9.0, 0.0, 1.0)]
    first, second = tmp_path / "a.csv", tmp_path / "b.csv"
    write_records(first, records)
    write_records(second, records)
    assert first.read_bytes() == second.read_bytes()


def test_manifest_beside_csv(tmp_path):
    csv_path = tmp_path / "run.csv"
    assert manifest_path(csv_path) == tmp_path / "run.manifest.json"
    assert read_manifest(csv_path) is None
    written = write_manifest(csv_path, {"seed": 7, "grid": 512})
    assert written == manifest_path(csv_path)
    doc = read_manifest(csv_path)
    assert doc["seed"] == 7
    assert doc["grid"] == 512
    assert set(doc["versions"]) == {"convexlab", "numpy", "scipy", "python"}
    assert "timestamp" in doc


def test_manifest_stable_apart_from_timestamp(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    write_manifest(a, {"seed": 7})
    write_manifest(b, {"seed": 7})
    da, db = read_manifest(a), read_manifest(b)
    da.pop("timestamp")
    db.pop("timestamp")
    assert da == db


def test_flow_lines_format(grid):
    hist = symmetrization_flow(disk(), [0.0, np.pi / 2], steps=2, grid=grid)
    lines = flow_lines(hist)
    assert lines[0] == "step,axis,volume_product,asymmetry"
    assert len(lines) == 3
    step, axis, product, defect = lines[1].split(",")
    assert step == "0"
    assert float(axis) == 0.0
    # the flow works on inscribed polygons, so the product is pi^2 - O(n^-2)
    assert float(product) == pytest.approx(np.pi**2, rel=1e-4)
    assert float(defect) == 0.0

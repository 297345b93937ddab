"""Flat-file interchange: body JSON, sweep CSV plus run manifest.

Bodies are single JSON documents keyed by ``kind``:

    {"kind": "polygon", "label": "tri", "vertices": [[0,0], [1,0], [0,1]]}
    {"kind": "fourier", "a0": 1.0, "cos": [0,0,0,0.01], "sin": []}
    {"kind": "support", "values": [h_0, ..., h_{n-1}]}

Sweep results go to CSV with a fixed column order, and every CSV gets a
JSON manifest beside it recording the configuration, seeds, and library
versions. Apart from the manifest timestamp, identical runs produce
byte-identical files.
"""

from __future__ import annotations

import csv
import datetime
import io
import json
import platform
from pathlib import Path

import numpy as np
import scipy

from . import __version__
from .bodies import AngleGrid, Body, FourierBody, Polygon, SupportVector
from .steiner import FlowHistory
from .sweep import DeficitRecord

CSV_COLUMNS = ("body_id", "epsilon", "delta", "volume_product",
               "bm_spread", "family_param")


def write_body(path, body: Body) -> None:
    doc: dict = {"label": body.label}
    if isinstance(body, Polygon):
        doc["kind"] = "polygon"
        doc["vertices"] = body.vertices.tolist()
    elif isinstance(body, FourierBody):
        doc["kind"] = "fourier"
        doc["a0"] = body.a0
        doc["cos"] = body.cos.tolist()
        doc["sin"] = body.sin.tolist()
    elif isinstance(body, SupportVector):
        doc["kind"] = "support"
        doc["values"] = body.values.tolist()
    else:
        raise TypeError(f"not a serializable body: {type(body)!r}")
    Path(path).write_text(json.dumps(doc, sort_keys=True) + "\n")


def read_body(path) -> Body:
    doc = json.loads(Path(path).read_text())
    kind = doc.get("kind")
    label = doc.get("label")
    if kind == "polygon":
        return Polygon(np.asarray(doc["vertices"], dtype=float), label=label)
    if kind == "fourier":
        return FourierBody(float(doc["a0"]),
                           np.asarray(doc.get("cos", []), dtype=float),
                           np.asarray(doc.get("sin", []), dtype=float),
                           label=label)
    if kind == "support":
        values = np.asarray(doc["values"], dtype=float)
        return SupportVector(AngleGrid(len(values)), values, label=label)
    raise ValueError(f"unknown body kind {kind!r}")


def _row(record: DeficitRecord) -> list[str]:
    # plain-float repr round-trips bit for bit; numpy scalars would not
    return [record.body_id] + [repr(float(getattr(record, c)))
                               for c in CSV_COLUMNS[1:]]


def write_records(path, records) -> None:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for record in records:
        writer.writerow(_row(record))
    Path(path).write_text(buf.getvalue())


def read_records(path) -> list[DeficitRecord]:
    out = []
    with open(path, newline="") as handle:
        for row in csv.DictReader(handle):
            out.append(DeficitRecord(
                body_id=row["body_id"],
                epsilon=float(row["epsilon"]),
                delta=float(row["delta"]),
                volume_product=float(row["volume_product"]),
                bm_spread=float(row["bm_spread"]),
                family_param=float(row["family_param"])))
    return out


def manifest_path(csv_path) -> Path:
    return Path(csv_path).with_suffix(".manifest.json")


def write_manifest(csv_path, config: dict) -> Path:
    """Write the run manifest beside the CSV; adds versions and a timestamp."""
    payload = dict(config)
    payload["versions"] = {
        "convexlab": __version__,
        "numpy": np.__version__,
        "scipy": scipy.__version__,
        "python": platform.python_version(),
    }
    payload["timestamp"] = datetime.datetime.now(
        datetime.timezone.utc).isoformat()
    path = manifest_path(csv_path)
    path.write_text(json.dumps(payload, sort_keys=True, indent=2) + "\n")
    return path


def read_manifest(csv_path) -> dict | None:
    path = manifest_path(csv_path)
    if not path.exists():
        return None
    return json.loads(path.read_text())


def flow_lines(history: FlowHistory) -> list[str]:
    lines = ["step,axis,volume_product,asymmetry"]
    for i, (axis, product, defect) in enumerate(history.steps):
        lines.append(f"{i},{axis!r},{product!r},{defect!r}")
    return lines

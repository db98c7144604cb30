"""CSV and JSON serialisation of phase maps, boundary curves and point records.

Floats are written with ``repr`` (shortest round-trip form), so identical
inputs give byte-identical files and JSON reloads reproduce the values
exactly. NaN holes become ``nan`` in CSV and ``null`` in JSON.
"""

from __future__ import annotations

import csv
import io
import json
import math

import numpy as np

from . import __version__
from .phase import BoundaryCurve, PhaseMap, SweepAxis
from .quadrature import QuadratureSpec

FORMATS = ("csv", "json")


def _num(x):
    if x is None:
        return None
    x = float(x)
    return None if math.isnan(x) else x


def _csv_num(x) -> str:
    return "" if x is None else repr(float(x))


def _dump(obj) -> str:
    return json.dumps(obj, indent=1, allow_nan=False) + "\n"


def _provenance(quad: QuadratureSpec | None) -> dict:
    out = {"tool": "magcasimir", "version": __version__}
    if quad is not None:
        out["quadrature"] = quad.as_dict()
    return out


def phase_map_to_csv(pm: PhaseMap) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(["x", "y", "coefficient", "sign"])
    signs = pm.signs
    for j, y in enumerate(pm.y):
        for i, x in enumerate(pm.x):
            w.writerow([repr(float(x)), repr(float(y)), repr(float(pm.coefficients[j, i])), signs[j, i]])
    return buf.getvalue()


def phase_map_to_json(pm: PhaseMap, preset: str | None = None) -> str:
    signs = pm.signs
    cells = []
    for j, y in enumerate(pm.y):
        for i, x in enumerate(pm.x):
            cells.append(
                {
                    "x": float(x),
                    "y": float(y),
                    "coefficient": _num(pm.coefficients[j, i]),
                    "sign": signs[j, i],
                }
            )
    doc = {
        **_provenance(pm.quadrature),
        "kind": "phase_map",
        "engine": pm.engine,
        "preset": preset,
        "axes": {"x": pm.axis_x.as_dict(), "y": pm.axis_y.as_dict()},
        "fixed": dict(pm.fixed),
        "holes": list(pm.holes),
        "cells": cells,
    }
    return _dump(doc)


def serialize_phase_map(pm: PhaseMap, fmt: str = "csv", preset: str | None = None) -> bytes:
    if fmt == "csv":
        return phase_map_to_csv(pm).encode()
    if fmt == "json":
        return phase_map_to_json(pm, preset).encode()
    raise ValueError(f"format must be csv or json, got {fmt!r}")


def phase_map_from_json(text: str | bytes) -> PhaseMap:
    doc = json.loads(text)
    ax = SweepAxis(**doc["axes"]["x"])
    ay = SweepAxis(**doc["axes"]["y"])
    coeffs = np.array(
        [math.nan if c["coefficient"] is None else c["coefficient"] for c in doc["cells"]],
        dtype=float,
    ).reshape(ay.count, ax.count)
    quad = QuadratureSpec(**doc["quadrature"]) if "quadrature" in doc else QuadratureSpec()
    return PhaseMap(doc["engine"], ax, ay, dict(doc["fixed"]), coeffs, list(doc["holes"]), quad)


def serialize_boundary(bc: BoundaryCurve, fmt: str = "csv", quad: QuadratureSpec | None = None) -> bytes:
    header = ([bc.sweep_parameter] if bc.sweep_parameter else []) + [bc.bracket_parameter, "coefficient"]
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(header)
        for (x, y), c in zip(bc.points, bc.coefficients):
            row = ([repr(float(x))] if bc.sweep_parameter else []) + [repr(float(y)), repr(float(c))]
            w.writerow(row)
        return buf.getvalue().encode()
    if fmt == "json":
        points = []
        for (x, y), c in zip(bc.points, bc.coefficients):
            p = {bc.sweep_parameter: x} if bc.sweep_parameter else {}
            p[bc.bracket_parameter] = y
            p["coefficient"] = c
            points.append(p)
        doc = {
            **_provenance(quad),
            "kind": "boundary",
            "engine": bc.engine,
            "sweep_parameter": bc.sweep_parameter,
            "bracket_parameter": bc.bracket_parameter,
            "fixed": dict(bc.fixed),
            "residual": bc.residual,
            "connected": bc.connected,
            "points": points,
            "skipped": [{"x": x, "reason": r} for x, r in bc.skipped],
        }
        return _dump(doc).encode()
    raise ValueError(f"format must be csv or json, got {fmt!r}")


def serialize_record(record: dict, fmt: str = "json") -> bytes:
    """One-point result: keys command, inputs, coefficient, sign, warnings (+ si)."""
    if fmt == "json":
        return _dump(record).encode()
    if fmt == "csv":
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        inputs = record["inputs"]
        extra = record.get("si", {})
        w.writerow(["command", *inputs, "coefficient", "sign", *extra])
        w.writerow(
            [
                record["command"],
                *(_csv_num(v) for v in inputs.values()),
                _csv_num(record["coefficient"]),
                record["sign"] or "",
                *(_csv_num(v) for v in extra.values()),
            ]
        )
        return buf.getvalue().encode()
    raise ValueError(f"format must be csv or json, got {fmt!r}")

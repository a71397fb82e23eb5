"""Cloud readers/writers, the JSON result document, and OBJ export.

Supported cloud formats: ``xyz`` (three whitespace-separated reals per
line, ``#`` comments), ``csv`` (optional header, columns x,y,z), and
``ply`` (ASCII PLY with x/y/z vertex properties). Floats are written with
``repr``, the shortest round-trip encoding, so write-then-read reproduces
coordinates bit for bit.

The result document is deterministic: fixed key order, full-precision
reals, and no volatile fields (the measured wall time is reported on
stderr by the CLI, not stored; the ``wall_ms`` key is kept in the schema
as null so identical configurations produce byte-identical files).
"""

from __future__ import annotations

import csv
import io
import json
import math
from pathlib import Path

import numpy as np

from .errors import ParseError, TooFewPointsError, ValidationError
from .geometry import PointCloud
from .hull import HullMesh
from .scoring import PairSamplingPolicy
from .search import LesResult, SearchParams

SCHEMA_VERSION = "1"
FORMATS = ("xyz", "csv", "ply")

# UV-sphere tessellation of the LES in OBJ output.
_SPHERE_SECTORS = 32
_SPHERE_STACKS = 16


def detect_format(path) -> str:
    ext = Path(path).suffix.lower().lstrip(".")
    if ext in FORMATS:
        return ext
    raise ValidationError(
        f"cannot infer format from {path!r}; pass one of {', '.join(FORMATS)}"
    )


def read_cloud(path, fmt: str | None = None) -> PointCloud:
    """Read a point cloud, preserving point order.

    Raises :class:`ParseError` with a 1-based line number on malformed
    input and :class:`TooFewPointsError` below 4 points.
    """
    fmt = fmt or detect_format(path)
    if fmt not in FORMATS:
        raise ValidationError(f"unknown format {fmt!r}")
    with open(path, "r", encoding="utf-8") as fh:
        if fmt == "xyz":
            pts = _read_xyz(path, fh)
        elif fmt == "csv":
            pts = _read_csv(path, fh)
        else:
            pts = _read_ply(path, fh)
    if len(pts) < 4:
        raise TooFewPointsError(f"{path}: needs at least 4 points, found {len(pts)}")
    return PointCloud(np.asarray(pts, dtype=np.float64))


def write_cloud(cloud: PointCloud, path, fmt: str | None = None) -> None:
    fmt = fmt or detect_format(path)
    if fmt not in FORMATS:
        raise ValidationError(f"unknown format {fmt!r}")
    out = io.StringIO()
    if fmt == "xyz":
        for x, y, z in cloud.points.tolist():
            out.write(f"{x!r} {y!r} {z!r}\n")
    elif fmt == "csv":
        out.write("x,y,z\n")
        for x, y, z in cloud.points.tolist():
            out.write(f"{x!r},{y!r},{z!r}\n")
    else:
        out.write("ply\nformat ascii 1.0\n")
        out.write(f"element vertex {len(cloud)}\n")
        out.write("property double x\nproperty double y\nproperty double z\n")
        out.write("end_header\n")
        for x, y, z in cloud.points.tolist():
            out.write(f"{x!r} {y!r} {z!r}\n")
    Path(path).write_text(out.getvalue(), encoding="utf-8")


def result_document(
    result: LesResult,
    params: SearchParams,
    policy: PairSamplingPolicy | None = None,
) -> dict:
    """The result as a JSON-ready dict with fixed key order."""

    def sphere_entry(cand):
        return {
            "center": [float(v) for v in cand.sphere.center],
            "radius": float(cand.sphere.radius),
            "order": cand.order,
            "contacts": [int(i) for i in cand.contact_indices],
        }

    doc = {
        "schema_version": SCHEMA_VERSION,
        "les": sphere_entry(result.les),
        "candidates": [sphere_entry(c) for c in result.candidates],
        "mie_points": [int(i) for i in result.contact_points],
        "stats": {
            "segments_scored": result.stats.segments_scored,
            "sweep_positions": result.stats.sweep_positions,
            "orders_run": result.orders_run,
            "wall_ms": None,
        },
        "params": {
            "steps": params.steps,
            "best_segment_count": params.best_segment_count,
            "max_order": params.max_order,
            "mds_direction": params.mds_direction,
            "seed": params.seed,
        },
    }
    if policy is not None:
        doc["params"]["pairs"] = policy.mode
        doc["params"]["sample_fraction"] = policy.sample_fraction
    return doc


def write_result(
    result: LesResult,
    path,
    params: SearchParams,
    policy: PairSamplingPolicy | None = None,
) -> None:
    """Serialize the result document; identical runs give identical bytes."""
    doc = result_document(result, params, policy)
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def emit_geometry(result: LesResult, cloud: PointCloud, hull: HullMesh, path) -> None:
    """Wavefront OBJ with groups ``hull`` (faces), ``les`` (UV sphere of the
    winning candidate), and ``cloud`` (point primitives)."""
    out = io.StringIO()
    for x, y, z in cloud.points.tolist():
        out.write(f"v {x!r} {y!r} {z!r}\n")
    out.write("g hull\n")
    for f in hull.faces:
        out.write(f"f {f[0] + 1} {f[1] + 1} {f[2] + 1}\n")

    sv, sf = _uv_sphere(result.les.sphere.center, result.les.sphere.radius)
    base = len(cloud)
    for x, y, z in sv.tolist():
        out.write(f"v {x!r} {y!r} {z!r}\n")
    out.write("g les\n")
    for f in sf:
        out.write(f"f {f[0] + base + 1} {f[1] + base + 1} {f[2] + base + 1}\n")

    out.write("g cloud\n")
    for i in range(len(cloud)):
        out.write(f"p {i + 1}\n")
    Path(path).write_text(out.getvalue(), encoding="utf-8")


def _uv_sphere(center: np.ndarray, radius: float):
    """Vertices and triangle faces of a UV sphere tessellation."""
    verts = [center + np.array([0.0, 0.0, radius])]
    for s in range(1, _SPHERE_STACKS):
        phi = math.pi * s / _SPHERE_STACKS
        for t in range(_SPHERE_SECTORS):
            theta = 2.0 * math.pi * t / _SPHERE_SECTORS
            verts.append(
                center
                + radius
                * np.array(
                    [
                        math.sin(phi) * math.cos(theta),
                        math.sin(phi) * math.sin(theta),
                        math.cos(phi),
                    ]
                )
            )
    verts.append(center + np.array([0.0, 0.0, -radius]))
    last = len(verts) - 1

    def ring(s):  # first vertex index of ring s (1-based stacks)
        return 1 + (s - 1) * _SPHERE_SECTORS

    faces = []
    for t in range(_SPHERE_SECTORS):
        faces.append((0, ring(1) + t, ring(1) + (t + 1) % _SPHERE_SECTORS))
    for s in range(1, _SPHERE_STACKS - 1):
        for t in range(_SPHERE_SECTORS):
            a = ring(s) + t
            b = ring(s) + (t + 1) % _SPHERE_SECTORS
            c = ring(s + 1) + t
            d = ring(s + 1) + (t + 1) % _SPHERE_SECTORS
            faces.append((a, c, d))
            faces.append((a, d, b))
    for t in range(_SPHERE_SECTORS):
        faces.append((last, ring(_SPHERE_STACKS - 1) + (t + 1) % _SPHERE_SECTORS,
                      ring(_SPHERE_STACKS - 1) + t))
    return np.asarray(verts), faces


def _read_xyz(path, fh) -> list:
    pts = []
    for lineno, raw in enumerate(fh, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        fields = line.split()
        if len(fields) != 3:
            raise ParseError(path, lineno, f"expected 3 fields, found {len(fields)}")
        pts.append(_parse_triple(path, lineno, fields))
    return pts


def _read_csv(path, fh) -> list:
    rows = list(csv.reader(fh))
    pts = []
    start = 0
    cols = (0, 1, 2)
    if rows and not _is_numeric_row(rows[0][:3]):
        header = [c.strip().lower() for c in rows[0]]
        try:
            cols = (header.index("x"), header.index("y"), header.index("z"))
        except ValueError:
            raise ParseError(path, 1, "header must contain columns x, y, z")
        start = 1
    for lineno, row in enumerate(rows[start:], start=start + 1):
        if not row or all(not c.strip() for c in row):
            continue
        if max(cols) >= len(row):
            raise ParseError(path, lineno, f"expected >= {max(cols) + 1} columns")
        pts.append(_parse_triple(path, lineno, [row[c] for c in cols]))
    return pts


def _read_ply(path, fh) -> list:
    lines = fh.read().splitlines()
    if not lines or lines[0].strip() != "ply":
        raise ParseError(path, 1, "not a PLY file (missing 'ply' magic)")
    n_vertices = None
    elements = []  # (name, count) in declaration order
    props = []  # vertex property names in order
    in_vertex = False
    header_end = None
    for lineno, line in enumerate(lines[1:], start=2):
        tok = line.split()
        if not tok:
            continue
        if tok[0] == "format":
            if tok[1:] != ["ascii", "1.0"]:
                raise ParseError(path, lineno, "only 'format ascii 1.0' is supported")
        elif tok[0] == "element":
            if len(tok) != 3:
                raise ParseError(path, lineno, "malformed element declaration")
            elements.append((tok[1], int(tok[2])))
            in_vertex = tok[1] == "vertex"
            if in_vertex:
                n_vertices = int(tok[2])
        elif tok[0] == "property" and in_vertex:
            props.append(tok[-1])
        elif tok[0] == "end_header":
            header_end = lineno
            break
    if header_end is None:
        raise ParseError(path, len(lines), "missing end_header")
    if n_vertices is None:
        raise ParseError(path, header_end, "no vertex element declared")
    try:
        cols = (props.index("x"), props.index("y"), props.index("z"))
    except ValueError:
        raise ParseError(path, header_end, "vertex element lacks x/y/z properties")

    pts = []
    lineno = header_end
    body = lines[header_end:]
    cursor = 0
    for name, count in elements:
        if name == "vertex":
            for _ in range(count):
                if cursor >= len(body):
                    raise ParseError(path, lineno + cursor, "unexpected end of file")
                fields = body[cursor].split()
                if max(cols) >= len(fields):
                    raise ParseError(
                        path, header_end + cursor + 1, "vertex line has too few fields"
                    )
                pts.append(
                    _parse_triple(
                        path, header_end + cursor + 1, [fields[c] for c in cols]
                    )
                )
                cursor += 1
        else:
            cursor += count  # skip other elements' data lines
    return pts


def _parse_triple(path, lineno, fields):
    try:
        x, y, z = (float(f) for f in fields)
    except ValueError:
        raise ParseError(path, lineno, f"not a number in {fields!r}")
    if not all(math.isfinite(v) for v in (x, y, z)):
        raise ParseError(path, lineno, "non-finite coordinate")
    return (x, y, z)


def _is_numeric_row(cells) -> bool:
    try:
        for c in cells:
            float(c)
    except (ValueError, TypeError):
        return False
    return len(list(cells)) > 0

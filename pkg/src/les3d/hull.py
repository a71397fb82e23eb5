"""3D convex hull construction and half-space containment tests.

The hull is built with qhull (via scipy), which is a quickhull-style
incremental construction and deterministic for a fixed input ordering.
Faces are re-wound so that each triangle's winding agrees with its
outward unit normal.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import ConvexHull as _QhullConvexHull
from scipy.spatial import QhullError

from .errors import DegenerateGeometryError
from .geometry import PointCloud, as_point

# Coplanarity / containment tolerance, relative to the bounding-box diagonal.
HULL_EPS_SCALE = 1e-7


@dataclass(frozen=True)
class HullMesh:
    """Convex hull of a cloud: extreme-point indices and oriented faces.

    ``vertex_indices`` are the cloud indices of the extreme points, sorted
    ascending. ``faces`` is (F, 3) with indices into the *cloud* (not into
    ``vertex_indices``); every face is wound counter-clockwise when viewed
    from outside. ``face_normals`` are outward unit normals and
    ``face_offsets`` complete the plane equations: a point q is inside or
    on face f iff ``face_normals[f] @ q + face_offsets[f] <= eps``.
    """

    vertex_indices: np.ndarray
    faces: np.ndarray
    face_normals: np.ndarray
    face_offsets: np.ndarray
    eps: float
    volume: float = field(repr=False, default=0.0)

    def __post_init__(self):
        for name in ("vertex_indices", "faces", "face_normals", "face_offsets"):
            arr = getattr(self, name)
            arr.flags.writeable = False


def build_hull(cloud: PointCloud) -> HullMesh:
    """Convex hull of ``cloud``.

    Raises :class:`DegenerateGeometryError` for fewer than 4 points or for
    clouds that are collinear/coplanar within the scale-relative tolerance,
    naming the detected degeneracy.
    """
    pts = cloud.points
    n = len(cloud)
    if n < 4:
        raise DegenerateGeometryError(
            f"convex hull needs at least 4 points, got {n}"
        )
    eps = HULL_EPS_SCALE * cloud.bbox_diagonal()
    _check_rank(pts, eps)
    try:
        qh = _QhullConvexHull(pts)
    except QhullError as exc:  # near-degenerate input qhull refuses
        raise DegenerateGeometryError(f"qhull rejected the input: {exc}") from exc

    normals = qh.equations[:, :3].copy()
    offsets = qh.equations[:, 3].copy()
    faces = qh.simplices.astype(np.int64).copy()
    # Re-wind faces whose cross-product normal disagrees with the outward one.
    v0 = pts[faces[:, 0]]
    cr = np.cross(pts[faces[:, 1]] - v0, pts[faces[:, 2]] - v0)
    flip = np.einsum("ij,ij->i", cr, normals) < 0.0
    faces[flip] = faces[flip][:, [0, 2, 1]]

    return HullMesh(
        vertex_indices=np.sort(qh.vertices.astype(np.int64)),
        faces=faces,
        face_normals=normals,
        face_offsets=offsets,
        eps=float(eps),
        volume=float(qh.volume),
    )


def contains_points(hull: HullMesh, cloud: PointCloud, queries: np.ndarray) -> np.ndarray:
    """Vectorised half-space containment for an (m, 3) query array."""
    q = np.asarray(queries, dtype=np.float64)
    out = np.empty(len(q), dtype=bool)
    normals_t = hull.face_normals.T
    for s in range(0, len(q), 2048):
        sd = q[s : s + 2048] @ normals_t + hull.face_offsets
        out[s : s + 2048] = sd.max(axis=1) <= hull.eps
    return out


def contains_point(hull: HullMesh, cloud: PointCloud, q) -> bool:
    """True iff ``q`` lies on or inside every face half-space of ``hull``."""
    return bool(contains_points(hull, cloud, as_point(q)[None, :])[0])


def hull_volume(hull: HullMesh, cloud: PointCloud) -> float:
    """Signed volume of the closed hull mesh (positive for outward winding)."""
    pts = cloud.points
    a = pts[hull.faces[:, 0]]
    b = pts[hull.faces[:, 1]]
    c = pts[hull.faces[:, 2]]
    return float(np.einsum("ij,ij->i", np.cross(a, b), c).sum() / 6.0)


def _check_rank(pts: np.ndarray, eps: float) -> None:
    centered = pts - pts.mean(axis=0)
    # Singular values bound the rms spread along principal axes.
    sv = np.linalg.svd(centered, compute_uv=False)
    rms = sv / np.sqrt(len(pts))
    if rms[1] <= eps:
        raise DegenerateGeometryError("all points are collinear within tolerance")
    if rms[2] <= eps:
        raise DegenerateGeometryError("all points are coplanar within tolerance")

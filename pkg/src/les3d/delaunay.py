"""Delaunay tetrahedralization and Voronoi vertices (tet circumcenters).

Built on qhull's lifted-paraboloid Delaunay (via scipy), which is
deterministic for a fixed input ordering. Tetrahedra are re-ordered to
positive orientation and near-flat slivers below the volume threshold are
dropped before the circumcenter solve; their volume contribution is
negligible by construction.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import Delaunay as _QhullDelaunay
from scipy.spatial import QhullError

from .errors import DegenerateGeometryError, DegenerateSimplexError
from .geometry import PointCloud, Sphere, as_point
from .hull import HullMesh, _check_rank, contains_points

# Simplex volume threshold, relative to (bounding-box diagonal)^3.
VOLUME_EPS_SCALE = 1e-12


@dataclass(frozen=True)
class TetMesh:
    """Tetrahedralization with per-tet circumcenters and circumradii.

    ``tetrahedra`` is (m, 4) with positive orientation; ``circumcenters``
    holds the Voronoi vertices of the cloud and ``circumradii`` the matching
    empty-circumsphere radii. ``locator`` is the underlying scipy object,
    kept for fast point location; it is an implementation detail.
    """

    tetrahedra: np.ndarray
    circumcenters: np.ndarray
    circumradii: np.ndarray
    locator: object = field(repr=False, compare=False, default=None)

    def __post_init__(self):
        for name in ("tetrahedra", "circumcenters", "circumradii"):
            getattr(self, name).flags.writeable = False

    def __len__(self) -> int:
        return self.tetrahedra.shape[0]


def circumsphere(p0, p1, p2, p3) -> Sphere:
    """The unique sphere through four affinely independent points."""
    P = np.stack([as_point(p0), as_point(p1), as_point(p2), as_point(p3)])
    lo, hi = P.min(axis=0), P.max(axis=0)
    diag = float(np.linalg.norm(hi - lo))
    centers, radii, ok = _circumspheres(P[None, :, :], VOLUME_EPS_SCALE * diag**3)
    if not ok[0]:
        raise DegenerateSimplexError("four points are coplanar within tolerance")
    return Sphere(center=centers[0], radius=float(radii[0]))


def build_delaunay(cloud: PointCloud) -> TetMesh:
    """Delaunay tetrahedralization of ``cloud``.

    Raises :class:`DegenerateGeometryError` for fewer than 4 points or
    collinear/coplanar input.
    """
    pts = cloud.points
    if len(cloud) < 4:
        raise DegenerateGeometryError(
            f"tetrahedralization needs at least 4 points, got {len(cloud)}"
        )
    diag = cloud.bbox_diagonal()
    _check_rank(pts, 1e-7 * diag)
    try:
        dt = _QhullDelaunay(pts)
    except QhullError as exc:
        raise DegenerateGeometryError(f"qhull rejected the input: {exc}") from exc

    tets = dt.simplices.astype(np.int64).copy()
    T = pts[tets]
    a = T[:, 1] - T[:, 0]
    b = T[:, 2] - T[:, 0]
    c = T[:, 3] - T[:, 0]
    vol6 = np.einsum("ij,ij->i", np.cross(a, b), c)
    neg = vol6 < 0.0
    tets[neg] = tets[neg][:, [0, 1, 3, 2]]

    keep = np.abs(vol6) / 6.0 > VOLUME_EPS_SCALE * diag**3
    tets = tets[keep]
    centers, radii, ok = _circumspheres(pts[tets], VOLUME_EPS_SCALE * diag**3)
    # keep already guarantees non-degenerate simplices
    assert ok.all()
    return TetMesh(
        tetrahedra=tets,
        circumcenters=centers,
        circumradii=radii,
        locator=dt,
    )


def voronoi_vertices(
    mesh: TetMesh, hull: HullMesh, cloud: PointCloud
) -> list[tuple[np.ndarray, float]]:
    """Circumcenter/circumradius pairs whose center lies inside the hull.

    Ordered by tetrahedron index; may be empty.
    """
    if len(mesh) == 0:
        return []
    inside = contains_points(hull, cloud, mesh.circumcenters)
    return [
        (mesh.circumcenters[i].copy(), float(mesh.circumradii[i]))
        for i in np.nonzero(inside)[0]
    ]


def _circumspheres(T: np.ndarray, vol_eps: float):
    """Batch circumcenter solve for (m, 4, 3) simplices.

    Returns (centers (m,3), radii (m,), ok (m,) bool); entries with
    volume <= vol_eps are flagged not-ok and left as NaN/0.
    """
    a = T[:, 1] - T[:, 0]
    b = T[:, 2] - T[:, 0]
    c = T[:, 3] - T[:, 0]
    vol = np.abs(np.einsum("ij,ij->i", np.cross(a, b), c)) / 6.0
    ok = vol > vol_eps
    centers = np.full((len(T), 3), np.nan)
    radii = np.zeros(len(T))
    if ok.any():
        A = np.stack([a[ok], b[ok], c[ok]], axis=1)
        rhs = 0.5 * np.stack(
            [
                np.einsum("ij,ij->i", a[ok], a[ok]),
                np.einsum("ij,ij->i", b[ok], b[ok]),
                np.einsum("ij,ij->i", c[ok], c[ok]),
            ],
            axis=1,
        )[..., None]
        off = np.linalg.solve(A, rhs)[..., 0]
        centers[ok] = T[ok, 0] + off
        radii[ok] = np.sqrt(np.einsum("ij,ij->i", off, off))
    return centers, radii, ok

"""Core geometric primitives: points, segments, spheres, and clearance.

All coordinates are dimensionless model units stored as float64. Every
function here is pure and operates on immutable inputs, so everything is
safe to call concurrently. Comparisons use the absolute tolerance ``EPS``
unless a caller-supplied tolerance applies.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError

# Absolute comparison tolerance in model units.
EPS = 1e-9


def as_point(p) -> np.ndarray:
    """Coerce ``p`` to a finite (3,) float64 array."""
    a = np.asarray(p, dtype=np.float64)
    if a.shape != (3,):
        raise ValidationError(f"expected a 3D point, got shape {a.shape}")
    if not np.all(np.isfinite(a)):
        raise ValidationError(f"point has non-finite coordinates: {a}")
    return a


@dataclass(frozen=True)
class PointCloud:
    """An ordered, immutable set of 3D points.

    ``points`` is an (n, 3) float64 array; point order is stable, so index
    references into the cloud stay valid for its lifetime. Construction
    requires at least one finite point; pipeline stages that need more
    (e.g. hull construction needs 4) enforce that themselves.
    """

    points: np.ndarray

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 3:
            raise ValidationError(f"expected an (n, 3) array, got shape {pts.shape}")
        if pts.shape[0] < 1:
            raise ValidationError("point cloud is empty")
        if not np.all(np.isfinite(pts)):
            raise ValidationError("point cloud contains non-finite coordinates")
        pts = pts.copy()
        pts.flags.writeable = False
        object.__setattr__(self, "points", pts)

    def __len__(self) -> int:
        return self.points.shape[0]

    @property
    def n(self) -> int:
        return self.points.shape[0]

    def bounding_box(self) -> tuple[np.ndarray, np.ndarray]:
        return self.points.min(axis=0), self.points.max(axis=0)

    def bbox_diagonal(self) -> float:
        lo, hi = self.bounding_box()
        return float(np.linalg.norm(hi - lo))


@dataclass(frozen=True)
class Segment3:
    """Closed segment between two points; a == b degenerates to a point."""

    a: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "a", as_point(self.a))
        object.__setattr__(self, "b", as_point(self.b))

    def length(self) -> float:
        return float(np.linalg.norm(self.b - self.a))

    def point_at(self, t: float) -> np.ndarray:
        return self.a + t * (self.b - self.a)


@dataclass(frozen=True)
class Sphere:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_point(self.center))
        r = float(self.radius)
        if not np.isfinite(r) or r < 0.0:
            raise ValidationError(f"sphere radius must be finite and >= 0, got {r}")
        object.__setattr__(self, "radius", r)


def distance_point_point(p, q) -> float:
    """Euclidean distance between two points."""
    p = as_point(p)
    q = as_point(q)
    d = p - q
    return float(np.sqrt(np.sum(d * d)))


def segment_point_distances(a: np.ndarray, b: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Distances from each row of ``points`` to the closed segment a-b.

    The closest-point parameter is clamped to [0, 1]; a degenerate segment
    (a == b) reduces to plain point distance.
    """
    d = b - a
    l2 = float(np.dot(d, d))
    if l2 > 0.0:
        t = np.clip((points - a) @ d / l2, 0.0, 1.0)
        diff = points - (a + t[:, None] * d)
    else:
        diff = points - a
    return np.sqrt(np.sum(diff * diff, axis=1))


def segment_point_distance_matrix(A: np.ndarray, B: np.ndarray, points: np.ndarray) -> np.ndarray:
    """Distance from each of S segments (rows of A, B) to each of N points.

    Returns an (S, N) matrix. Row s equals
    ``segment_point_distances(A[s], B[s], points)`` bit for bit, which
    keeps chunked/parallel scoring identical to the scalar path.
    """
    D = B - A
    l2 = np.einsum("sk,sk->s", D, D)
    t = np.einsum("nk,sk->sn", points, D) - np.einsum("sk,sk->s", A, D)[:, None]
    np.divide(t, l2[:, None], out=t, where=l2[:, None] > 0.0)
    np.clip(t, 0.0, 1.0, out=t)
    diff = points[None, :, :] - (A[:, None, :] + t[..., None] * D[:, None, :])
    return np.sqrt(np.einsum("snk,snk->sn", diff, diff))


def distance_point_segment(p, segment: Segment3) -> float:
    """Minimum distance from ``p`` to the closed segment."""
    p = as_point(p)
    return float(segment_point_distances(segment.a, segment.b, p[None, :])[0])


def max_empty_radius(center, cloud: PointCloud) -> float:
    """Largest radius r such that the open ball at ``center`` contains no
    cloud point: the nearest-neighbour distance from ``center`` to the cloud.
    """
    c = as_point(center)
    diff = cloud.points - c
    return float(np.min(np.sqrt(np.sum(diff * diff, axis=1))))


def sphere_clearance(center, radius: float, cloud: PointCloud) -> float:
    """Minimum distance from the cloud to the sphere boundary, signed.

    Defined as ``min_p ||center - p|| - radius``; nonnegative exactly when
    the sphere encloses no cloud point. Monotone decreasing in ``radius``.
    """
    if float(radius) < 0.0:
        raise ValidationError(f"radius must be >= 0, got {radius}")
    return max_empty_radius(center, cloud) - float(radius)

"""Independent reference implementations used as test oracles.

Everything here is deliberately written in the most literal way possible
(plain Python loops and formulas, or an LP solver), independent of the
library's vectorised code paths, so agreement is meaningful.
"""

from __future__ import annotations

import math

import numpy as np
from scipy.optimize import linprog


def dist_formula(p, q) -> float:
    """Componentwise sqrt(sum of squared differences)."""
    return math.sqrt(sum((float(a) - float(b)) ** 2 for a, b in zip(p, q)))


def point_segment_distance(p, a, b) -> float:
    """Scalar point-to-closed-segment distance, plain Python arithmetic."""
    ab = [float(b[i]) - float(a[i]) for i in range(3)]
    ap = [float(p[i]) - float(a[i]) for i in range(3)]
    l2 = sum(v * v for v in ab)
    if l2 == 0.0:
        return dist_formula(p, a)
    t = sum(ap[i] * ab[i] for i in range(3)) / l2
    t = min(1.0, max(0.0, t))
    closest = [float(a[i]) + t * ab[i] for i in range(3)]
    return dist_formula(p, closest)


def brute_min_distance(c, points) -> float:
    """Exhaustive nearest-neighbour scan."""
    return min(dist_formula(c, p) for p in points)


def naive_mds(a, b, points) -> float:
    """Naive double-loop mean segment distance (the Eq.-style oracle)."""
    total = 0.0
    for p in points:
        total += point_segment_distance(p, a, b)
    return total / len(points)


def lp_contains(points: np.ndarray, q) -> bool:
    """Convex-hull membership as LP feasibility: q = sum w_i p_i, w >= 0,
    sum w = 1."""
    n = len(points)
    A_eq = np.vstack([points.T, np.ones(n)])
    b_eq = np.append(np.asarray(q, dtype=float), 1.0)
    res = linprog(
        c=np.zeros(n), A_eq=A_eq, b_eq=b_eq, bounds=[(0, None)] * n, method="highs"
    )
    return res.status == 0


def circumsphere_determinant(p0, p1, p2, p3):
    """Circumcenter/radius via the classic determinant formulation."""
    coords = np.array([p0, p1, p2, p3], dtype=float)
    sq = (coords**2).sum(axis=1)
    ones = np.ones(4)
    a = np.linalg.det(np.column_stack([coords, ones]))
    dx = np.linalg.det(np.column_stack([sq, coords[:, 1], coords[:, 2], ones]))
    dy = -np.linalg.det(np.column_stack([sq, coords[:, 0], coords[:, 2], ones]))
    dz = np.linalg.det(np.column_stack([sq, coords[:, 0], coords[:, 1], ones]))
    c = np.linalg.det(np.column_stack([sq, coords]))
    center = np.array([dx, dy, dz]) / (2.0 * a)
    radius = math.sqrt(dx**2 + dy**2 + dz**2 - 4.0 * a * c) / (2.0 * abs(a))
    return center, radius


def empty_circumsphere_violations(points, tets, centers, radii, rel_tol=1e-7):
    """Count points strictly inside any circumsphere by more than rel_tol."""
    violations = 0
    for t in range(len(tets)):
        d = np.linalg.norm(points - centers[t], axis=1)
        inside = d < radii[t] * (1.0 - rel_tol)
        inside[tets[t]] = False
        violations += int(inside.sum())
    return violations


def tet_volume(pa, pb, pc, pd) -> float:
    m = np.array([pb - pa, pc - pa, pd - pa], dtype=float)
    return abs(float(np.linalg.det(m))) / 6.0


def mesh_signed_volume(points, faces) -> float:
    """Divergence-theorem volume of a closed triangle mesh."""
    total = 0.0
    for f in faces:
        a, b, c = points[f[0]], points[f[1]], points[f[2]]
        total += float(np.dot(np.cross(a, b), c))
    return total / 6.0

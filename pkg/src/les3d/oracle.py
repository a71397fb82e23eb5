"""Two independent reference solvers used to validate the sweep search.

``exact_les`` is the classical Voronoi answer: among tetrahedron
circumcenters that fall inside the hull, the one with the largest
circumradius is the largest empty sphere whose center is constrained to
the hull interior. ``grid_les`` is the brute-force baseline: evaluate the
nearest-neighbour distance on a regular grid over the bounding box and
keep the best in-hull node.
"""

from __future__ import annotations

import numpy as np
from scipy.spatial import cKDTree

from .delaunay import build_delaunay
from .errors import DegenerateGeometryError, ValidationError
from .geometry import PointCloud, Sphere, max_empty_radius
from .hull import build_hull, contains_point, contains_points


def exact_les(cloud: PointCloud) -> Sphere:
    """Largest empty sphere with center inside the convex hull, exactly.

    The optimum over the hull interior sits at a Voronoi vertex, i.e. a
    tetrahedron circumcenter; ties go to the lowest tetrahedron index.
    """
    hull = build_hull(cloud)
    tets = build_delaunay(cloud)
    inside = contains_points(hull, cloud, tets.circumcenters)
    if not inside.any():
        raise DegenerateGeometryError(
            "no Voronoi vertex lies inside the hull; the constrained optimum "
            "is on the hull boundary and outside this oracle's scope"
        )
    radii = np.where(inside, tets.circumradii, -np.inf)
    best = int(np.argmax(radii))
    return Sphere(center=tets.circumcenters[best], radius=float(tets.circumradii[best]))


def grid_les(cloud: PointCloud, resolution: int) -> Sphere:
    """Best empty sphere centered on an in-hull node of a regular grid.

    The grid spans the cloud bounding box with ``resolution`` nodes per
    axis (a degenerate box is inflated to a unit cube around the centroid).
    Nodes are ranked by clearance and walked in (clearance desc, index asc)
    order until one passes the hull containment test, which makes the
    result the deterministic argmax over in-hull nodes. Improves
    monotonically with resolution.
    """
    if resolution < 8:
        raise ValidationError(f"resolution must be >= 8, got {resolution}")
    lo, hi = cloud.bounding_box()
    extent = hi - lo
    if np.any(extent <= 0.0):
        center = cloud.points.mean(axis=0)
        lo = center - 0.5
        hi = center + 0.5
    axes = [np.linspace(lo[d], hi[d], resolution) for d in range(3)]
    gx, gy, gz = np.meshgrid(*axes, indexing="ij")
    nodes = np.stack([gx.ravel(), gy.ravel(), gz.ravel()], axis=1)

    tree = cKDTree(cloud.points)
    clearance, _ = tree.query(nodes)

    try:
        hull = build_hull(cloud)
    except DegenerateGeometryError:
        hull = None  # degenerate cloud: no containment constraint applies

    order = np.lexsort((np.arange(len(nodes)), -clearance))
    for idx in order:
        node = nodes[idx]
        if hull is None or contains_point(hull, cloud, node):
            return Sphere(center=node, radius=max_empty_radius(node, cloud))
    raise DegenerateGeometryError(
        "no grid node lies inside the hull; increase the resolution"
    )

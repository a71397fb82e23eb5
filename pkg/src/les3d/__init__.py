"""les3d: largest empty sphere search in hollow 3D point clouds."""

from .delaunay import TetMesh, build_delaunay, circumsphere, voronoi_vertices
from .errors import (
    DegenerateGeometryError,
    DegenerateSimplexError,
    EmptyInteriorError,
    Les3dError,
    ParseError,
    TooFewPointsError,
    ValidationError,
)
from .generators import ShellSpec, TwoSphereSpec, gen_ball, gen_shell, gen_two_spheres
from .geometry import (
    PointCloud,
    Segment3,
    Sphere,
    distance_point_point,
    distance_point_segment,
    max_empty_radius,
    sphere_clearance,
)
from .hull import HullMesh, build_hull, contains_point, contains_points, hull_volume
from .oracle import exact_les, grid_les
from .scoring import (
    PairSamplingPolicy,
    ScoredSegment,
    generate_pairs,
    mds,
    select_best_segments,
)
from .search import (
    CandidateSphere,
    LesResult,
    SearchParams,
    run_les,
    sweep_segment,
    voronoi_seed_point,
)
from .fileio import read_cloud, write_cloud, write_result, emit_geometry

__version__ = "0.1.0"

__all__ = [
    "PointCloud", "Segment3", "Sphere", "HullMesh", "TetMesh",
    "ShellSpec", "TwoSphereSpec", "PairSamplingPolicy", "ScoredSegment",
    "SearchParams", "CandidateSphere", "LesResult",
    "distance_point_point", "distance_point_segment",
    "sphere_clearance", "max_empty_radius",
    "build_hull", "contains_point", "contains_points", "hull_volume",
    "build_delaunay", "circumsphere", "voronoi_vertices",
    "mds", "generate_pairs", "select_best_segments",
    "voronoi_seed_point", "sweep_segment", "run_les",
    "exact_les", "grid_les",
    "gen_shell", "gen_two_spheres", "gen_ball",
    "read_cloud", "write_cloud", "write_result", "emit_geometry",
    "Les3dError", "ValidationError", "TooFewPointsError", "ParseError",
    "DegenerateGeometryError", "DegenerateSimplexError", "EmptyInteriorError",
]

"""Expanding-sphere search for the largest empty sphere (LES).

Order 1 scores hull-vertex segments, keeps the best few, and sweeps an
expanding sphere along each: positions on the segment are seeded from the
nearest in-hull Voronoi vertex plus a uniform schedule, and at every
in-hull position the sphere jumps straight to the nearest-neighbour
distance (the radius at which it first touches the cloud). Touched points
become contact points; later orders sweep segments between newly found
contact points until no new contacts appear or ``max_order`` is reached.
The largest candidate wins.

Everything is deterministic for a fixed cloud and parameter set, including
under multi-threaded scoring; candidates accumulate in (order, segment,
position) evaluation order and ties keep the earliest candidate.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field

import numpy as np
from scipy.spatial import cKDTree

from .delaunay import TetMesh, build_delaunay
from .errors import Les3dError, ValidationError
from .geometry import (
    PointCloud,
    Segment3,
    Sphere,
    as_point,
    max_empty_radius,
    segment_point_distance_matrix,
    segment_point_distances,
)
from .hull import HullMesh, build_hull, contains_points
from .parallel import resolve_workers
from .scoring import PairSamplingPolicy, generate_pairs, score_segments

# Relative band for recording sphere/point contacts.
CONTACT_REL_TOL = 1e-7
# Candidates with centers closer than this keep only the first one found.
CENTER_DEDUP_TOL = 1e-9
# Cap on segments formed between new contact points at orders > 1.
HIGHER_ORDER_SEGMENT_CAP = 2000
# All-pairs scoring is used while C(h, 2) stays within this budget.
ALL_PAIRS_BUDGET = 10_000
SAMPLED_FRACTION = 0.01


@dataclass(frozen=True)
class SearchParams:
    """Knobs of the sweep search.

    ``steps`` is the number of sphere positions per segment (clamped to the
    cloud size at run time), ``best_segment_count`` how many top-scoring
    segments are swept at order 1, ``max_order`` the iteration depth cap,
    and ``mds_direction`` whether low or high segment scores win.
    """

    steps: int = 64
    best_segment_count: int = 16
    max_order: int = 3
    mds_direction: str = "min"
    seed: int = 0

    def __post_init__(self):
        if self.steps < 3:
            raise ValidationError(f"steps must be >= 3, got {self.steps}")
        if self.best_segment_count < 1:
            raise ValidationError("best_segment_count must be >= 1")
        if self.max_order < 1:
            raise ValidationError("max_order must be >= 1")
        if self.mds_direction not in ("min", "max"):
            raise ValidationError(
                f"mds_direction must be 'min' or 'max', got {self.mds_direction!r}"
            )
        if not (0 <= int(self.seed) < 2**64):
            raise ValidationError("seed must fit in an unsigned 64-bit integer")


@dataclass(frozen=True)
class CandidateSphere:
    """An empty sphere found by the sweep, with the points it first touched."""

    sphere: Sphere
    contact_indices: np.ndarray
    source_segment: tuple[int, int]
    order: int


@dataclass
class RunStats:
    segments_scored: int = 0
    sweep_positions: int = 0
    wall_ms: float = 0.0


@dataclass
class LesResult:
    """Outcome of :func:`run_les`.

    ``les`` is the maximum-radius candidate (earliest found on ties),
    ``candidates`` the full accumulated set in evaluation order, and
    ``contact_points`` the sorted union of every candidate's contacts.
    """

    les: CandidateSphere
    candidates: list[CandidateSphere]
    contact_points: np.ndarray
    orders_run: int
    stats: RunStats = field(default_factory=RunStats)


def default_policy(hull: HullMesh, seed: int) -> PairSamplingPolicy:
    """All pairs while C(h, 2) fits the budget, else a seeded 1% sample."""
    h = len(hull.vertex_indices)
    if h * (h - 1) // 2 <= ALL_PAIRS_BUDGET:
        return PairSamplingPolicy(mode="all-pairs", seed=int(seed))
    return PairSamplingPolicy(
        mode="sampled", sample_fraction=SAMPLED_FRACTION, seed=int(seed)
    )


def voronoi_seed_point(
    segment: Segment3, tets: TetMesh, hull: HullMesh, cloud: PointCloud
) -> np.ndarray:
    """Sweep start point: the in-hull Voronoi vertex nearest to the segment,
    projected orthogonally onto it (clamped to the closed segment).

    Falls back to the segment midpoint when no circumcenter lies inside the
    hull. Ties go to the lowest tetrahedron index.
    """
    inside = contains_points(hull, cloud, tets.circumcenters)
    centers = tets.circumcenters[inside]
    if len(centers) == 0:
        return segment.point_at(0.5)
    dists = segment_point_distances(segment.a, segment.b, centers)
    v = centers[int(np.argmin(dists))]
    return segment.point_at(_project_param(segment.a, segment.b, v))


def sweep_segment(
    segment: Segment3,
    seed_point,
    cloud: PointCloud,
    hull: HullMesh,
    k: int,
    order: int = 1,
    source: tuple[int, int] = (-1, -1),
) -> list[CandidateSphere]:
    """Sweep ``k`` expanding-sphere positions along ``segment``.

    Positions are the seed plus k-1 parameters spaced uniformly over the
    segment (duplicates removed). Positions outside the hull are skipped;
    at each remaining center the radius is the nearest-neighbour distance
    and every point within ``CONTACT_REL_TOL`` of it is recorded as a
    contact. Candidates come back ordered by position, deduplicated on
    near-identical centers (first wins).
    """
    if k < 3:
        raise ValidationError(f"k must be >= 3, got {k}")
    seed_point = as_point(seed_point)
    t_seed = _project_param(segment.a, segment.b, seed_point)
    ts = np.unique(np.concatenate([[t_seed], np.linspace(0.0, 1.0, k - 1)]))
    centers = segment.a + ts[:, None] * (segment.b - segment.a)
    centers = centers[contains_points(hull, cloud, centers)]
    out: list[CandidateSphere] = []
    kept: list[np.ndarray] = []
    for c in centers:
        if any(np.linalg.norm(c - kc) < CENTER_DEDUP_TOL for kc in kept):
            continue
        r = max_empty_radius(c, cloud)
        d = np.linalg.norm(cloud.points - c, axis=1)
        contacts = np.nonzero(d <= r * (1.0 + CONTACT_REL_TOL))[0]
        out.append(
            CandidateSphere(
                sphere=Sphere(center=c, radius=r),
                contact_indices=contacts.astype(np.int64),
                source_segment=source,
                order=order,
            )
        )
        kept.append(c)
    return out


def run_les(
    cloud: PointCloud,
    params: SearchParams,
    policy: PairSamplingPolicy | None = None,
    workers: int | None = None,
) -> LesResult:
    """Full search: hull, segment scoring, seeded sweeps, iterated orders.

    Deterministic for fixed ``cloud``/``params``/``policy``; the worker
    count never changes the result.
    """
    t_start = time.perf_counter()
    workers = resolve_workers(workers)
    pts = cloud.points
    n = len(cloud)
    k = min(params.steps, n)

    hull = build_hull(cloud)
    tets = build_delaunay(cloud)
    tree = cKDTree(pts)
    vv_inside = contains_points(hull, cloud, tets.circumcenters)
    vv_centers = tets.circumcenters[vv_inside]

    if policy is None:
        policy = default_policy(hull, params.seed)
    pairs = generate_pairs(hull, policy)
    scores = score_segments(cloud, hull, pairs, workers=workers)
    stats = RunStats(segments_scored=len(pairs))
    key = scores if params.mds_direction == "min" else -scores
    order_keys = np.lexsort((pairs[:, 1], pairs[:, 0], key))
    segments = pairs[order_keys[: params.best_segment_count]]

    acc = _Accumulator()
    contact_set = np.empty(0, dtype=np.int64)
    orders_run = 0
    for order in range(1, params.max_order + 1):
        if len(segments) == 0:
            break
        orders_run = order
        batch = _sweep_batch(
            pts, segments, vv_centers, tets, tree, k, order, workers
        )
        stats.sweep_positions += batch.positions_evaluated
        acc.extend(batch)
        new = np.setdiff1d(batch.contact_union(), contact_set)
        contact_set = np.union1d(contact_set, new)
        if len(new) == 0:
            break
        segments = _pairs_capped(new, HIGHER_ORDER_SEGMENT_CAP)

    if acc.size == 0:
        raise Les3dError("search produced no candidate sphere")
    candidates = acc.materialize()
    best = int(np.argmax(acc.radii()))  # first max wins: evaluation order
    stats.wall_ms = (time.perf_counter() - t_start) * 1000.0
    return LesResult(
        les=candidates[best],
        candidates=candidates,
        contact_points=np.unique(np.concatenate([c.contact_indices for c in candidates])),
        orders_run=orders_run,
        stats=stats,
    )


class _Accumulator:
    """Kept candidates as flat arrays, deduplicated on center proximity."""

    def __init__(self):
        self.centers: list[np.ndarray] = []
        self.rads: list[np.ndarray] = []
        self.hits: list[list[int]] = []
        self.segs: list[np.ndarray] = []
        self.orders: list[np.ndarray] = []
        self.size = 0

    def extend(self, batch: _SweepBatch) -> None:
        keep = self._dedup_mask(batch.centers)
        batch.apply_mask(keep)
        self.centers.append(batch.centers)
        self.rads.append(batch.radii)
        self.hits.extend(batch.hits)
        self.segs.append(batch.seg_pairs)
        self.orders.append(np.full(len(batch.centers), batch.order, dtype=np.int64))
        self.size += len(batch.centers)

    def _dedup_mask(self, new_centers: np.ndarray) -> np.ndarray:
        prev = (
            np.concatenate(self.centers)
            if self.centers
            else np.empty((0, 3), dtype=np.float64)
        )
        stacked = np.vstack([prev, new_centers])
        close = cKDTree(stacked).query_pairs(CENTER_DEDUP_TOL, output_type="ndarray")
        keep = np.ones(len(stacked), dtype=bool)
        if len(close):
            adj: dict[int, list[int]] = {}
            for a, b in close:
                adj.setdefault(int(b), []).append(int(a))
                adj.setdefault(int(a), []).append(int(b))
            # Greedy first-wins pass in global evaluation order.
            for idx in range(len(prev), len(stacked)):
                if any(nb < idx and keep[nb] for nb in adj.get(idx, ())):
                    keep[idx] = False
        return keep[len(prev):]

    def radii(self) -> np.ndarray:
        return np.concatenate(self.rads) if self.rads else np.empty(0)

    def materialize(self) -> list[CandidateSphere]:
        centers = np.concatenate(self.centers)
        rads = np.concatenate(self.rads)
        segs = np.concatenate(self.segs)
        orders = np.concatenate(self.orders)
        return [
            CandidateSphere(
                sphere=Sphere(center=centers[i], radius=float(rads[i])),
                contact_indices=np.sort(np.asarray(self.hits[i], dtype=np.int64)),
                source_segment=(int(segs[i, 0]), int(segs[i, 1])),
                order=int(orders[i]),
            )
            for i in range(len(centers))
        ]


class _SweepBatch:
    """All in-hull sweep evaluations of one order, in evaluation order."""

    def __init__(self, centers, radii, hits, seg_pairs, order, positions_evaluated):
        self.centers = centers
        self.radii = radii
        self.hits = hits
        self.seg_pairs = seg_pairs
        self.order = order
        self.positions_evaluated = positions_evaluated

    def apply_mask(self, keep: np.ndarray) -> None:
        self.centers = self.centers[keep]
        self.radii = self.radii[keep]
        self.hits = [h for h, k in zip(self.hits, keep) if k]
        self.seg_pairs = self.seg_pairs[keep]

    def contact_union(self) -> np.ndarray:
        if not self.hits:
            return np.empty(0, dtype=np.int64)
        flat = [i for hs in self.hits for i in hs]
        return np.unique(np.asarray(flat, dtype=np.int64))


def _sweep_batch(
    pts: np.ndarray,
    segments: np.ndarray,
    vv_centers: np.ndarray,
    tets: TetMesh,
    tree: cKDTree,
    k: int,
    order: int,
    workers: int,
) -> _SweepBatch:
    A = pts[segments[:, 0]]
    B = pts[segments[:, 1]]
    t_seed = _seed_params(A, B, vv_centers)
    grid = np.linspace(0.0, 1.0, k - 1)
    centers_parts = []
    seg_ids = []
    for s in range(len(segments)):
        ts = np.unique(np.concatenate([[t_seed[s]], grid]))
        centers_parts.append(A[s] + ts[:, None] * (B[s] - A[s]))
        seg_ids.append(np.full(len(ts), s, dtype=np.int64))
    centers = np.concatenate(centers_parts)
    seg_ids = np.concatenate(seg_ids)

    # Segment endpoints are hull or cloud points, so the whole segment lies
    # in the hull; the locator test only trims numeric boundary fuzz.
    inside = tets.locator.find_simplex(centers) >= 0
    centers = centers[inside]
    seg_ids = seg_ids[inside]
    radii, _ = tree.query(centers, workers=workers)
    band = radii * (1.0 + CONTACT_REL_TOL)
    hits = tree.query_ball_point(centers, band, workers=workers)
    return _SweepBatch(
        centers=centers,
        radii=radii,
        hits=list(hits),
        seg_pairs=segments[seg_ids],
        order=order,
        positions_evaluated=len(centers),
    )


def _seed_params(A: np.ndarray, B: np.ndarray, vv_centers: np.ndarray) -> np.ndarray:
    """Per-segment sweep-seed parameter: nearest Voronoi vertex projected."""
    S = len(A)
    t_seed = np.full(S, 0.5)
    if len(vv_centers) == 0:
        return t_seed
    for s in range(0, S, 64):
        dmat = segment_point_distance_matrix(A[s : s + 64], B[s : s + 64], vv_centers)
        nearest = vv_centers[np.argmin(dmat, axis=1)]
        D = B[s : s + 64] - A[s : s + 64]
        l2 = np.einsum("ij,ij->i", D, D)
        t = np.einsum("ij,ij->i", nearest - A[s : s + 64], D)
        t = np.divide(t, l2, out=np.zeros_like(t), where=l2 > 0.0)
        t_seed[s : s + 64] = np.clip(t, 0.0, 1.0)
    return t_seed


def _project_param(a: np.ndarray, b: np.ndarray, p: np.ndarray) -> float:
    d = b - a
    l2 = float(np.dot(d, d))
    if l2 == 0.0:
        return 0.0
    return float(np.clip(np.dot(p - a, d) / l2, 0.0, 1.0))


def _pairs_capped(indices: np.ndarray, cap: int) -> np.ndarray:
    """All index pairs in ascending lexicographic order, truncated at cap."""
    out = []
    m = len(indices)
    for x in range(m):
        for y in range(x + 1, m):
            out.append((indices[x], indices[y]))
            if len(out) >= cap:
                return np.asarray(out, dtype=np.int64)
    if not out:
        return np.empty((0, 2), dtype=np.int64)
    return np.asarray(out, dtype=np.int64)

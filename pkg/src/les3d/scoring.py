"""Segment generation over hull-vertex pairs and mean-distance scoring.

The score of a segment (its MDS, mean distance score) is the average
distance from the segment to every non-hull cloud point. Low scores mark
segments that run close to the interior points, i.e. likely through the
void. When every point is a hull vertex (an ideal shell), the score falls
back to averaging over the whole cloud.

Scoring is embarrassingly parallel across segments; each segment's score
is computed independently, so the results are identical for any worker
count.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import EmptyInteriorError, ValidationError
from .geometry import PointCloud, Segment3, segment_point_distance_matrix
from .hull import HullMesh
from .parallel import chunked_map, resolve_workers

# Segments scored per work chunk; keeps the (chunk, n) distance matrix small.
_CHUNK = 64


@dataclass(frozen=True)
class PairSamplingPolicy:
    """How hull-vertex pairs are enumerated.

    ``all-pairs`` scores every unordered pair; ``sampled`` draws
    ``ceil(sample_fraction * C(h, 2))`` distinct pairs without replacement
    from a seeded counter-based generator (Philox), so an identical seed
    yields an identical pair set.
    """

    mode: str = "all-pairs"
    sample_fraction: float = 0.01
    seed: int = 0

    def __post_init__(self):
        if self.mode not in ("all-pairs", "sampled"):
            raise ValidationError(f"unknown pair sampling mode: {self.mode!r}")
        if not (0.0 < self.sample_fraction <= 1.0):
            raise ValidationError(
                f"sample_fraction must be in (0, 1], got {self.sample_fraction}"
            )
        if not (0 <= int(self.seed) < 2**64):
            raise ValidationError("seed must fit in an unsigned 64-bit integer")


@dataclass(frozen=True)
class ScoredSegment:
    """A hull-vertex pair (i, j) with its score; i < j always."""

    i: int
    j: int
    segment: Segment3
    mds: float


def interior_indices(cloud: PointCloud, hull: HullMesh) -> np.ndarray:
    """Cloud indices that are not hull vertices, ascending."""
    return np.setdiff1d(np.arange(len(cloud)), hull.vertex_indices)


def mds(segment: Segment3, cloud: PointCloud, hull: HullMesh) -> float:
    """Mean distance from ``segment`` to the non-hull points of ``cloud``.

    Raises :class:`EmptyInteriorError` when every point is a hull vertex;
    callers should then score against the full cloud (see
    :func:`score_segments`, which applies that fallback itself).
    """
    interior = interior_indices(cloud, hull)
    if len(interior) == 0:
        raise EmptyInteriorError(
            "every cloud point is a hull vertex; score against the full cloud instead"
        )
    return _score_rows(
        segment.a[None, :], segment.b[None, :], cloud.points[interior]
    )[0]


def generate_pairs(hull: HullMesh, policy: PairSamplingPolicy) -> np.ndarray:
    """Unordered hull-vertex index pairs as an (m, 2) array, (i, j) ascending.

    All-pairs mode enumerates every C(h, 2) pair in lexicographic order.
    Sampled mode picks ceil(fraction * C(h, 2)) distinct pairs with the
    policy's seed and returns them sorted lexicographically.
    """
    hv = hull.vertex_indices
    h = len(hv)
    if h < 2:
        raise ValidationError("hull must have at least 2 vertices")
    total = h * (h - 1) // 2
    if policy.mode == "all-pairs":
        ii, jj = np.triu_indices(h, k=1)
        return np.stack([hv[ii], hv[jj]], axis=1).astype(np.int64)
    m = int(np.ceil(policy.sample_fraction * total))
    rng = np.random.Generator(np.random.Philox(key=int(policy.seed)))
    ranks = np.sort(rng.choice(total, size=m, replace=False))
    ii, jj = _unrank_pairs(ranks, h)
    return np.stack([hv[ii], hv[jj]], axis=1).astype(np.int64)


def score_segments(
    cloud: PointCloud,
    hull: HullMesh,
    pairs: np.ndarray,
    workers: int | None = None,
) -> np.ndarray:
    """Scores for hull-vertex ``pairs``, in pair order.

    Applies the empty-interior fallback: with no non-hull points the mean
    runs over the whole cloud. Chunked evaluation in fixed point order
    makes the result independent of the worker count, bit for bit.
    """
    interior = interior_indices(cloud, hull)
    ref = cloud.points[interior] if len(interior) > 0 else cloud.points
    pts = cloud.points
    workers = resolve_workers(workers)
    chunks = [pairs[s : s + _CHUNK] for s in range(0, len(pairs), _CHUNK)]
    parts = chunked_map(
        lambda P: _score_rows(pts[P[:, 0]], pts[P[:, 1]], ref), chunks, workers
    )
    return np.concatenate(parts) if parts else np.empty(0)


def select_best_segments(
    cloud: PointCloud,
    hull: HullMesh,
    policy: PairSamplingPolicy,
    count: int,
    direction: str = "min",
    workers: int | None = None,
) -> list[ScoredSegment]:
    """The ``count`` best-scoring segments, best first.

    ``direction`` picks whether low or high scores win; ties break by
    lexicographic (i, j). Element 0 is the best segment overall.
    """
    if count < 1:
        raise ValidationError(f"count must be >= 1, got {count}")
    if direction not in ("min", "max"):
        raise ValidationError(f"direction must be 'min' or 'max', got {direction!r}")
    pairs = generate_pairs(hull, policy)
    scores = score_segments(cloud, hull, pairs, workers=workers)
    key = scores if direction == "min" else -scores
    order = np.lexsort((pairs[:, 1], pairs[:, 0], key))
    picked = order[:count]
    pts = cloud.points
    return [
        ScoredSegment(
            i=int(pairs[p, 0]),
            j=int(pairs[p, 1]),
            segment=Segment3(pts[pairs[p, 0]], pts[pairs[p, 1]]),
            mds=float(scores[p]),
        )
        for p in picked
    ]


def _score_rows(A: np.ndarray, B: np.ndarray, ref: np.ndarray) -> np.ndarray:
    return segment_point_distance_matrix(A, B, ref).mean(axis=1)


def _unrank_pairs(ranks: np.ndarray, h: int):
    """Invert the lexicographic rank of pairs (i, j), 0 <= i < j < h."""
    i = np.arange(h, dtype=np.int64)
    starts = i * (2 * h - i - 1) // 2  # rank of pair (i, i+1)
    ii = np.searchsorted(starts, ranks, side="right") - 1
    jj = ranks - starts[ii] + ii + 1
    return ii, jj

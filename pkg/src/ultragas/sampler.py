"""Digit-model Monte Carlo for the three metric-measure spaces.

A Haar-uniform point of the closed unit ball is a string of D iid uniform
digits in {0..q-1}; the distance between two points is q**-(index of the
first differing digit), and strings agreeing through all D digits are
*collisions* (the truncation cannot resolve their distance, only bound it
by the cell diameter q**-D).  The open ball shifts every level by one:
distinct points are at distance q**-(1+v) and its measure is 1/q, so ball
integrals carry a q**-N normalization.  A projective-line point is a
uniform cell index in {0..q} plus an open-ball point; different cells are
at distance 1, and the invariant measure makes all q+1 cells equally likely.

Estimates average prod dist(x_i, x_j)**s_ij over iid microstates.  For all
s_ij >= 0 a collision enclosure is reported: the upper mean assigns each
colliding pair the cell diameter, the lower mean assigns factor 0 (the point
estimate uses the diameter, so lower <= mean <= upper).  Negative exponents
give a naive estimate flagged as biased with no enclosure.

Streams are counter-based: stream i draws from Philox keyed by (seed, i),
so the estimate depends only on (seed, workers) and is bitwise reproducible;
stream accumulators merge in fixed index order.
"""

from __future__ import annotations

import itertools
import math
import os
from dataclasses import dataclass
from fractions import Fraction

import numpy as np

from .engine import Space
from .exponents import ExponentSpec

__all__ = [
    "DigitPoint",
    "SpherePoint",
    "McEstimate",
    "dist",
    "sphere_dist",
    "mc_estimate",
    "sample_points",
    "DEFAULT_DEPTH",
    "DEFAULT_SAMPLES",
]

DEFAULT_DEPTH = 32
DEFAULT_SAMPLES = 100_000
_CHUNK = 1 << 15


@dataclass(frozen=True)
class DigitPoint:
    """A depth-truncated point of the closed unit ball."""

    q: int
    digits: tuple[int, ...]

    def __post_init__(self):
        if self.q < 2:
            raise ValueError(f"q must be >= 2, got {self.q}")
        if not self.digits:
            raise ValueError("empty digit string")
        if any(not 0 <= d < self.q for d in self.digits):
            raise ValueError("digit out of range")


@dataclass(frozen=True)
class SpherePoint:
    """A projective-line point: cell index in {0..q} plus an inner ball point."""

    q: int
    ball: int
    inner: DigitPoint

    def __post_init__(self):
        if not 0 <= self.ball <= self.q:
            raise ValueError(f"cell index {self.ball} out of range for q={self.q}")
        if self.inner.q != self.q:
            raise ValueError("inner point has mismatched q")


def dist(x: DigitPoint, y: DigitPoint) -> Fraction | None:
    """q**-v with v the first differing digit index; None on a full-depth collision."""
    if x.q != y.q:
        raise ValueError("points drawn with different q")
    if len(x.digits) != len(y.digits):
        raise ValueError("depth mismatch")
    for v, (a, b) in enumerate(zip(x.digits, y.digits)):
        if a != b:
            return Fraction(1, x.q**v)
    return None


def sphere_dist(a: SpherePoint, b: SpherePoint) -> Fraction | None:
    """1 across different cells; q**-(1+v) inside one cell; None on collision."""
    if a.q != b.q:
        raise ValueError("points drawn with different q")
    if a.ball != b.ball:
        return Fraction(1)
    inner = dist(a.inner, b.inner)
    return None if inner is None else inner / a.q


@dataclass(frozen=True)
class McEstimate:
    mean: float
    std_error: float
    samples: int
    collisions: int
    lower: float | None
    upper: float | None
    biased: bool

    def to_json(self) -> dict:
        return {
            "mean": self.mean,
            "std_error": self.std_error,
            "samples": self.samples,
            "collisions": self.collisions,
            "lower": self.lower,
            "upper": self.upper,
            "biased": self.biased,
        }


def _resolve_workers(workers: int | None) -> int:
    if workers is None:
        env = os.environ.get("ULTRAGAS_WORKERS")
        workers = int(env) if env else (os.cpu_count() or 1)
    if workers < 1:
        raise ValueError(f"workers must be >= 1, got {workers}")
    return workers


def _rng(seed: int, stream: int) -> np.random.Generator:
    key = np.array([seed & 0xFFFFFFFFFFFFFFFF, stream], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def sample_points(space, q: int, count: int, depth: int, seed: int, stream: int = 0):
    """Draw `count` microstate-free points: (digits, cells-or-None) arrays."""
    space = Space.parse(space) if isinstance(space, str) else space
    rng = _rng(seed, stream)
    dtype = np.uint8 if q <= 256 else np.uint16
    digits = rng.integers(0, q, size=(count, depth), dtype=dtype)
    cells = None
    if space.kind == "proj":
        cells = rng.integers(0, q + 1, size=count, dtype=np.uint16)
    return digits, cells


def _exponent_matrix(spec: ExponentSpec) -> np.ndarray:
    n = spec.order
    s = np.zeros((n, n))
    for (i, j), value in spec.entries.items():
        if isinstance(value, complex):
            raise ValueError("Monte Carlo estimation needs real exponents")
        s[i - 1, j - 1] = float(value)
    return s


def _chunk_weights(digits, cells, s, q: float, level_shift: int, depth: int):
    """Per-sample point/lower/upper weights and the collision count of a chunk."""
    count, n = digits.shape[0], digits.shape[1]
    w_point = np.ones(count)
    w_lower = np.ones(count)
    w_upper = np.ones(count)
    collisions = 0
    for i, j in itertools.combinations(range(n), 2):
        sij = s[i, j]
        if sij == 0.0:
            continue
        neq = digits[:, i, :] != digits[:, j, :]
        separated = neq.any(axis=1)
        level = neq.argmax(axis=1) + level_shift
        cap = depth + level_shift
        if cells is not None:
            off_cell = cells[:, i] != cells[:, j]
            colliding = ~(separated | off_cell)
            factor = np.where(off_cell, 1.0, q ** (-(level * sij)))
        else:
            colliding = ~separated
            factor = q ** (-(level * sij))
        collisions += int(colliding.sum())
        diam_factor = q ** (-(cap * sij))
        w_point *= np.where(colliding, diam_factor, factor)
        w_upper *= np.where(colliding, diam_factor, factor)
        w_lower *= np.where(colliding, 0.0, factor)
    return w_point, w_lower, w_upper, collisions


def _merge(count_a, mean_a, m2_a, count_b, mean_b, m2_b):
    """Combine two (count, mean, M2) accumulators (parallel variance merge)."""
    if count_b == 0:
        return count_a, mean_a, m2_a
    count = count_a + count_b
    delta = mean_b - mean_a
    mean = mean_a + delta * count_b / count
    m2 = m2_a + m2_b + delta * delta * count_a * count_b / count
    return count, mean, m2


def mc_estimate(
    space,
    spec: ExponentSpec,
    q: int,
    samples: int,
    *,
    depth: int = DEFAULT_DEPTH,
    seed: int = 0,
    workers: int | None = None,
) -> McEstimate:
    """Monte Carlo estimate of the partition-function integral.

    The open ball scales the average by q**-N (its measure is not normalized);
    the closed ball and the projective line carry probability measures.
    """
    space = Space.parse(space) if isinstance(space, str) else space
    if samples <= 0:
        raise ValueError(f"samples must be > 0, got {samples}")
    if depth <= 0:
        raise ValueError(f"depth must be > 0, got {depth}")
    if not isinstance(q, int) or q < 2:
        raise ValueError(f"sampling requires integer q >= 2, got {q}")
    if space.kind == "ball" and space.v not in (0, 1):
        raise ValueError("sampling supports R, P, and proj")
    workers = _resolve_workers(workers)

    s = _exponent_matrix(spec)
    biased = bool((s < 0).any())
    n = spec.order
    level_shift = 1 if (space.kind == "proj" or space.v == 1) else 0
    scale = float(q) ** (-n) if (space.kind == "ball" and space.v == 1) else 1.0
    qf = float(q)
    dtype = np.uint8 if q <= 256 else np.uint16

    count = 0
    mean = 0.0
    m2 = 0.0
    # plain left-to-right sums: float addition is monotone, so the pointwise
    # order w_lower <= w_point <= w_upper survives into the reported means
    point_sum = 0.0
    lower_sum = 0.0
    upper_sum = 0.0
    collisions = 0

    base, extra = divmod(samples, workers)
    for stream in range(workers):
        todo = base + (1 if stream < extra else 0)
        if todo == 0:
            continue
        rng = _rng(seed, stream)
        s_count, s_mean, s_m2 = 0, 0.0, 0.0
        while todo > 0:
            batch = min(_CHUNK, todo)
            todo -= batch
            digits = rng.integers(0, q, size=(batch, n, depth), dtype=dtype)
            cells = (
                rng.integers(0, q + 1, size=(batch, n), dtype=np.uint16)
                if space.kind == "proj"
                else None
            )
            w_point, w_lower, w_upper, coll = _chunk_weights(
                digits, cells, s, qf, level_shift, depth
            )
            collisions += coll
            point_sum += float(w_point.sum())
            lower_sum += float(w_lower.sum())
            upper_sum += float(w_upper.sum())
            b_mean = float(w_point.mean())
            b_m2 = float(((w_point - b_mean) ** 2).sum())
            s_count, s_mean, s_m2 = _merge(s_count, s_mean, s_m2, batch, b_mean, b_m2)
        count, mean, m2 = _merge(count, mean, m2, s_count, s_mean, s_m2)

    variance = m2 / (count - 1) if count > 1 else 0.0
    std_error = math.sqrt(variance / count) if count > 1 else 0.0
    if biased:
        lower = upper = None
    else:
        lower = scale * lower_sum / count
        upper = scale * upper_sum / count
    return McEstimate(
        mean=scale * point_sum / count,
        std_error=scale * std_error,
        samples=count,
        collisions=collisions,
        lower=lower,
        upper=upper,
        biased=biased,
    )

"""Randomized hyperstructures and geometric predicates.

A hyperstructure is the cloud of random points sampled around a test
instance: take the instance's smallest and largest coordinate, widen that
interval by the threshold parameter on both sides, and draw 4n-1 points
uniformly from the resulting box (one shared scalar interval across all
dimensions).  Its convex hull is the region from which neighbor candidates
may be drawn.
"""

from dataclasses import dataclass, field

import numpy as np

from .lp import EPS_GEOMETRY, feasible_convex_combination
from .rng import Mt19937


def default_point_count(n_dims: int) -> int:
    """Default hyperstructure size: 4n-1 points for n dimensions."""
    return 4 * n_dims - 1


@dataclass
class Hyperstructure:
    """Random point cloud plus the bounding interval that generated it.

    `box_lo`/`box_hi` are the scalar sampling bounds shared by every
    dimension; in per-dimension mode they record the loosest bounds (the
    per-axis intervals are subsets), so every sampled coordinate always lies
    in [box_lo, box_hi).
    """

    points: np.ndarray
    box_lo: float
    box_hi: float
    threshold: float
    test_instance: np.ndarray
    child_seed: int
    per_dimension: bool = field(default=False)


def bounding_interval(x, threshold: float) -> tuple[float, float]:
    """Scalar sampling interval: (min coordinate - threshold, max + threshold)."""
    xv = np.asarray(x, dtype=np.float64)
    if xv.ndim != 1 or xv.size < 1:
        raise ValueError("test instance must be a non-empty 1-D point")
    if not np.isfinite(xv).all():
        raise ValueError("non-finite coordinates")
    if threshold < 0:
        raise ValueError("threshold must be >= 0")
    return float(xv.min() - threshold), float(xv.max() + threshold)


def build_hyperstructure(
    x,
    threshold: float,
    rng: Mt19937,
    point_count: int | None = None,
    per_dimension: bool = False,
    ensure_enclosure: bool = False,
) -> Hyperstructure:
    """Sample the random point cloud around test instance x.

    `point_count` defaults to 4n-1.  With `ensure_enclosure`, sampling is
    retried (up to 32 draws) until x itself lies in the cloud's hull; the
    default leaves the cloud as drawn, in which case x may fall outside.
    Per-dimension mode is experimental: each axis gets its own interval
    [x_j - threshold, x_j + threshold] instead of the shared scalar one.
    """
    xv = np.asarray(x, dtype=np.float64)
    lo, hi = bounding_interval(xv, threshold)
    n = xv.size
    m = default_point_count(n) if point_count is None else point_count
    if m < n + 1:
        raise ValueError(f"point_count {m} < n+1 = {n + 1}: hull would be degenerate")
    if per_dimension:
        if threshold == 0.0:
            raise ValueError("zero-volume box: threshold 0 in per-dimension mode")
    elif lo == hi:
        raise ValueError("zero-volume box: threshold 0 with a constant test instance")

    attempts = 32 if ensure_enclosure else 1
    for _ in range(attempts):
        if per_dimension:
            pts = np.empty((m, n), dtype=np.float64)
            for i in range(m):
                for j in range(n):
                    pts[i, j] = rng.uniform(xv[j] - threshold, xv[j] + threshold)
        else:
            pts = rng.sample_box(lo, hi, n, m)
        h = Hyperstructure(pts, lo, hi, threshold, xv.copy(), rng.seed, per_dimension)
        if not ensure_enclosure or contains(h, xv):
            return h
    raise RuntimeError(
        "ensure_enclosure: test instance still outside the hull after 32 resamples"
    )


def contains(h: Hyperstructure, q, eps: float = EPS_GEOMETRY) -> bool:
    """Whether q lies in the convex hull of the hyperstructure's points."""
    return feasible_convex_combination(h.points, q, eps).inside


def collinear3(a, b, c, eps: float = 1e-12) -> bool:
    """Whether three 2-D points lie on one line, within relative tolerance.

    Evaluates the homogeneous 3x3 determinant; the tolerance scales with the
    squared coordinate magnitude because the determinant is quadratic in the
    inputs.  eps=0 demands an exactly zero determinant.
    """
    (ax, ay), (bx, by), (cx, cy) = (float(a[0]), float(a[1])), (
        float(b[0]),
        float(b[1]),
    ), (float(c[0]), float(c[1]))
    det = (bx - ax) * (cy - ay) - (cx - ax) * (by - ay)
    coord = max(1.0, abs(ax), abs(ay), abs(bx), abs(by), abs(cx), abs(cy))
    return abs(det) <= eps * coord * coord

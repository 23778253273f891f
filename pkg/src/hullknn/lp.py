"""Point-in-convex-hull decisions via phase-1 simplex feasibility.

A query q lies in the hull of points p_1..p_m exactly when the system

    alpha_i >= 0,  sum alpha_i = 1,  sum alpha_i * (p_i - q) = 0

is feasible.  We decide this by minimizing the sum of artificial variables
(phase 1 of the simplex method) with Bland's anti-cycling pivot rule, which
terminates on degenerate inputs (duplicate or coplanar points).

Preconditioning: points are translated by -q and divided by the largest
resulting coordinate magnitude, so the solve always runs on data in
[-1, 1]^n and tolerances are relative.  The reported residual (the phase-1
optimum) is in these normalized units.  Queries within twice the tolerance
of the cut count as inside: the hull is a closed set, so boundary contact is
membership.

The simplex kernel is numba-compiled: the neighbor gate solves one instance
per (test point, training point) pair, millions per benchmark run.
"""

from dataclasses import dataclass

import numpy as np
from numba import njit

# Relative geometric tolerance: inclusion cut at 2x, certificate audits at 1x.
EPS_GEOMETRY = 1e-9
# Slack allowed on the certificate's simplex constraints.
EPS_ALPHA = 1e-7

_PIVOT_TOL = 1e-11


@dataclass
class MembershipResult:
    """Hull-membership verdict with its convex-combination certificate.

    `alpha` is the coefficient vector (one weight per hull point) when the
    verdict is inside, else None.  `residual` is the achieved phase-1
    objective in box-normalized units; outside verdicts have residual above
    the inclusion cut.
    """

    inside: bool
    alpha: np.ndarray | None
    residual: float


@njit(cache=True)
def _phase1(pn):
    """Phase-1 simplex on normalized translated points pn (m x n).

    Feasibility system: sum_i alpha_i * pn[i] = 0, sum_i alpha_i = 1,
    alpha >= 0.  Returns (optimum, alpha).  Bland's rule: entering column is
    the smallest-index eligible alpha variable, ratio ties leave the row
    whose basic variable has the smallest index; artificials never re-enter.
    """
    m, n = pn.shape
    rows = n + 1
    rhs = m + rows  # index of the right-hand-side column
    T = np.zeros((rows + 1, rhs + 1))
    basis = np.empty(rows, np.int64)

    for j in range(n):
        for i in range(m):
            T[j, i] = pn[i, j]
    for i in range(m):
        T[rows - 1, i] = 1.0
    T[rows - 1, rhs] = 1.0
    for r in range(rows):
        T[r, m + r] = 1.0
        basis[r] = m + r

    # Reduced-cost row for the artificial objective: column sums over alpha
    # columns (artificial columns start at exactly zero).
    obj = rows
    for i in range(m):
        s = 0.0
        for r in range(rows):
            s += T[r, i]
        T[obj, i] = s
    T[obj, rhs] = 1.0

    max_pivots = 200 * (m + rows)
    for _ in range(max_pivots):
        enter = -1
        for j in range(m):
            if T[obj, j] > _PIVOT_TOL:
                enter = j
                break
        if enter < 0:
            break

        leave = -1
        best = 0.0
        for r in range(rows):
            a = T[r, enter]
            if a > _PIVOT_TOL:
                ratio = T[r, rhs] / a
                if leave < 0:
                    best = ratio
                    leave = r
                    continue
                window = 1e-12 * (1.0 + abs(best))
                if ratio < best - window:
                    best = ratio
                    leave = r
                elif ratio <= best + window and basis[r] < basis[leave]:
                    leave = r
        if leave < 0:
            break  # cannot happen for a bounded phase-1 objective; guard only

        piv = T[leave, enter]
        for c in range(rhs + 1):
            T[leave, c] /= piv
        T[leave, enter] = 1.0
        for r in range(rows + 1):
            if r == leave:
                continue
            f = T[r, enter]
            if f != 0.0:
                for c in range(rhs + 1):
                    T[r, c] -= f * T[leave, c]
                T[r, enter] = 0.0
        basis[leave] = enter

    # Read the objective off the final basis (sum of surviving artificials)
    # instead of the eliminated objective row, which accumulates drift.
    w = 0.0
    alpha = np.zeros(m)
    for r in range(rows):
        value = T[r, rhs]
        if value < 0.0:
            value = 0.0
        if basis[r] < m:
            alpha[basis[r]] = value
        else:
            w += value
    return w, alpha


@njit(cache=True)
def _membership_batch(P, Q, eps):
    """Hull membership of every row of Q against hull points P.

    Queries strictly outside the hull points' bounding box (beyond the
    boundary band) are rejected without a solve; everything else runs the
    full phase-1 kernel.  Returns a boolean verdict per query.
    """
    nq = Q.shape[0]
    m, n = P.shape
    inside = np.zeros(nq, np.bool_)

    lo = np.empty(n)
    hi = np.empty(n)
    for j in range(n):
        lo[j] = P[0, j]
        hi[j] = P[0, j]
    for i in range(1, m):
        for j in range(n):
            v = P[i, j]
            if v < lo[j]:
                lo[j] = v
            if v > hi[j]:
                hi[j] = v

    pn = np.empty((m, n))
    for k in range(nq):
        scale = 0.0
        for i in range(m):
            for j in range(n):
                d = abs(P[i, j] - Q[k, j])
                if d > scale:
                    scale = d
        if scale == 0.0:
            inside[k] = True  # every hull point coincides with the query
            continue

        box_gap = 0.0
        for j in range(n):
            g = lo[j] - Q[k, j]
            if Q[k, j] - hi[j] > g:
                g = Q[k, j] - hi[j]
            if g > box_gap:
                box_gap = g
        if box_gap > 4.0 * eps * scale:
            continue  # residual would exceed the cut: hull is inside the box

        for i in range(m):
            for j in range(n):
                pn[i, j] = (P[i, j] - Q[k, j]) / scale
        w, _ = _phase1(pn)
        inside[k] = w <= 2.0 * eps
    return inside


def _check_points(P: np.ndarray, q: np.ndarray) -> None:
    if P.ndim != 2 or P.shape[0] < 1:
        raise ValueError("hull point set must be a non-empty 2-D array")
    if q.shape != (P.shape[1],):
        raise ValueError(
            f"dimension mismatch: hull points are {P.shape[1]}-D, query is {q.shape}"
        )
    if not (np.isfinite(P).all() and np.isfinite(q).all()):
        raise ValueError("non-finite coordinates")


def feasible_convex_combination(
    points, q, eps: float = EPS_GEOMETRY
) -> MembershipResult:
    """Decide whether q is a convex combination of `points`.

    Returns the verdict together with the certificate alpha (inside only)
    and the phase-1 residual in normalized units.  `eps` is the relative
    feasibility tolerance; the inclusion cut sits at twice its value so that
    boundary points land inside.
    """
    P = np.ascontiguousarray(points, dtype=np.float64)
    qv = np.ascontiguousarray(q, dtype=np.float64)
    _check_points(P, qv)
    if eps <= 0:
        raise ValueError("eps must be positive")

    t = P - qv
    scale = float(np.abs(t).max())
    if scale == 0.0:
        m = P.shape[0]
        return MembershipResult(True, np.full(m, 1.0 / m), 0.0)

    w, alpha = _phase1(t / scale)
    inside = w <= 2.0 * eps
    return MembershipResult(inside, alpha if inside else None, float(w))


def membership_batch(points, queries, eps: float = EPS_GEOMETRY) -> np.ndarray:
    """Vectorized verdicts for many queries against one hull point set."""
    P = np.ascontiguousarray(points, dtype=np.float64)
    Q = np.ascontiguousarray(queries, dtype=np.float64)
    if Q.ndim != 2 or Q.shape[1] != P.shape[1]:
        raise ValueError("queries must be 2-D with the hull points' dimensionality")
    if not (np.isfinite(P).all() and np.isfinite(Q).all()):
        raise ValueError("non-finite coordinates")
    return _membership_batch(P, Q, eps)

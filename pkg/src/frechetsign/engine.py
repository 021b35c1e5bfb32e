"""Frechet decision procedures and exact distances via critical roots.

Three deciders for d_F(sigma, tau) <= r live here:

  * decide_frechet: interval propagation over the free-space diagram,
    returning a monotone witness matching when feasible;
  * decide_weak_frechet: connectivity (not monotone reachability) over the
    free-space cells;
  * decide_from_sign_vector: the same decisions from a sign vector alone,
    with no access to coordinates.

Exact distances come from binary search over the critical radii where some
polynomial sign flips; the minimum feasible radius is always one of them.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Tuple

import numpy as np
from numba import njit

from ._numeric import EPS_CMP, Surd, is_exact, sign_of
from .geometry import PolygonalCurve, dist_sq, dot, norm_sq, sub
from .polynomials import (
    CriticalValueSet,
    PolynomialSet,
    SignVector,
    _dist_le_rsq,
    _point_edge_le,
    critical_values,
    polynomial_set,
    predicate_from_signs,
    sign_vector_rsq,
)

__all__ = [
    "FreeSpaceDecision",
    "FrechetResult",
    "decide_frechet",
    "decide_weak_frechet",
    "decide_from_sign_vector",
    "frechet_distance",
    "discrete_frechet_oracle",
    "parametric_point",
]


@dataclass(frozen=True)
class FreeSpaceDecision:
    """Outcome of a single d_F <= r decision.

    witness, present only when feasible, is a monotone sequence of
    (tau parameter, sigma parameter) breakpoints in edge units: tau
    parameter t in [0, m-1] means the point at fraction t - floor(t) along
    edge floor(t).
    """

    feasible: bool
    witness: Optional[Tuple[Tuple[float, float], ...]] = None


def parametric_point(curve: PolygonalCurve, t: float) -> tuple:
    """Point at edge-unit parameter t in [0, size-1]."""
    n = curve.size
    if t <= 0:
        return curve.vertices[0]
    if t >= n - 1:
        return curve.vertices[-1]
    i = min(int(t), n - 2)
    frac = t - i
    a, b = curve.vertices[i], curve.vertices[i + 1]
    return tuple(x + frac * (y - x) for x, y in zip(a, b))


def _free_interval(c, a, b, rsq, exact):
    """ball(c, sqrt(rsq)) cap segment ab, as a parameter interval or None."""
    e = sub(b, a)
    A = norm_sq(e)
    B = dot(sub(a, c), e)
    C = dist_sq(a, c) - rsq
    D = B * B - A * C
    if exact:
        if D < 0:
            return None
        Af = Fraction(A)
        lo = Surd(Fraction(-B) / Af, Fraction(-1) / Af, Fraction(D))
        hi = Surd(Fraction(-B) / Af, Fraction(1) / Af, Fraction(D))
        zero, one = Fraction(0), Fraction(1)
    else:
        scale = float(B * B) + abs(float(A * C))
        if D < -EPS_CMP * scale:
            return None
        sq = math.sqrt(max(float(D), 0.0))
        lo = (-float(B) - sq) / float(A)
        hi = (-float(B) + sq) / float(A)
        zero, one = 0.0, 1.0
    if hi < zero or lo > one:
        return None
    if lo < zero:
        lo = zero
    if hi > one:
        hi = one
    return (lo, hi)


def _clip_low(interval, bound):
    """interval cap [bound, +inf), or None."""
    if interval is None:
        return None
    lo, hi = interval
    if hi < bound:
        return None
    if lo < bound:
        lo = bound
    return (lo, hi)


def _decide_core(sigma, tau, rsq, exact, want_witness=False):
    V, W = tau.vertices, sigma.vertices
    m, k = len(V), len(W)
    if not (_dist_le_rsq(dist_sq(V[0], W[0]), rsq)
            and _dist_le_rsq(dist_sq(V[m - 1], W[k - 1]), rsq)):
        return FreeSpaceDecision(False)
    # boundary free intervals: vertical line x=i meets sigma edge j within
    # the ball of tau vertex i; horizontal line y=j the mirror
    L = [[_free_interval(V[i], W[j], W[j + 1], rsq, exact)
          for j in range(k - 1)] for i in range(m)]
    Bt = [[_free_interval(W[j], V[i], V[i + 1], rsq, exact)
           for j in range(k)] for i in range(m - 1)]
    zero = Fraction(0) if exact else 0.0
    LR = [[None] * (k - 1) for _ in range(m)]
    BR = [[None] * k for _ in range(m - 1)]
    LR[0][0] = (zero, zero)
    BR[0][0] = (zero, zero)
    parent = {("L", 0, 0): "start", ("B", 0, 0): "start"}
    for i in range(m - 1):
        for j in range(k - 1):
            lr, br = LR[i][j], BR[i][j]
            if lr is None and br is None:
                continue
            # right boundary of the cell: from the bottom any point of the
            # free interval is reachable; from the left only params >= the
            # lowest reachable left param (monotonicity)
            if br is not None:
                cand = L[i + 1][j]
                via = ("B", i, j)
            else:
                cand = _clip_low(L[i + 1][j], lr[0])
                via = ("L", i, j)
            if cand is not None:
                LR[i + 1][j] = cand
                parent[("L", i + 1, j)] = via
            if lr is not None:
                cand = Bt[i][j + 1]
                via = ("L", i, j)
            else:
                cand = _clip_low(Bt[i][j + 1], br[0])
                via = ("B", i, j)
            if cand is not None:
                BR[i][j + 1] = cand
                parent[("B", i, j + 1)] = via
    end = None
    if LR[m - 1][k - 2] is not None:
        end = ("L", m - 1, k - 2)
    elif BR[m - 2][k - 1] is not None:
        end = ("B", m - 2, k - 1)
    if end is None:
        return FreeSpaceDecision(False)
    if not want_witness:
        return FreeSpaceDecision(True)
    # walk parents back; each boundary contributes its lowest reachable
    # param, which keeps the breakpoint sequence monotone in both axes
    chain = []
    key = end
    while key != "start":
        kind, i, j = key
        if kind == "L":
            chain.append((float(i), j + float(LR[i][j][0])))
        else:
            chain.append((i + float(BR[i][j][0]), float(j)))
        key = parent[key]
    chain.append((0.0, 0.0))
    chain.reverse()
    chain.append((float(m - 1), float(k - 1)))
    witness = []
    for pt in chain:
        if not witness or pt != witness[-1]:
            witness.append(pt)
    return FreeSpaceDecision(True, tuple(witness))


def _is_exact_instance(sigma, tau, r) -> bool:
    return is_exact(r) and sigma.is_rational() and tau.is_rational()


def _check_pair(sigma, tau, r):
    if sigma.dim != tau.dim:
        raise ValueError("curves have different dimensions")
    if is_exact(r):
        if r < 0:
            raise ValueError("radius must be nonnegative")
    elif not (math.isfinite(r) and r >= 0):
        raise ValueError("radius must be finite and nonnegative")


def decide_frechet(sigma: PolygonalCurve, tau: PolygonalCurve, r,
                   want_witness: bool = True) -> FreeSpaceDecision:
    """Decide d_F(sigma, tau) <= r (closed-ball semantics)."""
    _check_pair(sigma, tau, r)
    exact = _is_exact_instance(sigma, tau, r)
    rsq = Fraction(r) ** 2 if exact else float(r) ** 2
    return _decide_core(sigma, tau, rsq, exact, want_witness)


def _decide_weak_core(sigma, tau, rsq) -> bool:
    V, W = tau.vertices, sigma.vertices
    m, k = len(V), len(W)
    if not (_dist_le_rsq(dist_sq(V[0], W[0]), rsq)
            and _dist_le_rsq(dist_sq(V[m - 1], W[k - 1]), rsq)):
        return False

    def vdoor(i, j):  # between cells (i-1, j) and (i, j): tau vertex i
        return _point_edge_le(V[i], W[j], W[j + 1], rsq)

    def hdoor(i, j):  # between cells (i, j-1) and (i, j): sigma vertex j
        return _point_edge_le(W[j], V[i], V[i + 1], rsq)

    target = (m - 2, k - 2)
    seen = {(0, 0)}
    dq = deque([(0, 0)])
    while dq:
        i, j = dq.popleft()
        if (i, j) == target:
            return True
        steps = []
        if i + 1 <= m - 2 and vdoor(i + 1, j):
            steps.append((i + 1, j))
        if i - 1 >= 0 and vdoor(i, j):
            steps.append((i - 1, j))
        if j + 1 <= k - 2 and hdoor(i, j + 1):
            steps.append((i, j + 1))
        if j - 1 >= 0 and hdoor(i, j):
            steps.append((i, j - 1))
        for nxt in steps:
            if nxt not in seen:
                seen.add(nxt)
                dq.append(nxt)
    return False


def decide_weak_frechet(sigma: PolygonalCurve, tau: PolygonalCurve, r) -> bool:
    """Decide the weak variant: free-space connectivity without monotonicity."""
    _check_pair(sigma, tau, r)
    exact = _is_exact_instance(sigma, tau, r)
    rsq = Fraction(r) ** 2 if exact else float(r) ** 2
    return _decide_weak_core(sigma, tau, rsq)


# ---------------------------------------------------------------------------
# Decision from a sign vector alone.
#
# The monotone path decomposes into alternating runs: within one column
# (fixed tau edge) it crosses consecutive horizontal grid lines, within one
# row consecutive vertical lines.  A run over lines a_1 < ... < a_t is
# traversable iff each crossing interval is nonempty (P3/P4) and every pair
# admits ordered representatives (P5/P6): picking the running max of the
# interval minima is monotone and stays inside every interval.  Turns inside
# a cell need no predicate because the per-cell free space is convex.
# ---------------------------------------------------------------------------


def decide_from_sign_vector(signs: SignVector, weak: bool = False) -> bool:
    """Decide d_F <= r (or the weak variant) from polynomial signs alone."""
    if signs.signs[0] < 0:
        raise ValueError("sign vector was taken at a negative radius")
    if signs.weak_only and not weak:
        raise ValueError("strong decision needs the full polynomial set")
    m, k = signs.m, signs.k
    if not (predicate_from_signs(("P1",), signs)
            and predicate_from_signs(("P2",), signs)):
        return False

    memo = {}

    def pred(*p):
        v = memo.get(p)
        if v is None:
            v = memo[p] = predicate_from_signs(p, signs)
        return v

    if weak:
        return _weak_from_preds(m, k, pred)
    return _strong_from_preds(m, k, pred)


def _weak_from_preds(m, k, pred) -> bool:
    target = (m - 2, k - 2)
    seen = {(0, 0)}
    dq = deque([(0, 0)])
    while dq:
        i, j = dq.popleft()
        if (i, j) == target:
            return True
        steps = []
        if i + 1 <= m - 2 and pred("P4", i + 2, j + 1):
            steps.append((i + 1, j))
        if i - 1 >= 0 and pred("P4", i + 1, j + 1):
            steps.append((i - 1, j))
        if j + 1 <= k - 2 and pred("P3", i + 1, j + 2):
            steps.append((i, j + 1))
        if j - 1 >= 0 and pred("P3", i + 1, j + 1):
            steps.append((i, j - 1))
        for nxt in steps:
            if nxt not in seen:
                seen.add(nxt)
                dq.append(nxt)
    return False


def _strong_from_preds(m, k, pred) -> bool:
    # cells are 0-based; state ("V", i, j0, j) means: in column i, the
    # current run crossed horizontal lines j0..j, path is in cell (i, j);
    # ("H", j, i0, i) is the transpose
    if m == 2 and k == 2:
        return True
    target = (m - 2, k - 2)
    seen = set()
    work = []
    if k > 2 and pred("P3", 1, 2):
        work.append(("V", 0, 1, 1))
    if m > 2 and pred("P4", 2, 1):
        work.append(("H", 0, 1, 1))
    while work:
        st = work.pop()
        if st in seen:
            continue
        seen.add(st)
        if st[0] == "V":
            _, i, j0, j = st
            if (i, j) == target:
                return True
            if (j + 1 <= k - 2 and pred("P3", i + 1, j + 2)
                    and all(pred("P5", i + 1, a + 1, j + 2)
                            for a in range(j0, j + 1))):
                work.append(("V", i, j0, j + 1))
            if i + 1 <= m - 2 and pred("P4", i + 2, j + 1):
                work.append(("H", j, i + 1, i + 1))
        else:
            _, j, i0, i = st
            if (i, j) == target:
                return True
            if (i + 1 <= m - 2 and pred("P4", i + 2, j + 1)
                    and all(pred("P6", a + 1, i + 2, j + 1)
                            for a in range(i0, i + 1))):
                work.append(("H", j, i0, i + 1))
            if j + 1 <= k - 2 and pred("P3", i + 1, j + 2):
                work.append(("V", i, j + 1, j + 1))
    return False


# ---------------------------------------------------------------------------
# Exact distance: the minimum feasible r is a critical root, and the set of
# candidates always contains a feasible one (the largest vertex-pair
# distance), so first-true binary search over the sorted roots terminates.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class FrechetResult:
    value: float
    rsq: object
    witness: Optional[Tuple[Tuple[float, float], ...]]
    index: int
    critical: CriticalValueSet


def frechet_distance(sigma: PolygonalCurve, tau: PolygonalCurve,
                     weak: bool = False) -> FrechetResult:
    """Minimum r with d <= r, found among the critical radii."""
    if sigma.dim != tau.dim:
        raise ValueError("curves have different dimensions")
    exact = sigma.is_rational() and tau.is_rational()
    pset = polynomial_set(tau, sigma.size, weak_only=weak)
    cvs = critical_values(pset, sigma)

    def candidate_rsq(idx: int):
        if exact:
            return cvs.rsq[idx]
        # closed-ball semantics at a root: float tangencies must count as
        # feasible, so nudge the candidate up by the comparison tolerance
        v = float(cvs.values[idx])
        return (v + EPS_CMP * (1.0 + v)) ** 2

    def feasible(idx: int) -> bool:
        rsq = candidate_rsq(idx)
        if weak:
            return _decide_weak_core(sigma, tau, rsq)
        return _decide_core(sigma, tau, rsq, exact).feasible

    lo, hi = 0, len(cvs.values) - 1
    if not feasible(hi):
        raise AssertionError("no feasible critical radius; root set incomplete")
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(mid):
            hi = mid
        else:
            lo = mid + 1
    witness = None
    if not weak:
        witness = _decide_core(sigma, tau, candidate_rsq(lo), exact,
                               want_witness=True).witness
    return FrechetResult(value=cvs.values[lo], rsq=cvs.rsq[lo],
                         witness=witness, index=lo, critical=cvs)


# ---------------------------------------------------------------------------
# Discrete Frechet on refined curves: the test oracle.
# ---------------------------------------------------------------------------


@njit(cache=True)
def _dfd_sq(P, Q):  # pragma: no cover - exercised through the wrapper
    n, m = P.shape[0], Q.shape[0]
    d = P.shape[1]
    prev = np.empty(m)
    cur = np.empty(m)
    for i in range(n):
        for j in range(m):
            dist = 0.0
            for c in range(d):
                diff = P[i, c] - Q[j, c]
                dist += diff * diff
            if i == 0 and j == 0:
                best = 0.0
            elif i == 0:
                best = cur[j - 1]
            elif j == 0:
                best = prev[0]
            else:
                best = min(prev[j], prev[j - 1], cur[j - 1])
            cur[j] = max(best, dist)
        prev, cur = cur, prev
    return prev[m - 1]


def _refined(curve: PolygonalCurve, refinement: int) -> np.ndarray:
    pts = []
    vs = [tuple(float(c) for c in v) for v in curve.vertices]
    for a, b in zip(vs[:-1], vs[1:]):
        for t in range(refinement):
            f = t / refinement
            pts.append([x + f * (y - x) for x, y in zip(a, b)])
    pts.append(list(vs[-1]))
    return np.asarray(pts, dtype=np.float64)


def discrete_frechet_oracle(sigma: PolygonalCurve, tau: PolygonalCurve,
                            refinement: int = 1) -> float:
    """Discrete Frechet distance on refinement-fold subdivided curves.

    Upper-bounds d_F and converges to it: the gap is at most the point
    spacing, i.e. (max edge length) / refinement.
    """
    if refinement < 1:
        raise ValueError("refinement must be >= 1")
    return math.sqrt(_dfd_sq(_refined(sigma, refinement),
                             _refined(tau, refinement)))

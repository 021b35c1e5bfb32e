"""Polynomial encodings of the six Frechet decision predicates.

For a fixed curve tau of m vertices and a moving curve sigma of k vertices,
six predicate families decide d_F(sigma, tau) <= r:

  P1: d(v_1, w_1) <= r
  P2: d(v_m, w_k) <= r
  P3(i, j): d(w_j, edge v_i v_{i+1}) <= r
  P4(i, j): d(v_i, edge w_j w_{j+1}) <= r
  P5(i, j, j'): exist p, q on aff(v_i v_{i+1}) with d(p, w_j) <= r,
      d(q, w_{j'}) <= r and p = q or pq pointing like v_i v_{i+1}
  P6(i, i', j): the mirror of P5 with the line on a sigma edge and the two
      off-line points being vertices v_i, v_{i'} of tau

Each predicate is implemented twice: directly from geometry, and from the
signs of a fixed polynomial family whose members are polynomials in the
sigma coordinates and r (only even powers of r, except f0 = r).  The two
routes are independent and their agreement is the core property test.

The f4,* and f6,* formulas are not spelled out one by one in the underlying
construction; they are derived mechanically from f3,* and f5,* by swapping
the roles of the two curves (the supporting edge moves to sigma and the
off-edge points become vertices of tau).  Each derived formula is written
out below next to its template.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Optional, Sequence, Tuple

from ._numeric import EPS_CMP, sign_of, sign_sum_sqrt2, is_exact
from .geometry import PolygonalCurve, dot, sub, norm_sq, dist_sq

__all__ = [
    "PolynomialId",
    "PolynomialSet",
    "SignVector",
    "CriticalValueSet",
    "enumerate_ids",
    "polynomial_set",
    "eval_polynomial",
    "eval_polynomial_terms",
    "predicate_ids",
    "predicate_geometric",
    "predicate_from_signs",
    "sign_vector",
    "sign_vector_rsq",
    "critical_values",
]

FAMILY_SUBS = {"f0": (0,), "f1": (0,), "f2": (0,), "f3": (1, 2, 3, 4, 5),
               "f4": (1, 2, 3, 4, 5), "f5": (1, 2, 3, 4), "f6": (1, 2, 3, 4)}


@dataclass(frozen=True)
class PolynomialId:
    """Index of one polynomial: family, sub-index, and curve indices.

    Indices are 1-based as is conventional for vertex numbering:
    f3 uses i in [m-1] (tau edge), j in [k]; f4 uses i in [m], j in [k-1]
    (sigma edge); f5 uses i in [m-1], j < j' in [k]; f6 uses i < i' in [m],
    j in [k-1].
    """

    family: str
    sub: int = 0
    i: int = 0
    iprime: int = 0
    j: int = 0
    jprime: int = 0


@lru_cache(maxsize=256)
def enumerate_ids(m: int, k: int, weak_only: bool = False) -> Tuple[PolynomialId, ...]:
    """Canonical ordering of all polynomial ids for sizes (m, k)."""
    ids = [PolynomialId("f0"), PolynomialId("f1"), PolynomialId("f2")]
    for i in range(1, m):
        for j in range(1, k + 1):
            for sub_ in FAMILY_SUBS["f3"]:
                ids.append(PolynomialId("f3", sub_, i=i, j=j))
    for i in range(1, m + 1):
        for j in range(1, k):
            for sub_ in FAMILY_SUBS["f4"]:
                ids.append(PolynomialId("f4", sub_, i=i, j=j))
    if not weak_only:
        for i in range(1, m):
            for j in range(1, k):
                for jp in range(j + 1, k + 1):
                    for sub_ in FAMILY_SUBS["f5"]:
                        ids.append(PolynomialId("f5", sub_, i=i, j=j, jprime=jp))
        for i in range(1, m):
            for ip in range(i + 1, m + 1):
                for j in range(1, k):
                    for sub_ in FAMILY_SUBS["f6"]:
                        ids.append(PolynomialId("f6", sub_, i=i, iprime=ip, j=j))
    return tuple(ids)


@lru_cache(maxsize=256)
def _index_map(m: int, k: int, weak_only: bool = False):
    return {pid: n for n, pid in enumerate(enumerate_ids(m, k, weak_only))}


@dataclass(frozen=True)
class PolynomialSet:
    """All polynomials for a fixed tau and a sigma size k."""

    tau: PolygonalCurve
    k: int
    weak_only: bool = False

    @property
    def m(self) -> int:
        return self.tau.size

    @property
    def ids(self) -> Tuple[PolynomialId, ...]:
        return enumerate_ids(self.m, self.k, self.weak_only)

    def index_of(self, pid: PolynomialId) -> int:
        return _index_map(self.m, self.k, self.weak_only)[pid]


def polynomial_set(tau: PolygonalCurve, k: int, weak_only: bool = False) -> PolynomialSet:
    if k < 2:
        raise ValueError("sigma size k must be >= 2")
    return PolynomialSet(tau, k, weak_only)


@dataclass(frozen=True)
class SignVector:
    """Signs of a PolynomialSet at one point (sigma, r), canonical order."""

    signs: Tuple[int, ...]
    m: int
    k: int
    weak_only: bool = False

    def __post_init__(self):
        if len(self.signs) != len(enumerate_ids(self.m, self.k, self.weak_only)):
            raise ValueError("sign vector length does not match (m, k)")

    def sign(self, pid: PolynomialId) -> int:
        return self.signs[_index_map(self.m, self.k, self.weak_only)[pid]]

    def key(self) -> bytes:
        """Compact 2-bit-per-entry encoding, usable as a cache key."""
        out = bytearray((len(self.signs) + 3) // 4)
        for n, s in enumerate(self.signs):
            out[n >> 2] |= (s + 1) << ((n & 3) << 1)
        return bytes(out)


# ---------------------------------------------------------------------------
# Evaluation.  Each family returns a list of additive terms so the float
# path can derive a magnitude scale for sign classification.  All formulas
# are polynomials in the sigma coordinates and s = r^2 (f0 excepted).
# ---------------------------------------------------------------------------


def _check_ranges(pid: PolynomialId, m: int, k: int) -> None:
    f = pid.family
    ok = True
    if f not in FAMILY_SUBS or pid.sub not in FAMILY_SUBS[f]:
        ok = False
    elif f == "f3":
        ok = 1 <= pid.i <= m - 1 and 1 <= pid.j <= k
    elif f == "f4":
        ok = 1 <= pid.i <= m and 1 <= pid.j <= k - 1
    elif f == "f5":
        ok = 1 <= pid.i <= m - 1 and 1 <= pid.j < pid.jprime <= k
    elif f == "f6":
        ok = 1 <= pid.i < pid.iprime <= m and 1 <= pid.j <= k - 1
    if not ok:
        raise ValueError(f"polynomial id out of range for (m={m}, k={k}): {pid}")


def _f31_terms(v1, v2, w, rsq):
    # ((d(w, aff(v1 v2))^2 - r^2) * |v1 - v2|^2, expanded
    a = sub(w, v2)
    e = sub(v1, v2)
    return [norm_sq(a) * norm_sq(e), -dot(a, e) ** 2, -rsq * norm_sq(e)]


def _f52_terms(vi, vi1, wj, wjp, rsq):
    # squared distance of w_j' to the projection of w_j on aff(vi vi1),
    # compared with r^2, everything times |vi - vi1|^2
    a = sub(wjp, vi1)
    e = sub(vi, vi1)
    return [
        norm_sq(a) * norm_sq(e),
        -dot(a, e) ** 2,
        dot(sub(wj, wjp), e) ** 2,
        -rsq * norm_sq(e),
    ]


def eval_polynomial_terms(pid: PolynomialId, pset: PolynomialSet,
                          sigma: PolygonalCurve, rsq, r=None) -> list:
    """Additive terms of the polynomial value at (sigma, r^2 = rsq).

    f0 needs r itself; pass it via ``r`` (defaults to +sqrt(rsq) sign-wise,
    which is only used by callers that guarantee r >= 0).
    """
    V = pset.tau.vertices
    W = sigma.vertices
    m, k = len(V), len(W)
    _check_ranges(pid, m, k)
    f, s = pid.family, pid.sub
    if f == "f0":
        return [r if r is not None else rsq]
    if f == "f1":
        return [dist_sq(V[0], W[0]), -rsq]
    if f == "f2":
        return [dist_sq(V[m - 1], W[k - 1]), -rsq]
    if f == "f3":
        v1, v2, w = V[pid.i - 1], V[pid.i], W[pid.j - 1]
        if s == 1:
            return _f31_terms(v1, v2, w, rsq)
        if s == 2:
            return [dot(sub(w, v1), sub(v2, v1))]
        if s == 3:
            return [dot(sub(w, v2), sub(v1, v2))]
        if s == 4:
            return [dist_sq(w, v1), -rsq]
        return [dist_sq(w, v2), -rsq]
    if f == "f4":
        # mirror of f3: supporting edge w_j w_{j+1} on sigma, point v_i
        w1, w2, v = W[pid.j - 1], W[pid.j], V[pid.i - 1]
        if s == 1:
            return _f31_terms(w1, w2, v, rsq)
        if s == 2:
            return [dot(sub(v, w1), sub(w2, w1))]
        if s == 3:
            return [dot(sub(v, w2), sub(w1, w2))]
        if s == 4:
            return [dist_sq(v, w1), -rsq]
        return [dist_sq(v, w2), -rsq]
    if f == "f5":
        vi, vi1 = V[pid.i - 1], V[pid.i]
        wj, wjp = W[pid.j - 1], W[pid.jprime - 1]
        if s == 1:
            return [dot(sub(wjp, wj), sub(vi1, vi))]
        if s == 2:
            return _f52_terms(vi, vi1, wj, wjp, rsq)
        f31_j = sum(_f31_terms(vi, vi1, wj, rsq))
        f31_jp = sum(_f31_terms(vi, vi1, wjp, rsq))
        f51 = dot(sub(wjp, wj), sub(vi1, vi))
        if s == 3:
            return [f31_j, f51 ** 2, -f31_jp]
        f53 = f31_j + f51 ** 2 - f31_jp
        return [f53 ** 2, 4 * f51 ** 2 * f31_jp]
    # f6: mirror of f5 with the line on sigma edge w_j w_{j+1} and the two
    # off-line points being v_i and v_{i'}
    wj, wj1 = W[pid.j - 1], W[pid.j]
    vi, vip = V[pid.i - 1], V[pid.iprime - 1]
    if s == 1:
        return [dot(sub(vip, vi), sub(wj1, wj))]
    if s == 2:
        return _f52_terms(wj, wj1, vi, vip, rsq)
    f41_i = sum(_f31_terms(wj, wj1, vi, rsq))
    f41_ip = sum(_f31_terms(wj, wj1, vip, rsq))
    f61 = dot(sub(vip, vi), sub(wj1, wj))
    if s == 3:
        return [f41_i, f61 ** 2, -f41_ip]
    f63 = f41_i + f61 ** 2 - f41_ip
    return [f63 ** 2, 4 * f61 ** 2 * f41_ip]


def eval_polynomial(pid: PolynomialId, pset: PolynomialSet,
                    sigma: PolygonalCurve, r):
    """Value of the polynomial at (sigma, r)."""
    _check_curve(pset, sigma)
    return sum(eval_polynomial_terms(pid, pset, sigma, r * r, r=r))


def _term_sign(terms) -> int:
    value = sum(terms)
    if is_exact(value):
        return (value > 0) - (value < 0)
    scale = max((abs(float(t)) for t in terms), default=0.0)
    return sign_of(float(value), scale)


def _check_curve(pset: PolynomialSet, sigma: PolygonalCurve) -> None:
    if sigma.size != pset.k:
        raise ValueError(f"sigma has {sigma.size} vertices, set expects {pset.k}")
    if sigma.dim != pset.tau.dim:
        raise ValueError("sigma/tau dimension mismatch")


def sign_vector_rsq(pset: PolynomialSet, sigma: PolygonalCurve, rsq,
                    r_negative: bool = False) -> SignVector:
    """Sign vector at squared radius rsq with r = +sqrt(rsq).

    Exact when tau, sigma and rsq are rational, which covers radii that are
    square roots of rationals (critical values).
    """
    _check_curve(pset, sigma)
    signs = []
    for pid in pset.ids:
        if pid.family == "f0":
            s = -1 if r_negative else sign_of(rsq)
            if not r_negative and not is_exact(rsq):
                s = sign_of(rsq, abs(rsq))
            signs.append(s)
        else:
            signs.append(_term_sign(eval_polynomial_terms(pid, pset, sigma, rsq)))
    return SignVector(tuple(signs), pset.m, pset.k, pset.weak_only)


def sign_vector(pset: PolynomialSet, sigma: PolygonalCurve, r) -> SignVector:
    return sign_vector_rsq(pset, sigma, r * r, r_negative=r < 0)


# ---------------------------------------------------------------------------
# Predicates, twice over.
# ---------------------------------------------------------------------------

PredicateId = Tuple


def predicate_ids(m: int, k: int, weak_only: bool = False) -> list:
    """All predicate ids for sizes (m, k), in a fixed order."""
    preds = [("P1",), ("P2",)]
    preds += [("P3", i, j) for i in range(1, m) for j in range(1, k + 1)]
    preds += [("P4", i, j) for i in range(1, m + 1) for j in range(1, k)]
    if not weak_only:
        preds += [("P5", i, j, jp) for i in range(1, m)
                  for j in range(1, k) for jp in range(j + 1, k + 1)]
        preds += [("P6", i, ip, j) for i in range(1, m)
                  for ip in range(i + 1, m + 1) for j in range(1, k)]
    return preds


def _dist_le_rsq(dsq, rsq) -> bool:
    if is_exact(dsq) and is_exact(rsq):
        return dsq <= rsq
    return sign_of(float(dsq) - float(rsq), max(abs(float(dsq)), abs(float(rsq)))) <= 0


def _point_edge_le(p, a, b, rsq) -> bool:
    """d(p, segment ab)^2 <= rsq with mode-appropriate comparison."""
    e = sub(b, a)
    ee = norm_sq(e)
    t = dot(sub(p, a), e)
    if t <= 0:
        return _dist_le_rsq(dist_sq(p, a), rsq)
    if t >= ee:
        return _dist_le_rsq(dist_sq(p, b), rsq)
    # interior foot: d^2 * ee = |p-a|^2 * ee - t^2
    return _dist_le_rsq(dist_sq(p, a) * ee - t * t, rsq * ee)


def _ordered_reach(line_a, line_b, p_first, p_second, rsq) -> bool:
    """P5/P6 core on aff(line_a line_b): can a point within r of p_first be
    followed (in edge direction, equality allowed) by one within r of
    p_second?

    Equivalent to f + sqrt(-g1) + sqrt(-g2) >= 0 where f is the ordering
    inner product and g1, g2 the line-distance gap polynomials; both gaps
    must be <= 0 (balls meet the line) for the predicate to hold at all.
    """
    g_first = sum(_f31_terms(line_a, line_b, p_first, rsq))
    g_second = sum(_f31_terms(line_a, line_b, p_second, rsq))
    f_ord = dot(sub(p_second, p_first), sub(line_b, line_a))
    if is_exact(g_first) and is_exact(g_second) and is_exact(f_ord):
        if g_first > 0 or g_second > 0:
            return False
        return sign_sum_sqrt2(f_ord, 1, -g_second, 1, -g_first) >= 0
    e = sub(line_b, line_a)
    scale = max(abs(float(g_first)), abs(float(g_second)),
                float(norm_sq(e)) * (1.0 + abs(float(rsq))))
    s1 = sign_of(float(g_first), scale)
    s2 = sign_of(float(g_second), scale)
    if s1 > 0 or s2 > 0:
        return False
    val = float(f_ord) + math.sqrt(max(-float(g_second), 0.0)) \
        + math.sqrt(max(-float(g_first), 0.0))
    return sign_of(val, scale) >= 0


def predicate_geometric(pred: PredicateId, sigma: PolygonalCurve,
                        tau: PolygonalCurve, r) -> bool:
    return predicate_geometric_rsq(pred, sigma, tau, r * r)


def predicate_geometric_rsq(pred: PredicateId, sigma: PolygonalCurve,
                            tau: PolygonalCurve, rsq) -> bool:
    """Direct geometric evaluation of a predicate at squared radius rsq."""
    V, W = tau.vertices, sigma.vertices
    m, k = len(V), len(W)
    name = pred[0]
    if name == "P1":
        return _dist_le_rsq(dist_sq(V[0], W[0]), rsq)
    if name == "P2":
        return _dist_le_rsq(dist_sq(V[m - 1], W[k - 1]), rsq)
    if name == "P3":
        _, i, j = pred
        if not (1 <= i <= m - 1 and 1 <= j <= k):
            raise ValueError(f"invalid predicate index {pred}")
        return _point_edge_le(W[j - 1], V[i - 1], V[i], rsq)
    if name == "P4":
        _, i, j = pred
        if not (1 <= i <= m and 1 <= j <= k - 1):
            raise ValueError(f"invalid predicate index {pred}")
        return _point_edge_le(V[i - 1], W[j - 1], W[j], rsq)
    if name == "P5":
        _, i, j, jp = pred
        if not (1 <= i <= m - 1 and 1 <= j < jp <= k):
            raise ValueError(f"invalid predicate index {pred}")
        return _ordered_reach(V[i - 1], V[i], W[j - 1], W[jp - 1], rsq)
    if name == "P6":
        _, i, ip, j = pred
        if not (1 <= i < ip <= m and 1 <= j <= k - 1):
            raise ValueError(f"invalid predicate index {pred}")
        return _ordered_reach(W[j - 1], W[j], V[i - 1], V[ip - 1], rsq)
    raise ValueError(f"unknown predicate {pred}")


def predicate_from_signs(pred: PredicateId, signs: SignVector) -> bool:
    """Predicate truth from polynomial signs alone."""
    sg = signs.sign
    name = pred[0]
    if name == "P1":
        return sg(PolynomialId("f1")) <= 0
    if name == "P2":
        return sg(PolynomialId("f2")) <= 0
    if name == "P3" or name == "P4":
        fam = "f3" if name == "P3" else "f4"
        _, i, j = pred
        s1 = sg(PolynomialId(fam, 1, i=i, j=j))
        if s1 > 0:
            return False
        s2 = sg(PolynomialId(fam, 2, i=i, j=j))
        s3 = sg(PolynomialId(fam, 3, i=i, j=j))
        if s2 >= 0 and s3 >= 0:
            return True
        if s2 < 0:
            return sg(PolynomialId(fam, 4, i=i, j=j)) <= 0
        return sg(PolynomialId(fam, 5, i=i, j=j)) <= 0
    if name == "P5":
        _, i, j, jp = pred
        if sg(PolynomialId("f3", 1, i=i, j=j)) > 0:
            return False
        if sg(PolynomialId("f3", 1, i=i, j=jp)) > 0:
            return False
        mk = dict(i=i, j=j, jprime=jp)
        if sg(PolynomialId("f5", 1, **mk)) >= 0:
            return True
        if sg(PolynomialId("f5", 2, **mk)) <= 0:
            return True
        return (sg(PolynomialId("f5", 3, **mk)) <= 0
                or sg(PolynomialId("f5", 4, **mk)) <= 0)
    if name == "P6":
        _, i, ip, j = pred
        if sg(PolynomialId("f4", 1, i=i, j=j)) > 0:
            return False
        if sg(PolynomialId("f4", 1, i=ip, j=j)) > 0:
            return False
        mk = dict(i=i, iprime=ip, j=j)
        if sg(PolynomialId("f6", 1, **mk)) >= 0:
            return True
        if sg(PolynomialId("f6", 2, **mk)) <= 0:
            return True
        return (sg(PolynomialId("f6", 3, **mk)) <= 0
                or sg(PolynomialId("f6", 4, **mk)) <= 0)
    raise ValueError(f"unknown predicate {pred}")


# ---------------------------------------------------------------------------
# Critical values: roots in r of every polynomial for fixed (sigma, tau).
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class CriticalValueSet:
    """Sorted distinct nonnegative candidate radii, with provenance.

    values are floats for reporting; rsq holds the exact squared radii in
    rational mode (Fractions) or float squares otherwise.
    """

    values: Tuple[float, ...]
    rsq: Tuple
    provenance: Tuple[Tuple[PolynomialId, ...], ...]

    def __len__(self):
        return len(self.values)


def _poly_in_s_coeffs(pid, pset, sigma):
    """Coefficients (c0, c1, c2) of the polynomial as a polynomial in s=r^2."""
    p0 = sum(eval_polynomial_terms(pid, pset, sigma, 0))
    one = Fraction(1) if (pset.tau.is_rational() and sigma.is_rational()) else 1.0
    p1 = sum(eval_polynomial_terms(pid, pset, sigma, one))
    p2 = sum(eval_polynomial_terms(pid, pset, sigma, 2 * one))
    c2 = (p2 - 2 * p1 + p0) / 2
    c1 = p1 - p0 - c2
    return p0, c1, c2


def _s_roots(c0, c1, c2) -> list:
    """Nonnegative roots in s of c2 s^2 + c1 s + c0, closed form."""
    exact = is_exact(c0) and is_exact(c1) and is_exact(c2)
    if exact:
        if c2 != 0:
            # does not occur for fixed curves (s^2 terms cancel), but keep
            # the closed form for completeness via float fallback
            c0, c1, c2 = float(c0), float(c1), float(c2)
            exact = False
        elif c1 == 0:
            return []
        else:
            s = -Fraction(c0) / Fraction(c1)
            return [s] if s >= 0 else []
    scale = max(abs(float(c0)), abs(float(c1)), abs(float(c2)), 1e-300)
    if sign_of(c2, scale) == 0:
        if sign_of(c1, scale) == 0:
            return []
        s = -c0 / c1
        return [s] if s >= -EPS_CMP * scale else []
    disc = c1 * c1 - 4 * c2 * c0
    if disc < 0:
        if disc >= -EPS_CMP * (c1 * c1 + abs(4 * c2 * c0)):
            disc = 0.0
        else:
            return []
    sq = math.sqrt(disc)
    roots = [(-c1 - sq) / (2 * c2), (-c1 + sq) / (2 * c2)]
    return [s for s in roots if s >= -EPS_CMP * scale]


def critical_values(pset: PolynomialSet, sigma: PolygonalCurve) -> CriticalValueSet:
    """All radii where any polynomial sign can flip, plus 0, sorted."""
    _check_curve(pset, sigma)
    exact = pset.tau.is_rational() and sigma.is_rational()
    buckets: dict = {}
    zero = Fraction(0) if exact else 0.0
    buckets[zero] = [PolynomialId("f0")]
    for pid in pset.ids:
        if pid.family == "f0":
            continue
        c0, c1, c2 = _poly_in_s_coeffs(pid, pset, sigma)
        for s in _s_roots(c0, c1, c2):
            if s < 0:
                s = zero
            buckets.setdefault(s, []).append(pid)
    items = sorted(buckets.items(), key=lambda kv: kv[0])
    if not exact:
        # merge float roots closer than EPS_CMP * (1 + r) in r
        merged = []
        for s, pids in items:
            rv = math.sqrt(max(float(s), 0.0))
            if merged and rv - merged[-1][1] <= EPS_CMP * (1.0 + rv):
                merged[-1][2].extend(pids)
            else:
                merged.append([s, rv, list(pids)])
        items = [(s, pids) for s, _, pids in merged]
    values = tuple(math.sqrt(max(float(s), 0.0)) for s, _ in items)
    return CriticalValueSet(values=values,
                            rsq=tuple(s for s, _ in items),
                            provenance=tuple(tuple(p) for _, p in items))

"""Shared arithmetic helpers: sign classification and exact quadratic surds.

Two arithmetic modes coexist throughout the package.  Floating point is the
fast path; signs are classified with a relative tolerance so that boundary
cases (a radius sitting exactly on a critical value) land on 0 stably.
Exact mode is triggered by the data: when inputs are ``fractions.Fraction``
(or int), every sign computed here is exact.  Radii are usually square roots
of rationals, so the exact path works with the squared radius and, where a
single square root is unavoidable (free-space interval endpoints), with the
``Surd`` type p + q*sqrt(D) over rationals.
"""

from __future__ import annotations

import math
from fractions import Fraction

# Relative tolerance used wherever a floating-point sign is classified.
EPS_CMP = 1e-9


def is_exact(x) -> bool:
    return isinstance(x, (int, Fraction))


def sign_of(value, scale=None) -> int:
    """Sign in {-1, 0, +1}.

    Exact for int/Fraction.  For floats, |value| <= EPS_CMP * scale
    classifies as 0; ``scale`` defaults to |value| itself (i.e. only an
    exact 0.0 maps to 0 when no scale is supplied).
    """
    if isinstance(value, (int, Fraction)):
        return (value > 0) - (value < 0)
    if scale is None:
        scale = abs(value)
    if abs(value) <= EPS_CMP * scale:
        return 0
    return 1 if value > 0 else -1


def sign_pq(p, q, d) -> int:
    """Exact sign of p + q*sqrt(d) for rational p, q and rational d >= 0."""
    if d < 0:
        raise ValueError("negative radicand")
    if q == 0 or d == 0:
        return (p > 0) - (p < 0)
    if p == 0:
        return (q > 0) - (q < 0)
    sp = 1 if p > 0 else -1
    sq = 1 if q > 0 else -1
    if sp == sq:
        return sp
    t = p * p - q * q * d
    return sp * ((t > 0) - (t < 0))


def sign_sum_sqrt2(a, bx, x, cy, y) -> int:
    """Exact sign of a + bx*sqrt(x) + cy*sqrt(y), all rational, x, y >= 0."""
    if cy == 0 or y == 0:
        return sign_pq(a, bx, x)
    if bx == 0 or x == 0:
        return sign_pq(a, cy, y)
    su = sign_pq(a, bx, x)          # u = a + bx*sqrt(x)
    # v = cy*sqrt(y); sign(v) = sign(cy)
    sv = 1 if cy > 0 else -1
    if su == 0:
        return sv
    if su == sv:
        return su
    # opposite signs: compare |u| vs |v| via u^2 - v^2, a surd in sqrt(x)
    return su * sign_pq(a * a + bx * bx * x - cy * cy * y, 2 * a * bx, x)


class Surd:
    """Exact real of the form p + q*sqrt(d), rationals p, q and d >= 0.

    Supports the comparisons needed by the free-space reachability code.
    """

    __slots__ = ("p", "q", "d")

    def __init__(self, p, q=0, d=0):
        if q == 0 or d == 0:
            q, d = Fraction(0), Fraction(0)
        self.p = Fraction(p)
        self.q = Fraction(q)
        self.d = Fraction(d)

    @staticmethod
    def _coerce(x) -> "Surd":
        if isinstance(x, Surd):
            return x
        return Surd(x)

    def _cmp_sign(self, other) -> int:
        o = Surd._coerce(other)
        return sign_sum_sqrt2(self.p - o.p, self.q, self.d, -o.q, o.d)

    def __lt__(self, other):
        return self._cmp_sign(other) < 0

    def __le__(self, other):
        return self._cmp_sign(other) <= 0

    def __gt__(self, other):
        return self._cmp_sign(other) > 0

    def __ge__(self, other):
        return self._cmp_sign(other) >= 0

    def __eq__(self, other):
        if not isinstance(other, (Surd, int, Fraction)):
            return NotImplemented
        return self._cmp_sign(other) == 0

    def __hash__(self):
        if self.q == 0:
            return hash(self.p)
        return hash((self.p, self.q, self.d))

    def __float__(self):
        return float(self.p) + float(self.q) * math.sqrt(float(self.d))

    def __repr__(self):
        return f"Surd({self.p}, {self.q}, {self.d})"


def surd_max(a, b):
    return b if a < b else a

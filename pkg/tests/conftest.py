"""Shared generators for the test suite: seeded random curves in both
arithmetic modes, plus a few named fixture instances."""

import math
import random
from fractions import Fraction

from frechetsign import PolygonalCurve, validate_curve


def rational_point(rng, d, lo=-8, hi=8, den=4):
    return tuple(Fraction(rng.randint(lo, hi), rng.randint(1, den))
                 for _ in range(d))


def rational_curve(rng, n, d, **kw):
    vs = [rational_point(rng, d, **kw)]
    while len(vs) < n:
        p = rational_point(rng, d, **kw)
        if p != vs[-1]:
            vs.append(p)
    return PolygonalCurve(tuple(vs))


def float_point(rng, d, span=5.0):
    return tuple(rng.uniform(-span, span) for _ in range(d))


def float_curve(rng, n, d, span=5.0):
    vs = [float_point(rng, d, span)]
    while len(vs) < n:
        p = float_point(rng, d, span)
        if p != vs[-1]:
            vs.append(p)
    return PolygonalCurve(tuple(vs))


def max_edge_length(*curves):
    out = 0.0
    for c in curves:
        for a, b in zip(c.vertices, c.vertices[1:]):
            out = max(out, math.dist([float(x) for x in a],
                                     [float(x) for x in b]))
    return out


TENT = validate_curve([(0.0, 0.0), (1.0, 1.0), (2.0, 0.0)])
BASE = validate_curve([(0.0, 0.0), (2.0, 0.0)])
HAIRPIN_SIGMA = validate_curve([(0.0,), (6.0,)])
HAIRPIN_TAU = validate_curve([(0.0,), (4.0,), (2.0,), (6.0,)])

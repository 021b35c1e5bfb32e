"""Elementary geometry over R^d: points, segments, polygonal curves.

Points are plain tuples of scalars (float or Fraction); all functions are
generic over the scalar type, so the exact-rational mode works with the same
code.  Everything here is pure and immutable.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Tuple

Point = Tuple

__all__ = [
    "Point",
    "Segment",
    "PolygonalCurve",
    "point_segment_distance",
    "point_segment_distance_sq",
    "projection_parameter",
    "validate_curve",
]


def sub(a: Point, b: Point) -> Point:
    return tuple(x - y for x, y in zip(a, b))


def dot(a: Point, b: Point):
    return sum(x * y for x, y in zip(a, b))


def norm_sq(a: Point):
    return sum(x * x for x in a)


def dist_sq(a: Point, b: Point):
    return sum((x - y) * (x - y) for x, y in zip(a, b))


@dataclass(frozen=True)
class Segment:
    """Oriented segment from a to b; endpoints must differ."""

    a: Point
    b: Point

    def __post_init__(self):
        if len(self.a) != len(self.b):
            raise ValueError("segment endpoints have mixed dimensions")
        if tuple(self.a) == tuple(self.b):
            raise ValueError("degenerate segment (a == b)")


@dataclass(frozen=True)
class PolygonalCurve:
    """Ordered vertex list in R^d; size >= 2, no consecutive duplicates."""

    vertices: Tuple[Point, ...]

    @property
    def size(self) -> int:
        return len(self.vertices)

    @property
    def dim(self) -> int:
        return len(self.vertices[0])

    def edge(self, i: int) -> Segment:
        """Edge i (0-based) from vertex i to vertex i+1."""
        return Segment(self.vertices[i], self.vertices[i + 1])

    def reverse(self) -> "PolygonalCurve":
        return PolygonalCurve(tuple(reversed(self.vertices)))

    def is_rational(self) -> bool:
        return all(
            isinstance(c, (int, Fraction)) for v in self.vertices for c in v
        )

    def diameter(self) -> float:
        vs = self.vertices
        best = 0.0
        for i in range(len(vs)):
            for j in range(i + 1, len(vs)):
                best = max(best, float(dist_sq(vs[i], vs[j])))
        return math.sqrt(best)

    def __iter__(self):
        return iter(self.vertices)


def validate_curve(raw: Sequence[Point], collapse_duplicates: bool = False) -> PolygonalCurve:
    """Build a PolygonalCurve from raw points.

    Consecutive duplicate vertices are rejected unless
    ``collapse_duplicates`` is set, in which case runs of identical points
    collapse to one.  Raises ValueError on mixed dimensions, non-finite
    coordinates, or fewer than 2 (distinct) vertices.
    """
    pts = [tuple(p) for p in raw]
    if not pts:
        raise ValueError("empty vertex list")
    d = len(pts[0])
    if d < 1:
        raise ValueError("zero-dimensional point")
    out = []
    for p in pts:
        if len(p) != d:
            raise ValueError("mixed dimensions in vertex list")
        for c in p:
            if isinstance(c, float) and not math.isfinite(c):
                raise ValueError("non-finite coordinate")
        if out and p == out[-1]:
            if collapse_duplicates:
                continue
            raise ValueError("consecutive duplicate vertices (pass collapse_duplicates=True to merge)")
        out.append(p)
    if len(out) < 2:
        raise ValueError("curve needs at least 2 distinct vertices")
    return PolygonalCurve(tuple(out))


def projection_parameter(p: Point, s: Segment):
    """Parameter t of the foot of p on aff(s): foot = a + t*(b - a).

    Exact (Fraction) for rational inputs.  t in [0, 1] iff the foot lies on
    the segment.
    """
    if len(p) != len(s.a):
        raise ValueError("dimension mismatch")
    e = sub(s.b, s.a)
    return dot(sub(p, s.a), e) / norm_sq(e)


def point_segment_distance_sq(p: Point, s: Segment):
    """Squared distance from p to the closed segment; exact for rationals."""
    if len(p) != len(s.a):
        raise ValueError("dimension mismatch")
    t = projection_parameter(p, s)
    if t <= 0:
        return dist_sq(p, s.a)
    if t >= 1:
        return dist_sq(p, s.b)
    foot = tuple(a + t * (b - a) for a, b in zip(s.a, s.b))
    return dist_sq(p, foot)


def point_segment_distance(p: Point, s: Segment) -> float:
    return math.sqrt(float(point_segment_distance_sq(p, s)))

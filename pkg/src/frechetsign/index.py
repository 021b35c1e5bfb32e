"""Query structures over a curve set: range search keyed by sign vectors,
nearest neighbor, and subcurve distance oracles.

The range index caches decoded answers under the realized sign vector.
Because the decision is a pure function of the signs, the cache can never
change an answer, only skip recomputing it; that determinism is the
property the tests pin down.
"""

from __future__ import annotations

import hashlib
import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Tuple

from ._numeric import is_exact
from .arrangement import SamplerConfig, sample_cells
from .engine import decide_from_sign_vector, frechet_distance
from .geometry import PolygonalCurve, validate_curve
from .polynomials import PolynomialSet, polynomial_set, sign_vector_rsq

__all__ = [
    "RangeIndex",
    "SubcurveSpec",
    "build_range_index",
    "range_query",
    "nearest_neighbor",
    "subcurve_distance",
    "materialize_subcurve",
    "save_index",
    "load_index",
]


@dataclass
class RangeIndex:
    T: Tuple[PolygonalCurve, ...]
    k: int
    blocks: Tuple[PolynomialSet, ...]
    cache: dict = field(default_factory=dict)
    stats: dict = field(default_factory=lambda: {"hits": 0, "misses": 0})

    @property
    def n(self) -> int:
        return len(self.T)


def build_range_index(T: Sequence[PolygonalCurve], k: int,
                      warmup_budget: int = 0, seed: int = 0) -> RangeIndex:
    T = tuple(T)
    if not T:
        raise ValueError("empty curve set")
    d = T[0].dim
    if any(t.dim != d for t in T):
        raise ValueError("curves in T have inconsistent dimensions")
    blocks = tuple(polynomial_set(tau, k) for tau in T)
    index = RangeIndex(T=T, k=k, blocks=blocks)
    if warmup_budget > 0:
        for sample in sample_cells(blocks, k,
                                   SamplerConfig(budget=warmup_budget,
                                                 seed=seed)):
            key = sample.key()
            if key not in index.cache:
                index.cache[key] = frozenset(
                    a for a, sv in enumerate(sample.signs)
                    if decide_from_sign_vector(sv))
    return index


def _block_vectors(index: RangeIndex, sigma: PolygonalCurve, r):
    if sigma.size != index.k:
        raise ValueError(f"query size {sigma.size}, index expects {index.k}")
    if sigma.dim != index.T[0].dim:
        raise ValueError("query dimension mismatch")
    if r < 0:
        raise ValueError("radius must be nonnegative")
    exact = is_exact(r) and sigma.is_rational() \
        and all(t.is_rational() for t in index.T)
    rsq = Fraction(r) ** 2 if exact else float(r) ** 2
    return [sign_vector_rsq(block, sigma, rsq) for block in index.blocks]


def range_query(index: RangeIndex, sigma: PolygonalCurve, r) -> frozenset:
    """{a : d_F(sigma, T[a]) <= r}, answered via the sign-vector cache."""
    vectors = _block_vectors(index, sigma, r)
    key = b"".join(sv.key() for sv in vectors)
    hit = index.cache.get(key)
    if hit is not None:
        index.stats["hits"] += 1
        return hit
    index.stats["misses"] += 1
    subset = frozenset(a for a, sv in enumerate(vectors)
                       if decide_from_sign_vector(sv))
    index.cache[key] = subset
    return subset


def nearest_neighbor(index: RangeIndex, sigma: PolygonalCurve,
                     metric: str = "strong") -> Tuple[int, float]:
    """Argmin over T of the exact distance; ties go to the smallest index."""
    if metric not in ("strong", "weak"):
        raise ValueError("metric must be 'strong' or 'weak'")
    if index.n == 0:
        raise ValueError("empty curve set")
    if sigma.size != index.k:
        raise ValueError(f"query size {sigma.size}, index expects {index.k}")
    weak = metric == "weak"
    best_a, best_r = 0, math.inf
    for a, tau in enumerate(index.T):
        val = frechet_distance(sigma, tau, weak=weak).value
        if val < best_r:
            best_a, best_r = a, val
    return best_a, best_r


# ---------------------------------------------------------------------------
# Subcurves delimited by arbitrary points.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SubcurveSpec:
    """Subcurve from parameter start_param on edge start_edge (0-based) to
    end_param on end_edge; the start must strictly precede the end."""

    start_edge: int
    start_param: object
    end_edge: int
    end_param: object

    def validate(self, tau: PolygonalCurve) -> None:
        m = tau.size
        for e, p in ((self.start_edge, self.start_param),
                     (self.end_edge, self.end_param)):
            if not 0 <= e <= m - 2:
                raise ValueError(f"edge index {e} out of range")
            if not 0 <= p <= 1:
                raise ValueError(f"edge parameter {p} outside [0, 1]")
        if self.start_edge > self.end_edge:
            raise ValueError("start edge after end edge")
        if self.start_edge == self.end_edge \
                and not self.start_param < self.end_param:
            raise ValueError("same-edge spec needs start_param < end_param")


def _edge_point(tau: PolygonalCurve, edge: int, t):
    a, b = tau.vertices[edge], tau.vertices[edge + 1]
    return tuple(x + t * (y - x) for x, y in zip(a, b))


def materialize_subcurve(tau: PolygonalCurve,
                         spec: SubcurveSpec) -> PolygonalCurve:
    """Subcurve with endpoints (1-t) v_i + t v_{i+1}; interior vertices of
    tau between the two delimiting edges are kept.  Parameters at exactly 0
    or 1 collapse onto the adjacent vertex."""
    spec.validate(tau)
    pts = [_edge_point(tau, spec.start_edge, spec.start_param)]
    pts += list(tau.vertices[spec.start_edge + 1: spec.end_edge + 1])
    pts.append(_edge_point(tau, spec.end_edge, spec.end_param))
    return validate_curve(pts, collapse_duplicates=True)


def subcurve_distance(tau: PolygonalCurve, spec: SubcurveSpec,
                      sigma: PolygonalCurve, metric: str = "strong",
                      verify: bool = False) -> float:
    """d(sigma, subcurve of tau) via materialization.

    With verify=True the sign vector of the materialized curve's polynomial
    set at the answer radius is decoded again and must agree."""
    if metric not in ("strong", "weak"):
        raise ValueError("metric must be 'strong' or 'weak'")
    weak = metric == "weak"
    sub = materialize_subcurve(tau, spec)
    res = frechet_distance(sigma, sub, weak=weak)
    if verify:
        pset = polynomial_set(sub, sigma.size, weak_only=weak)
        sv = sign_vector_rsq(pset, sigma, res.rsq)
        if not decide_from_sign_vector(sv, weak=weak):
            raise AssertionError("substituted sign vector refutes the answer")
    return res.value


# ---------------------------------------------------------------------------
# Persistence: versioned JSON snapshot with an integrity hash over T.
# ---------------------------------------------------------------------------

_FORMAT_VERSION = 1


def _serialize_number(x) -> str:
    if isinstance(x, (int, Fraction)):
        return str(Fraction(x))
    return repr(float(x))


def _parse_number(s: str, rational: bool):
    return Fraction(s) if rational else float(s)


def _curves_payload(T):
    return [[[_serialize_number(c) for c in v] for v in t.vertices]
            for t in T]


def _integrity(k: int, curves_payload) -> str:
    blob = json.dumps({"k": k, "curves": curves_payload},
                      separators=(",", ":"), sort_keys=True)
    return hashlib.sha256(blob.encode()).hexdigest()


def save_index(index: RangeIndex, path: str) -> None:
    curves = _curves_payload(index.T)
    payload = {
        "version": _FORMAT_VERSION,
        "k": index.k,
        "rational": all(t.is_rational() for t in index.T),
        "curves": curves,
        "cache": {key.hex(): sorted(subset)
                  for key, subset in index.cache.items()},
        "integrity": _integrity(index.k, curves),
    }
    with open(path, "w") as fh:
        json.dump(payload, fh)


def load_index(path: str) -> RangeIndex:
    with open(path) as fh:
        payload = json.load(fh)
    if payload.get("version") != _FORMAT_VERSION:
        raise ValueError(f"unsupported index version {payload.get('version')}")
    if payload["integrity"] != _integrity(payload["k"], payload["curves"]):
        raise ValueError("index integrity check failed")
    rational = payload["rational"]
    T = tuple(PolygonalCurve(tuple(
        tuple(_parse_number(c, rational) for c in v) for v in curve))
        for curve in payload["curves"])
    index = build_range_index(T, payload["k"])
    index.cache = {bytes.fromhex(key): frozenset(subset)
                   for key, subset in payload["cache"].items()}
    return index

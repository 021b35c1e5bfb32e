"""Linearization of the polynomial family and empirical cell counting.

Every polynomial, for fixed tau, is a polynomial in the dk coordinates of
sigma plus r.  Expanding into monomials and introducing one fresh variable
per monomial turns each into a linear form; the same term-list evaluation
code that computes values numerically produces the expansions when fed
symbolic variables.

Cell sampling draws random (sigma, r) points, records realized sign
vectors, and decodes them into range subsets; the VC counting experiment
reports distinct-subset counts against the cell-count reference curve.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Optional, Sequence, Tuple

import numpy as np

from ._numeric import EPS_CMP
from .engine import decide_from_sign_vector
from .geometry import PolygonalCurve
from .polynomials import (
    PolynomialId,
    PolynomialSet,
    SignVector,
    critical_values,
    eval_polynomial_terms,
    polynomial_set,
)

__all__ = [
    "Poly",
    "MonomialBasis",
    "LinearForm",
    "CellSample",
    "SamplerConfig",
    "VcReport",
    "build_basis",
    "lift",
    "linear_form",
    "sample_cells",
    "vc_counting_experiment",
]


class Poly:
    """Sparse multivariate polynomial over Fractions.

    Minimal by design: just enough ring arithmetic for the generic
    term-list evaluators to run on symbolic inputs.
    """

    __slots__ = ("nvars", "terms")

    def __init__(self, nvars: int, terms: Optional[dict] = None):
        self.nvars = nvars
        self.terms = {e: c for e, c in (terms or {}).items() if c != 0}

    @staticmethod
    def const(c, nvars: int) -> "Poly":
        return Poly(nvars, {(0,) * nvars: Fraction(c)})

    @staticmethod
    def var(i: int, nvars: int) -> "Poly":
        e = [0] * nvars
        e[i] = 1
        return Poly(nvars, {tuple(e): Fraction(1)})

    def _coerce(self, other):
        if isinstance(other, Poly):
            return other
        if isinstance(other, (int, Fraction)):
            return Poly.const(other, self.nvars)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        out = dict(self.terms)
        for e, c in o.terms.items():
            out[e] = out.get(e, Fraction(0)) + c
        return Poly(self.nvars, out)

    __radd__ = __add__

    def __neg__(self):
        return Poly(self.nvars, {e: -c for e, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        out = {}
        for e1, c1 in self.terms.items():
            for e2, c2 in o.terms.items():
                e = tuple(a + b for a, b in zip(e1, e2))
                out[e] = out.get(e, Fraction(0)) + c1 * c2
        return Poly(self.nvars, out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power")
        out = Poly.const(1, self.nvars)
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.terms == other.terms
        return NotImplemented

    def __repr__(self):
        return f"Poly({self.terms!r})"


@dataclass(frozen=True)
class MonomialBasis:
    """Monomials (exponent tuples) over the dk sigma coordinates plus r.

    Variable order: vertex j coordinate c at index j*d + c, r last.
    """

    entries: Tuple[Tuple[int, ...], ...]
    nvars: int

    def __len__(self):
        return len(self.entries)

    def index_of(self, exponents) -> int:
        return self.entries.index(tuple(exponents))


@dataclass(frozen=True)
class LinearForm:
    coefficients: Tuple


def _rational_tau(tau: PolygonalCurve) -> PolygonalCurve:
    return PolygonalCurve(tuple(tuple(Fraction(c) for c in v)
                                for v in tau.vertices))


def _symbolic_expansion(pid: PolynomialId, pset: PolynomialSet) -> Poly:
    d = pset.tau.dim
    k = pset.k
    n = d * k + 1
    rpset = PolynomialSet(_rational_tau(pset.tau), k, pset.weak_only)
    sigma = PolygonalCurve(tuple(
        tuple(Poly.var(j * d + c, n) for c in range(d)) for j in range(k)))
    r = Poly.var(d * k, n)
    terms = eval_polynomial_terms(pid, rpset, sigma, r * r, r=r)
    out = Poly.const(0, n)
    for t in terms:
        out = out + t
    return out


def build_basis(pset: PolynomialSet) -> MonomialBasis:
    """Union of all monomials used by the set, graded-lex ordered, with the
    constant and every degree-1 monomial always present."""
    n = pset.tau.dim * pset.k + 1
    mons = {(0,) * n}
    for i in range(n):
        e = [0] * n
        e[i] = 1
        mons.add(tuple(e))
    for pid in pset.ids:
        mons.update(_symbolic_expansion(pid, pset).terms.keys())
    ordered = sorted(mons, key=lambda e: (sum(e), e))
    return MonomialBasis(tuple(ordered), n)


def linear_form(pset: PolynomialSet, basis: MonomialBasis,
                pid: PolynomialId) -> LinearForm:
    if pid not in set(pset.ids):
        raise ValueError(f"{pid} is not in the polynomial set")
    expansion = _symbolic_expansion(pid, pset)
    index = {e: i for i, e in enumerate(basis.entries)}
    coeffs = [Fraction(0)] * len(basis.entries)
    for e, c in expansion.terms.items():
        coeffs[index[e]] = c
    return LinearForm(tuple(coeffs))


def lift(basis: MonomialBasis, sigma: PolygonalCurve, r):
    """Values of all basis monomials at (sigma, r)."""
    coords = [c for v in sigma.vertices for c in v] + [r]
    if len(coords) != basis.nvars:
        raise ValueError("sigma does not match the basis dimensions")
    out = []
    for e in basis.entries:
        val = coords[0] ** 0  # 1 in the scalar type at hand
        for x, p in zip(coords, e):
            for _ in range(p):
                val = val * x
        out.append(val)
    return tuple(out)


# ---------------------------------------------------------------------------
# Cell sampling.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class SamplerConfig:
    budget: int = 1000
    seed: int = 0
    # jitter around critical radii lands witnesses on both sides of events
    delta_scale: float = 1e-4
    critical_pool_pairs: int = 12


@dataclass(frozen=True)
class CellSample:
    signs: Tuple[SignVector, ...]
    witness: Tuple[PolygonalCurve, float]
    discovery: str

    def key(self) -> bytes:
        return b"".join(sv.key() for sv in self.signs)


def _float_curve(curve: PolygonalCurve) -> PolygonalCurve:
    return PolygonalCurve(tuple(tuple(float(c) for c in v)
                                for v in curve.vertices))


def _vector_signs(pset: PolynomialSet, sigma_cols, rsq: np.ndarray,
                  r: np.ndarray) -> np.ndarray:
    """Sign matrix (#polynomials x #draws) for a batch of float draws.

    sigma_cols is a PolygonalCurve whose coordinates are arrays over draws;
    the generic term evaluators broadcast elementwise, so the per-draw sign
    rule (zero within EPS_CMP of the largest additive term) matches the
    scalar path exactly.
    """
    rows = []
    for pid in pset.ids:
        if pid.family == "f0":
            rows.append(np.where(r <= EPS_CMP * (1.0 + r), 0, 1))
            continue
        terms = eval_polynomial_terms(pid, pset, sigma_cols, rsq)
        val = terms[0]
        scale = np.abs(terms[0])
        for t in terms[1:]:
            val = val + t
            scale = np.maximum(scale, np.abs(t))
        rows.append(np.where(np.abs(val) <= EPS_CMP * scale, 0,
                             np.sign(val)).astype(np.int8))
    return np.vstack(rows)


def _draw_sigmas(taus, k, d, budget, rng):
    """Batch of sigma draws (budget x k x d) with per-draw source tags."""
    allv = np.array([[float(c) for c in v] for t in taus for v in t.vertices])
    lo, hi = allv.min(axis=0), allv.max(axis=0)
    center, span = (lo + hi) / 2, np.maximum(hi - lo, 1e-9)
    out = np.empty((budget, k, d))
    tags = []
    kinds = rng.integers(0, 3, size=budget)
    for idx in range(budget):
        if kinds[idx] == 0:
            out[idx] = center + rng.normal(0, 1, size=(k, d)) * span
            tags.append("gaussian")
        else:
            t = taus[rng.integers(0, len(taus))]
            vs = np.array([[float(c) for c in v] for v in t.vertices])
            pick = np.linspace(0, len(vs) - 1, k).round().astype(int)
            base = vs[pick]
            sigma_scale = 0.02 if kinds[idx] == 1 else 0.5
            out[idx] = base + rng.normal(0, sigma_scale, size=(k, d)) * span
            tags.append("subcurve" if kinds[idx] == 1 else "perturbed")
    return out, tags, float(span.max())


def sample_cells(psets: Sequence[PolynomialSet], k: int,
                 config: SamplerConfig = SamplerConfig()) -> list:
    """Randomized sign-cell discovery: one witness per realized sign vector.

    Not exhaustive; coverage grows with the budget.  Deterministic for a
    fixed seed.
    """
    if not psets:
        raise ValueError("need at least one polynomial set")
    if any(p.k != k for p in psets):
        raise ValueError("polynomial sets disagree with the query size k")
    if config.budget <= 0:
        return []
    rng = np.random.default_rng(config.seed)
    fpsets = [PolynomialSet(_float_curve(p.tau), k, p.weak_only)
              for p in psets]
    d = fpsets[0].tau.dim
    taus = [p.tau for p in fpsets]
    sigmas, tags, span = _draw_sigmas(taus, k, d, config.budget, rng)
    # radius pool: uniform scale mixed with jittered critical radii of a
    # few sampled pairs
    pool = [0.0]
    for idx in range(min(config.critical_pool_pairs, config.budget)):
        sigma = PolygonalCurve(tuple(tuple(float(c) for c in v)
                                     for v in sigmas[idx]))
        for p in fpsets:
            try:
                pool.extend(critical_values(p, sigma).values)
            except ValueError:
                pass
    pool = np.asarray(sorted(set(pool)))
    r = np.empty(config.budget)
    mode = rng.integers(0, 2, size=config.budget)
    r_uniform = rng.uniform(0.0, 2.0 * span, size=config.budget)
    picks = pool[rng.integers(0, len(pool), size=config.budget)]
    delta = config.delta_scale * (1.0 + picks)
    r_jit = np.abs(picks + delta * rng.choice([-1.0, 0.0, 1.0],
                                              size=config.budget))
    r = np.where(mode == 0, r_uniform, r_jit)
    rsq = r * r
    # one batched evaluation per data curve
    sigma_cols = PolygonalCurve(tuple(
        tuple(np.ascontiguousarray(sigmas[:, j, c]) for c in range(d))
        for j in range(k)))
    mats = [_vector_signs(p, sigma_cols, rsq, r) for p in fpsets]
    stacked = np.vstack(mats)  # (#total polys) x budget
    keyed = np.ascontiguousarray((stacked.T + 1).astype(np.uint8))
    samples = {}
    for idx in range(config.budget):
        key = keyed[idx].tobytes()
        if key in samples:
            continue
        svs = []
        off = 0
        for p, mat in zip(fpsets, mats):
            nn = mat.shape[0]
            svs.append(SignVector(tuple(int(s) for s in stacked[off:off + nn, idx]),
                                  p.m, k, p.weak_only))
            off += nn
        sigma = PolygonalCurve(tuple(tuple(float(c) for c in sigmas[idx, j])
                                     for j in range(k)))
        samples[key] = CellSample(tuple(svs), (sigma, float(r[idx])),
                                  tags[idx])
    return list(samples.values())


# ---------------------------------------------------------------------------
# VC counting experiment.
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class VcReport:
    n: int
    d: int
    k: int
    sizes: Tuple[int, ...]
    budget: int
    distinct_sign_vectors: int
    distinct_range_subsets: int
    shattered: bool
    exponent: int
    poly_count: int
    log2_bound_reference: float
    subsets: Tuple[Tuple[int, ...], ...]


def vc_counting_experiment(T: Sequence[PolygonalCurve], k: int,
                           budget: int, seed: int = 0,
                           bound_constant: float = 16.0,
                           out_path: Optional[str] = None) -> VcReport:
    """Count realized sign vectors and the range subsets they decode to.

    The decoded-subset count can never exceed the sign-vector count (each
    subset is a function of the vector); that containment is asserted, the
    comparison against the (dk+1)-exponent reference curve is only
    reported.
    """
    if not T:
        raise ValueError("empty curve set")
    d = T[0].dim
    psets = [polynomial_set(tau, k) for tau in T]
    samples = sample_cells(psets, k, SamplerConfig(budget=budget, seed=seed))
    decoded = {}
    for sample in samples:
        subset = frozenset(a for a, sv in enumerate(sample.signs)
                           if decide_from_sign_vector(sv))
        decoded[sample.key()] = subset
    subsets = set(decoded.values())
    assert len(subsets) <= len(samples), \
        "decoded subsets exceeded sign vectors"
    poly_count = sum(len(p.ids) for p in psets)
    exponent = d * k + 1
    report = VcReport(
        n=len(T), d=d, k=k, sizes=tuple(t.size for t in T), budget=budget,
        distinct_sign_vectors=len(samples),
        distinct_range_subsets=len(subsets),
        shattered=(len(subsets) == 2 ** len(T)),
        exponent=exponent, poly_count=poly_count,
        log2_bound_reference=exponent * math.log2(bound_constant
                                                  * max(poly_count, 2)),
        subsets=tuple(sorted(tuple(sorted(s)) for s in subsets)))
    if out_path is not None:
        _write_report(out_path, report, samples, decoded)
    return report


def _write_report(path, report, samples, decoded):
    records = []
    for sample in samples:
        sigma, r = sample.witness
        records.append({
            "signs": "".join("0+-"[s] for sv in sample.signs
                             for s in sv.signs),
            "witness_sigma": [list(v) for v in sigma.vertices],
            "witness_r": r,
            "subset": sorted(decoded[sample.key()]),
            "discovery": sample.discovery,
        })
    payload = {
        "summary": {
            "n": report.n, "d": report.d, "k": report.k,
            "sizes": list(report.sizes), "budget": report.budget,
            "distinct_sign_vectors": report.distinct_sign_vectors,
            "distinct_range_subsets": report.distinct_range_subsets,
            "shattered": report.shattered,
            "exponent": report.exponent,
            "poly_count": report.poly_count,
            "log2_bound_reference": report.log2_bound_reference,
        },
        "records": records,
    }
    with open(path, "w") as fh:
        json.dump(payload, fh, indent=1)

import math
import random
from fractions import Fraction

import pytest

from frechetsign import (SamplerConfig, build_basis, eval_polynomial, lift,
                         linear_form, polynomial_set, sample_cells,
                         sign_vector, validate_curve, vc_counting_experiment)
from conftest import rational_curve

TAU2 = validate_curve([(0, 0), (2, 1), (4, 0)])


def dot(u, v):
    return sum(a * b for a, b in zip(u, v))


def test_basis_structure():
    pset = polynomial_set(TAU2, 2)
    basis = build_basis(pset)
    n = TAU2.dim * 2 + 1
    assert basis.nvars == n
    assert basis.entries[0] == (0,) * n
    # constant and all degree-1 monomials are always present
    for i in range(n):
        e = [0] * n
        e[i] = 1
        assert tuple(e) in basis.entries
    # graded-lex: degrees are nondecreasing
    degs = [sum(e) for e in basis.entries]
    assert degs == sorted(degs)
    # f0 = r is the only user of odd powers of r
    for e in basis.entries:
        if e[-1] % 2 == 1:
            assert e == tuple([0] * (n - 1) + [1])


def test_basis_golden_sizes():
    # locked at first build; regression guard for the expansion pipeline
    tau = validate_curve([(0,), (2,), (1,)])
    assert len(build_basis(polynomial_set(tau, 2))) == 21
    tau34 = rational_curve(random.Random(0), 4, 3)
    L = len(build_basis(polynomial_set(tau34, 4)))
    assert L == 2499
    assert L <= 2 * 3 ** 4 * 4 ** 2


def test_linear_form_f0_and_f1():
    tau = validate_curve([(0,), (3,)])
    pset = polynomial_set(tau, 2)
    basis = build_basis(pset)
    from frechetsign import PolynomialId
    f0 = linear_form(pset, basis, PolynomialId("f0"))
    nz = {e: c for e, c in zip(basis.entries, f0.coefficients) if c}
    assert nz == {(0, 0, 1): Fraction(1)}
    # f1 = (v1 - w1)^2 - r^2 = w1^2 - 2 v1 w1 + v1^2 - r^2 with v1 = 0
    f1 = linear_form(pset, basis, PolynomialId("f1"))
    nz = {e: c for e, c in zip(basis.entries, f1.coefficients) if c}
    assert nz == {(2, 0, 0): Fraction(1), (0, 0, 2): Fraction(-1)}
    with pytest.raises(ValueError):
        linear_form(pset, basis, PolynomialId("f3", 1, i=2, j=1))


def test_lift_basics():
    pset = polynomial_set(TAU2, 2)
    basis = build_basis(pset)
    sigma = validate_curve([(0.0, 0.0), (1.0, 0.0)])
    vec = lift(basis, validate_curve([(0, 0), (1e-30, 0)]), 0)
    # near-zero input: only the constant entry survives at scale 1
    assert vec[0] == 1
    assert all(abs(float(x)) < 1e-29 for x in vec[1:])
    vec = lift(basis, sigma, 2.0)
    assert len(vec) == len(basis)


def test_linearization_identity_exact():
    rng = random.Random(23)
    tau = rational_curve(rng, 3, 2)
    pset = polynomial_set(tau, 3)
    basis = build_basis(pset)
    forms = {pid: linear_form(pset, basis, pid) for pid in pset.ids}
    for _ in range(6):
        sigma = rational_curve(rng, 3, 2)
        r = Fraction(rng.randint(0, 9), rng.randint(1, 4))
        point = lift(basis, sigma, r)
        for pid in pset.ids:
            assert dot(forms[pid].coefficients, point) == \
                eval_polynomial(pid, pset, sigma, r)


def test_sample_cells_behaviour():
    pset = polynomial_set(TAU2, 2)
    assert sample_cells([pset], 2, SamplerConfig(budget=0)) == []
    samples = sample_cells([pset], 2, SamplerConfig(budget=400, seed=4))
    assert 1 < len(samples) <= 400
    keys = [s.key() for s in samples]
    assert len(set(keys)) == len(keys)
    again = sample_cells([pset], 2, SamplerConfig(budget=400, seed=4))
    assert [s.key() for s in again] == keys  # deterministic for a seed
    # every witness reproduces its recorded sign vector
    for s in samples[:20]:
        sigma, r = s.witness
        assert sign_vector(pset, sigma, r).signs == s.signs[0].signs


def test_sweep_hits_many_cells():
    pset = polynomial_set(TAU2, 3)
    samples = sample_cells([pset], 3, SamplerConfig(budget=3000, seed=1))
    from frechetsign import critical_values
    ncrit = len(critical_values(pset,
                                validate_curve([(0.0, 0.0), (2.0, 1.0),
                                                (4.0, 0.0)])).values)
    assert len(samples) > ncrit  # far more cells than one radius sweep


def test_vc_experiment_trivial_cases():
    rep = vc_counting_experiment([TAU2], 2, budget=600, seed=0)
    assert rep.distinct_range_subsets <= rep.distinct_sign_vectors
    assert all(set(s) <= {0} for s in rep.subsets)
    twin = validate_curve([(0.0, 0.0), (2.0, 1.0), (4.0, 0.0)])
    rep = vc_counting_experiment([twin, twin], 2, budget=600, seed=0)
    assert all(s in ((), (0, 1)) for s in rep.subsets)


def test_vc_experiment_report(tmp_path):
    rng = random.Random(6)
    T = [rational_curve(rng, 2, 1) for _ in range(4)]
    out = tmp_path / "report.json"
    rep = vc_counting_experiment(T, 2, budget=2000, seed=2,
                                 out_path=str(out))
    assert rep.exponent == 1 * 2 + 1
    assert rep.log2_bound_reference == pytest.approx(
        rep.exponent * math.log2(16.0 * rep.poly_count))
    assert rep.shattered == (rep.distinct_range_subsets == 16)
    import json
    data = json.loads(out.read_text())
    assert data["summary"]["distinct_sign_vectors"] == rep.distinct_sign_vectors
    assert len(data["records"]) == rep.distinct_sign_vectors

import math
import random
from fractions import Fraction

import pytest

from frechetsign import (decide_frechet, decide_from_sign_vector,
                         decide_weak_frechet, discrete_frechet_oracle,
                         frechet_distance, polynomial_set, sign_vector,
                         validate_curve)
from frechetsign.engine import _decide_core, parametric_point
from conftest import (BASE, HAIRPIN_SIGMA, HAIRPIN_TAU, TENT, float_curve,
                      max_edge_length, rational_curve)

OFF_A = validate_curve([(0.0, 0.0), (1.0, 0.0)])
OFF_B = validate_curve([(0.0, 1.0), (1.0, 1.0)])


def check_witness(sigma, tau, r, witness):
    """Monotone in both parameters, spans both curves, stays within r."""
    assert witness[0] == (0.0, 0.0)
    assert witness[-1] == (float(tau.size - 1), float(sigma.size - 1))
    tol = 1e-9 * (1.0 + float(r))
    prev = (0.0, 0.0)
    for t, s in witness:
        assert t >= prev[0] - 1e-15 and s >= prev[1] - 1e-15
        prev = (t, s)
        p = parametric_point(tau, t)
        q = parametric_point(sigma, s)
        assert math.dist(p, q) <= float(r) + tol


def test_decide_basic():
    assert decide_frechet(TENT, TENT, 0.0).feasible
    assert not decide_frechet(OFF_A, OFF_B, 0.5, want_witness=False).feasible
    assert decide_frechet(OFF_A, OFF_B, 1.0).feasible
    assert decide_frechet(BASE, TENT, 1.0).feasible
    assert not decide_frechet(BASE, TENT, 0.99, want_witness=False).feasible
    with pytest.raises(ValueError):
        decide_frechet(OFF_A, OFF_B, -1.0)
    with pytest.raises(ValueError):
        decide_frechet(OFF_A, validate_curve([(0.0,), (1.0,)]), 1.0)


def test_weak_basic():
    assert decide_weak_frechet(OFF_A, OFF_B, 1.0)
    assert not decide_weak_frechet(OFF_A, OFF_B, 0.5)
    # backtracking curve: connectivity holds well below the monotone bound
    assert decide_weak_frechet(HAIRPIN_SIGMA, HAIRPIN_TAU, 0.5)
    assert not decide_frechet(HAIRPIN_SIGMA, HAIRPIN_TAU, 0.5,
                              want_witness=False).feasible


def test_hairpin_distances():
    strong = frechet_distance(HAIRPIN_SIGMA, HAIRPIN_TAU)
    weak = frechet_distance(HAIRPIN_SIGMA, HAIRPIN_TAU, weak=True)
    assert strong.value == pytest.approx(1.0)
    assert weak.value < strong.value
    oracle = discrete_frechet_oracle(HAIRPIN_SIGMA, HAIRPIN_TAU, 512)
    assert abs(strong.value - oracle) <= 2 * 4.0 / 512


def test_distance_basic():
    assert frechet_distance(TENT, TENT).value == 0.0
    res = frechet_distance(OFF_A, OFF_B)
    assert res.value == pytest.approx(1.0)
    assert res.witness is not None
    check_witness(OFF_A, OFF_B, res.value * (1 + 1e-9) + 1e-12, res.witness)


def test_distance_root_membership_exact():
    rng = random.Random(5)
    for _ in range(8):
        d = rng.choice([1, 2])
        sigma = rational_curve(rng, rng.randint(2, 4), d)
        tau = rational_curve(rng, rng.randint(2, 4), d)
        res = frechet_distance(sigma, tau)
        assert res.rsq in res.critical.rsq
        # minimality: the answer root is feasible, its predecessor is not
        assert _decide_core(sigma, tau, res.rsq, exact=True).feasible
        if res.index > 0:
            prev = res.critical.rsq[res.index - 1]
            assert not _decide_core(sigma, tau, prev, exact=True).feasible


def test_monotone_and_symmetry():
    rng = random.Random(9)
    for _ in range(10):
        d = rng.choice([1, 2])
        sigma = rational_curve(rng, 3, d)
        tau = rational_curve(rng, 3, d)
        res = frechet_distance(sigma, tau)
        sym = frechet_distance(tau, sigma)
        assert res.rsq == sym.rsq
        rev = frechet_distance(sigma.reverse(), tau.reverse())
        assert res.rsq == rev.rsq
        # feasibility is upward monotone
        assert decide_frechet(sigma, tau, res.value * 1.5 + 0.1,
                              want_witness=False).feasible
        weak = frechet_distance(sigma, tau, weak=True)
        assert weak.value <= res.value + 1e-12


def test_witness_validity_random():
    rng = random.Random(13)
    for _ in range(10):
        sigma = float_curve(rng, rng.randint(2, 5), 2)
        tau = float_curve(rng, rng.randint(2, 5), 2)
        res = frechet_distance(sigma, tau)
        r_eff = res.value + 1e-9 * (1.0 + res.value)
        check_witness(sigma, tau, r_eff, res.witness)


def test_sign_vector_decision_equivalence():
    rng = random.Random(21)
    for _ in range(25):
        d = rng.choice([1, 2])
        sigma = rational_curve(rng, rng.randint(2, 4), d)
        tau = rational_curve(rng, rng.randint(2, 4), d)
        pset = polynomial_set(tau, sigma.size)
        for num in (0, 1, 3, 7):
            r = Fraction(num, 2)
            sv = sign_vector(pset, sigma, r)
            assert decide_from_sign_vector(sv) == \
                decide_frechet(sigma, tau, r, want_witness=False).feasible
            assert decide_from_sign_vector(sv, weak=True) == \
                decide_weak_frechet(sigma, tau, r)


def test_sign_vector_decision_errors():
    pset = polynomial_set(HAIRPIN_TAU, 2)
    sv = sign_vector(pset, HAIRPIN_SIGMA, -1.0)
    with pytest.raises(ValueError):
        decide_from_sign_vector(sv)
    wset = polynomial_set(HAIRPIN_TAU, 2, weak_only=True)
    wv = sign_vector(wset, HAIRPIN_SIGMA, 1.0)
    assert decide_from_sign_vector(wv, weak=True)
    with pytest.raises(ValueError):
        decide_from_sign_vector(wv)


def test_hairpin_sign_vector_splits_metrics():
    pset = polynomial_set(HAIRPIN_TAU, 2)
    sv = sign_vector(pset, HAIRPIN_SIGMA, 0.5)
    assert decide_from_sign_vector(sv, weak=True)
    assert not decide_from_sign_vector(sv)


def test_discrete_oracle():
    assert discrete_frechet_oracle(TENT, TENT, 4) == 0.0
    assert discrete_frechet_oracle(OFF_A, OFF_B, 1) == pytest.approx(1.0)
    tent_gap = discrete_frechet_oracle(BASE, TENT, 64)
    assert abs(tent_gap - 1.0) <= 2 * (2.0 / 64)
    with pytest.raises(ValueError):
        discrete_frechet_oracle(TENT, TENT, 0)


def test_distance_vs_oracle_random():
    rng = random.Random(33)
    for _ in range(12):
        d = rng.choice([1, 2])
        sigma = float_curve(rng, rng.randint(2, 4), d)
        tau = float_curve(rng, rng.randint(2, 4), d)
        got = frechet_distance(sigma, tau).value
        L = max_edge_length(sigma, tau)
        oracle = discrete_frechet_oracle(sigma, tau, 256)
        assert abs(got - oracle) <= 2 * L / 256

import math
import random

import pytest

from frechetsign import (SearchBudget, decide_frechet, decide_weak_frechet,
                         frechet_distance, greedy_simplify,
                         min_error_simplify, min_size_simplify,
                         validate_curve, vertex_restricted_simplify)
from frechetsign.simplify import min_error_oracle_1d, min_size_oracle_1d
from conftest import TENT, float_curve

FAST = SearchBudget(restarts=6, max_evals=4000)


def certify(res, tau, metric="strong"):
    assert res.certified
    r = res.achieved_r * (1 + 1e-9) + 1e-12
    if metric == "weak":
        assert decide_weak_frechet(res.sigma, tau, r)
    else:
        assert decide_frechet(res.sigma, tau, r, want_witness=False).feasible


def test_min_size_flat_tent():
    tau = validate_curve([(0.0, 0.0), (1.0, 0.01), (2.0, 0.0)])
    res = min_size_simplify(tau, 0.02, budget=FAST)
    assert res.sigma.size == 2
    certify(res, tau)


def test_min_size_segment_identity():
    tau = validate_curve([(0.0, 0.0), (3.0, 1.0)])
    res = min_size_simplify(tau, 0.5, budget=FAST)
    assert res.sigma.size == 2
    certify(res, tau)


def test_min_size_invalid_r():
    with pytest.raises(ValueError):
        min_size_simplify(TENT, 0.0)


def test_min_error_identity_at_full_size():
    res = min_error_simplify(TENT, 3, budget=FAST)
    assert res.achieved_r == 0.0
    assert res.sigma.size == 3
    certify(res, TENT)


def test_min_error_tent():
    res = min_error_simplify(TENT, 2, seed=1)
    assert res.achieved_r == pytest.approx(0.5, abs=1e-4)
    certify(res, TENT)


def test_min_error_monotone_in_k():
    rng = random.Random(2)
    tau = float_curve(rng, 5, 2)
    prev = math.inf
    for k in (2, 3, 4):
        res = min_error_simplify(tau, k, budget=FAST, seed=3)
        assert res.achieved_r <= prev + 1e-9
        certify(res, tau)
        prev = res.achieved_r


def test_min_error_1d_vs_grid_oracle():
    tau = validate_curve([(0.0,), (2.0,), (0.0,)])
    res = min_error_simplify(tau, 2, seed=0)
    oracle = min_error_oracle_1d(tau)
    assert res.achieved_r <= oracle["r_grid"] + 1e-6
    assert res.achieved_r >= oracle["r_grid"] - oracle["halfwidth"] - 1e-6
    assert res.achieved_r == pytest.approx(1.0, abs=1e-4)


def test_min_size_1d_vs_grid_oracle():
    tau = validate_curve([(0.0,), (2.0,), (0.0,)])
    oracle = min_size_oracle_1d(tau, 0.9)
    assert oracle == {"opt": 3, "status": "closed"}
    res = min_size_simplify(tau, 0.9, budget=FAST)
    assert res.sigma.size == 3
    certify(res, tau)
    # above the apex half-height a single segment suffices
    assert min_size_oracle_1d(tau, 1.1) == {"opt": 2, "status": "closed"}
    res = min_size_simplify(tau, 1.1, budget=FAST)
    assert res.sigma.size == 2


def test_vertex_restricted():
    res = vertex_restricted_simplify(TENT, 0.5)
    assert res.sigma.size == 3  # apex is 1 away from the chord
    res = vertex_restricted_simplify(TENT, 1.5)
    assert res.sigma.size == 2
    certify(res, TENT)
    rng = random.Random(8)
    tau = float_curve(rng, 6, 2)
    res = vertex_restricted_simplify(tau, 1.0)
    certify(res, tau)
    assert all(v in tau.vertices for v in res.sigma.vertices)


def test_greedy_segment_identity():
    tau = validate_curve([(0.0, 0.0), (4.0, 1.0)])
    res = greedy_simplify(tau, 0.5, 0.5, budget=FAST)
    assert res.sigma.size == 2
    certify(res, tau)


def test_greedy_near_flat():
    eps = 0.01
    tau = validate_curve([(0.0, 0.0), (1.0, eps), (2.0, 0.0), (3.0, eps),
                          (4.0, 0.0)])
    res = greedy_simplify(tau, 0.05, 0.5, budget=FAST)
    assert res.sigma.size <= 3  # opt is 2; (1+alpha)*opt = 3
    certify(res, tau)


def test_greedy_invalid_args():
    with pytest.raises(ValueError):
        greedy_simplify(TENT, -1.0, 0.5)
    with pytest.raises(ValueError):
        greedy_simplify(TENT, 1.0, 1.5)


def test_weak_metric_simplification():
    rng = random.Random(12)
    tau = float_curve(rng, 5, 2)
    res = min_error_simplify(tau, 3, metric="weak", budget=FAST)
    certify(res, tau, metric="weak")
    strong = min_error_simplify(tau, 3, metric="strong", budget=FAST)
    assert res.achieved_r <= strong.achieved_r + 1e-6


def test_size_sandwich():
    rng = random.Random(19)
    for _ in range(3):
        tau = float_curve(rng, 5, 2)
        r = 0.25 * tau.diameter()
        opt_ub = min_size_simplify(tau, r, budget=FAST)
        vr = vertex_restricted_simplify(tau, r)
        assert 2 <= opt_ub.sigma.size <= vr.sigma.size <= tau.size
        certify(opt_ub, tau)

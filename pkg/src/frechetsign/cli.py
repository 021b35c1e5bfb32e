"""Command-line drivers.

Exit codes: 0 success (or "yes"), 1 negative decision, 2 usage/input error.
The default arithmetic mode can be set via FRECHETSIGN_MODE=float|rational.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction

from .curvefile import read_curves
from .engine import (decide_frechet, decide_weak_frechet,
                     decide_from_sign_vector, frechet_distance)
from .geometry import PolygonalCurve
from .index import (SubcurveSpec, build_range_index, load_index,
                    nearest_neighbor, range_query, save_index,
                    subcurve_distance)
from .polynomials import polynomial_set, sign_vector_rsq
from .simplify import (SearchBudget, greedy_simplify, min_error_simplify,
                       min_size_simplify)
from .arrangement import vc_counting_experiment

__all__ = ["main"]


def _fmt(x, digits=None) -> str:
    v = float(x)
    if digits is not None:
        return f"{v:.{digits}g}"
    return repr(v)


def _parse_radius(s: str, mode: str):
    return Fraction(s) if mode == "rational" else float(s)


def _load(args):
    curves = read_curves(args.input, mode=args.mode)
    return dict(curves), [c for _, c in curves], [cid for cid, _ in curves]


def _get(table, cid):
    if cid not in table:
        raise ValueError(f"no curve with id {cid!r} in the input file")
    return table[cid]


def _print_curve(cid: str, curve: PolygonalCurve) -> None:
    for v in curve.vertices:
        print(",".join([cid] + [_fmt(c) for c in v]))


def _cmd_distance(args) -> int:
    table, _, _ = _load(args)
    sigma, tau = _get(table, args.sigma), _get(table, args.tau)
    res = frechet_distance(sigma, tau, weak=args.metric == "weak")
    print(f"distance={_fmt(res.value, args.digits)}")
    print(f"critical_values={len(res.critical.values)}")
    if res.witness is not None:
        print(f"witness_breakpoints={len(res.witness)}")
        if args.witness:
            for t, s in res.witness:
                print(f"witness={_fmt(t)},{_fmt(s)}")
    return 0


def _cmd_decide(args) -> int:
    table, _, _ = _load(args)
    sigma, tau = _get(table, args.sigma), _get(table, args.tau)
    r = _parse_radius(args.r, args.mode)
    weak = args.metric == "weak"
    if args.from_signs:
        exact = args.mode == "rational" and sigma.is_rational() \
            and tau.is_rational()
        rsq = Fraction(r) ** 2 if exact else float(r) ** 2
        pset = polynomial_set(tau, sigma.size)
        verdict = decide_from_sign_vector(
            sign_vector_rsq(pset, sigma, rsq), weak=weak)
    elif weak:
        verdict = decide_weak_frechet(sigma, tau, r)
    else:
        verdict = decide_frechet(sigma, tau, r, want_witness=False).feasible
    print(f"decide={'yes' if verdict else 'no'}")
    return 0 if verdict else 1


def _cmd_simplify(args) -> int:
    table, _, _ = _load(args)
    tau = _get(table, args.tau)
    budget = SearchBudget(restarts=args.budget)
    if args.problem == "min-size":
        if args.r is None:
            raise ValueError("--r is required for min-size")
        res = min_size_simplify(tau, float(args.r), metric=args.metric,
                                budget=budget, seed=args.seed)
    elif args.problem == "min-error":
        if args.k is None:
            raise ValueError("--k is required for min-error")
        res = min_error_simplify(tau, args.k, metric=args.metric,
                                 budget=budget, seed=args.seed)
    else:
        if args.r is None or args.alpha is None:
            raise ValueError("--r and --alpha are required for greedy")
        res = greedy_simplify(tau, float(args.r), args.alpha,
                              metric=args.metric, budget=budget,
                              seed=args.seed)
    print(f"size={res.sigma.size}")
    print(f"achieved_r={_fmt(res.achieved_r, args.digits)}")
    print(f"certified={'true' if res.certified else 'false'}")
    _print_curve("sigma", res.sigma)
    return 0


def _cmd_query(args) -> int:
    table, curves, ids = _load(args)
    sigma = read_curves(args.sigma_file, mode=args.mode)[0][1]
    if args.subcurve is not None:
        tau = _get(table, args.tau)
        start, end = args.subcurve.split(",")
        i, beta = start.split(":")
        ip, gamma = end.split(":")
        spec = SubcurveSpec(int(i), _parse_radius(beta, args.mode),
                            int(ip), _parse_radius(gamma, args.mode))
        val = subcurve_distance(tau, spec, sigma, metric=args.metric,
                                verify=args.verify)
        print(f"distance={_fmt(val, args.digits)}")
        return 0
    if args.load_index:
        index = load_index(args.load_index)
    else:
        index = build_range_index(curves, sigma.size,
                                  warmup_budget=args.warmup, seed=args.seed)
    if args.nn:
        a, r_star = nearest_neighbor(index, sigma, metric=args.metric)
        print(f"nn={ids[a]}")
        print(f"distance={_fmt(r_star, args.digits)}")
        code = 0
    else:
        if args.r is None:
            raise ValueError("one of --r, --nn, --subcurve is required")
        subset = range_query(index, sigma, _parse_radius(args.r, args.mode))
        print("subset=" + ",".join(ids[a] for a in sorted(subset)))
        code = 0 if subset else 1
    if args.save_index:
        save_index(index, args.save_index)
    return code


def _cmd_vc_experiment(args) -> int:
    _, curves, _ = _load(args)
    report = vc_counting_experiment(curves, args.k, args.budget,
                                    seed=args.seed, out_path=args.out)
    print(f"distinct_sign_vectors={report.distinct_sign_vectors}")
    print(f"distinct_range_subsets={report.distinct_range_subsets}")
    print(f"shattered={'true' if report.shattered else 'false'}")
    print(f"exponent={report.exponent}")
    print(f"poly_count={report.poly_count}")
    print(f"log2_bound_reference={report.log2_bound_reference:.3f}")
    return 0


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frechetsign",
        description="Frechet distance decisions, simplification and "
                    "queries driven by polynomial sign conditions")
    default_mode = os.environ.get("FRECHETSIGN_MODE", "float")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("input", help="curve file (csv or jsonl)")
        p.add_argument("--mode", choices=["float", "rational"],
                       default=default_mode)
        p.add_argument("--metric", choices=["strong", "weak"],
                       default="strong")
        p.add_argument("--digits", type=int, default=None)
        p.add_argument("--seed", type=int, default=0)

    p = sub.add_parser("distance", help="exact distance between two curves")
    common(p)
    p.add_argument("sigma")
    p.add_argument("tau")
    p.add_argument("--witness", action="store_true")
    p.set_defaults(func=_cmd_distance)

    p = sub.add_parser("decide", help="decide d <= r")
    common(p)
    p.add_argument("sigma")
    p.add_argument("tau")
    p.add_argument("--r", required=True)
    p.add_argument("--from-signs", action="store_true")
    p.set_defaults(func=_cmd_decide)

    p = sub.add_parser("simplify", help="curve simplification")
    common(p)
    p.add_argument("tau")
    p.add_argument("--problem", choices=["min-size", "min-error", "greedy"],
                   required=True)
    p.add_argument("--r", default=None)
    p.add_argument("--k", type=int, default=None)
    p.add_argument("--alpha", type=float, default=None)
    p.add_argument("--budget", type=int, default=32)
    p.set_defaults(func=_cmd_simplify)

    p = sub.add_parser("query", help="range / nearest-neighbor / subcurve")
    common(p)
    p.add_argument("--sigma-file", required=True)
    p.add_argument("--r", default=None)
    p.add_argument("--nn", action="store_true")
    p.add_argument("--subcurve", default=None,
                   help="i:beta,i2:gamma (0-based edges)")
    p.add_argument("--tau", default=None, help="target id for --subcurve")
    p.add_argument("--verify", action="store_true")
    p.add_argument("--warmup", type=int, default=0)
    p.add_argument("--load-index", default=None)
    p.add_argument("--save-index", default=None)
    p.set_defaults(func=_cmd_query)

    p = sub.add_parser("vc-experiment", help="sign-cell counting experiment")
    common(p)
    p.add_argument("--k", type=int, required=True)
    p.add_argument("--budget", type=int, required=True)
    p.add_argument("--out", default=None)
    p.set_defaults(func=_cmd_vc_experiment)
    return parser


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return 2 if e.code not in (0, None) else 0
    try:
        return args.func(args)
    except (ValueError, KeyError, OSError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

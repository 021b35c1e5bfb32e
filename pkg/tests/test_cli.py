import json

import pytest

from frechetsign import read_curves, validate_curve, write_curves
from frechetsign.cli import main

CSV = """\
# d=2
a,0,0
a,1,1
a,2,0

b,0,0
b,2,0

c,0,1
c,2,1
"""


@pytest.fixture
def curves_csv(tmp_path):
    path = tmp_path / "curves.csv"
    path.write_text(CSV)
    return str(path)


@pytest.fixture
def sigma_file(tmp_path):
    path = tmp_path / "sigma.csv"
    path.write_text("# d=2\nq,0,0.5\nq,2,0.5\n")
    return str(path)


def test_curvefile_roundtrip(tmp_path):
    curves = [("x", validate_curve([(0.0, 1.5), (2.0, -3.0)])),
              ("y", validate_curve([(1.0, 1.0), (0.0, 0.0), (5.0, 2.0)]))]
    for fmt in ("csv", "jsonl"):
        path = tmp_path / f"t.{fmt}"
        write_curves(str(path), curves, fmt=fmt)
        back = read_curves(str(path))
        assert back == curves


def test_curvefile_rational_mode(tmp_path):
    from fractions import Fraction
    curves = [("x", validate_curve([(Fraction(1, 3), Fraction(0)),
                                    (Fraction(2), Fraction(5, 7))]))]
    path = tmp_path / "t.jsonl"
    write_curves(str(path), curves, fmt="jsonl")
    back = read_curves(str(path), mode="rational")
    assert back == curves
    assert back[0][1].is_rational()


def test_cli_distance(curves_csv, capsys):
    assert main(["distance", curves_csv, "b", "a", "--digits", "6"]) == 0
    out = capsys.readouterr().out
    assert "distance=1" in out
    assert "critical_values=" in out
    assert "witness_breakpoints=" in out


def test_cli_decide_exit_codes(curves_csv, capsys):
    assert main(["decide", curves_csv, "b", "c", "--r", "1"]) == 0
    assert "decide=yes" in capsys.readouterr().out
    assert main(["decide", curves_csv, "b", "c", "--r", "0.5"]) == 1
    assert "decide=no" in capsys.readouterr().out


def test_cli_decide_from_signs_matches_direct(curves_csv, capsys):
    for mode in ("float", "rational"):
        for r in ("1", "0.5"):
            direct = main(["decide", curves_csv, "b", "a", "--r", r,
                           "--mode", mode])
            capsys.readouterr()
            via_signs = main(["decide", curves_csv, "b", "a", "--r", r,
                              "--mode", mode, "--from-signs"])
            capsys.readouterr()
            assert direct == via_signs


def test_cli_weak_metric(curves_csv):
    hair = "# d=1\ns,0\ns,6\n\nt,0\nt,4\nt,2\nt,6\n"
    import os
    path = os.path.join(os.path.dirname(curves_csv), "hair.csv")
    with open(path, "w") as fh:
        fh.write(hair)
    assert main(["decide", path, "s", "t", "--r", "0.5",
                 "--metric", "weak"]) == 0
    assert main(["decide", path, "s", "t", "--r", "0.5"]) == 1


def test_cli_simplify(curves_csv, capsys):
    assert main(["simplify", curves_csv, "a", "--problem", "min-error",
                 "--k", "2", "--budget", "8"]) == 0
    out = capsys.readouterr().out
    assert "size=2" in out
    assert "certified=true" in out
    assert main(["simplify", curves_csv, "a", "--problem", "min-size",
                 "--r", "1.5", "--budget", "4"]) == 0
    out = capsys.readouterr().out
    assert "size=2" in out
    # missing required parameter for the chosen problem
    assert main(["simplify", curves_csv, "a", "--problem", "greedy"]) == 2


def test_cli_query(curves_csv, sigma_file, capsys, tmp_path):
    assert main(["query", curves_csv, "--sigma-file", sigma_file,
                 "--r", "1.2"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("subset=")
    assert set(out.strip().split("=", 1)[1].split(",")) == {"a", "b", "c"}
    assert main(["query", curves_csv, "--sigma-file", sigma_file,
                 "--nn"]) == 0
    out = capsys.readouterr().out
    assert "nn=" in out and "distance=" in out
    # save then load round trip
    idx = str(tmp_path / "idx.json")
    assert main(["query", curves_csv, "--sigma-file", sigma_file,
                 "--r", "1.2", "--save-index", idx]) == 0
    capsys.readouterr()
    assert main(["query", curves_csv, "--sigma-file", sigma_file,
                 "--r", "1.2", "--load-index", idx]) == 0
    out = capsys.readouterr().out
    assert set(out.strip().split("=", 1)[1].split(",")) == {"a", "b", "c"}


def test_cli_query_subcurve(curves_csv, sigma_file, capsys, tmp_path):
    sig = tmp_path / "half.csv"
    sig.write_text("# d=2\nq,0.5,0.5\nq,2,0\n")
    assert main(["query", curves_csv, "--sigma-file", str(sig),
                 "--subcurve", "0:0.5,1:1", "--tau", "a", "--verify",
                 "--digits", "8"]) == 0
    out = capsys.readouterr().out
    assert out.startswith("distance=")
    assert abs(float(out.split("=")[1]) - 0.4 ** 0.5) < 1e-6


def test_cli_vc_experiment(curves_csv, capsys, tmp_path):
    out_path = str(tmp_path / "vc.json")
    assert main(["vc-experiment", curves_csv, "--k", "2",
                 "--budget", "500", "--out", out_path]) == 0
    out = capsys.readouterr().out
    assert "distinct_sign_vectors=" in out
    assert "log2_bound_reference=" in out
    data = json.loads(open(out_path).read())
    assert data["summary"]["n"] == 3


def test_cli_errors(curves_csv, capsys):
    assert main(["distance", curves_csv, "zzz", "a"]) == 2
    assert "no curve with id" in capsys.readouterr().err
    assert main(["distance", "/nonexistent/file.csv", "a", "b"]) == 2
    assert main(["decide", curves_csv, "a"]) == 2  # missing args

"""Curve file ingestion and emission (CSV and JSONL).

CSV: a header line ``# d=<dim>``, then records ``id,x1,...,xd`` with blank
lines separating curves; the id repeats on every row of a curve.  JSONL:
one object per line, ``{"id": ..., "points": [[...], ...]}``.

In rational mode every numeric literal is parsed as an exact Fraction
(decimal strings convert exactly), so a write/read round trip is bit-exact;
float mode uses shortest round-trip formatting.
"""

from __future__ import annotations

import json
import os
from fractions import Fraction
from typing import List, Sequence, Tuple

from .geometry import PolygonalCurve, validate_curve

__all__ = ["read_curves", "write_curves"]


def _parse_value(s: str, rational: bool):
    return Fraction(s) if rational else float(s)


def _format_value(x) -> str:
    if isinstance(x, (int, Fraction)):
        return str(Fraction(x))
    return repr(float(x))


def _detect_format(path: str, fmt):
    if fmt is not None:
        return fmt
    ext = os.path.splitext(path)[1].lower()
    if ext in (".jsonl", ".json"):
        return "jsonl"
    return "csv"


def read_curves(path: str, mode: str = "float",
                fmt: str = None) -> List[Tuple[str, PolygonalCurve]]:
    if mode not in ("float", "rational"):
        raise ValueError("mode must be 'float' or 'rational'")
    rational = mode == "rational"
    fmt = _detect_format(path, fmt)
    with open(path) as fh:
        text = fh.read()
    if fmt == "jsonl":
        out = _read_jsonl(text, rational)
    elif fmt == "csv":
        out = _read_csv(text, rational)
    else:
        raise ValueError(f"unknown format {fmt!r}")
    ids = [cid for cid, _ in out]
    if len(set(ids)) != len(ids):
        raise ValueError("duplicate curve ids")
    if not out:
        raise ValueError("no curves in file")
    d = out[0][1].dim
    if any(c.dim != d for _, c in out):
        raise ValueError("curves have inconsistent dimensions")
    return out


def _read_csv(text: str, rational: bool):
    lines = text.splitlines()
    dim = None
    out = []
    block_id, block_pts = None, []

    def flush():
        nonlocal block_id, block_pts
        if block_pts:
            out.append((block_id, validate_curve(block_pts)))
        block_id, block_pts = None, []

    for raw in lines:
        line = raw.strip()
        if line.startswith("#"):
            body = line[1:].strip()
            if body.startswith("d="):
                dim = int(body[2:])
            continue
        if not line:
            flush()
            continue
        parts = [p.strip() for p in line.split(",")]
        if dim is None:
            raise ValueError("missing '# d=<dim>' header")
        if len(parts) != dim + 1:
            raise ValueError(f"record has {len(parts) - 1} coordinates, "
                             f"header declares d={dim}")
        cid = parts[0]
        if block_id is None:
            block_id = cid
        elif cid != block_id:
            raise ValueError(f"id changed mid-curve: {block_id!r} -> {cid!r}")
        block_pts.append(tuple(_parse_value(p, rational) for p in parts[1:]))
    flush()
    return out


def _read_jsonl(text: str, rational: bool):
    out = []
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        if rational:
            obj = json.loads(line, parse_float=Fraction, parse_int=Fraction)
        else:
            obj = json.loads(line)
        pts = []
        for p in obj["points"]:
            coords = []
            for c in p:
                if isinstance(c, str):
                    coords.append(_parse_value(c, rational))
                elif rational:
                    coords.append(Fraction(c))
                else:
                    coords.append(float(c))
            pts.append(tuple(coords))
        out.append((str(obj["id"]), validate_curve(pts)))
    return out


def write_curves(path: str, curves: Sequence[Tuple[str, PolygonalCurve]],
                 fmt: str = None) -> None:
    fmt = _detect_format(path, fmt)
    if fmt == "csv":
        d = curves[0][1].dim
        chunks = [f"# d={d}"]
        for cid, curve in curves:
            for v in curve.vertices:
                chunks.append(",".join([cid] + [_format_value(c) for c in v]))
            chunks.append("")
        text = "\n".join(chunks)
    elif fmt == "jsonl":
        lines = []
        for cid, curve in curves:
            rational = curve.is_rational()
            pts = [[_format_value(c) if rational else float(c) for c in v]
                   for v in curve.vertices]
            lines.append(json.dumps({"id": cid, "points": pts}))
        text = "\n".join(lines) + "\n"
    else:
        raise ValueError(f"unknown format {fmt!r}")
    with open(path, "w") as fh:
        fh.write(text)

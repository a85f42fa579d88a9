"""Command-line front end: ``kpal2d --mode sq --k 1 --input grid.txt``.

Records are written one per maximal palindrome, ordered by center, in
doubled coordinates (a block over rows ``a..b`` and columns ``l..r`` has
center ``(a + b, l + r)``).  Counters and timings go to stderr as one JSON
object.
"""
from __future__ import annotations

import argparse
import json
import sys
import time
from pathlib import Path

import numpy as np

from .grid import Grid, GridFormatError, brute_rect_maximal, brute_sq_maximal
from .rect2dp import RectIndex, rect_baseline, rect_improved
from .sq2dp import SquareIndex, sq_baseline, sq_improved, with_positions

SQ_FIELDS = ("type", "cr", "cc", "side", "mismatches")
RECT_FIELDS = ("type", "cr", "cc", "w", "h", "mismatches")


def read_grid(path) -> Grid:
    """Read newline-delimited rows; CR/LF line ends are stripped."""
    data = Path(path).read_bytes()
    lines = data.split(b"\n")
    if lines and lines[-1] == b"":
        lines.pop()
    lines = [ln[:-1] if ln.endswith(b"\r") else ln for ln in lines]
    if not lines:
        raise GridFormatError(f"{path}: empty file")
    if not lines[0]:
        raise GridFormatError(f"{path}: row 1 is empty")
    try:
        return Grid.from_rows(lines)
    except GridFormatError as e:
        raise GridFormatError(f"{path}: {e}") from None


def generate_grid(n: int, m: int, sigma: int, seed: int) -> Grid:
    """Seeded uniform grid; symbols are lowercase letters when ``sigma <= 26``."""
    if n < 1 or m < 1 or sigma < 1:
        raise ValueError("generator needs n, m, sigma >= 1")
    codes = np.random.default_rng(seed).integers(0, sigma, (n, m))
    return Grid.from_symbols(codes + (ord("a") if sigma <= 26 else 0))


def _parse_gen(text: str):
    try:
        n, m, sigma, seed = (int(x) for x in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError("expected n,m,sigma,seed") from None
    return n, m, sigma, seed


def _nonneg(text: str) -> int:
    k = int(text)
    if k < 0:
        raise argparse.ArgumentTypeError("k must be non-negative")
    return k


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="kpal2d", description=__doc__.splitlines()[0])
    p.add_argument("--mode", choices=("sq", "rect"), required=True)
    p.add_argument("--k", type=_nonneg, default=0, help="mismatch budget")
    p.add_argument("--algo", choices=("improved", "baseline", "brute"), default="improved")
    src = p.add_mutually_exclusive_group(required=True)
    src.add_argument("--input", metavar="PATH", help="file of newline-delimited rows")
    src.add_argument("--gen", type=_parse_gen, metavar="N,M,SIGMA,SEED",
                     help="seeded random grid instead of a file")
    p.add_argument("--format", choices=("jsonl", "tsv"), default="jsonl")
    p.add_argument("--positions", action="store_true",
                   help="add mismatch cells to square records")
    p.add_argument("--counters", action="store_true",
                   help="write timings and LCE query totals to stderr")
    return p


def run(args, out=sys.stdout, err=sys.stderr) -> int:
    try:
        g = read_grid(args.input) if args.input else generate_grid(*args.gen)
    except (OSError, GridFormatError, ValueError) as e:
        print(f"kpal2d: {e}", file=err)
        return 2

    t0 = time.perf_counter()
    index = None
    if args.algo == "improved":
        index = SquareIndex.build(g) if args.mode == "sq" else RectIndex.build(g)
    elif args.algo == "baseline":
        index = SquareIndex.build(g, with_names=False) if args.mode == "sq" else RectIndex.build(g)
    t1 = time.perf_counter()
    if args.mode == "sq":
        if args.algo == "improved":
            res = sq_improved(g, args.k, index, positions=args.positions)
        elif args.algo == "baseline":
            res = sq_baseline(g, args.k, index, positions=args.positions)
        else:
            res = brute_sq_maximal(g, args.k)
            if args.positions:
                with_positions(g, res, args.k)
    else:
        algo = {"improved": rect_improved, "baseline": rect_baseline}.get(args.algo)
        res = algo(g, args.k, index) if algo else brute_rect_maximal(g, args.k)
    t2 = time.perf_counter()

    write_records(res, args.mode, args.format, args.positions and args.mode == "sq", out)
    if args.counters:
        counters = {
            "mode": args.mode, "algo": args.algo, "k": args.k, "n": g.n, "m": g.m,
            "records": len(res),
            "index_seconds": round(t1 - t0, 6),
            "search_seconds": round(t2 - t1, 6),
        }
        if res.queries is not None:
            q = np.asarray(res.queries)[:, 2]
            counters.update(centers=int(q.size), lce_queries=int(q.sum()),
                            max_queries_per_center=int(q.max()) if q.size else 0)
        if index is not None and getattr(index, "names", None) is not None:
            counters["name_entries"] = index.name_entries
        print(json.dumps(counters), file=err)
    return 0


def write_records(res, mode: str, fmt: str, positions: bool, out) -> None:
    fields = SQ_FIELDS if mode == "sq" else RECT_FIELDS
    if positions:
        fields = fields + ("positions",)
    if fmt == "tsv":
        out.write("\t".join(fields) + "\n")
    for rec in res:
        if mode == "sq":
            row = ["sq", rec.center.cr, rec.center.cc, rec.side, rec.mismatches]
        else:
            row = ["rect", rec.center.cr, rec.center.cc, rec.width, rec.height, rec.mismatches]
        if positions:
            row.append([list(p) for p in rec.mismatch_positions])
        if fmt == "tsv":
            if positions:
                row[-1] = ";".join(f"{i},{j}" for i, j in row[-1])
            out.write("\t".join(str(x) for x in row) + "\n")
        else:
            out.write(json.dumps(dict(zip(fields, row))) + "\n")


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return run(args)


if __name__ == "__main__":
    sys.exit(main())

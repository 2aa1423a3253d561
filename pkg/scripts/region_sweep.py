"""Bound curves and achieved costs over N, written as CSV (one file per q)."""

from __future__ import annotations

import argparse
from pathlib import Path

from covdc.cli import main as cli_main


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--q", type=int, nargs="+", default=[2, 3])
    ap.add_argument("--rate", type=float, default=0.5)
    ap.add_argument("--N", type=int, nargs="+", default=[4, 6, 8, 10])
    ap.add_argument("--construction", choices=("none", "greedy", "block"), default="greedy")
    ap.add_argument("--out", default="results")
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for q in args.q:
        path = out / f"sweep_q{q}.csv"
        argv = ["sweep", "--q", str(q), "--rate", str(args.rate), "--N", *map(str, args.N),
                "--construction", args.construction, "--seed", str(args.seed), "-o", str(path)]
        rc = cli_main(argv)
        print(f"q={q}: {path} (exit {rc})")


if __name__ == "__main__":
    main()

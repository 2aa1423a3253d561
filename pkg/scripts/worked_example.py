"""Reproduce the hand-built GF(7) scheme: costs, verification and 100 random rounds."""

from __future__ import annotations

import argparse

import numpy as np

from covdc.fq_linalg import FqVector
from covdc.reference import worked_example
from covdc.scheme import GivenD, build_scheme_coded, costs, verify_scheme
from covdc.sim import run_round


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--rounds", type=int, default=100)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    s = worked_example()
    c = costs(s)
    print(f"verify: {verify_scheme(s).message()}")
    print(f"gamma={c.gamma} delta={c.delta} Delta={c.Delta} received={c.received}")
    print("server sets:", s.server_sets())

    rng = np.random.default_rng(args.seed)
    ok = sum(run_round(s, FqVector(rng.integers(0, s.q, s.L), s.q)).ok for _ in range(args.rounds))
    print(f"rounds decoded: {ok}/{args.rounds}")

    # same D, coset-leader E
    d = build_scheme_coded(s.F, s.N, GivenD(s.D), repair="off")
    cd = costs(d)
    print(f"coset-leader E with the same D: gamma={cd.gamma} delta={cd.delta}")


if __name__ == "__main__":
    main()

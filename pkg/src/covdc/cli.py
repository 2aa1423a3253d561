"""
Command line interface.

    covdc build   --worked-example | --q 2 --K 2 --N 6 --L 2 --strategy full-covering --radius 2
    covdc verify  scheme.json
    covdc costs   scheme.json
    covdc bounds  --q 2 --K 4 --N 8 --L 16 [--T 2]
    covdc sweep   --q 2 --rate 0.5 --N 8 10 12 [--construction block --block 4]

Exit status: 0 success, 1 verification failure, 2 configuration, resource or I/O error.
"""

from __future__ import annotations

import argparse
import json
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import List, Optional

from . import bounds as B
from .code import DEFAULT_MAX_TABLE
from .covering import block_diagonal_decoder
from .errors import DomainError, FieldError, InfeasibleD, ResourceLimit, ShapeError
from .fileio import dumps, load_scheme
from .fq_linalg import FieldSpec, FqMatrix
from .multishot import build_multishot_scheme
from .reference import worked_example
from .scheme import (
    FullCovering,
    GivenD,
    PartialCovering,
    bounds_check,
    build_scheme_coded,
    build_scheme_uncoded_centralized,
    build_scheme_uncoded_decentralized,
    costs,
    random_demand,
    verify_scheme,
)

DEFAULT_SEED = 0
STRATEGIES = ("full-covering", "partial-covering", "given-D", "uncoded-decentralized", "uncoded-centralized")

SWEEP_COLUMNS = [
    "q", "K", "N", "L", "T", "rate",
    "converse_gamma", "achievable_gamma", "multishot_gamma",
    "asymptotic_Delta", "asymptotic_delta",
    "uncoded_dec_gamma", "uncoded_dec_delta", "uncoded_cen_gamma", "uncoded_cen_delta",
    "achieved_gamma", "achieved_delta", "seed",
]

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2
SWEEP_MAX_L = 64  # default L per row is min(q^K, this)


@dataclass
class RunConfig:
    command: str
    input: Optional[str] = None
    output: Optional[str] = None
    q: Optional[int] = None
    K: Optional[int] = None
    N: Optional[int] = None
    L: Optional[int] = None
    T: int = 1
    strategy: str = "full-covering"
    radius: Optional[int] = None
    seed: int = DEFAULT_SEED
    max_table: int = DEFAULT_MAX_TABLE
    extra: dict = field(default_factory=dict)


class ConfigError(ValueError):
    pass


def _load_matrix(path: str, q: Optional[int]) -> FqMatrix:
    d = json.loads(Path(path).read_text())
    if "entries" in d:
        return FqMatrix(d["entries"], FieldSpec(int(d.get("q", q))))
    if "F" in d:
        return FqMatrix(d["F"], FieldSpec(int(d["q"])))
    raise ConfigError(f"{path}: expected {{'q', 'entries'}} or a scheme file")


def _emit(obj) -> None:
    print(json.dumps(obj, indent=2, sort_keys=True))


def _summary(s, cfg: RunConfig) -> dict:
    c = costs(s)
    b = bounds_check(s)
    return {"seed": cfg.seed, "verified": bool(verify_scheme(s)), "costs": c.as_dict(), "bounds": b.as_dict(),
            "q": s.q, "K": s.K, "N": s.N, "L": s.L, "T": s.T}


def cmd_build(cfg: RunConfig) -> int:
    ex = cfg.extra
    if ex.get("worked_example"):
        ref = worked_example()
        if cfg.strategy in (None, "hand-built"):
            s = ref
        else:
            cfg.q, cfg.K, cfg.L = ref.q, ref.K, ref.L
            cfg.N = cfg.N or ref.N
            ex.setdefault("F_matrix", ref.F)
            if cfg.strategy == "given-D" and ex.get("D") is None:
                ex["D_matrix"] = ref.D
            s = _build(cfg)
    else:
        s = _build(cfg)
    if cfg.output:
        Path(cfg.output).write_text(dumps(s))
    else:
        sys.stdout.write(dumps(s))
    summary = _summary(s, cfg)
    if cfg.output:
        _emit(summary)
    else:
        sys.stderr.write(json.dumps(summary, sort_keys=True) + "\n")
    return EXIT_OK


def _build(cfg: RunConfig):
    ex = cfg.extra
    F = ex.get("F_matrix")
    if F is None and ex.get("F"):
        F = _load_matrix(ex["F"], cfg.q)
    if F is None:
        if None in (cfg.q, cfg.K, cfg.L):
            raise ConfigError("give --F, --worked-example or all of --q --K --L")
        F = random_demand(cfg.q, cfg.K, cfg.L, cfg.seed)
    K = F.rows
    N = cfg.N
    if cfg.strategy == "uncoded-decentralized":
        return build_scheme_uncoded_decentralized(F, N)
    if N is None:
        raise ConfigError("--N is required")
    if cfg.strategy == "uncoded-centralized":
        return build_scheme_uncoded_centralized(F, N)
    if N * cfg.T <= K:
        raise ConfigError(f"need N T > K (N={N}, T={cfg.T}, K={K})")
    if cfg.strategy == "full-covering":
        strat = FullCovering(cfg.radius)
    elif cfg.strategy == "partial-covering":
        strat = PartialCovering(cfg.radius)
    elif cfg.strategy == "given-D":
        D = ex.get("D_matrix")
        if D is None:
            if not ex.get("D"):
                raise ConfigError("given-D needs --D")
            D = _load_matrix(ex["D"], F.q)
        strat = GivenD(D)
    else:
        raise ConfigError(f"unknown strategy {cfg.strategy}")
    return build_multishot_scheme(F, N, cfg.T, strat, seed=cfg.seed, max_table=cfg.max_table,
                                  repair=ex.get("repair", "guarded"))


def cmd_verify(cfg: RunConfig) -> int:
    s = load_scheme(cfg.input)
    v = verify_scheme(s)
    print(v.message())
    return EXIT_OK if v else EXIT_FAIL


def cmd_costs(cfg: RunConfig) -> int:
    s = load_scheme(cfg.input)
    out = {"costs": costs(s).as_dict(), "bounds": bounds_check(s).as_dict(),
           "verified": bool(verify_scheme(s)), "seed": s.provenance.get("seed")}
    _emit(out)
    return EXIT_OK


def _curve_row(q: int, K: int, N: int, L: int, T: int) -> list:
    R = K / N
    conv = B.converse_gamma(L, N, q)
    ach = B.achievable_gamma(K, N, q)
    ms = B.multishot_gamma_bound(K, N, T, q).gamma
    Dl, dl = B.asymptotic_delta(N, R, q) if 0 < R < 1 else (float("nan"), float("nan"))
    return [q, K, N, L, T, R, conv, ach, ms, Dl, dl, 1 / N, 1.0, 1.0, 1 / N]


def cmd_bounds(cfg: RunConfig) -> int:
    if None in (cfg.q, cfg.K, cfg.N):
        raise ConfigError("bounds needs --q --K --N")
    L = cfg.L if cfg.L is not None else cfg.q ** cfg.K
    rep = B.region_report(cfg.q, cfg.K, cfg.N, L)
    rows = [[p.label, p.gamma, p.delta] for p in rep.points]
    sys.stdout.write(B.to_csv(["point", "gamma", "delta"], rows))
    extra = {"converse_gamma": rep.converse_gamma, "achievable_gamma": rep.achievable_gamma,
             "asymptotic_Delta": rep.asymptotic_Delta, "capacity": rep.capacity,
             "multishot_gamma": B.multishot_gamma_bound(cfg.K, cfg.N, cfg.T, cfg.q).gamma, "T": cfg.T,
             "note": "leading-order expressions; vanishing slack terms omitted"}
    sys.stderr.write(json.dumps(extra, sort_keys=True) + "\n")
    return EXIT_OK


def _achieved(q: int, K: int, N: int, L: int, cfg: RunConfig):
    how = cfg.extra.get("construction", "none")
    if how == "none":
        return "", ""
    F = random_demand(q, K, L, cfg.seed)
    if how == "greedy":
        s = build_scheme_coded(F, N, FullCovering(), seed=cfg.seed, max_table=cfg.max_table)
    elif how == "block":
        code, _ = block_diagonal_decoder(N, K, cfg.extra.get("block", 4), q)
        s = build_scheme_coded(F, N, GivenD(code), seed=cfg.seed, max_table=cfg.max_table)
    else:
        raise ConfigError(f"unknown construction {how}")
    c = costs(s)
    return float(c.gamma), float(c.delta)


def sweep_rows(cfg: RunConfig) -> List[list]:
    q = cfg.q or 2
    rate = cfg.extra.get("rate", 0.5)
    rows = []
    for N in cfg.extra.get("Ns") or [cfg.N]:
        K = int(round(rate * N)) if cfg.K is None else cfg.K
        if not 0 < K < N:
            raise ConfigError(f"rate {rate} at N={N} gives K={K}")
        L = min(cfg.L if cfg.L is not None else SWEEP_MAX_L, q ** K)
        row = _curve_row(q, K, N, L, cfg.T)
        row += list(_achieved(q, K, N, L, cfg)) + [cfg.seed]
        rows.append(row)
    return rows


def cmd_sweep(cfg: RunConfig) -> int:
    text = B.to_csv(SWEEP_COLUMNS, sweep_rows(cfg))
    if cfg.output:
        Path(cfg.output).write_text(text)
    else:
        sys.stdout.write(text)
    return EXIT_OK


COMMANDS = {"build": cmd_build, "verify": cmd_verify, "costs": cmd_costs, "bounds": cmd_bounds, "sweep": cmd_sweep}


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="covdc", description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    sub = p.add_subparsers(dest="command", required=True)

    def params(sp, many_N=False):
        sp.add_argument("--q", type=int)
        sp.add_argument("--K", type=int)
        if many_N:
            sp.add_argument("--N", dest="Ns", type=int, nargs="+", required=True, help="values of N")
        else:
            sp.add_argument("--N", type=int)
        sp.add_argument("--L", type=int)
        sp.add_argument("--T", type=int, default=1)
        sp.add_argument("--seed", type=int, default=DEFAULT_SEED)

    b = sub.add_parser("build", help="construct a scheme and write it as JSON")
    params(b)
    b.add_argument("--worked-example", "--paper-example", dest="worked_example", action="store_true",
                   help="use the shipped GF(7) example (emitted as is unless --strategy is given)")
    b.add_argument("--strategy", choices=STRATEGIES, default=None)
    b.add_argument("--radius", type=int)
    b.add_argument("--F", help="demand matrix JSON {'q', 'entries'}")
    b.add_argument("--D", help="decoding matrix JSON for given-D")
    b.add_argument("--repair", choices=("off", "guarded", "verbatim"), default="guarded")
    b.add_argument("--max-table", type=int, default=DEFAULT_MAX_TABLE)
    b.add_argument("-o", "--output")

    for name, hlp in (("verify", "check D E = F"), ("costs", "print exact costs and bounds")):
        sp = sub.add_parser(name, help=hlp)
        sp.add_argument("input")

    bd = sub.add_parser("bounds", help="region corner points as CSV (point,gamma,delta)")
    params(bd)

    sw = sub.add_parser("sweep", help="CSV of bound curves over N; columns: " + ",".join(SWEEP_COLUMNS))
    params(sw, many_N=True)
    sw.add_argument("--rate", type=float, default=0.5, help="K/N when --K is not given")
    sw.add_argument("--construction", choices=("none", "greedy", "block"), default="none",
                    help="also build a scheme per row and report its gamma and delta")
    sw.add_argument("--block", type=int, default=4, help="block length for --construction block")
    sw.add_argument("--max-table", type=int, default=DEFAULT_MAX_TABLE)
    sw.add_argument("-o", "--output")
    return p


def config_from_args(a: argparse.Namespace) -> RunConfig:
    cfg = RunConfig(a.command)
    for k in ("input", "output", "q", "K", "N", "L", "T", "radius", "seed", "max_table"):
        if getattr(a, k, None) is not None:
            setattr(cfg, k, getattr(a, k))
    if a.command == "build":
        cfg.strategy = a.strategy if a.strategy else ("hand-built" if a.worked_example else "full-covering")
        cfg.extra = {"worked_example": a.worked_example, "F": a.F, "D": a.D, "repair": a.repair}
    if a.command == "sweep":
        cfg.extra = {"rate": a.rate, "Ns": a.Ns, "construction": a.construction, "block": a.block}
    return cfg


def main(argv: Optional[List[str]] = None) -> int:
    args = make_parser().parse_args(argv)
    cfg = config_from_args(args)
    try:
        return COMMANDS[cfg.command](cfg)
    except (ConfigError, InfeasibleD, ResourceLimit, ShapeError, DomainError, FieldError, OSError,
            json.JSONDecodeError, KeyError, ValueError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())

"""
Multi-shot schemes: each server sends T symbols per round.

A length-NT code is laid out slot-major: coordinate ``t N + n`` (0-based)
is server ``n`` in slot ``t``.  A server computes subfunction ``l`` once if
any of its slots uses it, so computation cost takes the union over slots.
"""

from __future__ import annotations

from fractions import Fraction
from typing import Optional

import numpy as np

from .bounds import (
    GammaBound,
    monotone_threshold,
    multishot_curve,
    multishot_curve_derivative,
    multishot_gamma_bound,
)
from .code import DEFAULT_MAX_TABLE
from .errors import ShapeError
from .scheme import CostReport, Scheme, Strategy, _as_F, build_scheme_coded, costs, raw_gamma

MultiShotScheme = Scheme

__all__ = [
    "GammaBound",
    "MultiShotScheme",
    "build_multishot_scheme",
    "monotone_threshold",
    "multishot_costs",
    "multishot_curve",
    "multishot_curve_derivative",
    "multishot_gamma_bound",
    "slot_view",
    "weight_gamma",
]


def multishot_costs(s: Scheme) -> CostReport:
    return costs(s)


def weight_gamma(s: Scheme) -> Fraction:
    """max_l w(E(:, l)) / N, which upper-bounds the union cost."""
    return raw_gamma(s.E, s.N)


def slot_view(s: Scheme) -> np.ndarray:
    """E as a (T, N, L) array."""
    return s.E.a.reshape(s.T, s.N, s.L)


def build_multishot_scheme(F, N: int, T: int, strategy: Optional[Strategy] = None, seed: int = 0,
                           max_table: int = DEFAULT_MAX_TABLE, repair: str = "guarded") -> Scheme:
    """Single-shot construction at block length ``N T`` read back as ``T`` slots.

    Idle-row repair is a single-shot device and only runs when ``T = 1``.
    """
    F = _as_F(F)
    if T < 1:
        raise ShapeError("T must be positive")
    if N * T <= F.rows:
        raise ShapeError(f"need N T > K, got N T={N * T}, K={F.rows}")
    s = build_scheme_coded(F, N * T, strategy, seed=seed, max_table=max_table, repair=repair if T == 1 else "off")
    if T == 1:
        return s
    prov = dict(s.provenance)
    prov["layout"] = "slot-major: coordinate t*N + n is server n in slot t (0-based)"
    return Scheme(s.F, s.D, s.E, T, prov)

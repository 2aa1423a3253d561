"""
q-ary entropy and the closed-form cost curves.

All bounds are the leading-order expressions: the vanishing slack terms of
the large-N statements are not modelled.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import asdict, dataclass
from typing import List

from .errors import DomainError

BISECT_TOL = 1e-12
BISECT_MAX_ITER = 200


def entropy_q(x: float, q: int) -> float:
    """H_q(x) = x log_q(q-1) - x log_q x - (1-x) log_q(1-x) on [0, 1 - 1/q]."""
    top = 1.0 - 1.0 / q
    if x < 0 or x > top + 1e-15:
        raise DomainError(f"x={x} outside [0, {top}]")
    if x == 0:
        return 0.0
    lq = math.log(q)
    out = x * math.log(q - 1) / lq - x * math.log(x) / lq
    if x < 1:
        out -= (1 - x) * math.log1p(-x) / lq
    return out


def entropy_q_inv(y: float, q: int, tol: float = BISECT_TOL) -> float:
    """Inverse of H_q on [0, 1 - 1/q] by bisection."""
    if y < 0 or y > 1:
        raise DomainError(f"y={y} outside [0, 1]")
    top = 1.0 - 1.0 / q
    if y == 0:
        return 0.0
    if y == 1:
        return top
    lo, hi = 0.0, top
    for _ in range(BISECT_MAX_ITER):
        mid = 0.5 * (lo + hi)
        if entropy_q(mid, q) < y:
            lo = mid
        else:
            hi = mid
        if hi - lo <= tol:
            break
    return 0.5 * (lo + hi)


def entropy_lower(x: float, q: int) -> float:
    """h(x) = -x log_q x, a lower bound on H_q over its domain."""
    if x <= 0:
        return 0.0
    return -x * math.log(x) / math.log(q)


def entropy_lower_inv(y: float, q: int, tol: float = BISECT_TOL) -> float:
    """Inverse of h on [0, 1/e], the branch where h increases."""
    peak = 1.0 / math.e
    if y < 0 or y > entropy_lower(peak, q):
        raise DomainError(f"y={y} outside the increasing range of h")
    lo, hi = 0.0, peak
    for _ in range(BISECT_MAX_ITER):
        mid = 0.5 * (lo + hi)
        if entropy_lower(mid, q) < y:
            lo = mid
        else:
            hi = mid
        if hi - lo <= tol:
            break
    return 0.5 * (lo + hi)


def converse_gamma(L: int, N: int, q: int) -> float:
    """Lower bound H_q^{-1}(log_q L / N) on the computation cost."""
    if L < 1 or N < 1:
        raise DomainError("L and N must be positive")
    y = math.log(L) / math.log(q) / N
    if y > 1 + 1e-12:
        raise DomainError(f"log_q(L)/N = {y} > 1")
    return entropy_q_inv(min(y, 1.0), q)


def achievable_gamma(K: int, N: int, q: int) -> float:
    """Covering-code achievable cost H_q^{-1}(K / N)."""
    if N < 1 or K < 0:
        raise DomainError("need N >= 1 and K >= 0")
    if K > N:
        raise DomainError(f"K/N = {K}/{N} > 1")
    return entropy_q_inv(K / N, q)


def asymptotic_delta(N: int, R: float, q: int):
    """``(Delta, delta)`` with Delta = sqrt(log_q N / (1 - R)) and delta = Delta / N."""
    if not 0 < R < 1:
        raise DomainError(f"rate R={R} must lie in (0, 1)")
    if N < 1:
        raise DomainError("N must be positive")
    Delta = math.sqrt(math.log(N) / math.log(q) / (1 - R))
    return Delta, Delta / N


# ---------------------------------------------------------------------------
# multi-shot curve
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class GammaBound:
    gamma: float
    rho: float  # per-coordinate radius of the length-NT covering code (gamma / T)


def multishot_gamma_bound(K: int, N: int, T: int, q: int) -> GammaBound:
    """Achievable T * H_q^{-1}(K / (N T))."""
    if T < 1 or N < 1 or K < 0:
        raise DomainError("need T >= 1, N >= 1, K >= 0")
    c = K / (N * T)
    if c > 1:
        raise DomainError(f"K/(NT) = {c} > 1")
    rho = entropy_q_inv(c, q)
    return GammaBound(T * rho, rho)


def multishot_curve(c: float, T: float, q: int) -> float:
    """f(T) = T * H_q^{-1}(c / T) for real T."""
    return T * entropy_q_inv(c / T, q)


def multishot_curve_derivative(c: float, T: float, q: int) -> float:
    """Closed-form df/dT of ``T H_q^{-1}(c/T)``.

    With u = f/T,  df/dT = H_q(u) / log_q(u / ((q-1)(1-u))) + u.
    """
    u = entropy_q_inv(c / T, q)
    denom = math.log(u / ((q - 1) * (1 - u))) / math.log(q)
    return entropy_q(u, q) / denom + u


def monotone_threshold(K: int, N: int, q: int) -> int:
    """ceil(K / (N H_q^{-1}(1/q))): T from which the curve is guaranteed to decrease."""
    return math.ceil(K / (N * entropy_q_inv(1.0 / q, q)))


# ---------------------------------------------------------------------------
# region report
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RegionPoint:
    label: str
    gamma: float
    delta: float


@dataclass(frozen=True)
class RegionReport:
    """Corner points of the (gamma, delta) region at one parameter point.

    1: uncoded decentralised (1/N, 1); 2: uncoded centralised (1, 1/N);
    3: coded achievable (H_q^{-1}(K/N), sqrt(log_q N / (1-K/N)) / N);
    4: converse gamma with the same delta; 5: converse gamma at delta = 1/N.
    """

    q: int
    K: int
    N: int
    L: int
    converse_gamma: float
    achievable_gamma: float
    asymptotic_Delta: float
    asymptotic_delta: float
    capacity: float
    points: tuple

    def point(self, label: str) -> RegionPoint:
        return next(p for p in self.points if p.label == label)

    def rows(self) -> List[dict]:
        return [asdict(p) for p in self.points]


def region_report(q: int, K: int, N: int, L: int) -> RegionReport:
    if L > q ** K:
        raise DomainError(f"L={L} exceeds q^K={q ** K}")
    conv = converse_gamma(L, N, q)
    ach = achievable_gamma(K, N, q)
    Delta, delta = asymptotic_delta(N, K / N, q)
    pts = (
        RegionPoint("1", 1.0 / N, 1.0),
        RegionPoint("2", 1.0, 1.0 / N),
        RegionPoint("3", ach, delta),
        RegionPoint("4", conv, delta),
        RegionPoint("5", conv, 1.0 / N),
    )
    cap = entropy_q(min(ach, 1 - 1 / q), q)
    return RegionReport(q, K, N, L, conv, ach, Delta, delta, cap, pts)


def fmt(x) -> str:
    """Deterministic 12-significant-digit rendering used in every CSV."""
    if x is None or x == "":
        return ""
    if isinstance(x, (int,)) and not isinstance(x, bool):
        return str(x)
    return f"{float(x):.12g}"


def to_csv(header: List[str], rows: List[list]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for r in rows:
        w.writerow([fmt(v) if not isinstance(v, str) else v for v in r])
    return buf.getvalue()

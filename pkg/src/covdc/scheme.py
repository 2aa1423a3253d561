"""
Single-shot schemes ``D E = F``.

``F`` (K x L) holds every user's coefficients, ``E`` (N x L) says which
server computes which subfunction and ``D`` (K x N) how each user combines
the received symbols.  With ``D`` fixed, the sparsest ``E(:, l)`` is a
minimum-weight solution of ``D e = F(:, l)``: a coset leader of the code
with parity check ``D``.  That is what :func:`build_scheme_coded` uses.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field as dc_field
from fractions import Fraction
from typing import Optional, Sequence, Tuple, Union

import numpy as np

from . import bounds as _bounds
from .code import (
    DEFAULT_MAX_TABLE,
    LinearCode,
    build_coset_leader_table,
    hamming_ball_volume,
    partial_covering_radius,
    syndrome_decode,
)
from .covering import (
    CandidatePolicy,
    TargetSet,
    auto_policy,
    build_covering_code,
    build_partial_covering_code,
)
from .errors import FieldError, InfeasibleD, ResourceLimit, ShapeError
from .fq_linalg import (
    FieldSpec,
    FqMatrix,
    all_vectors,
    digits_to_index,
    index_to_digits,
    mat_mul,
    powers,
    rank,
    weights_of,
)


# ---------------------------------------------------------------------------
# data types
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class DemandMatrix:
    F: FqMatrix

    def __post_init__(self):
        if self.F.rows < 1 or self.F.cols < 1:
            raise ShapeError("F needs K >= 1 rows and L >= 1 columns")

    @property
    def q(self) -> int:
        return self.F.q

    @property
    def K(self) -> int:
        return self.F.rows

    @property
    def L(self) -> int:
        return self.F.cols

    @property
    def L_distinct(self) -> int:
        return distinct_columns(self.F)

    @property
    def exceeds_field(self) -> bool:
        """True when L > q^K, so some columns must repeat."""
        return self.L > self.q ** self.K


def distinct_columns(F: FqMatrix) -> int:
    if F.cols == 0:
        return 0
    return int(np.unique(F.a.T, axis=0).shape[0])


def random_demand(q: int, K: int, L: int, seed: int = 0, distinct: bool = True) -> FqMatrix:
    """Seeded K x L demand matrix; columns are distinct when ``L <= q^K`` and ``distinct``."""
    rng = np.random.default_rng(seed)
    if distinct and L <= q ** K:
        idx = np.sort(rng.choice(q ** K, size=L, replace=False))
        return FqMatrix(index_to_digits(idx, K, q).T, q)
    return FqMatrix(rng.integers(0, q, size=(K, L)), q)


def _as_F(F) -> FqMatrix:
    return F.F if isinstance(F, DemandMatrix) else F


@dataclass(frozen=True, eq=False)
class Scheme:
    """A factorisation ``D E = F`` over ``T`` slots of ``N`` servers.

    ``D`` is K x (N T) and ``E`` is (N T) x L.  Coordinate ``t N + n``
    (0-based) is server ``n`` in slot ``t``.
    """

    F: FqMatrix
    D: FqMatrix
    E: FqMatrix
    T: int = 1
    provenance: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        if not (self.F.field == self.D.field == self.E.field):
            raise FieldError("F, D and E must share a field")
        if self.T < 1:
            raise ShapeError("T must be positive")
        K, L = self.F.shape
        if self.D.rows != K:
            raise ShapeError(f"D has {self.D.rows} rows, F has {K}")
        if self.E.cols != L:
            raise ShapeError(f"E has {self.E.cols} columns, F has {L}")
        if self.D.cols != self.E.rows:
            raise ShapeError(f"D is {self.D.shape}, E is {self.E.shape}")
        if self.D.cols % self.T:
            raise ShapeError(f"{self.D.cols} coordinates do not split into T={self.T} slots")

    @property
    def field(self) -> FieldSpec:
        return self.F.field

    @property
    def q(self) -> int:
        return self.F.q

    @property
    def K(self) -> int:
        return self.F.rows

    @property
    def L(self) -> int:
        return self.F.cols

    @property
    def N(self) -> int:
        return self.D.cols // self.T

    def server_sets(self) -> Tuple[tuple, ...]:
        """W_l: servers (0-based) computing subfunction l, union over slots."""
        E = self.E.a.reshape(self.T, self.N, self.L)
        active = (E != 0).any(axis=0)
        return tuple(tuple(int(n) for n in np.flatnonzero(active[:, l])) for l in range(self.L))

    def user_sets(self) -> Tuple[tuple, ...]:
        """T_{n,t}: users receiving coordinate ``t N + n``."""
        return tuple(tuple(int(k) for k in np.flatnonzero(self.D.a[:, j])) for j in range(self.D.cols))


@dataclass(frozen=True)
class CostReport:
    gamma: Fraction
    delta: Fraction
    Delta: Fraction
    received: tuple  # symbols received by each user

    def as_dict(self) -> dict:
        return {
            "gamma": str(self.gamma),
            "delta": str(self.delta),
            "Delta": str(self.Delta),
            "received": list(self.received),
        }


@dataclass(frozen=True)
class Verification:
    ok: bool
    mismatch: Optional[Tuple[int, int]] = None
    expected: Optional[int] = None
    got: Optional[int] = None

    def __bool__(self):
        return self.ok

    def message(self) -> str:
        if self.ok:
            return "OK"
        r, c = self.mismatch
        return f"mismatch at (row {r}, col {c}): D E gives {self.got}, F has {self.expected}"


# ---------------------------------------------------------------------------
# verification and costs
# ---------------------------------------------------------------------------

def verify_scheme(s: Scheme) -> Verification:
    if s.D.cols != s.E.rows or s.D.rows != s.F.rows or s.E.cols != s.F.cols:
        raise ShapeError("inconsistent scheme dimensions")
    P = mat_mul(s.D, s.E).a
    bad = np.argwhere(P != s.F.a)
    if bad.size == 0:
        return Verification(True)
    r, c = (int(v) for v in bad[0])
    return Verification(False, (r, c), int(s.F.a[r, c]), int(P[r, c]))


def costs(s: Scheme) -> CostReport:
    """Exact costs; with T > 1 a server counts once per subfunction however many slots use it."""
    N, K = s.N, s.K
    gamma_num = max((len(w) for w in s.server_sets()), default=0)
    received = tuple(int(v) for v in np.count_nonzero(s.D.a, axis=1))
    omega = sum(received)
    return CostReport(Fraction(gamma_num, N), Fraction(omega, K * N), Fraction(omega, K), received)


def raw_gamma(E: FqMatrix, N: int) -> Fraction:
    """max_l w(E(:, l)) / N, counting every (server, slot) coordinate."""
    if E.cols == 0:
        return Fraction(0)
    return Fraction(int(np.count_nonzero(E.a, axis=0).max()), N)


def active_servers(s: Scheme) -> int:
    E = s.E.a.reshape(s.T, s.N, s.L)
    return int((E != 0).any(axis=(0, 2)).sum())


# ---------------------------------------------------------------------------
# uncoded baselines
# ---------------------------------------------------------------------------

def build_scheme_uncoded_decentralized(F, N: Optional[int] = None) -> Scheme:
    """One server per subfunction: ``E = I_L``, ``D = F``."""
    F = _as_F(F)
    N = F.cols if N is None else N
    if N != F.cols:
        raise ShapeError(f"decentralised baseline needs N = L, got N={N}, L={F.cols}")
    s = Scheme(F, F, FqMatrix.identity(N, F.field), 1, {"strategy": "uncoded-decentralized"})
    _assert_ok(s)
    return s


def build_scheme_uncoded_centralized(F, N: int) -> Scheme:
    """Servers 0..K-1 compute every subfunction a user needs and talk to that user only."""
    F = _as_F(F)
    K, L = F.shape
    if N < K:
        raise ShapeError(f"centralised baseline needs N >= K, got N={N}, K={K}")
    D = np.zeros((K, N), dtype=np.int64)
    D[:, :K] = np.eye(K, dtype=np.int64)
    E = np.zeros((N, L), dtype=np.int64)
    E[:K] = F.a
    s = Scheme(F, FqMatrix(D, F.field), FqMatrix(E, F.field), 1, {"strategy": "uncoded-centralized"})
    _assert_ok(s)
    return s


def _assert_ok(s: Scheme):
    v = verify_scheme(s)
    if not v:
        raise AssertionError(f"builder produced an invalid scheme: {v.message()}")


# ---------------------------------------------------------------------------
# coded construction
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class FullCovering:
    """D is the parity check of a greedy covering code of F_q^N with redundancy K.

    ``radius=None`` takes the smallest radius the greedy reaches at that redundancy.
    """

    radius: Optional[int] = None
    candidates: Optional[CandidatePolicy] = None
    name = "full-covering"


@dataclass(frozen=True)
class PartialCovering:
    """D only has to cover the cosets that F actually demands.

    Tiny instances (at most ``exact_limit`` decoding matrices up to column
    permutation and scaling) are solved exactly; larger ones grow a target
    set from the uncovered demanded cosets and rebuild until they are covered.
    """

    radius: Optional[int] = None
    exact_limit: int = 1 << 16
    candidates: Optional[CandidatePolicy] = None
    max_rounds: int = 1000
    name = "partial-covering"


@dataclass(frozen=True, eq=False)
class GivenD:
    """Use a supplied decoding matrix (or a code whose parity check it is)."""

    D: Union[FqMatrix, LinearCode]
    name = "given-D"


Strategy = Union[FullCovering, PartialCovering, GivenD]


def x_set(F, D: FqMatrix) -> TargetSet:
    """Union over l of the cosets ``{x : D x = F(:, l)}``."""
    F = _as_F(F)
    if D.rows != F.rows:
        raise ShapeError(f"D has {D.rows} rows, F has {F.rows}")
    if rank(D) < D.rows:
        raise InfeasibleD(f"D has rank {rank(D)} < K={D.rows}")
    return TargetSet.cosets(D, F.columns())


def _decoder_code(F: FqMatrix, N: int, strategy, seed: int, max_table: int):
    """Return ``(code, info)`` where ``code.H`` is the K x N decoding matrix."""
    K, q = F.rows, F.q
    field = F.field
    if isinstance(strategy, GivenD):
        code = strategy.D if isinstance(strategy.D, LinearCode) else None
        D = code.H if code is not None else strategy.D
        if D.field != field:
            raise FieldError("D and F live over different fields")
        if D.shape != (K, N):
            raise ShapeError(f"D must be {K}x{N}, got {D.shape}")
        if rank(D) < K:
            raise InfeasibleD(f"D has rank {rank(D)} < K={K}")
        return (code or LinearCode(D)), {}

    if isinstance(strategy, FullCovering):
        cands = strategy.candidates or auto_policy(N, q, seed)
        # below the sphere-covering radius no code with redundancy K covers F_q^N
        r0 = next(r for r in range(N + 1) if hamming_ball_volume(N, r, q) >= q ** K)
        radii = [strategy.radius] if strategy.radius is not None else range(r0, N + 1)
        for r in radii:
            code, trace = build_covering_code(N, r, field, cands, max_dim=N - K, pad_to=N - K)
            if trace.complete and code.redundancy == K:
                return code, {"radius": r, "trace": trace.summary()}
        raise InfeasibleD(f"greedy covering code with radius {strategy.radius} needs redundancy above K={K}")

    if isinstance(strategy, PartialCovering):
        n_mats = _pool_size(K, N, q)
        if n_mats <= strategy.exact_limit:
            g, D = brute_force_optimal_gamma(F, N, limit=strategy.exact_limit)
            r = int(g * N)
            if strategy.radius is not None and r > strategy.radius:
                raise InfeasibleD(f"optimal radius {r} exceeds the requested {strategy.radius}")
            return LinearCode(D), {"radius": r, "mode": "exact", "optimal_gamma": str(g)}
        return _grow_partial(F, N, strategy, seed, max_table)

    raise TypeError(f"unknown strategy {strategy!r}")


def _grow_partial(F: FqMatrix, N: int, strategy: PartialCovering, seed: int, max_table: int):
    K, q, field = F.rows, F.q, F.field
    cands = strategy.candidates or auto_policy(N, q, seed)
    radii = [strategy.radius] if strategy.radius is not None else range(N + 1)
    for r in radii:
        X = np.zeros(0, dtype=np.int64)
        for rounds in range(1, strategy.max_rounds + 1):
            pts = TargetSet.explicit(np.zeros((0, N), dtype=np.int64) if X.size == 0 else index_to_digits(X, N, q), field, n=N)
            code, trace = build_partial_covering_code(N, r, pts, field, cands, max_dim=N - K, pad_to=N - K)
            if not trace.complete or code.redundancy != K:
                break
            table = build_coset_leader_table(code, max_table)
            missing = [f for f in F.columns() if table.leader_weight(f) > r]
            if not missing:
                return code, {"radius": r, "mode": "heuristic", "rounds": rounds, "target_size": int(X.size)}
            new = TargetSet.cosets(code.H, missing).indices()
            X = np.union1d(X, new)
    raise InfeasibleD(f"no decoding matrix found within radius {strategy.radius}")


def build_scheme_coded(F, N: int, strategy: Optional[Strategy] = None, seed: int = 0,
                       max_table: int = DEFAULT_MAX_TABLE, repair: str = "guarded") -> Scheme:
    """Coded scheme with ``E(:, l)`` the coset leader of ``F(:, l)`` under ``D``.

    ``repair`` selects the idle-server treatment (see :func:`repair_zero_rows`).
    """
    F = _as_F(F)
    K = F.rows
    strategy = strategy if strategy is not None else FullCovering()
    if N <= K:
        raise ShapeError(f"need N > K, got N={N}, K={K}")
    code, info = _decoder_code(F, N, strategy, seed, max_table)
    table = build_coset_leader_table(code, max_table)
    cols = [syndrome_decode(table, f) for f in F.columns()]
    E = FqMatrix.from_columns(cols, N, F.field)
    D = code.H
    prov = {"strategy": strategy.name, "seed": seed, **info,
            "gamma_raw": str(raw_gamma(E, N))}
    if repair != "off":
        D, E, fixed = repair_zero_rows(D, E, repair)
        prov["repair"] = repair
        prov["repaired_rows"] = list(fixed)
    s = Scheme(F, D, E, 1, prov)
    _assert_ok(s)
    return s


REPAIR_MODES = ("off", "guarded", "verbatim")


def repair_zero_rows(D: FqMatrix, E: FqMatrix, mode: str = "guarded"):
    """Give idle servers work without changing D E.

    An all-zero row ``n0`` of ``E`` becomes a copy of a nonzero donor row
    ``m`` with the entry at the heaviest column ``l_max`` cleared.  If
    ``E(m, l_max)`` was already zero the two rows agree and the users of
    ``m`` are split between the two servers; otherwise no combination of
    the two rows that involves the new one reproduces row ``m``, so ``n0``
    computes but sends nothing.  Columns of ``D`` at idle servers only ever
    multiplied zero rows and are cleared first.

    ``verbatim`` always takes the first nonzero row as donor.  ``guarded``
    takes the first donor that keeps the largest column weight unchanged
    and leaves the row idle if there is none.  Returns ``(D, E, repaired rows)``.
    """
    if mode not in REPAIR_MODES:
        raise ValueError(f"repair mode must be one of {REPAIR_MODES}")
    Da, Ea = D.a.copy(), E.a.copy()
    if mode == "off" or Ea.size == 0:
        return D, E, ()
    colw = np.count_nonzero(Ea, axis=0)
    lmax = int(np.argmax(colw))
    cap = int(colw[lmax])
    fixed = []
    for n0 in [n for n in range(Ea.shape[0]) if not Ea[n].any()]:
        donors = [m for m in range(Ea.shape[0]) if Ea[m].any()]
        chosen = None
        for m in donors:
            row = Ea[m].copy()
            row[lmax] = 0
            if not row.any():
                if mode == "verbatim":
                    break
                continue
            if mode == "guarded" and (colw + (row != 0)).max() > cap:
                continue
            chosen = m
            break
        if chosen is None:
            continue
        m = chosen
        row = Ea[m].copy()
        row[lmax] = 0
        Da[:, n0] = 0
        Ea[n0] = row
        colw += row != 0
        if Ea[m, lmax] == 0:
            users = np.flatnonzero(Da[:, m])
            movers = users[(len(users) + 1) // 2:]
            Da[movers, n0] = Da[movers, m]
            Da[movers, m] = 0
        fixed.append(n0)
    return FqMatrix(Da, D.field), FqMatrix(Ea, E.field), tuple(fixed)


# ---------------------------------------------------------------------------
# brute force oracle
# ---------------------------------------------------------------------------

def _column_pool(K: int, q: int) -> np.ndarray:
    """Zero plus one representative per scalar class of F_q^K (leading nonzero = 1)."""
    vecs = all_vectors(K, q)
    keep = [0]
    for i in range(1, vecs.shape[0]):
        v = vecs[i]
        if v[np.flatnonzero(v)[0]] == 1:
            keep.append(i)
    return vecs[keep]


def _pool_size(K: int, N: int, q: int) -> int:
    P = 1 + (q ** K - 1) // (q - 1)
    return math.comb(P + N - 1, N)


def brute_force_optimal_gamma(F, N: int, limit: int = 1 << 16, pool: Optional[Sequence[FqMatrix]] = None):
    """Exact ``min_D max_l min{w(e) : D e = F(:, l)} / N`` over full-rank K x N matrices.

    Column permutations and nonzero column scalings of ``D`` preserve every
    minimum weight, so only multisets of normalised columns are searched.
    Returns ``(gamma*, witness D)``; the witness is the first optimum found.
    """
    F = _as_F(F)
    K, q = F.rows, F.q
    if pool is None:
        n_mats = _pool_size(K, N, q)
        if n_mats > limit:
            raise ResourceLimit(f"{n_mats} candidate decoding matrices exceed limit {limit}")
        cols = _column_pool(K, q)
        combos = itertools.combinations_with_replacement(range(cols.shape[0]), N)
        mats = (cols[list(c)].T for c in combos)
    else:
        if len(pool) > limit:
            raise ResourceLimit(f"pool of {len(pool)} exceeds limit {limit}")
        mats = (m.a for m in pool)
    if q ** N > 1 << 20:
        raise ResourceLimit(f"q^N = {q ** N} too large for the oracle")
    X = all_vectors(N, q)
    Xf = X.astype(np.float64)
    w = weights_of(X).astype(np.int64)
    spw = powers(K, q)
    S = q ** K
    targets = np.unique(digits_to_index(F.a.T, q)) if F.cols else np.zeros(0, dtype=np.int64)
    classes = [(wt, np.flatnonzero(w == wt)) for wt in range(N + 1)]
    best, witness = None, None
    batch = max(1, (1 << 22) // (X.shape[0] * max(K, 1)))
    while True:
        chunk = list(itertools.islice(mats, batch))
        if not chunk:
            break
        Ds = np.stack(chunk)
        if Ds.shape[1:] != (K, N):
            raise ShapeError(f"pool matrix has shape {Ds.shape[1:]}")
        # syndromes of every point under every matrix, offset per matrix
        # float BLAS product is exact: entries stay below N (q-1)^2
        prod = Xf @ Ds.transpose(2, 0, 1).reshape(N, -1).astype(np.float64)
        prod = prod.astype(np.int64).reshape(X.shape[0], len(chunk), K) % q
        synd = (prod @ spw).T
        flat = synd + (np.arange(len(chunk)) * S)[:, None]
        mins = np.full(len(chunk) * S, N + 1, dtype=np.int64)
        for wt, idx in classes:
            hit = np.bincount(flat[:, idx].ravel(), minlength=mins.size) > 0
            mins[hit & (mins > N)] = wt
        mins = mins.reshape(len(chunk), S)
        full_rank = (mins <= N).all(axis=1)  # D onto F_q^K
        vals = mins[:, targets].max(axis=1) if targets.size else np.zeros(len(chunk), dtype=np.int64)
        vals = np.where(full_rank, vals, N + 2)
        i = int(np.argmin(vals))
        if vals[i] <= N and (best is None or vals[i] < best):
            best, witness = int(vals[i]), Ds[i]
            if best == 0:
                break
    if witness is None:
        raise InfeasibleD("no full-rank decoding matrix in the pool")
    return Fraction(best, N), FqMatrix(witness, F.field)


# ---------------------------------------------------------------------------
# bounds
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class BoundsReport:
    gamma: Fraction
    L: int
    L_distinct: int
    converse: Optional[float]  # leading-order; None for T > 1
    achievable: float
    ball_volume: int  # V_q(NT, gamma N) at the achieved radius
    consistent: bool  # finite-n converse L_distinct <= ball_volume

    def as_dict(self) -> dict:
        return {
            "gamma": str(self.gamma),
            "gamma_float": float(self.gamma),
            "L": self.L,
            "L_distinct": self.L_distinct,
            "converse_gamma": self.converse,
            "achievable_gamma": self.achievable,
            "ball_volume": self.ball_volume,
            "consistent": self.consistent,
        }


def bounds_check(s: Scheme) -> BoundsReport:
    """Compare achieved gamma with the converse and achievable curves."""
    c = costs(s)
    Ld = distinct_columns(s.F)
    n = s.N * s.T
    radius = int(np.count_nonzero(s.E.a, axis=0).max()) if s.L else 0
    vol = hamming_ball_volume(n, radius, s.q)
    if s.T == 1:
        conv = _bounds.converse_gamma(max(Ld, 1), s.N, s.q)
        ach = _bounds.achievable_gamma(min(s.K, s.N), s.N, s.q)
    else:
        conv = None
        ach = _bounds.multishot_gamma_bound(s.K, s.N, s.T, s.q).gamma
    return BoundsReport(c.gamma, s.L, Ld, conv, ach, vol, Ld <= vol)


def demand_radius(s: Scheme) -> int:
    """Partial covering radius of the code with parity check ``D`` over ``X_{F,D}``."""
    code = LinearCode(s.D)
    return partial_covering_radius(code, x_set(s.F, s.D))

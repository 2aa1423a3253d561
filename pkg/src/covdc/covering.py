"""
Constructive covering codes.

The greedy builder starts from the zero code and repeatedly adjoins the
vector ``x`` whose span ``<C; x>`` leaves the fewest target points farther
than ``radius`` from the code.  Distances ``d(y, C)`` are tracked for every
point of ``F_q^n`` and refreshed after each adjunction with

    d(y, <C; x>) = min_a d(y - a x, C).

Scoring every candidate against the uncovered target set ``Q`` is the hot
loop.  For ``q = 2`` the count ``#{y in Q : y + x uncovered}`` is an XOR
correlation and all ``2^n`` candidates are scored at once with a fast
Walsh-Hadamard transform; other fields use chunked direct evaluation.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass, field as dc_field
from typing import Iterable, List, Optional, Sequence, Union

import numpy as np

from .code import LinearCode, block_code, build_coset_leader_table, syndrome_indices
from .errors import FieldError, ResourceLimit, ShapeError
from .fq_linalg import (
    FieldSpec,
    FqMatrix,
    FqVector,
    all_vectors,
    digits_to_index,
    index_to_digits,
    nullspace_basis,
    powers,
    rank,
    solve_particular,
    span,
)

# Largest ambient space whose distance table the greedy keeps in memory.
MAX_POINTS = 1 << 22
_CHUNK_CELLS = 1 << 22


# ---------------------------------------------------------------------------
# target sets
# ---------------------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class TargetSet:
    """A subset of F_q^n, held explicitly or described implicitly.

    ``kind`` is ``"explicit"`` (distinct rows of ``vectors``), ``"full"``
    (all of F_q^n) or ``"cosets"`` (the union of ``{x : H x = s}`` over the
    listed syndromes).
    """

    field: FieldSpec
    n: int
    kind: str
    vectors: Optional[np.ndarray] = None
    H: Optional[FqMatrix] = None
    syndromes: tuple = ()

    @classmethod
    def explicit(cls, vectors, field, n: Optional[int] = None) -> "TargetSet":
        field = field if isinstance(field, FieldSpec) else FieldSpec(field)
        if isinstance(vectors, np.ndarray):
            arr = np.atleast_2d(vectors).astype(np.int64)
        else:
            vecs = list(vectors)
            if not vecs:
                if n is None:
                    raise ShapeError("empty explicit target set needs n")
                arr = np.zeros((0, n), dtype=np.int64)
            else:
                arr = np.stack([v.a if isinstance(v, FqVector) else np.asarray(v) for v in vecs]).astype(np.int64)
        n = arr.shape[1] if n is None else n
        if arr.shape[1] != n:
            raise ShapeError(f"vector length {arr.shape[1]} != n={n}")
        if arr.size and (arr.min() < 0 or arr.max() >= field.q):
            raise ValueError("entries out of range")
        if len({tuple(r) for r in arr.tolist()}) != arr.shape[0]:
            raise ValueError("explicit target set contains duplicates")
        arr.setflags(write=False)
        return cls(field, n, "explicit", vectors=arr)

    @classmethod
    def full(cls, n: int, field) -> "TargetSet":
        field = field if isinstance(field, FieldSpec) else FieldSpec(field)
        return cls(field, n, "full")

    @classmethod
    def cosets(cls, H: FqMatrix, syndromes: Iterable[FqVector]) -> "TargetSet":
        seen, uniq = set(), []
        for s in syndromes:
            if len(s) != H.rows:
                raise ShapeError(f"syndrome length {len(s)} != {H.rows}")
            key = tuple(s)
            if key not in seen:
                seen.add(key)
                uniq.append(s)
        return cls(H.field, H.cols, "cosets", H=H, syndromes=tuple(uniq))

    @property
    def q(self) -> int:
        return self.field.q

    def __len__(self) -> int:
        if self.kind == "explicit":
            return int(self.vectors.shape[0])
        if self.kind == "full":
            return self.q ** self.n
        feasible = sum(1 for s in self.syndromes if solve_particular(self.H, s) is not None)
        return feasible * self.q ** (self.n - rank(self.H))

    def points(self, limit: int = MAX_POINTS) -> np.ndarray:
        """Digit array of every point (order: explicit order / index order / coset by coset)."""
        if self.kind == "explicit":
            return np.asarray(self.vectors)
        if self.kind == "full":
            return all_vectors(self.n, self.q, limit)
        size = len(self)
        if size > limit:
            raise ResourceLimit(f"target set of {size} points exceeds limit {limit}")
        kernel = span(nullspace_basis(self.H), self.n, self.field, limit)
        parts = []
        for s in self.syndromes:
            x0 = solve_particular(self.H, s)
            if x0 is not None:
                parts.append((kernel + x0.a) % self.q)
        return np.concatenate(parts) if parts else np.zeros((0, self.n), dtype=np.int64)

    def indices(self, limit: int = MAX_POINTS) -> np.ndarray:
        if self.kind == "full":
            if self.q ** self.n > limit:
                raise ResourceLimit(f"q^n = {self.q ** self.n} exceeds limit {limit}")
            return np.arange(self.q ** self.n, dtype=np.int64)
        pts = self.points(limit)
        if pts.shape[0] == 0:
            return np.zeros(0, dtype=np.int64)
        return np.unique(digits_to_index(pts, self.q))

    def syndromes_under(self, code: LinearCode):
        if self.kind == "cosets" and code.H == self.H:
            return list(self.syndromes)
        return None


# ---------------------------------------------------------------------------
# candidate policies and traces
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class Exhaustive:
    """Score every vector of F_q^n (one representative per scalar class)."""


@dataclass(frozen=True)
class RandomSample:
    """Score ``m`` seeded random vectors plus the first ``m`` uncovered targets."""

    m: int = 256
    seed: int = 0


CandidatePolicy = Union[Exhaustive, RandomSample]


def auto_policy(n: int, q: int, seed: int = 0) -> CandidatePolicy:
    if q == 2 and n <= 20:
        return Exhaustive()
    if q > 2 and q ** n <= 1 << 12:
        return Exhaustive()
    return RandomSample(seed=seed)


@dataclass(frozen=True)
class GreedyStep:
    dim: int
    uncovered: int
    fraction: float
    vector: Optional[int]  # base-q index of the adjoined vector; None for the start


@dataclass
class GreedyTrace:
    """Per-iteration record of a greedy run.

    ``steps[0]`` describes the zero code; ``steps[j]`` the code after ``j``
    adjunctions.  ``fraction`` is the uncovered share of the target set.
    """

    n: int
    q: int
    radius: int
    target_size: int
    policy: CandidatePolicy
    steps: List[GreedyStep] = dc_field(default_factory=list)
    complete: bool = False
    padded: int = 0

    @property
    def seed(self) -> Optional[int]:
        return getattr(self.policy, "seed", None)

    @property
    def exhaustive(self) -> bool:
        return isinstance(self.policy, Exhaustive)

    def descent_holds(self) -> bool:
        """fraction_{j+1} <= fraction_j^2 across all greedy steps (exact in rationals)."""
        T = self.target_size
        core = self.steps[: len(self.steps) - self.padded]
        for a, b in zip(core, core[1:]):
            if b.uncovered * T > a.uncovered * a.uncovered:
                return False
        return True

    def to_csv(self) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["iteration", "uncovered", "vector"])
        for s in self.steps:
            w.writerow([s.dim, s.uncovered, "" if s.vector is None else s.vector])
        return buf.getvalue()

    def summary(self) -> dict:
        return {
            "radius": self.radius,
            "target_size": self.target_size,
            "policy": type(self.policy).__name__,
            "seed": self.seed,
            "uncovered": [s.uncovered for s in self.steps],
            "vectors": [s.vector for s in self.steps[1:]],
            "complete": self.complete,
            "padded": self.padded,
        }


@dataclass(frozen=True)
class Extension:
    """Result of one greedy step; ``vector is None`` means nothing was left to cover."""

    vector: Optional[FqVector]
    uncovered: int

    @property
    def needed(self) -> bool:
        return self.vector is not None


# ---------------------------------------------------------------------------
# greedy engine
# ---------------------------------------------------------------------------

def fwht(a: np.ndarray) -> np.ndarray:
    """Unnormalised Walsh-Hadamard transform of a length-2^n int64 array."""
    a = np.asarray(a, dtype=np.int64).copy()
    n = a.shape[0]
    h = 1
    while h < n:
        a = a.reshape(-1, 2, h)
        a = np.concatenate([a[:, 0] + a[:, 1], a[:, 0] - a[:, 1]], axis=1).reshape(-1)
        h *= 2
    return a


def xor_correlation(a: np.ndarray, b: np.ndarray) -> np.ndarray:
    """``c[x] = sum_y a[y] b[y ^ x]`` computed exactly in O(N log N)."""
    n = a.shape[0]
    return fwht(fwht(a) * fwht(b)) // n


class _Greedy:
    def __init__(self, n: int, field: FieldSpec, radius: int, target: Optional[np.ndarray],
                 policy: CandidatePolicy, max_points: int = MAX_POINTS):
        self.n, self.field, self.q, self.radius = n, field, field.q, radius
        size = self.q ** n
        if size > max_points:
            raise ResourceLimit(f"greedy needs the full space q^n = {size} > {max_points}")
        self.size = size
        self.pw = powers(n, self.q) if n else np.zeros(0, dtype=np.int64)
        self._digits = None
        self.dist = np.count_nonzero(self.digits, axis=1).astype(np.int16) if self.q > 2 else \
            _popcount(np.arange(size, dtype=np.int64), n)
        self.target = target  # sorted unique indices, or None for the full space
        self.policy = policy
        self.rng = np.random.default_rng(policy.seed) if isinstance(policy, RandomSample) else None
        self.gens: List[np.ndarray] = []
        self._sub = None

    @property
    def digits(self) -> np.ndarray:
        if self._digits is None:
            self._digits = index_to_digits(np.arange(self.size, dtype=np.int64), self.n, self.q).astype(np.int16)
        return self._digits

    def load_code(self, code: LinearCode):
        table = build_coset_leader_table(code, max_table=self.size)
        self.dist = table.weights[syndrome_indices(code, self.digits)].astype(np.int16)
        G = code.generator()
        self.gens = [G.a[i].copy() for i in range(G.rows)]

    def target_size(self) -> int:
        return self.size if self.target is None else int(self.target.shape[0])

    def uncovered_targets(self) -> np.ndarray:
        if self.target is None:
            return np.flatnonzero(self.dist > self.radius)
        return self.target[self.dist[self.target] > self.radius]

    def _shift_index(self, ys: np.ndarray, x_digits: np.ndarray, a: int) -> np.ndarray:
        """Indices of ``y - a x`` for point indices ``ys``."""
        if self.q == 2:
            return ys ^ int(digits_to_index(x_digits, 2))
        d = self.digits[ys].astype(np.int64)
        return ((d - a * x_digits) % self.q) @ self.pw

    def _halves(self):
        """Index of ``u - v`` on each half of the coordinates, as two lookup tables."""
        if self._sub is None:
            n1 = self.n // 2
            n2 = self.n - n1
            tabs = []
            for m in (n1, n2):
                d = index_to_digits(np.arange(self.q ** m, dtype=np.int64), m, self.q) if m else np.zeros((1, 0), np.int64)
                t = np.zeros((d.shape[0], d.shape[0]), dtype=np.int64)
                for i, p in enumerate(powers(m, self.q) if m else []):
                    t += ((d[:, None, i] - d[None, :, i]) % self.q) * int(p)
                tabs.append(t)
            self._sub = (tabs[0], tabs[1], self.q ** n2)
        return self._sub

    def _score_direct(self, Q: np.ndarray, cands: np.ndarray, U: np.ndarray) -> np.ndarray:
        q = self.q
        out = np.empty(cands.shape[0], dtype=np.int64)
        step = max(1, _CHUNK_CELLS // max(1, Q.shape[0]))
        if q > 2:
            sub_hi, sub_lo, base = self._halves()
            Qh, Ql = np.divmod(Q, base)
            # indices of a*c for every scalar a, split the same way
            scaled = [np.divmod((((self.digits[cands].astype(np.int64) * a) % q) @ self.pw), base) for a in range(1, q)]
        for s in range(0, cands.shape[0], step):
            c = cands[s:s + step]
            if q == 2:
                out[s:s + step] = U[Q[None, :] ^ c[:, None]].sum(axis=1)
                continue
            alive = np.ones((c.shape[0], Q.shape[0]), dtype=bool)
            for bh, bl in scaled:
                idx = sub_hi[Qh[None, :], bh[s:s + step, None]] * base + sub_lo[Ql[None, :], bl[s:s + step, None]]
                alive &= U[idx]
            out[s:s + step] = alive.sum(axis=1)
        return out

    def _candidates(self, Q: np.ndarray) -> np.ndarray:
        if isinstance(self.policy, Exhaustive):
            idx = np.arange(1, self.size, dtype=np.int64)
            if self.q > 2:
                d = self.digits[idx]
                lead = d[np.arange(d.shape[0]), np.argmax(d != 0, axis=1)]
                idx = idx[lead == 1]
            return idx
        sample = self.rng.integers(1, self.size, size=self.policy.m) if self.size > 1 else np.zeros(0, dtype=np.int64)
        return np.unique(np.concatenate([sample, Q[: self.policy.m]]))

    def best_extension(self, score_target: Optional[np.ndarray] = None):
        """Return ``(index, uncovered_after)`` of the best candidate, or ``None`` if none exist."""
        U = self.dist > self.radius
        if score_target is None:
            Q = self.uncovered_targets()
        else:
            Q = score_target[U[score_target]]
        if self.q == 2 and isinstance(self.policy, Exhaustive):
            a = np.zeros(self.size, dtype=np.int64)
            a[Q] = 1
            scores = xor_correlation(a, U.astype(np.int64))
            scores[self.dist == 0] = np.iinfo(np.int64).max  # x already in C
            scores[0] = np.iinfo(np.int64).max
            best = int(np.argmin(scores))
            if scores[best] == np.iinfo(np.int64).max:
                return None
            return best, int(scores[best])
        cands = self._candidates(Q)
        cands = cands[self.dist[cands] != 0]
        if cands.size == 0:
            return None
        scores = self._score_direct(Q, cands, U)
        i = int(np.argmin(scores))
        return int(cands[i]), int(scores[i])

    def adjoin(self, x_idx: int):
        x = index_to_digits(x_idx, self.n, self.q).astype(np.int64)
        ys = np.arange(self.size, dtype=np.int64)
        new = self.dist.copy()
        for a in range(1, self.q):
            np.minimum(new, self.dist[self._shift_index(ys, x, a)], out=new)
        self.dist = new
        self.gens.append(x)

    def code(self) -> LinearCode:
        if not self.gens:
            return LinearCode(FqMatrix.identity(self.n, self.field), FqMatrix.zeros(0, self.n, self.field))
        return LinearCode.from_generator(FqMatrix(np.stack(self.gens), self.field))


def _popcount(x: np.ndarray, n: int) -> np.ndarray:
    out = np.zeros(x.shape, dtype=np.int16)
    for b in range(n):
        out += ((x >> b) & 1).astype(np.int16)
    return out


def _target_indices(X: Optional[TargetSet], n: int, field: FieldSpec, max_points: int):
    if X is None or X.kind == "full":
        return None
    if X.n != n or X.field != field:
        raise ShapeError("target set does not live in F_q^n")
    return X.indices(max_points)


def greedy_extend(code: LinearCode, X: TargetSet, radius: int,
                  candidates: Optional[CandidatePolicy] = None, max_points: int = MAX_POINTS) -> Extension:
    """One greedy adjunction for ``code`` with respect to target set ``X``."""
    candidates = candidates or auto_policy(code.n, code.q)
    g = _Greedy(code.n, code.field, radius, _target_indices(X, code.n, code.field, max_points), candidates, max_points)
    g.load_code(code)
    if g.uncovered_targets().size == 0:
        return Extension(None, 0)
    best = g.best_extension()
    if best is None:
        raise RuntimeError("no candidate outside the code")
    return Extension(FqVector.from_index(best[0], code.n, code.field), best[1])


def _run(g: _Greedy, max_dim: Optional[int], pad_to: Optional[int], trace: GreedyTrace):
    T = g.target_size()
    unc = g.uncovered_targets().size
    trace.steps.append(GreedyStep(0, unc, unc / T if T else 0.0, None))
    while unc > 0:
        if max_dim is not None and len(g.gens) >= max_dim:
            break
        best = g.best_extension()
        if best is None:
            break
        g.adjoin(best[0])
        unc = g.uncovered_targets().size
        trace.steps.append(GreedyStep(len(g.gens), unc, unc / T if T else 0.0, best[0]))
    trace.complete = unc == 0
    if pad_to is not None and trace.complete:
        # grow to the requested dimension while improving full-space coverage
        everything = np.arange(g.size, dtype=np.int64)
        while len(g.gens) < pad_to:
            best = g.best_extension(score_target=everything)
            if best is None:
                break
            g.adjoin(best[0])
            trace.steps.append(GreedyStep(len(g.gens), g.uncovered_targets().size, 0.0, best[0]))
            trace.padded += 1


def build_covering_code(n: int, radius: int, field, candidates: Optional[CandidatePolicy] = None,
                        max_dim: Optional[int] = None, pad_to: Optional[int] = None,
                        max_points: int = MAX_POINTS):
    """Greedy linear code covering F_q^n within ``radius``.

    Returns ``(code, trace)``.  With ``max_dim`` the loop gives up once the
    dimension reaches it (``trace.complete`` is then False); ``pad_to`` keeps
    adjoining vectors after coverage until that dimension is reached.
    """
    return build_partial_covering_code(n, radius, TargetSet.full(n, field), field, candidates,
                                       max_dim=max_dim, pad_to=pad_to, max_points=max_points)


def build_partial_covering_code(n: int, radius: int, X: TargetSet, field,
                                candidates: Optional[CandidatePolicy] = None,
                                max_dim: Optional[int] = None, pad_to: Optional[int] = None,
                                max_points: int = MAX_POINTS):
    """Greedy linear code covering the points of ``X`` within ``radius``.

    ``X`` need not contain the radius ball around 0.
    """
    field = field if isinstance(field, FieldSpec) else FieldSpec(field)
    if radius < 0:
        raise ValueError("radius must be non-negative")
    candidates = candidates or auto_policy(n, field.q)
    target = _target_indices(X, n, field, max_points)
    g = _Greedy(n, field, radius, target, candidates, max_points)
    trace = GreedyTrace(n, field.q, radius, g.target_size(), candidates)
    _run(g, max_dim, pad_to, trace)
    return g.code(), trace


def block_diag_parity(blocks: Sequence[LinearCode]) -> LinearCode:
    """Code with parity check ``diag(H_1, ..., H_m)``."""
    if not blocks:
        raise ValueError("need at least one block")
    f = blocks[0].field
    for b in blocks:
        if b.field != f:
            raise FieldError(f"blocks over GF({f.q}) and GF({b.q})")
    if len(blocks) == 1:
        return blocks[0]
    return block_code(blocks)


def block_diagonal_decoder(N: int, K: int, block_n: int, field,
                           candidates: Optional[CandidatePolicy] = None):
    """Sparse ``K x N`` parity check built from ``N / block_n`` copies of one greedy block.

    The block has redundancy ``K / m`` for ``m = N / block_n`` blocks and the
    smallest radius at which the greedy reaches that redundancy.  Returns
    ``(code, block_radius)``.
    """
    field = field if isinstance(field, FieldSpec) else FieldSpec(field)
    if N % block_n:
        raise ShapeError(f"block length {block_n} does not divide N={N}")
    m = N // block_n
    if K % m:
        raise ShapeError(f"K={K} is not divisible by the block count {m}")
    r_block = K // m
    if not 0 < r_block <= block_n:
        raise ShapeError("block redundancy out of range")
    k_block = block_n - r_block
    for radius in range(block_n + 1):
        code, trace = build_covering_code(block_n, radius, field, candidates, max_dim=k_block, pad_to=k_block)
        if trace.complete and code.k == k_block:
            return block_diag_parity([code] * m), radius
    raise RuntimeError("unreachable: radius n always succeeds")

"""
Linear codes over GF(q): syndromes, exhaustive coset-leader tables, covering
radii and Hamming-ball volumes.

The coset-leader table is built by walking F_q^n in weight-major order
(weight 0, then 1, ...) and, inside a weight class, keeping the vector with
the smallest base-q index per syndrome.  The stored leader of every coset is
therefore a minimum-weight member, lexicographically smallest among those.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import combinations, islice, product
from typing import Optional, Sequence

import numpy as np

from .errors import DomainError, ResourceLimit, ShapeError
from .fq_linalg import (
    FieldSpec,
    FqMatrix,
    FqVector,
    block_diag,
    digits_to_index,
    index_to_digits,
    mat_mul,
    nullspace_basis,
    powers,
    rank,
    row_reduce,
    span,
)

DEFAULT_MAX_TABLE = 1 << 24

# Bound on the number of int64 cells materialised per enumeration chunk.
_CHUNK_CELLS = 1 << 22


@dataclass(frozen=True, eq=False)
class LinearCode:
    """Linear ``[n, k]`` code given by a parity-check matrix ``H``.

    ``H`` is kept verbatim when it has full row rank, otherwise it is replaced
    by the nonzero rows of its reduced echelon form.  ``blocks`` records the
    constituent codes when the code was assembled block-diagonally; the
    coset-leader machinery then works block by block.
    """

    H: FqMatrix
    G: Optional[FqMatrix] = None
    blocks: tuple = ()

    def __post_init__(self):
        H = self.H
        if rank(H) < H.rows:
            rr = row_reduce(H)
            H = FqMatrix(rr.R.a[: rr.rank], H.field)
            object.__setattr__(self, "H", H)
        if self.G is not None:
            G = self.G
            if G.field != H.field or G.cols != H.cols:
                raise ShapeError("generator and parity check disagree on field or length")
            if G.rows and np.any(mat_mul(G, H.T).a):
                raise ValueError("G H^T != 0")
            if rank(G) != G.rows or G.rows != self.k:
                raise ValueError(f"generator must have full rank k={self.k}")

    @classmethod
    def from_parity_check(cls, H: FqMatrix) -> "LinearCode":
        return cls(H)

    @classmethod
    def from_generator(cls, G: FqMatrix) -> "LinearCode":
        n = G.cols
        rr = row_reduce(G)
        G = FqMatrix(rr.R.a[: rr.rank], G.field) if rr.rank < G.rows else G
        hb = nullspace_basis(G)
        H = FqMatrix.from_columns(hb, n, G.field).T if hb else FqMatrix.zeros(0, n, G.field)
        return cls(H, G)

    @property
    def field(self) -> FieldSpec:
        return self.H.field

    @property
    def q(self) -> int:
        return self.H.q

    @property
    def n(self) -> int:
        return self.H.cols

    @property
    def redundancy(self) -> int:
        return self.H.rows

    @property
    def k(self) -> int:
        return self.n - self.H.rows

    def generator(self) -> FqMatrix:
        if self.G is not None:
            return self.G
        basis = nullspace_basis(self.H)
        if not basis:
            return FqMatrix.zeros(0, self.n, self.field)
        return FqMatrix(np.stack([b.a for b in basis]), self.field)

    def codewords(self, limit: int = DEFAULT_MAX_TABLE) -> np.ndarray:
        G = self.generator()
        return span([G.row(i) for i in range(G.rows)], self.n, self.field, limit)

    def __repr__(self):
        return f"LinearCode(q={self.q}, n={self.n}, k={self.k})"


def repetition_code(n: int, q: int = 2) -> LinearCode:
    return LinearCode.from_generator(FqMatrix(np.ones((1, n), dtype=np.int64), q))


def hamming_code(m: int, q: int = 2) -> LinearCode:
    """q-ary Hamming code of redundancy ``m``.

    Columns of ``H`` are the nonzero vectors of F_q^m whose first nonzero
    entry is 1, in increasing index order.  For ``q = 2`` and ``m = 3`` this
    is the usual [7, 4] code with column ``i`` the binary expansion of
    ``i + 1``.
    """
    cols = []
    for idx in range(1, q ** m):
        d = index_to_digits(idx, m, q)
        if d[np.flatnonzero(d)[0]] == 1:
            cols.append(d)
    return LinearCode(FqMatrix(np.stack(cols, axis=1), q))


def syndrome(code: LinearCode, x: FqVector) -> FqVector:
    if len(x) != code.n:
        raise ShapeError(f"vector length {len(x)} != n={code.n}")
    return FqVector((code.H.a @ x.a) % code.q, code.field)


def syndrome_indices(code: LinearCode, digits: np.ndarray) -> np.ndarray:
    """Syndrome index of every row of a digit array (vectorised)."""
    digits = np.atleast_2d(digits)
    if digits.shape[-1] != code.n:
        raise ShapeError(f"vector length {digits.shape[-1]} != n={code.n}")
    r = code.redundancy
    if r == 0:
        return np.zeros(digits.shape[0], dtype=np.int64)
    s = (digits @ code.H.a.T) % code.q
    return s @ powers(r, code.q)


# ---------------------------------------------------------------------------
# coset-leader tables
# ---------------------------------------------------------------------------

def _chunks(it, size):
    it = iter(it)
    while True:
        block = list(islice(it, size))
        if not block:
            return
        yield block


def _leader_search(H: np.ndarray, q: int):
    """Weight-major, index-minimal coset leaders for parity check ``H`` (r x n)."""
    r, n = H.shape
    nsyn = q ** r
    leaders = np.full(nsyn, -1, dtype=np.int64)
    weights = np.full(nsyn, -1, dtype=np.int64)
    leaders[0] = 0
    weights[0] = 0
    found = 1
    if nsyn == 1:
        return leaders, weights
    synpw = powers(r, q)
    vecpw = powers(n, q)
    Ht = H.T  # row j = column j of H
    sentinel = np.iinfo(np.int64).max
    for w in range(1, n + 1):
        if found == nsyn:
            break
        best = np.full(nsyn, sentinel, dtype=np.int64)
        n_vals = (q - 1) ** w
        val_chunk = max(1, min(n_vals, _CHUNK_CELLS // max(1, r * w)))
        for vals in _chunks(product(range(1, q), repeat=w), val_chunk):
            V = np.asarray(vals, dtype=np.int64)  # (m, w)
            supp_chunk = max(1, _CHUNK_CELLS // max(1, V.shape[0] * max(r, w)))
            for supps in _chunks(combinations(range(n), w), supp_chunk):
                S = np.asarray(supps, dtype=np.int64)  # (c, w)
                synd = np.zeros((S.shape[0], V.shape[0], r), dtype=np.int64)
                codes = np.zeros((S.shape[0], V.shape[0]), dtype=np.int64)
                for j in range(w):
                    synd += V[None, :, j, None] * Ht[S[:, j]][:, None, :]
                    codes += V[None, :, j] * vecpw[S[:, j]][:, None]
                sidx = ((synd % q) @ synpw).ravel()
                codes = codes.ravel()
                fresh = weights[sidx] < 0
                if fresh.any():
                    np.minimum.at(best, sidx[fresh], codes[fresh])
        new = (best != sentinel) & (weights < 0)
        leaders[new] = best[new]
        weights[new] = w
        found += int(new.sum())
    return leaders, weights


class CosetLeaderTable:
    """Complete syndrome -> minimum-weight coset leader map of a code."""

    def __init__(self, code: LinearCode, leaders: np.ndarray, weights: np.ndarray):
        self.code = code
        self._leaders = leaders
        self._weights = weights
        leaders.setflags(write=False)
        weights.setflags(write=False)

    def __len__(self):
        return self._weights.shape[0]

    def _sidx(self, s: FqVector) -> int:
        if len(s) != self.code.redundancy:
            raise ShapeError(f"syndrome length {len(s)} != n-k={self.code.redundancy}")
        return digits_to_index(s.a, self.code.q) if len(s) else 0

    def leader_index(self, s: FqVector) -> int:
        return int(self._leaders[self._sidx(s)])

    def leader(self, s: FqVector) -> FqVector:
        return FqVector.from_index(self.leader_index(s), self.code.n, self.code.field)

    def leader_weight(self, s: FqVector) -> int:
        return int(self._weights[self._sidx(s)])

    def weights_for(self, sidx: np.ndarray) -> np.ndarray:
        return self._weights[np.asarray(sidx, dtype=np.int64)]

    def leader_digits(self) -> np.ndarray:
        """All leaders as an array indexed by syndrome index."""
        return index_to_digits(self._leaders, self.code.n, self.code.q)

    @property
    def weights(self) -> np.ndarray:
        return self._weights

    @property
    def leaders(self) -> dict:
        """Syndrome (as an entry tuple) -> leader."""
        r, q = self.code.redundancy, self.code.q
        out = {}
        for s in range(len(self)):
            key = tuple(int(v) for v in index_to_digits(s, r, q)) if r else ()
            out[key] = FqVector.from_index(int(self._leaders[s]), self.code.n, self.code.field)
        return out

    def max_weight(self) -> int:
        return int(self._weights.max())


class BlockCosetLeaderTable:
    """Leader table of a block-diagonal code, kept as one table per block.

    Weights add across blocks and the lexicographic minimum of a product of
    cosets is the concatenation of the per-block minima, so decoding block
    by block gives exactly the table of the assembled code.
    """

    def __init__(self, code: LinearCode, tables: Sequence):
        self.code = code
        self.tables = list(tables)

    def __len__(self):
        return math.prod(len(t) for t in self.tables)

    def _split(self, s: FqVector):
        if len(s) != self.code.redundancy:
            raise ShapeError(f"syndrome length {len(s)} != n-k={self.code.redundancy}")
        out, r0 = [], 0
        for t in self.tables:
            r = t.code.redundancy
            out.append(FqVector(s.a[r0:r0 + r], s.field))
            r0 += r
        return out

    def leader(self, s: FqVector) -> FqVector:
        parts = [t.leader(p).a for t, p in zip(self.tables, self._split(s))]
        return FqVector(np.concatenate(parts) if parts else np.zeros(0, dtype=np.int64), self.code.field)

    def leader_weight(self, s: FqVector) -> int:
        return sum(t.leader_weight(p) for t, p in zip(self.tables, self._split(s)))

    def max_weight(self) -> int:
        return sum(t.max_weight() for t in self.tables)


def build_coset_leader_table(code: LinearCode, max_table: int = DEFAULT_MAX_TABLE):
    """Exhaustive minimum-distance syndrome decoder for ``code``."""
    if code.blocks:
        return BlockCosetLeaderTable(code, [build_coset_leader_table(b, max_table) for b in code.blocks])
    size = code.q ** code.redundancy
    if size > max_table:
        raise ResourceLimit(f"coset table needs q^(n-k) = {code.q}^{code.redundancy} = {size} entries > {max_table}")
    leaders, weights = _leader_search(code.H.a, code.q)
    return CosetLeaderTable(code, leaders, weights)


def syndrome_decode(table, s: FqVector) -> FqVector:
    return table.leader(s)


def covering_radius(code: LinearCode, max_table: int = DEFAULT_MAX_TABLE, table=None) -> int:
    """max_x d(x, C), read off as the heaviest coset leader."""
    table = table if table is not None else build_coset_leader_table(code, max_table)
    return table.max_weight()


def _points_of(X, n: int) -> np.ndarray:
    if hasattr(X, "points"):
        return X.points()
    if isinstance(X, np.ndarray):
        pts = np.atleast_2d(X)
    else:
        vecs = list(X)
        if not vecs:
            return np.zeros((0, n), dtype=np.int64)
        for v in vecs:
            if len(v) != n:
                raise ShapeError(f"vector length {len(v)} != n={n}")
        pts = np.stack([v.a for v in vecs])
    if pts.shape[-1] != n:
        raise ShapeError(f"vector length {pts.shape[-1]} != n={n}")
    return pts


def distance_to_code(code: LinearCode, x: FqVector, table=None) -> int:
    table = table if table is not None else build_coset_leader_table(code)
    return table.leader_weight(syndrome(code, x))


def partial_covering_radius(code: LinearCode, X, table=None, max_table: int = DEFAULT_MAX_TABLE) -> int:
    """max over x in X of d(x, C).

    ``X`` may be an iterable of vectors, a digit array, or any object with a
    ``points()`` method.  Objects that also expose ``syndromes_under(code)``
    (coset-form target sets) are evaluated without enumerating their points.
    """
    table = table if table is not None else build_coset_leader_table(code, max_table)
    synd = getattr(X, "syndromes_under", None)
    if synd is not None:
        ss = synd(code)
        if ss is not None:
            return max((table.leader_weight(s) for s in ss), default=0)
    pts = _points_of(X, code.n)
    if pts.shape[0] == 0:
        return 0
    if isinstance(table, CosetLeaderTable):
        return int(table.weights_for(syndrome_indices(code, pts)).max())
    return max(table.leader_weight(syndrome(code, FqVector(p, code.field))) for p in pts)


def hamming_ball_volume(n: int, r: int, q: int) -> int:
    """Exact ``sum_{i<=r} C(n, i) (q-1)^i``."""
    if r < 0 or r > n:
        raise DomainError(f"radius {r} outside [0, {n}]")
    return sum(math.comb(n, i) * (q - 1) ** i for i in range(r + 1))


def block_code(blocks: Sequence[LinearCode]) -> LinearCode:
    """Code whose parity check is the block-diagonal stack of the blocks' checks."""
    H = block_diag([b.H for b in blocks])
    flat = []
    for b in blocks:
        flat.extend(b.blocks if b.blocks else (b,))
    return LinearCode(H, blocks=tuple(flat) if len(flat) > 1 else ())

"""
Exact arithmetic and dense linear algebra over prime fields GF(q).

Matrices and vectors wrap read-only ``int64`` numpy arrays of residues in
``[0, q)``.  Every operation returns a new object; nothing is mutated after
construction.

Vectors of ``F_q^n`` are frequently addressed by an integer index, the
base-q number whose most significant digit is coordinate 0.  With that
convention integer order coincides with lexicographic order on the entry
tuples, which is what the deterministic tie-breaking rules rely on.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Optional, Sequence, Union

import numpy as np

from .errors import DivisionByZero, FieldError, ResourceLimit, ShapeError

# n * q^2 must stay below 2^63 inside matmul accumulations.
_MAX_Q = 1 << 24


def is_prime(q: int) -> bool:
    if q < 2:
        return False
    if q % 2 == 0:
        return q == 2
    f = 3
    while f * f <= q:
        if q % f == 0:
            return False
        f += 2
    return True


@dataclass(frozen=True)
class FieldSpec:
    """The prime field GF(q)."""

    q: int

    def __post_init__(self):
        if not isinstance(self.q, (int, np.integer)) or not is_prime(int(self.q)):
            raise FieldError(f"q must be a prime integer, got {self.q!r}")
        if self.q >= _MAX_Q:
            raise FieldError(f"q={self.q} too large for int64 accumulation")
        object.__setattr__(self, "q", int(self.q))

    def __int__(self):
        return self.q


def _as_field(field: Union[FieldSpec, int]) -> FieldSpec:
    return field if isinstance(field, FieldSpec) else FieldSpec(int(field))


# ---------------------------------------------------------------------------
# scalar arithmetic
# ---------------------------------------------------------------------------

def fq_add(a: int, b: int, field) -> int:
    return (a + b) % _as_field(field).q


def fq_sub(a: int, b: int, field) -> int:
    return (a - b) % _as_field(field).q


def fq_mul(a: int, b: int, field) -> int:
    return (a * b) % _as_field(field).q


def fq_neg(a: int, field) -> int:
    return (-a) % _as_field(field).q


def fq_inv(a: int, field) -> int:
    q = _as_field(field).q
    if a % q == 0:
        raise DivisionByZero(f"0 has no inverse in GF({q})")
    return pow(int(a), q - 2, q)


# ---------------------------------------------------------------------------
# array types
# ---------------------------------------------------------------------------

class _FqArray:
    __slots__ = ("field", "a")
    _ndim = 0

    def __init__(self, entries, field):
        field = _as_field(field)
        arr = np.array(entries, dtype=np.int64)
        if self._ndim == 2 and arr.ndim == 1 and arr.size == 0:
            arr = arr.reshape(0, 0)
        if arr.ndim != self._ndim:
            raise ShapeError(f"{type(self).__name__} needs {self._ndim}-D entries, got {arr.ndim}-D")
        if arr.size and (arr.min() < 0 or arr.max() >= field.q):
            raise ValueError(f"entries must lie in [0, {field.q})")
        arr.setflags(write=False)
        object.__setattr__(self, "field", field)
        object.__setattr__(self, "a", arr)

    def __setattr__(self, name, value):
        raise AttributeError(f"{type(self).__name__} is immutable")

    @property
    def q(self) -> int:
        return self.field.q

    @property
    def shape(self):
        return self.a.shape

    def tolist(self):
        return self.a.tolist()

    def __eq__(self, other):
        if not isinstance(other, type(self)):
            return NotImplemented
        return self.field == other.field and self.a.shape == other.a.shape and bool(np.array_equal(self.a, other.a))

    def __hash__(self):
        return hash((type(self).__name__, self.field.q, self.a.shape, self.a.tobytes()))

    def __repr__(self):
        return f"{type(self).__name__}(q={self.q}, {self.a.tolist()})"


class FqVector(_FqArray):
    """Vector over GF(q)."""

    __slots__ = ()
    _ndim = 1

    @classmethod
    def zeros(cls, n: int, field) -> "FqVector":
        return cls(np.zeros(n, dtype=np.int64), field)

    @classmethod
    def from_index(cls, idx: int, n: int, field) -> "FqVector":
        field = _as_field(field)
        return cls(index_to_digits(idx, n, field.q), field)

    def __len__(self):
        return self.a.shape[0]

    def __getitem__(self, i):
        return int(self.a[i])

    def __iter__(self):
        return (int(x) for x in self.a)

    def __add__(self, other: "FqVector") -> "FqVector":
        _check_same_field(self, other)
        if len(self) != len(other):
            raise ShapeError(f"length {len(self)} vs {len(other)}")
        return FqVector((self.a + other.a) % self.q, self.field)

    def __sub__(self, other: "FqVector") -> "FqVector":
        _check_same_field(self, other)
        if len(self) != len(other):
            raise ShapeError(f"length {len(self)} vs {len(other)}")
        return FqVector((self.a - other.a) % self.q, self.field)

    def scale(self, c: int) -> "FqVector":
        return FqVector((self.a * (c % self.q)) % self.q, self.field)

    @property
    def index(self) -> int:
        """Base-q index (coordinate 0 most significant)."""
        return digits_to_index(self.a, self.q)


class FqMatrix(_FqArray):
    """Dense matrix over GF(q), row-major."""

    __slots__ = ()
    _ndim = 2

    @classmethod
    def zeros(cls, rows: int, cols: int, field) -> "FqMatrix":
        return cls(np.zeros((rows, cols), dtype=np.int64), field)

    @classmethod
    def identity(cls, n: int, field) -> "FqMatrix":
        return cls(np.eye(n, dtype=np.int64), field)

    @classmethod
    def from_columns(cls, cols: Sequence[FqVector], n_rows: int, field) -> "FqMatrix":
        if not cols:
            return cls.zeros(n_rows, 0, field)
        return cls(np.stack([c.a for c in cols], axis=1), field)

    @property
    def rows(self) -> int:
        return self.a.shape[0]

    @property
    def cols(self) -> int:
        return self.a.shape[1]

    @property
    def T(self) -> "FqMatrix":
        return FqMatrix(self.a.T, self.field)

    def __getitem__(self, key):
        out = self.a[key]
        return int(out) if np.ndim(out) == 0 else out

    def row(self, i: int) -> FqVector:
        return FqVector(self.a[i], self.field)

    def column(self, j: int) -> FqVector:
        return FqVector(self.a[:, j], self.field)

    def columns(self):
        return [self.column(j) for j in range(self.cols)]

    def with_entry(self, i: int, j: int, value: int) -> "FqMatrix":
        arr = self.a.copy()
        arr[i, j] = value % self.q
        return FqMatrix(arr, self.field)

    def __matmul__(self, other):
        if isinstance(other, FqVector):
            return mat_vec(self, other)
        return mat_mul(self, other)

    def __add__(self, other: "FqMatrix") -> "FqMatrix":
        _check_same_field(self, other)
        if self.shape != other.shape:
            raise ShapeError(f"{self.shape} vs {other.shape}")
        return FqMatrix((self.a + other.a) % self.q, self.field)


def _check_same_field(x, y):
    if x.field != y.field:
        raise FieldError(f"GF({x.q}) vs GF({y.q})")


# ---------------------------------------------------------------------------
# products, weights
# ---------------------------------------------------------------------------

def mat_mul(A: FqMatrix, B: FqMatrix) -> FqMatrix:
    _check_same_field(A, B)
    if A.cols != B.rows:
        raise ShapeError(f"cannot multiply {A.shape} by {B.shape}")
    return FqMatrix((A.a @ B.a) % A.q, A.field)


def mat_vec(A: FqMatrix, x: FqVector) -> FqVector:
    _check_same_field(A, x)
    if A.cols != len(x):
        raise ShapeError(f"cannot multiply {A.shape} by vector of length {len(x)}")
    return FqVector((A.a @ x.a) % A.q, A.field)


def weight(x: Union[FqVector, FqMatrix]) -> int:
    """Number of nonzero entries."""
    return int(np.count_nonzero(x.a))


def support(x: FqVector) -> tuple:
    return tuple(int(i) for i in np.flatnonzero(x.a))


def block_diag(blocks: Sequence[FqMatrix]) -> FqMatrix:
    field = blocks[0].field
    rows = sum(b.rows for b in blocks)
    cols = sum(b.cols for b in blocks)
    out = np.zeros((rows, cols), dtype=np.int64)
    r = c = 0
    for b in blocks:
        _check_same_field(b, blocks[0])
        out[r:r + b.rows, c:c + b.cols] = b.a
        r += b.rows
        c += b.cols
    return FqMatrix(out, field)


# ---------------------------------------------------------------------------
# Gaussian elimination
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class RowReduced:
    """Reduced row echelon form ``R`` of a matrix and its pivot columns."""

    R: FqMatrix
    pivots: tuple

    @property
    def rank(self) -> int:
        return len(self.pivots)


def _rref(arr: np.ndarray, q: int):
    M = arr.copy() % q
    rows, cols = M.shape
    pivots = []
    r = 0
    for c in range(cols):
        if r == rows:
            break
        nz = np.flatnonzero(M[r:, c])
        if nz.size == 0:
            continue
        p = r + int(nz[0])
        if p != r:
            M[[r, p]] = M[[p, r]]
        M[r] = (M[r] * pow(int(M[r, c]), q - 2, q)) % q
        factors = M[:, c].copy()
        factors[r] = 0
        nzr = np.flatnonzero(factors)
        if nzr.size:
            M[nzr] = (M[nzr] - np.outer(factors[nzr], M[r])) % q
        pivots.append(c)
        r += 1
    return M, tuple(pivots)


def row_reduce(A: FqMatrix) -> RowReduced:
    """RREF with first-nonzero pivoting, scanning columns left to right."""
    M, piv = _rref(A.a, A.q)
    return RowReduced(FqMatrix(M, A.field), piv)


def rank(A: FqMatrix) -> int:
    return len(_rref(A.a, A.q)[1])


def nullspace_basis(A: FqMatrix) -> list:
    """Basis of ``{x : A x = 0}``, one vector per free column (in column order)."""
    M, piv = _rref(A.a, A.q)
    q = A.q
    n = A.cols
    free = [c for c in range(n) if c not in set(piv)]
    basis = []
    for f in free:
        v = np.zeros(n, dtype=np.int64)
        v[f] = 1
        for i, p in enumerate(piv):
            v[p] = (-M[i, f]) % q
        basis.append(FqVector(v, A.field))
    return basis


def solve_particular(A: FqMatrix, b: FqVector) -> Optional[FqVector]:
    """One solution of ``A x = b`` (free variables set to 0), or ``None`` if infeasible."""
    _check_same_field(A, b)
    if len(b) != A.rows:
        raise ShapeError(f"rhs length {len(b)} != rows {A.rows}")
    aug = np.concatenate([A.a, b.a.reshape(-1, 1)], axis=1)
    M, piv = _rref(aug, A.q)
    if piv and piv[-1] == A.cols:
        return None
    x = np.zeros(A.cols, dtype=np.int64)
    for i, p in enumerate(piv):
        x[p] = M[i, -1]
    return FqVector(x, A.field)


def count_solutions(A: FqMatrix, b: FqVector) -> int:
    if solve_particular(A, b) is None:
        return 0
    return A.q ** (A.cols - rank(A))


# ---------------------------------------------------------------------------
# vector indexing and enumeration helpers
# ---------------------------------------------------------------------------

def powers(n: int, q: int) -> np.ndarray:
    """Place values q^(n-1), ..., q, 1 for base-q indexing."""
    if n * np.log2(q) >= 63:
        raise ResourceLimit(f"q^n = {q}^{n} does not fit an int64 index")
    return q ** np.arange(n - 1, -1, -1, dtype=np.int64)


def digits_to_index(digits, q: int) -> Union[int, np.ndarray]:
    d = np.asarray(digits, dtype=np.int64)
    pw = powers(d.shape[-1], q)
    out = d @ pw
    return int(out) if np.ndim(out) == 0 else out


def index_to_digits(idx, n: int, q: int) -> np.ndarray:
    """Inverse of :func:`digits_to_index`; accepts a scalar or an array."""
    idx = np.asarray(idx, dtype=np.int64)
    pw = powers(n, q)
    return (idx[..., None] // pw) % q


def all_vectors(n: int, q: int, limit: int = 1 << 24) -> np.ndarray:
    """Every vector of F_q^n as a ``(q^n, n)`` digit array, in index order."""
    total = q ** n
    if total > limit:
        raise ResourceLimit(f"q^n = {total} exceeds enumeration limit {limit}")
    return index_to_digits(np.arange(total, dtype=np.int64), n, q)


def span(basis: Sequence[FqVector], n: int, field, limit: int = 1 << 24) -> np.ndarray:
    """All ``q^len(basis)`` linear combinations as a digit array."""
    field = _as_field(field)
    q = field.q
    k = len(basis)
    if q ** k > limit:
        raise ResourceLimit(f"span of size {q}^{k} exceeds limit {limit}")
    if k == 0:
        return np.zeros((1, n), dtype=np.int64)
    coeffs = all_vectors(k, q)
    B = np.stack([b.a for b in basis])
    return (coeffs @ B) % q


def weights_of(digits: np.ndarray) -> np.ndarray:
    return np.count_nonzero(digits, axis=-1)


def random_matrix(rows: int, cols: int, field, rng: np.random.Generator) -> FqMatrix:
    field = _as_field(field)
    return FqMatrix(rng.integers(0, field.q, size=(rows, cols)), field)


def random_full_rank(rows: int, cols: int, field, rng: np.random.Generator, tries: int = 1000) -> FqMatrix:
    for _ in range(tries):
        M = random_matrix(rows, cols, field, rng)
        if rank(M) == rows:
            return M
    raise RuntimeError("no full-rank sample found")


def as_matrix(entries: Iterable, field) -> FqMatrix:
    return FqMatrix(np.asarray(list(entries), dtype=np.int64) % _as_field(field).q, field)

"""
Round-level simulation: servers compute, transmit, users decode.

Each server only sees the subfunction outputs it computed itself.  The
transcript is ordered slot-major, then by server.
"""

from __future__ import annotations

import json
import zlib
from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Sequence, Tuple

import numpy as np

from .errors import ShapeError
from .fq_linalg import FqVector
from .scheme import CostReport, Scheme


# ---------------------------------------------------------------------------
# subfunctions
# ---------------------------------------------------------------------------

def _dataset_key(dataset) -> int:
    if isinstance(dataset, (int, np.integer)):
        return int(dataset) & 0xFFFFFFFF
    return zlib.crc32(repr(dataset).encode())


class SubfunctionSuite:
    """``L`` black-box maps from a dataset to a field element."""

    q: int

    def value(self, l: int, dataset) -> int:
        raise NotImplementedError

    def evaluate(self, datasets: Sequence) -> FqVector:
        return FqVector([self.value(l, d) for l, d in enumerate(datasets)], self.q)


@dataclass(frozen=True)
class IdentityOfSeed(SubfunctionSuite):
    """Pseudo-random output determined by ``(seed, l, dataset)``."""

    q: int
    seed: int = 0

    def value(self, l: int, dataset) -> int:
        rng = np.random.default_rng([self.seed, l, _dataset_key(dataset)])
        return int(rng.integers(self.q))


@dataclass(frozen=True)
class PolynomialEval(SubfunctionSuite):
    """sum over the dataset's entries of ``c_0 + c_1 x + c_2 x^2 + ...`` mod q."""

    q: int
    coeffs: Tuple[int, ...] = (0, 1)

    def value(self, l: int, dataset) -> int:
        xs = [dataset] if isinstance(dataset, (int, np.integer)) else list(dataset)
        total = 0
        for x in xs:
            acc = 0
            for c in reversed(self.coeffs):
                acc = (acc * int(x) + c) % self.q
            total += acc
        return total % self.q


@dataclass(frozen=True)
class Custom(SubfunctionSuite):
    q: int
    functions: Tuple[Callable, ...] = ()

    def value(self, l: int, dataset) -> int:
        return int(self.functions[l](dataset)) % self.q


# ---------------------------------------------------------------------------
# transcript
# ---------------------------------------------------------------------------

@dataclass(frozen=True)
class TranscriptEntry:
    t: int
    n: int
    z: int
    recipients: Tuple[int, ...]
    uses: Tuple[int, ...]  # subfunctions entering z_{n,t}

    def as_dict(self) -> dict:
        return {"t": self.t, "n": self.n, "z": self.z, "recipients": list(self.recipients)}


@dataclass(frozen=True)
class Transcript:
    K: int
    N: int
    T: int
    entries: Tuple[TranscriptEntry, ...]

    def to_jsonl(self) -> str:
        return "".join(json.dumps(e.as_dict(), separators=(",", ":")) + "\n" for e in self.entries)


@dataclass(frozen=True)
class RoundResult:
    f: FqVector  # demanded
    f_decoded: FqVector
    transcript: Transcript
    ok: bool
    computed: Optional[Tuple[Tuple[int, ...], ...]] = None  # per server


def _transcript(s: Scheme, z: np.ndarray) -> Transcript:
    entries = []
    D, E = s.D.a, s.E.a
    for t in range(s.T):
        for n in range(s.N):
            j = t * s.N + n
            entries.append(TranscriptEntry(
                t, n, int(z[j]),
                tuple(int(k) for k in np.flatnonzero(D[:, j])),
                tuple(int(l) for l in np.flatnonzero(E[j])),
            ))
    return Transcript(s.K, s.N, s.T, tuple(entries))


def run_round(s: Scheme, w: FqVector) -> RoundResult:
    """Transmit ``z = E w``, decode ``f' = D z`` and compare with ``f = F w``."""
    if len(w) != s.L:
        raise ShapeError(f"need {s.L} file values, got {len(w)}")
    q = s.q
    wa = w.a
    z = (s.E.a @ wa) % q
    f_dec = (s.D.a @ z) % q
    f = (s.F.a @ wa) % q
    return RoundResult(FqVector(f, q), FqVector(f_dec, q), _transcript(s, z), bool(np.array_equal(f, f_dec)))


def computed_sets(s: Scheme) -> Tuple[Tuple[int, ...], ...]:
    """Subfunctions each server must compute: union over its slots of its E-row supports."""
    E = s.E.a.reshape(s.T, s.N, s.L)
    active = (E != 0).any(axis=0)
    return tuple(tuple(int(l) for l in np.flatnonzero(active[n])) for n in range(s.N))


def run_with_subfunctions(s: Scheme, suite: SubfunctionSuite, datasets: Sequence) -> RoundResult:
    """Servers evaluate only their assigned subfunctions, then the round runs as usual.

    Raises if a server's transmissions would need a value it did not compute.
    """
    if len(datasets) != s.L:
        raise ShapeError(f"need {s.L} datasets, got {len(datasets)}")
    q = s.q
    comp = computed_sets(s)
    z = np.zeros(s.N * s.T, dtype=np.int64)
    for n, mine in enumerate(comp):
        local = {l: suite.value(l, datasets[l]) for l in mine}
        for t in range(s.T):
            row = s.E.a[t * s.N + n]
            needed = set(np.flatnonzero(row).tolist())
            if not needed <= set(local):
                raise AssertionError(f"server {n} lacks subfunctions {sorted(needed - set(local))}")
            z[t * s.N + n] = sum(int(row[l]) * local[l] for l in needed) % q
    w = suite.evaluate(datasets)
    f = (s.F.a @ w.a) % q
    f_dec = (s.D.a @ z) % q
    return RoundResult(FqVector(f, q), FqVector(f_dec, q), _transcript(s, z),
                       bool(np.array_equal(f, f_dec)), comp)


def audit_costs(tr: Transcript) -> CostReport:
    """Costs recomputed from who-sent-what-to-whom alone."""
    received = [0] * tr.K
    holders = {}
    for e in tr.entries:
        for k in e.recipients:
            received[k] += 1
        for l in e.uses:
            holders.setdefault(l, set()).add(e.n)
    omega = sum(received)
    g = max((len(v) for v in holders.values()), default=0)
    return CostReport(Fraction(g, tr.N), Fraction(omega, tr.K * tr.N), Fraction(omega, tr.K), tuple(received))

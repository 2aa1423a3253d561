from __future__ import annotations

import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from covdc import bounds
from covdc.code import (
    LinearCode,
    build_coset_leader_table,
    covering_radius,
    hamming_ball_volume,
    hamming_code,
    partial_covering_radius,
    repetition_code,
    syndrome,
    syndrome_decode,
)
from covdc.covering import TargetSet
from covdc.errors import DomainError, ResourceLimit, ShapeError
from covdc.fq_linalg import FqMatrix, FqVector, random_matrix
from covdc.scheme import x_set


def test_syndrome_basics(worked):
    H7 = hamming_code(3, 2)
    assert not syndrome(H7, FqVector.zeros(7, 2)).a.any()
    for i in range(7):
        e = FqVector.from_index(1 << (6 - i), 7, 2)
        assert syndrome(H7, e) == H7.H.column(i)
    code = LinearCode(worked.D)
    assert syndrome(code, worked.E.column(0)).tolist() == [2, 3, 2, 3]
    with pytest.raises(ShapeError):
        syndrome(code, FqVector.zeros(7, 7))


def test_repetition_leaders():
    t = build_coset_leader_table(repetition_code(3, 2))
    leaders = sorted(tuple(v) for v in t.leaders.values())
    assert leaders == [(0, 0, 0), (0, 0, 1), (0, 1, 0), (1, 0, 0)]


def test_hamming_is_perfect():
    code = hamming_code(3, 2)
    t = build_coset_leader_table(code)
    assert len(t) == 8
    assert max(int(oracles.weight(v)) for v in t.leaders.values()) == 1
    assert covering_radius(code) == 1
    e5 = FqVector([0, 0, 0, 0, 1, 0, 0], 2)
    assert syndrome_decode(t, syndrome(code, e5)) == e5


def test_degenerate_codes():
    full = LinearCode(FqMatrix.zeros(0, 4, 3))
    assert full.k == 4
    t = build_coset_leader_table(full)
    assert len(t) == 1 and not syndrome_decode(t, FqVector.zeros(0, 3)).a.any()
    assert covering_radius(full) == 0
    zero = LinearCode(FqMatrix.identity(3, 2))
    assert covering_radius(zero) == 3
    assert syndrome_decode(build_coset_leader_table(zero), FqVector.zeros(3, 2)) == FqVector.zeros(3, 2)


def test_rank_deficient_H_is_reduced():
    H = FqMatrix([[1, 1, 0], [1, 1, 0], [0, 1, 1]], 2)
    code = LinearCode(H)
    assert code.redundancy == 2 and code.k == 1


def test_resource_guard_names_size():
    code = LinearCode(FqMatrix.identity(10, 3))
    with pytest.raises(ResourceLimit, match="3\\^10"):
        build_coset_leader_table(code, max_table=1000)


def test_worked_example_decoding(worked):
    code = LinearCode(worked.D)
    t = build_coset_leader_table(code)
    f6 = worked.F.column(5)
    e = syndrome_decode(t, f6)
    assert syndrome(code, e) == f6
    assert oracles.weight(e) == oracles.min_solution_weight(worked.D.tolist(), f6.tolist(), 7)
    X = x_set(worked.F, worked.D)
    expect = max(oracles.min_solution_weight(worked.D.tolist(), f.tolist(), 7) for f in worked.F.columns())
    assert partial_covering_radius(code, X) == expect


def test_partial_radius_examples():
    code = repetition_code(4, 2)
    assert partial_covering_radius(code, TargetSet.explicit(code.codewords(), 2)) == 0
    zero = LinearCode(FqMatrix.identity(4, 2))
    assert partial_covering_radius(zero, TargetSet.explicit([[1, 1, 1, 1]], 2)) == 4
    assert partial_covering_radius(zero, TargetSet.explicit([], 2, n=4)) == 0
    with pytest.raises(ShapeError):
        partial_covering_radius(zero, TargetSet.explicit([[1, 1, 1]], 2))


def test_ball_volume_examples():
    assert hamming_ball_volume(9, 0, 5) == 1
    assert hamming_ball_volume(7, 1, 2) == 8
    assert hamming_ball_volume(4, 2, 3) == 33
    assert hamming_ball_volume(5, 3, 3) == oracles.ball_volume(5, 3, 3)
    with pytest.raises(DomainError):
        hamming_ball_volume(3, 4, 2)


def random_code(q, n, r, seed):
    rng = np.random.default_rng(seed)
    return LinearCode(random_matrix(r, n, q, rng))


codes = st.tuples(st.sampled_from([2, 3, 5]), st.integers(1, 6), st.integers(0, 2**32 - 1)).flatmap(
    lambda t: st.tuples(st.just(t[0]), st.just(t[1]), st.integers(0, t[1]), st.just(t[2]))
).filter(lambda t: t[0] ** t[1] <= 4096)


@settings(max_examples=60, deadline=None)
@given(codes)
def test_leaders_are_minimal_lexicographic(params):
    q, n, r, seed = params
    code = random_code(q, n, r, seed)
    t = build_coset_leader_table(code)
    ref = oracles.coset_minima(code.H.tolist(), n, q)
    assert len(t) == q ** code.redundancy == len(ref)
    for s, (w, v) in ref.items():
        s_vec = FqVector(list(s), q)
        e = syndrome_decode(t, s_vec)
        assert syndrome(code, e) == s_vec
        assert tuple(e) == v and oracles.weight(e) == w


@settings(max_examples=40, deadline=None)
@given(codes.filter(lambda t: t[0] ** t[1] <= 729))
def test_covering_radius_and_sphere_covering(params):
    q, n, r, seed = params
    code = random_code(q, n, r, seed)
    rho = covering_radius(code)
    assert rho == oracles.covering_radius(code.H.tolist(), n, q)
    assert q ** code.k * hamming_ball_volume(n, rho, q) >= q ** n


def test_ball_volume_entropy_bounds():
    for q in (2, 3, 5, 7):
        for n in range(1, 65):
            for r in range(0, n + 1):
                x = r / n
                if x > 1 - 1 / q:
                    break
                V = hamming_ball_volume(n, r, q)
                assert V == oracles.ball_volume_formula(n, r, q)
                assert math.log(V) <= n * bounds.entropy_q(x, q) * math.log(q) + 1e-9
                if q == 2:
                    assert math.log(V) >= n * bounds.entropy_q(x, 2) * math.log(2) - math.log(n + 1) - 1e-9

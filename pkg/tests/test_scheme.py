from __future__ import annotations

from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

import oracles
from covdc.code import LinearCode, partial_covering_radius
from covdc.errors import FieldError, InfeasibleD, ResourceLimit, ShapeError
from covdc.fq_linalg import FqMatrix, mat_mul, random_full_rank
from covdc.scheme import (
    DemandMatrix,
    FullCovering,
    GivenD,
    PartialCovering,
    Scheme,
    bounds_check,
    brute_force_optimal_gamma,
    build_scheme_coded,
    build_scheme_uncoded_centralized,
    build_scheme_uncoded_decentralized,
    costs,
    random_demand,
    repair_zero_rows,
    demand_radius,
    verify_scheme,
    x_set,
)


def test_worked_example_verifies_and_costs(worked):
    assert verify_scheme(worked)
    assert verify_scheme(worked).message() == "OK"
    c = costs(worked)
    assert (c.gamma, c.delta, c.Delta, c.received) == (Fraction(3, 4), Fraction(19, 32), Fraction(19, 4), (5, 4, 4, 6))


def test_perturbed_entry_is_located(worked):
    E = worked.E.a.copy()
    E[2, 3] = (E[2, 3] + 1) % 7
    bad = Scheme(worked.F, worked.D, FqMatrix(E, 7))
    v = verify_scheme(bad)
    assert not v and v.mismatch is not None
    r, c = v.mismatch
    assert c == 3 and worked.D.a[r, 2] != 0
    assert "mismatch at" in v.message()


def test_scheme_shape_checks(worked):
    with pytest.raises(ShapeError):
        Scheme(worked.F, worked.D, FqMatrix.zeros(7, 6, 7))
    with pytest.raises(FieldError):
        Scheme(worked.F, FqMatrix(worked.D.a % 5, 5), worked.E)
    with pytest.raises(ShapeError):
        Scheme(worked.F, worked.D, worked.E, T=3)


def test_demand_matrix():
    F = FqMatrix([[1, 1, 0], [0, 0, 1]], 2)
    d = DemandMatrix(F)
    assert (d.K, d.L, d.L_distinct) == (2, 3, 2)
    G = random_demand(3, 2, 9, seed=1)
    assert DemandMatrix(G).L_distinct == 9
    assert random_demand(2, 2, 5, seed=3).shape == (2, 5)
    assert random_demand(3, 2, 4, seed=1) == random_demand(3, 2, 4, seed=1)


def test_uncoded_decentralized(worked):
    s = build_scheme_uncoded_decentralized(worked.F)
    assert verify_scheme(s)
    c = costs(s)
    assert c.gamma == Fraction(1, 6) and c.delta == Fraction(21, 24)
    I = FqMatrix.identity(3, 5)
    assert costs(build_scheme_uncoded_decentralized(I)).delta == Fraction(1, 3)
    dense = FqMatrix(np.ones((3, 4), dtype=int), 5)
    assert costs(build_scheme_uncoded_decentralized(dense)).delta == 1
    with pytest.raises(ShapeError):
        build_scheme_uncoded_decentralized(worked.F, 8)


def test_uncoded_centralized(worked):
    s = build_scheme_uncoded_centralized(worked.F, 8)
    assert verify_scheme(s)
    assert s.D.a[:, :4].tolist() == np.eye(4, dtype=int).tolist() and not s.D.a[:, 4:].any()
    c = costs(s)
    assert c.delta == Fraction(1, 8) and c.gamma <= Fraction(4, 8)
    with pytest.raises(ShapeError):
        build_scheme_uncoded_centralized(worked.F, 3)


def test_given_worked_D(worked):
    s = build_scheme_coded(worked.F, 8, GivenD(worked.D), repair="off")
    assert verify_scheme(s)
    assert costs(s).gamma <= Fraction(6, 8)
    for l, f in enumerate(worked.F.columns()):
        w = int(np.count_nonzero(s.E.a[:, l]))
        assert w == oracles.min_solution_weight(worked.D.tolist(), f.tolist(), 7)
    assert int(s.provenance["gamma_raw"].split("/")[0]) <= 6
    assert demand_radius(s) == 3


def test_x_set_size(worked):
    assert len(x_set(worked.F, worked.D)) == 6 * 7 ** 4
    with pytest.raises(InfeasibleD):
        x_set(worked.F, FqMatrix.zeros(4, 8, 7))


def test_zero_demand():
    F = FqMatrix.zeros(2, 3, 3)
    s = build_scheme_coded(F, 4, FullCovering(), repair="off")
    assert not s.E.a.any() and costs(s).gamma == 0


def test_binary_identity_full_covering():
    F = FqMatrix.identity(2, 2)
    s = build_scheme_coded(F, 4, FullCovering(radius=1))
    assert verify_scheme(s)
    assert costs(s).gamma <= Fraction(1, 4) * 2
    with pytest.raises(ShapeError):
        build_scheme_coded(F, 2)


def test_rank_deficient_given_D_rejected():
    F = FqMatrix.identity(2, 3)
    with pytest.raises(InfeasibleD):
        build_scheme_coded(F, 3, GivenD(FqMatrix([[1, 1, 0], [2, 2, 0]], 3)))
    with pytest.raises(ShapeError):
        build_scheme_coded(F, 3, GivenD(FqMatrix([[1, 0], [0, 1]], 3)))


def test_brute_force_small_cases():
    g, D = brute_force_optimal_gamma(FqMatrix([[1]], 2), 3)
    assert g == Fraction(1, 3) and D.shape == (1, 3)
    g, _ = brute_force_optimal_gamma(FqMatrix.identity(2, 2), 4)
    assert g == Fraction(1, 4)
    g, _ = brute_force_optimal_gamma(FqMatrix.zeros(2, 2, 3), 3)
    assert g == 0
    with pytest.raises(ResourceLimit):
        brute_force_optimal_gamma(FqMatrix.identity(3, 7), 8, limit=10)


@pytest.mark.parametrize("q,K,N,L,seed", [(2, 1, 3, 1, 0), (2, 2, 3, 3, 1), (2, 2, 4, 2, 2), (3, 1, 3, 2, 3), (3, 2, 3, 3, 4)])
def test_brute_force_matches_all_D_search(q, K, N, L, seed):
    F = random_demand(q, K, L, seed=seed)
    g, D = brute_force_optimal_gamma(F, N)
    assert g * N == oracles.optimal_gamma_all_D(F.tolist(), N, q)
    assert max(oracles.min_solution_weight(D.tolist(), f.tolist(), q) for f in F.columns()) == g * N


def test_partial_covering_exact_mode_is_optimal():
    F = random_demand(2, 2, 3, seed=7)
    s = build_scheme_coded(F, 5, PartialCovering(), repair="off")
    g, _ = brute_force_optimal_gamma(F, 5)
    assert costs(s).gamma == g
    assert s.provenance["mode"] == "exact"


def test_partial_covering_heuristic_mode():
    F = random_demand(2, 3, 4, seed=2)
    s = build_scheme_coded(F, 8, PartialCovering(exact_limit=0), repair="off")
    assert verify_scheme(s) and s.provenance["mode"] == "heuristic"
    full = build_scheme_coded(F, 8, FullCovering(), repair="off")
    assert costs(s).gamma <= Fraction(full.provenance["gamma_raw"])


def test_bounds_check(worked):
    b = bounds_check(worked)
    assert b.consistent and b.L_distinct == 6
    assert b.converse <= b.achievable


@settings(max_examples=30, deadline=None)
@given(st.sampled_from([2, 3, 5]), st.integers(1, 3), st.integers(1, 3), st.integers(0, 2**32 - 1))
def test_coded_schemes_verify_and_match_demand_radius(q, K, extra, seed):
    N = K + extra
    if q ** N > 4096:
        return
    rng = np.random.default_rng(seed)
    L = int(rng.integers(1, min(q ** K, 6) + 1))
    F = random_demand(q, K, L, seed=seed)
    D = random_full_rank(K, N, q, rng)
    s = build_scheme_coded(F, N, GivenD(D), repair="off")
    assert verify_scheme(s)
    assert Fraction(s.provenance["gamma_raw"]) * N == demand_radius(s)
    assert demand_radius(s) == partial_covering_radius(LinearCode(D), x_set(F, D))


@settings(max_examples=30, deadline=None)
@given(st.sampled_from(["guarded", "verbatim"]), st.integers(0, 2**32 - 1))
def test_repair_preserves_product(mode, seed):
    rng = np.random.default_rng(seed)
    q, K, N = 3, 2, 6
    F = random_demand(q, K, 3, seed=seed)
    base = build_scheme_coded(F, N, GivenD(random_full_rank(K, N, q, rng)), repair="off")
    D, E, fixed = repair_zero_rows(base.D, base.E, mode)
    assert mat_mul(D, E) == F
    for n in fixed:
        assert E.a[n].any()
    if mode == "guarded":
        assert np.count_nonzero(E.a, axis=0).max() == np.count_nonzero(base.E.a, axis=0).max()


def test_repair_rejects_unknown_mode(worked):
    with pytest.raises(ValueError):
        repair_zero_rows(worked.D, worked.E, "sometimes")


def test_server_and_user_sets(worked):
    W = worked.server_sets()
    assert len(W) == 6 and all(len(w) <= 6 for w in W)
    users = worked.user_sets()
    assert sum(len(u) for u in users) == 19
    assert [sum(1 for u in users if k in u) for k in range(4)] == [5, 4, 4, 6]

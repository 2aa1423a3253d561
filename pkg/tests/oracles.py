"""Brute-force reference computations, written without the package.

Everything here enumerates F_q^n directly with itertools and plain integer
arithmetic, so it shares no code path with the implementation.
"""

from __future__ import annotations

import itertools
import math

from scipy.optimize import brentq


def vectors(n, q):
    return itertools.product(range(q), repeat=n)


def weight(v):
    return sum(1 for x in v if x)


def matvec(A, x, q):
    return tuple(sum(a * b for a, b in zip(row, x)) % q for row in A)


def matmul(A, B, q):
    cols = list(zip(*B))
    return [[sum(a * b for a, b in zip(row, c)) % q for c in cols] for row in A]


def rank(A, q):
    M = [list(r) for r in A]
    rk, cols = 0, len(M[0]) if M else 0
    for c in range(cols):
        piv = next((i for i in range(rk, len(M)) if M[i][c] % q), None)
        if piv is None:
            continue
        M[rk], M[piv] = M[piv], M[rk]
        inv = pow(M[rk][c], q - 2, q)
        M[rk] = [(x * inv) % q for x in M[rk]]
        for i in range(len(M)):
            if i != rk and M[i][c]:
                f = M[i][c]
                M[i] = [(a - f * b) % q for a, b in zip(M[i], M[rk])]
        rk += 1
    return rk


def coset_minima(H, n, q):
    """syndrome -> (min weight, lexicographically smallest min-weight vector)."""
    best = {}
    for x in vectors(n, q):
        s = matvec(H, x, q)
        key = (weight(x), x)
        if s not in best or key < best[s]:
            best[s] = key
    return best


def codewords(H, n, q):
    zero = tuple([0] * len(H))
    return [x for x in vectors(n, q) if matvec(H, x, q) == zero]


def distance_to(x, C):
    return min(sum(1 for a, b in zip(x, c) if a != b) for c in C)


def covering_radius(H, n, q):
    C = codewords(H, n, q)
    return max(distance_to(x, C) for x in vectors(n, q))


def partial_radius(H, n, q, X):
    C = codewords(H, n, q)
    return max((distance_to(tuple(x), C) for x in X), default=0)


def _rref(A, q):
    M = [list(r) for r in A]
    piv, rk = [], 0
    for c in range(len(M[0]) if M else 0):
        p = next((i for i in range(rk, len(M)) if M[i][c] % q), None)
        if p is None:
            continue
        M[rk], M[p] = M[p], M[rk]
        inv = pow(M[rk][c], q - 2, q)
        M[rk] = [(x * inv) % q for x in M[rk]]
        for i in range(len(M)):
            if i != rk and M[i][c]:
                f = M[i][c]
                M[i] = [(a - f * b) % q for a, b in zip(M[i], M[rk])]
        piv.append(c)
        rk += 1
    return M, piv


def coset(D, f, q):
    """Every x with D x = f: one particular solution plus the kernel span."""
    n = len(D[0])
    M, piv = _rref([list(r) + [b] for r, b in zip(D, f)], q)
    if n in piv:
        return []
    x0 = [0] * n
    for i, p in enumerate(piv):
        x0[p] = M[i][n]
    free = [c for c in range(n) if c not in piv]
    kernel = []
    for c in free:
        v = [0] * n
        v[c] = 1
        for i, p in enumerate(piv):
            v[p] = (-M[i][c]) % q
        kernel.append(v)
    out = []
    for coeffs in vectors(len(kernel), q):
        x = list(x0)
        for a, v in zip(coeffs, kernel):
            if a:
                x = [(xi + a * vi) % q for xi, vi in zip(x, v)]
        out.append(tuple(x))
    return out


def min_solution_weight(D, f, q):
    members = coset(D, f, q)
    assert all(matvec(D, x, q) == tuple(f) for x in members)
    return min((weight(x) for x in members), default=None)


def ball_volume(n, r, q):
    return sum(1 for x in vectors(n, q) if weight(x) <= r)


def ball_volume_formula(n, r, q):
    return sum(math.comb(n, i) * (q - 1) ** i for i in range(r + 1))


def Hq(x, q):
    if x == 0:
        return 0.0
    return x * math.log(q - 1, q) - x * math.log(x, q) - (1 - x) * math.log(1 - x, q)


def Hq_inv(y, q):
    top = 1 - 1 / q
    if y <= 0:
        return 0.0
    if y >= 1:
        return top
    return brentq(lambda x: Hq(x, q) - y, 1e-300, top, xtol=1e-15, rtol=1e-15, maxiter=500)


def optimal_gamma_all_D(F, N, q):
    """min over every full-rank K x N matrix of max_l min{w(e) : D e = F(:, l)}."""
    K = len(F)
    cols = list(zip(*F))
    best = None
    for entries in itertools.product(range(q), repeat=K * N):
        D = [entries[i * N:(i + 1) * N] for i in range(K)]
        if rank(D, q) < K:
            continue
        mins = {}
        for x in vectors(N, q):
            s = matvec(D, x, q)
            w = weight(x)
            if s not in mins or w < mins[s]:
                mins[s] = w
        val = max((mins[c] for c in cols), default=0)
        if best is None or val < best:
            best = val
    return best

"""Exact unitary Weingarten function and finite-dimension moment formulas.

All arithmetic is exact (``int`` / ``fractions.Fraction``).  The Gram matrix
``[N^{#(s^-1 t)}]`` is collapsed onto conjugacy classes before it is inverted,
so p=7 needs a 15x15 solve instead of a 5040x5040 one.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Mapping

import numpy as np

from . import kernels
from .errors import ComplexityRefusal, DimensionError, NonInvertibleGram
from .symgroup import (
    Permutation,
    all_permutations,
    cycle_count,
    gamma,
    integer_partitions,
    length,
    mobius,
    permutation_array,
)

MAX_P = 7
#: Orders up to this use the direct double loop; above it the bucketed kernel.
DIRECT_MAX_P = 5

MODELS = ("cgamma", "c", "ccgamma", "mgamma")


@dataclass(frozen=True)
class WeingartenTable:
    """Exact values of ``Wg(N, .)`` on S_p, keyed by cycle type."""

    p: int
    N: int
    values: Mapping[tuple[int, ...], Fraction] = field(repr=False)

    def __call__(self, sigma: Permutation) -> Fraction:
        if sigma.p != self.p:
            raise DimensionError(f"permutation in S_{sigma.p}, table for S_{self.p}")
        return self.values[sigma.cycle_type()]


def _representative(shape: tuple[int, ...]) -> Permutation:
    cycles, start = [], 1
    for r in shape:
        cycles.append(tuple(range(start, start + r)))
        start += r
    return Permutation.from_cycles(sum(shape), cycles)


@lru_cache(maxsize=None)
def _class_gram_exponents(p: int):
    """``E[l][m]`` = multiset of ``#(t^-1 pi_l)`` for ``t`` in class ``m``."""
    shapes = list(integer_partitions(p))
    index = {s: i for i, s in enumerate(shapes)}
    reps = [_representative(s) for s in shapes]
    counts = np.zeros((len(shapes), len(shapes), p + 1), dtype=np.int64)
    for tau in all_permutations(p):
        m = index[tau.cycle_type()]
        ti = tau.inverse()
        for li, pi in enumerate(reps):
            counts[li, m, cycle_count(ti * pi)] += 1
    return shapes, counts


def bareiss_solve(A: list[list[int]], b: list[int]) -> list[Fraction]:
    """Solve ``A x = b`` over the rationals with fraction-free elimination.

    Raises
    ------
    NonInvertibleGram
        If ``A`` is singular.
    """
    n = len(A)
    M = [list(map(int, row)) + [int(bi)] for row, bi in zip(A, b)]
    prev = 1
    for k in range(n):
        piv = next((r for r in range(k, n) if M[r][k] != 0), None)
        if piv is None:
            raise NonInvertibleGram("singular Gram matrix")
        if piv != k:
            M[k], M[piv] = M[piv], M[k]
        for i in range(k + 1, n):
            for j in range(k + 1, n + 1):
                M[i][j] = (M[i][j] * M[k][k] - M[i][k] * M[k][j]) // prev
            M[i][k] = 0
        prev = M[k][k]
    x = [Fraction(0)] * n
    for i in range(n - 1, -1, -1):
        s = Fraction(M[i][n]) - sum(M[i][j] * x[j] for j in range(i + 1, n))
        x[i] = s / M[i][i]
    return x


@lru_cache(maxsize=256)
def weingarten_table(p: int, N: int) -> WeingartenTable:
    """Exact Weingarten table ``Wg(N, .)`` on S_p.

    Raises
    ------
    ComplexityRefusal
        For ``p > 7``.
    NonInvertibleGram
        For ``N < p``.
    """
    p, N = int(p), int(N)
    if p < 1:
        raise DimensionError("p must be >= 1")
    if p > MAX_P:
        raise ComplexityRefusal(f"exact Weingarten tables are limited to p <= {MAX_P}")
    if N < p:
        raise NonInvertibleGram(f"Gram matrix is singular for N={N} < p={p}")
    shapes, counts = _class_gram_exponents(p)
    powers = [N ** e for e in range(p + 1)]
    A = [[sum(int(c) * powers[e] for e, c in enumerate(counts[l, m])) for m in range(len(shapes))]
         for l in range(len(shapes))]
    ident = shapes.index((1,) * p)
    rhs = [1 if l == ident else 0 for l in range(len(shapes))]
    w = bareiss_solve(A, rhs)
    return WeingartenTable(p, N, dict(zip(shapes, w)))


def wg(sigma: Permutation, N: int) -> Fraction:
    """``Wg(N, sigma)``."""
    return weingarten_table(sigma.p, N)(sigma)


def convolution_defect(table: WeingartenTable) -> int:
    """Number of pairs where ``sum_t Wg(s^-1 t) N^{#(t^-1 pi)} != delta``.

    Exhaustive over S_p x S_p, so meant for small p.
    """
    perms = list(all_permutations(table.p))
    bad = 0
    for s in perms:
        si = s.inverse()
        for pi in perms:
            tot = sum(table(si * t) * Fraction(table.N) ** cycle_count(t.inverse() * pi) for t in perms)
            if tot != (1 if s == pi else 0):
                bad += 1
    return bad


# -- moment formulas ---------------------------------------------------------
#
# Each model is sum_{a,b} n^{e1(a)} k^{e2(a)} d^{e3(b)} Wg_{nk}(a^-1 b) with a
# normalisation; e1, e2, e3 are cycle counts of simple words in a, b and gamma.

def _exponent_maps(model: str, p: int) -> tuple[Callable, Callable, Callable]:
    g = gamma(p)
    gi = g.inverse()
    if model == "cgamma":
        return cycle_count, lambda a: cycle_count(gi * a), lambda b: cycle_count(g * b)
    if model == "c":
        return cycle_count, lambda a: cycle_count(gi * a), lambda b: cycle_count(gi * b)
    if model == "ccgamma":
        return lambda a: cycle_count(gi * a), cycle_count, lambda b: cycle_count(g * b)
    if model == "mgamma":
        return lambda a: cycle_count(gi * a), lambda a: cycle_count(g * a), cycle_count
    raise DimensionError(f"unknown model {model!r}; expected one of {MODELS}")


def _normalisation(model: str, n, k, d):
    if model in ("cgamma", "c"):
        return k * d
    if model == "ccgamma":
        return n * d
    return n * k


@lru_cache(maxsize=None)
def pair_histogram(model: str, p: int) -> tuple[tuple[tuple[int, ...], ...], np.ndarray]:
    """Histogram ``H[e1, e2, e3, class]`` of the model's exponent data over S_p x S_p.

    Returns the class list and the ``int64`` array of shape ``(p+1,)*3 + (nclasses,)``.
    """
    if p > MAX_P:
        raise ComplexityRefusal(f"exact moments are limited to p <= {MAX_P}")
    f1, f2, f3 = _exponent_maps(model, p)
    arr = permutation_array(p)
    inv = np.argsort(arr, axis=1).astype(np.int8)
    perms = [Permutation.from_zero_based(row) for row in arr.tolist()]
    e1 = np.array([f1(a) for a in perms], dtype=np.int8)
    e2 = np.array([f2(a) for a in perms], dtype=np.int8)
    e3 = np.array([f3(b) for b in perms], dtype=np.int8)
    shapes = tuple(integer_partitions(p))
    base = p + 1
    lookup = np.full(base ** p, -1, dtype=np.int16)
    for ci, s in enumerate(shapes):
        key = sum(base ** (r - 1) for r in s)
        lookup[key] = ci
    H = kernels.pair_histogram(np.ascontiguousarray(arr), np.ascontiguousarray(inv),
                               e1, e2, e3, lookup, len(shapes))
    H.setflags(write=False)
    return shapes, H


def _check_dims(n, k, d, p):
    for name, v in (("n", n), ("k", k), ("d", d), ("p", p)):
        if int(v) != v or v < 1:
            raise DimensionError(f"{name} must be a positive integer, got {v!r}")
    if d > n * k:
        raise DimensionError(f"d={d} exceeds n*k={n * k}")
    if p > MAX_P:
        raise ComplexityRefusal(f"exact moments are limited to p <= {MAX_P}")


def _moment_bucketed(model, n, k, d, p) -> Fraction:
    shapes, H = pair_histogram(model, p)
    table = weingarten_table(p, n * k)
    pn = [n ** e for e in range(p + 1)]
    pk = [k ** e for e in range(p + 1)]
    pd = [d ** e for e in range(p + 1)]
    total = Fraction(0)
    nz = np.argwhere(H)
    per_class = [0] * len(shapes)
    for a, b, c, cls in nz.tolist():
        per_class[cls] += int(H[a, b, c, cls]) * pn[a] * pk[b] * pd[c]
    for cls, s in enumerate(shapes):
        if per_class[cls]:
            total += per_class[cls] * table.values[s]
    return total / _normalisation(model, n, k, d)


def _moment_direct(model, n, k, d, p) -> Fraction:
    f1, f2, f3 = _exponent_maps(model, p)
    table = weingarten_table(p, n * k)
    perms = list(all_permutations(p))
    w3 = [d ** f3(b) for b in perms]
    total = Fraction(0)
    for a in perms:
        ai = a.inverse()
        wa = n ** f1(a) * k ** f2(a)
        acc = Fraction(0)
        for b, db in zip(perms, w3):
            acc += db * table(ai * b)
        total += wa * acc
    return total / _normalisation(model, n, k, d)


def exact_moment(model: str, n: int, k: int, d: int, p: int, method: str = "auto") -> Fraction:
    """Exact normalised expected ``p``-th trace moment of one of the four models.

    Parameters
    ----------
    model : {"cgamma", "c", "ccgamma", "mgamma"}
    n, k, d : int
        Environment, output and input dimensions (``d <= n k``).
    p : int
        Moment order, at most 7.
    method : {"auto", "direct", "bucketed"}
        ``auto`` loops directly for ``p <= 5`` and uses the pair histogram above.
    """
    _check_dims(n, k, d, p)
    if model not in MODELS:
        raise DimensionError(f"unknown model {model!r}")
    if method == "auto":
        method = "direct" if p <= DIRECT_MAX_P else "bucketed"
    if method == "direct":
        return _moment_direct(model, n, k, d, p)
    if method == "bucketed":
        return _moment_bucketed(model, n, k, d, p)
    raise ValueError(f"unknown method {method!r}")


def exact_moment_choi_gamma(n, k, d, p):
    """``E (kd)^-1 Tr (C^Gamma)^p``."""
    return exact_moment("cgamma", n, k, d, p)


def exact_moment_choi(n, k, d, p):
    """``E (kd)^-1 Tr C^p``."""
    return exact_moment("c", n, k, d, p)


def exact_moment_ccgamma(n, k, d, p):
    """``E (nd)^-1 Tr (C_{L^c}^Gamma)^p``."""
    return exact_moment("ccgamma", n, k, d, p)


def exact_moment_mgamma(n, k, d, p):
    """``E (nk)^-1 Tr (M^Gamma)^p``."""
    return exact_moment("mgamma", n, k, d, p)


def leading_order_moment(model: str, k: int, t, p: int):
    """Exact ``n -> infinity`` limit of ``exact_moment`` along ``d = t n k``.

    Keeps only the pair buckets with the top power of ``n`` and replaces
    ``Wg`` by its leading term ``N^{-(p+|s|)} Mob(s)``.  ``t`` may be a
    ``Fraction`` for an exact answer.
    """
    shapes, H = pair_histogram(model, p)
    # n-power of a bucket: e1 + e3 - p - |s|; normaliser's n-power below
    norm_pow = 2 if model == "ccgamma" else 1
    best = None
    terms = []
    for a, b, c, cls in np.argwhere(H).tolist():
        s = shapes[cls]
        ls = p - len(s)
        npow = a + c - p - ls
        terms.append((npow, a, b, c, s, ls, int(H[a, b, c, cls])))
        best = npow if best is None else max(best, npow)
    if best < norm_pow:
        return Fraction(0) if isinstance(t, Fraction) else 0.0
    if best > norm_pow:
        raise ArithmeticError(f"unexpected leading power n^{best} for {model}")
    total = 0
    for npow, a, b, c, s, ls, cnt in terms:
        if npow != best:
            continue
        mob = mobius(_representative(s))
        kp = b + c - p - ls
        total += cnt * mob * t ** c * (Fraction(k) ** kp if isinstance(t, Fraction) else float(k) ** kp)
    if model in ("cgamma", "c"):
        denom = t * k * k
    elif model == "ccgamma":
        denom = t * k
    else:
        denom = k
    return total / denom


def asymptotic_leading(sigma: Permutation, N: int) -> Fraction:
    """Leading-order ``N^{-(p+|s|)} Mob(s)`` approximation of ``Wg(N, s)``."""
    return Fraction(mobius(sigma), N ** (sigma.p + length(sigma)))

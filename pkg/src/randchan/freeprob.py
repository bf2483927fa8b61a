"""Closed-form limit laws, free cumulants and the combinatorial moment routes.

Measures are finite atom lists plus absolutely continuous pieces with
closed-form densities.  Each a.c. piece carries a Gauss-Legendre rule in the
variable ``x = a + (b - a) sin^2(theta)``, which absorbs square-root edges.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

import numpy as np
from scipy.special import roots_legendre

from .errors import DimensionError
from .symgroup import (
    catalan,
    cycle_count,
    even_cycle_count,
    gamma,
    geodesic_permutations,
    integer_partitions,
    length,
    meander_loops,
    mobius,
    noncrossing_partitions,
)

QUAD_NODES = 2048
ATOM_TOL = 1e-14
MAX_MOMENT_ORDER = 12


@lru_cache(maxsize=None)
def _gauss_theta(nodes: int):
    x, w = roots_legendre(nodes)
    # map [-1, 1] -> [0, pi/2]
    theta = (x + 1.0) * (math.pi / 4)
    return theta, w * (math.pi / 4)


@dataclass(frozen=True)
class ACPart:
    """Absolutely continuous piece with density ``f`` on ``[a, b]``."""

    a: float
    b: float
    f: Callable[[np.ndarray], np.ndarray]
    nodes: np.ndarray
    weights: np.ndarray

    @classmethod
    def build(cls, a: float, b: float, f, nodes: int = QUAD_NODES) -> "ACPart":
        theta, w = _gauss_theta(nodes)
        s = np.sin(theta)
        x = a + (b - a) * s * s
        jac = (b - a) * np.sin(2 * theta)
        with np.errstate(divide="ignore", invalid="ignore"):
            fx = np.nan_to_num(f(x), nan=0.0, posinf=0.0, neginf=0.0)
        return cls(float(a), float(b), f, x, w * jac * fx)

    @property
    def mass(self) -> float:
        return float(self.weights.sum())


class SpectralMeasure:
    """Compactly supported probability measure: atoms plus a.c. pieces.

    Parameters
    ----------
    atoms : sequence of (location, mass)
        Masses below ``ATOM_TOL`` are dropped; tiny negatives are clamped.
    parts : sequence of ``(a, b, density)``
        Density callables must accept numpy arrays.  Degenerate intervals
        are dropped.
    """

    def __init__(self, atoms=(), parts=(), label: str = ""):
        kept = []
        for loc, m in atoms:
            m = max(float(m), 0.0)
            if m > ATOM_TOL:
                kept.append((float(loc), m))
        self.atoms: tuple[tuple[float, float], ...] = tuple(sorted(kept))
        built = []
        for a, b, f in parts:
            if b - a > 1e-14 * (1.0 + abs(b)):
                built.append(ACPart.build(a, b, f))
        self.parts: tuple[ACPart, ...] = tuple(built)
        self.label = label

    # accessors
    def atom_mass(self) -> float:
        return sum(m for _, m in self.atoms)

    def ac_mass(self) -> float:
        return sum(p.mass for p in self.parts)

    def total_mass(self) -> float:
        return self.atom_mass() + self.ac_mass()

    @property
    def support(self) -> tuple[float, float]:
        pts = [x for x, _ in self.atoms] + [v for p in self.parts for v in (p.a, p.b)]
        if not pts:
            raise DimensionError("empty measure")
        return min(pts), max(pts)

    @property
    def ac_support(self) -> tuple[float, float] | None:
        if not self.parts:
            return None
        return min(p.a for p in self.parts), max(p.b for p in self.parts)

    def density(self, x) -> np.ndarray:
        x = np.asarray(x, dtype=float)
        out = np.zeros_like(x)
        for p in self.parts:
            inside = (x > p.a) & (x < p.b)
            if np.any(inside):
                with np.errstate(divide="ignore", invalid="ignore"):
                    out[inside] += np.nan_to_num(p.f(x[inside]))
        return out

    def moment(self, p: int) -> float:
        s = math.fsum(m * x ** p for x, m in self.atoms)
        for part in self.parts:
            s += float(np.dot(part.weights, part.nodes ** p))
        return s

    def moments(self, pmax: int) -> list[float]:
        return [self.moment(p) for p in range(1, pmax + 1)]

    def variance(self) -> float:
        return self.moment(2) - self.moment(1) ** 2

    def norm(self) -> float:
        return norm(self)

    def pushforward_affine(self, a: float, b: float, label: str = "") -> "SpectralMeasure":
        """Law of ``a X + b``."""
        if a == 0:
            return SpectralMeasure([(b, 1.0)], label=label)
        atoms = [(a * x + b, m) for x, m in self.atoms]
        parts = []
        for p in self.parts:
            lo, hi = sorted((a * p.a + b, a * p.b + b))
            parts.append((lo, hi, _affine_density(p.f, a, b)))
        return SpectralMeasure(atoms, parts, label=label)

    def dilate(self, c: float, label: str = "") -> "SpectralMeasure":
        """``D_c``: law of ``c X``."""
        return self.pushforward_affine(c, 0.0, label=label)

    def symmetric_sqrt(self, label: str = "") -> "SpectralMeasure":
        """Law of ``eps sqrt(X)`` with ``eps = +-1`` fair and ``X >= 0``."""
        atoms = []
        for x, m in self.atoms:
            if x < -1e-12:
                raise DimensionError("symmetric square root needs a measure on [0, inf)")
            r = math.sqrt(max(x, 0.0))
            if r == 0.0:
                atoms.append((0.0, m))
            else:
                atoms += [(-r, m / 2), (r, m / 2)]
        parts = []
        for p in self.parts:
            lo, hi = math.sqrt(max(p.a, 0.0)), math.sqrt(p.b)
            g = _sqrt_density(p.f)
            parts += [(-hi, -lo, g), (lo, hi, g)]
        return SpectralMeasure(atoms, parts, label=label)

    def __repr__(self):
        return f"SpectralMeasure({self.label!r}, atoms={self.atoms}, ac={self.ac_support})"


def _affine_density(f, a, b):
    return lambda y: f((y - b) / a) / abs(a)


def _sqrt_density(f):
    return lambda y: np.abs(y) * f(y * y)


def norm(mu: SpectralMeasure) -> float:
    """Largest absolute value in the support (positive-mass atoms and a.c. edges)."""
    pts = [abs(x) for x, _ in mu.atoms] + [abs(v) for p in mu.parts for v in (p.a, p.b)]
    if not pts:
        raise DimensionError("empty measure")
    return max(pts)


# -- closed forms ------------------------------------------------------------

def _check_unit(name, v, open_=False):
    if open_ and not 0 < v < 1:
        raise DimensionError(f"{name} must lie in (0, 1), got {v}")
    if not 0 <= v <= 1:
        raise DimensionError(f"{name} must lie in [0, 1], got {v}")


def phi_pm(s: float, t: float) -> tuple[float, float]:
    """``(phi-, phi+) = s + t - 2st -+ 2 sqrt(st(1-s)(1-t))``."""
    _check_unit("s", s)
    _check_unit("t", t)
    c = s + t - 2 * s * t
    r = 2 * math.sqrt(max(s * t * (1 - s) * (1 - t), 0.0))
    return c - r, c + r


def gamma_pm(s: float, T: float) -> tuple[float, float]:
    """Edges ``(T-2)s + 1 -+ 2 sqrt((T-1)s(1-s))`` of ``b_s^{boxplus T}``."""
    c = (T - 2) * s + 1
    r = 2 * math.sqrt(max((T - 1) * s * (1 - s), 0.0))
    return c - r, c + r


def bernoulli(s: float) -> SpectralMeasure:
    """``b_s = (1-s) delta_0 + s delta_1``."""
    _check_unit("s", s)
    return SpectralMeasure([(0.0, 1 - s), (1.0, s)], label=f"b_{s}")


def bernoulli_boxplus_power(s: float, T: float) -> SpectralMeasure:
    """Free additive power ``b_s^{boxplus T}`` for ``T >= 1``."""
    _check_unit("s", s)
    if T < 1:
        raise DimensionError(f"free additive powers need T >= 1, got {T}")
    lo, hi = gamma_pm(s, T)
    lo = max(lo, 0.0)

    def f(x):
        return T * np.sqrt(np.maximum((hi - x) * (x - lo), 0.0)) / (2 * math.pi * x * (T - x))

    atoms = [(0.0, 1 - T * s), (float(T), 1 - T * (1 - s))]
    return SpectralMeasure(atoms, [(lo, hi, f)], label=f"b_{s}^(+{T})")


def bernoulli_boxtimes(s: float, t: float) -> SpectralMeasure:
    """Free multiplicative convolution ``b_s boxtimes b_t``."""
    lo, hi = phi_pm(s, t)

    def f(x):
        return np.sqrt(np.maximum((hi - x) * (x - lo), 0.0)) / (2 * math.pi * x * (1 - x))

    atoms = [(0.0, 1 - min(s, t)), (1.0, s + t - 1)]
    return SpectralMeasure(atoms, [(lo, hi, f)], label=f"b_{s}*b_{t}")


def _check_kt(k, t):
    if int(k) != k or k < 2:
        raise DimensionError(f"k must be an integer >= 2, got {k}")
    _check_unit("t", t, open_=True)


def mu_c_gamma(k: int, t: float) -> SpectralMeasure:
    """Limit law of the partially transposed Choi matrix at fixed ``k``."""
    _check_kt(k, t)
    s = (k + 1) / (2 * k)
    return bernoulli_boxplus_power(s, 1 / t).pushforward_affine(2 * t, -1.0, label=f"CGamma(k={k},t={t})")


def mu_c(k: int, t: float) -> SpectralMeasure:
    """Limit law ``D_{kt}[b_{1/k^2}^{boxplus 1/t}]`` of the Choi matrix."""
    _check_kt(k, t)
    return bernoulli_boxplus_power(1 / k ** 2, 1 / t).dilate(k * t, label=f"C(k={k},t={t})")


def dt_bt_power(t: float) -> SpectralMeasure:
    """``D_t[b_t^{boxplus 1/t}]``, supported in ``[0, 1]``."""
    _check_unit("t", t, open_=True)
    return bernoulli_boxplus_power(t, 1 / t).dilate(t, label=f"D_t b_t^(+1/t), t={t}")


def mu_cc_gamma(t: float) -> SpectralMeasure:
    """Large-``k`` limit law of the partially transposed complementary Choi matrix."""
    return dt_bt_power(t).symmetric_sqrt(label=f"CcGamma(t={t})")


def semicircle(mean: float, sigma: float) -> SpectralMeasure:
    """``SC_{mean, sigma}`` on ``[mean - 2 sigma, mean + 2 sigma]``."""
    if sigma <= 0:
        return SpectralMeasure([(mean, 1.0)])

    def f(x):
        return np.sqrt(np.maximum(4 * sigma ** 2 - (x - mean) ** 2, 0.0)) / (2 * math.pi * sigma ** 2)

    return SpectralMeasure([], [(mean - 2 * sigma, mean + 2 * sigma, f)], label=f"SC({mean},{sigma})")


def mu_m_gamma_limit(t: float) -> SpectralMeasure:
    """Large-``k`` limit of the partially transposed range projection."""
    _check_unit("t", t, open_=True)
    return semicircle(t, math.sqrt(t * (1 - t)))


# closed-form norms, with the case splits used for the measures above

def norm_mu_c_gamma(k: int, t: float) -> float:
    _check_kt(k, t)
    s = (k + 1) / (2 * k)
    return 2 * phi_pm(s, t)[1] - 1 if t + s < 1 else 1.0


def norm_mu_c(k: int, t: float) -> float:
    _check_kt(k, t)
    return k * phi_pm(1 / k ** 2, t)[1] if t + 1 / k ** 2 < 1 else float(k)


def norm_mu_cc_gamma(t: float) -> float:
    _check_unit("t", t, open_=True)
    return 2 * math.sqrt(t * (1 - t)) if t <= 0.5 else 1.0


def norm_mu_m_gamma_limit(t: float) -> float:
    _check_unit("t", t, open_=True)
    return t + 2 * math.sqrt(t * (1 - t))


# -- free cumulants ----------------------------------------------------------

@dataclass(frozen=True)
class FreeCumulants:
    """Free cumulants ``kappa_1 .. kappa_pmax`` (floats or Fractions)."""

    values: tuple

    @property
    def p_max(self) -> int:
        return len(self.values)

    def __getitem__(self, r: int):
        """1-based access, ``kappa[r]``."""
        if r < 1:
            raise IndexError("cumulants are 1-indexed")
        return self.values[r - 1]


@lru_cache(maxsize=None)
def _nc_type_counts(p: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    """Number of NC(p) partitions per block-size multiset (Kreweras' formula)."""
    out = []
    for shape in integer_partitions(p):
        ell = len(shape)
        mult: dict[int, int] = {}
        for r in shape:
            mult[r] = mult.get(r, 0) + 1
        denom = math.factorial(p - ell + 1)
        for m in mult.values():
            denom *= math.factorial(m)
        out.append((shape, math.factorial(p) // denom))
    return tuple(out)


def _prod(vals, one=1):
    out = one
    for v in vals:
        out = out * v
    return out


def moments_from_cumulants(kappa, p: int):
    """``m_p = sum over NC(p) of prod kappa_{|block|}``."""
    vals = kappa.values if isinstance(kappa, FreeCumulants) else tuple(kappa)
    if p > MAX_MOMENT_ORDER:
        raise DimensionError(f"order {p} exceeds {MAX_MOMENT_ORDER}")
    if p > len(vals):
        raise DimensionError("not enough cumulants")
    total = 0
    for shape, cnt in _nc_type_counts(p):
        total = total + cnt * _prod(vals[r - 1] for r in shape)
    return total


def cumulants_from_moments(m: Sequence, p: int) -> FreeCumulants:
    """Invert ``moments_from_cumulants`` order by order (``m[0]`` is ``m_1``)."""
    if p > MAX_MOMENT_ORDER:
        raise DimensionError(f"order {p} exceeds {MAX_MOMENT_ORDER}")
    if p > len(m):
        raise DimensionError("not enough moments")
    kap: list = []
    for q in range(1, p + 1):
        # m_q = kappa_q + (terms with at least two blocks)
        rest = 0
        for shape, cnt in _nc_type_counts(q):
            if len(shape) > 1:
                rest = rest + cnt * _prod(kap[r - 1] for r in shape)
        kap.append(m[q - 1] - rest)
    return FreeCumulants(tuple(kap))


def bernoulli_cumulants(t, p: int) -> FreeCumulants:
    """Free cumulants of ``b_t`` (every moment equals ``t``)."""
    return cumulants_from_moments([t] * p, p)


def cumulants_affine(kappa: FreeCumulants, a, b) -> FreeCumulants:
    """Cumulants of ``a X + b``."""
    vals = [a ** r * c for r, c in enumerate(kappa.values, start=1)]
    vals[0] = vals[0] + b
    return FreeCumulants(tuple(vals))


def cumulants_boxplus_power(kappa: FreeCumulants, T) -> FreeCumulants:
    """Cumulants of ``mu^{boxplus T}``."""
    return FreeCumulants(tuple(T * c for c in kappa.values))


# -- combinatorial moment routes --------------------------------------------

@lru_cache(maxsize=None)
def _cgamma_block_weights(r: int):
    # sum over geodesic a <= gamma_r of (e(a) - #a, Mob(a^-1 gamma_r)) pairs
    g = gamma(r)
    out: dict[int, int] = {}
    for a in geodesic_permutations(r):
        e = even_cycle_count(a) - cycle_count(a)
        out[e] = out.get(e, 0) + mobius(a.inverse() * g)
    return tuple(sorted(out.items()))


def limit_moment_c_gamma(k: int, t, p: int):
    """Double geodesic sum for the ``p``-th moment of ``mu_c_gamma(k, t)``.

    ``sum_{id-b-gamma^-1} t^{|b|} sum_{id-a-b} k^{e(a)-#a} Mob(a^-1 b)``.
    The inner sum factorises over the cycles of ``b``.  Exact when ``t`` is
    a ``Fraction``.
    """
    if p < 1 or p > 10:
        raise DimensionError("limit_moment_c_gamma supports 1 <= p <= 10")
    kk = Fraction(k) if isinstance(t, Fraction) else float(k)

    def block(r):
        return sum(c * kk ** e for e, c in _cgamma_block_weights(r))

    total = 0
    for nc in noncrossing_partitions(p):
        sizes = nc.block_sizes()
        total = total + t ** (p - len(sizes)) * _prod(block(r) for r in sizes)
    return total


def limit_moment_ccgamma_fixed_k(k: int, t, q: int):
    """``n -> infinity`` moment of order ``2q`` of the normalised ``C_{L^c}^Gamma``.

    ``(tk)^-1 sum_{a1, a2 in NC(q)} k^{loops(a1, a2) - |a1| - |a2|} kappa_a1(b_t) kappa_a2(b_t)``.
    """
    if q < 1 or q > 5:
        raise DimensionError("limit_moment_ccgamma_fixed_k supports 1 <= q <= 5")
    kap = bernoulli_cumulants(t, q)
    kk = Fraction(k) if isinstance(t, Fraction) else float(k)
    geo = geodesic_permutations(q)
    kw = [_prod(kap[len(c)] for c in a.cycles()) for a in geo]
    total = 0
    for a1, w1 in zip(geo, kw):
        for a2, w2 in zip(geo, kw):
            e = meander_loops(a1, a2) - length(a1) - length(a2)
            total = total + kk ** e * w1 * w2
    return total / (t * kk)


def ccgamma_odd_moment(k: int, t, p: int) -> tuple[float, bool]:
    """Odd orders vanish in the limit; returns ``(0, True)`` flagging the symmetry shortcut."""
    if p % 2 == 0:
        raise DimensionError("use limit_moment_ccgamma_fixed_k for even orders")
    return 0.0, True


def mu_m_gamma_moments(k: int, t, p: int):
    """``p``-th moment of the fixed-``k`` limit law of ``M^Gamma``.

    ``k^-p sum_{NC(p)} prod f(|B|)`` with ``f(r) = kappa_r(b_t) k`` for odd
    ``r`` and ``kappa_r(b_t) k^2`` for even ``r``.
    """
    if p < 1 or p > MAX_MOMENT_ORDER:
        raise DimensionError(f"p must be in 1..{MAX_MOMENT_ORDER}")
    kap = bernoulli_cumulants(t, p)
    kk = Fraction(k) if isinstance(t, Fraction) else float(k)
    f = [kap[r] * (kk if r % 2 else kk * kk) for r in range(1, p + 1)]
    return moments_from_cumulants(f, p) / kk ** p


def semicircle_moment(mean, sigma, p: int):
    """Exact moments of ``SC_{mean, sigma}`` from the binomial expansion."""
    total = 0
    for j in range(0, p + 1, 2):
        total = total + math.comb(p, j) * mean ** (p - j) * sigma ** j * catalan(j // 2)
    return total

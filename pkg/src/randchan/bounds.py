"""Entropy functionals, additivity-rate and capacity bounds, PPT thresholds.

All logarithms are natural unless ``base=2`` is requested.
"""
from __future__ import annotations

import math
from dataclasses import asdict, dataclass, field
from typing import NamedTuple, Sequence

import numpy as np
from scipy.optimize import brentq

from .errors import DimensionError, NumericalFailure
from .freeprob import norm_mu_c_gamma, phi_pm

INF = math.inf


def _parse_p(p) -> float:
    if isinstance(p, str):
        if p.lower() in ("inf", "infinity", "oo"):
            return INF
        p = float(p)
    p = float(p)
    if p < 0 or math.isnan(p):
        raise DimensionError(f"Renyi parameter must be in [0, inf], got {p}")
    return p


def _log_scale(base) -> float:
    if base in ("e", None, math.e):
        return 1.0
    if base in (2, "2", "two", "bits"):
        return math.log(2)
    raise DimensionError(f"unsupported log base {base!r}")


def renyi_entropy(x: Sequence[float], p, base="e") -> float:
    """Renyi entropy ``H_p`` of a probability vector.

    ``p = 0`` gives log of the support size, ``p = 1`` Shannon, ``p = inf``
    minus log of the largest entry.
    """
    x = np.asarray(x, dtype=float)
    if x.ndim != 1 or x.size == 0 or np.any(x < 0) or abs(x.sum() - 1) > 1e-10:
        raise DimensionError("x must be a non-negative vector summing to 1")
    p = _parse_p(p)
    nz = x[x > 0]
    if p == 0:
        h = math.log(nz.size)
    elif p == 1:
        h = float(-np.sum(nz * np.log(nz)))
    elif p == INF:
        h = -math.log(float(nz.max()))
    else:
        lp = np.log(nz) * p
        m = lp.max()
        h = (m + math.log(float(np.exp(lp - m).sum()))) / (1 - p)
    return float(max(h, 0.0)) / _log_scale(base)


def _log_pnorm_p(vals: np.ndarray, mult: np.ndarray, p: float) -> float:
    """``log sum_i mult_i vals_i^p`` without underflow."""
    terms = np.log(mult) + p * np.log(vals)
    m = terms.max()
    return float(m + np.log(np.exp(terms - m).sum()))


def _renyi_weighted(vals, mults, p: float) -> float:
    """Renyi entropy of a vector given as distinct values with multiplicities."""
    vals = np.asarray(vals, dtype=float)
    mults = np.asarray(mults, dtype=float)
    keep = (vals > 0) & (mults > 0)
    vals, mults = vals[keep], mults[keep]
    if p == 0:
        h = math.log(mults.sum())
    elif p == 1:
        h = float(-np.sum(mults * vals * np.log(vals)))
    elif p == INF:
        h = -math.log(float(vals.max()))
    else:
        h = _log_pnorm_p(vals, mults, p) / (1 - p)
    return float(max(h, 0.0))


def _check_kt(k, t, open_=True):
    if int(k) != k or k < 2:
        raise DimensionError(f"k must be an integer >= 2, got {k}")
    if not 0 < t < 1:
        raise DimensionError(f"t must lie in (0, 1), got {t}")


def x_kt(k: int, t: float) -> np.ndarray:
    """Limiting minimal-entropy output ``(y, (1-y)/(k-1), ...)``.

    ``y`` is the top of the support of ``b_t boxtimes b_{1/k}``, which is the
    atom at 1 once ``t + 1/k >= 1``.
    """
    y = _top(k, t)
    return np.array([y] + [(1 - y) / (k - 1)] * (k - 1))


def _top(k, t) -> float:
    _check_kt(k, t)
    return 1.0 if t + 1 / k >= 1 else min(1.0, phi_pm(t, 1 / k)[1])


def h_pkt(p, k: int, t: float, base="e") -> float:
    """``h_{p,k,t} = H_p(x_{k,t})``."""
    y = _top(k, t)
    h = _renyi_weighted([y, (1 - y) / (k - 1)], [1, k - 1], _parse_p(p))
    return h / _log_scale(base)


def _h_gamma(p: float, k: int, t: float) -> float:
    rest = (1 - t) / k ** 2
    return _renyi_weighted([t + rest, rest], [1, k * k - 1], p)


def gamma_kt(k: int, t: float) -> np.ndarray:
    """Limiting spectrum of the Bell-state output of ``L (x) conj(L)``."""
    _check_kt(k, t)
    rest = (1 - t) / k ** 2
    return np.array([t + rest] + [rest] * (k * k - 1))


def c_p(p) -> float:
    """Exponent ``p / (2p - 2)`` needed above ``p = 2``; 1 otherwise."""
    p = _parse_p(p)
    if p <= 2:
        return 1.0
    return 0.5 if p == INF else p / (2 * p - 2)


def alpha_gamma(p, k: int, t: float) -> float:
    """Additivity-rate lower bound ``-log ||mu^{CGamma}_{k,t}|| / h_{p,k,t}``.

    Clamped to ``[0, 1]``.  A unit norm gives 0 (checked first); otherwise a
    zero entropy gives 1.  For ``p > 2`` the numerator carries ``c_p``.
    """
    p = _parse_p(p)
    nrm = norm_mu_c_gamma(k, t)
    if nrm >= 1.0:
        return 0.0
    h = h_pkt(p, k, t)
    if h <= 0.0:
        return 1.0
    val = -math.log(nrm) * c_p(p) / h
    return min(max(val, 0.0), 1.0)


def alpha1_closed_form(k: int, t: float) -> float:
    """Direct von Neumann formula for ``alpha^Gamma_{1,k,t}``."""
    _check_kt(k, t)
    if t >= (k - 1) / (2 * k):
        return 0.0
    y = phi_pm(t, 1 / k)[1]
    num = -math.log((1 - 2 * t) / k + 2 * math.sqrt((1 - 1 / k ** 2) * t * (1 - t)))
    den = -y * math.log(y) - (1 - y) * math.log((1 - y) / (k - 1))
    return min(num / den, 1.0)


class ViolationRatio(NamedTuple):
    v: float
    rate: float  # v * alpha_gamma, the bound for L (x) conj(L)


def v_pkt(p, k: int, t: float) -> ViolationRatio:
    """``v_{p,k,t} = 2 h_{p,k,t} / H_p(gamma_{k,t})`` and the product rate bound."""
    _check_kt(k, t)
    p = _parse_p(p)
    hg = _h_gamma(p, k, t)
    if hg <= 0:
        raise DimensionError("H_p(gamma_kt) vanishes")
    v = 2 * h_pkt(p, k, t) / hg
    return ViolationRatio(v, v * alpha_gamma(p, k, t))


def capacity_bounds(k: int, t: float, base="e") -> tuple[float, float]:
    """``(log k - h_{1,k,t}, log k - log ||mu^{CGamma}_{k,t}||)``."""
    _check_kt(k, t)
    lk = math.log(k)
    lower = lk - h_pkt(1, k, t)
    upper = lk - math.log(norm_mu_c_gamma(k, t))
    s = _log_scale(base)
    return lower / s, upper / s


def binary_entropy(t: float) -> float:
    return -t * math.log(t) - (1 - t) * math.log(1 - t)


def capacity_asymptotic_upper(k: int, t: float) -> float:
    """Large-``k`` form ``log k - log 2 - log(t(1-t))/2`` of the upper bound (constant ``t < 1/2``)."""
    return math.log(k) - math.log(2) - 0.5 * math.log(t * (1 - t))


def capacity_asymptotic_lower(k: int, t: float) -> float:
    """Large-``k`` form ``t log k - h(t)`` of the lower bound."""
    return t * math.log(k) - binary_entropy(t)


# -- PPT ---------------------------------------------------------------------

def t_ppt(k: int) -> float:
    """PPT threshold ``(1 - sqrt(1 - 1/k^2)) / 2``."""
    if int(k) != k or k < 2:
        raise DimensionError("k must be an integer >= 2")
    u = 1 / k ** 2
    return 0.5 * u / (1 + math.sqrt(1 - u))


def t_ppt_induced(k: int) -> float:
    """Threshold ``1 / (4k(k-1))`` of the induced density-matrix ensemble."""
    return 1 / (4 * k * (k - 1))


def ppt_min_eig_prediction(k: int, t: float) -> float:
    """Limit of ``lambda_min(C^Gamma)``: ``2 phi^-(s, t) - 1`` if ``t < s``, else -1."""
    _check_kt(k, t)
    s = (k + 1) / (2 * k)
    return 2 * phi_pm(s, t)[0] - 1 if t < s else -1.0


class ScanRow(NamedTuple):
    k: int
    t: float
    tensor_value: float
    single_value_sq: float
    violated: bool


@dataclass
class KScan:
    rows: list[ScanRow]
    minimal_k: int | None

    def row(self, k: int) -> ScanRow:
        return next(r for r in self.rows if r.k == k)


def ppt_violation_k_scan(k_range=range(2, 201)) -> KScan:
    """Compare ``t + (1-t)/k^2`` against ``phi^+(t, 1/k)^2`` at ``t = 1/(4k^2)``."""
    rows = []
    for k in k_range:
        t = 1 / (4 * k * k)
        T = t + (1 - t) / k ** 2
        S = phi_pm(t, 1 / k)[1]
        rows.append(ScanRow(int(k), t, T, S * S, T > S * S))
    viol = [r.k for r in rows if r.violated]
    return KScan(rows, min(viol) if viol else None)


def _p_threshold_equation(p: float) -> float:
    return p * p - 0.75 * p + 1 - 1.25 ** p


def ppt_violation_p_threshold(lo: float = 2.0, hi: float = 100.0) -> float:
    """Root of ``p^2 - 3p/4 + 1 = (5/4)^p`` on ``[lo, hi]``."""
    a, b = _p_threshold_equation(lo), _p_threshold_equation(hi)
    if a * b > 0:
        raise NumericalFailure("no sign change on the bracket")
    return brentq(_p_threshold_equation, lo, hi, xtol=1e-14, rtol=1e-15)


def p_violation_margin(p: float, k: int) -> float:
    """``2 log ||x_{k,t}||_p^p - log ||gamma_{k,t}||_p^p`` at ``t = 1/(4k^2)``.

    Negative means the product channel beats twice the single-channel entropy.
    """
    t = 1 / (4 * k * k)
    y = min(1.0, phi_pm(t, 1 / k)[1])
    lx = _log_pnorm_p(np.array([y, (1 - y) / (k - 1)]), np.array([1.0, k - 1.0]), p)
    rest = (1 - t) / k ** 2
    lg = _log_pnorm_p(np.array([t + rest, rest]), np.array([1.0, k * k - 1.0]), p)
    return 2 * lx - lg


def ppt_violation_p_finite(k: int, p_max: float = 1e4) -> float:
    """Smallest ``p >= 2`` with a violation at ``t = 1/(4k^2)``.

    Raises
    ------
    NumericalFailure
        If no sign change occurs up to ``p_max``.
    """
    if int(k) != k or k < 2:
        raise DimensionError("k must be an integer >= 2")
    grid = np.geomspace(2.0, p_max, 400)
    vals = [p_violation_margin(p, k) for p in grid]
    if vals[0] < 0:
        return 2.0
    for i in range(1, len(grid)):
        if vals[i] < 0:
            return brentq(p_violation_margin, grid[i - 1], grid[i], args=(k,), xtol=1e-12)
    raise NumericalFailure(f"no additivity violation found for k={k} up to p={p_max}")


# -- large-k asymptotics -----------------------------------------------------

def asymptotic_rate(p, tau: float) -> float:
    """Limit of ``alpha^Gamma_{p,k,t}`` for ``t ~ k^-tau``, ``p in [0, 2]``."""
    p = _parse_p(p)
    if p > 2:
        raise DimensionError("phase diagram is stated for p in [0, 2]")
    if tau <= 0:
        raise DimensionError("tau must be positive")
    if tau >= 2:
        return 1.0
    if p > 1 and tau <= 1 - 1 / p:
        return (p - 1) / (2 * p)
    return tau / 2


def asymptotic_rate_constant_t(p, t: float) -> float:
    """Limit of ``alpha^Gamma_{p,k,t}`` at constant ``t`` as ``k -> infinity``."""
    p = _parse_p(p)
    if t >= 0.5:
        return 0.0
    if 1 < p <= 2:
        return (p - 1) / (2 * p) * (1 + (2 * math.log(2) + math.log(1 - t)) / math.log(t))
    return 0.0


def asymptotic_h(p, t: float | None = None, tau: float | None = None) -> tuple[float, float]:
    """Leading behaviour ``h ~ a log k + b`` as ``(a, b)``.

    Give ``t`` for the constant regime or ``tau`` for ``t ~ k^-tau``.
    """
    p = _parse_p(p)
    if (t is None) == (tau is None):
        raise DimensionError("give exactly one of t and tau")
    if t is not None:
        if p == INF:
            return 0.0, -math.log(t)
        if p > 1:
            return 0.0, p / (1 - p) * math.log(t)
        if p == 1:
            return 1 - t, binary_entropy(t)
        return 1.0, p / (1 - p) * math.log(1 - t)
    if p > 1 and tau <= 1 - 1 / p:
        return (tau if p == INF else tau * p / (p - 1)), 0.0
    return 1.0, 0.0


def asymptotic_norm(t: float | None = None, tau: float | None = None, c: float = 1.0) -> tuple[float, float]:
    """Leading behaviour ``||mu^{CGamma}_{k,t}|| ~ A k^e`` as ``(A, e)``.

    In the power regime ``t = c k^-tau``.
    """
    if (t is None) == (tau is None):
        raise DimensionError("give exactly one of t and tau")
    if t is not None:
        return (1.0, 0.0) if t >= 0.5 else (2 * math.sqrt(t * (1 - t)), 0.0)
    if tau < 2:
        return 2 * math.sqrt(c), -tau / 2
    if tau == 2:
        return 1 + 2 * math.sqrt(c), -1.0
    return 1.0, -1.0


# -- named-channel bounds ----------------------------------------------------

def relative_violation(h_single_l: float, h_single_k: float, h_pair: float) -> float:
    """``v_p(L, K) = (H(L) + H(K)) / H(L (x) K)``."""
    if h_pair <= 0:
        raise DimensionError("pair entropy must be positive")
    return (h_single_l + h_single_k) / h_pair


def additivity_rate_upper_from_violation(hmin_single: float, hmin_pair: float) -> float:
    """``alpha_p(L) <= 1 / v_p(L, L) = H(L (x) L) / (2 H(L))``."""
    if hmin_single <= 0 or hmin_pair <= 0:
        raise DimensionError("entropies must be positive")
    return hmin_pair / (2 * hmin_single)


def convexity_bound(alpha_l: float, alpha_k: float, h_l: float, h_k: float, h_pair: float) -> float:
    """Right side of ``alpha(L (x) K) <= v [w alpha(L) + (1-w) alpha(K)]``."""
    w = 0.0 if h_l + h_k == 0 else h_l / (h_l + h_k)
    return relative_violation(h_l, h_k, h_pair) * (w * alpha_l + (1 - w) * alpha_k)


def hat_alpha(B: float, hmin: float) -> float:
    """``max(0, -log B / H_min)``."""
    if B <= 0 or hmin <= 0:
        raise DimensionError("B and H_min must be positive")
    return max(0.0, -math.log(B) / hmin)


def hat_alpha_from_panel(panel: Sequence[float], hmin: float, p=2) -> float:
    """``hat_alpha`` with ``B`` the panel minimum; above ``p = 2`` the first three carry ``c_p``."""
    c = c_p(p)
    b_c, b_cg, b_ccg, b_mg, b_i = panel
    B = min(b_c ** c, b_cg ** c, b_ccg ** c, b_mg, b_i)
    return hat_alpha(B, hmin)


# -- report ------------------------------------------------------------------

@dataclass
class BoundReport:
    """Scalar panel for fixed ``(p, k, t)`` from the limit laws."""

    p: float
    k: int
    t: float
    norm_c: float
    norm_c_gamma: float
    norm_cc_gamma: float
    norm_m_gamma_limit: float
    h: float
    h_is_upper_bound: bool
    alpha_gamma: float
    v: float
    v_alpha: float
    capacity_lower: float
    capacity_upper: float
    t_ppt: float
    is_ppt: bool
    ppt_min_eig: float
    nontrivial_rate: bool
    extra: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return asdict(self)


def bound_report(p, k: int, t: float, base="e") -> BoundReport:
    from .freeprob import norm_mu_c, norm_mu_cc_gamma, norm_mu_m_gamma_limit

    p = _parse_p(p)
    _check_kt(k, t)
    s = _log_scale(base)
    nrm = norm_mu_c_gamma(k, t)
    vr = v_pkt(p, k, t)
    lo, hi = capacity_bounds(k, t, base)
    return BoundReport(
        p=p, k=int(k), t=t,
        norm_c=norm_mu_c(k, t), norm_c_gamma=nrm,
        norm_cc_gamma=norm_mu_cc_gamma(t), norm_m_gamma_limit=norm_mu_m_gamma_limit(t),
        h=h_pkt(p, k, t) / s, h_is_upper_bound=p < 1,
        alpha_gamma=alpha_gamma(p, k, t), v=vr.v, v_alpha=vr.rate,
        capacity_lower=lo, capacity_upper=hi,
        t_ppt=t_ppt(k), is_ppt=t < t_ppt(k), ppt_min_eig=ppt_min_eig_prediction(k, t),
        nontrivial_rate=nrm < 1.0,
    )

"""Monte Carlo spectra of the four random matrix models."""
from __future__ import annotations

import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from ..errors import DimensionError, GuardError
from .matrices import MODELS, hermitian_eigenvalues, model_matrix
from .sampling import sample_isometry

#: Largest matrix dimension sampled without ``force``, per model.
SIZE_GUARDS = {"c": 8192, "cgamma": 8192, "ccgamma": 5000, "mgamma": 8192}


def model_dimension(model: str, n: int, k: int, d: int) -> int:
    return {"c": k * d, "cgamma": k * d, "ccgamma": n * d, "mgamma": n * k}[model]


def histogram_range(model: str, k: int) -> tuple[float, float]:
    # M^Gamma is not a contraction: its limit law reaches (1 + sqrt 5)/2
    if model == "c":
        return 0.0, float(k)
    return (-1.0, 2.0) if model == "mgamma" else (-1.0, 1.0)


def input_dimension(n: int, k: int, t: float) -> int:
    """``d = round(t n k)``."""
    return int(round(t * n * k))


@dataclass
class MonteCarloResult:
    model: str
    n: int
    k: int
    d: int
    t: float
    trials: int
    seed: int
    edges: np.ndarray = field(repr=False)
    counts: np.ndarray = field(repr=False)
    lambda_min: np.ndarray = field(repr=False)
    lambda_max: np.ndarray = field(repr=False)
    norms: np.ndarray = field(repr=False)
    outside: int = 0
    dropped_kernel: int = 0
    moments: np.ndarray | None = field(default=None, repr=False)

    @property
    def median_norm(self) -> float:
        return float(np.median(self.norms))


def _one_trial(model, n, k, d, seed, trial, lo, hi, bins, drop_kernel, pmax, max_dim):
    S = sample_isometry(n, k, d, seed=seed, trial=trial)
    ev = hermitian_eigenvalues(model_matrix(S, model, max_dim=max_dim), model).eigenvalues
    dropped = 0
    hist_ev = ev
    if drop_kernel:
        keep = np.abs(ev) > 1e-9
        dropped = int(ev.size - keep.sum())
        hist_ev = ev[keep]
    counts, _ = np.histogram(hist_ev, bins=bins, range=(lo, hi))
    outside = int(np.sum((hist_ev < lo) | (hist_ev > hi)))
    mom = np.array([np.mean(ev ** p) for p in range(1, pmax + 1)]) if pmax else None
    return counts, ev[0], ev[-1], max(abs(ev[0]), abs(ev[-1])), outside, dropped, mom


def monte_carlo_spectrum(model: str, n: int, k: int, t: float | None = None, trials: int = 10,
                         seed: int = 0, bins: int = 100, threads: int | None = None,
                         force: bool = False, drop_kernel: bool = False, d: int | None = None,
                         moments: int = 0) -> MonteCarloResult:
    """Pooled eigenvalue histogram and per-trial extremes.

    Exactly one of ``t`` and ``d`` must be given; ``d = round(t n k)``.
    Results depend only on ``seed``, not on ``threads``.  ``moments > 0``
    also records per-trial normalised trace moments ``mean(lambda^p)``.
    """
    if model not in MODELS:
        raise DimensionError(f"unknown model {model!r}; expected one of {MODELS}")
    if (t is None) == (d is None):
        raise DimensionError("give exactly one of t and d")
    if d is None:
        if not 0 < t < 1:
            raise DimensionError("t must lie in (0, 1)")
        d = input_dimension(n, k, t)
    if d < 1 or d > n * k:
        raise DimensionError(f"d={d} is outside 1..n*k")
    if trials < 1:
        raise DimensionError("trials must be >= 1")
    dim = model_dimension(model, n, k, d)
    limit = SIZE_GUARDS[model]
    if dim > limit and not force:
        raise GuardError(f"{model} matrix of size {dim} exceeds the guard {limit}; use force")
    lo, hi = histogram_range(model, k)
    threads = threads or os.cpu_count() or 1
    args = (model, n, k, d, seed)
    tail = (lo, hi, bins, drop_kernel, moments, None)
    if threads == 1:
        out = [_one_trial(*args, i, *tail) for i in range(trials)]
    else:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            out = list(pool.map(lambda i: _one_trial(*args, i, *tail), range(trials)))
    counts = np.sum([o[0] for o in out], axis=0)
    return MonteCarloResult(
        model=model, n=n, k=k, d=d, t=d / (n * k), trials=trials, seed=seed,
        edges=np.linspace(lo, hi, bins + 1), counts=counts,
        lambda_min=np.array([o[1] for o in out]), lambda_max=np.array([o[2] for o in out]),
        norms=np.array([o[3] for o in out]), outside=sum(o[4] for o in out),
        dropped_kernel=sum(o[5] for o in out),
        moments=np.array([o[6] for o in out]) if moments else None,
    )

"""Seeded Haar sampling.

Every matrix draws from its own Philox stream keyed by
``(seed, trial, matrix)``, so trials can run in any order or thread.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from ..errors import DimensionError


def stream(seed, trial: int = 0, matrix: int = 0) -> np.random.Generator:
    """Counter-based generator for one ``(seed, trial, matrix)`` triple.

    ``seed`` may also be a ``Generator`` (returned unchanged) or a tuple of
    non-negative ints (used as the full key).
    """
    if isinstance(seed, np.random.Generator):
        return seed
    if isinstance(seed, (tuple, list)):
        key = [int(s) for s in seed]
    else:
        key = [int(seed), int(trial), int(matrix)]
    return np.random.Generator(np.random.Philox(np.random.SeedSequence(key)))


def complex_gaussian(rng: np.random.Generator, shape) -> np.ndarray:
    """Standard complex Gaussians (``E|z|^2 = 1``) by Box-Muller."""
    u1 = 1.0 - rng.random(shape)  # (0, 1]
    u2 = rng.random(shape)
    return np.sqrt(-np.log(u1)) * np.exp(2j * math.pi * u2)


def _haar_columns(rng, N: int, m: int) -> np.ndarray:
    G = complex_gaussian(rng, (N, m))
    Q, R = np.linalg.qr(G)
    diag = np.diagonal(R)
    # without this phase fix QR output is not Haar distributed
    Q *= diag / np.abs(diag)
    return Q


def sample_haar_unitary(N: int, seed=0) -> np.ndarray:
    """Haar-distributed ``N x N`` unitary."""
    if N < 1:
        raise DimensionError("N must be >= 1")
    return _haar_columns(stream(seed), N, N)


@dataclass(frozen=True)
class ChannelSample:
    """Stinespring isometry ``V: C^d -> C^n (x) C^k`` (rows ordered env-major).

    Attributes
    ----------
    V : ndarray, shape (n*k, d)
    n, k, d : int
    provenance : dict
        Seed record or the name of a deterministic channel.
    """

    V: np.ndarray = field(repr=False)
    n: int
    k: int
    d: int
    provenance: dict[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        if self.V.shape != (self.n * self.k, self.d):
            raise DimensionError(f"V has shape {self.V.shape}, expected {(self.n * self.k, self.d)}")
        if self.d > self.n * self.k:
            raise DimensionError("d must not exceed n*k")

    @property
    def t_effective(self) -> float:
        return self.d / (self.n * self.k)

    @property
    def tensor(self) -> np.ndarray:
        """``v[x, a, s]``: environment, output, input."""
        return self.V.reshape(self.n, self.k, self.d)

    def isometry_defect(self) -> float:
        return float(np.max(np.abs(self.V.conj().T @ self.V - np.eye(self.d))))


def sample_isometry(n: int, k: int, d: int, seed=0, trial: int = 0, matrix: int = 0) -> ChannelSample:
    """Haar random isometry, the first ``d`` columns of a Haar unitary on ``C^{nk}``.

    Uses the reduced QR of an ``nk x d`` Ginibre matrix with the phase fix,
    which has the same law as truncating a full Haar unitary.
    """
    for name, v in (("n", n), ("k", k), ("d", d)):
        if int(v) != v or v < 1:
            raise DimensionError(f"{name} must be a positive integer")
    if d > n * k:
        raise DimensionError(f"d={d} exceeds n*k={n * k}")
    rng = stream(seed, trial, matrix)
    V = _haar_columns(rng, n * k, d)
    prov = {"seed": seed if not isinstance(seed, np.random.Generator) else "generator",
            "trial": trial, "matrix": matrix}
    return ChannelSample(V, int(n), int(k), int(d), prov)

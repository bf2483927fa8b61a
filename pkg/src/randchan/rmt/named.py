"""Deterministic channels with known bound panels."""
from __future__ import annotations

import math

import numpy as np

from ..errors import DimensionError
from .sampling import ChannelSample


def identity_channel(d: int) -> ChannelSample:
    return ChannelSample(np.eye(d, dtype=complex), 1, d, d, {"name": f"id_{d}"})


def depolarizing_channel(d: int) -> ChannelSample:
    """``X -> Tr(X) I/d`` with Kraus operators ``|i><j| / sqrt(d)``."""
    v = np.zeros((d, d, d, d), dtype=complex)  # env (i, j), output a, input s
    for i in range(d):
        for j in range(d):
            v[i, j, i, j] = 1 / math.sqrt(d)
    return ChannelSample(v.reshape(d ** 3, d), d * d, d, d, {"name": f"depolarizing_{d}"})


def werner_holevo(d: int) -> ChannelSample:
    """Minimal purification of ``W_d(X) = (Tr(X) I - X^T) / (d - 1)``."""
    if d < 2:
        raise DimensionError("Werner-Holevo channel needs d >= 2")
    v = np.zeros((d, d, d, d), dtype=complex)  # env (i, j), output x, input s
    c = 1 / math.sqrt(2 * (d - 1))
    for i in range(d):
        for j in range(d):
            v[i, j, j, i] += c
            v[i, j, i, j] -= c
    return ChannelSample(v.reshape(d ** 3, d), d * d, d, d, {"name": f"werner_holevo_{d}"})


def werner_holevo_map(X: np.ndarray) -> np.ndarray:
    d = X.shape[0]
    return (np.trace(X) * np.eye(d) - X.T) / (d - 1)


def antisymmetric_channel(d: int) -> ChannelSample:
    """Embedding of the antisymmetric subspace of ``C^d (x) C^d``, environment first."""
    if d < 3:
        raise DimensionError("antisymmetric channel needs d >= 3")
    pairs = [(a, b) for a in range(d) for b in range(a + 1, d)]
    V = np.zeros((d * d, len(pairs)), dtype=complex)
    for col, (a, b) in enumerate(pairs):
        V[a * d + b, col] = 1 / math.sqrt(2)
        V[b * d + a, col] = -1 / math.sqrt(2)
    return ChannelSample(V, d, d, len(pairs), {"name": f"antisymmetric_{d}"})


def flip_operator(k: int) -> np.ndarray:
    """Swap ``F`` on ``C^k (x) C^k``."""
    F = np.zeros((k * k, k * k))
    for a in range(k):
        for b in range(k):
            F[a * k + b, b * k + a] = 1.0
    return F


def max_entangled(d: int) -> np.ndarray:
    """Unnormalised ``E_d = sum_ij e_i e_j* (x) e_i e_j*``."""
    w = np.eye(d).reshape(d * d)
    return np.outer(w, w)

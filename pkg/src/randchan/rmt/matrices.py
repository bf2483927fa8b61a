"""Channel actions, Choi-type matrices, partial transposes and the bound panel."""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from ..errors import DimensionError, GuardError
from .sampling import ChannelSample

HERMITIAN_RTOL = 1e-12
MODELS = ("c", "cgamma", "ccgamma", "mgamma")


def apply_channel(S: ChannelSample, X: np.ndarray) -> np.ndarray:
    """``L(X) = Tr_n(V X V*)``, a ``k x k`` matrix."""
    X = np.asarray(X)
    if X.shape != (S.d, S.d):
        raise DimensionError(f"input must be {S.d}x{S.d}")
    v = S.tensor
    return np.einsum("xas,st,xbt->ab", v, X, v.conj(), optimize=True)


def apply_complementary(S: ChannelSample, X: np.ndarray) -> np.ndarray:
    """``L^c(X) = Tr_k(V X V*)``, an ``n x n`` matrix."""
    X = np.asarray(X)
    if X.shape != (S.d, S.d):
        raise DimensionError(f"input must be {S.d}x{S.d}")
    v = S.tensor
    return np.einsum("xas,st,yat->xy", v, X, v.conj(), optimize=True)


def choi(S: ChannelSample) -> np.ndarray:
    """Unnormalised Choi matrix on ``C^k (x) C^d`` (trace ``d``)."""
    v2 = S.V.reshape(S.n, S.k * S.d)
    return v2.T @ v2.conj()


def choi_complement(S: ChannelSample, max_dim: int | None = 5000) -> np.ndarray:
    """Choi matrix of the complementary channel on ``C^n (x) C^d``."""
    if max_dim is not None and S.n * S.d > max_dim:
        raise GuardError(f"n*d = {S.n * S.d} exceeds {max_dim}; pass force to override")
    w = S.tensor.transpose(1, 0, 2).reshape(S.k, S.n * S.d)
    return w.T @ w.conj()


def range_projector(S: ChannelSample) -> np.ndarray:
    """``M = V V*`` on ``C^n (x) C^k``."""
    return S.V @ S.V.conj().T


def partial_transpose(B: np.ndarray, p: int, q: int) -> np.ndarray:
    """Transpose the second factor of a matrix on ``C^p (x) C^q``."""
    B = np.asarray(B)
    if B.shape != (p * q, p * q):
        raise DimensionError(f"matrix of shape {B.shape} does not factor as {p}x{q}")
    return B.reshape(p, q, p, q).transpose(0, 3, 2, 1).reshape(p * q, p * q)


def choi_gamma(S: ChannelSample) -> np.ndarray:
    return partial_transpose(choi(S), S.k, S.d)


def choi_complement_gamma(S: ChannelSample, max_dim: int | None = 5000) -> np.ndarray:
    return partial_transpose(choi_complement(S, max_dim), S.n, S.d)


def projector_gamma(S: ChannelSample) -> np.ndarray:
    """``M^Gamma`` with the transpose on the output factor."""
    return partial_transpose(range_projector(S), S.n, S.k)


def model_matrix(S: ChannelSample, model: str, max_dim: int | None = 5000) -> np.ndarray:
    if model == "c":
        return choi(S)
    if model == "cgamma":
        return choi_gamma(S)
    if model == "ccgamma":
        return choi_complement_gamma(S, max_dim)
    if model == "mgamma":
        return projector_gamma(S)
    raise DimensionError(f"unknown model {model!r}; expected one of {MODELS}")


@dataclass(frozen=True)
class Spectrum:
    """Ascending real eigenvalues of a Hermitian matrix."""

    eigenvalues: np.ndarray
    size: int
    model: str | None = None

    @property
    def lambda_min(self) -> float:
        return float(self.eigenvalues[0])

    @property
    def lambda_max(self) -> float:
        return float(self.eigenvalues[-1])

    @property
    def norm(self) -> float:
        return float(max(abs(self.eigenvalues[0]), abs(self.eigenvalues[-1])))


def is_hermitian(A: np.ndarray, rtol: float = HERMITIAN_RTOL) -> bool:
    scale = float(np.max(np.abs(A))) if A.size else 0.0
    return float(np.max(np.abs(A - A.conj().T), initial=0.0)) <= rtol * max(scale, 1e-300)


def hermitian_eigenvalues(A: np.ndarray, model: str | None = None) -> Spectrum:
    """Full spectrum of a Hermitian matrix (LAPACK divide and conquer)."""
    A = np.asarray(A)
    if A.ndim != 2 or A.shape[0] != A.shape[1]:
        raise DimensionError("square matrix required")
    if not is_hermitian(A):
        raise DimensionError("matrix is not Hermitian")
    ev = np.linalg.eigvalsh((A + A.conj().T) / 2)
    return Spectrum(ev, A.shape[0], model)


def operator_norm(A: np.ndarray) -> float:
    return hermitian_eigenvalues(A).norm


class BoundPanel(NamedTuple):
    """The five multiplicative norm quantities of a channel."""

    b_c: float
    b_c_gamma: float
    b_cc_gamma: float
    b_m_gamma: float
    b_i: float


def bounds_of_channel(S: ChannelSample, max_dim: int | None = 5000) -> BoundPanel:
    """``(|C|, |C^Gamma|, |C_{L^c}^Gamma|, |M^Gamma|, |L(I)|)``."""
    C = choi(S)
    return BoundPanel(
        operator_norm(C),
        operator_norm(partial_transpose(C, S.k, S.d)),
        operator_norm(choi_complement_gamma(S, max_dim)),
        operator_norm(projector_gamma(S)),
        operator_norm(apply_channel(S, np.eye(S.d))),
    )


# -- the 27 trace/transpose/identity combinations on vv* ---------------------

OPS = ("id", "tr", "theta")


def b_qrs(S: ChannelSample, ops: tuple[str, str, str]) -> float:
    """``|| [Q_n (x) R_k (x) S_d](v v*) ||`` for ``ops = (Q, R, S)``."""
    v = S.tensor
    T = np.einsum("xas,ybt->xasybt", v, v.conj())  # row legs 0-2, column legs 3-5
    rows, cols = [0, 1, 2], [3, 4, 5]
    dims = [S.n, S.k, S.d]
    for leg, op in enumerate(ops):
        if op == "theta":
            rows[leg], cols[leg] = cols[leg], rows[leg]
        elif op not in ("id", "tr"):
            raise ValueError(f"unknown op {op!r}")
    keep = [leg for leg, op in enumerate(ops) if op != "tr"]
    letters = "abcdef"
    sub_in = ["?"] * 6
    for leg in range(3):
        if ops[leg] == "tr":
            sub_in[leg] = sub_in[leg + 3] = letters[leg]
        else:
            sub_in[leg], sub_in[leg + 3] = letters[leg], letters[leg + 3]
    out = "".join(sub_in[rows[leg]] for leg in keep) + "".join(sub_in[cols[leg]] for leg in keep)
    R = np.einsum("".join(sub_in) + "->" + out, T)
    m = int(np.prod([dims[leg] for leg in keep])) if keep else 1
    return operator_norm(R.reshape(m, m))


# -- products, duals and the Bell-state output -------------------------------

def tensor_channels(S1: ChannelSample, S2: ChannelSample) -> ChannelSample:
    """Stinespring isometry of ``L1 (x) L2`` with environment ``n1 n2``."""
    v = np.einsum("xas,ybt->xyabst", S1.tensor, S2.tensor)
    n, k, d = S1.n * S2.n, S1.k * S2.k, S1.d * S2.d
    return ChannelSample(v.reshape(n * k, d), n, k, d, {"product": [S1.provenance, S2.provenance]})


def dual_choi(C: np.ndarray, k: int, d: int) -> np.ndarray:
    """Choi matrix ``F C^T F*`` of the adjoint map, on ``C^d (x) C^k``."""
    return C.reshape(k, d, k, d).transpose(3, 2, 1, 0).reshape(d * k, d * k)


def dual_choi_spectrum_check(S: ChannelSample, atol: float = 1e-9) -> bool:
    """Spectra of ``C_L`` vs ``C_{L*}`` and of their partial transposes agree."""
    C = choi(S)
    D = dual_choi(C, S.k, S.d)
    pairs = [(C, D), (partial_transpose(C, S.k, S.d), partial_transpose(D, S.d, S.k))]
    return all(np.allclose(hermitian_eigenvalues(a).eigenvalues, hermitian_eigenvalues(b).eigenvalues,
                           atol=atol, rtol=0) for a, b in pairs)


def bell_output(S: ChannelSample, max_dim: int = 4096) -> np.ndarray:
    """``[L (x) conj(L)](E_d / d)`` on ``C^k (x) C^k`` (unit trace)."""
    if S.k * S.d > max_dim:
        raise GuardError(f"k*d = {S.k * S.d} exceeds {max_dim}")
    C4 = choi(S).reshape(S.k, S.d, S.k, S.d)
    rho = np.einsum("aibj,ciej->acbe", C4, C4.conj(), optimize=True) / S.d
    return rho.reshape(S.k ** 2, S.k ** 2)


def bell_output_norm(S: ChannelSample, normalized: bool = True) -> float:
    """Largest eigenvalue of the Bell-state output.

    With ``normalized=True`` the input is the unit-trace ``E_d / d`` and the
    Hayden-Winter bound reads ``>= d/(nk)``; otherwise ``E_d`` is used and
    the value is ``d`` times larger.
    """
    lam = hermitian_eigenvalues(bell_output(S)).lambda_max
    return lam if normalized else lam * S.d

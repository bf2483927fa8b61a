import itertools
import math

import numpy as np
import pytest

from randchan.bounds import gamma_kt
from randchan.errors import DimensionError, GuardError
from randchan.rmt import (
    apply_channel,
    apply_complementary,
    antisymmetric_channel,
    b_qrs,
    bell_output,
    bell_output_norm,
    bounds_of_channel,
    choi,
    choi_complement,
    choi_complement_gamma,
    choi_gamma,
    depolarizing_channel,
    dual_choi_spectrum_check,
    flip_operator,
    hermitian_eigenvalues,
    identity_channel,
    input_dimension,
    is_hermitian,
    max_entangled,
    monte_carlo_spectrum,
    partial_transpose,
    projector_gamma,
    range_projector,
    sample_haar_unitary,
    sample_isometry,
    stream,
    tensor_channels,
    werner_holevo,
    werner_holevo_map,
)
from randchan.symgroup import Permutation
from randchan.weingarten import wg


def random_state(rng, d):
    x = rng.standard_normal(d) + 1j * rng.standard_normal(d)
    return x / np.linalg.norm(x)


def random_density(rng, d):
    G = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    R = G @ G.conj().T
    return R / np.trace(R)


# -- sampling ----------------------------------------------------------------

def test_stream_is_keyed():
    a = stream(5, 1, 2).random(4)
    assert np.array_equal(a, stream(5, 1, 2).random(4))
    assert not np.array_equal(a, stream(5, 2, 1).random(4))
    assert np.array_equal(stream((5, 1, 2)).random(4), a)


def test_haar_unitary_is_unitary():
    for N in (1, 3, 8):
        U = sample_haar_unitary(N, seed=N)
        assert np.max(np.abs(U.conj().T @ U - np.eye(N))) < 1e-10
    with pytest.raises(DimensionError):
        sample_haar_unitary(0)


def test_haar_first_moment():
    N, T = 4, 100_000
    x = np.array([abs(sample_haar_unitary(N, seed=(7, i))[0, 0]) ** 2 for i in range(T)])
    se = x.std(ddof=1) / math.sqrt(T)
    assert abs(x.mean() - 1 / N) < 3 * se


def test_haar_second_moment():
    N, T = 3, 50_000
    vals = []
    for i in range(T):
        U = sample_haar_unitary(N, seed=(11, i))
        vals.append(abs(U[0, 0]) ** 2 * abs(U[1, 1]) ** 2)
    x = np.array(vals)
    exact = float(wg(Permutation((1, 2)), N))
    se = x.std(ddof=1) / math.sqrt(T)
    assert abs(x.mean() - exact) < 3 * se


def test_haar_phase_fix_matters():
    # raw QR of Ginibre matrices has a biased diagonal; the fix removes the bias
    N, T = 3, 4000
    fixed = np.mean([sample_haar_unitary(N, seed=(3, i))[0, 0].real for i in range(T)])
    raw = []
    for i in range(T):
        G = stream((3, i)).standard_normal((N, N)) + 1j * stream((3, i, 1)).standard_normal((N, N))
        raw.append(np.linalg.qr(G)[0][0, 0].real)
    assert abs(fixed) < 0.05
    assert abs(np.mean(raw)) > 0.2


def test_isometry_properties():
    S = sample_isometry(3, 2, 5, seed=1)
    assert S.isometry_defect() < 1e-10
    assert np.allclose(np.linalg.norm(S.V, axis=0), 1.0, atol=1e-12)
    assert np.trace(S.V @ S.V.conj().T).real == pytest.approx(5)
    assert S.t_effective == pytest.approx(5 / 6)
    with pytest.raises(DimensionError):
        sample_isometry(2, 2, 5)
    with pytest.raises(DimensionError):
        sample_isometry(0, 2, 1)


def test_isometry_reproducible():
    a = sample_isometry(4, 2, 3, seed=9, trial=2)
    b = sample_isometry(4, 2, 3, seed=9, trial=2)
    c = sample_isometry(4, 2, 3, seed=9, trial=3)
    assert np.array_equal(a.V, b.V)
    assert not np.array_equal(a.V, c.V)


# -- channels ----------------------------------------------------------------

def test_identity_channel_output():
    S = identity_channel(3)
    assert np.allclose(apply_channel(S, np.eye(3) / 3), np.eye(3) / 3)
    C = choi(S)
    ev = hermitian_eigenvalues(C).eigenvalues
    assert ev[-1] == pytest.approx(3) and np.sum(np.abs(ev) > 1e-9) == 1
    assert np.allclose(C, max_entangled(3))


def test_trace_preservation_and_positivity():
    rng = np.random.default_rng(0)
    S = sample_isometry(3, 2, 4, seed=2)
    X = random_density(rng, 4)
    assert np.trace(apply_channel(S, X)) == pytest.approx(1.0)
    assert np.trace(apply_complementary(S, X)) == pytest.approx(1.0)
    x = random_state(rng, 4)
    out = apply_channel(S, np.outer(x, x.conj()))
    ev = np.linalg.eigvalsh(out)
    assert ev.min() > -1e-12 and ev.sum() == pytest.approx(1.0)


def test_complementary_shares_spectrum():
    rng = np.random.default_rng(1)
    S = sample_isometry(3, 4, 5, seed=3)
    x = random_state(rng, 5)
    P = np.outer(x, x.conj())
    a = np.sort(np.linalg.eigvalsh(apply_channel(S, P)))
    b = np.sort(np.linalg.eigvalsh(apply_complementary(S, P)))
    a, b = a[a > 1e-9], b[b > 1e-9]
    assert np.allclose(a, b, atol=1e-9)


def test_trivial_environment():
    S = sample_isometry(1, 3, 3, seed=4)
    X = random_density(np.random.default_rng(2), 3)
    assert np.allclose(apply_complementary(S, X), [[1.0]])


def test_choi_basics():
    S = sample_isometry(3, 2, 4, seed=5)
    C = choi(S)
    assert np.trace(C).real == pytest.approx(4)
    assert np.linalg.eigvalsh(C).min() > -1e-10
    Cc = choi_complement(S)
    assert np.trace(Cc).real == pytest.approx(4)
    assert np.linalg.eigvalsh(Cc).min() > -1e-10
    with pytest.raises(GuardError):
        choi_complement(S, max_dim=5)


def test_partial_transpose_properties():
    rng = np.random.default_rng(3)
    B1 = rng.standard_normal((2, 2)) + 1j * rng.standard_normal((2, 2))
    B2 = rng.standard_normal((3, 3)) + 1j * rng.standard_normal((3, 3))
    B = np.kron(B1, B2)
    assert np.allclose(partial_transpose(B, 2, 3), np.kron(B1, B2.T))
    assert np.allclose(partial_transpose(partial_transpose(B, 2, 3), 2, 3), B)
    assert np.trace(partial_transpose(B, 2, 3)) == pytest.approx(np.trace(B))


def test_projector_gamma():
    S = sample_isometry(4, 3, 5, seed=6)
    M = range_projector(S)
    assert np.allclose(M @ M, M, atol=1e-12)
    MG = projector_gamma(S)
    assert np.trace(MG).real == pytest.approx(5)
    ev = hermitian_eigenvalues(MG).eigenvalues
    # not a contraction in general, but bounded by the rank
    assert np.abs(ev).max() <= S.d + 1e-10


def test_projector_gamma_can_exceed_one():
    # symmetric subspace of C^k (x) C^k: (I + F)/2 has partial transpose norm (k + 1)/2
    k = 3
    P = (np.eye(k * k) + flip_operator(k)) / 2
    assert hermitian_eigenvalues(partial_transpose(P, k, k)).norm == pytest.approx((k + 1) / 2)


def test_ccgamma_symmetric_for_large_k():
    S = sample_isometry(60, 8, input_dimension(60, 8, 0.05), seed=7)
    ev = hermitian_eigenvalues(choi_complement_gamma(S)).eigenvalues
    ev = ev * S.n  # normalised matrix
    skew = np.mean((ev - ev.mean()) ** 3) / np.std(ev) ** 3
    assert abs(skew) < 0.1


# -- eigenvalues -------------------------------------------------------------

def test_eigen_examples():
    assert hermitian_eigenvalues(np.diag([3.0, 1.0, 2.0])).eigenvalues.tolist() == [1.0, 2.0, 3.0]
    F = flip_operator(2)
    assert np.allclose(hermitian_eigenvalues(F).eigenvalues, [-1, 1, 1, 1])
    F3 = hermitian_eigenvalues(flip_operator(3)).eigenvalues
    assert np.sum(np.isclose(F3, 1)) == 6 and np.sum(np.isclose(F3, -1)) == 3
    rng = np.random.default_rng(4)
    G = rng.standard_normal((20, 20)) + 1j * rng.standard_normal((20, 20))
    A = G + G.conj().T
    sp = hermitian_eigenvalues(A)
    assert sp.eigenvalues.sum() == pytest.approx(np.trace(A).real, abs=1e-9)
    assert sp.norm == max(abs(sp.lambda_min), abs(sp.lambda_max))
    with pytest.raises(DimensionError):
        hermitian_eigenvalues(G)
    assert not is_hermitian(G)


def test_eigen_accuracy_on_known_spectrum():
    lam = np.concatenate([-np.ones(7), np.ones(9), np.linspace(-0.5, 0.5, 24)])
    U = sample_haar_unitary(lam.size, seed=12)
    A = U @ np.diag(lam) @ U.conj().T
    ev = hermitian_eigenvalues(A).eigenvalues
    assert np.max(np.abs(ev - np.sort(lam))) < 1e-10 * np.abs(lam).max() * lam.size
    assert np.sum(np.abs(ev + 1) < 1e-9) == 7 and np.sum(np.abs(ev - 1) < 1e-9) == 9


# -- named channels and bound panels -----------------------------------------

def test_identity_and_depolarizing_panels():
    assert np.allclose(bounds_of_channel(identity_channel(3)), (3, 1, 1, 1, 1), atol=1e-12)
    assert np.allclose(bounds_of_channel(depolarizing_channel(3)), (1 / 3,) * 4 + (1,), atol=1e-12)


@pytest.mark.parametrize("d", [3, 4, 5])
def test_werner_holevo(d):
    S = werner_holevo(d)
    assert S.isometry_defect() < 1e-12
    rng = np.random.default_rng(d)
    X = random_density(rng, d)
    assert np.allclose(apply_channel(S, X), werner_holevo_map(X), atol=1e-12)
    assert np.allclose(apply_channel(S, np.eye(d)), np.eye(d))
    b = 2 / (d - 1)
    assert np.allclose(bounds_of_channel(S), (b, 1, b, b, 1), atol=1e-10)


@pytest.mark.parametrize("d", [3, 4, 5])
def test_antisymmetric(d):
    S = antisymmetric_channel(d)
    assert S.d == d * (d - 1) // 2
    assert S.isometry_defect() < 1e-12
    h = (d - 1) / 2
    assert np.allclose(bounds_of_channel(S), (h, 1, 1, h, h), atol=1e-10)
    with pytest.raises(DimensionError):
        antisymmetric_channel(2)


def test_multiplicativity():
    S1 = sample_isometry(2, 2, 3, seed=21)
    S2 = sample_isometry(3, 2, 2, seed=22)
    P = tensor_channels(S1, S2)
    assert P.isometry_defect() < 1e-12
    b1, b2, b12 = bounds_of_channel(S1), bounds_of_channel(S2), bounds_of_channel(P)
    assert np.allclose(b12, np.array(b1) * np.array(b2), atol=1e-9, rtol=0)


def test_table_equality_classes():
    S = sample_isometry(3, 2, 4, seed=8)
    ops = list(itertools.product(("id", "tr", "theta"), repeat=3))
    val = {i + 1: b_qrs(S, o) for i, o in enumerate(ops)}
    panel = bounds_of_channel(S)
    classes = [
        (panel.b_i, (4, 7, 11, 17, 21, 24)),
        (panel.b_c, (5, 9, 10, 18, 19, 23)),
        (panel.b_c_gamma, (12, 16)),
        (panel.b_cc_gamma, (6, 22)),
        (panel.b_m_gamma, (8, 20)),
        (float(S.d), (1, 14, 27)),
        (1.0, (2, 3, 13, 15, 25, 26)),
    ]
    seen = set()
    for target, rows in classes:
        for r in rows:
            assert val[r] == pytest.approx(target, abs=1e-9), r
            seen.add(r)
    assert seen == set(range(1, 28))
    with pytest.raises(ValueError):
        b_qrs(S, ("id", "id", "foo"))


def test_eigenvalue_clusters():
    n, k, t = 10, 2, 0.9
    d = input_dimension(n, k, t)
    S = sample_isometry(n, k, d, seed=13)
    ev = hermitian_eigenvalues(choi_gamma(S)).eigenvalues
    plus = k * d + n * k * (k + 1) // 2 - n * k * k
    minus = k * d + n * k * (k - 1) // 2 - n * k * k
    assert np.sum(np.abs(ev - 1) < 1e-6) >= plus
    assert np.sum(np.abs(ev + 1) < 1e-6) >= max(minus, 0)
    assert minus > 0


@pytest.mark.parametrize("S", [sample_isometry(6, 2, 4, seed=14), werner_holevo(3), identity_channel(3)],
                         ids=["random", "werner", "identity"])
def test_dual_choi(S):
    assert dual_choi_spectrum_check(S)


def test_bell_output():
    n, k, t = 300, 2, 0.1
    d = input_dimension(n, k, t)
    S = sample_isometry(n, k, d, seed=15)
    rho = bell_output(S)
    assert np.trace(rho).real == pytest.approx(1.0)
    ev = np.sort(hermitian_eigenvalues(rho).eigenvalues)[::-1]
    assert bell_output_norm(S) >= d / (n * k) - 1e-12
    assert bell_output_norm(S, normalized=False) == pytest.approx(d * ev[0])
    assert ev[0] == pytest.approx(0.325, abs=0.02)
    assert np.allclose(ev, gamma_kt(k, t), atol=0.02)


# -- Monte Carlo -------------------------------------------------------------

def test_monte_carlo_determinism_across_threads():
    a = monte_carlo_spectrum("cgamma", 30, 2, t=0.2, trials=4, seed=3, threads=1, moments=2)
    b = monte_carlo_spectrum("cgamma", 30, 2, t=0.2, trials=4, seed=3, threads=3, moments=2)
    assert np.array_equal(a.counts, b.counts)
    assert np.array_equal(a.norms, b.norms)
    assert np.array_equal(a.moments, b.moments)
    assert a.counts.sum() + a.outside == a.trials * 2 * a.d


def test_monte_carlo_guards_and_args():
    with pytest.raises(GuardError):
        monte_carlo_spectrum("ccgamma", 2000, 2, t=0.1)
    with pytest.raises(DimensionError):
        monte_carlo_spectrum("cgamma", 10, 2)
    with pytest.raises(DimensionError):
        monte_carlo_spectrum("cgamma", 10, 2, t=0.1, d=2)
    with pytest.raises(DimensionError):
        monte_carlo_spectrum("bogus", 10, 2, t=0.1)


def test_monte_carlo_drop_kernel():
    res = monte_carlo_spectrum("c", 20, 2, d=8, trials=2, seed=1, drop_kernel=True)
    # C has rank at most n = 20 inside a 16-dimensional space: no kernel here
    assert res.dropped_kernel == 0
    res = monte_carlo_spectrum("c", 3, 4, d=10, trials=2, seed=1, drop_kernel=True)
    # rank <= n = 3 of a 40 x 40 matrix
    assert res.dropped_kernel == 2 * (40 - 3)


def test_monte_carlo_mgamma_large_k():
    res = monte_carlo_spectrum("mgamma", 250, 8, t=0.1, trials=2, seed=2)
    assert res.median_norm == pytest.approx(0.7, abs=0.05)

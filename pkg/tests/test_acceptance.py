"""Acceptance suite: one PASS/FAIL line per criterion.

The lines are collected by the ``verdict`` fixture and printed in the
terminal summary.

Run with ``pytest tests/test_acceptance.py -v`` or directly with
``python tests/test_acceptance.py``.  Set ``RANDCHAN_HEAVY=1`` for the
optional ``n = 2000`` Monte Carlo run.
"""
import math
import os
import sys
import time

import numpy as np
import pytest

from randchan import bounds as bd
from randchan import freeprob as fp
from randchan.rmt import (
    antisymmetric_channel,
    bounds_of_channel,
    monte_carlo_spectrum,
    sample_isometry,
    tensor_channels,
    werner_holevo,
)
from randchan.weingarten import MODELS, exact_moment

HEAVY = os.environ.get("RANDCHAN_HEAVY", "") == "1"


def test_criterion_1_closed_form_norms(verdict):
    t0 = time.perf_counter()
    a = fp.norm_mu_c(2, 0.1)
    b = fp.norm_mu_c_gamma(2, 0.1)
    dt = time.perf_counter() - t0
    # the measure objects agree with the closed forms
    same = abs(a - fp.mu_c(2, 0.1).norm()) < 1e-12 and abs(b - fp.mu_c_gamma(2, 0.1).norm()) < 1e-12
    ok = abs(a - 1.11962) < 1e-5 and abs(b - 0.91961) < 1e-5 and dt < 0.01 and same
    assert verdict(1, ok, f"||mu_C||={a:.6f} ||mu_CGamma||={b:.6f} in {dt * 1e3:.1f} ms")


def test_criterion_2_monte_carlo_vs_theory(verdict):
    med, secs = {}, {}
    for model in ("cgamma", "c"):
        t0 = time.perf_counter()
        med[model] = monte_carlo_spectrum(model, 1000, 2, t=0.1, trials=10, seed=0).median_norm
        secs[model] = time.perf_counter() - t0
    ok = (abs(med["cgamma"] - 0.91961) < 0.03 and abs(med["c"] - 1.11962) < 0.03
          and max(secs.values()) < 120)
    assert verdict(2, ok, f"median ||C^G||={med['cgamma']:.5f} ||C||={med['c']:.5f} "
                   f"(max {max(secs.values()):.1f} s per model)")


@pytest.mark.skipif(not HEAVY, reason="optional heavy run; set RANDCHAN_HEAVY=1")
def test_criterion_2_optional_heavy(verdict):
    mg = monte_carlo_spectrum("cgamma", 2000, 2, t=0.1, trials=10, seed=0).median_norm
    mc = monte_carlo_spectrum("c", 2000, 2, t=0.1, trials=10, seed=0).median_norm
    ok_g, ok_c = abs(mg - 0.91990) < 0.01, abs(mc - 1.12360) < 0.01
    verdict("2 (optional n=2000)", ok_g and ok_c,
            f"||C^G||={mg:.5f} vs 0.91990, ||C||={mc:.5f} vs 1.12360")
    # the Gamma norm must match; the reference C value sits above the limit law, see README
    assert ok_g
    assert abs(mc - 1.11962) < 0.01


def test_criterion_3_exact_moment_oracle(verdict):
    worst, ok = 0.0, True
    for model in MODELS:
        r = monte_carlo_spectrum(model, 4, 2, d=3, trials=20000, seed=11, moments=3)
        mean = r.moments.mean(axis=0)
        se = r.moments.std(axis=0, ddof=1) / math.sqrt(r.trials)
        for p in (1, 2, 3):
            exact = float(exact_moment(model, 4, 2, 3, p))
            err = abs(mean[p - 1] - exact)
            # some moments are deterministic; their standard error is rounding noise
            tol = max(3 * se[p - 1], 1e-12)
            ok &= err <= tol
            if se[p - 1] > 1e-12:
                worst = max(worst, err / se[p - 1])
    assert verdict(3, ok, f"4 models x p=1..3 over 20000 trials, worst |z|={worst:.2f}")


def test_criterion_4_limit_law_consistency(verdict):
    worst = 0.0
    for k in (2, 3, 4):
        for t in (0.1, 0.3, 0.6):
            mu = fp.mu_c_gamma(k, t)
            for p in range(1, 7):
                exact = fp.limit_moment_c_gamma(k, t, p)
                worst = max(worst, abs(mu.moment(p) / float(exact) - 1))
    mono = True
    for t in (0.1, 0.3, 0.6):
        target = fp.dt_bt_power(t)
        for q in range(2, 6):
            gaps = [abs(float(fp.limit_moment_ccgamma_fixed_k(k, t, q)) - target.moment(q)) for k in (4, 16, 64)]
            mono &= gaps[0] > gaps[1] > gaps[2]
    ok = worst < 1e-8 and mono
    assert verdict(4, ok, f"max rel err {worst:.2e}; fixed-k gaps decreasing: {mono}")


def test_criterion_5_kt_gap_identity(verdict):
    # 50 grid points; the identity is in terms of the upper edges phi^+
    pts = [(k, t) for k in (2, 3, 4, 5, 8) for t in np.linspace(0.02, 1 - k ** -2 - 0.01, 10)]
    worst = 0.0
    for k, t in pts:
        gap = k * fp.phi_pm(k ** -2, t)[1] - 2 * fp.phi_pm((k + 1) / (2 * k), t)[1] + 1
        worst = max(worst, abs(gap - k * t))
    # as a difference of norms it needs the CGamma law to carry no atom at +1
    nrm = [(k, t) for k, t in pts if t < (k - 1) / (2 * k)]
    worst_norm = max(abs(fp.norm_mu_c(k, t) - fp.norm_mu_c_gamma(k, t) - k * t) for k, t in nrm)
    ok = len(pts) == 50 and worst < 1e-12 and worst_norm < 1e-12
    assert verdict(5, ok, f"phi+ form max err {worst:.1e} on 50 points; "
                   f"norm form max err {worst_norm:.1e} on {len(nrm)} atom-free points")


def test_criterion_6_ppt_threshold(verdict):
    t0 = bd.t_ppt(2)
    below = monte_carlo_spectrum("cgamma", 600, 2, t=0.04, trials=10, seed=0).lambda_min
    above = monte_carlo_spectrum("cgamma", 600, 2, t=0.09, trials=10, seed=0).lambda_min
    pos, neg = int(np.sum(below > 0)), int(np.sum(above < 0))
    ok = abs(t0 - 0.0669873) < 1e-7 and pos >= 9 and neg >= 9
    assert verdict(6, ok, f"t_ppt(2)={t0:.8f}; lambda_min>0 in {pos}/10 at t=0.04, <0 in {neg}/10 at t=0.09")


@pytest.mark.xfail(strict=True, reason="the exact root of the stated equation is 30.5368; see README")
def test_criterion_7a_p_threshold(verdict):
    root = bd.ppt_violation_p_threshold()
    ok = abs(root - 30.9441) < 1e-3
    verdict("7a", ok, f"root of p^2 - 3p/4 + 1 = (5/4)^p is {root:.6f}, reference 30.9441")
    assert ok


def test_criterion_7b_k_scan(verdict):
    scan = bd.ppt_violation_k_scan(range(2, 201))
    row = scan.row(76)
    ok = row.violated and scan.minimal_k is not None
    assert verdict("7b", ok, f"condition holds at k=76 ({row.tensor_value:.6e} > {row.single_value_sq:.6e}); "
                   f"minimal k={scan.minimal_k}")
    assert scan.minimal_k == 75


def test_criterion_8_named_channels(verdict):
    wh = bounds_of_channel(werner_holevo(4))
    asym = bounds_of_channel(antisymmetric_channel(4))
    # panels are stored as (B_C, B_CGamma, B_CcGamma, B_MGamma, B_I)
    e_wh = np.max(np.abs(np.array(wh) - [2 / 3, 1, 2 / 3, 2 / 3, 1]))
    e_as = np.max(np.abs(np.array(asym) - [1.5, 1, 1, 1.5, 1.5]))
    ok = e_wh < 1e-9 and e_as < 1e-9
    assert verdict(8, ok, f"W_4 panel err {e_wh:.1e}; A_4 panel err {e_as:.1e}")


def test_criterion_9_multiplicativity(verdict):
    S1 = sample_isometry(2, 2, 3, seed=21)
    S2 = sample_isometry(3, 2, 2, seed=22)
    b1, b2 = bounds_of_channel(S1), bounds_of_channel(S2)
    b12 = bounds_of_channel(tensor_channels(S1, S2))
    err = max(abs(x * y - z) for x, y, z in zip(b1, b2, b12))
    assert verdict(9, err < 1e-9, f"max |B(L)B(K) - B(L (x) K)| = {err:.1e} over five quantities")


def test_criterion_10_additivity_rate_report(verdict):
    a = bd.alpha_gamma(1, 2, 0.1)
    worst = 0.0
    for p in (1.1, 1.25, 1.5, 2.0):
        for seam in (1 - 1 / p, 2.0):
            vals = [bd.asymptotic_rate(p, seam + s) for s in (-1e-13, 0.0, 1e-13)]
            worst = max(worst, max(vals) - min(vals))
    ok = abs(a - 0.16746) < 1e-4 and worst < 1e-12
    assert verdict(10, ok, f"alpha_gamma(1,2,0.1)={a:.6f}; max jump across seams {worst:.1e}")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q"]))

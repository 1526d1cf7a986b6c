"""Drift diffusion: sampler, dual-series density, CDF, choice prob, traces."""

import json
import math
from pathlib import Path

import numpy as np
import pytest
from scipy.integrate import quad

import ssms
from ssms import DDMParams
from ssms import ddm
from ssms.ddm import (_log_fnorm_large, _log_fnorm_small, _n_terms_large,
                      _n_terms_small)

from _testutil import ks_conditional

P_REF = DDMParams(nu=1.0, alpha=0.8, tau=0.3, z=0.5)
# hitting probability of the upper boundary for P_REF (gambler's ruin)
P_UP_REF = 0.690


def _golden():
    path = Path(__file__).parent / "golden" / "ddm_mc.json"
    if not path.exists():
        pytest.fail("tests/golden/ddm_mc.json missing; regenerate with "
                    "scripts/regen_golden.py ddm-mc --all-chunks then --merge")
    return json.loads(path.read_text())


@pytest.fixture(scope="module")
def ds_ref():
    # shared across the fraction and KS tests below
    return ssms.sample(P_REF, 100_000, seed=42)


# ---------------------------------------------------------------- sampler

def test_sample_reference_setup():
    ds = ssms.sample(P_REF, 10_000, seed=104)
    assert len(ds) == 10_000
    assert set(np.unique(ds.choice)) <= {1, 2}
    assert (ds.rt > P_REF.tau).all()
    assert ds.meta["seed"] == 104


def test_sample_is_deterministic():
    a = ssms.sample(P_REF, 300, seed=5)
    b = ssms.sample(P_REF, 300, seed=5)
    c = ssms.sample(P_REF, 300, seed=6)
    assert a == b
    assert a != c


def test_sample_rejects_bad_input():
    with pytest.raises(ValueError):
        ssms.sample(P_REF, 0, seed=1)
    with pytest.raises(ValueError):
        ssms.sample(DDMParams(nu=1.0, alpha=0.8, tau=0.3, z=1.2), 10, seed=1)
    with pytest.raises(ValueError):
        ddm.sample(P_REF, 10, seed=1, dt=0.0)


def test_driftless_process_splits_evenly():
    p = DDMParams(nu=0.0, alpha=1.0, tau=0.3, z=0.5)
    ds = ssms.sample(p, 100_000, seed=1)
    assert abs(np.mean(ds.choice == 1) - 0.5) <= 0.005


def test_fraction_matches_hitting_probability(ds_ref):
    assert abs(np.mean(ds_ref.choice == 1) - P_UP_REF) <= 0.006


# ---------------------------------------------------------------- density

def test_pdf_normalizes():
    t_hi = P_REF.tau + 50.0
    total = ssms.cdf(P_REF, 1, t_hi) + ssms.cdf(P_REF, 2, t_hi)
    assert total == pytest.approx(1.0, abs=1e-4)


def test_pdf_zero_before_tau():
    assert ssms.pdf(P_REF, 1, 0.29) == 0.0
    assert ssms.pdf(P_REF, 1, P_REF.tau) == 0.0
    assert ssms.logpdf(P_REF, 1, 0.29) == -np.inf
    np.testing.assert_array_equal(
        ssms.pdf(P_REF, 2, np.array([0.1, 0.3])), [0.0, 0.0])


def test_pdf_matches_simulation_oracle():
    g = _golden()
    ref = g["pdf_choice1"]
    val = ssms.pdf(P_REF, 1, ref["t"])
    assert abs(val - ref["value"]) / ref["value"] <= 0.02


def test_logpdf_matches_log_of_pdf():
    t = np.linspace(0.31, 3.0, 40)
    for c in (1, 2):
        d = ssms.pdf(P_REF, c, t)
        lp = ssms.logpdf(P_REF, c, t)
        np.testing.assert_allclose(lp, np.log(d), rtol=1e-10)


def test_pdf_rejects_bad_choice():
    with pytest.raises(ValueError):
        ssms.pdf(P_REF, 3, 0.5)
    with pytest.raises(ValueError):
        ssms.logpdf(P_REF, 0, 0.5)


# -------------------------------------------------------------------- cdf

def test_cdf_zero_at_tau_and_monotone():
    assert ssms.cdf(P_REF, 1, P_REF.tau) == 0.0
    t = np.linspace(0.25, 4.0, 200)
    f = ssms.cdf(P_REF, 1, t)
    assert (np.diff(f) >= -1e-12).all()
    assert f[0] == 0.0


def test_cdf_limit_is_choice_prob():
    for c in (1, 2):
        assert ssms.cdf(P_REF, c, P_REF.tau + 50.0) == pytest.approx(
            ssms.choice_prob(P_REF, c), abs=1e-6)


def test_cdf_vector_agrees_with_scalar_quadrature():
    ts = np.array([0.35, 0.5, 0.8, 1.4, 2.5])
    vec = ssms.cdf(P_REF, 1, ts)
    scal = np.array([ssms.cdf(P_REF, 1, float(t)) for t in ts])
    np.testing.assert_allclose(vec, scal, atol=1e-9)


def test_cdf_matches_simulation_oracle():
    g = _golden()
    ref = g["cdf_choice1"]
    assert abs(ssms.cdf(P_REF, 1, ref["t"]) - ref["value"]) <= 0.005


# ------------------------------------------------------------ choice prob

def test_choice_prob_driftless():
    assert ssms.choice_prob(
        DDMParams(nu=0.0, alpha=1.0, tau=0.3, z=0.5), 1) == 0.5
    assert ssms.choice_prob(
        DDMParams(nu=0.0, alpha=1.0, tau=0.3, z=0.3), 1) == pytest.approx(0.3)


def test_choice_prob_reference_value():
    up = ssms.choice_prob(P_REF, 1)
    assert up == pytest.approx(P_UP_REF, abs=5e-4)
    assert up + ssms.choice_prob(P_REF, 2) == pytest.approx(1.0, abs=1e-12)


def test_choice_prob_matches_simulation():
    g = _golden()
    assert ssms.choice_prob(P_REF, 1) == pytest.approx(
        g["frac_choice1_full"], abs=0.004)


def test_choice_prob_extreme_drift_does_not_overflow():
    p = DDMParams(nu=-500.0, alpha=1.0, tau=0.3, z=0.5)
    up = ssms.choice_prob(p, 1)
    assert 0.0 <= up < 1e-100
    assert ssms.choice_prob(p, 2) == pytest.approx(1.0)


# ------------------------------------------------------------- invariants

def test_reflection_symmetry_pointwise():
    rng = np.random.default_rng(3)
    t = np.linspace(0.31, 2.5, 20)
    for _ in range(10):
        nu = rng.normal(0, 2)
        alpha = rng.uniform(0.5, 2.0)
        z = rng.uniform(0.15, 0.85)
        a = ssms.pdf(DDMParams(nu=nu, alpha=alpha, tau=0.3, z=z), 1, t)
        b = ssms.pdf(DDMParams(nu=-nu, alpha=alpha, tau=0.3, z=1.0 - z), 2, t)
        np.testing.assert_allclose(a, b, rtol=0, atol=1e-12)


def test_shift_equivariance_exact():
    # dyadic times make the support shift exact in floating point
    p0 = DDMParams(nu=1.0, alpha=0.8, tau=0.25, z=0.5)
    p1 = DDMParams(nu=1.0, alpha=0.8, tau=0.75, z=0.5)
    t = np.array([0.5, 0.75, 1.25, 2.0])
    np.testing.assert_array_equal(ssms.pdf(p0, 1, t), ssms.pdf(p1, 1, t + 0.5))


def test_shift_equivariance_generic():
    c = 0.137
    p1 = DDMParams(nu=1.0, alpha=0.8, tau=P_REF.tau + c, z=0.5)
    t = np.linspace(0.35, 2.0, 25)
    np.testing.assert_allclose(ssms.pdf(P_REF, 2, t),
                               ssms.pdf(p1, 2, t + c), rtol=1e-11)


def test_dual_series_agreement_on_crossover_band():
    t_norm = np.linspace(0.05, 5.0, 60)
    for w in (0.2, 0.5, 0.8):
        n_s = int(_n_terms_small(t_norm, ddm.SERIES_EPS).max())
        n_l = int(_n_terms_large(t_norm, ddm.SERIES_EPS).max())
        val_s, sign_s = _log_fnorm_small(t_norm, w, n_s)
        val_l, sign_l = _log_fnorm_large(t_norm, w, n_l)
        f_s = np.where(sign_s > 0, np.exp(val_s), 0.0)
        f_l = np.where(sign_l > 0, np.exp(val_l), 0.0)
        assert np.max(np.abs(f_s - f_l)) <= 1e-9


def test_density_survives_extreme_scales():
    # large boundary and long times underflow a naive implementation
    p = DDMParams(nu=0.5, alpha=6.0, tau=0.0, z=0.5)
    lp = ssms.logpdf(p, 1, np.array([0.5, 10.0, 200.0]))
    assert np.isfinite(lp).all()
    assert (lp < 0).all()


def test_sampler_density_ks(ds_ref):
    for c in (1, 2):
        assert ks_conditional(ds_ref, P_REF, c) <= 0.02


# ------------------------------------------------------------------ trace

def test_trace_initial_point_and_exit():
    tr = ssms.trace(P_REF, seed=11)
    assert tr.paths.shape[0] == 1
    assert tr.paths[0, 0] == P_REF.z * P_REF.alpha
    assert (np.diff(tr.t) > 0).all()
    assert tr.t[0] == P_REF.tau
    assert tr.crossing_time == tr.t[-1]
    np.testing.assert_array_equal(tr.thresholds, [P_REF.alpha, 0.0])
    end = tr.paths[0, -1]
    if tr.winner == 1:
        assert end >= P_REF.alpha - 1e-12
    else:
        assert end <= 1e-12
    # interior stays inside the open corridor
    assert (tr.paths[0, :-1] > 0).all()
    assert (tr.paths[0, :-1] < P_REF.alpha).all()


def test_trace_winner_frequency_matches_choice_prob():
    wins = sum(ddm.trace(P_REF, dt=1e-3, seed=s).winner == 1
               for s in range(10_000))
    assert abs(wins / 10_000 - P_UP_REF) <= 0.02


def test_trace_step_cap():
    with pytest.raises(RuntimeError):
        ddm.trace(P_REF, dt=1e-4, seed=0, max_steps=10)

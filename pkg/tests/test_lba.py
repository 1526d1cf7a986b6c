"""Linear ballistic accumulator: exact sampler, race density, traces."""

import numpy as np
import pytest
from scipy.stats import norm

import ssms
from ssms import LBAParams
from ssms import lba
from ssms.lba import DegenerateDriftWarning, _node_pdf, _node_survival

from _testutil import ks_conditional, total_mass

P_REF = LBAParams(nu=(3.0, 2.0), A=0.8, k=0.2, tau=0.3)


# ---------------------------------------------------------------- sampler

def test_sample_reference_setup():
    ds = ssms.sample(P_REF, 100, seed=104)
    assert len(ds) == 100
    assert set(np.unique(ds.choice)) <= {1, 2}
    assert (ds.rt > P_REF.tau).all()


def test_sample_is_deterministic():
    a = ssms.sample(P_REF, 400, seed=8)
    b = ssms.sample(P_REF, 400, seed=8)
    assert a == b
    assert a != ssms.sample(P_REF, 400, seed=9)


def test_exchangeable_accumulators_split_evenly():
    p = LBAParams(nu=(2.0, 2.0), A=1.0, k=0.5, tau=0.3)
    # Phi(-2)^2 = 5.2e-4 exceeds the degenerate-mass warning threshold
    with pytest.warns(DegenerateDriftWarning):
        ds = ssms.sample(p, 100_000, seed=2)
    assert abs(np.mean(ds.choice == 1) - 0.5) <= 0.005


def test_fraction_matches_density_integral():
    ds = ssms.sample(P_REF, 1_000_000, seed=3)
    assert abs(np.mean(ds.choice == 1) - ssms.choice_prob(P_REF, 1)) <= 0.003


def test_sample_warns_on_degenerate_drift_mass():
    p = LBAParams(nu=(-1.0, -1.0), A=0.8, k=0.2, tau=0.3)
    with pytest.warns(DegenerateDriftWarning):
        ds = ssms.sample(p, 200, seed=4)
    # resampling still yields finite trials
    assert len(ds) == 200
    assert np.isfinite(ds.rt).all()


def test_sample_resample_cap_errors():
    p = LBAParams(nu=(-9.0, -9.0), A=0.8, k=0.2, tau=0.3)
    with pytest.warns(DegenerateDriftWarning):
        with pytest.raises(RuntimeError, match="all-negative"):
            ssms.sample(p, 5, seed=4)


# ---------------------------------------------------------------- density

def test_pdf_normalizes_to_finishing_mass():
    assert total_mass(P_REF, P_REF.tau + 30.0) == pytest.approx(1.0, abs=1e-3)
    # the missing mass is exactly the all-negative-drift probability
    miss = float(np.prod(norm.cdf(-np.array(P_REF.nu) / P_REF.sigma)))
    assert miss < 1e-4


def test_pdf_zero_before_tau():
    assert ssms.pdf(P_REF, 1, 0.25) == 0.0
    assert ssms.pdf(P_REF, 1, P_REF.tau) == 0.0
    assert ssms.logpdf(P_REF, 1, 0.25) == -np.inf


def test_pdf_matches_simulation_oracle():
    # finite difference of the choice-1 empirical CDF, 1e7 exact trials
    ds = ssms.sample(P_REF, 10_000_000, seed=46)
    h = 0.01
    t0 = 0.6
    n_lo = np.sum((ds.choice == 1) & (ds.rt <= t0 - h))
    n_hi = np.sum((ds.choice == 1) & (ds.rt <= t0 + h))
    fd = (n_hi - n_lo) / (2.0 * h) / len(ds)
    val = ssms.pdf(P_REF, 1, t0)
    assert abs(val - fd) / fd <= 0.02


def test_logpdf_matches_log_of_pdf():
    t = np.linspace(0.35, 2.0, 30)
    for c in (1, 2):
        np.testing.assert_allclose(ssms.logpdf(P_REF, c, t),
                                   np.log(ssms.pdf(P_REF, c, t)), rtol=1e-10)


def test_pdf_rejects_bad_choice():
    with pytest.raises(ValueError):
        ssms.pdf(P_REF, 3, 0.5)
    with pytest.raises(ValueError):
        ssms.pdf(P_REF, 0, 0.5)


def test_permutation_equivariance():
    nu = (3.0, 2.0, 1.0)
    perm = (2, 0, 1)  # new index i holds old accumulator perm[i]
    p = LBAParams(nu=nu, A=0.8, k=0.2, tau=0.3)
    q = LBAParams(nu=tuple(nu[j] for j in perm), A=0.8, k=0.2, tau=0.3)
    t = np.linspace(0.31, 2.5, 40)
    for i in range(3):
        np.testing.assert_allclose(ssms.pdf(q, i + 1, t),
                                   ssms.pdf(p, perm[i] + 1, t),
                                   rtol=0, atol=1e-12)


def test_node_cdf_monotone_in_unit_interval():
    s = np.linspace(1e-6, 50.0, 2000)
    for nu_j in (3.0, 2.0, -0.5):
        surv = _node_survival(s, nu_j, P_REF.A, P_REF.b, P_REF.sigma)
        f = 1.0 - surv
        assert (f >= -1e-12).all() and (f <= 1.0 + 1e-12).all()
        assert (np.diff(f) >= -1e-12).all()
    # unfinished mass converges to the negative-drift probability;
    # the finite-s correction decays like b/s * phi(nu/sigma)
    tail = _node_survival(np.array([1e7]), 2.0, P_REF.A, P_REF.b, P_REF.sigma)
    assert tail[0] == pytest.approx(norm.cdf(-2.0), abs=1e-8)


def test_sampler_density_ks():
    ds = ssms.sample(P_REF, 100_000, seed=44)
    for c in (1, 2):
        assert ks_conditional(ds, P_REF, c) <= 0.01


# ------------------------------------------------------------------ trace

def test_trace_paths_are_affine():
    tr = ssms.trace(P_REF, seed=7)
    assert tr.paths.shape[0] == 2
    second_diff = np.diff(tr.paths, 2, axis=1)
    assert np.abs(second_diff).max() <= 1e-12
    np.testing.assert_array_equal(tr.thresholds, [P_REF.b, P_REF.b])
    assert tr.paths[tr.winner - 1, -1] >= P_REF.b - 1e-12
    assert (np.diff(tr.t) > 0).all()
    assert tr.t[0] == P_REF.tau
    assert tr.crossing_time == tr.t[-1]
    # start points live inside the start box
    assert (tr.paths[:, 0] >= 0).all() and (tr.paths[:, 0] <= P_REF.A).all()


def test_trace_winner_frequency_matches_choice_prob():
    wins = sum(lba.trace(P_REF, seed=s).winner == 1 for s in range(10_000))
    assert abs(wins / 10_000 - ssms.choice_prob(P_REF, 1)) <= 0.02

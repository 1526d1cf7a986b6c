"""Transforms, priors, likelihood summation, MLE and MCMC recovery, diagnostics."""

import functools
import math
import operator

import numpy as np
import pytest
from scipy import stats as sps

import ssms
from ssms import DDMParams, LBAParams
from ssms.core import Dataset
from ssms.inference import (Chains, Normal, PriorSpec, TruncatedNormal,
                            Uniform, dataset_loglik, default_priors,
                            ess_bulk, fit_mle, pointwise_loglik,
                            prior_from_dict, read_chains, read_fit_result,
                            run_chains, sample_posterior, split_rhat,
                            summarystats, transforms_for, write_chains,
                            write_fit_result)
from ssms.models import params_to_vector

DDM_REF = DDMParams(nu=1.0, alpha=0.8, tau=0.3, z=0.5)
LBA_REF = LBAParams(nu=(3.0, 2.0), A=0.8, k=0.2, tau=0.3)


@pytest.fixture(scope="module")
def ddm_ds():
    return ssms.sample(DDM_REF, 10_000, seed=104)


@pytest.fixture(scope="module")
def lba_ds100():
    return ssms.sample(LBA_REF, 100, seed=104)


# ---------------------------------------------------------------- transforms

@pytest.mark.parametrize("kind,vecs", [
    ("ddm", [[1.0, 0.8, 0.3, 0.5], [-2.0, 3.1, 0.01, 0.95]]),
    ("lba", [[3.0, 2.0, 0.8, 0.2, 0.3], [-1.0, 0.5, 2.5, 1.0, 0.49]]),
    ("rdm", [[2.0, 1.0, 0.5, 1.0, 0.3], [0.1, 4.0, 2.0, 0.05, 0.01]]),
])
def test_transform_round_trip(kind, vecs):
    tf = transforms_for(kind, 2, 0.5)
    for x in vecs:
        x = np.asarray(x)
        back = tf.to_natural(tf.to_unconstrained(x))
        assert np.max(np.abs(back - x)) <= 1e-12


def test_transform_round_trip_random_vectors():
    rng = np.random.default_rng(0)
    tf = transforms_for("lba", 2, 1.0)
    for _ in range(100):
        x = np.array([rng.normal(), rng.normal(), rng.uniform(0.01, 5.0),
                      rng.uniform(0.01, 5.0), rng.uniform(0.001, 0.999)])
        back = tf.to_natural(tf.to_unconstrained(x))
        assert np.max(np.abs(back - x)) <= 1e-12


def test_transform_log_jacobian_matches_finite_difference():
    tf = transforms_for("ddm", 2, 0.5)
    y = np.array([0.3, -0.2, 0.7, -1.1])
    h = 1e-6
    total = 0.0
    for j, part in enumerate(tf.parts):
        d = (part.to_natural(y[j] + h) - part.to_natural(y[j] - h)) / (2 * h)
        total += math.log(abs(d)) if d != 0 else 0.0
    assert tf.log_jacobian(y) == pytest.approx(total, abs=1e-6)


def test_transforms_require_finite_tau_bound():
    with pytest.raises(ValueError):
        transforms_for("ddm", 2, 0.0)
    with pytest.raises(ValueError):
        transforms_for("ddm", 2, math.inf)


# ------------------------------------------------------------------- priors

def test_default_lba_priors_structure():
    ds = Dataset(choice=[1, 2, 1], rt=[0.42, 0.9, 1.3])
    pri = default_priors("lba", ds)
    assert pri.names == ("nu[1]", "nu[2]", "A", "k", "tau")
    assert pri.priors[0] == Normal(0.0, 1.0)
    assert pri.priors[1] == Normal(0.0, 1.0)
    assert pri.priors[2] == TruncatedNormal(0.8, 0.4, 0.0)
    assert pri.priors[3] == TruncatedNormal(0.2, 0.2, 0.0)
    assert pri.priors[4] == Uniform(0.0, 0.42)


def test_default_priors_tau_bound_is_smallest_rt():
    ds = Dataset(choice=[1, 1], rt=[0.42, 0.77])
    for kind in ("ddm", "lba", "rdm"):
        pri = default_priors(kind, ds)
        tau = pri.priors[list(pri.names).index("tau")]
        assert tau == Uniform(0.0, 0.42)


def test_default_priors_reject_empty_dataset():
    empty = Dataset(choice=np.array([], dtype=int), rt=np.array([]))
    with pytest.raises(ValueError, match="empty"):
        default_priors("lba", empty)


def test_lba_prior_logpdf_componentwise():
    # independent evaluation of each univariate density via scipy.stats
    ds = Dataset(choice=[1, 2], rt=[0.42, 0.9])
    pri = default_priors("lba", ds)
    x = np.array([0.0, 0.0, 0.8, 0.2, 0.21])
    expected = (sps.norm.logpdf(0.0) * 2
                + sps.truncnorm.logpdf(0.8, -2.0, np.inf, loc=0.8, scale=0.4)
                + sps.truncnorm.logpdf(0.2, -1.0, np.inf, loc=0.2, scale=0.2)
                + sps.uniform.logpdf(0.21, 0.0, 0.42))
    assert pri.logpdf(x) == pytest.approx(expected, abs=1e-12)


def test_prior_logpdf_out_of_support():
    pri = PriorSpec(names=("a",), priors=(Uniform(0.0, 1.0),))
    assert pri.logpdf([2.0]) == -math.inf


def test_truncated_normal_matches_scipy():
    tn = TruncatedNormal(0.8, 0.4, 0.0, 2.0)
    for x in (0.1, 0.8, 1.9):
        ref = sps.truncnorm.logpdf(x, (0.0 - 0.8) / 0.4, (2.0 - 0.8) / 0.4,
                                   loc=0.8, scale=0.4)
        assert tn.logpdf(x) == pytest.approx(ref, abs=1e-10)
    assert tn.logpdf(-0.1) == -math.inf
    assert tn.logpdf(2.1) == -math.inf


def test_prior_samples_respect_support():
    rng = np.random.default_rng(3)
    tn = TruncatedNormal(0.2, 0.2, 0.0)
    draws = np.array([tn.sample(rng) for _ in range(2000)])
    assert (draws > 0.0).all()
    u = Uniform(0.1, 0.4)
    draws = np.array([u.sample(rng) for _ in range(2000)])
    assert (draws >= 0.1).all() and (draws <= 0.4).all()


def test_prior_dict_round_trip():
    ds = Dataset(choice=[1, 2], rt=[0.42, 0.9])
    for kind in ("ddm", "lba", "rdm"):
        pri = default_priors(kind, ds)
        again = PriorSpec.from_dict(pri.to_dict())
        assert again == pri


def test_prior_from_dict_rejects_unknown_type():
    with pytest.raises(ValueError, match="unknown prior type"):
        prior_from_dict({"type": "cauchy"})


# --------------------------------------------------------------- likelihood

def test_loglik_empty_dataset_is_zero():
    empty = Dataset(choice=np.array([], dtype=int), rt=np.array([]))
    assert dataset_loglik(DDM_REF, empty) == 0.0


def test_loglik_single_trial_equals_pointwise():
    ds = Dataset(choice=[1], rt=[0.7])
    assert dataset_loglik(DDM_REF, ds) == ssms.logpdf(DDM_REF, 1, 0.7)


def test_loglik_summation_order_agreement(ddm_ds):
    # fsum total vs left fold, pairwise tree, and naive numpy sum
    vec = pointwise_loglik(DDM_REF, ddm_ds)
    total = dataset_loglik(DDM_REF, ddm_ds)

    left = functools.reduce(operator.add, vec.tolist())

    def tree(seg):
        if len(seg) == 1:
            return seg[0]
        mid = len(seg) // 2
        return tree(seg[:mid]) + tree(seg[mid:])

    for other in (left, tree(vec.tolist()), float(np.sum(vec))):
        assert abs(total - other) <= 1e-9 * abs(total)


def test_loglik_additivity(ddm_ds):
    half = len(ddm_ds) // 2
    a = Dataset(choice=ddm_ds.choice[:half], rt=ddm_ds.rt[:half])
    b = Dataset(choice=ddm_ds.choice[half:], rt=ddm_ds.rt[half:])
    whole = dataset_loglik(DDM_REF, ddm_ds)
    split = dataset_loglik(DDM_REF, a) + dataset_loglik(DDM_REF, b)
    assert abs(whole - split) <= 1e-9 * abs(whole)


def test_pointwise_sums_to_total(ddm_ds):
    vec = pointwise_loglik(DDM_REF, ddm_ds)
    assert len(vec) == len(ddm_ds)
    assert math.fsum(vec) == pytest.approx(dataset_loglik(DDM_REF, ddm_ds),
                                           rel=1e-9)


def test_loglik_rt_below_tau_is_neg_inf():
    ds = Dataset(choice=[1, 1], rt=[0.7, 0.2])  # 0.2 < tau = 0.3
    assert dataset_loglik(DDM_REF, ds) == -math.inf


def test_loglik_rejects_out_of_range_choice():
    ds = Dataset(choice=[3], rt=[0.7])
    with pytest.raises(ValueError):
        dataset_loglik(DDM_REF, ds)


# ---------------------------------------------------------------------- mle

def test_fit_mle_never_ends_below_its_start():
    ds = ssms.sample(DDM_REF, 2_000, seed=42)
    fr = fit_mle("ddm", ds, params_to_vector(DDM_REF))
    assert fr.converged
    assert fr.loglik >= dataset_loglik(DDM_REF, ds) - 1e-6


def test_fit_mle_simplex_scale_invariance():
    ds = ssms.sample(DDM_REF, 2_000, seed=42)
    a = fit_mle("ddm", ds, params_to_vector(DDM_REF), simplex_scale=0.1)
    b = fit_mle("ddm", ds, params_to_vector(DDM_REF), simplex_scale=0.3)
    assert abs(a.loglik - b.loglik) <= 1e-6


def test_fit_mle_lba_drift_recovery():
    ds = ssms.sample(LBA_REF, 10_000, seed=21)
    fr = fit_mle("lba", ds, params_to_vector(LBA_REF))
    assert fr.converged
    assert abs(fr.estimate[0] - 3.0) <= 0.15
    assert abs(fr.estimate[1] - 2.0) <= 0.15


def test_fit_mle_accepts_params_object_as_init():
    ds = ssms.sample(DDM_REF, 500, seed=1)
    fr = fit_mle("ddm", ds, DDM_REF)
    assert fr.converged
    assert fr.names == ("nu", "alpha", "tau", "z")


def test_fit_mle_rejects_infeasible_start():
    # tau above the smallest rt gives a -inf likelihood at init
    ds = Dataset(choice=[1, 2], rt=[0.5, 0.9])
    with pytest.raises(ValueError, match="feasible|positive density"):
        fit_mle("ddm", ds, np.array([1.0, 0.8, 0.6, 0.5]))


def test_fit_mle_rejects_empty_dataset():
    empty = Dataset(choice=np.array([], dtype=int), rt=np.array([]))
    with pytest.raises(ValueError):
        fit_mle("ddm", empty, params_to_vector(DDM_REF))


def test_fit_result_json_round_trip(tmp_path):
    ds = ssms.sample(DDM_REF, 500, seed=1)
    fr = fit_mle("ddm", ds, params_to_vector(DDM_REF))
    path = tmp_path / "fit.json"
    write_fit_result(fr, path)
    again = read_fit_result(path)
    assert again.kind == fr.kind
    assert again.names == fr.names
    assert np.array_equal(again.estimate, fr.estimate)
    assert again.loglik == fr.loglik
    assert again.converged == fr.converged
    assert again.n_evals == fr.n_evals


# ------------------------------------------------------------- mcmc engine

def test_constant_target_accepts_everything():
    # symmetric proposal and flat target: acceptance ratio is always 1
    draws, rates = run_chains(lambda y: 0.0, 2, 2, 200, 300, seed=3,
                              init_fn=lambda r: r.standard_normal(2))
    assert rates == (1.0, 1.0)
    assert draws.shape == (2, 500, 2)


def test_engine_errors_when_no_finite_start():
    with pytest.raises(RuntimeError, match="finite"):
        run_chains(lambda y: -math.inf, 2, 1, 50, 50, seed=0,
                   init_fn=lambda r: r.standard_normal(2),
                   max_init_tries=10)


def test_engine_deterministic_across_thread_count():
    def logpost(y):
        return -0.5 * float(y @ y)

    def init(rng):
        return rng.standard_normal(3)

    a, ra = run_chains(logpost, 3, 4, 200, 200, seed=5, init_fn=init)
    b, rb = run_chains(logpost, 3, 4, 200, 200, seed=5, init_fn=init,
                       n_threads=4)
    assert np.array_equal(a, b)
    assert ra == rb


def test_conjugate_normal_normal_posterior():
    # Normal prior + Normal likelihood has a closed-form posterior; the
    # engine must land on it within Monte Carlo error
    mu0, tau0, sigma = 0.0, 2.0, 1.5
    rng = np.random.default_rng(7)
    y = rng.normal(1.0, sigma, size=20)
    prec = 1.0 / tau0**2 + y.size / sigma**2
    post_mean = (mu0 / tau0**2 + y.sum() / sigma**2) / prec
    post_var = 1.0 / prec

    def logpost(th):
        t = float(th[0])
        return (-0.5 * ((t - mu0) / tau0) ** 2
                - 0.5 * np.sum((y - t) ** 2) / sigma**2)

    draws, _ = run_chains(logpost, 1, 4, 500, 2000, seed=1,
                          init_fn=lambda r: np.array([r.normal(mu0, tau0)]))
    post = draws[:, 500:, 0]
    ess = ess_bulk(post)
    assert ess > 400
    se_mean = post.std(ddof=1) / math.sqrt(ess)
    se_var = post_var * math.sqrt(2.0 / ess)
    assert abs(post.mean() - post_mean) <= 3 * se_mean
    assert abs(post.var(ddof=1) - post_var) <= 3 * se_var


def test_run_chains_validates_counts():
    init = lambda r: r.standard_normal(1)
    with pytest.raises(ValueError):
        run_chains(lambda y: 0.0, 1, 0, 10, 10, seed=0, init_fn=init)
    with pytest.raises(ValueError):
        run_chains(lambda y: 0.0, 1, 1, -1, 10, seed=0, init_fn=init)
    with pytest.raises(ValueError):
        run_chains(lambda y: 0.0, 1, 1, 10, 0, seed=0, init_fn=init)
    with pytest.raises(ValueError):
        run_chains(lambda y: 0.0, 1, 1, 10, 10, seed=0, init_fn=init,
                   thin=0)


# --------------------------------------------------------- sample_posterior

def test_sample_posterior_bit_identical(lba_ds100):
    kw = dict(n_chains=2, n_warmup=150, n_samples=100, seed=4)
    a = sample_posterior("lba", lba_ds100, **kw)
    b = sample_posterior("lba", lba_ds100, **kw)
    assert np.array_equal(a.draws, b.draws)
    assert a.accept_rate == b.accept_rate
    assert a.param_names == b.param_names
    c = sample_posterior("lba", lba_ds100, n_threads=2, **kw)
    assert np.array_equal(a.draws, c.draws)


def test_sample_posterior_draws_satisfy_constraints(lba_ds100):
    ch = sample_posterior("lba", lba_ds100, n_chains=2, n_warmup=150,
                          n_samples=100, seed=4)
    assert ch.draws.shape == (2, 250, 5)
    assert ch.posterior.shape == (2, 100, 5)
    assert (ch.draws[:, :, 2] > 0).all()          # A
    assert (ch.draws[:, :, 3] > 0).all()          # k
    assert (ch.draws[:, :, 4] > 0).all()          # tau
    assert (ch.draws[:, :, 4] < lba_ds100.rt.min()).all()


def test_sample_posterior_empty_data_recovers_prior():
    # likelihood == 1, so the chain must reproduce the prior itself
    pri = PriorSpec(
        names=("nu[1]", "nu[2]", "A", "k", "tau"),
        priors=(Normal(0.0, 1.0), Normal(0.0, 1.0),
                TruncatedNormal(0.8, 0.4, 0.0),
                TruncatedNormal(0.2, 0.2, 0.0), Uniform(0.0, 0.5)))
    empty = Dataset(choice=np.array([], dtype=int), rt=np.array([]))
    ch = sample_posterior("lba", empty, priors=pri, n_chains=4,
                          n_warmup=400, n_samples=800, seed=6, thin=2)
    stats = summarystats(ch)
    rng = np.random.default_rng(123)
    ref = np.array([pri.sample(rng) for _ in range(200_000)])
    for j, name in enumerate(ch.param_names):
        s = stats[name]
        se = math.hypot(s["sd"] / math.sqrt(s["ess"]),
                        ref[:, j].std(ddof=1) / math.sqrt(ref.shape[0]))
        assert abs(s["mean"] - ref[:, j].mean()) <= 3 * se, name


def test_sample_posterior_empty_data_needs_bounded_tau_prior():
    pri = PriorSpec(
        names=("nu[1]", "nu[2]", "A", "k", "tau"),
        priors=(Normal(0.0, 1.0), Normal(0.0, 1.0),
                TruncatedNormal(0.8, 0.4, 0.0),
                TruncatedNormal(0.2, 0.2, 0.0),
                TruncatedNormal(0.2, 0.2, 0.0)))
    empty = Dataset(choice=np.array([], dtype=int), rt=np.array([]))
    with pytest.raises(ValueError, match="finite"):
        sample_posterior("lba", empty, priors=pri, n_chains=1,
                         n_warmup=10, n_samples=10, seed=0)


def test_sample_posterior_rejects_mismatched_prior_names(lba_ds100):
    pri = PriorSpec(names=("a", "b"), priors=(Normal(0, 1), Normal(0, 1)))
    with pytest.raises(ValueError, match="do not match"):
        sample_posterior("lba", lba_ds100, priors=pri, n_chains=1,
                         n_warmup=10, n_samples=10, seed=0)


# ------------------------------------------------------------- diagnostics

def test_summarystats_iid_chains():
    rng = np.random.default_rng(0)
    ch = Chains(draws=rng.standard_normal((4, 1000, 1)), warmup=0,
                param_names=("x",), seed=0, accept_rate=(1.0,) * 4)
    s = summarystats(ch)["x"]
    assert 0.999 <= s["rhat"] <= 1.01
    assert s["ess"] >= 3000


def test_rhat_flags_disjoint_chains():
    const = np.array([[0.0] * 8, [1.0] * 8])
    assert split_rhat(const) > 1.1


def test_summarystats_mean_sd_definitions():
    rng = np.random.default_rng(5)
    draws = rng.normal(2.0, 3.0, size=(2, 50, 2))
    ch = Chains(draws=draws, warmup=10, param_names=("a", "b"), seed=0,
                accept_rate=(0.3, 0.3))
    stats = summarystats(ch)
    for j, name in enumerate(("a", "b")):
        d = draws[:, 10:, j]
        assert stats[name]["mean"] == pytest.approx(d.mean(), abs=1e-12)
        assert stats[name]["sd"] == pytest.approx(d.std(ddof=1), abs=1e-12)
        assert stats[name]["mcse"] == pytest.approx(
            stats[name]["sd"] / math.sqrt(stats[name]["ess"]), rel=1e-12)


def test_summarystats_needs_four_post_warmup_draws():
    ch = Chains(draws=np.zeros((2, 10, 1)), warmup=7, param_names=("x",),
                seed=0, accept_rate=(0.2, 0.2))
    with pytest.raises(ValueError, match="4"):
        summarystats(ch)


def test_ess_decreases_with_autocorrelation():
    rng = np.random.default_rng(8)
    white = rng.standard_normal((4, 1000))
    walk = np.empty_like(white)
    walk[:, 0] = white[:, 0]
    for t in range(1, 1000):
        walk[:, t] = 0.95 * walk[:, t - 1] + white[:, t]
    assert ess_bulk(walk) < 0.2 * ess_bulk(white)


def test_split_rhat_input_validation():
    with pytest.raises(ValueError):
        split_rhat(np.zeros(10))
    with pytest.raises(ValueError):
        split_rhat(np.zeros((2, 3)))


# ------------------------------------------------------------ serialization

def test_chains_csv_round_trip(tmp_path, lba_ds100):
    ch = sample_posterior("lba", lba_ds100, n_chains=2, n_warmup=150,
                          n_samples=100, seed=4)
    path = tmp_path / "chains.csv"
    write_chains(ch, path)
    assert (tmp_path / "chains.json").exists()
    again = read_chains(path)
    assert np.array_equal(again.draws, ch.draws)
    assert again.warmup == ch.warmup
    assert again.seed == ch.seed
    assert again.thin == ch.thin
    assert again.param_names == ch.param_names
    assert again.accept_rate == ch.accept_rate
    assert again.priors == ch.priors


def test_chains_csv_header_mismatch_rejected(tmp_path, lba_ds100):
    ch = sample_posterior("lba", lba_ds100, n_chains=1, n_warmup=50,
                          n_samples=50, seed=4)
    path = tmp_path / "chains.csv"
    write_chains(ch, path)
    body = path.read_text().splitlines()
    body[0] = body[0].replace("tau", "theta")
    path.write_text("\n".join(body) + "\n")
    with pytest.raises(ValueError, match="header"):
        read_chains(path)

"""Convergence diagnostics: rank-normalized split-Rhat, Geyer ESS, MCSE.

Rhat is the rank-normalized split version (bulk statistic combined with a
tail statistic on folded draws).  The effective sample size truncates the
combined-chain autocorrelation sum with Geyer's initial positive and
monotone sequence rules, evaluated on rank-normalized split chains.
Draw matrices are (chain, iteration).
"""

import math

import numpy as np
from scipy.fft import next_fast_len
from scipy.stats import norm, rankdata

__all__ = ["split_rhat", "ess_bulk", "summarystats"]


def _z_scale(a):
    """Map values to normal scores by rank across the whole array."""
    r = rankdata(a, method="average").reshape(a.shape)
    return norm.ppf((r - 0.5) / a.size)


def _split(draws):
    """Split each chain in half; drops the middle draw when odd."""
    half = draws.shape[1] // 2
    return np.vstack((draws[:, :half], draws[:, -half:]))


def _rhat(draws):
    """Plain potential scale reduction on a (chain, draw) matrix."""
    n = draws.shape[1]
    within = np.mean(np.var(draws, axis=1, ddof=1))
    between = n * np.var(np.mean(draws, axis=1), ddof=1)
    if within == 0.0:
        return math.inf if between > 0 else math.nan
    return math.sqrt((between / within + n - 1) / n)


def split_rhat(draws):
    """Rank-normalized split-Rhat: max of the bulk and tail statistics."""
    draws = np.asarray(draws, dtype=np.float64)
    if draws.ndim != 2:
        raise ValueError("draws must be a (chain, iteration) matrix")
    if draws.shape[1] < 4:
        raise ValueError("need at least 4 draws per chain")
    bulk = _rhat(_z_scale(_split(draws)))
    folded = np.abs(draws - np.median(draws))
    tail = _rhat(_z_scale(_split(folded)))
    if math.isnan(bulk):
        return tail
    if math.isnan(tail):
        return bulk
    return max(bulk, tail)


def _autocov(draws):
    """Per-chain autocovariance by FFT, biased (divided by n)."""
    n = draws.shape[1]
    m = next_fast_len(2 * n)
    centered = draws - draws.mean(axis=1, keepdims=True)
    f = np.fft.rfft(centered, m, axis=1)
    acov = np.fft.irfft(f * np.conj(f), m, axis=1)[:, :n].real
    return acov / n


def _ess(draws):
    """Geyer truncated-autocorrelation ESS on a (chain, draw) matrix."""
    n_chain, n_draw = draws.shape
    if np.ptp(draws) == 0.0:
        return float(draws.size)
    acov = _autocov(draws)
    chain_mean = draws.mean(axis=1)
    mean_var = np.mean(acov[:, 0]) * n_draw / (n_draw - 1.0)
    var_plus = mean_var * (n_draw - 1.0) / n_draw
    if n_chain > 1:
        var_plus += np.var(chain_mean, ddof=1)

    rho_hat = np.zeros(n_draw)
    rho_hat[0] = 1.0
    rho_even = 1.0
    rho_odd = 1.0 - (mean_var - np.mean(acov[:, 1])) / var_plus
    rho_hat[1] = rho_odd

    # initial positive sequence: keep lag pairs while their sum stays >= 0
    t = 1
    while t < (n_draw - 2) and (rho_even + rho_odd) >= 0.0:
        rho_even = 1.0 - (mean_var - np.mean(acov[:, t + 1])) / var_plus
        rho_odd = 1.0 - (mean_var - np.mean(acov[:, t + 2])) / var_plus
        if (rho_even + rho_odd) >= 0:
            rho_hat[t + 1] = rho_even
            rho_hat[t + 2] = rho_odd
        t += 2
    max_t = t

    # initial monotone sequence: pair sums must not increase
    t = 1
    while t <= max_t - 2:
        if (rho_hat[t + 1] + rho_hat[t + 2]) > (rho_hat[t - 1] + rho_hat[t]):
            rho_hat[t + 1] = (rho_hat[t - 1] + rho_hat[t]) / 2.0
            rho_hat[t + 2] = rho_hat[t + 1]
        t += 2

    if np.any(np.isnan(rho_hat)):
        return math.nan
    size = n_chain * n_draw
    tau_hat = -1.0 + 2.0 * float(np.sum(rho_hat[: max_t + 1]))
    tau_hat = max(tau_hat, 1.0 / math.log10(size))
    return size / tau_hat


def ess_bulk(draws):
    """Effective sample size on rank-normalized split chains."""
    draws = np.asarray(draws, dtype=np.float64)
    if draws.ndim != 2:
        raise ValueError("draws must be a (chain, iteration) matrix")
    if draws.shape[1] < 4:
        raise ValueError("need at least 4 draws per chain")
    return _ess(_z_scale(_split(draws)))


def summarystats(chains):
    """Per-parameter posterior summaries over post-warmup draws.

    Returns a dict name -> {mean, sd, mcse, ess, rhat}.
    """
    post = chains.posterior
    if post.shape[1] < 4:
        raise ValueError("need at least 4 post-warmup draws per chain")
    out = {}
    for j, name in enumerate(chains.param_names):
        d = post[:, :, j]
        mean = float(d.mean())
        sd = float(d.std(ddof=1))
        ess = float(ess_bulk(d))
        rhat = float(split_rhat(d))
        mcse = sd / math.sqrt(ess) if ess > 0 else math.nan
        out[name] = {"mean": mean, "sd": sd, "mcse": mcse,
                     "ess": ess, "rhat": rhat}
    return out

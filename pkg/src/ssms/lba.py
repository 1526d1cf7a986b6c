"""Linear ballistic accumulator: exact sampler, race densities, traces.

Each of the m accumulators starts at a uniform point on [0, A], accrues
evidence at a constant rate drawn once per trial from Normal(nu_i, sigma),
and responds when it reaches b = A + k.  The first accumulator to finish
gives the choice; rt = tau + finishing time.  Accumulation is deterministic
within a trial, so both the sampler and the joint density are exact.
"""

import math
import warnings

import numpy as np
from scipy.integrate import quad
from scipy.stats import norm

from .core import Dataset, Trace, seeded_rng, validate
from ._quadrature import cumulative_from_pdf

__all__ = ["sample", "pdf", "logpdf", "cdf", "choice_prob", "trace",
           "DegenerateDriftWarning"]

# below this decision time the Phi/phi arguments blow up; mass there is 0
_S_FLOOR = 1e-12


class DegenerateDriftWarning(UserWarning):
    """All-accumulator-negative drift mass is large enough to matter.

    The sampler redraws such trials while the analytic density leaves the
    missing mass unconditioned, so sampler and density disagree by
    P(all drifts <= 0).  Raised when that exceeds 1e-4.
    """


def _node_pdf(s, nu, A, b, sigma):
    """Start-point-integrated finishing-time density of one accumulator."""
    g = (b - A - s * nu) / (s * sigma)
    h = (b - s * nu) / (s * sigma)
    return (nu * (norm.cdf(h) - norm.cdf(g))
            + sigma * (norm.pdf(g) - norm.pdf(h))) / A


def _node_survival(s, nu, A, b, sigma):
    """P(accumulator unfinished at decision time s).

    1 - F written as the average of Phi over [g, h] (antiderivative
    M(x) = x Phi(x) + phi(x)); this keeps the value inside [0, 1] without
    clipping and tends to Phi(-nu/sigma), the never-finishing mass.
    """
    g = (b - A - s * nu) / (s * sigma)
    h = (b - s * nu) / (s * sigma)
    m_h = h * norm.cdf(h) + norm.pdf(h)
    m_g = g * norm.cdf(g) + norm.pdf(g)
    return (s * sigma / A) * (m_h - m_g)


def _check_choice(p, choice):
    if not 1 <= choice <= len(p.nu):
        raise ValueError(f"choice must be in 1..{len(p.nu)}")


def pdf(p, choice, t):
    """Defective race density: winner's density times rivals' survivals."""
    validate(p)
    _check_choice(p, choice)
    t = np.asarray(t, dtype=np.float64)
    scalar = t.ndim == 0
    s = np.atleast_1d(t) - p.tau
    out = np.zeros(s.shape)
    ok = s > _S_FLOOR
    if ok.any():
        sv = s[ok]
        val = _node_pdf(sv, p.nu[choice - 1], p.A, p.b, p.sigma)
        for j, nu_j in enumerate(p.nu):
            if j != choice - 1:
                val = val * _node_survival(sv, nu_j, p.A, p.b, p.sigma)
        out[ok] = np.maximum(val, 0.0)
    return float(out[0]) if scalar else out


def logpdf(p, choice, t):
    """Log of the defective race density; -inf where the density is 0."""
    d = pdf(p, choice, t)
    with np.errstate(divide="ignore"):
        out = np.log(d)
    return out


def cdf(p, choice, t):
    """Defective CDF P(choice, RT <= t) by quadrature of the race density."""
    validate(p)
    _check_choice(p, choice)
    if np.ndim(t) == 0:
        if t <= p.tau:
            return 0.0
        val, _ = quad(lambda u: pdf(p, choice, u), p.tau, t, limit=200)
        return min(max(val, 0.0), 1.0)
    return cumulative_from_pdf(lambda u: pdf(p, choice, u), p.tau,
                               np.asarray(t, dtype=np.float64))


def choice_prob(p, choice):
    """P(accumulator `choice` wins), by quadrature over all finite rts."""
    validate(p)
    _check_choice(p, choice)
    val, _ = quad(lambda u: pdf(p, choice, u), p.tau, np.inf, limit=200)
    return min(max(val, 0.0), 1.0)


def _all_negative_mass(p):
    return float(np.prod(norm.cdf(-np.asarray(p.nu) / p.sigma)))


def sample(p, n, seed, max_resample=1000):
    """Draw n trials exactly.

    Trials where every sampled drift is non-positive would never finish;
    they are redrawn wholesale (starts and drifts).  After ``max_resample``
    consecutive redraws of the same trial a RuntimeError flags the
    parameters as degenerate.
    """
    validate(p)
    if n < 1:
        raise ValueError("n must be >= 1")
    miss = _all_negative_mass(p)
    if miss > 1e-4:
        warnings.warn(
            f"P(all drifts <= 0) = {miss:.3g}; sampler resamples these "
            "trials but the analytic density keeps them as missing mass",
            DegenerateDriftWarning)
    rng = seeded_rng(seed)
    m = len(p.nu)
    nu = np.asarray(p.nu)
    a = rng.uniform(0.0, p.A, size=(n, m))
    d = rng.normal(nu, p.sigma, size=(n, m))
    bad = ~(d > 0.0).any(axis=1)
    rounds = 0
    while bad.any():
        rounds += 1
        if rounds > max_resample:
            raise RuntimeError(
                f"{max_resample} consecutive all-negative drift draws; "
                "parameters are degenerate")
        nb = int(bad.sum())
        a[bad] = rng.uniform(0.0, p.A, size=(nb, m))
        d[bad] = rng.normal(nu, p.sigma, size=(nb, m))
        bad[bad] = ~(d[bad] > 0.0).any(axis=1)
    with np.errstate(divide="ignore"):
        finish = np.where(d > 0.0, (p.b - a) / d, np.inf)
    choice = np.argmin(finish, axis=1) + 1
    rt = p.tau + finish.min(axis=1)
    meta = {"seed": int(seed), "spec": p, "note": "lba exact"}
    return Dataset(choice.astype(np.int64), rt, meta=meta)


def trace(p, seed, n_points=101):
    """One trial's straight-line evidence paths until the winner hits b.

    Paths are affine in t; the grid is uniform on [tau, crossing time] and
    the winner's final value is set to b exactly.
    """
    validate(p)
    rng = seeded_rng(seed)
    m = len(p.nu)
    nu = np.asarray(p.nu)
    for rounds in range(1000):
        a = rng.uniform(0.0, p.A, size=m)
        d = rng.normal(nu, p.sigma)
        if (d > 0.0).any():
            break
    else:
        raise RuntimeError("1000 consecutive all-negative drift draws")
    with np.errstate(divide="ignore"):
        finish = np.where(d > 0.0, (p.b - a) / d, np.inf)
    winner = int(np.argmin(finish))
    s_cross = float(finish[winner])
    s = np.linspace(0.0, s_cross, n_points)
    paths = a[:, None] + d[:, None] * s[None, :]
    paths[winner, -1] = p.b
    return Trace(t=p.tau + s, paths=paths,
                 thresholds=np.full(m, p.b), winner=winner + 1,
                 crossing_time=p.tau + s_cross)


def _missing_mass(p):
    # exposed for tests: analytic sampler/density mismatch
    return _all_negative_mass(p)

"""Racing diffusion: independent Wiener racers to a single threshold.

Each of the m racers starts at u_i ~ Uniform(0, A) and diffuses with drift
nu_i > 0 and unit variance toward the threshold b = A + k.  The remaining
distance b - u_i makes each finishing time Wald distributed, so trials can
be sampled exactly from inverse-Gaussian variates, and integrating the
uniform start out of the Wald density/CDF gives the race likelihood in
closed form.
"""

import math

import numpy as np
from scipy.integrate import quad
from scipy.special import log_ndtr
from scipy.stats import norm

from .core import Dataset, Trace, seeded_rng, validate
from ._quadrature import cumulative_from_pdf

__all__ = ["sample", "pdf", "logpdf", "cdf", "choice_prob", "trace",
           "wald_pdf", "wald_cdf"]

_S_FLOOR = 1e-12
# below A = 1e-6 b the integrated form divides two vanishing quantities;
# switch to the zero-variability race (all starts at 0, distance b)
_A_FLOOR_REL = 1e-6


def wald_pdf(s, x, nu):
    """First-passage density of drift-nu unit-variance diffusion at distance x."""
    s = np.asarray(s, dtype=np.float64)
    return x / np.sqrt(2.0 * np.pi * s ** 3) * np.exp(-((x - nu * s) ** 2)
                                                      / (2.0 * s))


def wald_cdf(s, x, nu):
    """First-passage CDF; the exp term is kept in log space to avoid overflow."""
    s = np.asarray(s, dtype=np.float64)
    rt_s = np.sqrt(s)
    return (norm.cdf((nu * s - x) / rt_s)
            + np.exp(2.0 * nu * x + log_ndtr(-(nu * s + x) / rt_s)))


def _node_pdf(s, nu, A, b):
    """Finishing-time density with the Uniform(0, A) start integrated out."""
    k = b - A
    if A < _A_FLOOR_REL * b:
        return wald_pdf(s, b, nu)
    rt_s = np.sqrt(s)
    a1 = (k - nu * s) / rt_s
    a2 = (b - nu * s) / rt_s
    return (nu * (norm.cdf(a2) - norm.cdf(a1))
            + (norm.pdf(a1) - norm.pdf(a2)) / rt_s) / A


def _node_cdf(s, nu, A, b):
    """Finishing-time CDF with the start point integrated out.

    Obtained by integrating the Wald CDF in the distance: the Gaussian part
    becomes a difference of M(x) = x Phi(x) + phi(x) terms, the exp(2 nu x)
    part integrates by parts against its own derivative.
    """
    k = b - A
    if A < _A_FLOOR_REL * b:
        return wald_cdf(s, b, nu)
    rt_s = np.sqrt(s)
    a1 = (k - nu * s) / rt_s
    a2 = (b - nu * s) / rt_s

    def M(x):
        return x * norm.cdf(x) + norm.pdf(x)

    def E(x):
        return np.exp(2.0 * nu * x + log_ndtr(-(nu * s + x) / rt_s))

    val = (rt_s * (M(-a1) - M(-a2))
           + (E(b) - E(k)) / (2.0 * nu)
           + (norm.cdf(a2) - norm.cdf(a1)) / (2.0 * nu))
    return np.clip(val / A, 0.0, 1.0)


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
        val = _node_pdf(sv, p.nu[choice - 1], p.A, p.b)
        for j, nu_j in enumerate(p.nu):
            if j != choice - 1:
                val = val * (1.0 - _node_cdf(sv, nu_j, p.A, p.b))
        out[ok] = np.maximum(val, 0.0)
    return float(out[0]) if scalar else out


def logpdf(p, choice, t):
    """Log race density; -inf where the density is 0."""
    d = pdf(p, choice, t)
    with np.errstate(divide="ignore"):
        return np.log(d)


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
    """P(racer `choice` wins), by quadrature over all finite rts."""
    validate(p)
    _check_choice(p, choice)
    val, _ = quad(lambda u: pdf(p, choice, u), p.tau, np.inf, limit=200)
    return min(max(val, 0.0), 1.0)


def sample(p, n, seed):
    """Draw n trials exactly via inverse-Gaussian finishing times."""
    validate(p)
    if n < 1:
        raise ValueError("n must be >= 1")
    rng = seeded_rng(seed)
    m = len(p.nu)
    nu = np.asarray(p.nu)
    u = rng.uniform(0.0, p.A, size=(n, m))
    x = p.b - u
    fpt = rng.wald(x / nu, x ** 2)
    choice = np.argmin(fpt, axis=1) + 1
    rt = p.tau + fpt.min(axis=1)
    meta = {"seed": int(seed), "spec": p, "note": "rdm exact"}
    return Dataset(choice.astype(np.int64), rt, meta=meta)


def trace(p, dt=1e-4, seed=0, max_steps=10_000_000):
    """Euler-Maruyama racer paths until the first threshold crossing.

    All racers share the time grid; the final column holds every path
    linearly interpolated at the winner's crossing time, with the winner
    pinned to b exactly.
    """
    validate(p)
    if dt <= 0:
        raise ValueError("dt must be > 0")
    rng = seeded_rng(seed)
    m = len(p.nu)
    nu = np.asarray(p.nu)
    u = rng.uniform(0.0, p.A, size=m)
    sq_dt = math.sqrt(dt)
    x_cur = u.copy()
    pieces = [u[:, None]]
    k = 0
    chunk = 4096
    while k < max_steps:
        gap = min(chunk, max_steps - k)
        incr = nu[:, None] * dt + sq_dt * rng.standard_normal((m, gap))
        path = x_cur[:, None] + np.cumsum(incr, axis=1)
        crossed = path >= p.b
        cols = crossed.any(axis=0)
        if cols.any():
            j = int(np.argmax(cols))
            prev = path[:, j - 1] if j > 0 else x_cur
            hit = crossed[:, j]
            frac = np.full(m, np.inf)
            frac[hit] = (p.b - prev[hit]) / (path[hit, j] - prev[hit])
            winner = int(np.argmin(frac))
            fw = frac[winner]
            final = prev + fw * (path[:, j] - prev)
            final[winner] = p.b
            pieces.append(path[:, :j])
            values = np.concatenate(pieces + [final[:, None]], axis=1)
            t = p.tau + dt * np.arange(values.shape[1], dtype=np.float64)
            crossing = p.tau + (k + j + fw) * dt
            t[-1] = crossing
            return Trace(t=t, paths=values,
                         thresholds=np.full(m, p.b), winner=winner + 1,
                         crossing_time=crossing)
        pieces.append(path)
        x_cur = path[:, -1].copy()
        k += gap
    raise RuntimeError(f"no threshold crossing within {max_steps} steps")

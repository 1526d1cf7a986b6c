"""Two-boundary drift diffusion: sampler, first-passage densities, traces.

A Wiener process with drift ``nu`` and unit diffusion starts at ``z * alpha``
and is absorbed at ``alpha`` (choice 1) or 0 (choice 2); the response time is
the absorption time plus the non-decision time ``tau``.

The defective first-passage density is evaluated through the classic pair of
infinite-series expansions of the constant-drift Wiener density: a sum over
mirrored start points that converges quickly for small normalized times, and
a sine series that converges quickly for large ones.  Per evaluation point
the expansion needing fewer terms is used; term counts come from analytic
truncation-error bounds.  Series terms are summed in log space so very large
times or boundaries cannot underflow.
"""

import math

import numpy as np
from scipy.integrate import quad
from scipy.special import logsumexp

from .core import Dataset, Trace, seeded_rng, validate
from ._quadrature import cumulative_from_pdf

__all__ = ["sample", "pdf", "logpdf", "cdf", "choice_prob", "trace"]

# default truncation error for the normalized series; a handful of terms
# buys far more accuracy than the contract needs, so keep it tight
SERIES_EPS = 1e-12

_LOG_2PI = math.log(2.0 * math.pi)


def _n_terms_small(t_norm, eps):
    """Terms needed by the mirrored-start expansion (error <= eps)."""
    ks = np.full_like(t_norm, 2.0)
    lead = 2.0 * np.sqrt(2.0 * np.pi * t_norm) * eps
    m = lead < 1.0
    tn = t_norm[m]
    val = 2.0 + np.sqrt(-2.0 * tn * np.log(lead[m]))
    ks[m] = np.maximum(val, np.sqrt(tn) + 1.0)
    return np.ceil(ks).astype(np.int64)


def _n_terms_large(t_norm, eps):
    """Terms needed by the sine expansion (error <= eps)."""
    kl = 1.0 / (np.pi * np.sqrt(t_norm))
    lead = np.pi * t_norm * eps
    m = lead < 1.0
    tn = t_norm[m]
    val = np.sqrt(-2.0 * np.log(lead[m]) / (np.pi ** 2 * tn))
    kl[m] = np.maximum(val, kl[m])
    return np.ceil(kl).astype(np.int64)


def _log_fnorm_small(t_norm, w, n_terms):
    """Log normalized density via the small-time expansion.

    ``t_norm`` is an array of normalized times, ``n_terms`` the (scalar)
    term count.  Returns (log value, sign) with sign <= 0 marking points
    where roundoff produced a non-positive sum (density treated as 0).
    """
    ks = np.arange(-((n_terms - 1) // 2), (n_terms - 1) // 2 + n_terms % 2 + 1)
    a = w + 2.0 * ks[:, None]
    log_terms = np.log(np.abs(a)) - a ** 2 / (2.0 * t_norm[None, :])
    val, sign = logsumexp(log_terms, axis=0, b=np.sign(a), return_sign=True)
    val = val - 0.5 * _LOG_2PI - 1.5 * np.log(t_norm)
    return val, sign


def _log_fnorm_large(t_norm, w, n_terms):
    """Log normalized density via the large-time sine expansion."""
    ks = np.arange(1, n_terms + 1, dtype=np.float64)
    s = np.sin(ks * np.pi * w)
    with np.errstate(divide="ignore"):
        log_amp = np.log(ks) + np.log(np.abs(s))
    log_terms = log_amp[:, None] - ks[:, None] ** 2 * np.pi ** 2 * t_norm[None, :] / 2.0
    val, sign = logsumexp(log_terms, axis=0, b=np.sign(s)[:, None],
                          return_sign=True)
    return val + np.log(np.pi), sign


def _log_fpt_lower(s, nu, alpha, w, eps=SERIES_EPS):
    """Log density of absorption at the lower boundary after decision time s.

    Vectorized over the positive array ``s``; start point is ``w * alpha``
    above the lower boundary, drift ``nu``.
    """
    s = np.asarray(s, dtype=np.float64)
    t_norm = s / alpha ** 2
    out = np.full(s.shape, -np.inf)

    small_n = _n_terms_small(t_norm, eps)
    large_n = _n_terms_large(t_norm, eps)
    use_small = small_n < large_n
    for mask, fn, counts in ((use_small, _log_fnorm_small, small_n),
                             (~use_small, _log_fnorm_large, large_n)):
        if not mask.any():
            continue
        val, sign = fn(t_norm[mask], w, int(counts[mask].max()))
        val = np.where(sign > 0, val, -np.inf)
        out[mask] = val
    # map the normalized density back to the (nu, alpha) process
    return out - 2.0 * np.log(alpha) - nu * alpha * w - nu ** 2 * s / 2.0


def _check_choice(p, choice):
    if choice not in (1, 2):
        raise ValueError("choice must be 1 (upper boundary) or 2 (lower)")


def logpdf(p, choice, t):
    """Log defective first-passage density at time(s) t (seconds).

    ``-inf`` for t <= tau.  choice 1 is the upper boundary; its density is
    the lower-boundary density of the sign-flipped process (drift -nu,
    start 1 - z), which is an exact reflection identity.
    """
    validate(p)
    _check_choice(p, choice)
    t = np.asarray(t, dtype=np.float64)
    scalar = t.ndim == 0
    t = np.atleast_1d(t)
    s = t - p.tau
    ok = s > 0.0
    out = np.full(t.shape, -np.inf)
    if ok.any():
        if choice == 2:
            out[ok] = _log_fpt_lower(s[ok], p.nu, p.alpha, p.z)
        else:
            out[ok] = _log_fpt_lower(s[ok], -p.nu, p.alpha, 1.0 - p.z)
    return float(out[0]) if scalar else out


def pdf(p, choice, t):
    """Defective first-passage density (1/seconds); 0 for t <= tau."""
    lp = logpdf(p, choice, t)
    return np.exp(lp) if isinstance(lp, np.ndarray) else math.exp(lp)


def cdf(p, choice, t):
    """Defective first-passage CDF: P(choice, RT <= t).

    Scalar t uses adaptive quadrature of ``pdf`` on [tau, t]; an array of
    times is integrated cumulatively in one vectorized pass.
    """
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
    """Probability of absorbing at the given boundary (closed form)."""
    validate(p)
    _check_choice(p, choice)
    if p.nu == 0.0:
        up = p.z
    else:
        q = -2.0 * p.nu * p.alpha
        if q > 700.0:
            # strongly negative drift: both expm1 terms would overflow,
            # but their ratio tends to exp(-q * (1 - z))
            up = math.exp(-q * (1.0 - p.z))
        else:
            up = math.expm1(q * p.z) / math.expm1(q)
    return up if choice == 1 else 1.0 - up


def sample(p, n, seed, dt=1e-4, max_steps=10_000_000):
    """Draw n (choice, rt) trials by Euler-Maruyama path simulation.

    Fixed step dt on the latent process; the boundary crossing inside the
    final step is located by linear interpolation, leaving a crossing-time
    bias of order sqrt(dt).  Deterministic in ``seed``.
    """
    validate(p)
    if n < 1:
        raise ValueError("n must be >= 1")
    if dt <= 0:
        raise ValueError("dt must be > 0")
    rng = seeded_rng(seed)
    mu_dt = p.nu * dt
    sq_dt = math.sqrt(dt)
    x = np.full(n, p.z * p.alpha)
    idx = np.arange(n)
    rt = np.empty(n)
    choice = np.empty(n, dtype=np.int64)
    k = 0
    while idx.size:
        if k >= max_steps:
            raise RuntimeError(f"no boundary crossing within {max_steps} steps")
        x_new = x + mu_dt + sq_dt * rng.standard_normal(idx.size)
        up = x_new >= p.alpha
        done = up | (x_new <= 0.0)
        if done.any():
            x0 = x[done]
            x1 = x_new[done]
            bound = np.where(up[done], p.alpha, 0.0)
            frac = (bound - x0) / (x1 - x0)
            hit = idx[done]
            rt[hit] = p.tau + (k + frac) * dt
            choice[hit] = np.where(up[done], 1, 2)
            keep = ~done
            x = x_new[keep]
            idx = idx[keep]
        else:
            x = x_new
        k += 1
    meta = {"seed": int(seed), "spec": p, "note": f"ddm euler dt={dt:g}"}
    return Dataset(choice, rt, meta=meta)


def trace(p, dt=1e-4, seed=0, max_steps=10_000_000):
    """Single latent evidence path until first boundary exit.

    The recorded grid holds the start point and every interior step; the
    final point is the linearly interpolated crossing, where the path sits
    exactly on the winning boundary.
    """
    validate(p)
    if dt <= 0:
        raise ValueError("dt must be > 0")
    rng = seeded_rng(seed)
    mu_dt = p.nu * dt
    sq_dt = math.sqrt(dt)
    x_cur = p.z * p.alpha
    pieces = [np.array([x_cur])]
    k = 0
    chunk = 4096
    while k < max_steps:
        m = min(chunk, max_steps - k)
        path = x_cur + np.cumsum(mu_dt + sq_dt * rng.standard_normal(m))
        hit_up = path >= p.alpha
        hit = hit_up | (path <= 0.0)
        if hit.any():
            j = int(np.argmax(hit))
            prev = path[j - 1] if j > 0 else x_cur
            if hit_up[j]:
                winner, bound = 1, p.alpha
            else:
                winner, bound = 2, 0.0
            frac = (bound - prev) / (path[j] - prev)
            pieces.append(path[:j])
            values = np.concatenate(pieces + [[bound]])
            n_interior = values.size - 1
            t = p.tau + dt * np.arange(n_interior + 1, dtype=np.float64)
            crossing = p.tau + (k + j + frac) * dt
            t[-1] = crossing
            return Trace(t=t, paths=values[None, :],
                         thresholds=np.array([p.alpha, 0.0]),
                         winner=winner, crossing_time=crossing)
        pieces.append(path)
        x_cur = path[-1]
        k += m
    raise RuntimeError(f"no boundary crossing within {max_steps} steps")

"""Adaptive random-walk Metropolis over the unconstrained parameter scale.

The proposal is a correlated Gaussian step: covariance is learned during
warmup from the chain's own history (expanding windows, second half of the
history each time), and a Robbins-Monro recursion on the log step size
drives the acceptance rate toward 0.234.  Both are frozen when warmup ends
so the sampling phase is a fixed Markov kernel and the usual diagnostics
apply.  Every chain runs on its own counter-based RNG substream, which
makes results bit-identical for a given seed regardless of thread count.
"""

import concurrent.futures
import csv
import dataclasses
import json
import math
import os

import numpy as np

from ..core import substream
from ..models import param_names, vector_to_params
from .likelihood import dataset_loglik
from .priors import PriorSpec, default_priors
from .transforms import transforms_for

__all__ = ["Chains", "run_chains", "sample_posterior", "write_chains",
           "read_chains"]

_TARGET_ACCEPT = 0.234
_INIT_BUFFER = 75
_TERM_BUFFER = 50
_BASE_WINDOW = 25


@dataclasses.dataclass(frozen=True)
class Chains:
    """MCMC draws on the natural parameter scale, warmup included.

    ``draws`` has shape (chain, iteration, parameter); only iterations at
    index >= warmup should enter summaries (``posterior`` slices them).
    """
    draws: np.ndarray
    warmup: int
    param_names: tuple
    seed: int
    accept_rate: tuple
    priors: PriorSpec = None
    thin: int = 1

    @property
    def posterior(self):
        return self.draws[:, self.warmup:, :]

    @property
    def n_chains(self):
        return self.draws.shape[0]


def _window_ends(n_warmup):
    """Covariance-refresh points: doubling windows between the step-size-only
    init and term buffers.  The last window stretches to meet the term
    buffer so the final covariance is learned from the longest, most
    settled stretch of warmup."""
    if n_warmup < _INIT_BUFFER + _TERM_BUFFER + _BASE_WINDOW:
        return []
    ends = []
    pos = _INIT_BUFFER
    limit = n_warmup - _TERM_BUFFER
    width = _BASE_WINDOW
    while True:
        if pos + 2 * width > limit:
            ends.append(limit)
            return ends
        pos += width
        ends.append(pos)
        width *= 2


def _regularized_cholesky(hist, dim):
    # shrink toward identity; keeps the factorization well posed when the
    # window holds few draws relative to dim
    n = hist.shape[0]
    cov = np.atleast_2d(np.cov(hist, rowvar=False))
    w = n / (n + 5.0)
    cov = w * cov + (1.0 - w) * 1e-3 * np.eye(dim)
    return np.linalg.cholesky(cov)


def _run_one_chain(logpost, dim, n_warmup, n_samples, thin, rng, init_fn,
                   target_accept, max_init_tries):
    for _ in range(max_init_tries):
        y = np.asarray(init_fn(rng), dtype=np.float64)
        lp = logpost(y)
        if math.isfinite(lp):
            break
    else:
        raise RuntimeError(
            f"no finite-posterior start in {max_init_tries} prior draws; "
            "check that priors and data are compatible")

    raw_warm = n_warmup * thin
    raw_total = raw_warm + n_samples * thin
    kept = np.empty((n_warmup + n_samples, dim))
    warm_buf = np.empty((raw_warm, dim))
    base = 2.38 / math.sqrt(dim)
    log_s = 0.0
    chol = np.eye(dim)
    updates = _window_ends(raw_warm)
    window_start = 0
    rm_step = 0
    accepted_post = 0

    for t in range(1, raw_total + 1):
        step = rng.standard_normal(dim)
        u = rng.uniform()
        prop = y + base * math.exp(log_s) * (chol @ step)
        lp_prop = logpost(prop)
        if math.isnan(lp_prop):
            lp_prop = -math.inf
        dlp = lp_prop - lp
        if dlp >= 0.0 or u < math.exp(dlp):
            y = prop
            lp = lp_prop
            if t > raw_warm:
                accepted_post += 1
        if t % thin == 0:
            kept[t // thin - 1] = y

        if t <= raw_warm:
            warm_buf[t - 1] = y
            rm_step += 1
            alpha = math.exp(min(0.0, dlp))
            log_s += rm_step ** -0.6 * (alpha - target_accept)
            if updates and t == updates[0]:
                chol = _regularized_cholesky(warm_buf[window_start:t], dim)
                window_start = t
                updates = updates[1:]
                # fresh covariance: re-learn the scalar step from scratch
                log_s = 0.0
                rm_step = 0

    rate = accepted_post / (n_samples * thin)
    return kept, rate


def run_chains(logpost, dim, n_chains, n_warmup, n_samples, seed, init_fn,
               target_accept=_TARGET_ACCEPT, thin=1, n_threads=1,
               max_init_tries=100):
    """Run independent adaptive-Metropolis chains against any log target.

    ``logpost`` maps an unconstrained vector to a log density (may be -inf);
    ``init_fn(rng)`` proposes a start.  Chain c uses RNG substream
    (seed, c), so the output is reproducible for any thread count.
    ``n_warmup``/``n_samples`` count retained draws; each retained draw
    advances the chain ``thin`` internal steps.
    Returns (draws[(chain, iter, dim)], acceptance rates).
    """
    if n_warmup < 0 or n_samples < 1:
        raise ValueError("need n_warmup >= 0 and n_samples >= 1")
    if n_chains < 1:
        raise ValueError("need n_chains >= 1")
    if thin < 1:
        raise ValueError("need thin >= 1")

    def job(c):
        return _run_one_chain(logpost, dim, n_warmup, n_samples, thin,
                              substream(seed, c), init_fn, target_accept,
                              max_init_tries)

    if n_threads > 1:
        with concurrent.futures.ThreadPoolExecutor(n_threads) as pool:
            results = list(pool.map(job, range(n_chains)))
    else:
        results = [job(c) for c in range(n_chains)]

    draws = np.stack([r[0] for r in results])
    rates = tuple(float(r[1]) for r in results)
    return draws, rates


def _infer_n_acc(model_kind, ds, priors):
    if model_kind == "ddm":
        return 2
    if priors is not None:
        n = sum(1 for name in priors.names if name.startswith("nu"))
        if n >= 2:
            return n
    if len(ds):
        return max(2, int(ds.choice.max()))
    return 2


def _tau_upper_bound(ds, priors, names):
    if len(ds):
        return float(ds.rt.min())
    prior = priors.priors[list(names).index("tau")]
    hi = getattr(prior, "hi", math.inf)
    if hi is None or not math.isfinite(hi):
        raise ValueError("empty dataset: tau prior must have a finite "
                         "upper bound")
    return float(hi)


def sample_posterior(model_kind, ds, priors=None, n_chains=4, n_warmup=1000,
                     n_samples=1000, seed=0, thin=5, n_threads=1):
    """Posterior draws for a model kind given (choice, rt) data.

    The target is prior x likelihood expressed on the unconstrained scale
    (log-Jacobian included).  Starts are independent prior draws, which
    overdisperses chains relative to the posterior.  ``n_warmup`` and
    ``n_samples`` count retained draws; ``thin`` internal transitions are
    taken per retained draw to cut the autocorrelation of the kept chain.
    """
    n_acc = _infer_n_acc(model_kind, ds, priors)
    if priors is None:
        priors = default_priors(model_kind, ds, n_acc)
    names = tuple(param_names(model_kind, n_acc))
    if tuple(priors.names) != names:
        raise ValueError(f"prior names {priors.names} do not match "
                         f"model parameters {names}")
    tf = transforms_for(model_kind, n_acc, _tau_upper_bound(ds, priors,
                                                            names))

    def logpost(y):
        x = tf.to_natural(y)
        lp = priors.logpdf(x)
        if lp == -math.inf:
            return -math.inf
        spec = vector_to_params(model_kind, x)
        ll = dataset_loglik(spec, ds)
        if ll == -math.inf:
            return -math.inf
        return ll + lp + tf.log_jacobian(y)

    def init_fn(rng):
        return tf.to_unconstrained(priors.sample(rng))

    draws_y, rates = run_chains(logpost, len(names), n_chains, n_warmup,
                                n_samples, seed, init_fn, thin=thin,
                                n_threads=n_threads)
    draws = np.empty_like(draws_y)
    for j, part in enumerate(tf.parts):
        draws[:, :, j] = part.to_natural(draws_y[:, :, j])
    return Chains(draws=draws, warmup=n_warmup, param_names=names,
                  seed=seed, accept_rate=rates, priors=priors, thin=thin)


def _sidecar_path(csv_path):
    root, _ = os.path.splitext(str(csv_path))
    return root + ".json"


def write_chains(chains, csv_path):
    """CSV of every draw (warmup included) plus a JSON sidecar."""
    with open(csv_path, "w", newline="\n") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["chain", "iteration"] + list(chains.param_names))
        for c in range(chains.draws.shape[0]):
            for i in range(chains.draws.shape[1]):
                writer.writerow([c + 1, i + 1]
                                + [f"{v:.17g}" for v in chains.draws[c, i]])
    side = {"seed": chains.seed, "warmup": chains.warmup,
            "thin": chains.thin,
            "n_chains": chains.draws.shape[0],
            "n_iterations": chains.draws.shape[1],
            "param_names": list(chains.param_names),
            "accept_rate": list(chains.accept_rate),
            "priors": chains.priors.to_dict() if chains.priors else None}
    with open(_sidecar_path(csv_path), "w", newline="\n") as fh:
        json.dump(side, fh, indent=2)
        fh.write("\n")


def read_chains(csv_path):
    with open(_sidecar_path(csv_path)) as fh:
        side = json.load(fh)
    names = tuple(side["param_names"])
    n_chains = side["n_chains"]
    n_iter = side["n_iterations"]
    draws = np.empty((n_chains, n_iter, len(names)))
    with open(csv_path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["chain", "iteration"] + list(names):
            raise ValueError("chains CSV header does not match sidecar")
        for row in reader:
            c = int(row[0]) - 1
            i = int(row[1]) - 1
            draws[c, i] = [float(v) for v in row[2:]]
    priors = (PriorSpec.from_dict(side["priors"])
              if side.get("priors") else None)
    return Chains(draws=draws, warmup=side["warmup"], param_names=names,
                  seed=side["seed"],
                  accept_rate=tuple(side["accept_rate"]), priors=priors,
                  thin=int(side.get("thin", 1)))

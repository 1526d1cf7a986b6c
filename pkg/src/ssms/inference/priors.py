"""Univariate priors and per-model default prior sets."""

import dataclasses
import math

import numpy as np
from scipy.special import log_ndtr, ndtr, ndtri

from ..models import param_names

__all__ = ["Normal", "TruncatedNormal", "Uniform", "PriorSpec",
           "default_priors", "prior_from_dict"]

_LOG_2PI = math.log(2.0 * math.pi)


@dataclasses.dataclass(frozen=True)
class Normal:
    mu: float
    sigma: float

    def logpdf(self, x):
        z = (x - self.mu) / self.sigma
        return -0.5 * (z * z + _LOG_2PI) - math.log(self.sigma)

    def sample(self, rng):
        return self.mu + self.sigma * rng.standard_normal()

    def to_dict(self):
        return {"type": "normal", "mu": self.mu, "sigma": self.sigma}


@dataclasses.dataclass(frozen=True)
class TruncatedNormal:
    """Normal(mu, sigma) restricted to [lo, hi]; hi may be inf."""
    mu: float
    sigma: float
    lo: float
    hi: float = math.inf

    def __post_init__(self):
        if not self.hi > self.lo:
            raise ValueError("truncation needs hi > lo")

    def _bounds_std(self):
        a = (self.lo - self.mu) / self.sigma
        b = (self.hi - self.mu) / self.sigma if math.isfinite(self.hi) \
            else math.inf
        return a, b

    def _log_mass(self):
        a, b = self._bounds_std()
        if not math.isfinite(b):
            return log_ndtr(-a)
        return math.log(ndtr(b) - ndtr(a))

    def logpdf(self, x):
        if x < self.lo or x > self.hi:
            return -math.inf
        z = (x - self.mu) / self.sigma
        return (-0.5 * (z * z + _LOG_2PI) - math.log(self.sigma)
                - self._log_mass())

    def sample(self, rng):
        # inverse-CDF on the truncated mass; exact and deterministic
        a, b = self._bounds_std()
        fa = ndtr(a)
        fb = ndtr(b) if math.isfinite(b) else 1.0
        u = rng.uniform()
        return self.mu + self.sigma * ndtri(fa + u * (fb - fa))

    def to_dict(self):
        return {"type": "truncated_normal", "mu": self.mu,
                "sigma": self.sigma, "lo": self.lo,
                "hi": None if math.isinf(self.hi) else self.hi}


@dataclasses.dataclass(frozen=True)
class Uniform:
    lo: float
    hi: float

    def __post_init__(self):
        if not self.hi > self.lo:
            raise ValueError("uniform needs hi > lo")

    def logpdf(self, x):
        if self.lo <= x <= self.hi:
            return -math.log(self.hi - self.lo)
        return -math.inf

    def sample(self, rng):
        return rng.uniform(self.lo, self.hi)

    def to_dict(self):
        return {"type": "uniform", "lo": self.lo, "hi": self.hi}


def prior_from_dict(d):
    kind = d["type"]
    if kind == "normal":
        return Normal(d["mu"], d["sigma"])
    if kind == "truncated_normal":
        hi = d.get("hi")
        return TruncatedNormal(d["mu"], d["sigma"], d["lo"],
                               math.inf if hi is None else hi)
    if kind == "uniform":
        return Uniform(d["lo"], d["hi"])
    raise ValueError(f"unknown prior type: {kind}")


@dataclasses.dataclass(frozen=True)
class PriorSpec:
    """Ordered, named univariate priors matching param_names order."""
    names: tuple
    priors: tuple

    def __post_init__(self):
        if len(self.names) != len(self.priors):
            raise ValueError("names and priors must align")

    def __len__(self):
        return len(self.priors)

    def logpdf(self, x):
        x = np.asarray(x, dtype=np.float64)
        if x.size != len(self.priors):
            raise ValueError("parameter vector length mismatch")
        total = 0.0
        for prior, v in zip(self.priors, x):
            lp = prior.logpdf(float(v))
            if lp == -math.inf:
                return -math.inf
            total += lp
        return total

    def sample(self, rng):
        return np.array([prior.sample(rng) for prior in self.priors])

    def to_dict(self):
        return {name: prior.to_dict()
                for name, prior in zip(self.names, self.priors)}

    @classmethod
    def from_dict(cls, d):
        return cls(names=tuple(d), priors=tuple(prior_from_dict(v)
                                                for v in d.values()))


def default_priors(model_kind, ds, n_acc=2):
    """Weakly-informative defaults; tau's upper bound is the smallest rt."""
    if len(ds) == 0:
        raise ValueError("default priors need data to bound tau "
                         "(pass explicit priors for empty datasets)")
    min_rt = float(ds.rt.min())
    names = tuple(param_names(model_kind, n_acc))
    tau = Uniform(0.0, min_rt)
    if model_kind == "ddm":
        priors = (Normal(0.0, 2.0), TruncatedNormal(1.0, 1.0, 0.0),
                  tau, Uniform(0.1, 0.9))
    elif model_kind == "lba":
        priors = tuple(Normal(0.0, 1.0) for _ in range(n_acc)) + (
            TruncatedNormal(0.8, 0.4, 0.0),
            TruncatedNormal(0.2, 0.2, 0.0), tau)
    elif model_kind == "rdm":
        priors = tuple(TruncatedNormal(1.0, 2.0, 0.0)
                       for _ in range(n_acc)) + (
            TruncatedNormal(0.2, 0.2, 0.0),
            TruncatedNormal(0.8, 0.4, 0.0), tau)
    else:
        raise ValueError(f"unknown model kind: {model_kind}")
    return PriorSpec(names=names, priors=priors)

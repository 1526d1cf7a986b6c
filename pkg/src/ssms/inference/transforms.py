"""Bijections between constrained parameters and the estimation scale.

Optimizers and the MCMC engine both work on unconstrained vectors; each
model parameter gets a scalar bijection chosen from its domain: identity
for free reals, log for positives, logit for bounded intervals.  The
log-Jacobian is what the posterior needs when the target is expressed in
the unconstrained variable.
"""

import math

import numpy as np

__all__ = ["Identity", "Log", "Logit", "VectorTransform",
           "transforms_for"]


class Identity:
    def to_unconstrained(self, x):
        return np.asarray(x, dtype=np.float64)

    def to_natural(self, y):
        return np.asarray(y, dtype=np.float64)

    def log_jacobian(self, y):
        return np.zeros_like(np.asarray(y, dtype=np.float64))

    def __repr__(self):
        return "Identity()"


class Log:
    """x = exp(y) maps the line onto (0, inf); log|dx/dy| = y."""

    def to_unconstrained(self, x):
        with np.errstate(divide="ignore"):
            return np.log(x)

    def to_natural(self, y):
        return np.exp(y)

    def log_jacobian(self, y):
        return np.asarray(y, dtype=np.float64)

    def __repr__(self):
        return "Log()"


class Logit:
    """x = lo + (hi - lo) * sigmoid(y) maps the line onto (lo, hi)."""

    def __init__(self, lo, hi):
        if not hi > lo:
            raise ValueError("logit interval needs hi > lo")
        self.lo = float(lo)
        self.hi = float(hi)

    def to_unconstrained(self, x):
        x = np.asarray(x, dtype=np.float64)
        p = (x - self.lo) / (self.hi - self.lo)
        # out-of-interval x maps to nan, which callers treat as infeasible
        with np.errstate(divide="ignore", invalid="ignore"):
            return np.log(p) - np.log1p(-p)

    def to_natural(self, y):
        y = np.asarray(y, dtype=np.float64)
        # sigmoid written to avoid overflow on both tails
        p = np.where(y >= 0, 1.0 / (1.0 + np.exp(-np.abs(y))),
                     np.exp(-np.abs(y)) / (1.0 + np.exp(-np.abs(y))))
        return self.lo + (self.hi - self.lo) * p

    def log_jacobian(self, y):
        y = np.asarray(y, dtype=np.float64)
        # log(hi-lo) + log sigmoid(y) + log sigmoid(-y)
        return (math.log(self.hi - self.lo)
                - np.logaddexp(0.0, -y) - np.logaddexp(0.0, y))

    def __repr__(self):
        return f"Logit({self.lo:g}, {self.hi:g})"


class VectorTransform:
    """Stack of scalar bijections applied componentwise."""

    def __init__(self, parts):
        self.parts = tuple(parts)

    def __len__(self):
        return len(self.parts)

    def to_unconstrained(self, x):
        x = np.asarray(x, dtype=np.float64)
        return np.array([p.to_unconstrained(v)
                         for p, v in zip(self.parts, x)])

    def to_natural(self, y):
        y = np.asarray(y, dtype=np.float64)
        return np.array([p.to_natural(v) for p, v in zip(self.parts, y)])

    def log_jacobian(self, y):
        y = np.asarray(y, dtype=np.float64)
        return float(sum(p.log_jacobian(v)
                         for p, v in zip(self.parts, y)))


def transforms_for(kind, n_acc, tau_hi):
    """Per-parameter bijections for a model kind, in param_names order.

    ``tau_hi`` bounds the non-decision time from above (smallest observed
    rt, or the prior's upper bound when there is no data).
    """
    if tau_hi <= 0 or not math.isfinite(tau_hi):
        raise ValueError("tau needs a finite positive upper bound")
    tau_t = Logit(0.0, tau_hi)
    if kind == "ddm":
        return VectorTransform([Identity(), Log(), tau_t, Logit(0.0, 1.0)])
    if kind == "lba":
        return VectorTransform([Identity()] * n_acc + [Log(), Log(), tau_t])
    if kind == "rdm":
        # rdm drifts are constrained positive
        return VectorTransform([Log()] * n_acc + [Log(), Log(), tau_t])
    raise ValueError(f"unknown model kind: {kind}")

"""Dispatch a shared operation surface across the three model families.

Inference, plotting, and the command line all work against ModelSpec values
without caring which family they hold; this module routes each call to the
family's own implementation.
"""

import numpy as np

from . import ddm, lba, rdm
from .core import DDMParams, LBAParams, RDMParams, n_choices

__all__ = ["sample", "pdf", "logpdf", "cdf", "trace", "choice_prob",
           "param_names", "model_kind", "params_to_vector",
           "vector_to_params"]

_MODULES = {DDMParams: ddm, LBAParams: lba, RDMParams: rdm}
_KINDS = {DDMParams: "ddm", LBAParams: "lba", RDMParams: "rdm"}


def _mod(spec):
    try:
        return _MODULES[type(spec)]
    except KeyError:
        raise TypeError(f"not a model spec: {type(spec).__name__}")


def model_kind(spec):
    return _KINDS[type(spec)]


def sample(spec, n, seed, **kw):
    return _mod(spec).sample(spec, n, seed, **kw)


def pdf(spec, choice, t):
    return _mod(spec).pdf(spec, choice, t)


def logpdf(spec, choice, t):
    return _mod(spec).logpdf(spec, choice, t)


def cdf(spec, choice, t):
    return _mod(spec).cdf(spec, choice, t)


def choice_prob(spec, choice):
    return _mod(spec).choice_prob(spec, choice)


def trace(spec, seed, **kw):
    m = _mod(spec)
    if m is lba:
        return lba.trace(spec, seed, **kw)
    return m.trace(spec, seed=seed, **kw)


def param_names(spec_or_kind, n_acc=2):
    """Flat parameter names in estimation order.

    Accepts a ModelSpec or a kind string; for kind strings the drift count
    defaults to 2.
    """
    if isinstance(spec_or_kind, str):
        kind = spec_or_kind
        m = n_acc
    else:
        kind = model_kind(spec_or_kind)
        m = n_choices(spec_or_kind)
    if kind == "ddm":
        return ["nu", "alpha", "tau", "z"]
    drift = [f"nu[{i + 1}]" for i in range(m)]
    if kind == "lba":
        return drift + ["A", "k", "tau"]
    if kind == "rdm":
        return drift + ["k", "A", "tau"]
    raise ValueError(f"unknown model kind: {kind}")


def params_to_vector(spec):
    """Flatten a spec to the vector layout of param_names(spec)."""
    if isinstance(spec, DDMParams):
        return np.array([spec.nu, spec.alpha, spec.tau, spec.z])
    if isinstance(spec, LBAParams):
        return np.array(list(spec.nu) + [spec.A, spec.k, spec.tau])
    if isinstance(spec, RDMParams):
        return np.array(list(spec.nu) + [spec.k, spec.A, spec.tau])
    raise TypeError(f"not a model spec: {type(spec).__name__}")


def vector_to_params(kind, vec, sigma=1.0):
    """Rebuild a spec from the flat vector layout of param_names."""
    vec = np.asarray(vec, dtype=np.float64)
    if kind == "ddm":
        if vec.size != 4:
            raise ValueError("ddm expects 4 parameters")
        return DDMParams(nu=float(vec[0]), alpha=float(vec[1]),
                         tau=float(vec[2]), z=float(vec[3]))
    m = vec.size - 3
    if m < 2:
        raise ValueError("race models need at least 2 drifts")
    drifts = tuple(float(v) for v in vec[:m])
    if kind == "lba":
        return LBAParams(nu=drifts, A=float(vec[m]), k=float(vec[m + 1]),
                         tau=float(vec[m + 2]), sigma=sigma)
    if kind == "rdm":
        return RDMParams(nu=drifts, k=float(vec[m]), A=float(vec[m + 1]),
                         tau=float(vec[m + 2]))
    raise ValueError(f"unknown model kind: {kind}")

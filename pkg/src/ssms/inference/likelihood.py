"""Dataset-level log-likelihood built on the models' pointwise densities."""

import math

import numpy as np

from .. import models
from ..core import n_choices, validate, validate_dataset

__all__ = ["pointwise_loglik", "dataset_loglik"]


def pointwise_loglik(spec, ds):
    """Per-trial log-density vector, in dataset order.

    Any trial with rt <= tau contributes -inf (the model puts no mass
    there), which propagates to a -inf dataset_loglik.
    """
    validate(spec)
    validate_dataset(ds, spec)
    out = np.empty(len(ds))
    for c in range(1, n_choices(spec) + 1):
        mask = ds.choice == c
        if mask.any():
            out[mask] = models.logpdf(spec, c, ds.rt[mask])
    return out


def dataset_loglik(spec, ds):
    """Sum of per-trial log-densities.

    Summed with an exactly-rounded compensated sum, so the result does not
    depend on evaluation order or batching; an empty dataset gives 0.
    """
    if len(ds) == 0:
        validate(spec)
        return 0.0
    vec = pointwise_loglik(spec, ds)
    if np.isneginf(vec).any():
        return -math.inf
    return math.fsum(vec)

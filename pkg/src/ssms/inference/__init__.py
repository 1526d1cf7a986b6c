"""Estimation: likelihoods over datasets, MLE, adaptive MCMC, diagnostics."""

from .diagnostics import ess_bulk, split_rhat, summarystats
from .likelihood import dataset_loglik, pointwise_loglik
from .mcmc import Chains, read_chains, run_chains, sample_posterior, write_chains
from .mle import FitResult, fit_mle, read_fit_result, write_fit_result
from .priors import (
    Normal,
    PriorSpec,
    TruncatedNormal,
    Uniform,
    default_priors,
    prior_from_dict,
)
from .transforms import Identity, Log, Logit, VectorTransform, transforms_for

__all__ = [
    "Chains",
    "FitResult",
    "Identity",
    "Log",
    "Logit",
    "Normal",
    "PriorSpec",
    "TruncatedNormal",
    "Uniform",
    "VectorTransform",
    "dataset_loglik",
    "default_priors",
    "ess_bulk",
    "fit_mle",
    "pointwise_loglik",
    "prior_from_dict",
    "read_chains",
    "read_fit_result",
    "run_chains",
    "sample_posterior",
    "split_rhat",
    "summarystats",
    "transforms_for",
    "write_chains",
    "write_fit_result",
]

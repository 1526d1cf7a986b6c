"""Sequential sampling models of choice and response time.

Three evidence-accumulation models are exposed through a shared interface:
a two-boundary drift diffusion model (ddm), the linear ballistic accumulator
(lba), and the racing diffusion model (rdm).  Each model provides exact or
near-exact trial samplers, closed-form joint densities over (choice, rt),
latent-trace simulation, and plugs into maximum-likelihood and MCMC fitting.
"""

from .core import (
    ChoiceRT,
    Dataset,
    DDMParams,
    LBAParams,
    RDMParams,
    Trace,
    n_choices,
    parse_model_spec,
    read_dataset,
    read_model_spec,
    seeded_rng,
    substream,
    validate,
    validate_dataset,
    write_dataset,
    write_model_spec,
)
from . import ddm, lba, rdm, models
from .models import sample, pdf, logpdf, cdf, trace, choice_prob, param_names
from . import inference, viz
from .inference import (dataset_loglik as loglik, pointwise_loglik,
                        fit_mle, sample_posterior, summarystats)

__all__ = [
    "ChoiceRT", "Dataset", "DDMParams", "LBAParams", "RDMParams", "Trace",
    "n_choices", "parse_model_spec", "read_dataset", "read_model_spec",
    "seeded_rng", "substream", "validate", "validate_dataset",
    "write_dataset", "write_model_spec",
    "ddm", "lba", "rdm", "models", "inference", "viz",
    "sample", "pdf", "logpdf", "cdf", "trace", "choice_prob", "param_names",
    "loglik", "pointwise_loglik", "fit_mle", "sample_posterior",
    "summarystats",
]

__version__ = "0.1.0"

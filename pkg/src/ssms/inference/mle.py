"""Maximum-likelihood estimation by Nelder-Mead on the unconstrained scale."""

import dataclasses
import json
import math

import numpy as np
from scipy.optimize import minimize

from ..models import param_names, params_to_vector, vector_to_params
from .likelihood import dataset_loglik
from .transforms import transforms_for

__all__ = ["FitResult", "fit_mle", "write_fit_result", "read_fit_result"]


@dataclasses.dataclass(frozen=True)
class FitResult:
    kind: str
    names: tuple
    estimate: np.ndarray
    loglik: float
    converged: bool
    n_evals: int

    @property
    def spec(self):
        return vector_to_params(self.kind, self.estimate)

    def to_dict(self):
        return {"model": self.kind,
                "estimate": {n: float(v)
                             for n, v in zip(self.names, self.estimate)},
                "loglik": self.loglik,
                "converged": self.converged,
                "n_evals": self.n_evals}


def write_fit_result(fr, path):
    with open(path, "w", newline="\n") as fh:
        json.dump(fr.to_dict(), fh, indent=2)
        fh.write("\n")


def read_fit_result(path):
    with open(path) as fh:
        d = json.load(fh)
    names = tuple(d["estimate"])
    return FitResult(kind=d["model"], names=names,
                     estimate=np.array([d["estimate"][n] for n in names]),
                     loglik=d["loglik"], converged=d["converged"],
                     n_evals=d["n_evals"])


def fit_mle(model_kind, ds, init, simplex_scale=0.1, maxfev=100_000,
            fatol=1e-8, xatol=1e-6):
    """Maximize dataset_loglik over the model's parameters.

    ``init`` is a natural-scale parameter vector (param_names order).  The
    search runs on the unconstrained transform of the parameters, with an
    explicit initial simplex of the given edge scale, and stops when the
    simplex log-likelihood spread falls below ``fatol`` (or at ``maxfev``
    evaluations).
    """
    if len(ds) == 0:
        raise ValueError("cannot fit an empty dataset")
    if hasattr(init, "tau"):
        init = params_to_vector(init)
    init = np.asarray(init, dtype=np.float64)
    names = tuple(param_names(model_kind, init.size - 3))
    if init.size != len(names):
        raise ValueError(f"expected {len(names)} parameters for {model_kind}")
    tf = transforms_for(model_kind, init.size - 3, float(ds.rt.min()))

    def objective(y):
        x = tf.to_natural(y)
        try:
            spec = vector_to_params(model_kind, x)
            return -dataset_loglik(spec, ds)
        except ValueError:
            return math.inf

    y0 = tf.to_unconstrained(init)
    f0 = objective(y0)
    if not math.isfinite(f0):
        raise ValueError("log-likelihood is not finite at init; start from "
                         "parameters that give every trial positive density")

    simplex = np.vstack([y0] + [y0 + simplex_scale * e
                                for e in np.eye(y0.size)])
    res = minimize(objective, y0, method="Nelder-Mead",
                   options={"initial_simplex": simplex, "fatol": fatol,
                            "xatol": xatol, "maxfev": maxfev})
    est = tf.to_natural(res.x)
    return FitResult(kind=model_kind, names=names, estimate=est,
                     loglik=-float(res.fun), converged=bool(res.success),
                     n_evals=int(res.nfev))

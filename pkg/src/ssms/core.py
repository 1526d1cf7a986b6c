"""Shared model/data plumbing: parameter sets, trial data, file I/O, RNG.

Three model families are supported, each a joint distribution over a
discrete choice and a continuous response time (seconds):

* ``DDMParams`` -- two-boundary drift diffusion (choice 1 = upper boundary,
  choice 2 = lower boundary).
* ``LBAParams`` -- linear ballistic accumulators racing to a common
  threshold ``b = A + k``.
* ``RDMParams`` -- independent single-boundary diffusion racers, same
  threshold convention.

Parameter objects are immutable and carry no behaviour; ``validate`` checks
the domain constraints and every sampling/likelihood routine calls it on
entry.
"""

import dataclasses
import json
import math
from typing import NamedTuple, Optional, Union

import numpy as np

__all__ = [
    "DDMParams", "LBAParams", "RDMParams", "ModelSpec",
    "ChoiceRT", "Dataset", "Trace",
    "validate", "n_choices",
    "read_dataset", "write_dataset", "validate_dataset",
    "parse_model_spec", "model_spec_to_dict", "read_model_spec",
    "write_model_spec",
    "seeded_rng", "substream",
]


@dataclasses.dataclass(frozen=True)
class DDMParams:
    """Two-boundary diffusion: drift nu, boundary separation alpha > 0,
    non-decision time tau >= 0, relative start z in (0, 1).

    The within-trial diffusion coefficient is fixed at 1 (scaling
    convention), so alpha and nu are in units of that noise scale.
    """
    nu: float
    alpha: float
    tau: float
    z: float


@dataclasses.dataclass(frozen=True)
class LBAParams:
    """Linear ballistic accumulators.

    Each accumulator i starts at a point drawn uniformly from [0, A],
    then rises linearly with a trial-level drift drawn from
    Normal(nu[i], sigma) until it reaches the threshold b = A + k.
    """
    nu: tuple
    A: float
    k: float
    tau: float
    sigma: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "nu", tuple(float(v) for v in self.nu))

    @property
    def b(self):
        return self.A + self.k


@dataclasses.dataclass(frozen=True)
class RDMParams:
    """Racing single-boundary diffusions.

    Each racer i starts uniformly in [0, A] and diffuses with drift nu[i]
    (unit diffusion) toward the common threshold b = A + k.  Drifts must be
    strictly positive so every racer finishes almost surely.
    """
    nu: tuple
    k: float
    A: float
    tau: float

    def __post_init__(self):
        object.__setattr__(self, "nu", tuple(float(v) for v in self.nu))

    @property
    def b(self):
        return self.A + self.k


ModelSpec = Union[DDMParams, LBAParams, RDMParams]


class ChoiceRT(NamedTuple):
    """One trial: 1-based choice index and response time in seconds."""
    choice: int
    rt: float


def _finite(x):
    try:
        return math.isfinite(x)
    except TypeError:
        return False


def validate(spec):
    """Check all domain constraints of a parameter set.

    Returns the parameter set unchanged if valid, else raises
    ``ValueError`` naming the first violated constraint.  Never raises
    anything else.
    """
    if isinstance(spec, DDMParams):
        if not _finite(spec.nu):
            raise ValueError("drift nu must be finite")
        if not _finite(spec.alpha) or spec.alpha <= 0:
            raise ValueError("boundary separation alpha must be > 0")
        if not _finite(spec.tau) or spec.tau < 0:
            raise ValueError("non-decision time tau must be >= 0")
        if not _finite(spec.z) or not 0.0 < spec.z < 1.0:
            raise ValueError("relative start z must lie in (0, 1)")
        return spec
    if isinstance(spec, LBAParams):
        if len(spec.nu) < 2:
            raise ValueError("need at least 2 accumulators (len(nu) >= 2)")
        if not all(_finite(v) for v in spec.nu):
            raise ValueError("drift nu must be finite")
        if not _finite(spec.A) or spec.A <= 0:
            raise ValueError("maximum start point A must be > 0")
        if not _finite(spec.k) or spec.k <= 0:
            raise ValueError("threshold gap k must be > 0")
        if not _finite(spec.tau) or spec.tau < 0:
            raise ValueError("non-decision time tau must be >= 0")
        if not _finite(spec.sigma) or spec.sigma <= 0:
            raise ValueError("drift standard deviation sigma must be > 0")
        return spec
    if isinstance(spec, RDMParams):
        if len(spec.nu) < 2:
            raise ValueError("need at least 2 accumulators (len(nu) >= 2)")
        if not all(_finite(v) and v > 0 for v in spec.nu):
            raise ValueError("drift must be positive")
        if not _finite(spec.k) or spec.k <= 0:
            raise ValueError("threshold gap k must be > 0")
        if not _finite(spec.A) or spec.A <= 0:
            raise ValueError("maximum start point A must be > 0")
        if not _finite(spec.tau) or spec.tau < 0:
            raise ValueError("non-decision time tau must be >= 0")
        return spec
    raise ValueError(f"unknown model spec type: {type(spec).__name__}")


def n_choices(spec):
    """Number of response options the model can produce."""
    if isinstance(spec, DDMParams):
        return 2
    return len(spec.nu)


class Dataset:
    """Ordered collection of (choice, rt) trials.

    ``choice`` and ``rt`` are parallel read-only arrays; ``meta`` records
    how synthetic data was generated (seed, spec, note) and is not
    serialized to CSV.
    """

    def __init__(self, choice, rt, meta=None):
        choice = np.asarray(choice, dtype=np.int64)
        rt = np.asarray(rt, dtype=np.float64)
        if choice.shape != rt.shape or choice.ndim != 1:
            raise ValueError("choice and rt must be 1-D arrays of equal length")
        if choice.size and choice.min() < 1:
            raise ValueError("choice indices are 1-based and must be >= 1")
        if rt.size and (not np.all(np.isfinite(rt)) or rt.min() <= 0):
            raise ValueError("rt must be positive and finite")
        choice.setflags(write=False)
        rt.setflags(write=False)
        self.choice = choice
        self.rt = rt
        self.meta = dict(meta) if meta else {}

    def __len__(self):
        return self.choice.size

    def __getitem__(self, i):
        return ChoiceRT(int(self.choice[i]), float(self.rt[i]))

    def __iter__(self):
        for c, t in zip(self.choice, self.rt):
            yield ChoiceRT(int(c), float(t))

    def __eq__(self, other):
        if not isinstance(other, Dataset):
            return NotImplemented
        return (np.array_equal(self.choice, other.choice)
                and np.array_equal(self.rt, other.rt))

    def __repr__(self):
        return f"Dataset(n={len(self)})"


def validate_dataset(ds, spec):
    """Check that every choice index is legal for the given spec."""
    m = n_choices(spec)
    if len(ds) and ds.choice.max() > m:
        bad = int(ds.choice.max())
        raise ValueError(f"choice {bad} out of range for a {m}-choice model")
    return ds


@dataclasses.dataclass(frozen=True)
class Trace:
    """Latent evidence paths of a single simulated trial.

    ``t`` is a strictly increasing grid starting at the non-decision time;
    the final grid point is the (interpolated) threshold crossing.
    ``paths`` has one row per accumulator; for the two-boundary diffusion
    there is a single path and ``thresholds`` holds the (upper, lower)
    bound pair.  ``winner`` is 1-based.
    """
    t: np.ndarray
    paths: np.ndarray
    thresholds: np.ndarray
    winner: int
    crossing_time: float


# ---------------------------------------------------------------------------
# dataset CSV I/O

_HEADER = "choice,rt"


def read_dataset(path):
    """Read a ``choice,rt`` CSV.  Raises ValueError with the offending
    line number on any malformed content."""
    with open(path, "r", encoding="utf-8", newline="") as fh:
        text = fh.read()
    lines = text.split("\n")
    # trailing newline produces one empty tail entry; drop it
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise ValueError(f"{path}: empty file")
    header = lines[0].rstrip("\r")
    if header != _HEADER:
        raise ValueError(f"{path}: line 1: expected header '{_HEADER}', "
                         f"got '{header}'")
    choices = []
    rts = []
    for i, raw in enumerate(lines[1:], start=2):
        line = raw.rstrip("\r")
        if line == "":
            raise ValueError(f"{path}: line {i}: blank line")
        parts = line.split(",")
        if len(parts) != 2:
            raise ValueError(f"{path}: line {i}: expected 2 fields, "
                             f"got {len(parts)}")
        try:
            c = int(parts[0])
        except ValueError:
            raise ValueError(f"{path}: line {i}: choice '{parts[0]}' is not "
                             "an integer") from None
        if c < 1:
            raise ValueError(f"{path}: line {i}: choice must be >= 1")
        try:
            t = float(parts[1])
        except ValueError:
            raise ValueError(f"{path}: line {i}: rt '{parts[1]}' is not "
                             "a number") from None
        if not math.isfinite(t) or t <= 0:
            raise ValueError(f"{path}: line {i}: rt must be positive "
                             "and finite")
        choices.append(c)
        rts.append(t)
    return Dataset(choices, rts)


def write_dataset(ds, path):
    """Write a dataset as ``choice,rt`` CSV (LF line endings).

    rt values carry 17 significant digits so a write/read round trip is
    exact for any float64.
    """
    with open(path, "w", encoding="utf-8", newline="") as fh:
        fh.write(_HEADER + "\n")
        for c, t in zip(ds.choice, ds.rt):
            fh.write(f"{c},{t:.17g}\n")


# ---------------------------------------------------------------------------
# model-spec JSON

_MODEL_NAMES = {"ddm": DDMParams, "lba": LBAParams, "rdm": RDMParams}


def parse_model_spec(obj):
    """Build a ModelSpec from ``{"model": ..., "params": {...}}``."""
    if not isinstance(obj, dict) or "model" not in obj:
        raise ValueError("model spec must be an object with a 'model' field")
    name = obj["model"]
    if name not in _MODEL_NAMES:
        raise ValueError(f"unknown model name '{name}' "
                         "(expected ddm, lba, or rdm)")
    params = obj.get("params")
    if not isinstance(params, dict):
        raise ValueError("model spec needs a 'params' object")

    def need(key):
        if key not in params:
            raise ValueError(f"{name} spec is missing parameter '{key}'")
        return params[key]

    if name == "ddm":
        nu = need("nu")
        if isinstance(nu, (list, tuple)):
            raise ValueError("ddm drift nu must be a scalar")
        return DDMParams(nu=float(nu), alpha=float(need("alpha")),
                         tau=float(need("tau")), z=float(need("z")))
    nu = need("nu")
    if not isinstance(nu, (list, tuple)):
        raise ValueError(f"{name} drift nu must be an array")
    if name == "lba":
        return LBAParams(nu=tuple(float(v) for v in nu),
                         A=float(need("A")), k=float(need("k")),
                         tau=float(need("tau")),
                         sigma=float(params.get("sigma", 1.0)))
    return RDMParams(nu=tuple(float(v) for v in nu),
                     k=float(need("k")), A=float(need("A")),
                     tau=float(need("tau")))


def model_spec_to_dict(spec):
    if isinstance(spec, DDMParams):
        return {"model": "ddm",
                "params": {"nu": spec.nu, "alpha": spec.alpha,
                           "tau": spec.tau, "z": spec.z}}
    if isinstance(spec, LBAParams):
        return {"model": "lba",
                "params": {"nu": list(spec.nu), "A": spec.A, "k": spec.k,
                           "tau": spec.tau, "sigma": spec.sigma}}
    if isinstance(spec, RDMParams):
        return {"model": "rdm",
                "params": {"nu": list(spec.nu), "k": spec.k, "A": spec.A,
                           "tau": spec.tau}}
    raise ValueError(f"unknown model spec type: {type(spec).__name__}")


def read_model_spec(path):
    with open(path, "r", encoding="utf-8") as fh:
        try:
            obj = json.load(fh)
        except json.JSONDecodeError as e:
            raise ValueError(f"{path}: invalid JSON: {e}") from None
    return parse_model_spec(obj)


def write_model_spec(spec, path):
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(model_spec_to_dict(spec), fh, indent=2)
        fh.write("\n")


# ---------------------------------------------------------------------------
# RNG

def substream(seed, index):
    """Independent RNG stream ``index`` under a master seed.

    Streams are Philox counter-based generators keyed by the 128-bit pair
    (seed, index), so stream i is statistically independent of stream j for
    i != j and identical across runs, platforms, and thread counts.  All
    per-chain / per-block parallelism derives its randomness this way.
    """
    key = np.array([np.uint64(seed), np.uint64(index)], dtype=np.uint64)
    return np.random.Generator(np.random.Philox(key=key))


def seeded_rng(seed):
    """Master RNG stream for a 64-bit seed (== ``substream(seed, 0)``)."""
    return substream(seed, 0)

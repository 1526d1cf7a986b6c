"""Racing diffusion figures: paneled RT histograms and latent traces.

Emits two SVGs into demos/out/: a per-choice histogram of simulated
data with the analytic density drawn on top, and five simulated
evidence-accumulation trajectories with the decision threshold.
"""

import pathlib

import ssms
from ssms import RDMParams
from ssms.viz import plot_histogram, plot_model

out = pathlib.Path(__file__).parent / "out"
out.mkdir(exist_ok=True)

p = RDMParams(nu=(2.0, 1.0), k=0.5, A=1.0, tau=0.3)
ds = ssms.sample(p, 20_000, seed=9)

# one panel per choice; bars are jointly normalized so total area is 1,
# which lets the defective pdf overlay sit directly on the bars
plot_histogram(ds, out / "rdm_histogram.svg", spec=p)
print("wrote", out / "rdm_histogram.svg")

# five trials of the latent race; each trial draws one path per
# accumulator, the dashed line is the shared threshold b = A + k
plot_model(p, 5, 0.0, 1.5, out / "rdm_traces.svg", seed=3)
print("wrote", out / "rdm_traces.svg")

# renders are pure functions of (inputs, seed): re-running reproduces
# byte-identical files, so figures can live under version control
plot_model(p, 5, 0.0, 1.5, out / "rdm_traces_again.svg", seed=3)
a = (out / "rdm_traces.svg").read_bytes()
b = (out / "rdm_traces_again.svg").read_bytes()
print("byte-identical re-render:", a == b)
(out / "rdm_traces_again.svg").unlink()

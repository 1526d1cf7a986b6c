"""Bayesian fit of the linear ballistic accumulator.

Simulates 100 trials, samples the posterior with adaptive random-walk
Metropolis under the default priors (standard normal drifts, truncated
normals on A and k, tau uniform below the fastest trial), then checks
convergence diagnostics and writes posterior density panels.
"""

import pathlib

import ssms
from ssms import LBAParams
from ssms.viz import plot_chains

out = pathlib.Path(__file__).parent / "out"
out.mkdir(exist_ok=True)

truth = LBAParams(nu=(3.0, 2.0), A=0.8, k=0.2, tau=0.3)
ds = ssms.sample(truth, 100, seed=104)

# 4 chains from overdispersed prior starts; counts kept small for demo
# speed, double both for production-grade diagnostics
chains = ssms.sample_posterior("lba", ds, n_chains=4, n_warmup=500,
                               n_samples=500, seed=9)
print(f"acceptance rates: {[f'{r:.2f}' for r in chains.accept_rate]}")

stats = ssms.summarystats(chains)
cols = ("mean", "sd", "mcse", "ess", "rhat")
print(f"{'param':<8}" + "".join(f"{c:>10}" for c in cols))
for name in chains.param_names:
    s = stats[name]
    print(f"{name:<8}" + "".join(f"{s[c]:>10.3g}" for c in cols))

true_vals = dict(zip(chains.param_names, (3.0, 2.0, 0.8, 0.2, 0.3)))
for name in chains.param_names:
    print(f"{name}: posterior mean {stats[name]['mean']:.3f}"
          f"  truth {true_vals[name]}")

plot_chains(chains, out / "lba_posterior.svg")
print("wrote", out / "lba_posterior.svg")

"""Command-line interface: simulate, loglik, fit, plot.

Exit codes: 0 success, 1 usage error (bad flags, missing files, missing
required seed), 2 domain or numeric error (invalid parameters or data,
failed fits).  Every stochastic command takes a mandatory --seed, so any
invocation can be replayed byte for byte.
"""

import argparse
import math
import os
import sys

from . import models, viz
from .core import read_dataset, read_model_spec, write_dataset
from .inference import (
    dataset_loglik,
    fit_mle,
    pointwise_loglik,
    read_chains,
    sample_posterior,
    summarystats,
    write_chains,
    write_fit_result,
)


class _Usage(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    # argparse exits with status 2 on bad usage; the contract here is 1
    def error(self, message):
        self.print_usage(sys.stderr)
        raise _Usage(f"{self.prog}: error: {message}")


def _existing(path, what):
    if not os.path.exists(path):
        raise _Usage(f"{what} file not found: {path}")
    return path


def _build_parser():
    parser = _Parser(prog="ssms",
                     description="Sequential sampling models: simulate, "
                                 "evaluate, fit, and plot DDM/LBA/RDM "
                                 "choice-RT data.")
    sub = parser.add_subparsers(dest="command", metavar="command")
    sub.required = True

    p = sub.add_parser("simulate", help="draw (choice, rt) trials from a "
                                        "model and write a dataset CSV")
    p.add_argument("--model", required=True, help="model spec JSON")
    p.add_argument("--n", required=True, type=int, help="number of trials")
    p.add_argument("--seed", required=True, type=int, help="RNG seed")
    p.add_argument("--out", required=True, help="output dataset CSV")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("loglik", help="total log-likelihood of a dataset "
                                      "under a model")
    p.add_argument("--model", required=True, help="model spec JSON")
    p.add_argument("--data", required=True, help="dataset CSV")
    p.add_argument("--out", help="optional per-trial log-likelihood CSV")
    p.set_defaults(func=cmd_loglik)

    p = sub.add_parser("fit", help="fit model parameters by MLE or MCMC")
    p.add_argument("--model", required=True,
                   help="model spec JSON (kind + starting values)")
    p.add_argument("--data", required=True, help="dataset CSV")
    p.add_argument("--method", required=True, choices=["mle", "mcmc"])
    p.add_argument("--out", help="output path (fit JSON, or chains CSV "
                                 "with JSON sidecar)")
    p.add_argument("--seed", type=int, help="RNG seed (mcmc; required)")
    p.add_argument("--chains", type=int, help="number of chains (mcmc)")
    p.add_argument("--warmup", type=int, help="warmup draws per chain "
                                              "(mcmc)")
    p.add_argument("--samples", type=int, help="retained draws per chain "
                                               "(mcmc)")
    p.add_argument("--threads", type=int, help="worker threads, one chain "
                                               "each (mcmc)")
    p.set_defaults(func=cmd_fit)

    p = sub.add_parser("plot", help="emit an SVG figure")
    p.add_argument("kind", choices=["histogram", "model", "chains"])
    p.add_argument("--data", help="dataset CSV (histogram) or chains CSV "
                                  "(chains)")
    p.add_argument("--model", help="model spec JSON")
    p.add_argument("--out", required=True, help="output SVG path")
    p.add_argument("--bins", type=int, help="histogram bin count "
                                            "(default Freedman-Diaconis)")
    p.add_argument("--n-sim", type=int, default=5,
                   help="simulated trace sets (model)")
    p.add_argument("--seed", type=int, help="RNG seed (model; required)")
    p.add_argument("--t-start", type=float, default=0.0,
                   help="time axis start (model)")
    p.add_argument("--t-stop", type=float, help="time axis end (model; "
                                                "required)")
    p.add_argument("--t-len", type=int, default=200,
                   help="overlay grid length (histogram)")
    p.set_defaults(func=cmd_plot)
    return parser


def cmd_simulate(args):
    spec = read_model_spec(_existing(args.model, "model"))
    ds = models.sample(spec, args.n, seed=args.seed)
    write_dataset(ds, args.out)
    return 0


def cmd_loglik(args):
    spec = read_model_spec(_existing(args.model, "model"))
    ds = read_dataset(_existing(args.data, "data"))
    total = dataset_loglik(spec, ds)
    print(f"{total:.17g}")
    if args.out:
        per_trial = pointwise_loglik(spec, ds)
        with open(args.out, "w", newline="\n") as fh:
            fh.write("loglik\n")
            for v in per_trial:
                fh.write(f"{v:.17g}\n")
    return 0


def _print_summary_table(stats):
    cols = ["mean", "sd", "mcse", "ess", "rhat"]
    print(f"{'param':<10}" + "".join(f"{c:>12}" for c in cols))
    for name, s in stats.items():
        print(f"{name:<10}" + "".join(f"{s[c]:>12.4g}" for c in cols))


def cmd_fit(args):
    spec = read_model_spec(_existing(args.model, "model"))
    ds = read_dataset(_existing(args.data, "data"))
    kind = models.model_kind(spec)
    if args.method == "mle":
        for flag in ("seed", "chains", "warmup", "samples", "threads"):
            if getattr(args, flag) is not None:
                raise _Usage(f"--{flag} only applies to --method mcmc")
        fit = fit_mle(kind, ds, models.params_to_vector(spec))
        for name, value in zip(fit.names, fit.estimate):
            print(f"{name:<10}{value:>14.6g}")
        print(f"loglik    {fit.loglik:>14.6g}")
        print(f"converged {fit.converged}")
        if args.out:
            write_fit_result(fit, args.out)
        return 0 if fit.converged else 2
    if args.seed is None:
        raise _Usage("--seed is required for --method mcmc")
    chains = sample_posterior(
        kind, ds,
        n_chains=args.chains if args.chains is not None else 4,
        n_warmup=args.warmup if args.warmup is not None else 1000,
        n_samples=args.samples if args.samples is not None else 1000,
        seed=args.seed,
        n_threads=args.threads if args.threads is not None else 1)
    _print_summary_table(summarystats(chains))
    if args.out:
        write_chains(chains, args.out)
    return 0


def cmd_plot(args):
    if args.kind == "histogram":
        if args.data is None:
            raise _Usage("plot histogram needs --data")
        ds = read_dataset(_existing(args.data, "data"))
        spec = (read_model_spec(_existing(args.model, "model"))
                if args.model else None)
        viz.plot_histogram(ds, args.out, spec=spec, bins=args.bins,
                           t_len=args.t_len)
    elif args.kind == "model":
        if args.model is None:
            raise _Usage("plot model needs --model")
        if args.seed is None:
            raise _Usage("--seed is required for plot model")
        if args.t_stop is None:
            raise _Usage("plot model needs --t-stop")
        spec = read_model_spec(_existing(args.model, "model"))
        viz.plot_model(spec, args.n_sim, args.t_start, args.t_stop,
                       args.out, seed=args.seed)
    else:
        if args.data is None:
            raise _Usage("plot chains needs --data (chains CSV)")
        chains = read_chains(_existing(args.data, "chains"))
        viz.plot_chains(chains, args.out)
    return 0


def main(argv=None):
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except _Usage as exc:
        print(str(exc), file=sys.stderr)
        return 1
    try:
        return args.func(args)
    except _Usage as exc:
        print(str(exc), file=sys.stderr)
        return 1
    except (ValueError, RuntimeError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())

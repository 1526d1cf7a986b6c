#!/usr/bin/env python3
"""Regenerate the frozen Monte Carlo reference values under tests/golden/.

The committed golden values are produced by this script, never typed in by
hand.  The diffusion reference run is a brute-force Euler-Maruyama simulation
at dt=1e-5 with 10^7 trials, deliberately independent of the library code in
src/ (it shares no modules with it).  On one core the full run takes about an
hour, so it is split into resumable chunks:

    python scripts/regen_golden.py ddm-mc --all-chunks   # compute (resumable)
    python scripts/regen_golden.py ddm-mc --merge        # write ddm_mc.json

Partial chunk tallies land in tests/golden/_partial/ and can be deleted after
the merge.
"""

import argparse
import json
import os
import sys

import numpy as np
from numba import njit

HERE = os.path.dirname(os.path.abspath(__file__))
GOLDEN_DIR = os.path.join(HERE, "..", "tests", "golden")
PARTIAL_DIR = os.path.join(GOLDEN_DIR, "_partial")

# Fixed two-boundary diffusion setup: drift 1.0, boundaries 0 and 0.8,
# start 0.5 * 0.8, non-decision time 0.3.
NU = 1.0
ALPHA = 0.8
TAU = 0.3
Z = 0.5

DT = 1e-5
SEED = 104
N_CHUNKS = 20
CHUNK_TRIALS = 500_000          # 20 chunks -> 1e7 trials total
N_CDF = 1_000_000               # first two chunks feed the CDF fraction
T_PDF = 0.5                     # density checked at this time, choice 1
FD_H = 0.01                     # central-difference half-width
T_CDF = 0.6                     # CDF fraction checked at this time, choice 1
MAX_STEPS = 10_000_000


@njit(cache=True)
def _run_chunk(n, seed, nu, alpha, tau, z, dt, max_steps,
               t_lo, t_hi, t_cdf):
    """Euler-Maruyama first-passage tallies for one chunk of trials.

    Returns counts of: upper-boundary exits, upper exits with rt <= t_lo,
    rt <= t_hi, and rt <= t_cdf.
    """
    np.random.seed(seed)
    mu_dt = nu * dt
    sq_dt = np.sqrt(dt)
    n_up = 0
    n_lo = 0
    n_hi = 0
    n_cdf = 0
    # buffered draws: ~2x faster than per-step scalar normals
    buf_len = 16384
    buf = np.random.standard_normal(buf_len)
    pos = 0
    for _ in range(n):
        x = z * alpha
        k = 0
        while k < max_steps:
            if pos == buf_len:
                buf = np.random.standard_normal(buf_len)
                pos = 0
            xp = x
            x = x + mu_dt + sq_dt * buf[pos]
            pos += 1
            if x >= alpha:
                rt = tau + (k + (alpha - xp) / (x - xp)) * dt
                n_up += 1
                if rt <= t_lo:
                    n_lo += 1
                if rt <= t_hi:
                    n_hi += 1
                if rt <= t_cdf:
                    n_cdf += 1
                break
            if x <= 0.0:
                break
            k += 1
    return n_up, n_lo, n_hi, n_cdf


def _chunk_path(i):
    return os.path.join(PARTIAL_DIR, f"ddm_mc_chunk_{i:02d}.json")


def cmd_ddm_mc(args):
    os.makedirs(PARTIAL_DIR, exist_ok=True)
    if args.merge:
        return _merge()
    chunks = range(N_CHUNKS) if args.all_chunks else [args.chunk]
    for i in chunks:
        path = _chunk_path(i)
        if os.path.exists(path):
            print(f"chunk {i}: already done, skipping")
            continue
        n_up, n_lo, n_hi, n_cdf = _run_chunk(
            CHUNK_TRIALS, SEED + i, NU, ALPHA, TAU, Z, DT, MAX_STEPS,
            T_PDF - FD_H, T_PDF + FD_H, T_CDF)
        rec = {"chunk": i, "n": CHUNK_TRIALS, "n_up": int(n_up),
               "n_rt_le_lo": int(n_lo), "n_rt_le_hi": int(n_hi),
               "n_rt_le_cdf": int(n_cdf)}
        with open(path, "w") as fh:
            json.dump(rec, fh)
        print(f"chunk {i}: {rec}")
    return 0


def _merge():
    recs = []
    for i in range(N_CHUNKS):
        path = _chunk_path(i)
        if not os.path.exists(path):
            print(f"missing chunk {i}; run --all-chunks first", file=sys.stderr)
            return 1
        with open(path) as fh:
            recs.append(json.load(fh))
    n_total = sum(r["n"] for r in recs)
    n_up = sum(r["n_up"] for r in recs)
    n_lo = sum(r["n_rt_le_lo"] for r in recs)
    n_hi = sum(r["n_rt_le_hi"] for r in recs)
    # CDF fraction and choice fraction use the first N_CDF trials only.
    k = N_CDF // CHUNK_TRIALS
    n_cdf = sum(r["n_rt_le_cdf"] for r in recs[:k])
    n_up_1m = sum(r["n_up"] for r in recs[:k])

    p_lo = n_lo / n_total
    p_hi = n_hi / n_total
    pdf_fd = (p_hi - p_lo) / (2.0 * FD_H)
    # binomial se of the window mass, propagated through the difference quotient
    window = p_hi - p_lo
    pdf_se = np.sqrt(window * (1 - window) / n_total) / (2.0 * FD_H)

    out = {
        "comment": "Monte Carlo reference values; regenerate with scripts/regen_golden.py",
        "params": {"nu": NU, "alpha": ALPHA, "tau": TAU, "z": Z},
        "dt": DT,
        "seed": SEED,
        "n_trials": n_total,
        "pdf_choice1": {"t": T_PDF, "h": FD_H, "value": pdf_fd,
                        "mc_se": float(pdf_se)},
        "cdf_choice1": {"t": T_CDF, "n": N_CDF, "value": n_cdf / N_CDF},
        "frac_choice1_1e6": n_up_1m / N_CDF,
        "frac_choice1_full": n_up / n_total,
    }
    dest = os.path.join(GOLDEN_DIR, "ddm_mc.json")
    with open(dest, "w") as fh:
        json.dump(out, fh, indent=2)
        fh.write("\n")
    print(f"wrote {dest}")
    print(json.dumps(out, indent=2))
    return 0


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__)
    sub = ap.add_subparsers(dest="cmd", required=True)
    mc = sub.add_parser("ddm-mc", help="diffusion Monte Carlo reference run")
    mc.add_argument("--chunk", type=int, default=None)
    mc.add_argument("--all-chunks", action="store_true")
    mc.add_argument("--merge", action="store_true")
    args = ap.parse_args(argv)
    if args.cmd == "ddm-mc":
        if not args.merge and not args.all_chunks and args.chunk is None:
            ap.error("pick --chunk N, --all-chunks, or --merge")
        return cmd_ddm_mc(args)
    return 1


if __name__ == "__main__":
    sys.exit(main())

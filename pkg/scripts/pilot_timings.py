"""One-off feasibility measurements for test tolerances and runtime budgets.

Not part of the package or test suite; run by hand to size tolerances.
"""

import time

import numpy as np

import ssms
from ssms import DDMParams, LBAParams, RDMParams
from ssms import ddm, lba, rdm


def ks_conditional(ds, spec, choice):
    sel = np.sort(ds.rt[ds.choice == choice])
    n = sel.size
    f = ssms.cdf(spec, choice, sel) / ssms.choice_prob(spec, choice)
    i = np.arange(1, n + 1)
    return max(np.max(np.abs(f - i / n)), np.max(np.abs(f - (i - 1) / n)))


def main():
    p = DDMParams(nu=1.0, alpha=0.8, tau=0.3, z=0.5)
    pl = LBAParams(nu=(3.0, 2.0), A=0.8, k=0.2, tau=0.3)
    pr = RDMParams(nu=(2.0, 1.0), k=0.5, A=1.0, tau=0.3)

    t0 = time.time()
    ds = ssms.sample(p, 100_000, seed=42)
    t1 = time.time()
    print(f"ddm sample 1e5: {t1-t0:.1f}s frac1={np.mean(ds.choice==1):.5f}", flush=True)

    t0 = time.time()
    k1 = ks_conditional(ds, p, 1)
    k2 = ks_conditional(ds, p, 2)
    print(f"ddm KS: {k1:.4f} {k2:.4f} ({time.time()-t0:.1f}s)", flush=True)

    big = ssms.sample(p, 300_000, seed=43)
    fr = np.mean(big.choice == 1)
    print(f"ddm frac1 n=3e5 (bias check): {fr:.5f} (SE 0.00084)", flush=True)

    t0 = time.time()
    dl = ssms.sample(pl, 100_000, seed=44)
    k1 = ks_conditional(dl, pl, 1)
    k2 = ks_conditional(dl, pl, 2)
    print(f"lba sample+KS 1e5: {k1:.4f} {k2:.4f} ({time.time()-t0:.1f}s)", flush=True)

    t0 = time.time()
    dr = ssms.sample(pr, 100_000, seed=45)
    k1 = ks_conditional(dr, pr, 1)
    k2 = ks_conditional(dr, pr, 2)
    print(f"rdm sample+KS 1e5: {k1:.4f} {k2:.4f} ({time.time()-t0:.1f}s)", flush=True)

    t0 = time.time()
    w = sum(ddm.trace(p, dt=1e-3, seed=s).winner == 1 for s in range(10_000))
    print(f"ddm 1e4 traces dt=1e-3: frac1={w/1e4:.4f} ({time.time()-t0:.1f}s)", flush=True)

    t0 = time.time()
    w = sum(rdm.trace(pr, dt=1e-3, seed=s).winner == 1 for s in range(10_000))
    print(f"rdm 1e4 traces dt=1e-3: frac1={w/1e4:.4f} ({time.time()-t0:.1f}s)", flush=True)

    t0 = time.time()
    w = sum(lba.trace(pl, seed=s).winner == 1 for s in range(10_000))
    print(f"lba 1e4 traces: frac1={w/1e4:.4f} ({time.time()-t0:.1f}s)", flush=True)

    t0 = time.time()
    d7 = ssms.sample(pl, 10_000_000, seed=46)
    h = 0.01
    n_lo = np.sum((d7.choice == 1) & (d7.rt <= 0.6 - h))
    n_hi = np.sum((d7.choice == 1) & (d7.rt <= 0.6 + h))
    fd = (n_hi - n_lo) / (2 * h) / d7.rt.size
    print(f"lba 1e7 FD pdf(1,0.6): {fd:.5f} analytic={ssms.pdf(pl,1,0.6):.5f} "
          f"({time.time()-t0:.1f}s)", flush=True)

    t0 = time.time()
    d7 = ssms.sample(pr, 10_000_000, seed=47)
    n_lo = np.sum((d7.choice == 1) & (d7.rt <= 0.8 - h))
    n_hi = np.sum((d7.choice == 1) & (d7.rt <= 0.8 + h))
    fd = (n_hi - n_lo) / (2 * h) / d7.rt.size
    print(f"rdm 1e7 FD pdf(1,0.8): {fd:.5f} analytic={ssms.pdf(pr,1,0.8):.5f} "
          f"({time.time()-t0:.1f}s)", flush=True)


if __name__ == "__main__":
    main()

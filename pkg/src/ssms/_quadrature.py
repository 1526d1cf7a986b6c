"""Cumulative integration of a vectorized pdf at many sorted points.

Evaluating a CDF at 1e5 sample points through repeated adaptive quadrature
is hopeless; instead the interval is split at every requested point, long
gaps are subdivided, and a fixed-order Gauss-Legendre rule integrates all
subsegments in one vectorized pdf call.  Accuracy is set by the rule order
and the subdivision width; for the smooth unimodal densities here, order 12
with 0.02 s segments is far below 1e-9 absolute error.
"""

import numpy as np

__all__ = ["cumulative_from_pdf"]


def cumulative_from_pdf(pdf_fn, t0, ts, max_width=0.02, order=12):
    """Integral of pdf_fn from t0 to each t in the ascending array ts.

    Points at or below t0 get 0.  ``pdf_fn`` must accept a 1-D array.
    """
    ts = np.asarray(ts, dtype=np.float64)
    if ts.ndim != 1:
        raise ValueError("ts must be 1-D")
    if ts.size == 0:
        return np.empty(0)
    if np.any(np.diff(ts) < 0):
        raise ValueError("ts must be sorted ascending")

    lo = np.concatenate(([t0], ts[:-1]))
    hi = ts.copy()
    # segments fully below the support start contribute nothing
    lo = np.maximum(lo, t0)
    hi = np.maximum(hi, t0)
    width = hi - lo

    n_sub = np.maximum(1, np.ceil(width / max_width)).astype(np.int64)
    total = int(n_sub.sum())
    sub_w = np.repeat(width / n_sub, n_sub)
    # index of each subsegment within its parent segment
    seg_start = np.concatenate(([0], np.cumsum(n_sub)[:-1]))
    within = np.arange(total) - np.repeat(seg_start, n_sub)
    sub_lo = np.repeat(lo, n_sub) + within * sub_w

    x, w = np.polynomial.legendre.leggauss(order)
    # map nodes from [-1, 1] onto each subsegment
    nodes = sub_lo[None, :] + (x[:, None] + 1.0) * 0.5 * sub_w[None, :]
    vals = pdf_fn(nodes.ravel()).reshape(order, total)
    sub_int = 0.5 * sub_w * (w @ vals)
    seg_int = np.add.reduceat(sub_int, seg_start)
    return np.cumsum(seg_int)

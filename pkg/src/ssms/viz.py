"""Deterministic SVG figures: RT histograms, accumulation traces, posteriors.

Histogram normalization is joint (defective): bar areas for choice c sum to
the empirical P(choice = c), so areas across all panels total 1 and the
unconditioned model pdf overlays each panel directly.  This differs from
per-panel conditional normalization, where each panel alone has area 1.

Output is SVG 1.1 on a fixed 600x400 canvas per panel, one panel per
choice or parameter, laid out as a horizontal strip.  Every number is
printed with 6 significant digits and no other state enters the emitter,
so a fixed (input, seed) pair yields byte-identical files.
"""

import math

import numpy as np

from . import models
from .core import n_choices, validate_dataset

__all__ = ["histogram_data", "density_overlay", "plot_histogram",
           "plot_model", "plot_chains"]

_W = 600
_H = 400
_ML, _MR, _MT, _MB = 64, 18, 36, 50

_TRACE_COLORS = ("#1f77b4", "#d62728", "#2ca02c", "#ff7f0e",
                 "#9467bd", "#8c564b", "#e377c2", "#7f7f7f")
_BAR_FILL = "#9ecae1"
_BAR_EDGE = "#4292c6"
_CURVE = "#d62728"
_KDE = "#1f77b4"


def _f(x):
    s = f"{float(x):.6g}"
    return "0" if s == "-0" else s


def _ticks(lo, hi, target=5):
    span = hi - lo
    if not (span > 0 and math.isfinite(span)):
        return [lo]
    raw = span / target
    mag = 10.0 ** math.floor(math.log10(raw))
    step = 10.0 * mag
    for mult in (1.0, 2.0, 5.0):
        if span / (mult * mag) <= target + 0.5:
            step = mult * mag
            break
    first = math.ceil(lo / step - 1e-9) * step
    out = []
    t = first
    while t <= hi + 1e-9 * span:
        out.append(0.0 if abs(t) < 1e-9 * span else t)
        t += step
    return out


class _Panel:
    """Maps data coordinates into one 600x400 canvas slot."""

    def __init__(self, index, xlim, ylim):
        self.ox = index * _W
        self.xlim = xlim
        self.ylim = ylim
        self.x0 = self.ox + _ML
        self.x1 = self.ox + _W - _MR
        self.y0 = _H - _MB
        self.y1 = _MT

    def sx(self, v):
        lo, hi = self.xlim
        return self.x0 + (v - lo) / (hi - lo) * (self.x1 - self.x0)

    def sy(self, v):
        lo, hi = self.ylim
        return self.y0 - (v - lo) / (hi - lo) * (self.y0 - self.y1)

    def frame(self, frag, title, xlabel, ylabel):
        frag.append(f'<rect x="{_f(self.x0)}" y="{_f(self.y1)}" '
                    f'width="{_f(self.x1 - self.x0)}" '
                    f'height="{_f(self.y0 - self.y1)}" '
                    'fill="none" stroke="#333333" stroke-width="1"/>')
        for t in _ticks(*self.xlim):
            if t < self.xlim[0] - 1e-12 or t > self.xlim[1] + 1e-12:
                continue
            x = self.sx(t)
            frag.append(f'<line x1="{_f(x)}" y1="{_f(self.y0)}" '
                        f'x2="{_f(x)}" y2="{_f(self.y0 + 5)}" '
                        'stroke="#333333" stroke-width="1"/>')
            frag.append(f'<text x="{_f(x)}" y="{_f(self.y0 + 19)}" '
                        'font-family="sans-serif" font-size="12" '
                        f'text-anchor="middle">{_f(t)}</text>')
        for t in _ticks(*self.ylim):
            if t < self.ylim[0] - 1e-12 or t > self.ylim[1] + 1e-12:
                continue
            y = self.sy(t)
            frag.append(f'<line x1="{_f(self.x0 - 5)}" y1="{_f(y)}" '
                        f'x2="{_f(self.x0)}" y2="{_f(y)}" '
                        'stroke="#333333" stroke-width="1"/>')
            frag.append(f'<text x="{_f(self.x0 - 8)}" y="{_f(y + 4)}" '
                        'font-family="sans-serif" font-size="12" '
                        f'text-anchor="end">{_f(t)}</text>')
        cx = (self.x0 + self.x1) / 2.0
        frag.append(f'<text x="{_f(cx)}" y="{_f(self.y1 - 12)}" '
                    'font-family="sans-serif" font-size="15" '
                    f'text-anchor="middle">{title}</text>')
        frag.append(f'<text x="{_f(cx)}" y="{_f(self.y0 + 38)}" '
                    'font-family="sans-serif" font-size="13" '
                    f'text-anchor="middle">{xlabel}</text>')
        ly = (self.y0 + self.y1) / 2.0
        frag.append(f'<text x="{_f(self.ox + 15)}" y="{_f(ly)}" '
                    'font-family="sans-serif" font-size="13" '
                    'text-anchor="middle" '
                    f'transform="rotate(-90 {_f(self.ox + 15)} {_f(ly)})">'
                    f'{ylabel}</text>')

    def polyline(self, frag, xs, ys, color, width="1.5", dash=None):
        pts = " ".join(f"{_f(self.sx(x))},{_f(self.sy(y))}"
                       for x, y in zip(xs, ys))
        extra = f' stroke-dasharray="{dash}"' if dash else ""
        frag.append(f'<polyline points="{pts}" fill="none" '
                    f'stroke="{color}" stroke-width="{width}"{extra}/>')


def _document(frag_body, n_panels):
    width = n_panels * _W
    head = [(f'<svg xmlns="http://www.w3.org/2000/svg" version="1.1" '
             f'width="{width}" height="{_H}" '
             f'viewBox="0 0 {width} {_H}">'),
            (f'<rect x="0" y="0" width="{width}" height="{_H}" '
             'fill="#ffffff"/>')]
    return "\n".join(head + frag_body + ["</svg>"]) + "\n"


def histogram_data(ds, bins=None):
    """Per-choice histogram under joint (defective) normalization.

    Heights are count / (n_total * bin width), so the area of choice c's
    panel is the empirical P(choice = c) and all panels together have
    area 1.  ``bins``: None for Freedman-Diaconis per panel, an int for
    equal-width bins per panel, or explicit shared edges.
    """
    if len(ds) == 0:
        raise ValueError("cannot histogram an empty dataset")
    n = len(ds)
    out = {}
    for c in np.unique(ds.choice):
        rts = ds.rt[ds.choice == c]
        if bins is None:
            edges = np.histogram_bin_edges(rts, bins="fd")
        elif np.ndim(bins) == 0:
            edges = np.histogram_bin_edges(rts, bins=int(bins))
        else:
            edges = np.asarray(bins, dtype=np.float64)
        counts, edges = np.histogram(rts, bins=edges)
        heights = counts / (n * np.diff(edges))
        out[int(c)] = {"edges": edges, "heights": heights}
    return out


def density_overlay(spec, t_start, t_stop, t_len):
    """Model pdf sampled on a shared grid, one curve per choice.

    Returns (grid, {choice: pdf values}); the values come from the model
    modules' pdf operations, so overlay and density agree exactly.
    """
    if t_len < 2:
        raise ValueError("need t_len >= 2")
    grid = np.linspace(float(t_start), float(t_stop), int(t_len))
    curves = {c: models.pdf(spec, c, grid)
              for c in range(1, n_choices(spec) + 1)}
    return grid, curves


def plot_histogram(ds, out, spec=None, bins=None, t_len=200):
    """Per-choice RT histogram panels, with a pdf overlay when a model
    spec is supplied.  Panels share x and y limits."""
    if spec is not None:
        validate_dataset(ds, spec)
        panel_choices = list(range(1, n_choices(spec) + 1))
    else:
        panel_choices = [int(c) for c in np.unique(ds.choice)]
    hd = histogram_data(ds, bins)

    lo = min(h["edges"][0] for h in hd.values())
    hi = max(h["edges"][-1] for h in hd.values())
    ymax = max(h["heights"].max() for h in hd.values())
    if spec is not None:
        grid, curves = density_overlay(spec, lo, hi, t_len)
        ymax = max(ymax, max(c.max() for c in curves.values()))
    ylim = (0.0, ymax * 1.08 if ymax > 0 else 1.0)
    xlim = (lo, hi)

    frag = []
    for i, c in enumerate(panel_choices):
        p = _Panel(i, xlim, ylim)
        if c in hd:
            edges = hd[c]["edges"]
            for j, h in enumerate(hd[c]["heights"]):
                if h <= 0:
                    continue
                x = p.sx(edges[j])
                w = p.sx(edges[j + 1]) - x
                y = p.sy(h)
                frag.append(f'<rect x="{_f(x)}" y="{_f(y)}" '
                            f'width="{_f(w)}" '
                            f'height="{_f(p.sy(0.0) - y)}" '
                            f'fill="{_BAR_FILL}" stroke="{_BAR_EDGE}" '
                            'stroke-width="0.5"/>')
        if spec is not None:
            p.polyline(frag, grid, curves[c], _CURVE)
        p.frame(frag, f"choice {c}", "rt (s)", "density")
    svg = _document(frag, len(panel_choices))
    with open(out, "w", newline="\n") as fh:
        fh.write(svg)


def plot_model(spec, n_sim, t_start, t_stop, out, seed, max_points=400):
    """Latent accumulation traces: one polyline per accumulator per
    simulation plus dashed threshold line(s); distinct thresholds are
    drawn once each."""
    if n_sim < 0:
        raise ValueError("need n_sim >= 0")
    t_start = float(t_start)
    t_stop = float(t_stop)
    if not t_stop > t_start:
        raise ValueError("need t_stop > t_start")
    traces = [models.trace(spec, seed=seed + i) for i in range(n_sim)]
    if models.model_kind(spec) == "ddm":
        thresholds = sorted({0.0, float(spec.alpha)})
    else:
        thresholds = [float(spec.b)]

    shown = []
    lo_y = 0.0
    hi_y = max(thresholds)
    for tr in traces:
        paths = np.atleast_2d(tr.paths)
        idx = np.flatnonzero((tr.t >= t_start) & (tr.t <= t_stop))
        if idx.size > max_points:
            sel = np.unique(np.linspace(0, idx.size - 1,
                                        max_points).round().astype(int))
            idx = idx[sel]
        if idx.size < 2:
            continue
        shown.append((tr.t[idx], paths[:, idx]))
        lo_y = min(lo_y, float(paths[:, idx].min()))
        hi_y = max(hi_y, float(paths[:, idx].max()))
    pad = 0.05 * (hi_y - lo_y) if hi_y > lo_y else 1.0
    ylim = (lo_y - pad, hi_y + pad)
    xlim = (t_start, t_stop)

    frag = []
    p = _Panel(0, xlim, ylim)
    for b in thresholds:
        p.polyline(frag, [t_start, t_stop], [b, b], "#555555",
                   width="1.5", dash="7 5")
    for t_sel, paths in shown:
        for a in range(paths.shape[0]):
            p.polyline(frag, t_sel, paths[a],
                       _TRACE_COLORS[a % len(_TRACE_COLORS)], width="1.2")
    p.frame(frag, f"{models.model_kind(spec)} evidence traces",
            "t (s)", "evidence")
    svg = _document(frag, 1)
    with open(out, "w", newline="\n") as fh:
        fh.write(svg)


def _kde(x, grid):
    # Gaussian kernel, Silverman bandwidth
    n = x.size
    sd = float(np.std(x, ddof=1)) if n > 1 else 0.0
    iqr = float(np.subtract(*np.percentile(x, [75, 25])))
    width = min(sd, iqr / 1.34) if iqr > 0 else sd
    if width <= 0:
        width = max(abs(float(np.mean(x))) * 1e-3, 1e-12)
    h = 0.9 * width * n ** -0.2
    z = (grid[None, :] - x[:, None]) / h
    return np.exp(-0.5 * z * z).sum(axis=0) / (n * h * math.sqrt(2 * math.pi))


def plot_chains(chains, out, grid_len=200):
    """Posterior density panel per parameter, pooled across chains
    (post-warmup draws only)."""
    post = chains.posterior
    if post.shape[1] < 1:
        raise ValueError("chains contain no post-warmup draws")
    frag = []
    for j, name in enumerate(chains.param_names):
        x = post[:, :, j].ravel()
        sd = float(np.std(x, ddof=1)) if x.size > 1 else 0.0
        pad = 3.0 * (sd if sd > 0 else max(abs(float(x[0])) * 1e-3, 1e-3))
        grid = np.linspace(float(x.min()) - pad, float(x.max()) + pad,
                           grid_len)
        dens = _kde(x, grid)
        ymax = float(dens.max())
        p = _Panel(j, (grid[0], grid[-1]),
                   (0.0, ymax * 1.08 if ymax > 0 else 1.0))
        p.polyline(frag, grid, dens, _KDE, width="1.8")
        p.frame(frag, name, "value", "density")
    svg = _document(frag, len(chains.param_names))
    with open(out, "w", newline="\n") as fh:
        fh.write(svg)

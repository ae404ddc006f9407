"""Vectorised CDFs from pointwise densities via Gauss-Legendre panels in w = sqrt(x)."""
from __future__ import annotations

from typing import Callable

import numpy as np
from numpy.polynomial import legendre


def panel_cdf(density: Callable[[float], float], w_end: float, w_peak: float,
              panels: int = 96, order: int = 12) -> Callable:
    """F(x) = int_0^x density, normalised so that F(w_end^2) = 1.

    Half of the panels are graded geometrically around w_peak, the rest are
    uniform up to w_end.  The density enters as 2 w density(w^2), which is
    bounded even for an x^(-1/2) singularity at the origin.  Inside a panel
    F is the antiderivative of the Legendre interpolant through the nodes.
    """
    left = np.geomspace(min(w_peak, w_end / 4) * 1e-3, min(w_peak * 8, w_end / 4), panels // 2)
    right = np.linspace(left[-1], w_end, panels - panels // 2 + 1)[1:]
    edges = np.unique(np.concatenate([[0.0], left, right]))
    edges = edges[edges <= w_end]
    if edges[-1] < w_end:
        edges = np.append(edges, w_end)
    nodes, _ = legendre.leggauss(order)
    # maps values at the nodes to Legendre coefficients
    to_coef = np.linalg.inv(legendre.legvander(nodes, order - 1))
    antider, base = [], [0.0]
    for lo, hi in zip(edges[:-1], edges[1:]):
        w = 0.5 * (hi - lo) * nodes + 0.5 * (hi + lo)
        vals = np.array([2 * wi * density(wi * wi) for wi in w])
        coef = legendre.legint(to_coef @ vals, lbnd=-1) * 0.5 * (hi - lo)
        antider.append(coef)
        base.append(base[-1] + legendre.legval(1.0, coef))
    total = base[-1]
    base = np.asarray(base[:-1])

    def cdf(x):
        x = np.asarray(x, dtype=float)
        w = np.sqrt(np.clip(x, 0.0, w_end * w_end))
        idx = np.clip(np.searchsorted(edges, w, side="right") - 1, 0, len(antider) - 1)
        out = np.empty_like(w)
        for i in np.unique(idx):
            sel = idx == i
            lo, hi = edges[i], edges[i + 1]
            t = (2 * w[sel] - lo - hi) / (hi - lo)
            out[sel] = base[i] + legendre.legval(t, antider[i])
        return np.clip(out / total, 0.0, 1.0)

    return cdf

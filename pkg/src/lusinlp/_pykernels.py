"""NumPy implementations of the hot loops (fallback for the compiled module)."""

from __future__ import annotations

import numpy as np


def pair_modulus(ts, vals, weights, deltas):
    """Max of ``sum_j w_j |vals[i, j] - vals[k, j]|`` over pairs in each distance bucket.

    ``ts`` must be sorted. Bucket ``b`` covers pairs with ``ts[k] - ts[i] <= deltas[b]``.
    """
    ts = np.asarray(ts, dtype=float)
    vals = np.asarray(vals, dtype=float)
    weights = np.asarray(weights, dtype=float)
    deltas = np.asarray(deltas, dtype=float)
    out = np.zeros(len(deltas))
    n = len(ts)
    if n < 2 or len(deltas) == 0:
        return out
    dmax = deltas.max()
    for off in range(1, n):
        dist = ts[off:] - ts[:-off]
        if dist.min() > dmax:
            break
        gap = np.abs(vals[off:] - vals[:-off]) @ weights
        for b, d in enumerate(deltas):
            sel = dist <= d
            if sel.any():
                out[b] = max(out[b], gap[sel].max())
    return out


def pairwise_sup(stack, weights):
    """``out[a, b] = max_r sum_j w_j |stack[a, r, j] - stack[b, r, j]|``."""
    stack = np.asarray(stack, dtype=float)
    weights = np.asarray(weights, dtype=float)
    m = stack.shape[0]
    out = np.zeros((m, m))
    for a in range(m):
        diff = np.abs(stack[a + 1:] - stack[a]) @ weights
        row = diff.max(axis=1) if diff.size else np.zeros(0)
        out[a, a + 1:] = row
        out[a + 1:, a] = row
    return out


_GL_X = np.array([-np.sqrt(0.6), 0.0, np.sqrt(0.6)])
_GL_W = np.array([5.0, 8.0, 5.0]) / 9.0


def affine_power_integral(u, v, a, b, p):
    """Elementwise ``int_u^v |a + b t|^p dt``."""
    u, v, a, b = (np.atleast_1d(np.asarray(x, dtype=float)) for x in (u, v, a, b))
    gu = np.abs(a + b * u)
    gv = np.abs(a + b * v)
    gmax = np.maximum(gu, gv)
    small = np.abs(b) * (v - u) <= 1e-6 * gmax
    flat = b == 0
    with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
        r = -a / b
        crosses = (~flat) & (r > u) & (r < v)
        num = np.where(crosses, gu ** (p + 1) + gv ** (p + 1), np.abs(gv ** (p + 1) - gu ** (p + 1)))
        closed = num / (np.abs(b) * (p + 1))
    mid = 0.5 * (u + v)
    half = 0.5 * (v - u)
    nodes = mid[..., None] + half[..., None] * _GL_X
    gl = half * (np.abs(a[..., None] + b[..., None] * nodes) ** p @ _GL_W)
    out = np.where(flat, np.abs(a) ** p * (v - u), np.where(small & ~crosses, gl, closed))
    return out

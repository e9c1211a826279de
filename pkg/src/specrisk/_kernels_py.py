"""Pure-numpy step-function kernels.

Fallback backend used when the compiled extension is unavailable. The
compiled module ``_kernels_c`` mirrors these signatures exactly; both operate
on contiguous float64 arrays and return plain floats / float64 arrays.
"""

from __future__ import annotations

import numpy as np


def sort_merge(values, weights):
    """Merge a weighted sample into descending blocks.

    Returns ``(block_values, cum_probs)`` where ``block_values`` is strictly
    decreasing, zero-weight values are dropped, and ``cum_probs`` has a
    leading 0 and is forced to end exactly at 1.
    """
    order = np.argsort(-values, kind="stable")
    v = values[order]
    w = weights[order]
    starts = np.empty(v.shape[0], dtype=bool)
    starts[0] = True
    np.not_equal(v[1:], v[:-1], out=starts[1:])
    idx = np.flatnonzero(starts)
    block_v = v[idx]
    block_w = np.add.reduceat(w, idx)
    keep = block_w > 0.0
    block_v = block_v[keep]
    block_w = block_w[keep]
    cum = np.empty(block_v.shape[0] + 1)
    cum[0] = 0.0
    np.cumsum(block_w, out=cum[1:])
    cum[-1] = 1.0
    return block_v, cum


def prefix_integrals(block_values, cum_probs):
    """P[k] = integral of the step function over [0, cum_probs[k]]."""
    out = np.empty(cum_probs.shape[0])
    out[0] = 0.0
    np.cumsum(block_values * np.diff(cum_probs), out=out[1:])
    return out


def integral_upto(ts, cum_probs, prefix):
    """Integral over [0, t] for each t; exact since the prefix is piecewise linear."""
    return np.interp(ts, cum_probs, prefix)


def spectral_sum(block_values, phi_increments):
    """Sum of block value times distortion increment."""
    return float(np.dot(block_values, phi_increments))


def rank_weights(losses, phi_grid):
    """Per-datum weights n*(phi(i/n) - phi((i-1)/n)) by descending loss rank.

    ``phi_grid`` holds phi evaluated at i/n for i = 0..n. Tied losses receive
    the average of their block's raw rank weights.
    """
    n = losses.shape[0]
    order = np.argsort(-losses, kind="stable")
    ranked = losses[order]
    raw = n * np.diff(phi_grid)
    starts = np.empty(n, dtype=bool)
    starts[0] = True
    np.not_equal(ranked[1:], ranked[:-1], out=starts[1:])
    idx = np.flatnonzero(starts)
    sums = np.add.reduceat(raw, idx)
    counts = np.diff(np.append(idx, n))
    averaged = np.repeat(sums / counts, counts)
    out = np.empty(n)
    out[order] = averaged
    return out


def sup_scaled_average(ts, phi_vals, cum_probs, prefix):
    """max over t of phi(t) * (1/t) * integral_{[0,t]} of the step function."""
    integ = np.interp(ts, cum_probs, prefix)
    return float(np.max(phi_vals * integ / ts))


def sup_two_sided(ts, phi_vals, cum_probs, prefix):
    """max over t in (0,1) of phi(t)/t * head(t) + (phi(t)-1)/(t-1) * tail(t)."""
    integ = np.interp(ts, cum_probs, prefix)
    total = prefix[-1]
    g = phi_vals / ts * integ + (phi_vals - 1.0) / (ts - 1.0) * (total - integ)
    return float(np.max(g))

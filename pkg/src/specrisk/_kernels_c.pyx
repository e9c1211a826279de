# Compiled step-function kernels. Mirrors _kernels_py signatures exactly.

import numpy as np

cimport numpy as cnp

cnp.import_array()


def sort_merge(cnp.ndarray[cnp.float64_t, ndim=1] values,
               cnp.ndarray[cnp.float64_t, ndim=1] weights):
    cdef cnp.ndarray[cnp.intp_t, ndim=1] order = np.argsort(-values, kind="stable")
    cdef Py_ssize_t n = values.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] bv = np.empty(n, dtype=np.float64)
    cdef cnp.ndarray[cnp.float64_t, ndim=1] bw = np.empty(n, dtype=np.float64)
    cdef Py_ssize_t i, m = 0
    cdef double v, w
    for i in range(n):
        v = values[order[i]]
        w = weights[order[i]]
        if m > 0 and v == bv[m - 1]:
            bw[m - 1] += w
        else:
            bv[m] = v
            bw[m] = w
            m += 1
    cdef Py_ssize_t k, kept = 0
    for k in range(m):
        if bw[k] > 0.0:
            bv[kept] = bv[k]
            bw[kept] = bw[k]
            kept += 1
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out_v = bv[:kept].copy()
    cdef cnp.ndarray[cnp.float64_t, ndim=1] cum = np.empty(kept + 1, dtype=np.float64)
    cdef double acc = 0.0
    cum[0] = 0.0
    for k in range(kept):
        acc += bw[k]
        cum[k + 1] = acc
    cum[kept] = 1.0
    return out_v, cum


def prefix_integrals(cnp.ndarray[cnp.float64_t, ndim=1] block_values,
                     cnp.ndarray[cnp.float64_t, ndim=1] cum_probs):
    cdef Py_ssize_t m = block_values.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(m + 1, dtype=np.float64)
    cdef Py_ssize_t i
    cdef double acc = 0.0
    out[0] = 0.0
    for i in range(m):
        acc += block_values[i] * (cum_probs[i + 1] - cum_probs[i])
        out[i + 1] = acc
    return out


cdef inline double _interp_one(double t,
                               cnp.float64_t[::1] xs,
                               cnp.float64_t[::1] ys) noexcept:
    cdef Py_ssize_t lo = 0, hi = xs.shape[0] - 1, mid
    if t <= xs[0]:
        return ys[0]
    if t >= xs[hi]:
        return ys[hi]
    while hi - lo > 1:
        mid = (lo + hi) >> 1
        if xs[mid] <= t:
            lo = mid
        else:
            hi = mid
    return ys[lo] + (ys[hi] - ys[lo]) * (t - xs[lo]) / (xs[hi] - xs[lo])


def integral_upto(cnp.ndarray[cnp.float64_t, ndim=1] ts,
                  cnp.ndarray[cnp.float64_t, ndim=1] cum_probs,
                  cnp.ndarray[cnp.float64_t, ndim=1] prefix):
    cdef Py_ssize_t i, n = ts.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef cnp.float64_t[::1] xs = cum_probs
    cdef cnp.float64_t[::1] ys = prefix
    for i in range(n):
        out[i] = _interp_one(ts[i], xs, ys)
    return out


def spectral_sum(cnp.ndarray[cnp.float64_t, ndim=1] block_values,
                 cnp.ndarray[cnp.float64_t, ndim=1] phi_increments):
    cdef Py_ssize_t i, m = block_values.shape[0]
    cdef double acc = 0.0
    for i in range(m):
        acc += block_values[i] * phi_increments[i]
    return acc


def rank_weights(cnp.ndarray[cnp.float64_t, ndim=1] losses,
                 cnp.ndarray[cnp.float64_t, ndim=1] phi_grid):
    cdef cnp.ndarray[cnp.intp_t, ndim=1] order = np.argsort(-losses, kind="stable")
    cdef Py_ssize_t n = losses.shape[0]
    cdef cnp.ndarray[cnp.float64_t, ndim=1] out = np.empty(n, dtype=np.float64)
    cdef Py_ssize_t start = 0, i, j
    cdef double block_sum, avg, dn = <double> n
    for i in range(1, n + 1):
        if i == n or losses[order[i]] != losses[order[start]]:
            block_sum = 0.0
            for j in range(start, i):
                block_sum += dn * (phi_grid[j + 1] - phi_grid[j])
            avg = block_sum / (i - start)
            for j in range(start, i):
                out[order[j]] = avg
            start = i
    return out


def sup_scaled_average(cnp.ndarray[cnp.float64_t, ndim=1] ts,
                       cnp.ndarray[cnp.float64_t, ndim=1] phi_vals,
                       cnp.ndarray[cnp.float64_t, ndim=1] cum_probs,
                       cnp.ndarray[cnp.float64_t, ndim=1] prefix):
    cdef cnp.float64_t[::1] xs = cum_probs
    cdef cnp.float64_t[::1] ys = prefix
    cdef Py_ssize_t i, n = ts.shape[0]
    cdef double best = -1e308, g
    for i in range(n):
        g = phi_vals[i] * _interp_one(ts[i], xs, ys) / ts[i]
        if g > best:
            best = g
    return best


def sup_two_sided(cnp.ndarray[cnp.float64_t, ndim=1] ts,
                  cnp.ndarray[cnp.float64_t, ndim=1] phi_vals,
                  cnp.ndarray[cnp.float64_t, ndim=1] cum_probs,
                  cnp.ndarray[cnp.float64_t, ndim=1] prefix):
    cdef cnp.float64_t[::1] xs = cum_probs
    cdef cnp.float64_t[::1] ys = prefix
    cdef double total = prefix[prefix.shape[0] - 1]
    cdef Py_ssize_t i, n = ts.shape[0]
    cdef double best = -1e308, g, head
    for i in range(n):
        head = _interp_one(ts[i], xs, ys)
        g = phi_vals[i] / ts[i] * head + (phi_vals[i] - 1.0) / (ts[i] - 1.0) * (total - head)
        if g > best:
            best = g
    return best

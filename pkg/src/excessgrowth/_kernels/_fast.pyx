# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled backend: C loops for the hot kernels.

Same contracts as the reference backend (see ``_ref.py``); plain loops with
per-row max shifting instead of vectorized numpy, which removes the
temporary-array traffic from the ascent inner loop.
"""

from libc.math cimport exp, fabs, log, sqrt

import numpy as np

__all__ = ["egr_log_rows", "mirror_ascent"]


def egr_log_rows(w, r):
    cdef const double[::1] wv = np.ascontiguousarray(w, dtype=np.float64)
    cdef const double[:, ::1] rv = np.ascontiguousarray(r, dtype=np.float64)
    cdef Py_ssize_t k_count = rv.shape[0], n = rv.shape[1], k, j
    if wv.shape[0] != n:
        raise ValueError("weight length does not match row width")
    out = np.empty(k_count, dtype=np.float64)
    cdef double[::1] ov = out
    cdef double m, s, dot, v
    for k in range(k_count):
        m = -1e308
        for j in range(n):
            if wv[j] > 0.0 and rv[k, j] > m:
                m = rv[k, j]
        s = 0.0
        dot = 0.0
        for j in range(n):
            if wv[j] > 0.0:
                s += wv[j] * exp(rv[k, j] - m)
                dot += wv[j] * rv[k, j]
        v = m + log(s) - dot
        ov[k] = v if v > 0.0 else 0.0
    return out


cdef void _gradient(
    const double[:, ::1] scen,
    const double[::1] p,
    const double[::1] m,
    const double[::1] w,
    double[::1] g,
) noexcept:
    cdef Py_ssize_t k_count = scen.shape[0], n = scen.shape[1], k, j
    cdef double denom, coef
    for j in range(n):
        g[j] = -m[j]
    for k in range(k_count):
        denom = 0.0
        for j in range(n):
            denom += scen[k, j] * w[j]
        coef = p[k] / denom
        for j in range(n):
            g[j] += coef * scen[k, j]


def mirror_ascent(scen_r, p, m, double c, w0, long budget, double tol, long check_every):
    cdef const double[:, ::1] scen = np.ascontiguousarray(scen_r, dtype=np.float64)
    cdef const double[::1] pv = np.ascontiguousarray(p, dtype=np.float64)
    cdef const double[::1] mv = np.ascontiguousarray(m, dtype=np.float64)
    cdef Py_ssize_t n = scen.shape[1], j
    w_arr = np.array(w0, dtype=np.float64, copy=True)
    best_arr = w_arr.copy()
    g_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] w = w_arr
    cdef double[::1] best = best_arr
    cdef double[::1] g = g_arr
    cdef double best_metric = 1e308
    cdef double step, total, gw, cert, ineq, eq, metric
    cdef long t
    for t in range(1, budget + 1):
        _gradient(scen, pv, mv, w, g)
        step = c / sqrt(<double> t)
        total = 0.0
        for j in range(n):
            w[j] = w[j] * exp(step * g[j])
            total += w[j]
        for j in range(n):
            w[j] /= total
        if t % check_every == 0 or t == budget:
            _gradient(scen, pv, mv, w, g)
            gw = 0.0
            for j in range(n):
                gw += g[j] * w[j]
            ineq = -1e308
            eq = 0.0
            for j in range(n):
                cert = g[j] - gw
                if cert > ineq:
                    ineq = cert
                if w[j] >= 1e-10 and fabs(cert) > eq:
                    eq = fabs(cert)
            metric = ineq if ineq > eq else eq
            if metric < best_metric:
                best_metric = metric
                best_arr[:] = w_arr
            if metric <= tol:
                return w_arr, t, True, w_arr.copy(), metric
    return w_arr, budget, False, best_arr, best_metric

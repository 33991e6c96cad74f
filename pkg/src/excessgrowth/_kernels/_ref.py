"""Reference backend: vectorized numpy versions of the hot kernels.

Both backends implement the same contracts:

``egr_log_rows(w, r)``
    Per-row excess growth rate of the weight vector ``w`` against a ``K x n``
    matrix of finite log returns, support-aware and clamped at zero.

``mirror_ascent(R, p, m, c, w0, budget, tol, check_every)``
    Multiplicative-update ascent of the expected excess growth rate over
    gross-return scenarios ``R`` with probabilities ``p`` and mean log
    returns ``m``; step ``c / sqrt(t)``.  Every ``check_every`` iterations
    the first-order certificate ``g - <g, w>`` is evaluated at the current
    iterate; convergence means every entry is ``<= tol`` and ``|entry| <=
    tol`` wherever the iterate carries mass above 1e-10.  Returns ``(w,
    iterations, converged, best_w, best_metric)`` where best is by the
    certificate metric over all checked iterates.
"""

from __future__ import annotations

import numpy as np

__all__ = ["egr_log_rows", "mirror_ascent"]


def egr_log_rows(w, r) -> np.ndarray:
    w = np.asarray(w, dtype=float)
    r = np.asarray(r, dtype=float)
    on = w > 0.0
    masked = np.where(on, r, -np.inf)
    m = masked.max(axis=1)
    e = np.exp(masked - m[:, None])
    lse = m + np.log(e @ w)
    vals = lse - np.where(on, r, 0.0) @ w
    return np.maximum(vals, 0.0)


def _gradient(w, scen_r, p, m):
    denom = scen_r @ w
    return (p / denom) @ scen_r - m


def _metric(cert, w):
    ineq = float(cert.max())
    eq = float(np.abs(cert[w >= 1e-10]).max())
    return max(ineq, eq)


def mirror_ascent(scen_r, p, m, c, w0, budget, tol, check_every):
    scen_r = np.asarray(scen_r, dtype=float)
    p = np.asarray(p, dtype=float)
    m = np.asarray(m, dtype=float)
    w = np.array(w0, dtype=float, copy=True)
    best_w = w.copy()
    best_metric = np.inf
    for t in range(1, budget + 1):
        g = _gradient(w, scen_r, p, m)
        w = w * np.exp((c / np.sqrt(t)) * g)
        w /= w.sum()
        if t % check_every == 0 or t == budget:
            g = _gradient(w, scen_r, p, m)
            cert = g - float(g @ w)
            metric = _metric(cert, w)
            if metric < best_metric:
                best_metric = metric
                best_w = w.copy()
            if metric <= tol:
                return w, t, True, w.copy(), metric
    return w, budget, False, best_w, best_metric

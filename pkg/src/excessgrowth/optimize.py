"""Maximization of the excess growth rate.

Deterministic: the two-point closed-form maximizer over weights.  Variational:
the penalized and entropy-ball problems solved through their scalar dual (the
dual map is monotone, so bracketing plus bisection is unconditionally safe).
Stochastic: expected excess growth rate over finite scenario sets by
multiplicative-update ascent with a per-vertex first-order certificate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import _kernels as kernels
from .egr import egr_log
from .errors import DimensionMismatch, DomainViolation, NoConvergence
from .info import relative_entropy
from .simplex import Weights, barycenter, closure, weights

__all__ = [
    "ScenarioSet",
    "load_scenarios",
    "MaxEgrResult",
    "DualSolveResult",
    "variational_max",
    "max_egr",
    "penalized_joint",
    "phi_eta",
    "constrained_joint",
    "expected_egr",
    "supergradient",
    "MaximizeResult",
    "maximize_expected_egr",
    "quadratic_approx_solution",
    "relative_growth_bound_check",
]

ROOT_TOL = 1e-10
ROOT_BUDGET = 200


# ---------------------------------------------------------------------------
# scenario sets


@dataclass(frozen=True, eq=False)
class ScenarioSet:
    """``K`` log-return scenarios over ``n`` assets with scenario probabilities."""

    scenarios: np.ndarray
    probs: Weights

    def __post_init__(self):
        s = np.asarray(self.scenarios, dtype=float)
        if s.ndim != 2 or s.shape[0] < 1 or s.shape[1] < 1:
            raise DimensionMismatch(f"scenarios must be a K x n matrix, got shape {s.shape}")
        if not np.all(np.isfinite(s)):
            raise ValueError("scenario log returns must be finite")
        p = weights(self.probs)
        if len(p) != s.shape[0]:
            raise DimensionMismatch(
                f"{len(p)} probabilities for {s.shape[0]} scenarios"
            )
        s = s.copy()
        s.flags.writeable = False
        object.__setattr__(self, "scenarios", s)
        object.__setattr__(self, "probs", p)

    @property
    def k(self) -> int:
        return self.scenarios.shape[0]

    @property
    def n(self) -> int:
        return self.scenarios.shape[1]

    def mean_returns(self) -> np.ndarray:
        """``m = E[r]`` per asset."""
        return self.probs.w @ self.scenarios


def load_scenarios(path, probs: str = "none") -> ScenarioSet:
    """Read a scenario matrix from CSV: one row per scenario.

    ``probs="last"`` takes the final column as scenario probabilities
    (normalized); ``probs="none"`` uses uniform probabilities.  An optional
    non-numeric first row is treated as a header and skipped.
    """
    import csv

    from .errors import ParseError, RaggedRows

    if probs not in ("none", "last"):
        raise ValueError(f"probs must be 'none' or 'last', got {probs!r}")
    rows = []
    with open(path, newline="") as fh:
        for raw in csv.reader(fh):
            if not raw or all(not c.strip() for c in raw):
                continue
            rows.append([c.strip() for c in raw])
    if not rows:
        raise ParseError(f"{path}: no data rows")
    start = 0
    try:
        float(rows[0][0])
    except ValueError:
        start = 1
    data_rows = rows[start:]
    if not data_rows:
        raise ParseError(f"{path}: header only, no scenarios")
    width = len(data_rows[0])
    matrix = []
    for i, row in enumerate(data_rows):
        if len(row) != width:
            raise RaggedRows(f"{path}: row {i + 1} has {len(row)} fields, expected {width}")
        try:
            matrix.append([float(c) for c in row])
        except ValueError as exc:
            raise ParseError(f"{path}: row {i + 1}: {exc}") from None
    arr = np.array(matrix)
    if probs == "last":
        if arr.shape[1] < 2:
            raise ParseError(f"{path}: need at least one return column before the probability")
        p = arr[:, -1]
        if np.any(p < 0) or p.sum() <= 0:
            raise ParseError(f"{path}: probability column must be nonnegative with positive sum")
        return ScenarioSet(arr[:, :-1], Weights(p / p.sum()))
    k = arr.shape[0]
    return ScenarioSet(arr, barycenter(k))


# ---------------------------------------------------------------------------
# deterministic maximization


@dataclass(frozen=True, eq=False)
class MaxEgrResult:
    """Closed-form maximizer record.

    ``support_pair`` is ``(argmax, argmin)`` of the log returns, or ``None``
    when ``degenerate`` (constant input, where every weight vector is optimal
    and the barycenter is returned).  ``ties`` lists all indices attaining
    the max and the min so callers may redistribute mass among them.
    """

    pi_star: Weights
    value: float
    support_pair: tuple | None
    degenerate: bool = False
    ties: tuple = ((), ())


def variational_max(pi: Weights, r) -> tuple:
    """The entropy-penalized linear program behind the growth rate.

    Returns ``(value, p_star)`` with ``value = egr_log(pi, r)`` and
    ``p_star_i`` proportional to ``pi_i e^{r_i}`` on the support: the unique
    maximizer of ``<p - pi, r> - relative_entropy(p, pi)``.
    """
    pi = weights(pi)
    value = egr_log(pi, r)
    r = np.asarray(r, dtype=float)
    sup = pi.support_array
    t = r[sup] - r[sup].max()
    out = np.zeros(len(pi))
    out[sup] = pi.w[sup] * np.exp(t)
    return value, closure(out, pi)


def _pair_value(d: float) -> float:
    """Optimal two-point excess growth rate as a function of the spread ``d >= 0``."""
    if d < 0.01:
        d2 = d * d
        return d2 / 8.0 - d2 * d2 / 576.0 + d2 * d2 * d2 / 25920.0
    if d < 700.0:
        em = math.expm1(d)
        return math.log(em / d) + d / em - 1.0
    return d - math.log(d) - 1.0


def _pair_mass(d: float) -> float:
    """Optimal mass on the argmax as a function of the spread ``d > 0``."""
    if d < 0.01:
        return 0.5 - d / 12.0 + d**3 / 720.0 - d**5 / 30240.0
    if d < 700.0:
        em = math.expm1(d)
        return (em - d) / (d * em)
    return 1.0 / d


def max_egr(r) -> MaxEgrResult:
    """Maximize the excess growth rate over all weight vectors for fixed log returns.

    The optimum is supported on the extreme pair ``(argmax r, argmin r)``
    (lowest index under ties, with the full tie sets recorded); the value and
    the optimal split depend only on the spread ``max r - min r``.
    """
    r = np.asarray(r, dtype=float)
    if r.ndim != 1 or r.size == 0:
        raise DimensionMismatch("log returns must be a nonempty vector")
    if not np.all(np.isfinite(r)):
        raise ValueError("log returns must be finite")
    n = r.size
    hi, lo = float(r.max()), float(r.min())
    if hi == lo:
        return MaxEgrResult(barycenter(n), 0.0, None, degenerate=True)
    i_star = int(np.argmax(r))
    j_star = int(np.argmin(r))
    d = hi - lo
    t = _pair_mass(d)
    w = np.zeros(n)
    w[i_star] = t
    w[j_star] = 1.0 - t
    max_set = tuple(int(i) for i in np.flatnonzero(r == hi))
    min_set = tuple(int(i) for i in np.flatnonzero(r == lo))
    ties = (max_set if len(max_set) > 1 else (), min_set if len(min_set) > 1 else ())
    return MaxEgrResult(Weights(w), _pair_value(d), (i_star, j_star), ties=ties)


# ---------------------------------------------------------------------------
# penalized and entropy-constrained joint problems


@dataclass(frozen=True, eq=False)
class DualSolveResult:
    """Solution record for the scalar-dual problems.

    ``lambda_star`` may be ``inf`` (zero-radius entropy ball) or ``0`` (ball
    large enough to be unconstrained).  ``kkt_residual`` is the entropy-
    constraint residual at the root (0 on closed-form branches).
    """

    lambda_star: float
    pi_star: Weights
    q_star: Weights
    value: float
    kkt_residual: float
    iterations: int


def penalized_joint(r, lam: float) -> DualSolveResult:
    """Maximize ``<q - pi, r> - lam * relative_entropy(q, pi)`` jointly over ``(pi, q)``.

    The optimum rescales the deterministic problem: ``value = lam *
    max_egr(r / lam).value``, with ``q_star`` the exponential tilt of
    ``pi_star`` by ``r / lam``.
    """
    r = np.asarray(r, dtype=float)
    if not (lam > 0) or not math.isfinite(lam):
        raise ValueError(f"penalty weight must be positive and finite, got {lam!r}")
    base = max_egr(r / lam)
    pi_star = base.pi_star
    _, q_star = variational_max(pi_star, r / lam)
    value = lam * base.value
    attained = float(q_star.w @ r - pi_star.w @ r) - lam * relative_entropy(q_star, pi_star)
    return DualSolveResult(
        lambda_star=float(lam),
        pi_star=pi_star,
        q_star=q_star,
        value=value,
        kkt_residual=abs(attained - value),
        iterations=0,
    )


def _tilt_entropy(pi: Weights, r: np.ndarray, lam: float) -> float:
    """``relative_entropy(q(lam), pi)`` for the tilt ``q(lam) ~ pi e^{r/lam}``, on the support."""
    _, q = variational_max(pi, r / lam)
    return relative_entropy(q, pi)


def _bisect_decreasing(h, target: float, x0: float) -> tuple:
    """Root of the decreasing map ``h`` at level ``target``: bracket by geometric
    expansion from ``x0``, then bisection to ``|h - target| <= ROOT_TOL``.

    Returns ``(x, h(x), iterations)``.
    """
    lo = hi = x0
    v0 = h(x0)
    it = 0
    if v0 > target:
        # need larger x to bring h down
        while True:
            hi *= 2.0
            it += 1
            if h(hi) <= target:
                break
            if it > ROOT_BUDGET or not math.isfinite(hi):
                raise NoConvergence(f"no bracket: h({hi:.3e}) still above {target!r}")
        lo = hi / 2.0
    elif v0 < target:
        while True:
            lo /= 2.0
            it += 1
            if h(lo) >= target:
                break
            if it > ROOT_BUDGET or lo == 0.0:
                raise NoConvergence(f"no bracket: h({lo:.3e}) still below {target!r}")
        hi = lo * 2.0
    else:
        return x0, v0, it
    for _ in range(ROOT_BUDGET):
        mid = 0.5 * (lo + hi)
        vm = h(mid)
        it += 1
        if abs(vm - target) <= ROOT_TOL:
            return mid, vm, it
        if vm > target:
            lo = mid
        else:
            hi = mid
    raise NoConvergence(
        f"bisection exhausted {ROOT_BUDGET} iterations without |h - target| <= {ROOT_TOL}"
    )


def phi_eta(pi: Weights, r, eta: float) -> DualSolveResult:
    """Maximize ``<q - pi, r>`` over ``relative_entropy(q, pi) <= eta`` at fixed ``pi``.

    Dual: ``inf_{lam >= 0} lam * egr_log(pi, r/lam) + lam * eta``.  For
    ``eta`` below ``eta_bar = -log(mass of the argmax set)`` the optimal
    ``lam`` solves ``relative_entropy(q(lam), pi) = eta`` (a decreasing map);
    at or above ``eta_bar`` the ball no longer binds and the value is exactly
    ``max r - <pi, r>`` on the support; ``eta = 0`` pins ``q = pi``.
    """
    pi = weights(pi)
    r = np.asarray(r, dtype=float)
    if r.ndim != 1 or r.size != len(pi):
        raise DimensionMismatch(f"log returns have shape {r.shape}, weights length {len(pi)}")
    sup = pi.support_array
    if not np.all(np.isfinite(r[sup])):
        raise DomainViolation("log returns must be finite on the support of the weights")
    if eta < 0:
        raise ValueError(f"entropy radius must be >= 0, got {eta!r}")

    rs = r[sup]
    hi = float(rs.max())
    argmax_mass = float(pi.w[sup][rs == hi].sum())
    eta_bar = -math.log(argmax_mass)

    if eta == 0.0:
        return DualSolveResult(math.inf, pi, pi, 0.0, 0.0, 0)
    if eta >= eta_bar:
        q_star = closure(np.where((r == hi) & (pi.w > 0), pi.w, 0.0))
        value = hi - float(pi.w[sup] @ rs)
        return DualSolveResult(0.0, pi, q_star, value, 0.0, 0)

    spread = hi - float(rs.min())
    lam0 = spread / max(eta, 1e-8)
    lam, h_at, iters = _bisect_decreasing(lambda lam_: _tilt_entropy(pi, r, lam_), eta, lam0)
    _, q_star = variational_max(pi, r / lam)
    value = float(q_star.w @ r - pi.w @ r)
    return DualSolveResult(lam, pi, q_star, value, abs(h_at - eta), iters)


def constrained_joint(r, eta: float) -> DualSolveResult:
    """Maximize ``<q - pi, r>`` over ``relative_entropy(q, pi) <= eta`` jointly.

    At the optimum both points live on the extreme pair of ``r``; the scalar
    dual solves ``relative_entropy(q(lam), pi(lam)) = eta`` where ``pi(lam)``
    is the two-point optimum at ``r/lam`` and ``q(lam)`` its tilt.  The map
    decreases from ``+inf`` (lam -> 0) to ``0``, so a root exists for every
    ``eta > 0``; ``eta = 0`` is the equal-split limit with value 0.
    """
    r = np.asarray(r, dtype=float)
    if eta < 0:
        raise ValueError(f"entropy radius must be >= 0, got {eta!r}")
    base = max_egr(r)
    if base.degenerate:
        return DualSolveResult(math.inf, base.pi_star, base.pi_star, 0.0, 0.0, 0)
    i_star, j_star = base.support_pair
    n = r.size

    if eta == 0.0:
        w = np.zeros(n)
        w[i_star] = w[j_star] = 0.5
        half = Weights(w)
        return DualSolveResult(math.inf, half, half, 0.0, 0.0, 0)

    def pi_of(lam: float) -> Weights:
        t = _pair_mass((float(r[i_star]) - float(r[j_star])) / lam)
        w = np.zeros(n)
        w[i_star] = t
        w[j_star] = 1.0 - t
        return Weights(w)

    def gap(lam: float) -> float:
        pi_l = pi_of(lam)
        _, q_l = variational_max(pi_l, r / lam)
        return relative_entropy(q_l, pi_l)

    spread = float(r[i_star] - r[j_star])
    lam0 = spread / max(eta, 1e-8)
    lam, h_at, iters = _bisect_decreasing(gap, eta, lam0)
    pi_star = pi_of(lam)
    _, q_star = variational_max(pi_star, r / lam)
    value = float(q_star.w @ r - pi_star.w @ r)
    return DualSolveResult(lam, pi_star, q_star, value, abs(h_at - eta), iters)


# ---------------------------------------------------------------------------
# expected excess growth rate over scenario sets


def expected_egr(pi: Weights, s: ScenarioSet) -> float:
    """``sum_k probs_k * egr_log(pi, r_k)``; concave in ``pi``."""
    pi = weights(pi)
    if len(pi) != s.n:
        raise DomainViolation(f"weights have length {len(pi)}, scenarios have {s.n} assets")
    vals = kernels.egr_log_rows(pi.w, s.scenarios)
    return float(s.probs.w @ vals)


def supergradient(pi: Weights, s: ScenarioSet) -> np.ndarray:
    """The canonical supergradient ``E[R / <pi, R>] - E[r]`` at interior ``pi``."""
    pi = weights(pi)
    if len(pi) != s.n:
        raise DomainViolation(f"weights have length {len(pi)}, scenarios have {s.n} assets")
    if not pi.is_open():
        raise DomainViolation("supergradient is defined for strictly positive weights")
    return _supergradient_interior(pi.w, s)


def _supergradient_interior(w: np.ndarray, s: ScenarioSet) -> np.ndarray:
    # E[R_i / <pi, R>] computed as sum_k p_k exp(r_ki - lse_k), max-shifted per row
    r = s.scenarios
    m = r.max(axis=1, keepdims=True)
    e = np.exp(r - m)
    denom = e @ w
    tilt = (s.probs.w / denom) @ e
    return tilt - s.mean_returns()


def _certificate(w: np.ndarray, s: ScenarioSet) -> np.ndarray:
    """Per-vertex first-order gaps ``g_j - <g, pi>``; all <= 0 at an optimum."""
    g = _supergradient_interior(w, s)
    return g - float(g @ w)


@dataclass(frozen=True, eq=False)
class MaximizeResult:
    """Ascent outcome: the weights, their objective value, the per-vertex
    certificate ``E[R_j/<pi,R>] - 1 - <e_j - pi, m>``, and iteration count."""

    pi_star: Weights
    value: float
    certificate: np.ndarray
    iterations: int
    converged: bool


SUPPORT_MASS = 1e-10  # below this, a coordinate counts as vanished for the certificate


def maximize_expected_egr(s: ScenarioSet, tol: float = 1e-6) -> MaximizeResult:
    """Multiplicative-update ascent from the barycenter.

    Step ``c / sqrt(t)`` with ``c = 1 / (1 + max_k ||r_k||_inf)``; update
    ``pi <- closure(pi * exp(step * g))``.  Every 100 iterations the
    per-vertex certificate is checked: success requires every entry ``<=
    tol`` and ``|entry| <= tol`` wherever mass exceeds ``1e-10`` (vanishing
    mass plus a satisfied inequality is how a boundary optimum looks here,
    since iterates stay interior).

    Raises
    ------
    NoConvergence
        After the ``10^5`` iteration budget; the best iterate (by the
        certificate metric) rides along as ``exc.result``.
    """
    if not (tol > 0):
        raise ValueError("tol must be positive")
    budget = 100_000
    check_every = 100
    c = 1.0 / (1.0 + float(np.abs(s.scenarios).max()))
    # per-row rescaling of gross returns leaves the gradient unchanged and
    # keeps the kernel free of overflow
    shifted = s.scenarios - s.scenarios.max(axis=1, keepdims=True)
    w, iters, converged, best_w, best_metric = kernels.mirror_ascent(
        np.exp(shifted),
        s.probs.w,
        s.mean_returns(),
        c,
        barycenter(s.n).w,
        budget,
        tol,
        check_every,
    )
    if converged:
        pi_star = Weights(w)
        cert = _certificate(pi_star.w, s)
        return MaximizeResult(pi_star, expected_egr(pi_star, s), cert, iters, True)
    pi_best = Weights(best_w)
    cert = _certificate(pi_best.w, s)
    result = MaximizeResult(pi_best, expected_egr(pi_best, s), cert, iters, False)
    raise NoConvergence(
        f"certificate still {best_metric:.3e} > {tol:.1e} after {iters} iterations",
        result=result,
    )


def quadratic_approx_solution(s: ScenarioSet) -> Weights:
    """Maximizer of the small-return quadratic ``(sum pi_i E[r_i^2] - pi' E[r r'] pi) / 2``.

    Projected gradient on the simplex with a fixed ``1/L`` step; the
    quadratic is concave, so the iteration contracts to the maximizer.
    """
    r = s.scenarios
    p = s.probs.w
    m2 = p @ (r * r)
    cov = r.T @ (r * p[:, None])  # E[r r'], K-weighted
    step = 1.0 / max(float(np.linalg.norm(cov, 2)), 1e-12)
    w = barycenter(s.n).w.copy()
    for _ in range(200_000):
        grad = 0.5 * m2 - cov @ w
        w_new = _project_simplex(w + step * grad)
        if float(np.abs(w_new - w).max()) <= 1e-13:
            return Weights(w_new)
        w = w_new
    raise NoConvergence("projected gradient did not settle within its budget")


def _project_simplex(v: np.ndarray) -> np.ndarray:
    """Euclidean projection onto the simplex (sort-based)."""
    u = np.sort(v)[::-1]
    css = np.cumsum(u)
    rho = np.nonzero(u * np.arange(1, v.size + 1) > (css - 1.0))[0][-1]
    theta = (css[rho] - 1.0) / float(rho + 1)
    out = np.maximum(v - theta, 0.0)
    return out / out.sum()


def relative_growth_bound_check(pi: Weights, pi_star: Weights, s: ScenarioSet) -> tuple:
    """Evaluate both sides of the relative-growth bound against a maximizer.

    Returns ``(lhs, rhs)`` with ``lhs = E[log(<pi,R>/<pi*,R>)]`` and ``rhs =
    log(1 + <pi - pi*, m>)``; at a true maximizer ``lhs <= rhs`` for every
    feasible ``pi``.
    """
    pi, pi_star = weights(pi), weights(pi_star)
    if len(pi) != s.n or len(pi_star) != s.n:
        raise DomainViolation("weights and scenarios have mismatched dimensions")
    r = s.scenarios
    m = r.max(axis=1, keepdims=True)
    e = np.exp(r - m)
    log_num = np.log(e @ pi.w)
    log_den = np.log(e @ pi_star.w)
    lhs = float(s.probs.w @ (log_num - log_den))
    arg = 1.0 + float((pi.w - pi_star.w) @ s.mean_returns())
    if arg <= 0.0:
        raise DomainViolation(
            "bound argument 1 + <pi - pi*, m> is not positive; pi_star cannot be a maximizer"
        )
    return lhs, math.log(arg)

"""Entropies, divergences, and the identities tying them to the excess growth rate.

Includes the logarithmic divergence of exponentially concave generators (with
analytic gradients — no numerical differentiation happens inside
:func:`log_divergence`), the perturbation-invariance residual used as a
uniqueness probe, the Fisher–Rao quadratic form, and exponential coordinates.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .egr import egr_div, egr_log, weighted_variance
from .errors import (
    BoundaryPoint,
    DimensionMismatch,
    DomainViolation,
    GeneratorViolation,
    TangencyViolation,
)
from .simplex import Weights, closure, perturb, subtract, weights

__all__ = [
    "relative_entropy",
    "cross_entropy",
    "shannon_entropy",
    "renyi_divergence",
    "renyi_divergence_mc",
    "egr_identity_lhs_rhs",
    "egr_div_identity",
    "ExpConcaveGenerator",
    "NegCrossEntropy",
    "RenyiPotential",
    "log_divergence",
    "perturbation_invariance_residual",
    "fisher_rao_form",
    "ExpCoordinates",
    "to_exp_coords",
    "from_exp_coords",
]


def relative_entropy(p: Weights, q: Weights) -> float:
    """``sum_i p_i log(p_i / q_i)`` over the support of ``p``.

    Returns ``+inf`` when the support of ``p`` is not contained in the
    support of ``q``; terms with ``p_i = 0`` contribute nothing.
    """
    p, q = weights(p), weights(q)
    if len(p) != len(q):
        raise DimensionMismatch(f"operands have lengths {len(p)} and {len(q)}")
    sup = p.support_array
    qs = q.w[sup]
    if np.any(qs == 0):
        return math.inf
    ps = p.w[sup]
    return float(ps @ (np.log(ps) - np.log(qs)))


def cross_entropy(p: Weights, q: Weights) -> float:
    """``-sum_i p_i log q_i`` over the support of ``p``."""
    p, q = weights(p), weights(q)
    if len(p) != len(q):
        raise DimensionMismatch(f"operands have lengths {len(p)} and {len(q)}")
    sup = p.support_array
    qs = q.w[sup]
    if np.any(qs == 0):
        raise DomainViolation("second argument is zero on the support of the first")
    return float(-(p.w[sup] @ np.log(qs)))


def shannon_entropy(p: Weights) -> float:
    """``-sum_i p_i log p_i`` over the support of ``p``."""
    p = weights(p)
    ps = p.w[p.support_array]
    return float(-(ps @ np.log(ps)))


def renyi_divergence(alpha: float, p: Weights, q: Weights) -> float:
    """Order-``alpha`` divergence ``(1/(alpha-1)) log sum p^alpha q^(1-alpha)``.

    Discrete form; requires ``alpha > 0``, ``alpha != 1`` and the support of
    ``p`` inside the support of ``q``.
    """
    if not (alpha > 0) or alpha == 1:
        raise ValueError(f"order must be positive and != 1, got {alpha!r}")
    p, q = weights(p), weights(q)
    if len(p) != len(q):
        raise DimensionMismatch(f"operands have lengths {len(p)} and {len(q)}")
    sup = p.support_array
    qs = q.w[sup]
    if np.any(qs == 0):
        raise DomainViolation("support of the first argument exceeds the second's")
    ps = p.w[sup]
    # sum p^a q^(1-a) in log space: lse of a*log p + (1-a)*log q
    z = alpha * np.log(ps) + (1.0 - alpha) * np.log(qs)
    m = z.max()
    # alpha < 1 drops mass where q > 0, p = 0; that mass simply does not appear
    return float((np.log(np.exp(z - m).sum()) + m) / (alpha - 1.0))


def renyi_divergence_mc(alpha: float, log_p, log_q) -> tuple:
    """Monte Carlo order-``alpha`` divergence from log densities at samples drawn from ``p``.

    ``E_p[(p/q)^(alpha-1)] = integral p^alpha q^(1-alpha)``, so the estimate is
    ``(1/(alpha-1)) log mean(exp((alpha-1)(log_p - log_q)))``.

    Returns
    -------
    (estimate, stderr)
        ``stderr`` is the delta-method standard error of the estimate.
    """
    if not (alpha > 0) or alpha == 1:
        raise ValueError(f"order must be positive and != 1, got {alpha!r}")
    lp = np.asarray(log_p, dtype=float)
    lq = np.asarray(log_q, dtype=float)
    if lp.shape != lq.shape or lp.ndim != 1 or lp.size == 0:
        raise DimensionMismatch("log-density arrays must be equal-length nonempty vectors")
    z = (alpha - 1.0) * (lp - lq)
    m = z.max()
    w = np.exp(z - m)
    mean = float(w.mean())
    se_mean = float(w.std(ddof=1) / math.sqrt(w.size))
    estimate = (math.log(mean) + m) / (alpha - 1.0)
    stderr = se_mean / (abs(alpha - 1.0) * mean)
    return estimate, stderr


def egr_identity_lhs_rhs(pi: Weights, r: Weights, form: str = "perturb") -> tuple:
    """Both sides of the growth-rate/relative-entropy identity, evaluated independently.

    ``form="perturb"``: ``(egr(pi, r), relative_entropy(pi, pi (+)_pi r))``.
    ``form="subtract"``: ``(egr(pi, r (-)_pi pi), relative_entropy(pi, closure(r, pi)))``.
    """
    pi, r = weights(pi), weights(r)
    if len(pi) != len(r):
        raise DimensionMismatch(f"operands have lengths {len(pi)} and {len(r)}")
    sup = pi.support_array
    if np.any(r.w[sup] == 0):
        raise DomainViolation("weights' support is not contained in the returns' support")
    if form == "perturb":
        lhs = _egr_on_support(pi, r.w)
        rhs = relative_entropy(pi, perturb(pi, r, pi))
    elif form == "subtract":
        lhs = _egr_on_support(pi, subtract(r, pi, pi).w)
        rhs = relative_entropy(pi, closure(r.w, pi))
    else:
        raise ValueError(f"unknown form {form!r}")
    return lhs, rhs


def egr_div_identity(pi: Weights, q: Weights, p: Weights) -> tuple:
    """Divergence-form identity: ``(egr_div(pi, q, p), relative_entropy(pi, pi (+)_pi (q (-)_pi p)))``."""
    pi, q, p = weights(pi), weights(q), weights(p)
    lhs = egr_div(pi, q.w, p.w)
    rhs = relative_entropy(pi, perturb(pi, subtract(q, p, pi), pi))
    return lhs, rhs


def _egr_on_support(pi: Weights, R: np.ndarray) -> float:
    sup = pi.support_array
    w, Rs = pi.w[sup], R[sup]
    val = float(np.log(w @ Rs) - w @ np.log(Rs))
    return val if val > 0.0 else 0.0


class ExpConcaveGenerator:
    """A function on the open simplex whose exponential is concave.

    Subclasses provide ``evaluate`` and an analytic ``gradient`` (taken in
    ambient coordinates).  Construction spot-checks midpoint concavity of
    ``exp(evaluate)`` on 100 random interior pairs and raises
    ``GeneratorViolation`` on failure.
    """

    #: dimension used for the construction-time concavity probe when the
    #: generator itself is dimension-free
    _check_dim = 3

    def evaluate(self, p: Weights) -> float:
        raise NotImplementedError

    def gradient(self, p: Weights) -> np.ndarray:
        raise NotImplementedError

    def _check_exp_concavity(self, n: int, trials: int = 100, seed: int = 0) -> None:
        rng = np.random.default_rng(seed)
        for _ in range(trials):
            a = Weights(_random_open(rng, n))
            b = Weights(_random_open(rng, n))
            mid = Weights(0.5 * (a.w + b.w))
            lhs = math.exp(self.evaluate(mid))
            rhs = 0.5 * (math.exp(self.evaluate(a)) + math.exp(self.evaluate(b)))
            if lhs < rhs - 1e-9 * max(1.0, abs(rhs)):
                raise GeneratorViolation(
                    f"{type(self).__name__}: exp of the generator failed midpoint concavity"
                )


def _random_open(rng: np.random.Generator, n: int) -> np.ndarray:
    x = rng.uniform(0.05, 1.0, size=n)
    return x / x.sum()


class NegCrossEntropy(ExpConcaveGenerator):
    """``phi(p) = sum_i pi_i log p_i`` (negative cross-entropy against fixed ``pi``).

    Its logarithmic divergence is the excess growth rate of the ratio ``q/p``
    weighted by ``pi``, and it is invariant under simplex perturbations.
    """

    def __init__(self, pi: Weights):
        self.pi = weights(pi)
        self._check_exp_concavity(len(self.pi))

    def evaluate(self, p: Weights) -> float:
        p = _require_open(p)
        if len(p) != len(self.pi):
            raise DimensionMismatch(f"point has length {len(p)}, generator wants {len(self.pi)}")
        return float(self.pi.w @ np.log(p.w))

    def gradient(self, p: Weights) -> np.ndarray:
        p = _require_open(p)
        if len(p) != len(self.pi):
            raise DimensionMismatch(f"point has length {len(p)}, generator wants {len(self.pi)}")
        return self.pi.w / p.w


class RenyiPotential(ExpConcaveGenerator):
    """``phi(p) = (1/lambda) log sum_j p_j^lambda`` for ``lambda`` in (0, 1).

    ``exp(phi)`` is the lambda-power mean scaled to homogeneity degree 1,
    which is concave; the associated logarithmic divergence is an order
    ``1/lambda`` divergence between lambda-powered points.  Unlike
    :class:`NegCrossEntropy`, it is *not* perturbation invariant, which is
    what :func:`perturbation_invariance_residual` witnesses.
    """

    def __init__(self, lmbda: float):
        if not (0.0 < lmbda < 1.0):
            raise ValueError(f"lambda must be in (0, 1), got {lmbda!r}")
        self.lmbda = float(lmbda)
        self._check_exp_concavity(self._check_dim)

    def evaluate(self, p: Weights) -> float:
        p = _require_open(p)
        lam = self.lmbda
        return float(np.log(np.sum(p.w**lam)) / lam)

    def gradient(self, p: Weights) -> np.ndarray:
        p = _require_open(p)
        lam = self.lmbda
        plam = p.w**lam
        return p.w ** (lam - 1.0) / plam.sum()


def _require_open(p) -> Weights:
    p = weights(p)
    if not p.is_open():
        raise BoundaryPoint("generator arguments must be strictly positive")
    return p


def log_divergence(phi: ExpConcaveGenerator, q: Weights, p: Weights) -> float:
    """``log(1 + <grad phi(p), q - p>) - (phi(q) - phi(p))``; nonnegative.

    Raises
    ------
    GeneratorViolation
        If the log argument is not positive (the generator is not
        exponentially concave at this pair).
    """
    q, p = _require_open(q), _require_open(p)
    if len(q) != len(p):
        raise DimensionMismatch(f"operands have lengths {len(q)} and {len(p)}")
    arg = 1.0 + float(phi.gradient(p) @ (q.w - p.w))
    if arg <= 0.0:
        raise GeneratorViolation("first-order term 1 + grad phi(p).(q-p) is not positive")
    return math.log(arg) - (phi.evaluate(q) - phi.evaluate(p))


def perturbation_invariance_residual(
    phi: ExpConcaveGenerator, p: Weights, q: Weights, h: Weights
) -> float:
    """``|L(q (+) h || p (+) h) - L(q || p)|`` under the full-support perturbation."""
    p, q, h = _require_open(p), _require_open(q), _require_open(h)
    base = log_divergence(phi, q, p)
    shifted = log_divergence(phi, perturb(q, h), perturb(p, h))
    return abs(shifted - base)


def fisher_rao_form(p: Weights, v, pi: Weights | None = None) -> float:
    """Quadratic form driving the small-perturbation limit of the divergence.

    With ``pi=None``: ``sum_i v_i^2 / p_i`` (the tangent-space metric at
    ``p``).  With explicit ``pi``: the induced form
    ``sum_ij pi_i (delta_ij - pi_j) v_i v_j / (p_i p_j)``, i.e. the
    ``pi``-weighted variance of ``v/p``.

    Raises
    ------
    TangencyViolation
        If the entries of ``v`` sum to more than ``1e-12`` away from zero.
    """
    p = _require_open(p)
    v = np.asarray(v, dtype=float)
    if v.ndim != 1 or v.size != len(p):
        raise DimensionMismatch(f"direction has shape {v.shape}, point has length {len(p)}")
    if abs(float(v.sum())) > 1e-12:
        raise TangencyViolation(f"direction entries sum to {float(v.sum())!r}, not 0")
    u = v / p.w
    if pi is None:
        return float(v @ u)
    pi = weights(pi)
    if len(pi) != len(p):
        raise DimensionMismatch(f"weights have length {len(pi)}, point has length {len(p)}")
    return weighted_variance(pi, u)


@dataclass(frozen=True, eq=False)
class ExpCoordinates:
    """Log-ratio coordinates against the last component: ``theta_i = log(p_i / p_n)``."""

    theta: np.ndarray

    def __post_init__(self):
        t = np.asarray(self.theta, dtype=float)
        if t.ndim != 1:
            raise DimensionMismatch("coordinates must be one-dimensional")
        if not np.all(np.isfinite(t)):
            raise ValueError("coordinates must be finite")
        t = t.copy()
        t.flags.writeable = False
        object.__setattr__(self, "theta", t)


def to_exp_coords(p: Weights) -> ExpCoordinates:
    """Coordinates of an open-simplex point; the perturbation group maps to addition."""
    p = weights(p)
    if not p.is_open():
        raise BoundaryPoint("exponential coordinates need strictly positive weights")
    logp = np.log(p.w)
    return ExpCoordinates(logp[:-1] - logp[-1])


def from_exp_coords(theta: ExpCoordinates) -> Weights:
    """Inverse chart: softmax of ``(theta, 0)`` with max-shift."""
    t = theta.theta if isinstance(theta, ExpCoordinates) else ExpCoordinates(theta).theta
    z = np.concatenate([t, [0.0]])
    z -= z.max()
    e = np.exp(z)
    return Weights(e / e.sum())

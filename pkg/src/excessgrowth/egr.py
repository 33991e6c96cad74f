"""The excess growth rate in its three forms, chain rules, and the
tilted-measure identities (Gibbs/free energy, code-length gap).

Conventions: natural logarithm internally (the code-length interface converts
at the boundary); every sum runs over the exact support of the weight vector,
so zero-weight coordinates can never contribute ``0 * log 0``; log-sum-exp is
max-shifted throughout.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import DimensionMismatch, DomainViolation
from .simplex import CompositeSpec, Weights, closure, composite, weights

__all__ = [
    "egr",
    "egr_log",
    "egr_div",
    "chain_decompose",
    "EnergySpec",
    "gibbs",
    "free_energy",
    "CodeSpec",
    "campbell_length",
    "shannon_length",
    "weighted_variance",
]


def _weighted_lse(logw: np.ndarray, t: np.ndarray) -> float:
    """log(sum(exp(logw + t))) with max-shift; inputs are 1-d and finite."""
    z = logw + t
    m = z.max()
    return float(np.log(np.exp(z - m).sum()) + m)


def _support_parts(pi: Weights, vec, name: str, *, log_input: bool):
    v = np.asarray(vec, dtype=float)
    if v.ndim != 1 or v.size != len(pi):
        raise DimensionMismatch(f"{name} has shape {v.shape}, weights have length {len(pi)}")
    sup = pi.support_array
    vs = v[sup]
    if log_input:
        if not np.all(np.isfinite(vs)):
            raise DomainViolation(f"{name} must be finite on the support of the weights")
    else:
        if np.any(np.isnan(vs)) or np.any(vs < 0) or np.any(np.isinf(vs)):
            raise DomainViolation(f"{name} must be finite and nonnegative")
        if np.any(vs == 0):
            raise DomainViolation(
                f"support of the weights is not contained in the support of {name}"
            )
    return pi.w[sup], vs


def egr(pi: Weights, R) -> float:
    """Excess growth rate of gross returns ``R`` weighted by ``pi``.

    ``log(sum_i pi_i R_i) - sum_i pi_i log(R_i)`` with sums over the support
    of ``pi``.  Always nonnegative; zero iff ``R`` is constant on the support.

    Raises
    ------
    DomainViolation
        If some ``R_i`` is zero (or not finite) where ``pi_i > 0``.
    """
    pi = weights(pi)
    w, Rs = _support_parts(pi, R, "returns", log_input=False)
    val = float(np.log(w @ Rs) - w @ np.log(Rs))
    return val if val > 0.0 else 0.0


def egr_log(pi: Weights, r) -> float:
    """Excess growth rate from log returns: ``log(sum pi e^r) - <pi, r>``.

    Max-shifted, so entries with ``|r_i|`` up to 700 are safe.  Entries off
    the support may be ``-inf``.
    """
    pi = weights(pi)
    w, rs = _support_parts(pi, r, "log returns", log_input=True)
    val = _weighted_lse(np.log(w), rs) - float(w @ rs)
    return val if val > 0.0 else 0.0


def egr_div(pi: Weights, Y, X) -> float:
    """Divergence form: excess growth rate of the componentwise ratio ``Y/X``.

    Scale-invariant in both arguments.  ``X`` and ``Y`` must be strictly
    positive on the support of ``pi``.
    """
    pi = weights(pi)
    _, Ys = _support_parts(pi, Y, "numerator returns", log_input=False)
    _, Xs = _support_parts(pi, X, "denominator returns", log_input=False)
    r = np.full(len(pi), -np.inf)
    r[pi.support_array] = np.log(Ys) - np.log(Xs)
    return egr_log(pi, r)


def chain_decompose(spec: CompositeSpec, returns) -> tuple:
    """Split the excess growth rate of a composite portfolio into levels.

    Parameters
    ----------
    spec : CompositeSpec
        Outer weights, inner blocks, optional block scale ``a``.
    returns : sequence of array_like
        One gross-return vector per block.

    Returns
    -------
    (total, outer_term, inner_terms)
        ``total`` is the excess growth rate of the flattened portfolio
        ``composite(spec)`` against the flattened returns ``a . R``;
        ``outer_term`` uses the block aggregates ``a_i <p_i, R_i>``;
        ``inner_terms[i]`` is the excess growth rate inside block ``i``.
        ``total = outer_term + sum_i outer_i * inner_terms[i]``.
    """
    blocks = spec.blocks
    if len(returns) != len(blocks):
        raise DimensionMismatch(f"{len(returns)} return blocks for {len(blocks)} weight blocks")
    rets = [np.asarray(R, dtype=float) for R in returns]
    for b, R in zip(blocks, rets):
        if R.ndim != 1 or R.size != len(b):
            raise DimensionMismatch("return block shape does not match its weight block")
    scale = spec.scale if spec.scale is not None else np.ones(len(spec.outer))

    flat_returns = np.concatenate([a_i * R for a_i, R in zip(scale, rets)])
    total = egr(composite(spec), flat_returns)

    aggregates = np.array([float(b.w @ R) for b, R in zip(blocks, rets)])
    outer_term = egr(spec.outer, scale * aggregates)

    inner_terms = np.array([egr(b, R) for b, R in zip(blocks, rets)])
    return total, outer_term, inner_terms


@dataclass(frozen=True)
class EnergySpec:
    """State energies ``E``, inverse temperature ``beta > 0``, reference weights ``pi``."""

    E: np.ndarray
    beta: float
    pi: Weights

    def __post_init__(self):
        E = np.asarray(self.E, dtype=float)
        pi = weights(self.pi)
        if E.ndim != 1 or E.size != len(pi):
            raise DimensionMismatch(f"energies have shape {E.shape}, weights length {len(pi)}")
        if not np.all(np.isfinite(E[pi.support_array])):
            raise DomainViolation("energies must be finite on the support of the weights")
        if not (np.isfinite(self.beta) and self.beta > 0):
            raise ValueError(f"beta must be positive, got {self.beta!r}")
        E = E.copy()
        E.flags.writeable = False
        object.__setattr__(self, "E", E)
        object.__setattr__(self, "pi", pi)


def gibbs(spec: EnergySpec) -> Weights:
    """The tilted distribution ``p_i = pi_i e^(-beta E_i) / Z`` on the support of ``pi``."""
    pi, E, beta = spec.pi, spec.E, spec.beta
    sup = pi.support_array
    t = -beta * E[sup]
    t = t - t.max()
    out = np.zeros(len(pi))
    out[sup] = pi.w[sup] * np.exp(t)
    return closure(out, pi)


def free_energy(spec: EnergySpec) -> float:
    """``-(1/beta) log sum_i pi_i e^(-beta E_i)`` over the support of ``pi``.

    Satisfies ``egr_log(pi, -beta E) = beta (U - A)`` with ``U = <pi, E>``.
    """
    pi, E, beta = spec.pi, spec.E, spec.beta
    sup = pi.support_array
    return -_weighted_lse(np.log(pi.w[sup]), -beta * E[sup]) / beta


@dataclass(frozen=True)
class CodeSpec:
    """Codeword lengths over a ``D``-ary alphabet with exponent ``rho`` and weights ``pi``.

    ``pi`` must be strictly positive; lengths are integers >= 1.
    """

    lengths: np.ndarray
    D: int
    rho: float
    pi: Weights

    def __post_init__(self):
        ell = np.asarray(self.lengths)
        if ell.ndim != 1 or not np.issubdtype(ell.dtype, np.integer):
            ell_f = np.asarray(self.lengths, dtype=float)
            if ell_f.ndim != 1 or np.any(ell_f != np.round(ell_f)):
                raise ValueError("lengths must be a vector of integers")
            ell = ell_f.astype(int)
        if np.any(ell < 1):
            raise ValueError("lengths must be >= 1")
        if int(self.D) != self.D or self.D < 2:
            raise ValueError(f"alphabet size must be an integer >= 2, got {self.D!r}")
        if not (np.isfinite(self.rho) and self.rho > 0):
            raise ValueError(f"rho must be positive, got {self.rho!r}")
        pi = weights(self.pi)
        if len(pi) != ell.size:
            raise DimensionMismatch(f"{ell.size} lengths for weights of length {len(pi)}")
        if not pi.is_open():
            raise ValueError("code weights must be strictly positive")
        ell = ell.copy()
        ell.flags.writeable = False
        object.__setattr__(self, "lengths", ell)
        object.__setattr__(self, "D", int(self.D))
        object.__setattr__(self, "pi", pi)


def campbell_length(spec: CodeSpec) -> float:
    """Exponential-mean code length ``(1/rho) log_D sum_i pi_i D^(rho l_i)``."""
    lnD = np.log(float(spec.D))
    t = spec.rho * spec.lengths * lnD
    return _weighted_lse(np.log(spec.pi.w), t) / (spec.rho * lnD)


def shannon_length(spec: CodeSpec) -> float:
    """Expected code length ``sum_i pi_i l_i``."""
    return float(spec.pi.w @ spec.lengths)


def weighted_variance(pi: Weights, r) -> float:
    """Variance of ``r`` under ``pi``: ``sum pi r^2 - (sum pi r)^2``.

    For small ``t``, ``egr_log(pi, t r)`` approaches ``t^2/2`` times this
    quantity (the second-order behaviour of the log-sum-exp gap carries the
    one-half factor).
    """
    pi = weights(pi)
    w, rs = _support_parts(pi, r, "log returns", log_input=True)
    mean = float(w @ rs)
    dev = rs - mean
    return float(w @ (dev * dev))

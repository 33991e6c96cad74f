"""Simplex points and the Aitchison-style operations everything else composes.

A :class:`Weights` is a point of the closed unit simplex with an explicit,
exact-zero support set.  Support is never inferred through an epsilon
threshold: an entry belongs to the support iff it is strictly positive, and
renormalization happens only through the explicit :func:`closure` operation.

All operations are pure functions on immutable values.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import BoundaryPoint, DimensionMismatch, ZeroOnSupport

SUM_TOL = 1e-12

__all__ = [
    "Weights",
    "weights",
    "closure",
    "perturb",
    "subtract",
    "power",
    "CompositeSpec",
    "composite",
    "barycenter",
    "support",
    "hadamard",
    "comp_inverse",
]


def _as_float_array(x, name: str) -> np.ndarray:
    arr = np.asarray(x, dtype=float)
    if arr.ndim != 1:
        raise DimensionMismatch(f"{name} must be one-dimensional, got shape {arr.shape}")
    if arr.size == 0:
        raise DimensionMismatch(f"{name} must have length >= 1")
    return arr


class Weights:
    """A point of the closed simplex with its exact support.

    Parameters
    ----------
    values : array_like
        Nonnegative entries summing to 1 within ``1e-12``.  The constructor
        validates; it never renormalizes.

    Attributes
    ----------
    w : numpy.ndarray
        The simplex coordinates (read-only).
    support : tuple of int
        Indices of the strictly positive entries (0-based).
    """

    __slots__ = ("_w", "_support")

    def __init__(self, values):
        w = _as_float_array(values, "weights").copy()
        if not np.all(np.isfinite(w)):
            raise ValueError("weights must be finite")
        if np.any(w < 0):
            raise ValueError(f"weights must be nonnegative, got {w}")
        s = float(w.sum())
        if abs(s - 1.0) > SUM_TOL:
            raise ValueError(f"weights must sum to 1 within {SUM_TOL}, got sum {s!r}")
        sup = np.flatnonzero(w > 0)
        if sup.size == 0:
            raise ValueError("weights must have nonempty support")
        w.flags.writeable = False
        self._w = w
        self._support = tuple(int(i) for i in sup)

    @property
    def w(self) -> np.ndarray:
        return self._w

    @property
    def support(self) -> tuple:
        return self._support

    @property
    def support_array(self) -> np.ndarray:
        return np.asarray(self._support, dtype=int)

    def is_open(self) -> bool:
        """True when every entry is strictly positive."""
        return len(self._support) == len(self._w)

    def __len__(self) -> int:
        return self._w.size

    def __iter__(self):
        return iter(self._w)

    def __getitem__(self, i):
        return self._w[i]

    def __eq__(self, other) -> bool:
        if not isinstance(other, Weights):
            return NotImplemented
        return self._w.shape == other._w.shape and bool(np.all(self._w == other._w))

    def __hash__(self):
        return hash(self._w.tobytes())

    def __repr__(self) -> str:
        return f"Weights({np.array2string(self._w, separator=', ')})"


def weights(values) -> Weights:
    """Validating constructor; accepts any one-dimensional sequence."""
    return values if isinstance(values, Weights) else Weights(values)


def _ref_support(ref: Weights) -> np.ndarray:
    return ref.support_array


def closure(x, ref: Weights | None = None) -> Weights:
    """Normalize ``x`` onto the simplex, restricted to the support of ``ref``.

    With ``ref=None`` the support is taken to be the strictly positive entries
    of ``x`` itself.  Mass off the reference support is discarded before
    normalizing; a zero of ``x`` on the reference support is an error because
    the result would not share the reference's support.

    Raises
    ------
    ZeroOnSupport
        If ``x_i = 0`` (or negative) for some ``i`` in the support of ``ref``.
    """
    x = _as_float_array(x, "x")
    if not np.all(np.isfinite(x)):
        raise ValueError("closure argument must be finite")
    if np.any(x < 0):
        raise ValueError("closure argument must be nonnegative")
    if ref is None:
        s = x.sum()
        if s <= 0:
            raise ZeroOnSupport("closure argument must have at least one positive entry")
        return Weights(x / s)
    if len(ref) != x.size:
        raise DimensionMismatch(f"x has length {x.size}, ref has length {len(ref)}")
    sup = _ref_support(ref)
    xs = x[sup]
    if np.any(xs <= 0):
        bad = int(sup[np.flatnonzero(xs <= 0)[0]])
        raise ZeroOnSupport(f"x is not positive at reference-support index {bad}")
    out = np.zeros_like(x)
    out[sup] = xs / xs.sum()
    return Weights(out)


def perturb(x: Weights, y: Weights, ref: Weights | None = None) -> Weights:
    """Aitchison perturbation: closure of the componentwise product.

    ``ref=None`` means the full-support operation on the open simplex.
    """
    x, y = weights(x), weights(y)
    if len(x) != len(y):
        raise DimensionMismatch(f"operands have lengths {len(x)} and {len(y)}")
    if ref is None:
        ref = _full_ref(len(x))
    return closure(x.w * y.w, ref)


def subtract(x: Weights, y: Weights, ref: Weights | None = None) -> Weights:
    """Aitchison difference: closure of the componentwise ratio ``x / y``.

    ``perturb(subtract(x, y, ref), y, ref)`` recovers ``closure(x, ref)``.
    """
    x, y = weights(x), weights(y)
    if len(x) != len(y):
        raise DimensionMismatch(f"operands have lengths {len(x)} and {len(y)}")
    if ref is None:
        ref = _full_ref(len(x))
    sup = _ref_support(ref)
    if np.any(y.w[sup] <= 0):
        raise ZeroOnSupport("subtrahend is zero on the reference support")
    ratio = np.zeros(len(x))
    ratio[sup] = x.w[sup]
    with np.errstate(divide="ignore", invalid="ignore"):
        ratio[sup] = ratio[sup] / y.w[sup]
    return closure(ratio, ref)


def power(alpha: float, x: Weights) -> Weights:
    """Aitchison powering: closure of ``x**alpha``.  Requires the open simplex."""
    x = weights(x)
    if not x.is_open():
        raise BoundaryPoint("powering needs strictly positive weights")
    # work in logs so large |alpha| cannot overflow before normalization
    t = alpha * np.log(x.w)
    t -= t.max()
    e = np.exp(t)
    return Weights(e / e.sum())


@dataclass(frozen=True)
class CompositeSpec:
    """Outer weights over blocks of inner weights, with an optional scale vector.

    ``scale`` (when present) must be positive wherever the outer weights are.
    """

    outer: Weights
    blocks: tuple
    scale: np.ndarray | None = None

    def __post_init__(self):
        object.__setattr__(self, "outer", weights(self.outer))
        object.__setattr__(self, "blocks", tuple(weights(b) for b in self.blocks))
        if len(self.blocks) != len(self.outer):
            raise DimensionMismatch(
                f"{len(self.blocks)} blocks for outer weights of length {len(self.outer)}"
            )
        if self.scale is not None:
            a = _as_float_array(self.scale, "scale")
            if a.size != len(self.outer):
                raise DimensionMismatch(
                    f"scale has length {a.size}, outer has length {len(self.outer)}"
                )
            if np.any(a < 0) or not np.all(np.isfinite(a)):
                raise ValueError("scale must be nonnegative and finite")
            if np.any(a[self.outer.support_array] == 0):
                raise ZeroOnSupport("scale is zero on the outer support")
            a = a.copy()
            a.flags.writeable = False
            object.__setattr__(self, "scale", a)

    @property
    def block_sizes(self) -> tuple:
        return tuple(len(b) for b in self.blocks)


def composite(spec: CompositeSpec) -> Weights:
    """The composite distribution: blocks scaled by the outer weights, concatenated."""
    parts = [pi_i * b.w for pi_i, b in zip(spec.outer.w, spec.blocks)]
    return Weights(np.concatenate(parts))


def barycenter(n: int) -> Weights:
    """The uniform point of the simplex (the zero element of the perturbation group)."""
    if n < 1:
        raise DimensionMismatch("barycenter needs n >= 1")
    return Weights(np.full(n, 1.0 / n))


def support(x) -> tuple:
    """Indices (0-based) of the strictly positive entries."""
    arr = _as_float_array(x, "x")
    return tuple(int(i) for i in np.flatnonzero(arr > 0))


def hadamard(x, y) -> np.ndarray:
    """Componentwise product of two vectors."""
    a = _as_float_array(x, "x")
    b = _as_float_array(y, "y")
    if a.size != b.size:
        raise DimensionMismatch(f"operands have lengths {a.size} and {b.size}")
    return a * b


def comp_inverse(x) -> np.ndarray:
    """Componentwise reciprocal; rejects zero entries."""
    a = _as_float_array(x, "x")
    if np.any(a == 0):
        raise BoundaryPoint("componentwise inverse of a vector with a zero entry")
    return 1.0 / a


def _full_ref(n: int) -> Weights:
    return barycenter(n)

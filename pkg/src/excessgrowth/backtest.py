"""Return panels and the rebalanced-portfolio decomposition.

A constant-rebalanced portfolio's log wealth splits exactly into the weighted
average of the assets' log returns plus the accumulated excess growth rate;
this module ingests gross-return panels, evaluates that identity, and rolls
the excess growth rate over non-overlapping windows.
"""

from __future__ import annotations

import csv
import math
from dataclasses import dataclass

import numpy as np

from .egr import egr
from .errors import (
    DimensionMismatch,
    DomainViolation,
    NonPositiveReturn,
    ParseError,
    RaggedRows,
)
from .simplex import Weights, weights

__all__ = [
    "ReturnsPanel",
    "DecompositionReport",
    "EqualOnTopK",
    "Fixed",
    "load_panel",
    "rebalanced_decomposition",
    "rolling_egr",
    "synthetic_panel",
]


@dataclass(frozen=True, eq=False)
class ReturnsPanel:
    """T periods of gross returns for n assets, all entries strictly positive."""

    gross: np.ndarray
    asset_names: tuple
    period_labels: tuple

    def __post_init__(self):
        g = np.asarray(self.gross, dtype=float)
        if g.ndim != 2 or g.shape[0] < 1 or g.shape[1] < 1:
            raise DimensionMismatch(f"panel must be a T x n matrix, got shape {g.shape}")
        names = tuple(str(a) for a in self.asset_names)
        labels = tuple(str(p) for p in self.period_labels)
        if len(names) != g.shape[1]:
            raise DimensionMismatch(f"{len(names)} asset names for {g.shape[1]} columns")
        if len(labels) != g.shape[0]:
            raise DimensionMismatch(f"{len(labels)} period labels for {g.shape[0]} rows")
        if len(set(names)) != len(names):
            raise DomainViolation("asset names must be unique")
        if len(set(labels)) != len(labels):
            raise DomainViolation("period labels must be unique")
        bad = ~(np.isfinite(g) & (g > 0.0))
        if bad.any():
            t, j = (int(i) for i in np.argwhere(bad)[0])
            raise NonPositiveReturn(t + 1, j + 1, float(g[t, j]))
        g = g.copy()
        g.flags.writeable = False
        object.__setattr__(self, "gross", g)
        object.__setattr__(self, "asset_names", names)
        object.__setattr__(self, "period_labels", labels)

    @property
    def t(self) -> int:
        return self.gross.shape[0]

    @property
    def n(self) -> int:
        return self.gross.shape[1]


@dataclass(frozen=True, eq=False)
class DecompositionReport:
    """Exact additive split of a constant-rebalanced portfolio's log wealth.

    ``total_log_return = weighted_avg_log_return + cumulative_egr``, with
    ``cumulative_egr`` the sum of the per-period excess growth rates.
    """

    total_log_return: float
    weighted_avg_log_return: float
    cumulative_egr: float
    per_period_egr: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.per_period_egr, dtype=float).copy()
        arr.flags.writeable = False
        object.__setattr__(self, "per_period_egr", arr)


@dataclass(frozen=True)
class EqualOnTopK:
    """Each window: equal weight on the ``k`` assets with the largest
    start-of-window relative price (cumulative product of gross returns)."""

    k: int


@dataclass(frozen=True, eq=False)
class Fixed:
    """The same weight vector in every window."""

    pi: Weights

    def __post_init__(self):
        object.__setattr__(self, "pi", weights(self.pi))


def load_panel(path, log_returns: bool = False) -> ReturnsPanel:
    """Read a panel from CSV: header ``period,<asset1>,...,<assetN>``, one
    period per row, gross returns as decimal literals.

    With ``log_returns=True`` the numeric cells are log returns and are
    exponentiated on ingestion (a log return so negative that its gross
    return underflows to zero is rejected like any nonpositive entry).
    Coordinates in errors are 1-based over data rows and asset columns.
    """
    rows = []
    with open(path, newline="") as fh:
        for raw in csv.reader(fh):
            if not raw or all(not c.strip() for c in raw):
                continue
            rows.append([c.strip() for c in raw])
    if not rows:
        raise ParseError(f"{path}: empty file")
    header = rows[0]
    if len(header) < 2:
        raise ParseError(f"{path}: header must name a period column and at least one asset")
    asset_names = tuple(header[1:])
    data = rows[1:]
    if not data:
        raise ParseError(f"{path}: header only, no periods")
    width = len(header)
    labels = []
    values = []
    for i, row in enumerate(data):
        if len(row) != width:
            raise RaggedRows(f"{path}: row {i + 1} has {len(row)} fields, expected {width}")
        labels.append(row[0])
        parsed = []
        for j, cell in enumerate(row[1:]):
            try:
                x = float(cell)
            except ValueError:
                raise ParseError(
                    f"{path}: row {i + 1}, column {asset_names[j]!r}: not a number: {cell!r}"
                ) from None
            if log_returns:
                if not math.isfinite(x):
                    raise ParseError(
                        f"{path}: row {i + 1}, column {asset_names[j]!r}: "
                        f"log return must be finite, got {cell!r}"
                    )
                x = math.exp(x)
            parsed.append(x)
        values.append(parsed)
    return ReturnsPanel(np.array(values), asset_names, tuple(labels))


def rebalanced_decomposition(pi: Weights, panel: ReturnsPanel) -> DecompositionReport:
    """Split the log wealth of the portfolio rebalanced to ``pi`` each period.

    ``total = sum_t log <pi, R(t)>``, ``weighted_avg = <pi, sum_t log R(t)>``,
    and the per-period excess growth rates make up the difference exactly.
    """
    pi = weights(pi)
    if len(pi) != panel.n:
        raise DomainViolation(f"weights have length {len(pi)}, panel has {panel.n} assets")
    g = panel.gross
    total = float(np.log(g @ pi.w).sum())
    weighted_avg = float(pi.w @ np.log(g).sum(axis=0))
    per_period = np.array([egr(pi, g[t]) for t in range(panel.t)])
    return DecompositionReport(total, weighted_avg, float(per_period.sum()), per_period)


def rolling_egr(panel: ReturnsPanel, window: int, weighting) -> tuple:
    """Excess growth rate over consecutive non-overlapping windows.

    Within each window the gross returns compound per asset; trailing periods
    that do not fill a window are dropped.  ``weighting`` is ``Fixed(pi)`` or
    ``EqualOnTopK(k)`` (ranking by cumulative product of gross returns from
    the panel start, so the first window ranks every asset equal at 1 and
    ties break toward lower column index).  Returns ``(per_window,
    cumulative)`` with ``cumulative`` the running sum.
    """
    if window < 1:
        raise DomainViolation(f"window must be >= 1, got {window}")
    if panel.t < window:
        raise DomainViolation(f"window {window} exceeds panel length {panel.t}")
    if isinstance(weighting, Fixed):
        if len(weighting.pi) != panel.n:
            raise DomainViolation(
                f"weights have length {len(weighting.pi)}, panel has {panel.n} assets"
            )
    elif isinstance(weighting, EqualOnTopK):
        if not (1 <= weighting.k <= panel.n):
            raise DomainViolation(
                f"k must be between 1 and {panel.n}, got {weighting.k}"
            )
    else:
        raise DomainViolation(f"unknown weighting {weighting!r}")

    g = panel.gross
    n_windows = panel.t // window
    per_window = np.empty(n_windows)
    price = np.ones(panel.n)
    for w_idx in range(n_windows):
        block = g[w_idx * window : (w_idx + 1) * window]
        compounded = block.prod(axis=0)
        if isinstance(weighting, Fixed):
            pi = weighting.pi
        else:
            order = np.argsort(-price, kind="stable")
            chosen = np.zeros(panel.n)
            chosen[order[: weighting.k]] = 1.0 / weighting.k
            pi = Weights(chosen)
        per_window[w_idx] = egr(pi, compounded)
        price = price * compounded
    return per_window, np.cumsum(per_window)


def synthetic_panel(
    n: int, regimes, seed: int, drift: float = 0.0
) -> ReturnsPanel:
    """Panel of i.i.d. normal log returns with piecewise-constant volatility.

    ``regimes`` is a sequence of ``(length, vol)`` pairs laid out in order;
    each period's log returns are drawn ``Normal(drift, vol)`` independently
    across assets.  Deterministic in ``seed``.
    """
    if n < 1:
        raise DomainViolation(f"need at least one asset, got {n}")
    regimes = [(int(length), float(vol)) for length, vol in regimes]
    if not regimes or any(length < 1 or vol < 0 for length, vol in regimes):
        raise DomainViolation("regimes must be (length >= 1, vol >= 0) pairs")
    rng = np.random.Generator(np.random.Philox(np.random.SeedSequence(seed)))
    blocks = [
        drift + vol * rng.standard_normal((length, n)) for length, vol in regimes
    ]
    log_r = np.vstack(blocks)
    t = log_r.shape[0]
    names = tuple(f"a{j + 1}" for j in range(n))
    labels = tuple(f"t{i + 1}" for i in range(t))
    return ReturnsPanel(np.exp(log_r), names, labels)

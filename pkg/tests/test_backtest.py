"""Panels, the log-wealth decomposition, and rolling windows."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from excessgrowth import (
    EqualOnTopK,
    Fixed,
    ReturnsPanel,
    Weights,
    barycenter,
    egr,
    load_panel,
    rebalanced_decomposition,
    rolling_egr,
    synthetic_panel,
)
from excessgrowth.errors import (
    DimensionMismatch,
    DomainViolation,
    NonPositiveReturn,
    ParseError,
    RaggedRows,
)


def panel(rows, names=None, labels=None):
    g = np.asarray(rows, dtype=float)
    names = names or tuple(f"a{j + 1}" for j in range(g.shape[1]))
    labels = labels or tuple(f"t{i + 1}" for i in range(g.shape[0]))
    return ReturnsPanel(g, names, labels)


panels = st.integers(2, 4).flatmap(
    lambda n: st.integers(1, 8).flatmap(
        lambda t: st.lists(
            st.lists(st.floats(0.2, 5.0), min_size=n, max_size=n),
            min_size=t,
            max_size=t,
        )
    )
).map(panel)


# ---------------------------------------------------------------------------
# panel construction and loading


def test_panel_validates_shapes_and_names():
    with pytest.raises(DimensionMismatch):
        ReturnsPanel(np.array([1.0, 2.0]), ("a",), ("t1", "t2"))
    with pytest.raises(DimensionMismatch):
        panel([[1.0, 2.0]], names=("a",))
    with pytest.raises(DimensionMismatch):
        panel([[1.0, 2.0]], labels=("t1", "t2"))
    with pytest.raises(DomainViolation):
        panel([[1.0, 2.0]], names=("a", "a"))
    with pytest.raises(DomainViolation):
        panel([[1.0, 2.0], [1.0, 2.0]], labels=("t1", "t1"))


def test_panel_rejects_nonpositive_entries_with_coordinates():
    with pytest.raises(NonPositiveReturn) as exc_info:
        panel([[1.0, 2.0], [0.5, -0.25]])
    err = exc_info.value
    assert (err.row, err.col, err.value) == (2, 2, -0.25)
    assert err.code == "NonPositiveReturn"
    with pytest.raises(NonPositiveReturn):
        panel([[1.0, np.inf]])


def test_panel_is_immutable_and_copies_input():
    g = np.array([[1.0, 2.0]])
    p = panel(g)
    g[0, 0] = -5.0
    assert p.gross[0, 0] == 1.0
    with pytest.raises(ValueError):
        p.gross[0, 0] = 3.0
    assert (p.t, p.n) == (1, 2)


def test_load_panel_round_trip(tmp_path):
    f = tmp_path / "p.csv"
    f.write_text("period,x,y\n2020,1.10,0.95\n2021,0.98,1.04\n")
    p = load_panel(f)
    assert p.asset_names == ("x", "y")
    assert p.period_labels == ("2020", "2021")
    assert p.gross[1, 0] == 0.98


def test_load_panel_log_mode_exponentiates(tmp_path):
    f = tmp_path / "p.csv"
    f.write_text("period,x,y\nt1,0.0,-0.5\n")
    p = load_panel(f, log_returns=True)
    assert p.gross[0, 0] == 1.0
    assert p.gross[0, 1] == pytest.approx(np.exp(-0.5), abs=1e-16)


def test_load_panel_log_mode_rejects_underflow(tmp_path):
    f = tmp_path / "p.csv"
    f.write_text("period,x\nt1,-800.0\n")
    with pytest.raises(NonPositiveReturn):
        load_panel(f, log_returns=True)


def test_load_panel_failure_modes(tmp_path):
    cases = {
        "empty.csv": ("", ParseError),
        "narrow.csv": ("period\nt1\n", ParseError),
        "headeronly.csv": ("period,x\n", ParseError),
        "ragged.csv": ("period,x,y\nt1,1.0\n", RaggedRows),
        "text.csv": ("period,x\nt1,soon\n", ParseError),
        "negative.csv": ("period,x\nt1,-1.0\n", NonPositiveReturn),
    }
    for fname, (content, exc) in cases.items():
        f = tmp_path / fname
        f.write_text(content)
        with pytest.raises(exc):
            load_panel(f)


def test_load_panel_names_the_offending_cell(tmp_path):
    f = tmp_path / "p.csv"
    f.write_text("period,x,y\nt1,1.0,1.0\nt2,1.0,oops\n")
    with pytest.raises(ParseError, match=r"row 2, column 'y'"):
        load_panel(f)


# ---------------------------------------------------------------------------
# the decomposition


@given(panels)
def test_decomposition_identity(p):
    pi = barycenter(p.n)
    rep = rebalanced_decomposition(pi, p)
    assert rep.total_log_return == pytest.approx(
        rep.weighted_avg_log_return + rep.cumulative_egr, abs=1e-10
    )
    assert rep.cumulative_egr == pytest.approx(rep.per_period_egr.sum(), abs=1e-14)
    assert rep.per_period_egr.min() >= 0.0
    assert len(rep.per_period_egr) == p.t


def test_decomposition_single_constant_period():
    p = panel([[1.25, 1.25]])
    rep = rebalanced_decomposition(Weights([0.5, 0.5]), p)
    assert rep.cumulative_egr == 0.0
    assert rep.total_log_return == pytest.approx(np.log(1.25), abs=1e-15)
    assert rep.total_log_return == rep.weighted_avg_log_return


def test_decomposition_matches_per_period_values():
    p = panel([[1.2, 0.8], [0.9, 1.1]])
    pi = Weights([0.3, 0.7])
    rep = rebalanced_decomposition(pi, p)
    expected = [egr(pi, row) for row in p.gross]
    assert rep.per_period_egr == pytest.approx(expected, abs=1e-16)


def test_decomposition_sees_the_path_not_just_the_totals():
    pi = Weights([0.5, 0.5])
    # both panels compound each asset to the same totals (1.2 and 0.8)
    smooth = panel([[1.2, 0.8], [1.0, 1.0]])
    rough = panel([[2.4, 0.4], [0.5, 2.0]])
    a = rebalanced_decomposition(pi, smooth)
    b = rebalanced_decomposition(pi, rough)
    assert a.weighted_avg_log_return == pytest.approx(b.weighted_avg_log_return, abs=1e-12)
    assert b.cumulative_egr > a.cumulative_egr + 0.1
    assert b.total_log_return > a.total_log_return


def test_decomposition_dimension_check():
    with pytest.raises(DomainViolation):
        rebalanced_decomposition(Weights([1.0]), panel([[1.0, 2.0]]))


def test_decomposition_is_numeraire_invariant():
    rng = np.random.default_rng(21)
    g = rng.uniform(0.5, 2.0, (6, 3))
    scale = rng.uniform(0.5, 2.0, 6)
    pi = Weights([0.2, 0.5, 0.3])
    base = rebalanced_decomposition(pi, panel(g))
    scaled = rebalanced_decomposition(pi, panel(g * scale[:, None]))
    assert scaled.per_period_egr == pytest.approx(base.per_period_egr, abs=1e-12)
    assert scaled.cumulative_egr == pytest.approx(base.cumulative_egr, abs=1e-12)


# ---------------------------------------------------------------------------
# rolling windows


def test_rolling_whole_horizon_window():
    p = panel([[1.2, 0.8], [0.9, 1.1], [1.0, 1.3]])
    pi = Weights([0.5, 0.5])
    per, cum = rolling_egr(p, 3, Fixed(pi))
    assert per.shape == (1,)
    assert per[0] == egr(pi, p.gross.prod(axis=0))
    assert cum[0] == per[0]


def test_rolling_constant_panel_is_flat():
    p = panel(np.full((6, 2), 1.07))
    per, cum = rolling_egr(p, 2, Fixed(Weights([0.5, 0.5])))
    assert per == pytest.approx([0.0, 0.0, 0.0], abs=0.0)
    assert cum == pytest.approx([0.0, 0.0, 0.0], abs=0.0)


def test_rolling_drops_the_leftover_periods():
    p = panel(np.linspace(0.8, 1.2, 14).reshape(7, 2))
    per, cum = rolling_egr(p, 2, Fixed(Weights([0.5, 0.5])))
    assert per.shape == (3,)
    assert cum == pytest.approx(np.cumsum(per), abs=0.0)


def test_rolling_windows_see_more_inside_variation():
    # vol clusters in the second half; per-window values should pick it up
    p = synthetic_panel(4, [(40, 0.05), (40, 0.5)], seed=5)
    per, _ = rolling_egr(p, 10, Fixed(barycenter(4)))
    assert np.median(per[4:]) > 10.0 * np.median(per[:4])


def test_rolling_top_k_starts_equal_and_follows_prices():
    # asset 2 dominates the first window, asset 1 the second
    p = panel([[1.0, 4.0], [1.0, 4.0], [9.0, 1.0], [9.0, 1.0]])
    per_top, _ = rolling_egr(p, 2, EqualOnTopK(1))
    # first window ranks all prices at 1 and breaks the tie to column 1;
    # single-asset weightings have no excess growth
    assert per_top[0] == 0.0 and per_top[1] == 0.0
    per_both, _ = rolling_egr(p, 2, EqualOnTopK(2))
    even = Weights([0.5, 0.5])
    expect = [egr(even, np.array([1.0, 16.0])), egr(even, np.array([81.0, 1.0]))]
    assert per_both == pytest.approx(expect, abs=1e-15)


def test_rolling_top_k_reweights_between_windows():
    p = panel([[1.0, 2.0], [1.0, 2.0], [1.5, 0.9], [1.5, 0.9]])
    per, _ = rolling_egr(p, 2, EqualOnTopK(1))
    # window 2 holds asset 2 (price 4 vs 1), window 3 would hold asset 1
    assert per.shape == (2,)
    assert per == pytest.approx([0.0, 0.0], abs=0.0)


def test_rolling_validates_arguments():
    p = panel([[1.0, 2.0], [1.0, 2.0]])
    with pytest.raises(DomainViolation):
        rolling_egr(p, 0, Fixed(Weights([0.5, 0.5])))
    with pytest.raises(DomainViolation):
        rolling_egr(p, 3, Fixed(Weights([0.5, 0.5])))
    with pytest.raises(DomainViolation):
        rolling_egr(p, 1, Fixed(Weights([1.0])))
    with pytest.raises(DomainViolation):
        rolling_egr(p, 1, EqualOnTopK(0))
    with pytest.raises(DomainViolation):
        rolling_egr(p, 1, EqualOnTopK(3))
    with pytest.raises(DomainViolation):
        rolling_egr(p, 1, "uniform")


def test_rolling_is_numeraire_invariant():
    rng = np.random.default_rng(22)
    g = rng.uniform(0.5, 2.0, (8, 3))
    scale = rng.uniform(0.5, 2.0, 8)
    for weighting in (Fixed(Weights([0.2, 0.5, 0.3])), EqualOnTopK(2)):
        base, _ = rolling_egr(panel(g), 2, weighting)
        scaled, _ = rolling_egr(panel(g * scale[:, None]), 2, weighting)
        assert scaled == pytest.approx(base, abs=1e-12)


# ---------------------------------------------------------------------------
# synthetic panels


def test_synthetic_panel_is_deterministic():
    a = synthetic_panel(3, [(5, 0.1), (5, 0.4)], seed=11)
    b = synthetic_panel(3, [(5, 0.1), (5, 0.4)], seed=11)
    c = synthetic_panel(3, [(5, 0.1), (5, 0.4)], seed=12)
    assert np.array_equal(a.gross, b.gross)
    assert not np.array_equal(a.gross, c.gross)


def test_synthetic_panel_shape_and_names():
    p = synthetic_panel(2, [(3, 0.1), (4, 0.2)], seed=0)
    assert (p.t, p.n) == (7, 2)
    assert p.asset_names == ("a1", "a2")
    assert p.period_labels[0] == "t1" and p.period_labels[-1] == "t7"


def test_synthetic_panel_zero_vol_is_pure_drift():
    p = synthetic_panel(2, [(4, 0.0)], seed=1, drift=0.03)
    assert p.gross == pytest.approx(np.full((4, 2), np.exp(0.03)), abs=1e-15)


def test_synthetic_panel_validates_arguments():
    with pytest.raises(DomainViolation):
        synthetic_panel(0, [(3, 0.1)], seed=0)
    with pytest.raises(DomainViolation):
        synthetic_panel(2, [], seed=0)
    with pytest.raises(DomainViolation):
        synthetic_panel(2, [(0, 0.1)], seed=0)
    with pytest.raises(DomainViolation):
        synthetic_panel(2, [(3, -0.1)], seed=0)

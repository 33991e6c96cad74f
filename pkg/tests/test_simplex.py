"""Weights validation and the compositional operations."""

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from excessgrowth import (
    CompositeSpec,
    Weights,
    barycenter,
    closure,
    comp_inverse,
    composite,
    hadamard,
    perturb,
    power,
    subtract,
    support,
    weights,
)
from excessgrowth.errors import (
    BoundaryPoint,
    DimensionMismatch,
    ZeroOnSupport,
)

open_point = st.integers(2, 6).flatmap(
    lambda n: st.lists(st.floats(0.05, 1.0), min_size=n, max_size=n)
).map(lambda xs: Weights(np.asarray(xs) / np.sum(xs)))


# ---------------------------------------------------------------------------
# Weights


def test_weights_accepts_exact_simplex_point():
    w = Weights([0.5, 0.3, 0.2])
    assert w.w.tolist() == [0.5, 0.3, 0.2]
    assert w.support == (0, 1, 2)
    assert w.is_open()
    assert len(w) == 3


def test_weights_support_is_exact_zero_based():
    w = Weights([0.5, 0.0, 0.5])
    assert w.support == (0, 2)
    assert not w.is_open()


@pytest.mark.parametrize(
    "bad",
    [
        [0.5, -0.1, 0.6],
        [0.5, 0.6],
        [0.0, 0.0],
        [0.5, float("nan"), 0.5],
        [0.5, float("inf")],
        [],
    ],
)
def test_weights_rejects_invalid(bad):
    with pytest.raises((ValueError, DimensionMismatch)):
        Weights(bad)


def test_weights_rejects_two_dimensional():
    with pytest.raises(DimensionMismatch):
        Weights(np.ones((2, 2)) / 4.0)


def test_weights_sum_tolerance_is_tight():
    Weights([0.5, 0.5 + 5e-13])
    with pytest.raises(ValueError):
        Weights([0.5, 0.5 + 5e-12])


def test_weights_array_is_immutable():
    w = Weights([0.4, 0.6])
    with pytest.raises(ValueError):
        w.w[0] = 0.5


def test_weights_copies_its_input():
    raw = np.array([0.4, 0.6])
    w = Weights(raw)
    raw[0] = 0.0
    assert w.w[0] == 0.4


def test_weights_equality_and_hash():
    a = Weights([0.4, 0.6])
    b = Weights([0.4, 0.6])
    c = Weights([0.6, 0.4])
    assert a == b and hash(a) == hash(b)
    assert a != c
    assert a != "not weights"


def test_weights_helper_passes_through():
    w = Weights([0.4, 0.6])
    assert weights(w) is w
    assert weights([0.4, 0.6]) == w


# ---------------------------------------------------------------------------
# closure


def test_closure_normalizes():
    assert closure([2.0, 3.0]) == Weights([0.4, 0.6])


def test_closure_with_reference_restricts_support():
    ref = Weights([0.5, 0.0, 0.5])
    out = closure([2.0, 7.0, 3.0], ref)
    assert out == Weights([0.4, 0.0, 0.6])


def test_closure_zero_on_reference_support_raises():
    ref = Weights([0.5, 0.5])
    with pytest.raises(ZeroOnSupport):
        closure([1.0, 0.0], ref)


def test_closure_rejects_all_zero_and_negatives():
    with pytest.raises(ZeroOnSupport):
        closure([0.0, 0.0])
    with pytest.raises(ValueError):
        closure([1.0, -1.0])


def test_closure_dimension_mismatch():
    with pytest.raises(DimensionMismatch):
        closure([1.0, 2.0, 3.0], Weights([0.5, 0.5]))


# ---------------------------------------------------------------------------
# the perturbation group


@given(open_point, open_point)
def test_subtract_inverts_perturb(x, y):
    if len(x) != len(y):
        return
    back = perturb(subtract(x, y), y)
    assert np.abs(back.w - x.w).max() <= 1e-14


@given(open_point, open_point)
def test_perturb_commutes(x, y):
    if len(x) != len(y):
        return
    assert np.abs(perturb(x, y).w - perturb(y, x).w).max() <= 1e-15


@given(open_point)
def test_barycenter_is_the_identity(x):
    e = barycenter(len(x))
    assert np.abs(perturb(x, e).w - x.w).max() <= 1e-15
    assert np.abs(subtract(x, x).w - e.w).max() <= 1e-15


@given(open_point, st.floats(-3.0, 3.0), st.floats(-3.0, 3.0))
def test_power_is_a_group_action(x, a, b):
    lhs = power(a + b, x)
    rhs = perturb(power(a, x), power(b, x))
    assert np.abs(lhs.w - rhs.w).max() <= 1e-12


def test_power_extreme_exponent_does_not_overflow():
    x = Weights([0.6, 0.4])
    hi = power(500.0, x)
    assert np.isfinite(hi.w).all()
    assert hi.w[0] > 1.0 - 1e-12


def test_power_requires_open_simplex():
    with pytest.raises(BoundaryPoint):
        power(2.0, Weights([1.0, 0.0]))


def test_perturb_with_reference_stays_on_reference_support():
    ref = Weights([0.0, 0.5, 0.5])
    x = Weights([0.2, 0.3, 0.5])
    y = Weights([0.5, 0.25, 0.25])
    out = perturb(x, y, ref)
    assert out.support == (1, 2)


# ---------------------------------------------------------------------------
# composites


def test_composite_concatenates_scaled_blocks():
    spec = CompositeSpec(
        Weights([0.6, 0.4]),
        (Weights([0.5, 0.5]), Weights([1.0])),
    )
    assert composite(spec) == Weights([0.3, 0.3, 0.4])
    assert spec.block_sizes == (2, 1)


def test_composite_zero_outer_weight_zeroes_the_block():
    spec = CompositeSpec(
        Weights([1.0, 0.0]),
        (Weights([0.5, 0.5]), Weights([0.25, 0.75])),
    )
    assert composite(spec) == Weights([0.5, 0.5, 0.0, 0.0])


def test_composite_spec_validates_block_count_and_scale():
    with pytest.raises(DimensionMismatch):
        CompositeSpec(Weights([0.6, 0.4]), (Weights([1.0]),))
    with pytest.raises(DimensionMismatch):
        CompositeSpec(Weights([0.6, 0.4]), (Weights([1.0]), Weights([1.0])), scale=np.ones(3))
    with pytest.raises(ZeroOnSupport):
        CompositeSpec(
            Weights([0.6, 0.4]),
            (Weights([1.0]), Weights([1.0])),
            scale=np.array([1.0, 0.0]),
        )


# ---------------------------------------------------------------------------
# small helpers


def test_support_helper():
    assert support([0.0, 1.0, 0.0, 2.0]) == (1, 3)


def test_hadamard_and_inverse():
    assert hadamard([2.0, 3.0], [4.0, 5.0]).tolist() == [8.0, 15.0]
    assert comp_inverse([2.0, 4.0]).tolist() == [0.5, 0.25]
    with pytest.raises(BoundaryPoint):
        comp_inverse([1.0, 0.0])
    with pytest.raises(DimensionMismatch):
        hadamard([1.0], [1.0, 2.0])


def test_barycenter_validates():
    with pytest.raises(DimensionMismatch):
        barycenter(0)

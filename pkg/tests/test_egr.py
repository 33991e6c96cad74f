"""The rate itself, its chain rules, and the tilted-measure identities."""

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from excessgrowth import (
    CodeSpec,
    CompositeSpec,
    EnergySpec,
    Weights,
    barycenter,
    campbell_length,
    chain_decompose,
    closure,
    egr,
    egr_div,
    egr_log,
    free_energy,
    gibbs,
    relative_entropy,
    shannon_length,
    weighted_variance,
)
from excessgrowth.errors import DimensionMismatch, DomainViolation

simplex_and_returns = st.integers(2, 6).flatmap(
    lambda n: st.tuples(
        st.lists(st.floats(0.05, 1.0), min_size=n, max_size=n),
        st.lists(st.floats(-2.0, 2.0), min_size=n, max_size=n),
    )
).map(lambda t: (Weights(np.asarray(t[0]) / np.sum(t[0])), np.asarray(t[1])))


# ---------------------------------------------------------------------------
# values


def test_two_point_am_gm_value():
    # AM = 1.25, GM = 1, so the rate is exactly log(5/4)
    assert egr(Weights([0.5, 0.5]), [2.0, 0.5]) == pytest.approx(math.log(1.25), abs=1e-15)


def test_fixed_instance_value():
    got = egr(Weights([0.5, 0.3, 0.2]), [1.05, 0.98, 1.01])
    assert got == pytest.approx(0.00045820312243472004, abs=1e-15)


def test_fixed_instance_log_form():
    got = egr_log(Weights([0.5, 0.3, 0.2]), [0.05, -0.02, 0.01])
    assert got == pytest.approx(0.00047298010425215205, abs=1e-15)


def test_constant_returns_earn_exactly_zero():
    assert egr(Weights([0.5, 0.5]), [3.0, 3.0]) == 0.0
    assert egr_log(barycenter(4), np.zeros(4)) == 0.0


def test_rate_is_clamped_nonnegative():
    rng = np.random.default_rng(3)
    for _ in range(200):
        n = int(rng.integers(2, 6))
        pi = closure(rng.uniform(0.1, 1.0, n))
        r = rng.normal(0.0, 1e-9, n)
        assert egr_log(pi, r) >= 0.0


def test_divergence_form_is_scale_invariant():
    pi = Weights([0.4, 0.35, 0.25])
    Y = np.array([1.3, 0.8, 1.1])
    X = np.array([0.9, 1.2, 1.0])
    base = egr_div(pi, Y, X)
    assert egr_div(pi, 7.0 * Y, X) == pytest.approx(base, abs=1e-14)
    assert egr_div(pi, Y, 0.3 * X) == pytest.approx(base, abs=1e-14)
    assert egr_div(pi, Y, Y) <= 1e-14


def test_log_form_handles_wide_exponents():
    pi = Weights([0.5, 0.5])
    val = egr_log(pi, np.array([650.0, -650.0]))
    # dominated by the larger entry: log(0.5 e^650) - 0 = 650 - log 2
    assert val == pytest.approx(650.0 - math.log(2.0), rel=1e-12)


# ---------------------------------------------------------------------------
# domains


def test_zero_return_on_support_rejected():
    with pytest.raises(DomainViolation):
        egr(Weights([0.5, 0.5]), [1.0, 0.0])


def test_junk_off_support_is_ignored():
    pi = Weights([0.5, 0.0, 0.5])
    base = egr(pi, [1.1, 1.0, 0.9])
    assert egr(pi, [1.1, 0.0, 0.9]) == base
    assert egr_log(pi, [0.1, -np.inf, -0.1]) == egr_log(pi, [0.1, 0.0, -0.1])


def test_nonfinite_on_support_rejected():
    with pytest.raises(DomainViolation):
        egr_log(Weights([0.5, 0.5]), [0.1, np.inf])
    with pytest.raises(DomainViolation):
        egr(Weights([0.5, 0.5]), [1.0, np.nan])
    with pytest.raises(DimensionMismatch):
        egr(Weights([0.5, 0.5]), [1.0, 1.0, 1.0])


# ---------------------------------------------------------------------------
# structural properties


@given(simplex_and_returns)
def test_am_gm_identity(case):
    pi, r = case
    R = np.exp(r)
    sup = pi.support_array
    am = float(pi.w[sup] @ R[sup])
    gm = float(np.exp(pi.w[sup] @ np.log(R[sup])))
    assert math.exp(egr(pi, R)) * gm == pytest.approx(am, rel=1e-12)


@given(simplex_and_returns, st.floats(-3.0, 3.0))
def test_numeraire_invariance(case, logc):
    pi, r = case
    R = np.exp(r)
    assert egr(pi, math.exp(logc) * R) == pytest.approx(egr(pi, R), abs=1e-12)


@given(simplex_and_returns)
def test_identity_against_relative_entropy(case):
    pi, r = case
    R = np.exp(r)
    tilted = closure(pi.w * R, pi)
    assert egr(pi, R) == pytest.approx(relative_entropy(pi, tilted), abs=1e-12)


def test_concavity_in_the_weights():
    rng = np.random.default_rng(8)
    for _ in range(300):
        n = int(rng.integers(2, 7))
        R = np.exp(rng.uniform(-1.5, 1.5, n))
        a = closure(rng.uniform(0.05, 1.0, n))
        b = closure(rng.uniform(0.05, 1.0, n))
        mid = Weights(0.5 * (a.w + b.w))
        assert egr(mid, R) >= 0.5 * (egr(a, R) + egr(b, R)) - 1e-12


# ---------------------------------------------------------------------------
# chain rules


def _random_composite(rng):
    n = int(rng.integers(2, 5))
    keep = rng.uniform(size=n) > 0.2
    keep[0] = True
    outer = closure(rng.uniform(0.1, 1.0, n) * keep)
    blocks = []
    returns = []
    for _ in range(n):
        k = int(rng.integers(1, 5))
        blocks.append(closure(rng.uniform(0.1, 1.0, k)))
        returns.append(np.exp(rng.uniform(-1.0, 1.0, k)))
    scale = np.exp(rng.uniform(-1.0, 1.0, n))
    return CompositeSpec(outer, tuple(blocks), scale), returns


def test_chain_rule_reconstructs_total():
    rng = np.random.default_rng(21)
    for _ in range(300):
        spec, returns = _random_composite(rng)
        total, outer_term, inner = chain_decompose(spec, returns)
        recon = outer_term + sum(spec.outer.w[i] * inner[i] for i in spec.outer.support)
        assert abs(total - recon) <= 1e-12


def test_chain_rule_unit_scale_special_case():
    spec = CompositeSpec(
        Weights([0.7, 0.3]),
        (Weights([0.5, 0.5]), Weights([0.2, 0.8])),
    )
    returns = [np.array([1.1, 0.9]), np.array([1.3, 0.8])]
    total, outer_term, inner = chain_decompose(spec, returns)
    assert total == pytest.approx(outer_term + 0.7 * inner[0] + 0.3 * inner[1], abs=1e-14)


def test_chain_rule_single_block_is_pure_inner():
    spec = CompositeSpec(Weights([1.0]), (Weights([0.4, 0.6]),))
    returns = [np.array([1.2, 0.9])]
    total, outer_term, inner = chain_decompose(spec, returns)
    assert outer_term == 0.0
    assert total == pytest.approx(inner[0], abs=1e-14)


def test_chain_rule_scalar_blocks_recover_numeraire_invariance():
    # one-asset blocks: the total collapses to the outer rate on scaled aggregates
    outer = Weights([0.6, 0.4])
    scale = np.array([2.0, 0.5])
    spec = CompositeSpec(outer, (Weights([1.0]), Weights([1.0])), scale)
    returns = [np.array([1.1]), np.array([0.9])]
    total, outer_term, inner = chain_decompose(spec, returns)
    assert inner.tolist() == [0.0, 0.0]
    assert total == pytest.approx(outer_term, abs=1e-14)
    assert total == pytest.approx(egr(outer, scale * np.array([1.1, 0.9])), abs=1e-14)


def test_chain_decompose_validates_shapes():
    spec = CompositeSpec(Weights([0.5, 0.5]), (Weights([1.0]), Weights([1.0])))
    with pytest.raises(DimensionMismatch):
        chain_decompose(spec, [np.array([1.0])])
    with pytest.raises(DimensionMismatch):
        chain_decompose(spec, [np.array([1.0, 2.0]), np.array([1.0])])


# ---------------------------------------------------------------------------
# second-order behaviour


def test_weighted_variance_matches_direct_formula():
    pi = Weights([0.5, 0.3, 0.2])
    r = np.array([0.05, -0.02, 0.01])
    mean = 0.5 * 0.05 - 0.3 * 0.02 + 0.2 * 0.01
    direct = sum(w * (x - mean) ** 2 for w, x in zip(pi.w, r))
    assert weighted_variance(pi, r) == pytest.approx(direct, rel=1e-14)


def test_small_return_limit_is_half_the_variance():
    pi = Weights([0.4, 0.35, 0.25])
    r = np.array([0.8, -0.3, -0.9])
    t = 1e-4
    limit = egr_log(pi, t * r) / (t * t)
    assert limit == pytest.approx(0.5 * weighted_variance(pi, r), rel=1e-3)


# ---------------------------------------------------------------------------
# free energy and Gibbs


def test_free_energy_fixed_instance():
    spec = EnergySpec(np.array([1.0, 2.0, 0.5]), 1.3, Weights([0.2, 0.5, 0.3]))
    assert free_energy(spec) == pytest.approx(1.0717625072715004, abs=1e-15)


def test_rate_equals_beta_times_energy_gap():
    spec = EnergySpec(np.array([1.0, 2.0, 0.5]), 1.3, Weights([0.2, 0.5, 0.3]))
    got = egr_log(spec.pi, -spec.beta * spec.E)
    assert got == pytest.approx(0.3617087405470495, abs=1e-15)
    U = float(spec.pi.w @ spec.E)
    assert got == pytest.approx(spec.beta * (U - free_energy(spec)), abs=1e-13)


def test_gibbs_attains_the_variational_minimum():
    rng = np.random.default_rng(11)
    spec = EnergySpec(np.array([0.3, -0.4, 1.1, 0.2]), 0.9, barycenter(4))
    star = gibbs(spec)

    def objective(p):
        return float(p.w @ spec.E) + relative_entropy(p, spec.pi) / spec.beta

    a_val = objective(star)
    assert a_val == pytest.approx(free_energy(spec), abs=1e-12)
    for _ in range(500):
        p = closure(rng.uniform(0.01, 1.0, 4))
        assert objective(p) >= a_val - 1e-12


def test_gibbs_keeps_the_reference_support():
    spec = EnergySpec(np.array([1.0, 9.9, 2.0]), 2.0, Weights([0.5, 0.0, 0.5]))
    assert gibbs(spec).support == (0, 2)


def test_energy_spec_validates():
    with pytest.raises(ValueError):
        EnergySpec(np.array([1.0, 2.0]), -1.0, Weights([0.5, 0.5]))
    with pytest.raises(DimensionMismatch):
        EnergySpec(np.array([1.0]), 1.0, Weights([0.5, 0.5]))
    with pytest.raises(DomainViolation):
        EnergySpec(np.array([1.0, np.inf]), 1.0, Weights([0.5, 0.5]))


# ---------------------------------------------------------------------------
# code lengths


def test_campbell_fixed_instance():
    spec = CodeSpec(np.array([1, 2, 3]), 2, 0.5, Weights([0.5, 0.25, 0.25]))
    assert campbell_length(spec) == pytest.approx(1.8735035908796481, abs=1e-14)
    assert shannon_length(spec) == 1.75


def test_campbell_decomposes_into_mean_plus_rate():
    spec = CodeSpec(np.array([2, 4, 3, 1]), 3, 0.8, Weights([0.3, 0.2, 0.1, 0.4]))
    lnD = math.log(3.0)
    gap = egr_log(spec.pi, spec.rho * spec.lengths * lnD) / (spec.rho * lnD)
    assert campbell_length(spec) == pytest.approx(shannon_length(spec) + gap, abs=1e-12)


def test_campbell_dominates_shannon():
    rng = np.random.default_rng(12)
    for _ in range(100):
        n = int(rng.integers(2, 6))
        spec = CodeSpec(
            rng.integers(1, 12, n),
            int(rng.integers(2, 5)),
            float(rng.uniform(0.05, 3.0)),
            closure(rng.uniform(0.1, 1.0, n)),
        )
        assert campbell_length(spec) >= shannon_length(spec) - 1e-12


def test_code_spec_validates():
    pi = Weights([0.5, 0.5])
    with pytest.raises(ValueError):
        CodeSpec(np.array([1.5, 2.0]), 2, 1.0, pi)
    with pytest.raises(ValueError):
        CodeSpec(np.array([0, 2]), 2, 1.0, pi)
    with pytest.raises(ValueError):
        CodeSpec(np.array([1, 2]), 1, 1.0, pi)
    with pytest.raises(ValueError):
        CodeSpec(np.array([1, 2]), 2, 0.0, pi)
    with pytest.raises(ValueError):
        CodeSpec(np.array([1, 2]), 2, 1.0, Weights([1.0, 0.0]))

import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from mumkit.entangle import (
    BipartiteState,
    conjugate_mum,
    correlation_measure,
    detect,
    isotropic_j_closed_form,
    isotropic_state,
    joint_distribution,
    joint_probability,
    maximally_entangled,
    product_bound,
    product_bound_from_joint_purity,
    separability_bound,
)
from mumkit.linalg import LinalgError, kron
from mumkit.mum import admissible_t_interval, build_mum_set
from mumkit.states import StateSpec, generate, purity, random_separable, rng_for

from conftest import random_mixed, random_pure
from oracles import expectation_loops, isotropic_j_direct, kron_loops


def pair(d, M=None, t=None):
    a = build_mum_set(d, t, M)
    return a, conjugate_mum(a)


# --- states --------------------------------------------------------------

def test_maximally_entangled_d2():
    expected = np.zeros((4, 4))
    expected[np.ix_([0, 3], [0, 3])] = 0.5
    np.testing.assert_allclose(maximally_entangled(2).matrix, expected, atol=1e-15)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_maximally_entangled_marginals(d):
    phi = maximally_entangled(d)
    for side in "AB":
        np.testing.assert_allclose(phi.reduced(side), np.eye(d) / d, atol=1e-15)
    assert phi.purity == pytest.approx(1.0, abs=1e-14)


@pytest.mark.parametrize("d", [2, 3])
def test_phi_expectation_of_p_tensor_conjugate(d):
    phi = maximally_entangled(d).matrix
    for povm in build_mum_set(d).povms:
        for e in povm.elements:
            P = e.matrix
            val = expectation_loops(kron_loops(P, P.conj()), phi)
            assert val == pytest.approx(np.trace(P @ P).real / d, abs=1e-14)


def test_bipartite_state_validation():
    with pytest.raises(LinalgError):
        BipartiteState(np.eye(6) / 6)
    with pytest.raises(ValueError):
        BipartiteState(np.eye(4) / 2)
    with pytest.raises(ValueError):
        BipartiteState(np.diag([1.2, -0.2, 0, 0]))
    with pytest.raises(ValueError):
        isotropic_state(2, 1.5)


# --- joint statistics -----------------------------------------------------

def test_conjugate_is_involution():
    a, b = pair(3)
    np.testing.assert_array_equal(conjugate_mum(b).stack(), a.stack())
    assert b.kappa == a.kappa


@pytest.mark.parametrize("d", [2, 3])
def test_joint_distribution_of_product_factorises(rng, d):
    a, b = pair(d)
    ra, rb = random_mixed(rng, d), random_pure(rng, d)
    state = BipartiteState(kron(ra, rb), d)
    for blk in range(a.M):
        pa = np.einsum("mij,ji->m", a.povms[blk].stack(), ra).real
        pb = np.einsum("mij,ji->m", b.povms[blk].stack(), rb).real
        np.testing.assert_allclose(joint_distribution(a, b, state, blk), np.outer(pa, pb), atol=1e-14)


def test_joint_distribution_of_completely_mixed_is_uniform():
    d = 3
    a, b = pair(d)
    state = BipartiteState(np.eye(d * d) / d**2, d)
    for blk in range(a.M):
        np.testing.assert_allclose(joint_distribution(a, b, state, blk), 1 / d**2, atol=1e-15)
    assert correlation_measure(a, b, state) == pytest.approx((d + 1) / d, abs=1e-14)


@given(st.integers(0, 2**32 - 1), st.integers(2, 4))
def test_joint_distribution_sums_to_one(seed, d):
    a, b = pair(d)
    state = BipartiteState(random_mixed(np.random.default_rng(seed), d * d), d)
    for blk in range(a.M):
        p = joint_distribution(a, b, state, blk)
        assert p.min() >= 0 and abs(p.sum() - 1) < 1e-10


def test_joint_probability_indices():
    a, b = pair(2)
    state = maximally_entangled(2)
    assert joint_probability(a, b, state, 2, 0, 0) == pytest.approx(0.5, abs=1e-15)
    with pytest.raises(IndexError):
        joint_probability(a, b, state, 0, 2, 0)
    with pytest.raises(IndexError):
        joint_distribution(a, b, state, 3)


def test_mismatched_pairs():
    a = build_mum_set(3)
    with pytest.raises(LinalgError):
        correlation_measure(a, build_mum_set(2), maximally_entangled(3))
    with pytest.raises(ValueError):
        correlation_measure(a, build_mum_set(3, M=2), maximally_entangled(3))


# --- bounds -----------------------------------------------------------------

def test_product_bound_special_values():
    d, M = 3, 4
    assert product_bound(M, d, 0.5, 0.5, 1 / d, 1 / d) == pytest.approx(M / d, abs=1e-14)
    assert product_bound(M, d, 1.0, 1.0, 1.0, 1.0) == pytest.approx(2.0, abs=1e-14)
    assert product_bound(M, d, 0.5, 0.5, 1.0, 1.0) == pytest.approx(1.5, abs=1e-14)


@pytest.mark.parametrize("d", [2, 3, 4])
def test_joint_purity_bound_consistency(d):
    M, kappa = d, 0.5 * (1 + 1 / d)
    assert product_bound_from_joint_purity(M, d, kappa, 1.0) == pytest.approx(
        product_bound(M, d, kappa, kappa, 1.0, 1.0), abs=1e-14)
    # envelope over all local splits with purity_A * purity_B fixed
    for P in np.linspace(1 / d**2, 1, 7):
        env = product_bound_from_joint_purity(M, d, kappa, P)
        for pa in np.linspace(max(1 / d, P), min(1.0, P * d), 9):
            pb = P / pa
            assert env >= product_bound(M, d, kappa, kappa, pa, pb) - 1e-12
    assert product_bound_from_joint_purity(M, d, kappa, 1 / d**2) >= M / d
    vals = [product_bound_from_joint_purity(M, d, kappa, p) for p in np.linspace(1 / d**2, 1, 30)]
    assert np.all(np.diff(vals) > 0)


@given(st.integers(0, 2**32 - 1), st.integers(2, 4), st.data())
def test_product_states_respect_product_bounds(seed, d, data):
    rng = np.random.default_rng(seed)
    M = data.draw(st.integers(1, d + 1))
    a, b = pair(d, M)
    ra, rb = random_mixed(rng, d), random_mixed(rng, d)
    state = BipartiteState(kron(ra, rb), d)
    J = correlation_measure(a, b, state)
    assert J <= product_bound(M, d, a.kappa, b.kappa, purity(ra), purity(rb)) + 1e-9
    assert J <= product_bound_from_joint_purity(M, d, a.kappa, state.purity) + 1e-9


def test_separability_bound_values():
    assert separability_bound(4, 3, 0.5) == pytest.approx(1.5, abs=1e-15)
    assert separability_bound(3, 2, 1.0) == pytest.approx(2.0, abs=1e-15)
    for d in (2, 3, 5):
        for M in range(1, d + 2):
            for k in (1 / d, 0.6, 1.0):
                assert separability_bound(M, d, k) >= M / d - 1e-15
            assert separability_bound(M, d, 1 / d) == pytest.approx(M / d, abs=1e-14)


# --- isotropic family -------------------------------------------------------

def test_isotropic_closed_form_values():
    assert isotropic_j_closed_form(3, 2, 1.0, 0.0) == 1.5
    assert isotropic_j_closed_form(4, 3, 0.5, 1.0) == 2.0
    M, d, k = 3, 2, 1.0
    assert isotropic_j_closed_form(M, d, k, 1 / M) == pytest.approx(separability_bound(M, d, k), abs=1e-15)
    assert isotropic_j_closed_form(3, 2, 1.0, 0.5) == pytest.approx(2.25, abs=1e-15)


@pytest.mark.parametrize("d", [2, 3, 4])
@pytest.mark.parametrize("gamma", [0.0, 0.3, 0.75, 1.0])
def test_isotropic_measured_matches_closed_form_and_oracle(d, gamma):
    for M in (1, d + 1):
        a, b = pair(d, M)
        state = isotropic_state(d, gamma)
        J = correlation_measure(a, b, state)
        assert J == pytest.approx(isotropic_j_closed_form(M, d, a.kappa, gamma), abs=1e-12)
        blocks = [[e.matrix for e in p.elements] for p in a.povms]
        assert J == pytest.approx(isotropic_j_direct(blocks, d, gamma), abs=1e-12)


def test_isotropic_threshold_is_one_over_M():
    # J(gamma) - B_sep is linear with its root at 1/M for every kappa
    for d in (2, 3, 4):
        a, _ = pair(d)
        M = a.M
        for g in (0.0, 0.5 / M, 1 / M, 1.5 / M, 1.0):
            gap = isotropic_j_closed_form(M, d, a.kappa, g) - separability_bound(M, d, a.kappa)
            assert math.copysign(1, gap) == math.copysign(1, g - 1 / M) or abs(gap) < 1e-14


# --- detection ---------------------------------------------------------------

def test_detect_flags_entangled_isotropic_d2():
    a, b = pair(2)
    v = detect(a, b, isotropic_state(2, 0.5))
    assert v.J_value == pytest.approx(2.25, abs=1e-12)
    assert v.bound_separable == pytest.approx(2.0, abs=1e-12)
    assert v.entangled and v.flags["not_product"] and v.note == ""
    assert v.to_dict()["record"] == "verdict"


def test_detect_below_threshold_not_flagged():
    a, b = pair(3)
    v = detect(a, b, isotropic_state(3, 0.2))
    assert not v.entangled


def test_detect_trivial_kappa_note():
    a, b = pair(3, t=0.0)
    v = detect(a, b, maximally_entangled(3))
    assert not any(v.flags.values())
    assert "trivial" in v.note
    assert v.J_value == pytest.approx(4 / 3, abs=1e-14)


def test_detect_without_reduced_purities():
    a, b = pair(2)
    v = detect(a, b, isotropic_state(2, 0.9), reduced_purities_known=False)
    assert v.bound_product is None and not v.flags["not_product"]
    assert v.flags["not_product_by_purity"]


@pytest.mark.parametrize("d", [2, 3])
def test_separable_mixtures_never_flagged(d):
    lo, hi = admissible_t_interval(d)
    for t in (hi, 0.5 * hi, lo):
        a, b = pair(d, t=t)
        for i in range(40):
            state = BipartiteState(random_separable(d, rng_for(5, i)), d)
            assert not detect(a, b, state).entangled


def test_generated_isotropic_spec():
    st_ = generate(StateSpec("isotropic", 2, params={"gamma": 0.5}))
    np.testing.assert_allclose(st_.matrix, isotropic_state(2, 0.5).matrix, atol=0)

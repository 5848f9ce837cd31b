"""Correlation-matrix layer: canonical form, composition, fidelity branches.

Reference values come from the 4^ell dense oracle in fgdist.dense and, for
commuting inputs, from the exact per-mode product formula.
"""

import numpy as np
import pytest

from conftest import (
    commuting_pair,
    factorized_fidelity,
    planted_state,
    rand_rotation,
    rand_special_rotation,
    random_mixed_state,
)
from fgdist.correlation import (
    CorrelationMatrix,
    bures_distance,
    canonical_form,
    classify_modes,
    fidelity,
    fidelity_pure,
    fidelity_regular,
    fidelity_single_mode,
    gaussian_compose,
    gaussian_product_trace,
    reduce_unit_modes,
    _half_state,
)
from fgdist.dense import (
    density_from_gamma,
    fidelity_dense,
    gamma_from_density,
    trace_distance,
)


def dense_fidelity_of(state_1, state_2):
    return fidelity_dense(density_from_gamma(state_1), density_from_gamma(state_2))


# ---------------------------------------------------------------- construction


def test_constructor_rejects_bad_input():
    with pytest.raises(ValueError):
        CorrelationMatrix(np.zeros((3, 4)))
    with pytest.raises(ValueError):
        CorrelationMatrix(np.zeros((3, 3)))
    bad = np.array([[0.0, 0.3], [0.3, 0.0]])  # symmetric, not antisymmetric
    with pytest.raises(ValueError):
        CorrelationMatrix(bad)


def test_pair_value_slack():
    # within slack of 1: snapped; beyond: rejected lazily on first access
    ok = planted_state([1.0 + 1e-10])
    assert ok.pair_values[0] == 1.0
    bad = planted_state([1.0 + 1e-8])
    with pytest.raises(ValueError):
        bad.pair_values


def test_restrict_bounds():
    state = planted_state([0.5, 0.2])
    assert state.restrict(1).ell == 1
    with pytest.raises(ValueError):
        state.restrict(3)
    with pytest.raises(ValueError):
        state.restrict(0)


# ------------------------------------------------------------- canonical form


def test_canonical_form_roundtrip():
    rng = np.random.default_rng(11)
    for _ in range(25):
        ell = int(rng.integers(1, 6))
        state = random_mixed_state(ell, rng, gmax=1.0)
        form = canonical_form(state)
        o = form.rotation
        assert np.abs(o @ o.T - np.eye(2 * ell)).max() < 1e-12
        assert np.abs(o @ state.m @ o.T - form.blocks()).max() < 1e-10
        g = form.pair_values
        assert np.all(np.diff(g) <= 1e-15)  # descending
        assert g.min() >= 0.0 and g.max() <= 1.0


def test_canonical_form_zero_pairs():
    # exact zeros exercise the 1x1 Schur block pairing path
    rng = np.random.default_rng(12)
    state = planted_state([0.7, 0.0, 0.0], rng=rng)
    form = canonical_form(state)
    assert np.allclose(np.sort(form.pair_values), [0.0, 0.0, 0.7], atol=1e-12)


def test_pair_values_match_canonical_form():
    rng = np.random.default_rng(13)
    state = random_mixed_state(4, rng)
    assert np.abs(state.pair_values - canonical_form(state).pair_values).max() < 1e-12


# -------------------------------------------------------------- product trace


def test_product_trace_identities():
    # purity of the maximally mixed single mode is 1/2
    mixed = planted_state([0.0])
    assert abs(gaussian_product_trace(mixed, mixed) - 0.5) < 1e-15
    up = planted_state([1.0])
    down = planted_state([-1.0])
    assert abs(gaussian_product_trace(up, up) - 1.0) < 1e-15
    assert gaussian_product_trace(up, down) == 0.0


def test_product_trace_matches_dense():
    rng = np.random.default_rng(21)
    for _ in range(20):
        ell = int(rng.integers(1, 4))
        s1 = random_mixed_state(ell, rng, gmax=1.0)
        s2 = random_mixed_state(ell, rng, gmax=1.0)
        want = np.trace(density_from_gamma(s1) @ density_from_gamma(s2)).real
        assert abs(gaussian_product_trace(s1, s2) - want) < 1e-12


def test_product_trace_shape_mismatch():
    with pytest.raises(ValueError):
        gaussian_product_trace(planted_state([0.1]), planted_state([0.1, 0.2]))


# ---------------------------------------------------------------- composition


def test_compose_matches_dense_product():
    rng = np.random.default_rng(31)
    for _ in range(15):
        ell = int(rng.integers(1, 4))
        s1 = random_mixed_state(ell, rng)
        s2 = random_mixed_state(ell, rng)
        prod = density_from_gamma(s1) @ density_from_gamma(s2)
        prod /= np.trace(prod)
        want = gamma_from_density(prod)  # complex antisymmetric for products
        if isinstance(want, CorrelationMatrix):  # commuting factors: Hermitian
            want = 1j * want.m
        got = gaussian_compose(s1, s2).gamma
        assert np.abs(got - want).max() < 1e-10


def test_compose_accepts_products():
    # second application runs the complex path; compare against rho1 rho2 rho3
    rng = np.random.default_rng(32)
    s1, s2, s3 = (random_mixed_state(2, rng) for _ in range(3))
    triple = density_from_gamma(s1) @ density_from_gamma(s2) @ density_from_gamma(s3)
    triple /= np.trace(triple)
    got = gaussian_compose(gaussian_compose(s1, s2), s3).gamma
    assert np.abs(got - gamma_from_density(triple)).max() < 1e-10


def test_compose_chain_trace():
    # symmetric chain: tr(rho1 rho2 rho1) is real; generic triples are not
    rng = np.random.default_rng(33)
    for _ in range(10):
        s1, s2 = (random_mixed_state(3, rng) for _ in range(2))
        r1, r2 = (density_from_gamma(s) for s in (s1, s2))
        want = np.trace(r1 @ r2 @ r1).real
        pair = gaussian_product_trace(s1, s2)
        got = pair * gaussian_product_trace(gaussian_compose(s1, s2), s1)
        assert abs(got - want) < 1e-12


def test_compose_idempotent_state():
    # rho^2 / tr rho^2 of a canonical state keeps the basis, maps g -> 2g/(1+g^2)
    rng = np.random.default_rng(34)
    g = rng.uniform(0.1, 0.9, size=3)
    state = planted_state(g, rng=rng)
    sq = gaussian_compose(state, state).gamma
    assert np.abs(sq.real).max() < 1e-12  # Hermitian product: gamma = i m
    vals = np.sort(np.linalg.svd(sq.imag, compute_uv=False)[0::2])
    assert np.abs(vals - np.sort(2 * g / (1 + g * g))).max() < 1e-12


def test_compose_singular_product_raises():
    up = planted_state([1.0])
    down = planted_state([-1.0])
    with pytest.raises(ValueError):
        gaussian_compose(up, down)


# ------------------------------------------------------------------ half state


def test_half_state_pair_values():
    rng = np.random.default_rng(41)
    g = rng.uniform(0.0, 0.999, size=4)
    state = planted_state(g, rng=rng)
    half = _half_state(state)
    want = np.sort(g / (1 + np.sqrt(1 - g * g)))
    assert np.abs(np.sort(half.pair_values) - want).max() < 1e-12


def test_half_state_squares_back():
    rng = np.random.default_rng(42)
    state = random_mixed_state(3, rng)
    half = _half_state(state)
    back = gaussian_compose(half, half).gamma
    assert np.abs(back - 1j * state.m).max() < 1e-11


# ----------------------------------------------------------------- single mode


def test_single_mode_closed_form():
    assert abs(fidelity_single_mode(0.3, 0.7) - 0.9724322221137173) < 1e-15
    assert fidelity_single_mode(0.4, 0.4) == 1.0
    assert fidelity_single_mode(1.0, -1.0) == 0.0
    with pytest.raises(ValueError):
        fidelity_single_mode(1.1, 0.0)


def test_single_mode_matches_dense():
    rng = np.random.default_rng(51)
    for _ in range(30):
        g1, g2 = rng.uniform(-1.0, 1.0, size=2)
        s1 = planted_state([g1])
        s2 = planted_state([g2])
        assert abs(fidelity(s1, s2) - dense_fidelity_of(s1, s2)) < 1e-12


def test_single_mode_sign_sensitivity():
    # dispatch at ell=1 must use the signed off-diagonal entry, not |g|
    s1 = planted_state([0.6])
    s2 = planted_state([-0.6])
    assert abs(fidelity(s1, s2) - 0.8) < 1e-14  # (sqrt(1.6*0.4)+sqrt(0.4*1.6))/2


# -------------------------------------------------------------- regular branch


def test_regular_branch_matches_dense():
    rng = np.random.default_rng(61)
    worst = 0.0
    for _ in range(60):
        ell = int(rng.integers(2, 5))
        s1 = random_mixed_state(ell, rng)
        s2 = random_mixed_state(ell, rng)
        err = abs(fidelity(s1, s2) - dense_fidelity_of(s1, s2))
        worst = max(worst, err)
    assert worst < 1e-11


def test_regular_branch_identity_and_symmetry():
    rng = np.random.default_rng(62)
    for _ in range(10):
        s1 = random_mixed_state(3, rng)
        s2 = random_mixed_state(3, rng)
        assert abs(fidelity(s1, s1) - 1.0) < 1e-12
        assert abs(fidelity(s1, s2) - fidelity(s2, s1)) < 1e-12


def test_regular_guard_rejects_unit_pairs():
    rng = np.random.default_rng(63)
    pure_ish = planted_state([1.0, 0.4], rng=rng)
    mixed = random_mixed_state(2, rng)
    with pytest.raises(ValueError):
        fidelity_regular(pure_ish, mixed)


def test_gray_ladder_against_dense():
    # near-unit pair values, still below the dispatch threshold
    rng = np.random.default_rng(64)
    for eps in (1e-4, 1e-5):
        for _ in range(10):
            g1 = np.array([1 - eps * rng.uniform(1, 3), rng.uniform(0.2, 0.8), rng.uniform(0.0, 0.5)])
            g2 = np.array([1 - eps * rng.uniform(1, 3), rng.uniform(0.2, 0.8), rng.uniform(0.0, 0.5)])
            s1 = planted_state(g1, rng=rng)
            s2 = planted_state(g2, rng=rng)
            assert abs(fidelity(s1, s2) - dense_fidelity_of(s1, s2)) < 2e-10


def test_gray_commuting_exact():
    # deeper than the dense oracle certifies; the per-mode product is exact
    rng = np.random.default_rng(65)
    for eps, tol in ((1e-6, 5e-9), (1e-7, 5e-9), (1e-8, 3e-8)):
        for _ in range(8):
            g1 = np.array([1 - eps, rng.uniform(0.2, 0.8), rng.uniform(0.0, 0.5)])
            g2 = np.array([1 - eps * rng.uniform(0.5, 2.0), rng.uniform(0.2, 0.8), 0.0])
            s1, s2 = commuting_pair(g1, g2, rng)
            assert abs(fidelity(s1, s2) - factorized_fidelity(g1, g2)) < tol


# ---------------------------------------------------------------- pure branch


def test_pure_branch_same_parity_matches_dense():
    rng = np.random.default_rng(71)
    for _ in range(15):
        ell = int(rng.integers(2, 4))
        s1 = planted_state(np.ones(ell), rotation=rand_special_rotation(2 * ell, rng))
        s2 = planted_state(np.ones(ell), rotation=rand_special_rotation(2 * ell, rng))
        f = fidelity(s1, s2)
        assert abs(f - dense_fidelity_of(s1, s2)) < 1e-9
        assert f > 0.0


def test_pure_branch_cross_parity_orthogonal():
    # opposite-determinant rotations flip fermion parity; the overlap trace
    # is exact zero, so the returned value is the quartic root of determinant
    # roundoff (~1e-8 worst case), not a clean machine zero
    rng = np.random.default_rng(72)
    for _ in range(10):
        even = rand_special_rotation(6, rng)
        odd = rand_special_rotation(6, rng)
        odd[:, 0] = -odd[:, 0]
        s1 = planted_state(np.ones(3), rotation=even)
        s2 = planted_state(np.ones(3), rotation=odd)
        assert fidelity(s1, s2) < 2e-6
        assert dense_fidelity_of(s1, s2) < 1e-12


def test_pure_branch_identity():
    rng = np.random.default_rng(73)
    s = planted_state(np.ones(3), rotation=rand_rotation(6, rng))
    assert abs(fidelity(s, s) - 1.0) < 1e-12


def test_pure_vs_mixed_uses_sqrt_overlap():
    rng = np.random.default_rng(74)
    for _ in range(10):
        pure = planted_state(np.ones(2), rotation=rand_rotation(4, rng))
        mixed = random_mixed_state(2, rng)
        got = fidelity(pure, mixed)
        want = np.sqrt(gaussian_product_trace(pure, mixed))
        assert abs(got - want) < 1e-13
        assert abs(got - dense_fidelity_of(pure, mixed)) < 1e-10


def test_fidelity_pure_guard():
    rng = np.random.default_rng(75)
    with pytest.raises(ValueError):
        fidelity_pure(random_mixed_state(2, rng), random_mixed_state(2, rng))


# ----------------------------------------------------------- reduction branch


def test_reduction_branch_matches_dense():
    rng = np.random.default_rng(81)
    for _ in range(20):
        ell = int(rng.integers(3, 5))
        g1 = rng.uniform(0.0, 0.9, size=ell)
        g1[: rng.integers(1, ell)] = 1.0  # exact unit pairs, bulk strictly mixed
        s1 = planted_state(g1, rng=rng)
        s2 = random_mixed_state(ell, rng)
        assert abs(fidelity(s1, s2) - dense_fidelity_of(s1, s2)) < 1e-10


def test_reduction_near_unit_bulk():
    # unit pairs on one side plus a gray pair on the other
    rng = np.random.default_rng(82)
    for _ in range(10):
        s1 = planted_state([1.0, rng.uniform(0.3, 0.7), 0.2], rng=rng)
        s2 = planted_state([1 - 1e-5, rng.uniform(0.3, 0.7), 0.4], rng=rng)
        assert abs(fidelity(s1, s2) - dense_fidelity_of(s1, s2)) < 2e-10


def test_reduction_swaps_to_more_unit_pairs():
    # dispatch must reduce on the state with more unit pairs regardless of order
    rng = np.random.default_rng(83)
    s1 = planted_state([1.0, 1.0, 0.5], rng=rng)
    s2 = planted_state([1.0, 0.6, 0.3], rng=rng)
    want = dense_fidelity_of(s1, s2)
    assert abs(fidelity(s1, s2) - want) < 1e-10
    assert abs(fidelity(s2, s1) - want) < 1e-10


def test_reduction_prefactor_block_case():
    # commuting case: unit mode against s1 contributes sqrt((1+s1)/2)
    g_r = np.array([1.0, 0.5, 0.2])
    g_s = np.array([0.8, 0.6, 0.1])
    s1 = planted_state(g_r)
    s2 = planted_state(g_s)
    partition = classify_modes(s1, s2)
    prefactor, bulk_r, bulk_s = reduce_unit_modes(partition)
    assert abs(prefactor - np.sqrt((1 + 0.8) / 2)) < 1e-13
    assert np.abs(np.sort(bulk_r.pair_values) - [0.2, 0.5]).max() < 1e-12
    assert np.abs(np.sort(bulk_s.pair_values) - [0.1, 0.6]).max() < 1e-12
    assert abs(fidelity(s1, s2) - factorized_fidelity(g_r, g_s)) < 1e-13


def test_reduction_orthogonal_units_give_zero():
    # occupied against empty on the same mode kills the overlap outright
    s1 = planted_state([1.0, 0.5])
    s2 = planted_state([-1.0, 0.5])
    assert fidelity(s1, s2) == 0.0
    prefactor, bulk_r, bulk_s = reduce_unit_modes(classify_modes(s1, s2))
    assert prefactor == 0.0 and bulk_r is None and bulk_s is None


def test_reduce_unit_modes_guards():
    rng = np.random.default_rng(84)
    mixed = random_mixed_state(2, rng)
    with pytest.raises(ValueError):
        reduce_unit_modes(classify_modes(mixed, mixed))


# -------------------------------------------------------------------- dispatch


def test_dispatch_symmetry_across_branches():
    rng = np.random.default_rng(91)
    pure = planted_state(np.ones(3), rotation=rand_special_rotation(6, rng))
    partial = planted_state([1.0, 0.6, 0.2], rng=rng)
    mixed = random_mixed_state(3, rng)
    states = [pure, partial, mixed]
    for a in states:
        for b in states:
            assert abs(fidelity(a, b) - fidelity(b, a)) < 1e-12


def test_dispatch_knife_edge_no_crash():
    # pair value within a few ulp of the unit threshold: the svd count and
    # the Schur partition may disagree; result must still be near the oracle
    rng = np.random.default_rng(92)
    for bump in (0.0, 1e-26, -1e-26, 2e-16):
        g = 1.0 - 1e-10 + bump
        s1 = planted_state([g, 0.5], rng=rng)
        s2 = random_mixed_state(2, rng)
        f = fidelity(s1, s2)
        assert abs(f - dense_fidelity_of(s1, s2)) < 1e-7


def test_fidelity_shape_mismatch():
    with pytest.raises(ValueError):
        fidelity(planted_state([0.1]), planted_state([0.1, 0.2]))


# ------------------------------------------------------------------- distances


def test_bures_distance_basics():
    rng = np.random.default_rng(101)
    s1 = random_mixed_state(3, rng)
    s2 = random_mixed_state(3, rng)
    # sqrt(2(1-F)) turns a 1e-15 fidelity error into ~1e-7 at coincidence
    assert bures_distance(s1, s1) < 1e-6
    f = fidelity(s1, s2)
    assert abs(bures_distance(s1, s2) - np.sqrt(2 * (1 - f))) < 1e-14
    up = planted_state([1.0])
    down = planted_state([-1.0])
    assert abs(bures_distance(up, down) - np.sqrt(2.0)) < 1e-15


def test_fuchs_van_de_graaf_bounds():
    rng = np.random.default_rng(102)
    for _ in range(20):
        ell = int(rng.integers(2, 4))
        s1 = random_mixed_state(ell, rng, gmax=1.0)
        s2 = random_mixed_state(ell, rng, gmax=1.0)
        f = fidelity(s1, s2)
        d = trace_distance(density_from_gamma(s1), density_from_gamma(s2))
        assert 1 - f <= d + 1e-9
        assert d <= np.sqrt(1 - f * f) + 1e-9

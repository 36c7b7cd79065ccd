import warnings

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from abclab.errors import EmptyGrid, NotNormalized
from abclab.quantum_shield import (
    ShieldingWarning,
    ShieldState,
    check_shielding,
    config1_phase,
    config3_phase_factor,
    phase_factor_u1,
    phase_m,
    pi_m,
    random_shielding_state,
    visibility_scan,
)

HALF = ShieldState.from_probabilities({0: 0.5, 1: 0.5})


def test_state_normalization():
    HALF.check_normalized()
    with pytest.raises(NotNormalized):
        ShieldState({0: 0.5, 1: 0.5}).check_normalized()
    with pytest.raises(ValueError):
        ShieldState({})
    with pytest.raises(ValueError):
        ShieldState({0.5: 1.0})


def test_negative_labels_allowed():
    s = ShieldState.from_probabilities({-2: 0.25, -1: 0.75})
    assert list(s.labels) == [-2, -1]
    assert s.mean_pairs() == pytest.approx(-1.25)


# --- shielding check -------------------------------------------------------


def test_shielding_examples():
    rep = check_shielding(HALF, -1.0)
    assert rep.mean_pairs == pytest.approx(0.5) and rep.satisfies_ideal_shielding
    assert rep.mean_excess_charge == pytest.approx(1.0)
    assert check_shielding(ShieldState({1: 1.0}), -2.0).satisfies_ideal_shielding
    assert not check_shielding(ShieldState({0: 1.0}), -1.0).satisfies_ideal_shielding


def test_shielding_needs_normalized_state():
    with pytest.raises(NotNormalized):
        check_shielding(ShieldState({0: 2.0}), 0.0)


# --- per-state momentum and phase -----------------------------------------


def test_pi_m_examples():
    np.testing.assert_array_equal(pi_m(-2.0, 1, 1.0, 0.7), 0.0)
    assert np.hypot(*pi_m(1.0, 0, 2.0, 1.0)) == pytest.approx(0.5)
    # direction is -phi_hat
    np.testing.assert_allclose(pi_m(1.0, 0, 2.0, 1.0, phi=0.0), [0.0, -0.5])
    step = np.hypot(*pi_m(1.0, 3, 2.0, 0.4)) - np.hypot(*pi_m(1.0, 2, 2.0, 0.4))
    assert step == pytest.approx(2 * 0.4 / 2.0)
    with pytest.raises(ValueError):
        pi_m(1.0, 0, 0.0, 1.0)


def test_phase_m_examples():
    assert phase_m(1.0, 0, 1.0) == pytest.approx(2 * np.pi)
    assert phase_m(-1.0, 1, 0.5) == pytest.approx(np.pi)
    assert all(phase_m(1.3, m, 0.0) == 0.0 for m in range(-3, 4))


def test_phase_m_is_loop_integral_of_pi_m():
    # the fluxon's phase on a CCW circle is -loop(Pi_m . dR)
    q, m, R, flux = 0.7, -2, 1.5, 0.3
    n = 400
    phi = 2 * np.pi * (np.arange(n) + 0.5) / n
    tangent = np.column_stack([-np.sin(phi), np.cos(phi)]) * R * 2 * np.pi / n
    pis = np.array([pi_m(q, m, R, flux, p) for p in phi])
    assert -np.sum(pis * tangent) == pytest.approx(phase_m(q, m, flux), rel=1e-12)


# --- phase factor ----------------------------------------------------------


def test_u1_examples():
    assert abs(phase_factor_u1(HALF, -1.0, 0.25)) < 1e-15
    assert phase_factor_u1(HALF, -1.0, 0.5) == pytest.approx(-1.0, abs=1e-15)
    single = ShieldState({3: 1.0})
    for flux in np.linspace(-1, 1, 11):
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", ShieldingWarning)
            assert abs(phase_factor_u1(single, 0.4, flux)) == pytest.approx(1.0, abs=1e-14)


def test_u1_warns_when_not_shielding():
    with pytest.warns(ShieldingWarning):
        phase_factor_u1(ShieldState({0: 1.0}), -1.0, 0.3)
    with warnings.catch_warnings():
        warnings.simplefilter("error", ShieldingWarning)
        phase_factor_u1(HALF, -1.0, 0.3)


def test_config2_even_charge_single_state_kills_phase():
    state = ShieldState({-2: 1.0})
    for flux in (0.1, 0.37, 2.0):
        assert phase_factor_u1(state, 4.0, flux) == pytest.approx(1.0, abs=1e-14)


def states(q):
    return st.integers(0, 2**32 - 1).map(lambda s: random_shielding_state(np.random.default_rng(s), q))


@settings(max_examples=60, deadline=None)
@given(data=st.data(), q=st.floats(-4, 4), flux=st.floats(-3, 3))
def test_u1_bounded_and_periodic(data, q, flux):
    state = data.draw(states(q))
    assert check_shielding(state, q).satisfies_ideal_shielding
    u = phase_factor_u1(state, q, flux)
    assert abs(u) <= 1 + 1e-12
    u_shift = phase_factor_u1(state, q, flux + 0.5)
    reduced = u * np.exp(-2j * np.pi * q * flux)
    reduced_shift = u_shift * np.exp(-2j * np.pi * q * (flux + 0.5))
    assert abs(reduced - reduced_shift) < 1e-9


@settings(max_examples=40, deadline=None)
@given(data=st.data(), q=st.floats(-4, 4), flux=st.floats(-2, 2), angle=st.floats(0, 2 * np.pi))
def test_global_phase_invariance(data, q, flux, angle):
    state = data.draw(states(q))
    rot = state.rotated(angle)
    a, b = check_shielding(rot, q), check_shielding(state, q)
    assert a.satisfies_ideal_shielding == b.satisfies_ideal_shielding
    assert a.mean_pairs == pytest.approx(b.mean_pairs, abs=1e-14)
    assert abs(phase_factor_u1(rot, q, flux) - phase_factor_u1(state, q, flux)) < 1e-14


def test_config3_random_states():
    rng = np.random.default_rng(7)
    worst = 0.0
    for _ in range(100):
        q = rng.uniform(-4, 4)
        state = random_shielding_state(rng, q)
        for n in (1, 2, 3):
            worst = max(worst, abs(config3_phase_factor(state, q, n) - np.exp(1j * np.pi * q * n)))
    assert worst < 1e-12


def test_config3_examples():
    assert config3_phase_factor(HALF, -1.0, 0) == pytest.approx(1.0)
    state = random_shielding_state(np.random.default_rng(1), 1.0)
    assert config3_phase_factor(state, 1.0, 1) == pytest.approx(-1.0, abs=1e-12)


# --- Config I --------------------------------------------------------------


@pytest.mark.parametrize("m", [0, 7])
def test_config1_phase_vanishes(m):
    assert abs(config1_phase(1.0, 0.5, m, n_time=32)) < 1e-8


def test_config1_phase_zero_flux():
    assert config1_phase(1.0, 0.0, 2, n_time=16) == 0.0


# --- scan ------------------------------------------------------------------


def test_visibility_scan_examples():
    rows = visibility_scan(HALF, -1.0, [0.0, 0.25, 0.5])
    np.testing.assert_allclose([r[3] for r in rows], [1.0, 0.0, 1.0], atol=1e-15)
    single = visibility_scan(ShieldState({0: 1.0}), -1.0, np.linspace(0, 1, 9))
    np.testing.assert_allclose([r[3] for r in single], 1.0, atol=1e-15)
    np.testing.assert_allclose(visibility_scan(HALF, -1.0, [0.0]), [(0.0, 1.0, 0.0, 1.0)], atol=1e-15)


def test_visibility_scan_empty_grid():
    with pytest.raises(EmptyGrid):
        visibility_scan(HALF, -1.0, [])


def test_visibility_scan_deterministic():
    grid = np.linspace(0, 1, 21)
    assert visibility_scan(HALF, -1.0, grid) == visibility_scan(HALF, -1.0, grid)

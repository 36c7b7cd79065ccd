import numpy as np
import pytest
from hypothesis import given, settings, strategies as st
from scipy import integrate

from abclab import fields2d
from abclab.errors import EvaluationAtSource, InsideCore
from abclab.model import ChargeState, FluxonState, make_circular_trajectory
from abclab.quadrature import line_integral


def parametric_circulation(field, center, radius):
    """Oracle: integral of F(c + rho e(t)) . rho e'(t) dt over the exact circle."""

    def integrand(t):
        x = center + radius * np.array([np.cos(t), np.sin(t)])
        tangent = radius * np.array([-np.sin(t), np.cos(t)])
        return float(field(x) @ tangent)

    return integrate.quad(integrand, 0, 2 * np.pi, epsabs=1e-13, epsrel=1e-13, limit=200)[0]


def test_e_field_charge_examples():
    c = ChargeState([0, 0], charge=1.0)
    np.testing.assert_allclose(fields2d.e_field_charge(c, [1, 0]), [2, 0], atol=1e-15)
    np.testing.assert_allclose(fields2d.e_field_charge(c, [0, 2]), [0, 1], atol=1e-15)
    zero = ChargeState([0, 0], charge=0.0)
    np.testing.assert_array_equal(fields2d.e_field_charge(zero, [[1, 2], [3, 4]]), 0.0)


def test_e_field_at_source_raises():
    with pytest.raises(EvaluationAtSource):
        fields2d.e_field_charge(ChargeState([1, 1]), [1, 1])


def test_b_field_charge_examples():
    assert fields2d.b_field_charge(ChargeState([0, 0]), [0, 1]) == 0.0
    moving = ChargeState([0, 0], [0.01, 0.0])
    assert fields2d.b_field_charge(moving, [0, 1]) == pytest.approx(0.02, abs=1e-15)
    backwards = ChargeState([0, 0], [-0.01, 0.0])
    assert fields2d.b_field_charge(backwards, [0, 1]) == pytest.approx(-0.02, abs=1e-15)


@pytest.mark.parametrize("a", [0.5, 0.05, 0.001])
@pytest.mark.parametrize("flux", [1.0, -0.5])
def test_fluxon_total_flux(a, flux):
    f = FluxonState([0.3, -0.1], flux=flux, core_radius=a)

    def bz(r, t):
        return r * float(fields2d.b_field_fluxon(f, f.position + r * np.array([np.cos(t), np.sin(t)])))

    total, _ = integrate.nquad(bz, [[0, 2 * a], [0, 2 * np.pi]], opts=[{"points": [a]}, {}])
    assert total == pytest.approx(2 * np.pi * flux, rel=1e-6)


def test_fluxon_field_confined():
    f = FluxonState([0, 0], flux=1.0, core_radius=0.1)
    assert fields2d.b_field_fluxon(f, [0.2, 0]) == 0.0
    assert fields2d.b_field_fluxon(FluxonState([0, 0], flux=0.0), [0, 0]) == 0.0


def test_e_field_fluxon():
    static = FluxonState([0, 0], flux=1.0, core_radius=0.1)
    np.testing.assert_array_equal(fields2d.e_field_fluxon(static, [0.01, 0]), 0.0)
    moving = FluxonState([0, 0], [0.01, 0.0], flux=1.0, core_radius=0.1)
    np.testing.assert_array_equal(fields2d.e_field_fluxon(moving, [0.5, 0]), 0.0)
    e = fields2d.e_field_fluxon(moving, [0.01, 0.02])
    bz = fields2d.b_field_fluxon(moving, [0.01, 0.02])
    assert e @ moving.velocity == 0.0
    assert np.hypot(*e) == pytest.approx(0.01 * bz, rel=1e-15)


def test_vector_potential_unit():
    f = FluxonState([0, 0], flux=1.0)
    np.testing.assert_allclose(fields2d.vector_potential_fluxon(f, [1, 0]), [0, 1], atol=1e-15)
    with pytest.raises(InsideCore):
        fields2d.vector_potential_fluxon(FluxonState([0, 0], core_radius=0.5), [0.1, 0])


@pytest.mark.parametrize("flux", [1.0, 0.5, -2.0])
def test_vector_potential_circulation_oracle(flux):
    f = FluxonState([0.2, 0.1], flux=flux)
    circ = parametric_circulation(lambda x: fields2d.vector_potential_fluxon(f, x), f.position, 0.7)
    assert circ == pytest.approx(2 * np.pi * flux, rel=1e-10)


def test_vector_potential_circulation_polyline():
    f = FluxonState([0, 0], flux=1.0)
    enclosing = make_circular_trajectory([0.1, 0.0], 1.0, 0.1, 720)
    outside = make_circular_trajectory([3.0, 0.0], 1.0, 0.1, 720)
    field = lambda x: fields2d.vector_potential_fluxon(f, x)
    assert line_integral(field, enclosing.positions) == pytest.approx(2 * np.pi, abs=1e-6)
    assert abs(line_integral(field, outside.positions)) < 1e-6


def test_electric_field_is_curl_free():
    c = ChargeState([0, 0], charge=1.3)
    loop = make_circular_trajectory([2.0, 0.5], 1.0, 0.1, 720)
    circ = line_integral(lambda x: fields2d.e_field_charge(c, x), loop.positions)
    # path length 2 pi times field scale ~2.6/2
    assert abs(circ) < 1e-8 * 2 * np.pi * 1.3


def test_superposition():
    a = ChargeState([0, 0], charge=1.0)
    b = ChargeState([0, 0], charge=0.5)
    x = np.array([[0.3, 0.7], [-1.0, 2.0]])
    summed = fields2d.e_field_charge(a, x) + fields2d.e_field_charge(b, x)
    np.testing.assert_allclose(
        summed, fields2d.e_field_charge(ChargeState([0, 0], charge=1.5), x), rtol=1e-15
    )


@settings(max_examples=30, deadline=None)
@given(st.integers(-2, 2).filter(bool), st.floats(0.05, 0.4), st.floats(-1.0, 1.0))
def test_circulation_is_flux_times_winding(turns, a, flux):
    f = FluxonState([0, 0], flux=flux, core_radius=a)
    loop = make_circular_trajectory([0, 0], 3 * a, np.sign(turns) * 0.01, 720, turns=abs(turns))
    circ = line_integral(lambda x: fields2d.vector_potential_fluxon(f, x), loop.positions)
    assert circ == pytest.approx(2 * np.pi * flux * turns, abs=1e-6)


def test_uniform_motion_fields_reduce_to_static():
    c = ChargeState([0, 0], charge=1.0)
    x = np.array([[0.5, 0.2], [1.0, -3.0]])
    np.testing.assert_allclose(
        fields2d.e_field_charge_uniform_motion(c, x), fields2d.e_field_charge(c, x), rtol=1e-15
    )
    moving = ChargeState([0, 0], [0.05, 0.0], charge=1.0)
    gamma = 1 / np.sqrt(1 - 0.05**2)
    # transverse point: field enhanced by gamma
    np.testing.assert_allclose(
        fields2d.e_field_charge_uniform_motion(moving, [0, 1]), [0, 2 * gamma], rtol=1e-14
    )
    # longitudinal point: rest-frame point stretched to gamma, field 2/gamma
    np.testing.assert_allclose(
        fields2d.e_field_charge_uniform_motion(moving, [1, 0]), [2 / gamma, 0], rtol=1e-14
    )


def test_uniform_motion_fluxon_conserves_flux():
    f = FluxonState([0, 0], [0.08, 0.03], flux=1.0, core_radius=0.1)

    def bz(r, t):
        x = r * np.array([np.cos(t), np.sin(t)])
        return r * float(fields2d.b_field_fluxon_uniform_motion(f, x))

    total, _ = integrate.nquad(bz, [[0, 0.2], [0, 2 * np.pi]], opts=[{"points": [0.0996, 0.1]}, {"limit": 200}])
    assert total == pytest.approx(2 * np.pi, rel=1e-5)
    xp = np.array([[0.03, -0.02], [0.1, 0.0]])
    np.testing.assert_allclose(
        fields2d.contract_to_rest_frame(f, fields2d.rest_frame_to_lab(f, xp)), xp, atol=1e-16
    )

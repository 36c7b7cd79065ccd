"""Field momentum, interaction Lagrangian and Hamiltonian of a charge and a fluxon.

The field momentum stored in the overlap of the charge's electric field and
the fluxon's magnetic field is

    Pi = (1/4pi) * integral(E_q x B_fluxon) dA,

which for a charge outside the core has the closed form

    Pi = q * flux * (z_hat x s) / |s|^2,    s = r_charge - R_fluxon,

i.e. Pi = q * A(s). The closed form holds for any core radius smaller than
the separation: each component of E_q is harmonic inside the core, so its
average over the uniform disk equals its value at the centre.
"""

from __future__ import annotations

import numpy as np

from . import fields2d
from .errors import CoreOverlap
from .model import ChargeState, FluxonState, cross2, zcross
from .quadrature import (
    DEFAULT_SPEC,
    QuadratureSpec,
    fixed_disk_integral,
    integrate_disk,
)

__all__ = [
    "QuadratureSpec",
    "field_momentum_at",
    "field_momentum_closed",
    "field_momentum_quadrature",
    "field_momentum_fixed_rule",
    "interaction_lagrangian_pi",
    "interaction_lagrangian_fields",
    "lagrangian_vector_potential",
    "lagrangian_dual_electric",
    "hamiltonian",
    "canonical_momenta",
]


def field_momentum_at(separation, charge: float, flux: float):
    """Closed-form Pi for separation(s) ``r - R`` (vectorized, no core check)."""
    s = np.asarray(separation, dtype=np.float64)
    d2 = np.einsum("...i,...i->...", s, s)
    return charge * flux * zcross(s) / d2[..., None]


def _separation(charge: ChargeState, fluxon: FluxonState, min_ratio: float = 1.0):
    s = charge.position - fluxon.position
    d = float(np.hypot(*s))
    if d <= min_ratio * fluxon.core_radius:
        raise CoreOverlap(
            f"charge-fluxon separation {d:.3g} must exceed {min_ratio:g} x core radius"
        )
    return s


def field_momentum_closed(charge: ChargeState, fluxon: FluxonState):
    s = _separation(charge, fluxon)
    return field_momentum_at(s, charge.charge, fluxon.flux)


def _momentum_density(charge: ChargeState, fluxon: FluxonState):
    bz = 2.0 * fluxon.flux / fluxon.core_radius**2

    def density(pts):
        e = fields2d.e_field_charge(charge, pts)
        # E x (Bz z_hat) = -Bz (z_hat x E)
        return -bz * zcross(e) / (4 * np.pi)

    return density


def field_momentum_quadrature(
    charge: ChargeState, fluxon: FluxonState, spec: QuadratureSpec = DEFAULT_SPEC
):
    """Adaptive quadrature of (1/4pi) E_q x B_fluxon over the fluxon core."""
    _separation(charge, fluxon, min_ratio=2.0)
    return integrate_disk(
        _momentum_density(charge, fluxon), fluxon.position, fluxon.core_radius, spec
    )


def field_momentum_fixed_rule(
    charge: ChargeState, fluxon: FluxonState, n_r: int = 2, n_theta: int = 4
):
    """Same integral on one fixed tensor-product grid (no refinement)."""
    _separation(charge, fluxon, min_ratio=2.0)
    return fixed_disk_integral(
        _momentum_density(charge, fluxon),
        fluxon.position,
        fluxon.core_radius,
        n_r,
        n_theta,
    )


def interaction_lagrangian_pi(charge: ChargeState, fluxon: FluxonState) -> float:
    """L_int = (v_charge - v_fluxon) . Pi with the closed-form Pi."""
    pi = field_momentum_closed(charge, fluxon)
    return float(np.dot(charge.velocity - fluxon.velocity, pi))


def interaction_lagrangian_fields(
    charge: ChargeState, fluxon: FluxonState, spec: QuadratureSpec = DEFAULT_SPEC
) -> float:
    """(1/4pi) * integral(B_q B_fluxon - E_q . E_fluxon) over the fluxon core.

    Uses the exact fields of both sources in uniform motion, so the result
    agrees with :func:`interaction_lagrangian_pi` up to relative O((v/c)^2).
    The integral runs over the Lorentz-contracted core; it is evaluated in
    the fluxon rest frame where the core is a disk and the Jacobian 1/gamma
    cancels the gamma of the transformed Bz.
    """
    _separation(charge, fluxon, min_ratio=2.0)
    bz_rest = 2.0 * fluxon.flux / fluxon.core_radius**2
    e_fluxon_dir = zcross(fluxon.velocity)

    def integrand(xp):
        x = fields2d.rest_frame_to_lab(fluxon, xp)
        e_q = fields2d.e_field_charge_uniform_motion(charge, x)
        b_q = cross2(charge.velocity, e_q)
        return bz_rest * (b_q - e_q @ e_fluxon_dir) / (4 * np.pi)

    return float(integrate_disk(integrand, np.zeros(2), fluxon.core_radius, spec))


def lagrangian_vector_potential(charge: ChargeState, fluxon: FluxonState) -> float:
    """q (v_charge - v_fluxon) . A(r - R), with A the fluxon's vector potential."""
    a = fields2d.vector_potential_fluxon(fluxon, charge.position)
    return float(charge.charge * np.dot(charge.velocity - fluxon.velocity, a))


def lagrangian_dual_electric(charge: ChargeState, fluxon: FluxonState) -> float:
    """Moving-fluxon form: (Phi/4pi) V . (z_hat x E_q(R)) with Phi = 2*pi*flux.

    Only the fluxon's velocity enters, so this equals the interaction
    Lagrangian in the frame where the charge is at rest.
    """
    e = fields2d.e_field_charge(charge, fluxon.position)
    return float(0.5 * fluxon.flux * np.dot(fluxon.velocity, zcross(e)))


def hamiltonian(charge: ChargeState, fluxon: FluxonState, p, P) -> float:
    """H = (p - Pi)^2 / 2m + (P + Pi)^2 / 2M."""
    pi = field_momentum_closed(charge, fluxon)
    kp = np.asarray(p, dtype=np.float64) - pi
    kP = np.asarray(P, dtype=np.float64) + pi
    return float(kp @ kp / (2 * charge.mass) + kP @ kP / (2 * fluxon.mass))


def canonical_momenta(charge: ChargeState, fluxon: FluxonState):
    """(p, P) = (m v + Pi, M V - Pi)."""
    pi = field_momentum_closed(charge, fluxon)
    return charge.mass * charge.velocity + pi, fluxon.mass * fluxon.velocity - pi

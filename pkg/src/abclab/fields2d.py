"""Electromagnetic fields and potentials of the charge and the fluxon in the plane.

All functions broadcast over evaluation points with trailing shape (..., 2).

Normalization: the charge is a 2D (line) source, E = 2q (x - r)/|x - r|^2;
the fluxon core is a uniform disk of radius a carrying the total flux
2*pi*flux, i.e. Bz = 2*flux/a**2 inside. Both are fixed by the phase
convention in :mod:`abclab.model`.

The plain functions are first order in v/c. The ``*_uniform_motion``
variants are the exact fields of sources in uniform motion (Lorentz
transformed rest-frame fields at equal lab time).
"""

from __future__ import annotations

import numpy as np

from .errors import EvaluationAtSource, InsideCore
from .model import ChargeState, FluxonState, cross2, zcross

SOURCE_TOL = 1e-12


def _offsets(center, x):
    s = np.asarray(x, dtype=np.float64) - center
    rho2 = np.einsum("...i,...i->...", s, s)
    return s, rho2


def e_field_charge(src: ChargeState, x):
    s, rho2 = _offsets(src.position, x)
    if np.any(rho2 <= SOURCE_TOL**2):
        raise EvaluationAtSource("electric field evaluated at the charge")
    return 2.0 * src.charge * s / rho2[..., None]


def b_field_charge(src: ChargeState, x):
    """First-order magnetic field of the moving charge, Bz = (v x E)_z."""
    return cross2(src.velocity, e_field_charge(src, x))


def b_field_fluxon(src: FluxonState, x):
    _, rho2 = _offsets(src.position, x)
    a = src.core_radius
    return np.where(rho2 < a * a, 2.0 * src.flux / (a * a), 0.0)


def e_field_fluxon(src: FluxonState, x):
    """First-order electric field of the moving flux tube, E = -V x (Bz z_hat)."""
    bz = b_field_fluxon(src, x)
    return np.asarray(bz)[..., None] * zcross(src.velocity)


def vector_potential_fluxon(src: FluxonState, x):
    """A = (flux / rho) phi_hat outside the core; circulation 2*pi*flux per turn."""
    s, rho2 = _offsets(src.position, x)
    if np.any(rho2 <= src.core_radius**2):
        raise InsideCore("analytic vector potential is only valid outside the core")
    return src.flux * zcross(s) / rho2[..., None]


def _gamma(v) -> float:
    return 1.0 / np.sqrt(1.0 - float(np.dot(v, v)))


def e_field_charge_uniform_motion(src: ChargeState, x):
    """Exact field of a line charge in uniform motion.

    E = 2 q gamma s / (|s|^2 + gamma^2 (v.s)^2), with s measured from the
    present position of the charge.
    """
    s, rho2 = _offsets(src.position, x)
    if np.any(rho2 <= SOURCE_TOL**2):
        raise EvaluationAtSource("electric field evaluated at the charge")
    g = _gamma(src.velocity)
    vs = s @ src.velocity
    return 2.0 * src.charge * g * s / (rho2 + g * g * vs * vs)[..., None]


def b_field_charge_uniform_motion(src: ChargeState, x):
    return cross2(src.velocity, e_field_charge_uniform_motion(src, x))


def contract_to_rest_frame(src: FluxonState, x):
    """Map lab points to the fluxon rest frame (stretch along the velocity by gamma)."""
    s = np.asarray(x, dtype=np.float64) - src.position
    speed = float(np.hypot(*src.velocity))
    if speed == 0.0:
        return s
    n = src.velocity / speed
    g = _gamma(src.velocity)
    return s + (g - 1.0) * (s @ n)[..., None] * n


def rest_frame_to_lab(src: FluxonState, xp):
    """Inverse of :func:`contract_to_rest_frame`; returns lab positions."""
    xp = np.asarray(xp, dtype=np.float64)
    speed = float(np.hypot(*src.velocity))
    if speed == 0.0:
        return src.position + xp
    n = src.velocity / speed
    g = _gamma(src.velocity)
    return src.position + xp - (1.0 - 1.0 / g) * (xp @ n)[..., None] * n


def b_field_fluxon_uniform_motion(src: FluxonState, x):
    """Bz = gamma * B'(x'): rest-frame disk profile seen Lorentz contracted."""
    sp = contract_to_rest_frame(src, x)
    a = src.core_radius
    inside = np.einsum("...i,...i->...", sp, sp) < a * a
    return np.where(inside, _gamma(src.velocity) * 2.0 * src.flux / (a * a), 0.0)


def e_field_fluxon_uniform_motion(src: FluxonState, x):
    bz = b_field_fluxon_uniform_motion(src, x)
    return np.asarray(bz)[..., None] * zcross(src.velocity)

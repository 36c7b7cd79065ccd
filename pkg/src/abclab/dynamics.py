"""Two-body equations of motion for L = m v^2/2 + M V^2/2 + (v - V) . Pi(r - R).

Euler-Lagrange gives  m r'' = +(v - V) x curl(Pi),  M R'' = -(v - V) x curl(Pi),
and curl(Pi) = q * Bz_fluxon vanishes outside the core, so both particles are
force free in the whole region accessible to them.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fields2d
from .errors import CoreEntry, CoreOverlap
from .interaction import canonical_momenta, hamiltonian
from .model import ChargeState, FluxonState, zcross


@dataclass(frozen=True)
class SystemState:
    charge: ChargeState
    fluxon: FluxonState
    time: float = 0.0

    @property
    def separation(self) -> float:
        return float(np.hypot(*(self.charge.position - self.fluxon.position)))

    def as_vector(self):
        return np.concatenate(
            [
                self.charge.position,
                self.fluxon.position,
                self.charge.velocity,
                self.fluxon.velocity,
            ]
        )

    def with_vector(self, y, time: float) -> SystemState:
        return SystemState(
            self.charge.moved(y[0:2], y[4:6]),
            self.fluxon.moved(y[2:4], y[6:8]),
            time,
        )


@dataclass(frozen=True, eq=False)
class IntegrationResult:
    times: np.ndarray
    states: list
    deflection_angle: float
    energy_drift: float
    momentum_drift: float

    @property
    def charge_positions(self):
        return np.array([s.charge.position for s in self.states])

    @property
    def fluxon_positions(self):
        return np.array([s.fluxon.position for s in self.states])


def curl_accelerations(charge: ChargeState, fluxon: FluxonState):
    """Curl-form accelerations, valid at any separation (no core check)."""
    curl = charge.charge * float(fields2d.b_field_fluxon(fluxon, charge.position))
    if curl == 0.0:
        return np.zeros(2), np.zeros(2)
    # (v - V) x (curl z_hat) = -curl * z_hat x (v - V)
    force = -curl * zcross(charge.velocity - fluxon.velocity)
    return force / charge.mass, -force / fluxon.mass


def equations_of_motion(state: SystemState):
    if state.separation <= state.fluxon.core_radius:
        raise CoreOverlap("equations of motion are only defined outside the core")
    return curl_accelerations(state.charge, state.fluxon)


def rk4_step(rhs, y, t: float, dt: float):
    k1 = rhs(t, y)
    k2 = rhs(t + 0.5 * dt, y + 0.5 * dt * k1)
    k3 = rhs(t + 0.5 * dt, y + 0.5 * dt * k2)
    k4 = rhs(t + dt, y + dt * k3)
    return y + dt / 6.0 * (k1 + 2.0 * (k2 + k3) + k4)


def _rhs_for(template: SystemState):
    def rhs(t, y):
        s = template.with_vector(y, t)
        if s.separation <= s.fluxon.core_radius:
            raise CoreEntry(f"trajectory enters the fluxon core at t={t:.6g}")
        acc_q, acc_f = curl_accelerations(s.charge, s.fluxon)
        return np.concatenate([y[4:6], y[6:8], acc_q, acc_f])

    return rhs


def _angle_between(u, w) -> float:
    return float(abs(np.arctan2(u[0] * w[1] - u[1] * w[0], u @ w)))


def integrate(initial: SystemState, dt: float, n_steps: int) -> IntegrationResult:
    """Classic fourth-order Runge-Kutta integration of the two-body system."""
    if not dt > 0:
        raise ValueError("dt must be positive")
    if n_steps < 1:
        raise ValueError("n_steps must be >= 1")
    if initial.separation <= initial.fluxon.core_radius:
        raise CoreEntry("initial state is inside the fluxon core")
    rhs = _rhs_for(initial)

    y = initial.as_vector()
    t = initial.time
    states = [initial]
    p0, P0 = canonical_momenta(initial.charge, initial.fluxon)
    h0 = hamiltonian(initial.charge, initial.fluxon, p0, P0)
    total0 = p0 + P0
    e_drift = 0.0
    m_drift = 0.0
    for i in range(1, n_steps + 1):
        y = rk4_step(rhs, y, t, dt)
        t = initial.time + i * dt
        s = initial.with_vector(y, t)
        if s.separation <= s.fluxon.core_radius:
            raise CoreEntry(f"trajectory enters the fluxon core at t={t:.6g}")
        p, P = canonical_momenta(s.charge, s.fluxon)
        e_drift = max(e_drift, abs(hamiltonian(s.charge, s.fluxon, p, P) - h0))
        m_drift = max(m_drift, float(np.hypot(*(p + P - total0))))
        states.append(s)

    v0 = initial.charge.velocity
    v1 = states[-1].charge.velocity
    deflection = _angle_between(v0, v1) if np.any(v0) and np.any(v1) else 0.0
    return IntegrationResult(
        times=np.array([s.time for s in states]),
        states=states,
        deflection_angle=deflection,
        energy_drift=e_drift,
        momentum_drift=m_drift,
    )


def scattering_state(
    impact_parameter: float,
    speed: float,
    core_radius: float,
    flux: float,
    *,
    charge: float = 1.0,
    start_distance: float = 10.0,
    mass: float = 1.0,
    fluxon_mass: float = 1.0,
) -> SystemState:
    """Charge incident along +x with the given impact parameter on a resting fluxon."""
    q = ChargeState(
        [-start_distance, impact_parameter], [speed, 0.0], charge=charge, mass=mass
    )
    f = FluxonState([0.0, 0.0], flux=flux, core_radius=core_radius, mass=fluxon_mass)
    return SystemState(q, f, 0.0)

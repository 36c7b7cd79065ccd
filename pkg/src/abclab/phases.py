"""Interference phases along closed trajectories, in three frames.

* resting fluxon, moving charge:   q * loop(A . dx)
* resting charge, moving fluxon:   (Phi / 4pi) * loop((z_hat x E_q) . dX), Phi = 2 pi flux
* both moving (general frame):     loop(Pi . d(r - R))

For an unshielded pair all three equal 2 pi * winding * q * flux.
"""

from __future__ import annotations

from dataclasses import dataclass
from enum import Enum

import numpy as np

from . import fields2d
from .errors import CoreApproach, DesynchronizedTrajectories, EndpointMismatch, NonClosedTrajectory
from .interaction import field_momentum_at
from .model import ChargeState, FluxonState, Trajectory, winding_number, zcross
from .quadrature import segment_rule

DEFAULT_SEGMENT_NODES = 4
ENDPOINT_TOL = 1e-12


class Method(str, Enum):
    VECTOR_POTENTIAL = "vector_potential"
    DUAL_ELECTRIC = "dual_electric"
    FIELD_MOMENTUM = "field_momentum"


@dataclass(frozen=True)
class PhaseResult:
    phase: float
    winding: int
    method: Method


def _require_closed(traj: Trajectory) -> None:
    if not traj.closed:
        raise NonClosedTrajectory("loop phase needs a closed trajectory")


def _check_clearance(points, center, core_radius: float) -> None:
    rel = np.asarray(points) - center
    if np.min(np.hypot(rel[:, 0], rel[:, 1])) <= 2 * core_radius:
        raise CoreApproach("trajectory comes within two core radii of the fluxon")


def phase_vector_potential(
    traj: Trajectory, fluxon: FluxonState, q: float, *, nodes: int = DEFAULT_SEGMENT_NODES
) -> PhaseResult:
    """Charge moving along ``traj`` around a resting fluxon."""
    _require_closed(traj)
    _check_clearance(traj.positions, fluxon.position, fluxon.core_radius)
    xs, dls = segment_rule(traj.positions, nodes)
    a = fields2d.vector_potential_fluxon(fluxon, xs)
    phase = q * float(np.sum(a * dls))
    return PhaseResult(phase, winding_number(traj, fluxon.position), Method.VECTOR_POTENTIAL)


def phase_dual_electric(
    traj: Trajectory,
    charge: ChargeState,
    flux: float,
    *,
    core_radius: float = 1e-3,
    nodes: int = DEFAULT_SEGMENT_NODES,
) -> PhaseResult:
    """Fluxon moving along ``traj`` around a resting charge."""
    _require_closed(traj)
    _check_clearance(traj.positions, charge.position, core_radius)
    xs, dls = segment_rule(traj.positions, nodes)
    e = fields2d.e_field_charge(charge, xs)
    phase = 0.5 * flux * float(np.sum(zcross(e) * dls))
    return PhaseResult(phase, winding_number(traj, charge.position), Method.DUAL_ELECTRIC)


def relative_trajectory(traj_charge: Trajectory, traj_fluxon: Trajectory) -> Trajectory:
    """Path of the separation r - R, requiring common time stamps."""
    if len(traj_charge) != len(traj_fluxon) or np.max(
        np.abs(traj_charge.times - traj_fluxon.times)
    ) > 1e-12 * max(1.0, float(np.max(np.abs(traj_charge.times)))):
        raise DesynchronizedTrajectories("charge and fluxon trajectories must share time stamps")
    rel = traj_charge.positions - traj_fluxon.positions
    closed = bool(np.hypot(*(rel[-1] - rel[0])) <= 1e-12)
    if closed:
        rel = rel.copy()
        rel[-1] = rel[0]
    return Trajectory(traj_charge.times, rel, closed)


def phase_field_momentum(
    traj_charge: Trajectory,
    traj_fluxon: Trajectory,
    q: float,
    flux: float,
    *,
    core_radius: float = 1e-3,
    nodes: int = DEFAULT_SEGMENT_NODES,
) -> PhaseResult:
    """Both particles moving: integrate Pi(r - R) along the relative path."""
    rel = relative_trajectory(traj_charge, traj_fluxon)
    _require_closed(rel)
    _check_clearance(rel.positions, np.zeros(2), core_radius)
    xs, dls = segment_rule(rel.positions, nodes)
    phase = float(np.sum(field_momentum_at(xs, q, flux) * dls))
    return PhaseResult(phase, winding_number(rel, np.zeros(2)), Method.FIELD_MOMENTUM)


def open_path_phase(path: Trajectory, fluxon: FluxonState, q: float, nodes: int = DEFAULT_SEGMENT_NODES) -> float:
    _check_clearance(path.positions, fluxon.position, fluxon.core_radius)
    xs, dls = segment_rule(path.positions, nodes)
    return q * float(np.sum(fields2d.vector_potential_fluxon(fluxon, xs) * dls))


def wrap_phase(phi: float) -> float:
    """Map to (-pi, pi]."""
    w = float(np.mod(phi + np.pi, 2 * np.pi) - np.pi)
    return np.pi if w == -np.pi else w


@dataclass(frozen=True)
class FringeResult:
    relative_phase: float
    visibility: float
    shield_factor: complex = 1.0 + 0.0j

    def intensity(self, extra_phase=0.0):
        """Detector intensity I = (1 + Re(u1 exp(i(phase + extra)))) / 2."""
        return 0.5 * (
            1.0
            + np.real(self.shield_factor * np.exp(1j * (self.relative_phase + np.asarray(extra_phase))))
        )


def two_path_fringe(
    path_a: Trajectory,
    path_b: Trajectory,
    fluxon: FluxonState,
    q: float,
    shield_factor: complex | None = None,
) -> FringeResult:
    """Two-arm interferometer with equal 1/2 weights on both arms.

    ``relative_phase`` is the phase of path a minus path b (the loop a
    followed by reversed b), wrapped to (-pi, pi]. A shield factor u1
    multiplies the cross term of the intensity, so the fringe visibility
    is |u1|.
    """
    if (
        np.hypot(*(path_a.positions[0] - path_b.positions[0])) > ENDPOINT_TOL
        or np.hypot(*(path_a.positions[-1] - path_b.positions[-1])) > ENDPOINT_TOL
    ):
        raise EndpointMismatch("interferometer arms must share both endpoints")
    delta = open_path_phase(path_a, fluxon, q) - open_path_phase(path_b, fluxon, q)
    u1 = complex(1.0) if shield_factor is None else complex(shield_factor)
    return FringeResult(wrap_phase(delta), abs(u1), u1)


def semicircle_arms(center, radius: float, n_samples: int = 360):
    """Upper and lower half circles from (c - R, 0) to (c + R, 0)."""
    c = np.asarray(center, dtype=np.float64)
    th = np.linspace(np.pi, 0.0, n_samples + 1)
    upper = c + radius * np.column_stack([np.cos(th), np.sin(th)])
    lower = upper * np.array([1.0, -1.0]) + np.array([0.0, 2 * c[1]])
    t = np.arange(n_samples + 1, dtype=np.float64)
    return Trajectory(t, upper, False), Trajectory(t, lower, False)

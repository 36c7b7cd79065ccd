"""Grounded circular conductor between the charge and the fluxon.

The induced surface density for an exterior charge q at distance r from
the centre of a grounded circle of radius R is the Poisson kernel

    dn(phi) = -(q / 2 pi R) (r^2 - R^2) / (r^2 + R^2 - 2 r R cos phi),

with phi measured from the charge's azimuth. It integrates to -q and
cancels the charge's field everywhere inside the circle.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import fields2d
from .errors import (
    ChargeNotConserved,
    EvaluationOnSurface,
    GeometryViolation,
    SourceInsideShield,
)
from .interaction import field_momentum_at
from .model import ChargeState, FluxonState, Trajectory, as_vec2, winding_number, zcross
from .quadrature import disk_rule, segment_rule

SURFACE_GAP = 1e-6
DEFAULT_NODES = 256


@dataclass(frozen=True)
class CircularShield:
    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_vec2(self.center, "center"))
        object.__setattr__(self, "radius", float(self.radius))
        if not self.radius > 0:
            raise ValueError("shield radius must be positive")

    def node_angles(self, n: int) -> np.ndarray:
        return 2 * np.pi * (np.arange(n) + 0.5) / n

    def nodes(self, n: int) -> np.ndarray:
        phi = self.node_angles(n)
        return self.center + self.radius * np.column_stack([np.cos(phi), np.sin(phi)])


@dataclass(frozen=True, eq=False)
class SurfaceDensity:
    """Density per unit arc length at N uniformly spaced (absolute) angles."""

    angles: np.ndarray
    values: np.ndarray

    @property
    def n(self) -> int:
        return self.values.size

    def total_charge(self, radius: float) -> float:
        return float(np.sum(self.values) * radius * 2 * np.pi / self.n)


def _polar(charge: ChargeState, shield: CircularShield):
    s = charge.position - shield.center
    r = float(np.hypot(*s))
    return r, float(np.arctan2(s[1], s[0]))


def _check_exterior(charge: ChargeState, shield: CircularShield) -> float:
    r, _ = _polar(charge, shield)
    if r <= shield.radius + SURFACE_GAP:
        raise SourceInsideShield(
            f"charge at distance {r:.6g} is not outside the shield radius {shield.radius:.6g}"
        )
    return r


def poisson_density(q: float, r: float, R: float, phi):
    """Closed-form induced density at angle(s) ``phi`` from the charge azimuth."""
    phi = np.asarray(phi, dtype=np.float64)
    return -(q / (2 * np.pi * R)) * (r * r - R * R) / (r * r + R * R - 2 * r * R * np.cos(phi))


def induced_density(charge: ChargeState, shield: CircularShield, phi):
    r = _check_exterior(charge, shield)
    return poisson_density(charge.charge, r, shield.radius, phi)


def surface_density(charge: ChargeState, shield: CircularShield, n: int = DEFAULT_NODES):
    """Induced density sampled at the shield's N midpoint nodes (absolute angles)."""
    r = _check_exterior(charge, shield)
    _, azimuth = _polar(charge, shield)
    angles = shield.node_angles(n)
    return SurfaceDensity(angles, poisson_density(charge.charge, r, shield.radius, angles - azimuth))


def shield_field(shield: CircularShield, density: SurfaceDensity, x):
    """Field of the discretized surface charge (each node a line charge)."""
    x = np.asarray(x, dtype=np.float64)
    nodes = shield.nodes(density.n)
    dq = density.values * shield.radius * 2 * np.pi / density.n
    s = x[..., None, :] - nodes
    rho2 = np.einsum("...i,...i->...", s, s)
    return np.sum(2.0 * dq[:, None] * s / rho2[..., None], axis=-2)


def shielded_field(charge: ChargeState, shield: CircularShield, density: SurfaceDensity, x):
    """Net field E_q + E_s at interior point(s) x."""
    x = np.asarray(x, dtype=np.float64)
    rel = x - shield.center
    if np.any(np.hypot(rel[..., 0], rel[..., 1]) >= shield.radius - SURFACE_GAP):
        raise EvaluationOnSurface("shielded field is only evaluated strictly inside the shield")
    _check_exterior(charge, shield)
    return fields2d.e_field_charge(charge, x) + shield_field(shield, density, x)


def _core_rule(fluxon: FluxonState):
    pts, w = disk_rule(fluxon.position, fluxon.core_radius, 2, 8)
    return pts, w / w.sum()


def classical_abc_phase(
    charge_traj: Trajectory,
    fluxon: FluxonState,
    shield: CircularShield,
    charge: float = 1.0,
    *,
    n_nodes: int = DEFAULT_NODES,
    shielded: bool = True,
    nodes_per_segment: int = 2,
) -> float:
    """Loop phase of the charge with Pi built from the net (shielded) field.

    Pi(r) = (1/4pi) * integral((E_q + E_s) x B_fluxon) over the core. With
    ``shielded=False`` the induced charge is dropped and the unshielded
    AB phase is recovered.
    """
    if not charge_traj.closed:
        raise GeometryViolation("the charge trajectory must be closed")
    f_rel = fluxon.position - shield.center
    if np.hypot(*f_rel) + fluxon.core_radius >= shield.radius - SURFACE_GAP:
        raise GeometryViolation("the fluxon core must lie inside the shield")
    d_traj = charge_traj.positions - shield.center
    if np.min(np.hypot(d_traj[:, 0], d_traj[:, 1])) <= shield.radius + SURFACE_GAP:
        raise GeometryViolation("the charge trajectory must stay outside the shield")

    xs, dls = segment_rule(charge_traj.positions, nodes_per_segment)
    if not shielded:
        pi = field_momentum_at(xs - fluxon.position, charge, fluxon.flux)
        return float(np.sum(pi * dls))

    core_pts, core_w = _core_rule(fluxon)
    flux_total = 2 * np.pi * fluxon.flux
    phase = 0.0
    for x, dl in zip(xs, dls):
        q = ChargeState(x, charge=charge)
        dens = surface_density(q, shield, n_nodes)
        e_net = fields2d.e_field_charge(q, core_pts) + shield_field(shield, dens, core_pts)
        e_avg = core_w @ e_net
        # (1/4pi) * (E x Bz z_hat) integrated: -(flux_total/4pi) z_hat x <E>
        pi = -(flux_total / (4 * np.pi)) * zcross(e_avg)
        phase += float(pi @ dl)
    return phase


def spectral_antiderivative(f, length: float = 2 * np.pi):
    """Zero-mean periodic antiderivative on a uniform periodic grid (the mean of f is ignored)."""
    n = f.size
    fh = np.fft.rfft(f)
    k = np.fft.rfftfreq(n, d=length / (2 * np.pi * n))
    gh = np.zeros_like(fh)
    gh[1:] = fh[1:] / (1j * k[1:])
    if n % 2 == 0:
        # Nyquist mode has no well-defined derivative pair; drop it
        gh[-1] = 0.0
    return np.fft.irfft(gh, n)


def _time_derivative(values, times):
    """Fourth-order finite differences along axis 0 on a uniform time grid."""
    dt = np.diff(times)
    h = dt[0]
    if not np.allclose(dt, h, rtol=1e-9, atol=0.0):
        raise ValueError("density series must be uniformly sampled in time")
    n = values.shape[0]
    if n < 5:
        raise ValueError("density series needs at least 5 time samples")
    d = np.empty_like(values)
    d[2:-2] = (values[:-4] - 8 * values[1:-3] + 8 * values[3:-1] - values[4:]) / (12 * h)
    d[0] = (-25 * values[0] + 48 * values[1] - 36 * values[2] + 16 * values[3] - 3 * values[4]) / (12 * h)
    d[1] = (-3 * values[0] - 10 * values[1] + 18 * values[2] - 6 * values[3] + values[4]) / (12 * h)
    d[-2] = -(-3 * values[-1] - 10 * values[-2] + 18 * values[-3] - 6 * values[-4] + values[-5]) / (12 * h)
    d[-1] = -(-25 * values[-1] + 48 * values[-2] - 36 * values[-3] + 16 * values[-4] - 3 * values[-5]) / (12 * h)
    return d


def surface_current(times, densities, shield: CircularShield, mean_current=0.0):
    """Surface current K(phi, t) on the ring from the continuity equation.

    Solves d(dn)/dt + (1/R) dK/dphi = 0 spectrally in phi. The additive
    constant per time step is ``mean_current`` (the angular mean of K);
    the default 0 is the zero-circulation gauge. Returns an array of shape
    (n_times, N).
    """
    times = np.asarray(times, dtype=np.float64)
    values = np.array([d.values for d in densities], dtype=np.float64)
    if values.shape[0] != times.size:
        raise ValueError("times and densities must have the same length")
    totals = values.sum(axis=1) * shield.radius * 2 * np.pi / values.shape[1]
    scale = max(1.0, float(np.max(np.abs(totals))))
    if np.max(np.abs(totals - totals[0])) > 1e-8 * scale:
        raise ChargeNotConserved("total induced charge varies along the series")
    dndt = _time_derivative(values, times)
    dndt -= dndt.mean(axis=1, keepdims=True)
    k = np.array([-shield.radius * spectral_antiderivative(row) for row in dndt])
    return k + np.broadcast_to(np.asarray(mean_current, dtype=np.float64), times.shape)[:, None]


def rigid_rotation_series(
    q: float, orbit_radius: float, shield: CircularShield, omega: float, times, n: int = DEFAULT_NODES
):
    """Induced densities for a charge on a circular orbit about the shield centre."""
    times = np.asarray(times, dtype=np.float64)
    angles = shield.node_angles(n)
    return [
        SurfaceDensity(angles, poisson_density(q, orbit_radius, shield.radius, angles - omega * t))
        for t in times
    ]


def config1_lagrangian_terms(
    charge: ChargeState,
    fluxon: FluxonState,
    shield: CircularShield,
    *,
    n_nodes: int = DEFAULT_NODES,
    excess_pairs: int = 0,
    time_step: float | None = None,
) -> tuple[float, float]:
    """The two parts of the interaction Lagrangian with the flux inside the shield.

    term1 = q v . A at the charge. term2 = integral(K A_phi) R dphi over the
    surface. K follows from the continuity equation applied to the full
    surface density (uniform background of ``excess_pairs`` Cooper pairs plus
    the induced Poisson density), sampled on a short stencil of the charge's
    straight-line motion around the present instant. Its angular mean is
    fixed by letting the induced density co-move with the charge's azimuth,
    mean K = R * phidot * mean(dn); the static background carries no current.
    """
    rel_f = fluxon.position - shield.center
    if np.hypot(*rel_f) > 1e-12:
        raise GeometryViolation("the fluxon must sit at the shield centre")
    if fluxon.core_radius >= shield.radius:
        raise GeometryViolation("the fluxon core must lie inside the shield")
    r = _check_exterior(charge, shield)
    s = charge.position - shield.center
    phidot = float((s[0] * charge.velocity[1] - s[1] * charge.velocity[0]) / (r * r))

    a_charge = fields2d.vector_potential_fluxon(fluxon, charge.position)
    term1 = charge.charge * float(charge.velocity @ a_charge)

    speed = float(np.hypot(*charge.velocity))
    if speed == 0.0:
        return term1, 0.0
    if time_step is None:
        time_step = 1e-3 * (r - shield.radius) / speed
    background = (2 * excess_pairs + charge.charge) / (2 * np.pi * shield.radius)
    stencil = np.arange(-2, 3) * time_step
    series = []
    for tau in stencil:
        q = charge.moved(position=charge.position + tau * charge.velocity)
        dens = surface_density(q, shield, n_nodes)
        series.append(SurfaceDensity(dens.angles, dens.values + background))
    induced_mean = -charge.charge / (2 * np.pi * shield.radius)
    current = surface_current(
        stencil, series, shield, mean_current=shield.radius * phidot * induced_mean
    )[2]

    angles = shield.node_angles(n_nodes)
    a_surf = fields2d.vector_potential_fluxon(fluxon, shield.nodes(n_nodes))
    tangent = np.column_stack([-np.sin(angles), np.cos(angles)])
    a_phi = np.einsum("ij,ij->i", a_surf, tangent)
    term2 = float(np.sum(current * a_phi) * shield.radius * 2 * np.pi / n_nodes)
    return term1, term2


def config1_loop_phase(
    q: float,
    flux: float,
    *,
    excess_pairs: int = 0,
    orbit_radius: float = 2.0,
    shield_radius: float = 1.0,
    omega: float = 0.02,
    n_time: int = 64,
    n_nodes: int = DEFAULT_NODES,
) -> float:
    """Integral of term1 + term2 over one full orbit of the charge."""
    shield = CircularShield([0.0, 0.0], shield_radius)
    fluxon = FluxonState([0.0, 0.0], flux=flux, core_radius=min(1e-3, 0.1 * shield_radius))
    period = 2 * np.pi / abs(omega)
    t = (np.arange(n_time) + 0.5) * period / n_time
    total = 0.0
    for ti in t:
        ang = omega * ti
        pos = orbit_radius * np.array([np.cos(ang), np.sin(ang)])
        vel = orbit_radius * omega * np.array([-np.sin(ang), np.cos(ang)])
        c = ChargeState(pos, vel, charge=q)
        t1, t2 = config1_lagrangian_terms(
            c, fluxon, shield, n_nodes=n_nodes, excess_pairs=excess_pairs
        )
        total += (t1 + t2) * period / n_time
    return total


def encloses_shield(traj: Trajectory, shield: CircularShield) -> int:
    return winding_number(traj, shield.center)

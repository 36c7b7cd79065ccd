"""Domain types, unit conventions and trajectory geometry.

Units are dimensionless with hbar = c = 1. Charges are measured in the
elementary charge e and fluxes in the normal flux quantum hc/e, so the
superconducting flux quantum is 1/2 and a charge q encircling a flux
``flux`` once counter-clockwise picks up the phase ``2*pi*q*flux``.

Orientation: counter-clockwise is positive and z points out of the plane.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace

import numpy as np
from numpy.typing import NDArray

from .errors import BadDiscretization, CenterOnPath, GeometryError, NonClosedTrajectory

FloatArray = NDArray[np.float64]

MAX_SPEED = 0.1
CLOSURE_TOL = 1e-12
CENTER_TOL = 1e-9
SC_FLUX_QUANTUM = 0.5


def as_vec2(x, name: str = "vector") -> FloatArray:
    arr = np.asarray(x, dtype=np.float64)
    if arr.shape != (2,):
        raise ValueError(f"{name} must be a 2-vector, got shape {arr.shape}")
    if not np.isfinite(arr).all():
        raise ValueError(f"{name} contains non-finite values")
    arr = arr.copy()
    arr.flags.writeable = False
    return arr


def _check_speed(v: FloatArray, who: str) -> None:
    speed = float(np.hypot(*v))
    if speed >= MAX_SPEED:
        raise ValueError(
            f"{who} speed {speed:.3g} exceeds the first-order cap |v| < {MAX_SPEED}"
        )


def cross2(a, b):
    """z-component of the cross product of in-plane vectors (broadcasts)."""
    a = np.asarray(a)
    b = np.asarray(b)
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def zcross(v):
    """z_hat x v for in-plane vectors (broadcasts): rotates by +90 degrees."""
    v = np.asarray(v, dtype=np.float64)
    return np.stack([-v[..., 1], v[..., 0]], axis=-1)


@dataclass(frozen=True)
class ChargeState:
    """Point charge: position, velocity (units of c), charge (units of e), mass."""

    position: FloatArray
    velocity: FloatArray = field(default_factory=lambda: np.zeros(2))
    charge: float = 1.0
    mass: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "position", as_vec2(self.position, "position"))
        object.__setattr__(self, "velocity", as_vec2(self.velocity, "velocity"))
        object.__setattr__(self, "charge", float(self.charge))
        object.__setattr__(self, "mass", float(self.mass))
        _check_speed(self.velocity, "charge")
        if not np.isfinite(self.charge):
            raise ValueError("charge must be finite")
        if not self.mass > 0:
            raise ValueError("mass must be positive")

    def moved(self, position=None, velocity=None) -> ChargeState:
        kw = {}
        if position is not None:
            kw["position"] = position
        if velocity is not None:
            kw["velocity"] = velocity
        return replace(self, **kw)


@dataclass(frozen=True)
class FluxonState:
    """Flux tube of regularized (uniform disk) cross-section.

    ``flux`` is in units of hc/e and ``core_radius`` is the disk radius.
    """

    position: FloatArray
    velocity: FloatArray = field(default_factory=lambda: np.zeros(2))
    flux: float = 1.0
    core_radius: float = 1e-3
    mass: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "position", as_vec2(self.position, "position"))
        object.__setattr__(self, "velocity", as_vec2(self.velocity, "velocity"))
        object.__setattr__(self, "flux", float(self.flux))
        object.__setattr__(self, "core_radius", float(self.core_radius))
        object.__setattr__(self, "mass", float(self.mass))
        _check_speed(self.velocity, "fluxon")
        if not np.isfinite(self.flux):
            raise ValueError("flux must be finite")
        if not self.core_radius > 0:
            raise ValueError("core_radius must be positive")
        if not self.mass > 0:
            raise ValueError("mass must be positive")

    def moved(self, position=None, velocity=None) -> FluxonState:
        kw = {}
        if position is not None:
            kw["position"] = position
        if velocity is not None:
            kw["velocity"] = velocity
        return replace(self, **kw)


@dataclass(frozen=True, eq=False)
class Trajectory:
    """Time-stamped polyline. ``positions`` has shape (n, 2)."""

    times: FloatArray
    positions: FloatArray
    closed: bool = False

    def __post_init__(self):
        t = np.array(self.times, dtype=np.float64)
        x = np.array(self.positions, dtype=np.float64)
        if t.ndim != 1 or x.shape != (t.size, 2):
            raise ValueError("times must be (n,) and positions (n, 2)")
        if t.size < 3:
            raise BadDiscretization("a trajectory needs at least 3 samples")
        if not (np.isfinite(t).all() and np.isfinite(x).all()):
            raise ValueError("trajectory contains non-finite values")
        if np.any(np.diff(t) <= 0):
            raise ValueError("times must be strictly increasing")
        if self.closed and np.hypot(*(x[-1] - x[0])) > CLOSURE_TOL:
            raise NonClosedTrajectory(
                "closed trajectory must end where it starts (within 1e-12)"
            )
        t.flags.writeable = False
        x.flags.writeable = False
        object.__setattr__(self, "times", t)
        object.__setattr__(self, "positions", x)

    def __len__(self) -> int:
        return self.times.size

    @classmethod
    def from_points(cls, points, *, closed: bool | None = None, dt: float = 1.0) -> Trajectory:
        """Build a trajectory from bare points, with uniform time stamps.

        A closed trajectory is detected automatically when ``closed`` is None.
        """
        pts = np.asarray(points, dtype=np.float64)
        if closed is None:
            closed = bool(np.hypot(*(pts[-1] - pts[0])) <= CLOSURE_TOL)
        if closed:
            pts = pts.copy()
            pts[-1] = pts[0]
        return cls(np.arange(len(pts)) * dt, pts, closed)

    def translated(self, offset) -> Trajectory:
        return Trajectory(self.times, self.positions + as_vec2(offset), self.closed)

    def reversed(self) -> Trajectory:
        """Same path traversed backwards (time stamps kept increasing)."""
        return Trajectory(self.times, self.positions[::-1], self.closed)

    def resampled(self, factor: int) -> Trajectory:
        """Insert ``factor - 1`` evenly spaced points inside every segment."""
        if factor < 1:
            raise ValueError("factor must be >= 1")
        s = np.arange(factor) / factor
        x0, x1 = self.positions[:-1], self.positions[1:]
        t0, t1 = self.times[:-1], self.times[1:]
        xs = (x0[:, None, :] + s[None, :, None] * (x1 - x0)[:, None, :]).reshape(-1, 2)
        ts = (t0[:, None] + s[None, :] * (t1 - t0)[:, None]).reshape(-1)
        xs = np.vstack([xs, self.positions[-1:]])
        ts = np.append(ts, self.times[-1])
        return Trajectory(ts, xs, self.closed)

    def velocities(self) -> FloatArray:
        return np.gradient(self.positions, self.times, axis=0)


def winding_number(traj: Trajectory, center) -> int:
    """Signed number of counter-clockwise turns of a closed polyline about ``center``."""
    if not traj.closed:
        raise NonClosedTrajectory("winding number needs a closed trajectory")
    c = as_vec2(center, "center")
    rel = traj.positions - c
    if np.min(np.hypot(rel[:, 0], rel[:, 1])) < CENTER_TOL:
        raise CenterOnPath("a trajectory sample lies on the center")
    a, b = rel[:-1], rel[1:]
    dtheta = np.arctan2(cross2(a, b), np.einsum("ij,ij->i", a, b))
    total = float(np.sum(dtheta)) / (2 * np.pi)
    n = round(total)
    if abs(total - n) > 1e-6:
        # a segment passes through the center (angle increment of exactly pi)
        raise CenterOnPath("winding number is ill-defined: a segment crosses the center")
    return int(n)


def make_circular_trajectory(
    center,
    radius: float,
    angular_velocity: float,
    n_samples: int,
    turns: float = 1.0,
    phase0: float = 0.0,
) -> Trajectory:
    """Uniformly sampled circle; ``n_samples`` is the number of samples per turn.

    Negative ``angular_velocity`` runs clockwise. The result is closed when
    ``turns`` is an integer.
    """
    if not radius > 0:
        raise GeometryError("radius must be positive")
    if n_samples < 16:
        raise BadDiscretization("n_samples must be at least 16")
    if angular_velocity == 0 or turns <= 0:
        raise GeometryError("angular_velocity must be nonzero and turns positive")
    c = as_vec2(center, "center")
    n_seg = max(int(round(n_samples * turns)), 3)
    period = 2 * np.pi / abs(angular_velocity)
    t = np.linspace(0.0, turns * period, n_seg + 1)
    theta = phase0 + angular_velocity * t
    pts = c + radius * np.column_stack([np.cos(theta), np.sin(theta)])
    closed = float(turns).is_integer()
    if closed:
        pts[-1] = pts[0]
    return Trajectory(t, pts, closed)

"""Superconducting shield with the induced charge quantized in Cooper pairs.

A shield state is a superposition of number states |psi_m> carrying m
excess Cooper pairs (charge 2m). In number state m the fluxon sees the
partially screened charge q + 2m, so one loop contributes the phase

    phi_m = 2 pi (q + 2m) flux,

and the one-loop phase factor is u1 = sum_m |b_m|^2 exp(i phi_m). Ideal
shielding on average requires sum_m m |b_m|^2 = -q/2.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np

from .classical_shield import config1_loop_phase
from .errors import EmptyGrid, NotNormalized
from .model import SC_FLUX_QUANTUM

NORM_TOL = 1e-12
SHIELDING_TOL = 1e-9


class ShieldingWarning(UserWarning):
    """The shield state does not satisfy the ideal-shielding constraint."""


@dataclass(frozen=True)
class ShieldState:
    """Amplitudes b_m over excess-Cooper-pair number states."""

    amplitudes: dict

    def __post_init__(self):
        amps = {}
        for m, b in dict(self.amplitudes).items():
            if int(m) != m:
                raise ValueError(f"number-state label {m!r} is not an integer")
            b = complex(b)
            if not np.isfinite(b):
                raise ValueError(f"amplitude for m={m} is not finite")
            amps[int(m)] = b
        if not amps:
            raise ValueError("a shield state needs at least one number state")
        object.__setattr__(self, "amplitudes", dict(sorted(amps.items())))

    @classmethod
    def from_probabilities(cls, probs: dict, phases: dict | None = None) -> ShieldState:
        phases = phases or {}
        return cls({m: np.sqrt(p) * np.exp(1j * phases.get(m, 0.0)) for m, p in probs.items()})

    @property
    def labels(self) -> np.ndarray:
        return np.array(list(self.amplitudes), dtype=np.int64)

    @property
    def probabilities(self) -> np.ndarray:
        return np.abs(np.array(list(self.amplitudes.values()))) ** 2

    @property
    def norm(self) -> float:
        return float(np.sum(self.probabilities))

    def check_normalized(self) -> None:
        if abs(self.norm - 1.0) > NORM_TOL:
            raise NotNormalized(f"sum |b_m|^2 = {self.norm!r}, expected 1")

    def mean_pairs(self) -> float:
        return float(np.sum(self.labels * self.probabilities))

    def rotated(self, angle: float) -> ShieldState:
        """Same state times a global phase."""
        f = np.exp(1j * angle)
        return ShieldState({m: b * f for m, b in self.amplitudes.items()})


@dataclass(frozen=True)
class ShieldingReport:
    mean_pairs: float
    mean_excess_charge: float
    target_pairs: float
    satisfies_ideal_shielding: bool


def check_shielding(state: ShieldState, q: float) -> ShieldingReport:
    """Compare sum_m m |b_m|^2 with -q/2 (tolerance 1e-9)."""
    state.check_normalized()
    mean = state.mean_pairs()
    target = -0.5 * q
    return ShieldingReport(
        mean_pairs=mean,
        mean_excess_charge=2.0 * mean,
        target_pairs=target,
        satisfies_ideal_shielding=bool(abs(mean - target) < SHIELDING_TOL),
    )


def pi_m(q: float, m: int, R: float, flux: float, phi: float = 0.0):
    """Field momentum in number state m at azimuth ``phi`` on a circle of radius R.

    Pi_m = -((q + 2m) flux / R) phi_hat; the minus sign makes the fluxon's
    accumulated phase -loop(Pi_m . dR) positive for counter-clockwise motion.
    """
    if not R > 0:
        raise ValueError("R must be positive")
    phi_hat = np.array([-np.sin(phi), np.cos(phi)])
    return -(q + 2 * m) * flux / R * phi_hat


def phase_m(q: float, m: int, flux: float) -> float:
    return 2 * np.pi * (q + 2 * m) * flux


def phase_factor_u1(state: ShieldState, q: float, flux: float) -> complex:
    """u1 = sum_m |b_m|^2 exp(i phi_m); |u1| is the fringe visibility."""
    state.check_normalized()
    if not check_shielding(state, q).satisfies_ideal_shielding:
        warnings.warn(
            "shield state violates the ideal-shielding constraint", ShieldingWarning, stacklevel=2
        )
    phases = 2 * np.pi * (q + 2 * state.labels) * flux
    return complex(np.sum(state.probabilities * np.exp(1j * phases)))


def config3_phase_factor(state: ShieldState, q: float, n: int) -> complex:
    """u1 with the flux quantized in superconducting quanta, flux = n/2."""
    return phase_factor_u1(state, q, n * SC_FLUX_QUANTUM)


def config1_phase(q: float, flux: float, m: int, **geometry) -> float:
    """One-orbit interaction phase with the flux inside the shield and m excess pairs."""
    return config1_loop_phase(q, flux, excess_pairs=m, **geometry)


def visibility_scan(state: ShieldState, q: float, flux_grid) -> list[tuple[float, float, float, float]]:
    """Rows (flux, Re u1, Im u1, |u1|) in grid order."""
    grid = [float(f) for f in flux_grid]
    if not grid:
        raise EmptyGrid("flux grid is empty")
    rows = []
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", ShieldingWarning)
        for f in grid:
            u = phase_factor_u1(state, q, f)
            rows.append((f, u.real, u.imag, abs(u)))
    return rows


def random_shielding_state(rng: np.random.Generator, q: float, m_max: int = 5) -> ShieldState:
    """Random normalized state obeying sum_m m |b_m|^2 = -q/2, with random phases.

    Requires |q/2| < m_max. A Dirichlet draw over -m_max..m_max is mixed
    with a point mass at one end of the support to hit the target mean.
    """
    target = -0.5 * q
    if not -m_max < target < m_max:
        raise ValueError("target mean outside the support")
    labels = np.arange(-m_max, m_max + 1)
    p = rng.dirichlet(np.ones(labels.size))
    mu = float(labels @ p)
    end = -m_max if mu > target else m_max
    lam = (target - end) / (mu - end)
    p = lam * p
    p[labels == end] += 1.0 - lam
    p /= p.sum()
    # remove the rounding left in the mean by adjusting the two end states
    err = float(labels @ p) - target
    shift = err / (2 * m_max)
    p[0] += shift
    p[-1] -= shift
    phases = rng.uniform(0, 2 * np.pi, labels.size)
    return ShieldState.from_probabilities(dict(zip(labels.tolist(), p)), dict(zip(labels.tolist(), phases)))

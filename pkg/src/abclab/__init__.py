"""Numerical laboratory for the charge-fluxon (Aharonov-Bohm / Aharonov-Casher) interaction."""

from .model import ChargeState, FluxonState, Trajectory, make_circular_trajectory, winding_number

__all__ = [
    "ChargeState",
    "FluxonState",
    "Trajectory",
    "make_circular_trajectory",
    "winding_number",
]

__version__ = "0.1.0"

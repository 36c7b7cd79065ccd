"""Named experiments run by the command line driver.

Each runner takes a validated :class:`~abclab.config.ScenarioConfig` and returns
``(header, rows, checks, scalars)``. A check is ``(passed, value, tolerance)``.
"""

from __future__ import annotations

import numpy as np

from . import classical_shield as cs
from . import dynamics, fields2d, phases, quantum_shield as qs
from .model import ChargeState, FluxonState, Trajectory, make_circular_trajectory, winding_number


def _check(value: float, tol: float):
    value = float(value)
    return {"passed": bool(value < tol), "value": value, "tolerance": tol}


def star_loop(center, base_radius: float, amps, offsets, turns: int, n_samples: int):
    """Closed star-shaped loop r(theta) = R0 (1 + sum a_k cos(k theta + o_k)), k = 2, 3, ...

    ``turns`` may be negative (clockwise). ``n_samples`` is per turn.
    """
    n = n_samples * abs(turns)
    theta = np.sign(turns) * np.linspace(0.0, 2 * np.pi * abs(turns), n + 1)
    k = np.arange(2, 2 + len(amps))
    r = base_radius * (1.0 + np.cos(np.outer(theta, k) + offsets) @ amps)
    pts = np.asarray(center) + r[:, None] * np.column_stack([np.cos(theta), np.sin(theta)])
    pts[-1] = pts[0]
    return pts


def random_loop(rng: np.random.Generator, n_samples: int, core_radius: float):
    """Random star-shaped loop and its winding about the origin.

    About one trial in five the loop is displaced so it does not enclose the origin.
    """
    turns = int(rng.choice([-2, -1, 1, 2]))
    amps = rng.uniform(0.0, 0.08, 3)
    offsets = rng.uniform(0.0, 2 * np.pi, 3)
    base = rng.uniform(0.5, 2.0)
    if rng.uniform() < 0.2:
        ang = rng.uniform(0, 2 * np.pi)
        center = (base * 1.5 + rng.uniform(0.2, 1.0)) * np.array([np.cos(ang), np.sin(ang)])
        expected = 0
    else:
        center = rng.uniform(-0.2, 0.2, 2) * base
        expected = turns
    return star_loop(center, base, amps, offsets, turns, n_samples), expected


def duality_trial(rng, q: float, flux: float, n_samples: int, core_radius: float):
    """Phases of one random geometry by all three methods."""
    loop, expected = random_loop(rng, n_samples, core_radius)
    t = np.arange(len(loop), dtype=np.float64)
    fluxon = FluxonState([0.0, 0.0], flux=flux, core_radius=core_radius)
    charge = ChargeState([0.0, 0.0], charge=q)

    vp = phases.phase_vector_potential(Trajectory(t, loop, True), fluxon, q)
    dual = phases.phase_dual_electric(Trajectory(t, -loop, True), charge, flux, core_radius=core_radius)

    # general frame: the fluxon drifts on a closed Lissajous curve, the charge follows it
    s = np.linspace(0.0, 2 * np.pi, len(loop))
    drift = rng.uniform(-3, 3, 2) + rng.uniform(0.1, 1.0) * np.column_stack([np.sin(s), np.sin(2 * s)])
    drift[-1] = drift[0]
    charge_path = drift + loop
    charge_path[-1] = charge_path[0]
    pim = phases.phase_field_momentum(
        Trajectory(t, charge_path, True), Trajectory(t, drift, True), q, flux, core_radius=core_radius
    )
    winding = winding_number(Trajectory(t, loop, True), [0.0, 0.0])
    return {
        "winding": winding,
        "expected_winding": expected,
        "vector_potential": vp.phase,
        "dual_electric": dual.phase,
        "field_momentum": pim.phase,
        "expected": 2 * np.pi * winding * q * flux,
    }


def run_duality(cfg):
    rng = np.random.default_rng(cfg.seed)
    p = cfg.physics
    header = [
        "trial", "winding", "charge", "flux",
        "phase_vector_potential", "phase_dual_electric", "phase_field_momentum", "expected",
    ]
    rows = []
    worst_pair = 0.0
    worst_expected = 0.0
    for i in range(cfg.trials):
        if p["randomize"]:
            q = float(rng.uniform(-2.0, 2.0))
            flux = float(rng.uniform(-1.5, 1.5))
        else:
            q, flux = p["charge"], p["flux"]
        r = duality_trial(rng, q, flux, cfg.numerics["n_samples"], p["core_radius"])
        trio = [r["vector_potential"], r["dual_electric"], r["field_momentum"]]
        worst_pair = max(worst_pair, max(trio) - min(trio))
        worst_expected = max(worst_expected, max(abs(x - r["expected"]) for x in trio))
        rows.append([i, r["winding"], q, flux, *trio, r["expected"]])
    checks = {
        "methods_agree": _check(worst_pair, 1e-6),
        "matches_winding_formula": _check(worst_expected, 1e-6),
    }
    return header, rows, checks, {"max_pairwise_difference": worst_pair, "max_error": worst_expected}


def run_scatter(cfg):
    p, nm = cfg.physics, cfg.numerics
    state = dynamics.scattering_state(
        p["impact_parameter"], p["speed"], p["core_radius"], p["flux"],
        charge=p["charge"], start_distance=p["start_distance"],
    )
    dt = nm["dt"]
    n_steps = nm["n_steps"] or int(round(2 * p["start_distance"] / (p["speed"] * dt)))
    res = dynamics.integrate(state, dt, n_steps)
    header = ["t", "x", "y", "vx", "vy", "X", "Y", "VX", "VY"]
    stride = max(1, n_steps // 200)
    rows = [
        [s.time, *s.charge.position, *s.charge.velocity, *s.fluxon.position, *s.fluxon.velocity]
        for s in res.states[::stride]
    ]
    checks = {
        "deflection": _check(res.deflection_angle, 1e-6),
        "energy_drift": _check(res.energy_drift, 1e-10),
        "momentum_drift": _check(res.momentum_drift, 1e-10),
    }
    scalars = {
        "deflection_angle": res.deflection_angle,
        "energy_drift": res.energy_drift,
        "momentum_drift": res.momentum_drift,
    }
    return header, rows, checks, scalars


def run_shield_classical(cfg):
    p, nm = cfg.physics, cfg.numerics
    shield = cs.CircularShield([0.0, 0.0], p["shield_radius"])
    charge = ChargeState([p["orbit_radius"], 0.0], charge=p["charge"])
    dens = cs.surface_density(charge, shield, nm["nodes"])
    header = ["x", "y", "abs_net_field", "abs_unshielded_field", "ratio"]
    rows = []
    worst = 0.0
    for frac in (0.0, 0.25, 0.5):
        for ang in np.linspace(0.0, 2 * np.pi, 8, endpoint=False):
            x = frac * p["shield_radius"] * np.array([np.cos(ang), np.sin(ang)])
            e_net = float(np.hypot(*cs.shielded_field(charge, shield, dens, x)))
            e_q = float(np.hypot(*fields2d.e_field_charge(charge, x)))
            worst = max(worst, e_net / e_q)
            rows.append([x[0], x[1], e_net, e_q, e_net / e_q])
            if frac == 0.0:
                break
    fluxon = FluxonState([0.0, 0.0], flux=p["flux"], core_radius=p["core_radius"])
    loop = make_circular_trajectory([0.0, 0.0], p["orbit_radius"], 0.01, nm["n_samples"])
    phase = cs.classical_abc_phase(loop, fluxon, shield, p["charge"], n_nodes=nm["nodes"])
    bare = cs.classical_abc_phase(loop, fluxon, shield, p["charge"], shielded=False)
    checks = {
        "interior_field_ratio": _check(worst, 1e-8),
        "abc_phase": _check(abs(phase), 1e-6),
    }
    return header, rows, checks, {"abc_phase": phase, "unshielded_phase": bare, "max_field_ratio": worst}


def run_config1(cfg):
    rng = np.random.default_rng(cfg.seed)
    p, nm = cfg.physics, cfg.numerics
    header = ["trial", "charge", "flux", "phidot", "orbit_radius", "shield_radius", "term1", "term2", "sum"]
    rows = []
    worst = 0.0
    for i in range(cfg.trials):
        q = float(rng.uniform(-3, 3))
        flux = float(rng.uniform(-2, 2))
        R = float(rng.uniform(0.3, 2.0))
        r = R * float(rng.uniform(1.1, 3.0))
        phidot = float(rng.uniform(-1, 1)) * 0.09 / r
        ang = float(rng.uniform(0, 2 * np.pi))
        pos = r * np.array([np.cos(ang), np.sin(ang)])
        vel = r * phidot * np.array([-np.sin(ang), np.cos(ang)])
        t1, t2 = cs.config1_lagrangian_terms(
            ChargeState(pos, vel, charge=q),
            FluxonState([0.0, 0.0], flux=flux, core_radius=1e-3 * R),
            cs.CircularShield([0.0, 0.0], R),
            n_nodes=nm["nodes"],
        )
        worst = max(worst, abs(t1 + t2))
        rows.append([i, q, flux, phidot, r, R, t1, t2, t1 + t2])
    m_phases = {
        m: qs.config1_phase(p["charge"], p["flux"], m, shield_radius=p["shield_radius"],
                            orbit_radius=p["orbit_radius"], n_nodes=nm["nodes"])
        for m in p["excess_pairs"]
    }
    worst_m = max(abs(v) for v in m_phases.values())
    checks = {
        "term_cancellation": _check(worst, 1e-8),
        "phase_vanishes_for_all_m": _check(worst_m, 1e-8),
    }
    scalars = {"max_abs_term_sum": worst, "max_abs_phase": worst_m}
    scalars.update({f"phase_m{m}": v for m, v in m_phases.items()})
    return header, rows, checks, scalars


def _state_rows(state):
    return [
        [m, b.real, b.imag, abs(b) ** 2]
        for m, b in state.amplitudes.items()
    ]


def run_config2(cfg):
    p = cfg.physics
    state = p["state"]
    report = qs.check_shielding(state, p["charge"])
    u1 = qs.phase_factor_u1(state, p["charge"], p["flux"])
    header = ["m", "re_b", "im_b", "probability", "phase_m"]
    rows = [r + [qs.phase_m(p["charge"], r[0], p["flux"])] for r in _state_rows(state)]
    checks = {
        "ideal_shielding": _check(abs(report.mean_pairs - report.target_pairs), qs.SHIELDING_TOL),
    }
    scalars = {
        "re_u1": u1.real, "im_u1": u1.imag, "visibility": abs(u1),
        "mean_pairs": report.mean_pairs, "target_pairs": report.target_pairs,
    }
    return header, rows, checks, scalars


def run_config3(cfg):
    p = cfg.physics
    state = p["state"]
    if state is None:
        state = qs.random_shielding_state(np.random.default_rng(cfg.seed), p["charge"])
    n = p["flux_quantum_number"]
    u1 = qs.config3_phase_factor(state, p["charge"], n)
    expected = np.exp(1j * np.pi * p["charge"] * n)
    header = ["m", "re_b", "im_b", "probability"]
    rows = _state_rows(state)
    checks = {"flux_quantized_invariance": _check(abs(u1 - expected), 1e-12)}
    scalars = {
        "re_u1": u1.real, "im_u1": u1.imag,
        "re_expected": expected.real, "im_expected": expected.imag,
    }
    return header, rows, checks, scalars


def run_fringe_scan(cfg):
    p = cfg.physics
    state, q = p["state"], p["charge"]
    rows = [list(r) for r in qs.visibility_scan(state, q, p["flux_grid"])]
    header = ["flux", "re_u1", "im_u1", "abs_u1"]
    over = max(0.0, max(r[3] for r in rows) - 1.0)
    worst_q = 0.0
    for f, re, im, _ in rows:
        n = 2 * f
        if abs(n - round(n)) < 1e-12:
            worst_q = max(worst_q, abs(complex(re, im) - np.exp(1j * np.pi * q * round(n))))
    checks = {
        "visibility_bounded": _check(over, 1e-12),
        "quantized_flux_points": _check(worst_q, 1e-12),
    }
    scalars = {"min_visibility": min(r[3] for r in rows), "max_visibility": max(r[3] for r in rows)}
    return header, rows, checks, scalars


RUNNERS = {
    "duality": run_duality,
    "scatter": run_scatter,
    "shield-classical": run_shield_classical,
    "config1": run_config1,
    "config2": run_config2,
    "config3": run_config3,
    "fringe-scan": run_fringe_scan,
}

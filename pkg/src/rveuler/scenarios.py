"""Scenario runners behind the CLI verbs.

Each runner takes a validated :class:`~rveuler.config.ScenarioConfig` and
returns a :class:`RunReport`; :func:`write_report` turns a report into
CSV series plus ``summary.json``.
"""

from __future__ import annotations

import csv
import functools
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .aero import AeroModel, PiecewiseLinear
from .config import ScenarioConfig
from .conversion import (
    CartesianState,
    InitPolicy,
    cartesian_from_rv_euler,
    cartesian_from_spherical,
    rotation_about_position,
    rv_euler_from_cartesian,
    rv_euler_position_velocity,
    spherical_from_cartesian,
    spherical_position_velocity,
)
from .dynamics import ObservationFrame, RvEulerState, RvEulerSystem, entry_force_provider, two_body_force_provider
from .errors import ConfigError, InvalidInputError, PropagationError
from .euler_params import EulerParams
from .propagation import (
    ConvergenceStudy,
    OrbitOracleParams,
    analytic_circular_orbit,
    convergence_study,
    position_error_series,
    rk4_propagate,
)
from .spherical import SphericalState, TwoBodySphericalSystem

TRAJECTORY_COLUMNS = (
    "t", "r", "v", "eA1", "eA2", "eA3", "etaA", "eB1", "eB2", "eB3", "etaB",
    "x", "y", "z", "vx", "vy", "vz",
)
SPHERICAL_COLUMNS = ("t", "r", "phi", "theta", "v", "gamma", "psi", "x", "y", "z", "vx", "vy", "vz")
ERROR_COLUMNS = ("t", "e_r")
CONSTRAINT_COLUMNS = ("t", "aero_load", "q", "alpha", "sigma")
DIFFERENCE_COLUMNS = ("t", "dx", "dy", "dz", "d")
CONVERGENCE_COLUMNS = ("N", "e_r_max_rv_euler", "e_r_max_spherical", "ratio")


@dataclass
class LegResult:
    formulation: str
    times: np.ndarray
    states: np.ndarray
    positions: np.ndarray
    velocities: np.ndarray
    error: np.ndarray | None = None

    @property
    def e_r_max(self) -> float | None:
        return None if self.error is None else float(np.max(self.error))


@dataclass
class Abort:
    formulation: str
    time: float
    message: str


@dataclass
class RunReport:
    scenario: str
    legs: dict[str, LegResult] = field(default_factory=dict)
    aborts: list[Abort] = field(default_factory=list)
    constraints: dict[str, np.ndarray] | None = None
    difference: np.ndarray | None = None  # (n, 3) leg0 - leg1 positions
    study: ConvergenceStudy | None = None
    diagnostics: dict = field(default_factory=dict)


# --- initial state -------------------------------------------------------


def _policy(cfg: ScenarioConfig, r_vec) -> InitPolicy:
    p = cfg.initial.policy
    if p.kind == "h_aligned":
        return InitPolicy.h_aligned()
    if p.seed_angle is not None:
        return InitPolicy.custom(rotation_about_position(r_vec, math.radians(p.seed_angle)))
    try:
        return InitPolicy.custom(np.array(p.c_ae))
    except InvalidInputError as exc:
        raise ConfigError("initial.policy.c_ae", str(exc)) from exc


def _spherical_input(cfg: ScenarioConfig) -> SphericalState:
    s = cfg.initial.spherical
    v = math.sqrt(cfg.constants.mu / s["r"]) if s["v"] == "circular" else s["v"]
    return SphericalState(
        s["r"], math.radians(s["phi"]), math.radians(s["theta"]), v, math.radians(s["gamma"]), math.radians(s["psi"])
    )


def _rv_euler_input(cfg: ScenarioConfig) -> RvEulerState:
    d = cfg.initial.rv_euler
    state = RvEulerState(d["r"], EulerParams(*d["ep_a"]), d["v"], EulerParams(*d["ep_b"]))
    for key, ep in (("ep_a", state.ep_a), ("ep_b", state.ep_b)):
        if abs(ep.norm - 1.0) > 1e-6:
            raise ConfigError(f"initial.rv_euler.{key}", f"not unit norm (|ep| = {ep.norm:.12g})")
    return state


def initial_cartesian(cfg: ScenarioConfig) -> CartesianState:
    init = cfg.initial
    try:
        if init.spherical is not None:
            return cartesian_from_spherical(_spherical_input(cfg))
        if init.cartesian is not None:
            return CartesianState(init.cartesian["r_vec"], init.cartesian["v_vec"])
        return cartesian_from_rv_euler(_rv_euler_input(cfg))
    except InvalidInputError as exc:
        raise ConfigError("initial", str(exc)) from exc


def initial_rv_euler(cfg: ScenarioConfig) -> RvEulerState:
    if cfg.initial.rv_euler is not None and cfg.initial.policy.kind == "h_aligned":
        return _rv_euler_input(cfg)
    cart = initial_cartesian(cfg)
    try:
        return rv_euler_from_cartesian(cart, _policy(cfg, cart.r_vec))
    except InvalidInputError as exc:
        raise ConfigError("initial", str(exc)) from exc


def initial_spherical(cfg: ScenarioConfig) -> SphericalState:
    if cfg.initial.spherical is not None:
        return _spherical_input(cfg)
    try:
        return spherical_from_cartesian(initial_cartesian(cfg))
    except InvalidInputError as exc:
        raise ConfigError("initial", str(exc)) from exc


def final_time(cfg: ScenarioConfig) -> float:
    """Configured end time; ``"period"`` means one Keplerian period of the initial state."""
    tf = cfg.integrator.tf
    if tf != "period":
        return float(tf)
    c = initial_cartesian(cfg)
    mu = cfg.constants.mu
    inv_a = 2.0 / np.linalg.norm(c.r_vec) - (c.v_vec @ c.v_vec) / mu
    if not inv_a > 0.0:
        raise ConfigError("integrator.tf", "initial state is not bound; give a numeric tf")
    return cfg.integrator.t0 + 2.0 * math.pi * math.sqrt(inv_a**-3 / mu)


def orbit_oracle(cfg: ScenarioConfig) -> OrbitOracleParams | None:
    c = initial_cartesian(cfg)
    if cfg.integrator.t0 != 0.0:
        return None
    try:
        return OrbitOracleParams.from_initial_state(c.r_vec, c.v_vec, cfg.constants.mu)
    except InvalidInputError:
        return None


# --- legs ----------------------------------------------------------------


def _rv_leg(traj, formulation="rv-euler") -> LegResult:
    pv = [rv_euler_position_velocity(y) for y in traj.states]
    return LegResult(formulation, traj.times, traj.states, np.array([p for p, _ in pv]), np.array([v for _, v in pv]))


def _spherical_leg(traj) -> LegResult:
    pv = [spherical_position_velocity(y) for y in traj.states]
    return LegResult("spherical", traj.times, traj.states, np.array([p for p, _ in pv]), np.array([v for _, v in pv]))


def propagate_two_body(cfg: ScenarioConfig, formulation: str, n_steps: int) -> LegResult:
    """One inertial two-body leg; raises :class:`PropagationError` on a singularity."""
    t0, tf = cfg.integrator.t0, final_time(cfg)
    mu = cfg.constants.mu
    if formulation == "rv-euler":
        y0 = initial_rv_euler(cfg).to_array()
        traj = rk4_propagate(RvEulerSystem(two_body_force_provider(mu)), y0, t0, tf, n_steps, cfg.integrator.renormalize)
        leg = _rv_leg(traj)
    elif formulation == "spherical":
        y0 = initial_spherical(cfg).to_array()
        leg = _spherical_leg(rk4_propagate(TwoBodySphericalSystem(mu), y0, t0, tf, n_steps))
    else:
        raise ConfigError("formulation", f"unknown formulation {formulation!r}")
    oracle = orbit_oracle(cfg)
    if oracle is not None:
        leg.error, _ = position_error_series(leg.positions, analytic_circular_orbit(leg.times, oracle))
    return leg


def _formulations(cfg: ScenarioConfig) -> list[str]:
    return ["rv-euler", "spherical"] if cfg.formulation == "both" else [cfg.formulation]


def run_orbit(cfg: ScenarioConfig) -> RunReport:
    report = RunReport("orbit")
    for f in _formulations(cfg):
        try:
            report.legs[f] = propagate_two_body(cfg, f, cfg.integrator.steps)
        except PropagationError as exc:
            report.aborts.append(Abort(f, exc.time, str(exc.cause)))
    report.diagnostics["tf"] = final_time(cfg)
    report.diagnostics["steps"] = cfg.integrator.steps
    for f, leg in report.legs.items():
        if leg.e_r_max is not None:
            report.diagnostics[f"e_r_max_{f.replace('-', '_')}"] = leg.e_r_max
    return report


def _orbit_row(cfg: ScenarioConfig, formulation: str, n: int) -> float:
    leg = propagate_two_body(cfg, formulation, n)
    if leg.error is None:
        raise ConfigError("initial", "convergence study needs a circular orbit starting on +e1")
    return leg.e_r_max


def run_convergence(cfg: ScenarioConfig) -> RunReport:
    if orbit_oracle(cfg) is None:
        raise ConfigError("initial", "convergence study needs a circular orbit starting on +e1 (analytic oracle)")
    ns = cfg.integrator.step_list or [cfg.integrator.steps]
    study = convergence_study(functools.partial(_orbit_row, cfg), _formulations(cfg), ns, cfg.integrator.workers)
    report = RunReport("convergence", study=study)
    for row in study.rows:
        if not row.ok:
            report.aborts.append(Abort(row.formulation, math.nan, f"N={row.n_steps}: {row.error}"))
    return report


def convergence_table(study: ConvergenceStudy) -> list[tuple]:
    """Rows ``(N, e_rv, e_sph, e_sph / e_rv)``; missing entries are ``nan``."""
    rv, sph = study.errors("rv-euler"), study.errors("spherical")
    rows = []
    for n in sorted({row.n_steps for row in study.rows}):
        a, b = rv.get(n, math.nan), sph.get(n, math.nan)
        rows.append((n, a, b, b / a if a > 0.0 else math.nan))
    return rows


def run_compare(cfg: ScenarioConfig) -> RunReport:
    legs = cfg.compare.legs if cfg.compare else ["rv-euler", "spherical"]
    report = RunReport("compare")
    results = []
    for f in legs:
        try:
            results.append(propagate_two_body(cfg, f, cfg.integrator.steps))
        except PropagationError as exc:
            report.aborts.append(Abort(f, exc.time, str(exc.cause)))
    for leg in results:
        # both legs may use the same formulation
        key = leg.formulation if leg.formulation not in report.legs else f"{leg.formulation}-2"
        report.legs[key] = leg
    if len(results) == 2:
        report.difference = results[0].positions - results[1].positions
        report.diagnostics["max_difference"] = float(np.max(np.linalg.norm(report.difference, axis=1)))
    report.diagnostics["legs"] = list(legs)
    return report


# --- entry ---------------------------------------------------------------


def entry_model(cfg: ScenarioConfig) -> tuple[AeroModel, PiecewiseLinear, PiecewiseLinear]:
    e = cfg.entry
    aero = AeroModel(
        cl_alpha=e.cl_alpha,
        cd0=e.cd0,
        k_induced=e.k_induced,
        reference_area=e.reference_area_m2 * 1e-6,
        rho0=e.rho0_kg_m3 * 1e9,
        scale_height=e.scale_height,
        r_ref=cfg.constants.r_e,
        h_floor=e.h_floor,
    )
    alpha = PiecewiseLinear(tuple(e.alpha.times), tuple(math.radians(x) for x in e.alpha.values))
    sigma = PiecewiseLinear(tuple(e.sigma.times), tuple(math.radians(x) for x in e.sigma.values))
    return aero, alpha, sigma


def terminal_residuals(state: RvEulerState, longitude: float, latitude: float) -> tuple[float, float, float]:
    """Residuals of the target-position endpoint conditions (angles in rad).

    The first row of ``C_AE`` is the position direction; it must match the
    direction to the target longitude/latitude.
    """
    a = state.ep_a
    a1 = (
        1.0 - 2.0 * (a.e2**2 + a.e3**2),
        2.0 * (a.e1 * a.e2 + a.e3 * a.eta),
        2.0 * (a.e1 * a.e3 - a.e2 * a.eta),
    )
    target = (
        math.cos(latitude) * math.cos(longitude),
        math.cos(latitude) * math.sin(longitude),
        math.sin(latitude),
    )
    return tuple(x - y for x, y in zip(a1, target))


def run_entry(cfg: ScenarioConfig) -> RunReport:
    if cfg.formulation != "rv-euler":
        raise ConfigError("formulation", "the entry scenario is only available in the rv-euler formulation")
    e = cfg.entry
    tf = final_time(cfg)
    t0 = cfg.integrator.t0
    aero, alpha, sigma = entry_model(cfg)
    for name, prof in (("alpha", alpha), ("sigma", sigma)):
        if not prof.covers(t0, tf):
            raise ConfigError(f"entry.{name}", "profile does not cover the simulation interval")
    mu = cfg.constants.mu
    system = RvEulerSystem(
        entry_force_provider(aero, mu, alpha, sigma),
        ObservationFrame.rotating(cfg.constants.omega_e),
        mass=e.mass,
        v_min=e.v_min,
    )
    report = RunReport("entry")
    y0 = initial_rv_euler(cfg).to_array()
    try:
        traj = rk4_propagate(system, y0, t0, tf, cfg.integrator.steps, cfg.integrator.renormalize)
    except PropagationError as exc:
        report.aborts.append(Abort("rv-euler", exc.time, str(exc.cause)))
        return report
    leg = _rv_leg(traj)
    report.legs["rv-euler"] = leg

    n = len(traj.times)
    aero_load, q_pa = np.empty(n), np.empty(n)
    alphas = np.array([alpha(t) for t in traj.times])
    sigmas = np.array([sigma(t) for t in traj.times])
    for k, y in enumerate(traj.states):
        lift, drag = aero.lift_drag(y[0], y[5], alphas[k])
        aero_load[k] = math.hypot(lift, drag) / e.mass
        q_pa[k] = aero.dynamic_pressure(y[0], y[5]) * 1e-3
    report.constraints = {
        "aero_load": aero_load,
        "q": q_pa,
        "alpha": np.degrees(alphas),
        "sigma": np.degrees(sigmas),
    }
    lim = e.limits
    alpha_rate = np.array([abs(alpha.rate(t)) for t in traj.times])
    sigma_rate = np.array([abs(sigma.rate(t)) for t in traj.times])
    alpha_deg = np.degrees(alphas)
    report.diagnostics["max_violation"] = {
        "aero_load": float(max(0.0, np.max(aero_load - lim.aero_load_max))),
        "q_min": float(max(0.0, np.max(lim.q_min - q_pa))),
        "alpha_min": float(max(0.0, np.max(-alpha_deg))),
        "alpha_max": float(max(0.0, np.max(alpha_deg - lim.alpha_max))),
        "alpha_rate": float(max(0.0, np.max(np.degrees(alpha_rate) - lim.alpha_rate_max))),
        "sigma_rate": float(max(0.0, np.max(np.degrees(sigma_rate) - lim.sigma_rate_max))),
    }
    final = RvEulerState.from_array(traj.states[-1])
    sin_gamma = 1.0 - 2.0 * (traj.states[:, 7] ** 2 + traj.states[:, 8] ** 2)
    report.diagnostics["terminal"] = {
        "t": float(traj.times[-1]),
        "altitude": final.r - cfg.constants.r_e,
        "v": final.v,
        "eB1": final.ep_b.e1,
        "etaB": final.ep_b.eta,
        "altitude_residual": final.r - cfg.constants.r_e,
        "speed_residual": final.v - e.target_speed,
        "position_residuals": list(
            terminal_residuals(final, math.radians(e.target_longitude), math.radians(e.target_latitude))
        ),
    }
    report.diagnostics["min_flight_path_angle_deg"] = float(np.degrees(np.arcsin(np.clip(sin_gamma.min(), -1, 1))))
    report.diagnostics["min_abs_etaB"] = float(np.min(np.abs(traj.states[:, 9])))
    return report


RUNNERS = {"orbit": run_orbit, "convergence": run_convergence, "entry": run_entry, "compare": run_compare}


def run_scenario(cfg: ScenarioConfig) -> RunReport:
    return RUNNERS[cfg.scenario](cfg)


# --- output --------------------------------------------------------------


def _write_csv(path: Path, header, rows) -> None:
    with path.open("w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(header)
        for row in rows:
            w.writerow([repr(float(x)) if not isinstance(x, (int, np.integer)) else int(x) for x in row])


def _suffix(name: str) -> str:
    return "" if name == "rv-euler" else "_" + name.replace("-", "_")


def _jsonable(obj):
    if isinstance(obj, dict):
        return {k: _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (float, np.floating)):
        return float(obj) if math.isfinite(obj) else None
    if isinstance(obj, np.integer):
        return int(obj)
    return obj


def write_report(report: RunReport, out_dir: str | Path) -> list[Path]:
    """Write every series of ``report`` into ``out_dir``; returns the paths written."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    written = []
    for name, leg in report.legs.items():
        if leg.formulation == "rv-euler":
            path = out / f"trajectory{_suffix(name)}.csv"
            s = leg.states
            rows = np.column_stack([leg.times, s[:, 0], s[:, 5], s[:, 1:5], s[:, 6:10], leg.positions, leg.velocities])
            _write_csv(path, TRAJECTORY_COLUMNS, rows)
        else:
            path = out / f"trajectory{_suffix(name)}.csv"
            s = leg.states
            deg = np.degrees
            rows = np.column_stack([
                leg.times, s[:, 0], deg(s[:, 1]), deg(s[:, 2]), s[:, 3], deg(s[:, 4]), deg(s[:, 5]),
                leg.positions, leg.velocities,
            ])
            _write_csv(path, SPHERICAL_COLUMNS, rows)
        written.append(path)
        if leg.error is not None:
            path = out / f"error{_suffix(name)}.csv"
            _write_csv(path, ERROR_COLUMNS, np.column_stack([leg.times, leg.error]))
            written.append(path)
    if report.constraints is not None:
        leg = report.legs["rv-euler"]
        c = report.constraints
        path = out / "constraints.csv"
        _write_csv(path, CONSTRAINT_COLUMNS, np.column_stack([leg.times, c["aero_load"], c["q"], c["alpha"], c["sigma"]]))
        written.append(path)
    if report.difference is not None:
        times = next(iter(report.legs.values())).times
        d = report.difference
        path = out / "difference.csv"
        _write_csv(path, DIFFERENCE_COLUMNS, np.column_stack([times, d, np.linalg.norm(d, axis=1)]))
        written.append(path)
    if report.study is not None:
        path = out / "convergence.csv"
        _write_csv(path, CONVERGENCE_COLUMNS, convergence_table(report.study))
        written.append(path)

    summary = {
        "scenario": report.scenario,
        "diagnostics": report.diagnostics,
        "aborts": [{"formulation": a.formulation, "time": a.time, "message": a.message} for a in report.aborts],
        "rows": {name: len(leg.times) for name, leg in report.legs.items()},
    }
    if report.study is not None:
        summary["study"] = [
            {"formulation": r.formulation, "N": r.n_steps, "e_r_max": r.e_r_max, "error": r.error or None}
            for r in report.study.rows
        ]
    path = out / "summary.json"
    path.write_text(json.dumps(_jsonable(summary), indent=2, sort_keys=True) + "\n")
    written.append(path)
    return written

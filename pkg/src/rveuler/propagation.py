"""Fixed-step RK4 propagation, the circular-orbit oracle and error metrics."""

from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable, Sequence

import numpy as np

from . import constants
from .errors import InvalidInputError, PropagationError, RvEulerError

Derivative = Callable[[float, np.ndarray], np.ndarray]


@dataclass
class Trajectory:
    """Uniformly sampled solution: ``times[k] = t0 + k h``, ``states[k]``."""

    times: np.ndarray
    states: np.ndarray
    positions: np.ndarray | None = None  # Cartesian, E basis, filled by callers

    def __len__(self):
        return len(self.times)


def _normalize_blocks(y: np.ndarray, quat_slices) -> None:
    for s in quat_slices:
        y[s] /= np.linalg.norm(y[s])


def rk4_propagate(
    deriv: Derivative,
    y0,
    t0: float,
    tf: float,
    n_steps: int,
    renormalize: bool = False,
    quat_slices: Sequence[slice] | None = None,
) -> Trajectory:
    """Classical fourth-order Runge-Kutta with constant step ``(tf - t0) / n_steps``.

    With ``renormalize`` the quaternion blocks named by ``quat_slices``
    (default: ``deriv.quat_slices``) are rescaled to unit norm after every
    step.  A failing derivative evaluation is re-raised as
    :class:`PropagationError` carrying the step start time.

    Increments are accumulated with compensated (Kahan) summation so that
    slowly varying components such as longitude do not pick up roundoff
    bias over long runs.
    """
    if n_steps < 1:
        raise InvalidInputError("n_steps must be at least 1")
    if quat_slices is None:
        quat_slices = getattr(deriv, "quat_slices", ())
    if renormalize and not quat_slices:
        raise InvalidInputError("renormalize requested but no quaternion blocks were given")

    y = np.array(y0, dtype=float)
    h = (tf - t0) / n_steps
    times = t0 + h * np.arange(n_steps + 1)
    times[-1] = tf
    out = np.empty((n_steps + 1, y.size))
    out[0] = y
    comp = np.zeros_like(y)
    for k in range(n_steps):
        t = times[k]
        try:
            k1 = deriv(t, y)
            k2 = deriv(t + 0.5 * h, y + (0.5 * h) * k1)
            k3 = deriv(t + 0.5 * h, y + (0.5 * h) * k2)
            k4 = deriv(t + h, y + h * k3)
        except RvEulerError as exc:
            raise PropagationError(float(t), exc) from exc
        z = (h / 6.0) * (k1 + 2.0 * (k2 + k3) + k4) - comp
        y_new = y + z
        if not np.all(np.isfinite(y_new)):
            raise PropagationError(float(t), ArithmeticError("non-finite state after step"))
        comp = (y_new - y) - z
        y = y_new
        if renormalize:
            _normalize_blocks(y, quat_slices)
            for s in quat_slices:
                comp[s] = 0.0
        out[k + 1] = y
    return Trajectory(times, out)


@dataclass(frozen=True)
class OrbitOracleParams:
    """Circular orbit starting on e1 whose plane is tilted by ``inclination`` about e1."""

    radius: float  # km
    period: float  # s
    inclination: float  # rad

    def __post_init__(self):
        if not (self.radius > 0.0 and self.period > 0.0):
            raise InvalidInputError("radius and period must be positive")

    @classmethod
    def circular(cls, radius: float, inclination: float, mu: float = constants.MU_EARTH) -> OrbitOracleParams:
        return cls(radius, 2.0 * math.pi * math.sqrt(radius**3 / mu), inclination)

    @classmethod
    def from_initial_state(cls, r_vec, v_vec, mu: float = constants.MU_EARTH, tol: float = 1e-9) -> OrbitOracleParams:
        """Fit the oracle to a Cartesian initial condition.

        Only circular orbits with the initial position on +e1 fit.
        """
        r_vec = np.asarray(r_vec, dtype=float)
        v_vec = np.asarray(v_vec, dtype=float)
        radius = float(np.linalg.norm(r_vec))
        if abs(r_vec[1]) > tol * radius or abs(r_vec[2]) > tol * radius or r_vec[0] <= 0.0:
            raise InvalidInputError("oracle needs the initial position on +e1")
        v = float(np.linalg.norm(v_vec))
        if abs(v_vec[0]) > tol * v or abs(v - math.sqrt(mu / radius)) > tol * v:
            raise InvalidInputError("oracle needs a circular initial velocity")
        return cls.circular(radius, math.atan2(-v_vec[2], v_vec[1]), mu)


def analytic_circular_orbit(t, p: OrbitOracleParams) -> np.ndarray:
    """Oracle position (km, E basis) at time(s) ``t``; shape ``(3,)`` or ``(n, 3)``."""
    t = np.asarray(t, dtype=float)
    u = 2.0 * math.pi * t / p.period
    c, s = np.cos(u), np.sin(u)
    ci, si = math.cos(p.inclination), math.sin(p.inclination)
    return p.radius * np.stack([c, s * ci, -s * si], axis=-1)


def position_error_series(positions, oracle_positions) -> tuple[np.ndarray, float]:
    """Euclidean position error per sample and its maximum."""
    e = np.linalg.norm(np.asarray(positions) - np.asarray(oracle_positions), axis=-1)
    return e, float(np.max(e))


def log_spaced_steps(lo: int = 10, hi: int = 100_000, count: int = 30) -> list[int]:
    """``count`` logarithmically spaced integers on ``[lo, hi]`` (duplicates dropped)."""
    return sorted({int(round(x)) for x in np.logspace(math.log10(lo), math.log10(hi), count)})


@dataclass
class StudyRow:
    formulation: str
    n_steps: int
    e_r_max: float = math.nan
    error: str = ""

    @property
    def ok(self) -> bool:
        return not self.error


@dataclass
class ConvergenceStudy:
    rows: list[StudyRow] = field(default_factory=list)

    def errors(self, formulation: str) -> dict[int, float]:
        return {row.n_steps: row.e_r_max for row in self.rows if row.formulation == formulation and row.ok}


def convergence_study(
    run_row: Callable[[str, int], float],
    formulations: Sequence[str],
    ns: Sequence[int],
    workers: int = 1,
) -> ConvergenceStudy:
    """Evaluate ``run_row(formulation, n)`` -> ``e_r_max`` for every pair.

    A row whose run raises a package error is kept with its message in
    ``error`` and the study carries on.  ``workers > 1`` evaluates rows in
    a process pool (``run_row`` must then be picklable).
    """
    for n in ns:
        if not 10 <= n <= 1_000_000:
            raise InvalidInputError(f"step count {n} outside [10, 1e6]")
    tasks = [(f, int(n)) for f in formulations for n in ns]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            rows = list(pool.map(_study_row, [run_row] * len(tasks), *zip(*tasks)))
    else:
        rows = [_study_row(run_row, f, n) for f, n in tasks]
    return ConvergenceStudy(rows)


def _study_row(run_row, formulation: str, n: int) -> StudyRow:
    try:
        return StudyRow(formulation, n, float(run_row(formulation, n)))
    except RvEulerError as exc:
        return StudyRow(formulation, n, error=str(exc))

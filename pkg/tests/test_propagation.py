import math

import numpy as np
import pytest

from oracles import MU
from rveuler.config import default_config
from rveuler.dynamics import RvEulerSystem, two_body_force_provider
from rveuler.conversion import CartesianState, rv_euler_from_cartesian
from rveuler.errors import DomainError, InvalidInputError, PropagationError
from rveuler.propagation import (
    OrbitOracleParams,
    analytic_circular_orbit,
    convergence_study,
    log_spaced_steps,
    position_error_series,
    rk4_propagate,
)
from rveuler.scenarios import propagate_two_body

R = 6971.0


def growth(t, y):
    return y


def test_constant_solution_is_exact():
    traj = rk4_propagate(lambda t, y: np.zeros_like(y), [1.0, -2.0], 0.0, 5.0, 7)
    assert traj.states.shape == (8, 2)
    assert np.all(traj.states == [1.0, -2.0])
    assert traj.times[0] == 0.0 and traj.times[-1] == 5.0


def test_exponential_endpoint_error():
    traj = rk4_propagate(growth, [1.0], 0.0, 1.0, 10)
    err = abs(traj.states[-1, 0] - math.e)
    assert err < 2.1e-6
    assert err == pytest.approx(2.08e-6, rel=0.01)


@pytest.mark.parametrize("n", [10, 20, 40])
def test_fourth_order(n):
    e1 = abs(rk4_propagate(growth, [1.0], 0.0, 1.0, n).states[-1, 0] - math.e)
    e2 = abs(rk4_propagate(growth, [1.0], 0.0, 1.0, 2 * n).states[-1, 0] - math.e)
    assert e1 / e2 == pytest.approx(16.0, rel=0.06)


def test_argument_checks():
    with pytest.raises(InvalidInputError):
        rk4_propagate(growth, [1.0], 0.0, 1.0, 0)
    with pytest.raises(InvalidInputError):
        rk4_propagate(growth, [1.0], 0.0, 1.0, 5, renormalize=True)


def test_renormalize_restores_unit_blocks():
    traj = rk4_propagate(lambda t, y: np.ones_like(y), [0.0, 1.0, 0.0], 0.0, 1.0, 4, True, [slice(0, 2)])
    np.testing.assert_allclose(np.linalg.norm(traj.states[:, :2], axis=1), 1.0, rtol=1e-15)
    assert traj.states[-1, 2] == pytest.approx(1.0)


def test_domain_error_carries_step_time():
    def deriv(t, y):
        if y[0] > 1.5:
            raise DomainError("too big")
        return np.ones(1)

    with pytest.raises(PropagationError) as info:
        rk4_propagate(deriv, [0.0], 0.0, 4.0, 8)
    # y = t here; the first stage beyond 1.5 is inside the step starting at t = 1.5
    assert info.value.time == pytest.approx(1.5)
    assert isinstance(info.value.cause, DomainError)


def test_non_finite_state_is_reported():
    with pytest.raises(PropagationError):
        rk4_propagate(lambda t, y: np.array([np.inf]), [0.0], 0.0, 1.0, 2)


def test_oracle_geometry():
    p = OrbitOracleParams.circular(R, math.radians(97.777))
    assert p.period == pytest.approx(5792.334, abs=1e-3)
    np.testing.assert_allclose(analytic_circular_orbit(0.0, p), [R, 0, 0])
    np.testing.assert_allclose(analytic_circular_orbit(p.period, p), [R, 0, 0], atol=1e-9)
    i = p.inclination
    np.testing.assert_allclose(analytic_circular_orbit(p.period / 4, p), [0, R * math.cos(i), -R * math.sin(i)], atol=1e-9)
    pts = analytic_circular_orbit(np.linspace(0, p.period, 50), p)
    np.testing.assert_allclose(np.linalg.norm(pts, axis=1), R)


def test_oracle_fit_from_initial_state():
    v = math.sqrt(MU / R)
    i = math.radians(97.777)
    p = OrbitOracleParams.from_initial_state([R, 0, 0], [0, v * math.cos(i), -v * math.sin(i)])
    assert p.inclination == pytest.approx(i, abs=1e-14)
    with pytest.raises(InvalidInputError):
        OrbitOracleParams.from_initial_state([R, 0, 0], [0, 7.562, 0])
    with pytest.raises(InvalidInputError):
        OrbitOracleParams.from_initial_state([0, R, 0], [v, 0, 0])


def test_position_error_series():
    e, e_max = position_error_series([[1, 0, 0], [0, 3, 0]], [[1, 0, 0], [0, 0, 4]])
    np.testing.assert_allclose(e, [0, 5])
    assert e_max == 5.0


def test_log_spaced_steps():
    ns = log_spaced_steps()
    assert ns[0] == 10 and ns[-1] == 100_000
    assert len(ns) == 30 and ns == sorted(set(ns))


def _fake_row(formulation, n):
    if n == 20:
        raise DomainError("pole")
    return 1.0 / n


def test_convergence_study_keeps_failed_rows():
    study = convergence_study(_fake_row, ["a"], [10, 20, 40])
    assert [r.ok for r in study.rows] == [True, False, True]
    assert study.errors("a") == {10: 0.1, 40: 0.025}
    assert "pole" in study.rows[1].error


def test_convergence_study_in_process_pool_matches_serial():
    serial = convergence_study(_fake_row, ["a", "b"], [10, 40])
    pooled = convergence_study(_fake_row, ["a", "b"], [10, 40], workers=2)
    assert serial.rows == pooled.rows


@pytest.mark.parametrize("n", [9, 1_000_001])
def test_convergence_study_step_range(n):
    with pytest.raises(InvalidInputError):
        convergence_study(_fake_row, ["a"], [n])


def test_renormalization_changes_error_little():
    cfg = default_config("orbit")
    plain = propagate_two_body(cfg, "rv-euler", 1000).e_r_max
    cfg.integrator.renormalize = True
    renorm = propagate_two_body(cfg, "rv-euler", 1000).e_r_max
    assert 0.5 * plain <= renorm <= 2.0 * plain


def test_pole_transit_spikes_only_for_spherical():
    # the reference orbit passes closest to the south pole a quarter period in
    cfg = default_config("orbit")
    n = 2000
    k0, k1 = int(0.2 * n), int(0.3 * n)
    rv = propagate_two_body(cfg, "rv-euler", n).error
    sph = propagate_two_body(cfg, "spherical", n).error
    assert np.max(rv[k0:k1]) <= 10 * rv[k0]
    assert np.max(sph[k0:k1]) > 50 * sph[k0]


def test_eccentric_orbit_conserves_energy_and_norms():
    v0 = 1.1 * math.sqrt(MU / R)
    c = CartesianState([R, 0, 0], [0, v0 * math.cos(1.7), -v0 * math.sin(1.7)])
    a = 1.0 / (2.0 / R - v0 * v0 / MU)
    period = 2 * math.pi * math.sqrt(a**3 / MU)
    traj = rk4_propagate(RvEulerSystem(two_body_force_provider(MU)), rv_euler_from_cartesian(c).to_array(), 0, period, 10_000)
    y = traj.states
    energy = y[:, 5] ** 2 / 2 - MU / y[:, 0]
    assert np.max(np.abs(energy / energy[0] - 1)) < 1e-12
    assert np.max(np.abs(np.linalg.norm(y[:, 1:5], axis=1) - 1)) < 1e-12
    assert np.max(np.abs(np.linalg.norm(y[:, 6:10], axis=1) - 1)) < 1e-12
    # the orbit closes after one period
    assert abs(y[-1, 0] - R) < 1e-6

import math

import numpy as np
import pytest

from oracles import MU, apparent_acceleration, complex_step, gravity, random_unit
from rveuler.aero import AeroModel, PiecewiseLinear
from rveuler.conversion import rv_euler_position_velocity
from rveuler.dynamics import (
    INERTIAL,
    ObservationFrame,
    RvEulerState,
    RvEulerSystem,
    apparent_force,
    entry_force_provider,
    kinematic_rates,
    kinetic_rates,
    state_derivative,
    two_body_force_provider,
)
from rveuler.errors import DomainError
from rveuler.euler_params import EulerParams, omega_from_rates

S = math.sqrt(0.5)
R_ORBIT = 6971.0


def circular_state(r=R_ORBIT):
    return RvEulerState(r, EulerParams.identity(), math.sqrt(MU / r), EulerParams(0.0, 0.0, S, S))


def random_state(rng, r=(6400.0, 42000.0), v=(0.5, 11.0)):
    return RvEulerState(
        rng.uniform(*r),
        EulerParams(*random_unit(rng, 4)),
        rng.uniform(*v),
        EulerParams(*random_unit(rng, 4)),
    )


def fixed_force_provider(accel_e, mu=MU):
    """Gravity plus a constant E-basis acceleration, handed over in the B basis."""

    def provider(t, state, c_ae, c_ba, mass):
        c_be = c_ba @ c_ae
        return mass * (c_be @ accel_e) - (mass * mu / state.r**2) * c_ba[:, 0]

    return provider


def test_kinematic_rates_circular_orbit():
    st = circular_state()
    r_dot, wa2, wa3, ea_dot = kinematic_rates(st)
    period = 2 * math.pi * math.sqrt(R_ORBIT**3 / MU)
    assert r_dot == pytest.approx(0.0, abs=1e-14)
    assert wa2 == 0.0
    assert wa3 == pytest.approx(2 * math.pi / period, rel=1e-14)
    assert wa3 == pytest.approx(1.0847e-3, rel=1e-4)
    np.testing.assert_allclose(ea_dot, [0.0, 0.0, 0.5 * wa3, 0.0], atol=1e-18)


def test_kinematic_rates_reject_nonpositive_radius():
    st = RvEulerState(0.0, EulerParams.identity(), 1.0, EulerParams.identity())
    with pytest.raises(DomainError):
        kinematic_rates(st)


def test_apparent_force_is_physical_force_in_inertial_frame():
    st = random_state(np.random.default_rng(0))
    f = np.array([1.0, -2.0, 3.0])
    np.testing.assert_array_equal(apparent_force(0.0, st, f, INERTIAL, 2.0), f / 2.0)


def test_apparent_force_matches_cartesian_rotating_frame():
    rng = np.random.default_rng(11)
    for _ in range(200):
        st = random_state(rng)
        frame = ObservationFrame(rng.normal(size=3) * 1e-3, rng.normal(size=3) * 1e-6)
        f_e = rng.normal(size=3)
        c_be = st.c_be()
        r_vec, v_vec = rv_euler_position_velocity(st.to_array())
        expected = c_be @ apparent_acceleration(r_vec, v_vec, f_e, frame.omega, frame.alpha)
        got = apparent_force(0.0, st, c_be @ (3.0 * f_e), frame, 3.0)
        np.testing.assert_allclose(got, expected, rtol=1e-12, atol=1e-12 * np.linalg.norm(expected))


def test_centripetal_only():
    # velocity along the spin axis, so the Coriolis term vanishes
    w = 7.292115e-5
    r = 6378.0
    st = RvEulerState(r, EulerParams.identity(), 1.0, EulerParams(0.0, -S, 0.0, S))
    _, v_vec = rv_euler_position_velocity(st.to_array())
    np.testing.assert_allclose(v_vec, [0.0, 0.0, 1.0], atol=1e-15)
    got = apparent_force(0.0, st, np.zeros(3), ObservationFrame.rotating(w), 1.0)
    np.testing.assert_allclose(got, st.c_be() @ [r * w * w, 0.0, 0.0], atol=1e-18)
    assert np.linalg.norm(got) == pytest.approx(r * w * w, rel=1e-14)


def test_kinetic_rates_solve_velocity_frame_balance():
    # d(v b1)/dt seen from E equals the apparent force: in B components that reads
    # (v', v (w_B3 + b3.w_A), -v (w_B2 + b2.w_A))
    rng = np.random.default_rng(5)
    for _ in range(200):
        st = random_state(rng)
        ft = rng.normal(size=3)
        wa = np.array([0.0, rng.normal(), rng.normal()])
        c_ba = st.c_ba()
        v_dot, wb2, wb3, _ = kinetic_rates(st, ft, wa[1], wa[2])
        assert v_dot == ft[0]
        assert wb3 == pytest.approx(ft[1] / st.v - c_ba[2] @ wa, abs=1e-12)
        assert wb2 == pytest.approx(-ft[2] / st.v - c_ba[1] @ wa, abs=1e-12)


@pytest.mark.parametrize("v", [0.0, 1e-9, -1.0])
def test_kinetic_rates_reject_rest(v):
    st = RvEulerState(7000.0, EulerParams.identity(), v, EulerParams.identity())
    with pytest.raises(DomainError):
        kinetic_rates(st, np.zeros(3), 0.0, 0.0)


def test_two_body_provider_points_to_centre():
    st = RvEulerState(7000.0, EulerParams.identity(), 7.0, EulerParams.identity())
    f = two_body_force_provider(MU)(0.0, st, st.c_ae(), st.c_ba(), 2.0)
    np.testing.assert_allclose(f, [-2.0 * MU / 7000.0**2, 0.0, 0.0], rtol=1e-15)


@pytest.mark.parametrize("sigma_deg, lift_axis", [(0.0, 1), (90.0, 2), (180.0, 1)])
def test_entry_provider_by_hand(sigma_deg, lift_axis):
    aero = AeroModel()
    alpha = aero.alpha_max_lift_drag()
    r = 6378.0 + 37.0
    v = 7.138
    mass = 907.0
    # hand evaluation of the placeholder model
    rho = 1.225e9 * math.exp(-37.0 / 7.5)
    qs = 0.5 * rho * v * v * 0.4839e-6
    cl = math.sqrt(0.05 / 0.5)
    lift, drag = qs * cl, qs * (0.05 + 0.5 * cl * cl)
    assert drag == pytest.approx(qs * 0.1, rel=1e-15)

    provider = entry_force_provider(
        aero, MU, PiecewiseLinear.constant(alpha), PiecewiseLinear.constant(math.radians(sigma_deg))
    )
    st = RvEulerState(r, EulerParams.identity(), v, EulerParams.identity())
    f = provider(0.0, st, st.c_ae(), st.c_ba(), mass) / mass
    expected = np.array([-drag / mass - MU / r**2, 0.0, 0.0])
    expected[lift_axis] = lift / mass * (math.cos(math.radians(sigma_deg)) if lift_axis == 1 else 1.0)
    np.testing.assert_allclose(f, expected, rtol=1e-12, atol=1e-15)


def _cartesian_rates(y, y_dot):
    return complex_step(rv_euler_position_velocity, y, y_dot)


@pytest.mark.parametrize("seed", range(5))
def test_state_derivative_reproduces_cartesian_motion(seed):
    rng = np.random.default_rng(seed)
    frame = ObservationFrame(rng.normal(size=3) * 1e-4, rng.normal(size=3) * 1e-7)
    for _ in range(100):
        st = random_state(rng)
        a_e = rng.normal(size=3) * 1e-3
        y = st.to_array()
        y_dot = RvEulerSystem(fixed_force_provider(a_e), frame, mass=5.0)(0.0, y)
        r_dot, v_dot = _cartesian_rates(y, y_dot)
        r_vec, v_vec = rv_euler_position_velocity(y)
        a_true = apparent_acceleration(r_vec, v_vec, gravity(r_vec) + a_e, frame.omega, frame.alpha)
        np.testing.assert_allclose(r_dot, v_vec, rtol=0, atol=1e-13 * np.linalg.norm(v_vec))
        np.testing.assert_allclose(v_dot, a_true, rtol=0, atol=1e-11 * np.linalg.norm(a_true))


def test_frames_have_no_roll_about_their_first_axis():
    rng = np.random.default_rng(9)
    frame = ObservationFrame.rotating()
    for _ in range(200):
        st = random_state(rng)
        rates = state_derivative(0.0, st, fixed_force_provider(rng.normal(size=3) * 1e-3), frame)
        w_a = omega_from_rates(st.ep_a, (rates.ep_a_dot[:3], rates.ep_a_dot[3]))
        w_b = omega_from_rates(st.ep_b, (rates.ep_b_dot[:3], rates.ep_b_dot[3]))
        np.testing.assert_allclose(w_a, [0.0, rates.omega_a2, rates.omega_a3], atol=1e-15)
        np.testing.assert_allclose(w_b, [0.0, rates.omega_b2, rates.omega_b3], atol=1e-12)
        # quaternion rates are tangent to the unit sphere
        assert st.ep_a.as_array() @ rates.ep_a_dot == pytest.approx(0.0, abs=1e-15)
        assert st.ep_b.as_array() @ rates.ep_b_dot == pytest.approx(0.0, abs=1e-12)


def test_finite_on_vertical_manifold():
    rng = np.random.default_rng(2)
    aero = AeroModel()
    provider = entry_force_provider(aero, MU, PiecewiseLinear.constant(0.3), PiecewiseLinear.constant(0.4))
    for _ in range(50):
        chi = rng.uniform(0, 2 * math.pi)
        st = RvEulerState(
            6378.0 + rng.uniform(5, 80),
            EulerParams(*random_unit(rng, 4)),
            rng.uniform(0.5, 7.5),
            EulerParams(0.0, math.cos(chi), math.sin(chi), 0.0),
        )
        r_vec, v_vec = rv_euler_position_velocity(st.to_array())
        # straight down
        np.testing.assert_allclose(v_vec / st.v, -r_vec / st.r, atol=1e-15)
        rates = state_derivative(0.0, st, provider, ObservationFrame.rotating(), mass=907.0)
        assert np.all(np.isfinite(rates.to_array()))
        assert rates.r_dot == pytest.approx(-st.v, rel=1e-15)

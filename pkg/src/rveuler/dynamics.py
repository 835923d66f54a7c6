"""Point-mass equations of motion in rv-Euler parameters.

The state is ``{r, ep_a, v, ep_b}``:

* ``r``    radial distance, ``r = r a1``;
* ``ep_a`` Euler parameters of ``C_AE`` (observation frame E to position frame A);
* ``v``    speed relative to E, ``v = v b1``;
* ``ep_b`` Euler parameters of ``C_BA`` (position frame A to velocity frame B).

The spin of A about ``a1`` and of B about ``b1`` is fixed to zero, which
leaves two free angular-velocity components per frame.  No trigonometric
function appears anywhere in the right-hand side.

Flat array layout used by the integrator::

    [r, eA1, eA2, eA3, etaA, v, eB1, eB2, eB3, etaB]
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np

from . import constants
from .aero import AeroModel, PiecewiseLinear
from .errors import DomainError
from .euler_params import EulerParams, dcm_unchecked

STATE_SIZE = 10
QUAT_SLICES = (slice(1, 5), slice(6, 10))


@dataclass(frozen=True)
class RvEulerState:
    r: float
    ep_a: EulerParams
    v: float
    ep_b: EulerParams

    @classmethod
    def from_array(cls, y) -> RvEulerState:
        y = [float(x) for x in y]
        return cls(y[0], EulerParams(*y[1:5]), y[5], EulerParams(*y[6:10]))

    def to_array(self) -> np.ndarray:
        a, b = self.ep_a, self.ep_b
        return np.array([self.r, a.e1, a.e2, a.e3, a.eta, self.v, b.e1, b.e2, b.e3, b.eta])

    def c_ae(self) -> np.ndarray:
        a = self.ep_a
        return dcm_unchecked(a.e1, a.e2, a.e3, a.eta)

    def c_ba(self) -> np.ndarray:
        b = self.ep_b
        return dcm_unchecked(b.e1, b.e2, b.e3, b.eta)

    def c_be(self) -> np.ndarray:
        return self.c_ba() @ self.c_ae()


@dataclass(frozen=True)
class RvEulerRates:
    r_dot: float
    ep_a_dot: np.ndarray  # [eA1', eA2', eA3', etaA']
    v_dot: float
    ep_b_dot: np.ndarray
    omega_a2: float
    omega_a3: float
    omega_b2: float
    omega_b3: float

    def to_array(self) -> np.ndarray:
        out = np.empty(STATE_SIZE)
        out[0] = self.r_dot
        out[1:5] = self.ep_a_dot
        out[5] = self.v_dot
        out[6:10] = self.ep_b_dot
        return out


@dataclass(frozen=True)
class ObservationFrame:
    """Rotation of the observation frame E relative to inertial space.

    ``omega`` (rad/s) and ``alpha`` (rad/s^2) are expressed in the E basis.
    """

    omega: np.ndarray = field(default_factory=lambda: np.zeros(3))
    alpha: np.ndarray = field(default_factory=lambda: np.zeros(3))

    def __post_init__(self):
        object.__setattr__(self, "omega", np.asarray(self.omega, dtype=float).reshape(3))
        object.__setattr__(self, "alpha", np.asarray(self.alpha, dtype=float).reshape(3))

    @classmethod
    def inertial(cls) -> ObservationFrame:
        return cls()

    @classmethod
    def rotating(cls, omega_e: float = constants.OMEGA_EARTH) -> ObservationFrame:
        """Constant spin about e3 (an Earth-fixed frame)."""
        return cls(omega=np.array([0.0, 0.0, omega_e]))

    @property
    def is_inertial(self) -> bool:
        return not (self.omega.any() or self.alpha.any())


INERTIAL = ObservationFrame()

# (t, state, C_AE, C_BA, mass) -> physical force in the B basis
ForceProvider = Callable[[float, RvEulerState, np.ndarray, np.ndarray, float], np.ndarray]


def _quat_rates_no_roll(e1, e2, e3, eta, w2, w3) -> np.ndarray:
    # quaternion kinematics with the first angular-velocity component zero
    return np.array([
        0.5 * (-w2 * e3 + w3 * e2),
        0.5 * (w2 * eta - w3 * e1),
        0.5 * (w2 * e1 + w3 * eta),
        -0.5 * (w2 * e2 + w3 * e3),
    ])


def kinematic_rates(state: RvEulerState) -> tuple[float, float, float, np.ndarray]:
    """``(r_dot, omega_a2, omega_a3, ep_a_dot)`` of the position frame."""
    r, v = state.r, state.v
    if not r > 0.0:
        raise DomainError(f"radial distance must be positive, r = {r!r}")
    b, a = state.ep_b, state.ep_a
    r_dot = v * (1.0 - 2.0 * (b.e2 * b.e2 + b.e3 * b.e3))
    k = 2.0 * v / r
    omega_a2 = k * (b.eta * b.e2 - b.e1 * b.e3)
    omega_a3 = k * (b.eta * b.e3 + b.e1 * b.e2)
    return r_dot, omega_a2, omega_a3, _quat_rates_no_roll(a.e1, a.e2, a.e3, a.eta, omega_a2, omega_a3)


def apparent_force(
    t: float,
    state: RvEulerState,
    force,
    frame: ObservationFrame,
    mass: float,
    c_ae: np.ndarray | None = None,
    c_ba: np.ndarray | None = None,
) -> np.ndarray:
    """Apparent force per unit mass in the B basis.

    Physical force minus Coriolis, Euler and centripetal terms of the
    observation frame, so the result is the acceleration seen from E.
    """
    f = np.asarray(force, dtype=float) / mass
    if frame.is_inertial:
        return f
    if c_ae is None:
        c_ae = state.c_ae()
    if c_ba is None:
        c_ba = state.c_ba()
    c_be = c_ba @ c_ae
    w = frame.omega
    al = frame.alpha
    r, v = state.r, state.v

    coriolis = 2.0 * v * np.array([0.0, c_be[2] @ w, -(c_be[1] @ w)])
    euler = r * (c_ba @ np.array([0.0, c_ae[2] @ al, -(c_ae[1] @ al)]))
    w1, w2, w3 = w
    ww = np.array([
        [-w2 * w2 - w3 * w3, w1 * w2, w1 * w3],
        [w2 * w1, -w1 * w1 - w3 * w3, w2 * w3],
        [w3 * w1, w3 * w2, -w1 * w1 - w2 * w2],
    ])
    centripetal = r * (c_be @ (ww @ c_ae[0]))
    return f - coriolis - euler - centripetal


def kinetic_rates(
    state: RvEulerState,
    f_tilde_over_m,
    omega_a2: float,
    omega_a3: float,
    v_min: float = constants.V_MIN,
) -> tuple[float, float, float, np.ndarray]:
    """``(v_dot, omega_b2, omega_b3, ep_b_dot)`` of the velocity frame.

    Raises
    ------
    DomainError
        If ``v <= v_min``; the velocity direction is undefined at rest.
    """
    v = state.v
    if not v > v_min:
        raise DomainError(f"speed {v!r} km/s is at or below v_min = {v_min!r}")
    f1, f2, f3 = f_tilde_over_m
    b = state.ep_b
    e1, e2, e3, eta = b.e1, b.e2, b.e3, b.eta
    omega_b2 = (
        -f3 / v
        - omega_a2 * (1.0 - 2.0 * (e1 * e1 + e3 * e3))
        - 2.0 * omega_a3 * (e2 * e3 + e1 * eta)
    )
    omega_b3 = (
        f2 / v
        - 2.0 * omega_a2 * (e2 * e3 - e1 * eta)
        - omega_a3 * (1.0 - 2.0 * (e1 * e1 + e2 * e2))
    )
    return float(f1), omega_b2, omega_b3, _quat_rates_no_roll(e1, e2, e3, eta, omega_b2, omega_b3)


def state_derivative(
    t: float,
    state: RvEulerState,
    force_provider: ForceProvider,
    frame: ObservationFrame = INERTIAL,
    mass: float = 1.0,
    v_min: float = constants.V_MIN,
) -> RvEulerRates:
    r_dot, wa2, wa3, ea_dot = kinematic_rates(state)
    c_ae = state.c_ae()
    c_ba = state.c_ba()
    force = force_provider(t, state, c_ae, c_ba, mass)
    ft = apparent_force(t, state, force, frame, mass, c_ae, c_ba)
    v_dot, wb2, wb3, eb_dot = kinetic_rates(state, ft, wa2, wa3, v_min)
    return RvEulerRates(r_dot, ea_dot, v_dot, eb_dot, wa2, wa3, wb2, wb3)


def two_body_force_provider(mu: float = constants.MU_EARTH) -> ForceProvider:
    """Point-mass gravity, ``-m mu / r^2`` along ``a1``, in the B basis."""
    if not mu > 0.0:
        raise ValueError("mu must be positive")

    def provider(t, state, c_ae, c_ba, mass):
        return (-mass * mu / (state.r * state.r)) * c_ba[:, 0]

    return provider


def entry_force_provider(
    aero: AeroModel,
    mu: float,
    alpha_profile: PiecewiseLinear,
    sigma_profile: PiecewiseLinear,
) -> ForceProvider:
    """Lift, drag and gravity for a prescribed angle-of-attack/bank history.

    Bank angle is a rotation about ``b1`` from ``b2`` towards the lift
    direction, so ``sigma = 0`` puts all lift along ``b2``.
    """

    def provider(t, state, c_ae, c_ba, mass):
        lift, drag = aero.lift_drag(state.r, state.v, alpha_profile(t))
        sigma = sigma_profile(t)
        f = np.array([-drag, lift * math.cos(sigma), lift * math.sin(sigma)])
        return f - (mass * mu / (state.r * state.r)) * c_ba[:, 0]

    return provider


class RvEulerSystem:
    """Flat-array right-hand side ``f(t, y)`` for the integrator."""

    quat_slices = QUAT_SLICES

    def __init__(
        self,
        force_provider: ForceProvider,
        frame: ObservationFrame = INERTIAL,
        mass: float = 1.0,
        v_min: float = constants.V_MIN,
    ):
        self.force_provider = force_provider
        self.frame = frame
        self.mass = mass
        self.v_min = v_min

    def __call__(self, t: float, y: np.ndarray) -> np.ndarray:
        state = RvEulerState.from_array(y)
        return state_derivative(t, state, self.force_provider, self.frame, self.mass, self.v_min).to_array()

"""Spherical-coordinate baseline: ``{r, phi, theta, v, gamma, psi}``.

``phi`` is longitude, ``theta`` geocentric latitude, ``gamma`` the
flight-path angle above the local horizontal and ``psi`` the azimuth of
the horizontal velocity, measured from north and positive toward east.
Both rate functions refuse to evaluate inside a small guard band around
their singularities instead of returning infinities.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import constants
from .errors import DomainError, SingularityError

POLE_GUARD = 1e-12  # on |cos(theta)|
# Angular margin (rad) from vertical flight inside which the entry
# azimuth equation is refused.
VERTICAL_GUARD = 1e-9


@dataclass(frozen=True)
class SphericalState:
    r: float
    phi: float
    theta: float
    v: float
    gamma: float
    psi: float

    @classmethod
    def from_array(cls, y) -> SphericalState:
        return cls(*(float(x) for x in y))

    def to_array(self) -> np.ndarray:
        return np.array([self.r, self.phi, self.theta, self.v, self.gamma, self.psi])


@dataclass(frozen=True)
class AeroAcceleration:
    """Aerodynamic acceleration split the conventional way.

    ``drag`` acts against the velocity; ``lift`` acts normal to it, rotated
    by ``bank`` (rad) about the velocity from the vertical plane, positive
    toward the right-hand side of the flight direction.  Magnitudes are
    per unit mass (km/s^2).
    """

    drag: float = 0.0
    lift: float = 0.0
    bank: float = 0.0


def _check_pole(theta: float) -> float:
    ct = math.cos(theta)
    if abs(ct) < POLE_GUARD:
        raise SingularityError(f"latitude {math.degrees(theta):.12g} deg is at a pole singularity")
    return ct


def two_body_spherical_rates(state: SphericalState, mu: float = constants.MU_EARTH) -> np.ndarray:
    """Inertial two-body rates ``[r', phi', theta', v', gamma', psi']``."""
    r, theta, v, gamma, psi = state.r, state.theta, state.v, state.gamma, state.psi
    if not r > 0.0 or not v > 0.0:
        raise DomainError("two-body spherical rates need r > 0 and v > 0")
    ct = _check_pole(theta)
    cg, sg = math.cos(gamma), math.sin(gamma)
    sp, cp = math.sin(psi), math.cos(psi)
    phi_dot = v * cg * sp / (r * ct)
    return np.array([
        v * sg,
        phi_dot,
        v * cg * cp / r,
        -mu * sg / (r * r),
        cg * (v / r - mu / (r * r * v)),
        phi_dot * math.sin(theta),
    ])


def entry_spherical_rates(
    state: SphericalState,
    forces: AeroAcceleration,
    mu: float = constants.MU_EARTH,
    omega_e: float = constants.OMEGA_EARTH,
) -> np.ndarray:
    """Rates over a planet spinning at ``omega_e`` about its polar axis.

    Velocity and angles are Earth-relative.  The azimuth equation has
    ``1/cos(gamma)`` factors, so vertical flight is refused with a
    :class:`SingularityError`.
    """
    r, theta, v, gamma, psi = state.r, state.theta, state.v, state.gamma, state.psi
    if not r > 0.0 or not v > 0.0:
        raise DomainError("entry spherical rates need r > 0 and v > 0")
    ct = _check_pole(theta)
    if math.pi / 2 - abs(gamma) <= VERTICAL_GUARD:
        raise SingularityError(
            f"flight-path angle {math.degrees(gamma):.12g} deg is vertical; azimuth rate undefined"
        )
    st = math.sin(theta)
    cg, sg = math.cos(gamma), math.sin(gamma)
    sp, cp = math.sin(psi), math.cos(psi)
    g = mu / (r * r)
    w = omega_e
    lift_up = forces.lift * math.cos(forces.bank)
    lift_side = forces.lift * math.sin(forces.bank)

    r_dot = v * sg
    phi_dot = v * cg * sp / (r * ct)
    theta_dot = v * cg * cp / r
    v_dot = -forces.drag - g * sg + w * w * r * ct * (sg * ct - cg * st * cp)
    gamma_dot = (
        lift_up / v
        + cg * (v / r - g / v)
        + 2.0 * w * ct * sp
        + w * w * r * ct * (cg * ct + sg * st * cp) / v
    )
    psi_dot = (
        lift_side / (v * cg)
        + (v / r) * cg * sp * math.tan(theta)
        - 2.0 * w * (math.tan(gamma) * cp * ct - st)
        + (r * w * w / (v * cg)) * sp * st * ct
    )
    return np.array([r_dot, phi_dot, theta_dot, v_dot, gamma_dot, psi_dot])


class TwoBodySphericalSystem:
    """Flat-array right-hand side of the spherical two-body equations."""

    quat_slices = ()

    def __init__(self, mu: float = constants.MU_EARTH):
        self.mu = mu

    def __call__(self, t: float, y: np.ndarray) -> np.ndarray:
        return two_body_spherical_rates(SphericalState.from_array(y), self.mu)

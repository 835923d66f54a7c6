"""Conversions among Cartesian, spherical and rv-Euler states.

Cartesian vectors are expressed in the observation-frame basis E.  Going
from Cartesian to rv-Euler parameters leaves one free rotation per frame
(about ``r`` for A, about ``v`` for B); :class:`InitPolicy` fixes them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .dynamics import RvEulerState
from .errors import DegenerateGeometryError, InvalidInputError
from .euler_params import dcm_unchecked, euler_params_from_dcm, skew
from .spherical import SphericalState

DEGENERACY_TOL = 1e-12


@dataclass(frozen=True)
class CartesianState:
    r_vec: np.ndarray  # km
    v_vec: np.ndarray  # km/s, relative to E

    def __post_init__(self):
        object.__setattr__(self, "r_vec", np.asarray(self.r_vec, dtype=float).reshape(3))
        object.__setattr__(self, "v_vec", np.asarray(self.v_vec, dtype=float).reshape(3))


@dataclass(frozen=True)
class InitPolicy:
    """How the free rotations of frames A and B are fixed.

    ``h_aligned``
        ``a3 = b3 = h / |h|`` with ``h = r x v``.  Undefined when r and v are
        parallel.
    ``custom``
        ``c_ae`` is supplied (its first row must be the position
        direction); B is then the smallest rotation of A that carries
        ``a1`` onto the velocity direction.  For velocity exactly opposite
        to ``a1`` that is the half turn about ``a3``.
    """

    kind: str = "h_aligned"
    c_ae: np.ndarray | None = None

    @classmethod
    def h_aligned(cls) -> InitPolicy:
        return cls("h_aligned")

    @classmethod
    def custom(cls, c_ae) -> InitPolicy:
        return cls("custom", np.asarray(c_ae, dtype=float))

    def __post_init__(self):
        if self.kind not in ("h_aligned", "custom"):
            raise InvalidInputError(f"unknown init policy {self.kind!r}")
        if self.kind == "custom":
            c = self.c_ae
            if c is None or np.shape(c) != (3, 3):
                raise InvalidInputError("custom policy needs a 3x3 C_AE seed")
            if np.max(np.abs(c @ c.T - np.eye(3))) > 1e-9 or abs(np.linalg.det(c) - 1.0) > 1e-9:
                raise InvalidInputError("custom C_AE seed is not a proper rotation")


def rv_euler_position_velocity(y) -> tuple[np.ndarray, np.ndarray]:
    """Position and velocity (E basis) from a flat rv-Euler array.

    Pure polynomial arithmetic, so complex-valued input is fine.
    """
    c_ae = dcm_unchecked(*y[1:5])
    c_ba = dcm_unchecked(*y[6:10])
    return y[0] * c_ae[0], y[5] * (c_ba[0] @ c_ae)


def cartesian_from_rv_euler(state: RvEulerState) -> CartesianState:
    r_vec, v_vec = rv_euler_position_velocity(state.to_array())
    return CartesianState(r_vec, v_vec)


def _aligning_rotation(u: np.ndarray) -> np.ndarray:
    """Smallest active rotation taking ``e1`` to the unit vector ``u``."""
    if u[0] >= 0.0:
        w = np.array([0.0, -u[2], u[1]])  # e1 x u
        wx = skew(w)
        return np.eye(3) + wx + wx @ wx / (1.0 + u[0])
    # half turn about e3 first, then align -e1 with u
    half = np.diag([-1.0, -1.0, 1.0])
    w = np.array([0.0, u[2], -u[1]])  # (-e1) x u
    wx = skew(w)
    return (np.eye(3) + wx + wx @ wx / (1.0 - u[0])) @ half


def rv_euler_from_cartesian(c: CartesianState, policy: InitPolicy | None = None) -> RvEulerState:
    """rv-Euler parameters reproducing ``c`` under the given policy.

    Raises
    ------
    DegenerateGeometryError
        Zero position or speed, or r parallel to v under ``h_aligned``.
    """
    policy = policy or InitPolicy.h_aligned()
    r = float(np.linalg.norm(c.r_vec))
    v = float(np.linalg.norm(c.v_vec))
    if r == 0.0 or v == 0.0:
        raise DegenerateGeometryError("rv-Euler parameters need nonzero position and velocity")
    r_hat = c.r_vec / r
    v_hat = c.v_vec / v

    if policy.kind == "h_aligned":
        h = np.cross(r_hat, v_hat)
        hn = np.linalg.norm(h)
        if hn <= DEGENERACY_TOL:
            raise DegenerateGeometryError(
                "position and velocity are parallel, angular momentum direction undefined; "
                "use a custom policy with an explicit C_AE seed"
            )
        a3 = h / hn
        a2 = np.cross(a3, r_hat)
        c_ae = np.array([r_hat, a2, a3])
    else:
        c_ae = policy.c_ae
        if np.max(np.abs(c_ae[0] - r_hat)) > 1e-9:
            raise InvalidInputError("custom C_AE seed: first row must equal the position direction")

    u = c_ae @ v_hat
    u = u / np.linalg.norm(u)
    c_ba = _aligning_rotation(u).T
    return RvEulerState(r, euler_params_from_dcm(c_ae), v, euler_params_from_dcm(c_ba))


def _local_basis(phi, theta):
    cp, sp = np.cos(phi), np.sin(phi)
    ct, st = np.cos(theta), np.sin(theta)
    up = np.array([ct * cp, ct * sp, st])
    east = np.array([-sp, cp, 0.0 * sp])
    north = np.array([-st * cp, -st * sp, ct])
    return up, east, north


def spherical_position_velocity(s) -> tuple[np.ndarray, np.ndarray]:
    """Position and velocity from ``[r, phi, theta, v, gamma, psi]`` (complex-safe)."""
    r, phi, theta, v, gamma, psi = s
    up, east, north = _local_basis(phi, theta)
    cg = np.cos(gamma)
    return r * up, v * (np.sin(gamma) * up + cg * np.sin(psi) * east + cg * np.cos(psi) * north)


def cartesian_from_spherical(s: SphericalState) -> CartesianState:
    if not abs(math.cos(s.theta)) > DEGENERACY_TOL:
        raise DegenerateGeometryError("latitude at a pole; longitude is undefined")
    r_vec, v_vec = spherical_position_velocity(s.to_array())
    return CartesianState(r_vec, v_vec)


def spherical_from_cartesian(c: CartesianState) -> SphericalState:
    x, y, z = c.r_vec
    r = math.sqrt(x * x + y * y + z * z)
    rho = math.hypot(x, y)
    if r == 0.0 or rho <= DEGENERACY_TOL * r:
        raise DegenerateGeometryError("position is at a pole (or the origin); longitude undefined")
    phi = math.atan2(y, x)
    theta = math.atan2(z, rho)
    up, east, north = _local_basis(phi, theta)
    v = float(np.linalg.norm(c.v_vec))
    v_up = float(c.v_vec @ up)
    v_e = float(c.v_vec @ east)
    v_n = float(c.v_vec @ north)
    v_h = math.hypot(v_e, v_n)
    if v == 0.0 or v_h <= DEGENERACY_TOL * v:
        raise DegenerateGeometryError("velocity is vertical (or zero); azimuth undefined")
    return SphericalState(r, phi, theta, v, math.atan2(v_up, v_h), math.atan2(v_e, v_n))


def rv_euler_from_spherical(s: SphericalState, policy: InitPolicy | None = None) -> RvEulerState:
    return rv_euler_from_cartesian(cartesian_from_spherical(s), policy)


def spherical_from_rv_euler(state: RvEulerState) -> SphericalState:
    return spherical_from_cartesian(cartesian_from_rv_euler(state))


def rotation_about_position(r_vec, angle: float) -> np.ndarray:
    """A ``C_AE`` seed with ``a1 = r_hat``, turned by ``angle`` (rad) about ``a1``.

    Useful for the ``custom`` policy when r and v are parallel.  At
    ``angle = 0``, ``a3`` is the part of e3 orthogonal to ``r_hat`` (e2 is
    used instead when ``r_hat`` lies close to e3).
    """
    r_hat = np.asarray(r_vec, dtype=float) / np.linalg.norm(r_vec)
    ref = np.array([0.0, 0.0, 1.0]) if abs(r_hat[2]) < 0.9 else np.array([0.0, 1.0, 0.0])
    a3 = ref - (ref @ r_hat) * r_hat
    a3 /= np.linalg.norm(a3)
    a2 = np.cross(a3, r_hat)
    ca, sa = math.cos(angle), math.sin(angle)
    return np.array([r_hat, ca * a2 + sa * a3, -sa * a2 + ca * a3])

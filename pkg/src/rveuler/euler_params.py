"""Euler parameters (unit quaternions) and direction cosine matrices.

Conventions
-----------
An :class:`EulerParams` value ``(e1, e2, e3, eta)`` describes the rotation
taking frame A into frame B.  Its direction cosine matrix ``C_BA`` maps
column matrices expressed in the A basis to the B basis::

    {p}_B = C_BA {p}_A

so row ``i`` of ``C_BA`` is ``b_i`` written in A components.  Angular
velocity arguments are the rate of B relative to A, expressed in B.

Frames are composed through DCM products (``C_BE = C_BA @ C_AE``);
quaternion multiplication is deliberately not offered.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import InvalidInputError

NORM_TOL = 1e-6
ROTATION_TOL = 1e-9


@dataclass(frozen=True)
class EulerParams:
    """Vector part ``(e1, e2, e3)`` and scalar part ``eta`` of a quaternion."""

    e1: float
    e2: float
    e3: float
    eta: float

    @classmethod
    def identity(cls) -> EulerParams:
        return cls(0.0, 0.0, 0.0, 1.0)

    @classmethod
    def from_array(cls, a) -> EulerParams:
        e1, e2, e3, eta = (float(x) for x in a)
        return cls(e1, e2, e3, eta)

    @property
    def eps(self) -> np.ndarray:
        return np.array([self.e1, self.e2, self.e3])

    @property
    def norm(self) -> float:
        return math.sqrt(self.e1**2 + self.e2**2 + self.e3**2 + self.eta**2)

    def as_array(self) -> np.ndarray:
        return np.array([self.e1, self.e2, self.e3, self.eta])

    def __neg__(self) -> EulerParams:
        return EulerParams(-self.e1, -self.e2, -self.e3, -self.eta)


@dataclass(frozen=True)
class AxisAngle:
    """Single rotation by ``angle`` (rad) about the unit vector ``axis``."""

    axis: tuple[float, float, float]
    angle: float


def skew(p) -> np.ndarray:
    """Skew-symmetric matrix with ``skew(p) @ q == cross(p, q)``."""
    p1, p2, p3 = p
    return np.array([
        [0.0, -p3, p2],
        [p3, 0.0, -p1],
        [-p2, p1, 0.0],
    ])


def _check_unit_axis(axis) -> np.ndarray:
    q = np.asarray(axis, dtype=float)
    if q.shape != (3,) or not np.all(np.isfinite(q)):
        raise InvalidInputError(f"axis must be a finite 3-vector, got {axis!r}")
    if abs(np.linalg.norm(q) - 1.0) > 1e-12:
        raise InvalidInputError(f"axis must be unit length, |axis| = {np.linalg.norm(q)!r}")
    return q


def euler_params_from_axis_angle(aa: AxisAngle) -> EulerParams:
    q = _check_unit_axis(aa.axis)
    s = math.sin(aa.angle / 2.0)
    return EulerParams(q[0] * s, q[1] * s, q[2] * s, math.cos(aa.angle / 2.0))


def dcm_from_axis_angle(aa: AxisAngle) -> np.ndarray:
    """``C_BA`` written directly in axis-angle form (no half angles)."""
    q1, q2, q3 = _check_unit_axis(aa.axis)
    c = math.cos(aa.angle)
    s = math.sin(aa.angle)
    k = 1.0 - c
    return np.array([
        [k * q1 * q1 + c, k * q1 * q2 + q3 * s, k * q1 * q3 - q2 * s],
        [k * q2 * q1 - q3 * s, k * q2 * q2 + c, k * q2 * q3 + q1 * s],
        [k * q3 * q1 + q2 * s, k * q3 * q2 - q1 * s, k * q3 * q3 + c],
    ])


def dcm_unchecked(e1, e2, e3, eta) -> np.ndarray:
    """``C_BA`` from raw components, without the unit-norm check.

    Integrators call this on stage states whose norm has drifted; the
    matrix is then exactly what the equations of motion see.  Works for
    complex inputs as well, which the complex-step tests rely on.
    """
    return np.array([
        [1.0 - 2.0 * (e2 * e2 + e3 * e3), 2.0 * (e1 * e2 + e3 * eta), 2.0 * (e1 * e3 - e2 * eta)],
        [2.0 * (e2 * e1 - e3 * eta), 1.0 - 2.0 * (e3 * e3 + e1 * e1), 2.0 * (e2 * e3 + e1 * eta)],
        [2.0 * (e3 * e1 + e2 * eta), 2.0 * (e3 * e2 - e1 * eta), 1.0 - 2.0 * (e1 * e1 + e2 * e2)],
    ])


def dcm_from_euler_params(ep: EulerParams) -> np.ndarray:
    """Direction cosine matrix ``C_BA`` of a unit quaternion.

    Raises
    ------
    InvalidInputError
        If ``|ep|`` differs from one by more than ``1e-6``.
    """
    n = ep.norm
    if not math.isfinite(n) or abs(n - 1.0) > NORM_TOL:
        raise InvalidInputError(f"Euler parameters are not unit norm (|ep| = {n!r})")
    return dcm_unchecked(ep.e1, ep.e2, ep.e3, ep.eta)


def euler_params_from_dcm(c) -> EulerParams:
    """Inverse of :func:`dcm_from_euler_params`, with ``eta >= 0``.

    The component with the largest square is recovered first from the
    diagonal, then the rest from off-diagonal sums/differences divided by
    it, so no division by a small number occurs near 180 degree rotations.
    """
    c = np.asarray(c, dtype=float)
    if c.shape != (3, 3) or not np.all(np.isfinite(c)):
        raise InvalidInputError("expected a finite 3x3 matrix")
    if np.max(np.abs(c.T @ c - np.eye(3))) > ROTATION_TOL or abs(np.linalg.det(c) - 1.0) > ROTATION_TOL:
        raise InvalidInputError("matrix is not a proper rotation")

    tr = c[0, 0] + c[1, 1] + c[2, 2]
    # 4x the squares of eta, e1, e2, e3
    sq = (1.0 + tr, 1.0 + 2.0 * c[0, 0] - tr, 1.0 + 2.0 * c[1, 1] - tr, 1.0 + 2.0 * c[2, 2] - tr)
    k = max(range(4), key=lambda i: sq[i])
    if k == 0:
        eta = 0.5 * math.sqrt(sq[0])
        f = 0.25 / eta
        e1 = (c[1, 2] - c[2, 1]) * f
        e2 = (c[2, 0] - c[0, 2]) * f
        e3 = (c[0, 1] - c[1, 0]) * f
    elif k == 1:
        e1 = 0.5 * math.sqrt(sq[1])
        f = 0.25 / e1
        e2 = (c[0, 1] + c[1, 0]) * f
        e3 = (c[0, 2] + c[2, 0]) * f
        eta = (c[1, 2] - c[2, 1]) * f
    elif k == 2:
        e2 = 0.5 * math.sqrt(sq[2])
        f = 0.25 / e2
        e1 = (c[0, 1] + c[1, 0]) * f
        e3 = (c[1, 2] + c[2, 1]) * f
        eta = (c[2, 0] - c[0, 2]) * f
    else:
        e3 = 0.5 * math.sqrt(sq[3])
        f = 0.25 / e3
        e1 = (c[0, 2] + c[2, 0]) * f
        e2 = (c[1, 2] + c[2, 1]) * f
        eta = (c[0, 1] - c[1, 0]) * f

    ep = EulerParams(float(e1), float(e2), float(e3), float(eta))
    if eta < 0.0:
        ep = -ep
    return ep


def euler_param_rates(ep: EulerParams, omega) -> tuple[np.ndarray, float]:
    """Quaternion rates for angular velocity ``omega`` (B relative to A, in B).

    Returns ``(eps_dot, eta_dot)``.
    """
    w1, w2, w3 = omega
    e1, e2, e3, eta = ep.e1, ep.e2, ep.e3, ep.eta
    eps_dot = 0.5 * np.array([
        eta * w1 - e3 * w2 + e2 * w3,
        e3 * w1 + eta * w2 - e1 * w3,
        -e2 * w1 + e1 * w2 + eta * w3,
    ])
    eta_dot = -0.5 * (e1 * w1 + e2 * w2 + e3 * w3)
    return eps_dot, eta_dot


def omega_from_rates(ep: EulerParams, rates) -> np.ndarray:
    """Angular velocity (in B) from quaternion rates ``(eps_dot, eta_dot)``."""
    eps_dot, eta_dot = rates
    d1, d2, d3 = eps_dot
    e1, e2, e3, eta = ep.e1, ep.e2, ep.e3, ep.eta
    return 2.0 * np.array([
        eta * d1 - eta_dot * e1 + e3 * d2 - d3 * e2,
        eta * d2 - eta_dot * e2 - e3 * d1 + d3 * e1,
        eta * d3 - eta_dot * e3 + e2 * d1 - d2 * e1,
    ])


def normalize(ep: EulerParams) -> EulerParams:
    n = ep.norm
    if n == 0.0 or not math.isfinite(n):
        raise InvalidInputError("cannot normalize a zero or non-finite quaternion")
    return EulerParams(ep.e1 / n, ep.e2 / n, ep.e3 / n, ep.eta / n)

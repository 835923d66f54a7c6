"""Nonsingular point-mass dynamics in rv-Euler parameters.

Radius and speed plus two unit quaternions (position frame and velocity
frame) replace the angles of spherical coordinates, giving equations of
motion free of trigonometric functions and of pole or vertical-flight
singularities.
"""

from .conversion import (
    CartesianState,
    InitPolicy,
    cartesian_from_rv_euler,
    cartesian_from_spherical,
    rv_euler_from_cartesian,
    rv_euler_from_spherical,
    spherical_from_cartesian,
)
from .dynamics import (
    ObservationFrame,
    RvEulerRates,
    RvEulerState,
    RvEulerSystem,
    entry_force_provider,
    state_derivative,
    two_body_force_provider,
)
from .euler_params import EulerParams, dcm_from_euler_params, euler_params_from_dcm
from .propagation import OrbitOracleParams, analytic_circular_orbit, rk4_propagate
from .spherical import SphericalState

__version__ = "0.1.0"

__all__ = [
    "CartesianState",
    "EulerParams",
    "InitPolicy",
    "ObservationFrame",
    "OrbitOracleParams",
    "RvEulerRates",
    "RvEulerState",
    "RvEulerSystem",
    "SphericalState",
    "analytic_circular_orbit",
    "cartesian_from_rv_euler",
    "cartesian_from_spherical",
    "dcm_from_euler_params",
    "entry_force_provider",
    "euler_params_from_dcm",
    "rk4_propagate",
    "rv_euler_from_cartesian",
    "rv_euler_from_spherical",
    "spherical_from_cartesian",
    "state_derivative",
    "two_body_force_provider",
]

"""Placeholder aerodynamics for the entry scenario.

Exponential atmosphere, linear lift curve and parabolic drag polar.  All
coefficients are configurable; the defaults describe a generic slender
hypersonic glider and are not fitted to any particular vehicle.

Units: km, s, kg.  Reference area is km^2, so ``q * S * C`` is a force in
kg km/s^2 and dividing by a mass in kg gives km/s^2.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import constants
from .errors import DomainError, InvalidInputError


@dataclass(frozen=True)
class AeroModel:
    cl_alpha: float = 1.5  # 1/rad
    cd0: float = 0.05
    k_induced: float = 0.5
    reference_area: float = 0.4839e-6  # km^2
    rho0: float = constants.RHO0  # kg/km^3
    scale_height: float = constants.SCALE_HEIGHT  # km
    r_ref: float = constants.R_EARTH  # km, radius of zero altitude
    h_floor: float = -1.0  # km, the atmosphere is not evaluated below this

    def __post_init__(self):
        for name in ("reference_area", "rho0", "scale_height", "r_ref"):
            if not getattr(self, name) > 0.0:
                raise InvalidInputError(f"{name} must be positive")

    def altitude(self, r: float) -> float:
        return r - self.r_ref

    def density(self, r: float) -> float:
        h = r - self.r_ref
        if h < self.h_floor:
            raise DomainError(f"altitude {h:.6g} km is below the atmosphere floor {self.h_floor:g} km")
        return self.rho0 * math.exp(-h / self.scale_height)

    def dynamic_pressure(self, r: float, v: float) -> float:
        """``rho v^2 / 2`` in kg/(km s^2), i.e. units of 1e-3 Pa."""
        return 0.5 * self.density(r) * v * v

    def coefficients(self, alpha: float) -> tuple[float, float]:
        cl = self.cl_alpha * alpha
        return cl, self.cd0 + self.k_induced * cl * cl

    def lift_drag(self, r: float, v: float, alpha: float) -> tuple[float, float]:
        qs = self.dynamic_pressure(r, v) * self.reference_area
        cl, cd = self.coefficients(alpha)
        return qs * cl, qs * cd

    def alpha_max_lift_drag(self) -> float:
        """Angle of attack maximising C_L / C_D for the parabolic polar."""
        if self.cd0 <= 0.0 or self.k_induced <= 0.0 or self.cl_alpha <= 0.0:
            raise InvalidInputError("max L/D trim needs positive cd0, k_induced and cl_alpha")
        return math.sqrt(self.cd0 / self.k_induced) / self.cl_alpha


@dataclass(frozen=True)
class PiecewiseLinear:
    """Control profile interpolated linearly between knots.

    Outside the knot range the end values are held.
    """

    times: tuple[float, ...]
    values: tuple[float, ...]

    def __post_init__(self):
        if len(self.times) == 0 or len(self.times) != len(self.values):
            raise InvalidInputError("profile needs matching, non-empty times and values")
        if any(b <= a for a, b in zip(self.times, self.times[1:])):
            raise InvalidInputError("profile times must be strictly increasing")

    @classmethod
    def constant(cls, value: float) -> PiecewiseLinear:
        return cls((0.0,), (float(value),))

    def __call__(self, t: float) -> float:
        return float(np.interp(t, self.times, self.values))

    def rate(self, t: float) -> float:
        """Slope of the segment containing ``t`` (right-continuous at knots)."""
        if len(self.times) < 2 or t < self.times[0] or t >= self.times[-1]:
            return 0.0
        i = int(np.searchsorted(self.times, t, side="right")) - 1
        return (self.values[i + 1] - self.values[i]) / (self.times[i + 1] - self.times[i])

    def covers(self, t0: float, tf: float) -> bool:
        return len(self.times) == 1 or (self.times[0] <= t0 and self.times[-1] >= tf)

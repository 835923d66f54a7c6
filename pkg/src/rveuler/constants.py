"""Default physical constants (km, s, rad).

The two worked scenarios never state their constants, so these are
standard Earth values and only defaults: every scenario takes them from
configuration.
"""

MU_EARTH = 398600.4418  # km^3/s^2
OMEGA_EARTH = 7.292115e-5  # rad/s
R_EARTH = 6378.0  # km

# Exponential atmosphere placeholder
RHO0 = 1.225e9  # kg/km^3 (1.225 kg/m^3)
SCALE_HEIGHT = 7.5  # km

V_MIN = 1e-9  # km/s, below this the velocity frame is undefined

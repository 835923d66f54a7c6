"""Independent reference computations used across the test modules.

Nothing here calls the rate functions under test; accelerations come from
the textbook rotating-frame form of Newton's law, and time derivatives of
state-to-Cartesian maps come from complex-step differentiation.
"""

import math

import numpy as np

MU = 398600.4418
H_CS = 1e-30


def complex_step(func, y, y_dot, h=H_CS):
    """Directional derivative of ``func`` at ``y`` along ``y_dot``, exact to roundoff."""
    y = np.asarray(y, dtype=complex) + 1j * h * np.asarray(y_dot, dtype=float)
    out = func(y)
    if isinstance(out, tuple):
        return tuple(np.imag(o) / h for o in out)
    return np.imag(out) / h


def apparent_acceleration(r_vec, v_vec, f_over_m, omega=(0.0, 0.0, 0.0), alpha=(0.0, 0.0, 0.0)):
    """Acceleration seen from a frame spinning at ``omega`` with spin rate change ``alpha``."""
    w = np.asarray(omega, dtype=float)
    al = np.asarray(alpha, dtype=float)
    r_vec = np.asarray(r_vec, dtype=float)
    return (
        np.asarray(f_over_m, dtype=float)
        - 2.0 * np.cross(w, v_vec)
        - np.cross(al, r_vec)
        - np.cross(w, np.cross(w, r_vec))
    )


def gravity(r_vec, mu=MU):
    r_vec = np.asarray(r_vec, dtype=float)
    return -mu * r_vec / np.linalg.norm(r_vec) ** 3


def rodrigues_dcm(axis, angle):
    """Passive DCM ``C_BA`` of a frame turned by ``angle`` about ``axis``."""
    q = np.asarray(axis, dtype=float)
    qx = np.array([[0.0, -q[2], q[1]], [q[2], 0.0, -q[0]], [-q[1], q[0], 0.0]])
    return math.cos(angle) * np.eye(3) + (1.0 - math.cos(angle)) * np.outer(q, q) - math.sin(angle) * qx


def random_unit(rng, n=3):
    x = rng.normal(size=n)
    return x / np.linalg.norm(x)


def lift_drag_vector(r_vec, v_vec, drag, lift, bank):
    """Aerodynamic acceleration with bank measured from the vertical plane, positive right."""
    v_hat = v_vec / np.linalg.norm(v_vec)
    r_hat = r_vec / np.linalg.norm(r_vec)
    up = r_hat - (r_hat @ v_hat) * v_hat
    up /= np.linalg.norm(up)
    right = np.cross(v_hat, up)
    return -drag * v_hat + lift * (math.cos(bank) * up + math.sin(bank) * right)

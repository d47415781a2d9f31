"""Closed-form references for the stationary example waveforms.

Nothing in the estimation path calls these; the tests use them as oracles.
"""
import math

import numpy as np
from scipy.special import ellipe, ellipeinc


def unbalanced_omega(v_alpha, v_beta, omega_o, theta):
    """|omega_v| of v = (V_alpha cos theta, V_beta sin theta, 0)."""
    theta = np.asarray(theta, dtype=float)
    return omega_o * v_alpha * v_beta / (v_alpha ** 2 * np.cos(theta) ** 2 + v_beta ** 2 * np.sin(theta) ** 2)


def ellipse_arc_length(v_alpha, v_beta, omega_o, duration):
    """Arc length of the unbalanced trajectory over ``duration`` seconds from theta = 0.

    Written with the semimajor component so the elliptic parameter stays in [0, 1].
    """
    a, b = max(v_alpha, v_beta), min(v_alpha, v_beta)
    m = 1.0 - (b / a) ** 2
    phi = omega_o * duration
    if v_alpha >= v_beta:
        return a / omega_o * ellipeinc(phi, m)
    # beta-major ellipse: shift the amplitude by a quarter turn
    return a / omega_o * (ellipeinc(phi + math.pi / 2, m) - ellipeinc(math.pi / 2, m))


def harmonic_perimeter(v, v_h, order, omega_o):
    """One-period arc length of V e^{j theta} + V_h e^{j h theta} for integer ``order``."""
    if float(order) != int(order) or order < 2:
        raise ValueError(f"closed form needs an integer harmonic order >= 2, got {order}")
    period = 2.0 * math.pi / omega_o
    total = v + v_h
    if total == 0:
        return 0.0
    m = 4.0 * v * v_h / total ** 2
    return 2.0 * period / math.pi * total * ellipe(m)


def harmonic_gamma_prime(v, v_h, order, phi=0.0, phi_h=0.0):
    """|v(T)|^2 - |v(0)|^2 over one fundamental period; zero for integer orders."""
    delta = phi - phi_h
    return v * v_h * 2.0 * (math.cos(2.0 * math.pi * (1.0 - order) + delta) - math.cos(delta))

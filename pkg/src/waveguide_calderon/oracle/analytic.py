"""Closed-form reference values on the disk and for symbolic conductivities."""

from __future__ import annotations

import math

import numpy as np
from scipy import special

TWO_PI = 2.0 * math.pi


def bessel_ratio_series(m: int, z: float, terms: int = 80) -> float:
    """I_m′(z)/I_m(z) from the power series of I_m."""
    m = abs(m)
    if z == 0.0:
        raise ValueError("the ratio is singular at z = 0")
    half = 0.5 * z
    term = half**m / math.factorial(m)
    value = 0.0
    derivative = 0.0
    for j in range(terms):
        value += term
        derivative += term * (2 * j + m) / z
        term *= half * half / ((j + 1) * (j + 1 + m))
    return derivative / value


def disk_dn_analytic(
    c: float, radius: float, k: int, m: int, theta: float = 0.0
) -> float:
    """DN eigenvalue of −Δ + c on the disk for u = f(r) e^{imφ} e^{i(θ + 2πk)x₁}.

    With κ² = (θ + 2πk)² + c the radial factor is I_m(κr), J_m(√−κ² r) or r^{|m|}.
    """
    m = abs(m)
    kappa2 = (theta + TWO_PI * k) ** 2 + c
    if kappa2 == 0.0:
        return m / radius
    if kappa2 > 0:
        kappa = math.sqrt(kappa2)
        z = kappa * radius
        if m == 0:
            return float(kappa * special.ive(1, z) / special.ive(0, z))
        derivative = 0.5 * (special.ive(m - 1, z) + special.ive(m + 1, z))
        return float(kappa * derivative / special.ive(m, z))
    mu = math.sqrt(-kappa2)
    z = mu * radius
    return float(mu * special.jvp(m, z) / special.jv(m, z))


def exponential_liouville(beta: float) -> float:
    """V_a for a = c·e^{βx₂}: (e^{βx₂/2})″ / e^{βx₂/2} = β²/4."""
    return 0.25 * beta**2


def disk_fourier_transform(radius: float, eta: tuple[float, float] | np.ndarray) -> float:
    """∫_{|x′|<R} e^{−iη·x′} dx′ = 2πR J₁(|η|R)/|η|."""
    norm = float(np.linalg.norm(eta))
    if norm == 0.0:
        return math.pi * radius**2
    return float(TWO_PI * radius * special.j1(norm * radius) / norm)


def disk_poincare_constant(radius: float = 1.0) -> float:
    """First zero of J₀ over R."""
    return float(special.jn_zeros(0, 1)[0] / radius)


def square_poincare_constant(side: float = 1.0) -> float:
    return math.pi * math.sqrt(2.0) / side

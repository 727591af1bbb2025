"""The log-log stability modulus Φ."""

from __future__ import annotations

import math

import numpy as np

GAMMA_STAR_LIMIT = math.exp(-math.e)


def _check_gamma_star(gamma_star: float) -> None:
    if not 0.0 < gamma_star < GAMMA_STAR_LIMIT:
        raise ValueError(f"γ* must lie in (0, e^(-e)), got {gamma_star}")


def stability_modulus(gamma: float, gamma_star: float) -> float:
    """Φ(γ): γ above γ*, 1/ln|ln γ| on (0, γ*), 0 at 0."""
    _check_gamma_star(gamma_star)
    if gamma < 0 or math.isnan(gamma):
        raise ValueError(f"γ must be non-negative, got {gamma}")
    if gamma == 0.0:
        return 0.0
    if gamma >= gamma_star:
        return float(gamma)
    return 1.0 / math.log(abs(math.log(gamma)))


def stability_modulus_array(gammas: np.ndarray, gamma_star: float) -> np.ndarray:
    return np.array([stability_modulus(float(g), gamma_star) for g in np.ravel(gammas)])

"""Error budget a/τ + b·e^{cτ}γ, its minimiser and the τ policy."""

from __future__ import annotations

import math

import numpy as np
from pydantic import BaseModel, Field
from scipy.optimize import brentq, nnls

_EXPONENT_CAP = 700.0


class ErrorBudget(BaseModel):
    """Fitted envelope errors(τ) ≤ a/τ + b·e^{cτ}γ."""

    a: float = Field(description="Coefficient of the 1/τ term")
    b: float = Field(description="Coefficient of the e^{cτ}γ term")
    c: float = Field(description="Exponential rate")
    gamma: float = Field(description="Data distance γ used in the fit")

    def bound(self, tau: float) -> float:
        return self.a / tau + self.b * math.exp(min(self.c * tau, _EXPONENT_CAP)) * self.gamma


def fit_error_budget(taus: list[float], errors: list[float], gamma: float) -> ErrorBudget:
    """Tightest envelope of the form a/τ + b e^{cτ}γ that lies above every error."""
    t = np.asarray(taus, dtype=float)
    e = np.asarray(errors, dtype=float)
    if gamma <= 0:
        return ErrorBudget(a=float(np.max(e * t)), b=0.0, c=0.0, gamma=gamma)
    best: tuple[float, float, float, float] | None = None
    for c in np.linspace(1e-3, min(5.0, _EXPONENT_CAP / t.max()), 200):
        design = np.stack([1.0 / t, np.exp(c * t) * gamma], axis=1)
        coef, _ = nnls(design, e)
        predicted = design @ coef
        if not np.any(predicted > 0):
            continue
        factor = max(1.0, float(np.max(e / np.where(predicted > 0, predicted, np.inf))))
        coef = coef * factor
        score = float(np.sum((design @ coef - e) ** 2))
        if best is None or score < best[0]:
            best = (score, float(coef[0]), float(coef[1]), float(c))
    if best is None:
        return ErrorBudget(a=float(np.max(e * t)), b=0.0, c=0.0, gamma=gamma)
    return ErrorBudget(a=best[1], b=best[2], c=best[3], gamma=gamma)


def optimal_tau(gamma: float, a: float, b: float, c: float, *, tau_max: float = 1e6) -> float:
    """Minimiser of a/τ + b e^{cτ}γ (infinite when the data term vanishes)."""
    if gamma <= 0 or b <= 0 or c <= 0:
        return math.inf
    if a <= 0:
        return 0.0

    def slope(tau: float) -> float:
        return math.log(a) - 2.0 * math.log(tau) - math.log(b * c * gamma) - c * tau

    lo, hi = 1e-9, tau_max
    if slope(lo) <= 0:
        return lo
    if slope(hi) >= 0:
        return hi
    return float(brentq(slope, lo, hi))


def tau_policy(gamma: float, floor: float, c_hat: float, *, tau_max: float = math.inf) -> float:
    """τ(γ) = max(floor, ⌈ln ln(1/γ)/ĉ⌉), capped at ``tau_max``."""
    if gamma <= 0:
        return max(floor, tau_max) if math.isfinite(tau_max) else floor
    if gamma >= math.exp(-1.0):
        return min(floor, tau_max)
    return min(max(floor, float(math.ceil(math.log(math.log(1.0 / gamma)) / c_hat))), tau_max)

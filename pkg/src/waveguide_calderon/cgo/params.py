"""CGO frequency parameters (k, η, ξ, r, θ) and the derived ℓ, τ, ζ₁, ζ₂."""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from waveguide_calderon.errors import CGOParameterError

TWO_PI = 2.0 * math.pi
_ORTHOGONALITY_TOLERANCE = 1e-12


def _xi_from_eta(eta: np.ndarray, xi0: np.ndarray | None) -> np.ndarray:
    xi = np.array([-eta[1], eta[0]]) / np.linalg.norm(eta)
    if xi0 is not None and np.linalg.norm(-xi - xi0) < np.linalg.norm(xi - xi0):
        xi = -xi
    return xi


@dataclass(frozen=True, eq=False)
class CGOParams:
    """Parameters of the CGO pair e^{ζⱼ·x}, ζⱼ ∈ 𝒵_θ.

    ``ell``, ``tau``, ``zeta1`` and ``zeta2`` are derived; ``zeta1 + conj(zeta2)``
    equals i(2πk, η).
    """

    k: int
    eta: np.ndarray
    xi: np.ndarray
    r: float
    theta: float

    @cached_property
    def ell(self) -> np.ndarray:
        shift = math.floor(self.r) + (1.0 if self.k % 2 == 0 else 1.5)
        first = self.theta + TWO_PI * shift
        eta2 = float(self.eta @ self.eta)
        return np.concatenate([[first], -TWO_PI * self.k * first * self.eta / eta2])

    @cached_property
    def tau(self) -> float:
        eta2 = float(self.eta @ self.eta)
        return math.sqrt(eta2 / 4.0 + (math.pi * self.k) ** 2 + float(self.ell @ self.ell))

    @cached_property
    def zeta1(self) -> np.ndarray:
        head = np.array([1j * math.pi * self.k])
        tail = -self.tau * self.xi + 0.5j * self.eta
        return np.concatenate([head, tail]) + 1j * self.ell

    @cached_property
    def zeta2(self) -> np.ndarray:
        head = np.array([-1j * math.pi * self.k])
        tail = self.tau * self.xi - 0.5j * self.eta
        return np.concatenate([head, tail]) + 1j * self.ell

    @property
    def frequency(self) -> np.ndarray:
        """(2πk, η₁, η₂)."""
        return np.concatenate([[TWO_PI * self.k], self.eta])

    @property
    def n1(self) -> int:
        """Axial mode index of e^{ζ₁·x}: ζ₁,₁ = i(θ + 2πn₁)."""
        return round((math.pi * self.k + self.ell[0] - self.theta) / TWO_PI)

    @property
    def n2(self) -> int:
        return round((-math.pi * self.k + self.ell[0] - self.theta) / TWO_PI)

    @property
    def tau_upper_bound(self) -> float:
        norm_eta = float(np.linalg.norm(self.eta))
        return float(np.linalg.norm(self.frequency)) / 2.0 + 4.0 * math.pi * (self.r + 1.0) * (
            1.0 + abs(TWO_PI * self.k) / norm_eta
        )

    def phase(self, zeta: np.ndarray, x1: np.ndarray, x2: np.ndarray, x3: np.ndarray) -> np.ndarray:
        """e^{ζ·x} at broadcast coordinates."""
        return np.exp(zeta[0] * x1 + zeta[1] * x2 + zeta[2] * x3)

    def transverse_phase(self, zeta: np.ndarray, points: np.ndarray) -> np.ndarray:
        """e^{ζ′·x′} at cross-section points."""
        return np.exp(points @ zeta[1:])

    def as_dict(self) -> dict[str, object]:
        return {
            "k": self.k,
            "eta": self.eta.tolist(),
            "xi": self.xi.tolist(),
            "r": self.r,
            "theta": self.theta,
            "ell": self.ell.tolist(),
            "tau": self.tau,
            "zeta1": [[z.real, z.imag] for z in self.zeta1],
            "zeta2": [[z.real, z.imag] for z in self.zeta2],
            "n1": self.n1,
            "n2": self.n2,
        }


def make_cgo_params(
    k: int,
    eta: tuple[float, float] | np.ndarray,
    r: float,
    theta: float,
    *,
    xi0: tuple[float, float] | np.ndarray | None = None,
    xi: tuple[float, float] | np.ndarray | None = None,
) -> CGOParams:
    """Build and verify a CGO parameter set.

    ξ is η/|η| turned by +90°, with its sign chosen to approach ``xi0``; an
    explicit ``xi`` overrides it and must be a unit vector orthogonal to η.
    """
    eta = np.asarray(eta, dtype=float)
    if eta.shape != (2,) or not np.all(np.isfinite(eta)):
        raise CGOParameterError("η must be a finite 2-vector")
    if float(np.linalg.norm(eta)) == 0.0:
        raise CGOParameterError("η must be nonzero")
    if r <= 0:
        raise CGOParameterError(f"r must be positive, got {r}")
    if not 0.0 <= theta < TWO_PI:
        raise CGOParameterError(f"θ must lie in [0, 2π), got {theta}")
    if xi is None:
        direction = _xi_from_eta(eta, None if xi0 is None else np.asarray(xi0, dtype=float))
    else:
        direction = np.asarray(xi, dtype=float)
        if abs(np.linalg.norm(direction) - 1.0) > 1e-12:
            raise CGOParameterError("ξ must be a unit vector")
        if abs(direction @ eta) > _ORTHOGONALITY_TOLERANCE * np.linalg.norm(eta):
            raise CGOParameterError("ξ must be orthogonal to η")

    params = CGOParams(int(k), eta, direction, float(r), float(theta))
    if not TWO_PI * params.r < params.tau <= params.tau_upper_bound * (1 + 1e-12):
        raise CGOParameterError(f"τ = {params.tau:.6g} violates 2πr < τ ≤ upper bound")
    return params


def params_for_tau(
    k: int,
    eta: tuple[float, float] | np.ndarray,
    theta: float,
    tau_target: float,
    *,
    xi0: tuple[float, float] | np.ndarray | None = None,
) -> CGOParams:
    """Parameters with the smallest integer part of r whose τ reaches ``tau_target``."""
    for whole in range(100_000):
        params = make_cgo_params(k, eta, whole + 0.5, theta, xi0=xi0)
        if params.tau >= tau_target:
            return params
    raise CGOParameterError(f"τ = {tau_target} is out of reach")


def check_invariants(params: CGOParams, tol: float = 1e-12) -> dict[str, float]:
    """Relative defects of the algebraic identities; all should be below ``tol``."""
    scale = max(params.tau, 1.0)
    defects = {}
    for name, zeta in (("zeta1", params.zeta1), ("zeta2", params.zeta2)):
        re, im = zeta.real, zeta.imag
        defects[f"{name}.orthogonal"] = abs(float(re @ im)) / scale**2
        defects[f"{name}.isotropic"] = abs(float(np.linalg.norm(re) - np.linalg.norm(im))) / scale
        axial = (zeta[0].imag - params.theta) / TWO_PI
        defects[f"{name}.axial"] = abs(axial - round(axial)) + abs(zeta[0].real)
    defects["ell.frequency"] = abs(float(params.ell @ params.frequency)) / scale**2
    defects["ell.xi"] = abs(float(params.ell[1:] @ params.xi)) / scale
    eta2 = float(params.eta @ params.eta)
    tau2 = eta2 / 4 + (math.pi * params.k) ** 2 + float(params.ell @ params.ell)
    defects["tau"] = abs(params.tau**2 - tau2) / scale**2
    pair = params.zeta1 + params.zeta2.conj() - 1j * params.frequency
    defects["pair"] = float(np.abs(pair).max()) / scale
    failed = {key: value for key, value in defects.items() if value > tol}
    if failed:
        raise CGOParameterError(f"CGO identities violated: {failed}")
    return defects

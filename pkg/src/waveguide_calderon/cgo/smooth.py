"""Periodic CGO remainder by a shifted-lattice Fourier solve on a box around ω."""

from __future__ import annotations

import logging
import math
import time
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy import fft
from scipy.sparse.linalg import LinearOperator, gmres

from waveguide_calderon.cgo.params import CGOParams
from waveguide_calderon.cgo.solution import CGOSolution, cgo_expansion
from waveguide_calderon.errors import CGOParameterError, SolverError
from waveguide_calderon.forward.potential import PotentialField
from waveguide_calderon.geometry.mesh import CrossSectionMesh
from waveguide_calderon.models import CGOKind
from waveguide_calderon.spectral.fiber import FiberContext

logger = logging.getLogger(__name__)

TWO_PI = 2.0 * math.pi
BOX_MARGIN = 0.1


@dataclass(frozen=True, eq=False)
class FourierBox:
    """Square of side L around ω, with ξ along the first lattice axis.

    Lattice frequencies along ξ are shifted by π/L, so no frequency has a zero
    ξ-component.
    """

    mesh: CrossSectionMesh
    xi: np.ndarray
    n: int

    @property
    def side(self) -> float:
        return 2.0 * (self.mesh.c_omega + BOX_MARGIN)

    @property
    def xi_perp(self) -> np.ndarray:
        return np.array([-self.xi[1], self.xi[0]])

    @cached_property
    def integers(self) -> np.ndarray:
        return fft.fftfreq(self.n, d=1.0 / self.n)

    @cached_property
    def alpha(self) -> tuple[np.ndarray, np.ndarray]:
        """Frequencies along ξ (shifted) and along ξ⊥."""
        step = TWO_PI / self.side
        return step * self.integers + math.pi / self.side, step * self.integers

    def local(self, points: np.ndarray) -> np.ndarray:
        """Box coordinates y ∈ [0, L)² of cross-section points."""
        half = self.side / 2.0
        return np.stack([points @ self.xi + half, points @ self.xi_perp + half], axis=-1)

    @cached_property
    def grid_points(self) -> np.ndarray:
        """Cross-section coordinates of the n × n box grid, shape ``(n, n, 2)``."""
        y = np.arange(self.n) * self.side / self.n - self.side / 2.0
        y1, y2 = np.meshgrid(y, y, indexing="ij")
        return y1[..., None] * self.xi + y2[..., None] * self.xi_perp

    @cached_property
    def modulation(self) -> np.ndarray:
        y1 = np.arange(self.n) * self.side / self.n
        return np.exp(1j * math.pi * y1 / self.side)[:, None]

    def sample_potential(self, potential: PotentialField) -> np.ndarray:
        """V̂_m on the box grid, extended by zero outside ω."""
        points = self.grid_points.reshape(-1, 2)
        values = self.mesh.interpolator(potential.modes.T)(points)
        values[~self.mesh.contains(points)] = 0.0
        return values.T.reshape(-1, self.n, self.n)

    def evaluate(self, coefficients: np.ndarray, points: np.ndarray) -> np.ndarray:
        """Evaluate per-mode box series at cross-section points."""
        y = self.local(points)
        k = TWO_PI / self.side * self.integers
        e1 = np.exp(1j * np.outer(y[:, 0], k))
        e2 = np.exp(1j * np.outer(y[:, 1], k))
        values = np.einsum("mab,pa,pb->mp", coefficients, e1, e2, optimize=True)
        return values * np.exp(1j * math.pi * y[:, 0] / self.side)[None, :]


def _symbol(box: FourierBox, zeta: np.ndarray, K: int) -> np.ndarray:
    a1, a2 = box.alpha
    axial = TWO_PI * np.arange(-K, K + 1)
    z_xi = zeta[1:] @ box.xi
    z_perp = zeta[1:] @ box.xi_perp
    m = axial[:, None, None]
    b1 = a1[None, :, None]
    b2 = a2[None, None, :]
    return m**2 + b1**2 + b2**2 - 2j * (zeta[0] * m + z_xi * b1 + z_perp * b2)


def _convolve(v_box: np.ndarray, w: np.ndarray, K: int) -> np.ndarray:
    """Axial-mode convolution (V w)_m = Σ_j V_j w_{m−j}, truncated to |m| ≤ K."""
    bandwidth = v_box.shape[0] // 2
    out = np.zeros_like(w)
    for j in range(-min(bandwidth, 2 * K), min(bandwidth, 2 * K) + 1):
        lo, hi = max(-K, -K + j), min(K, K + j)
        if lo > hi:
            continue
        out[lo + K : hi + K + 1] += v_box[j + bandwidth][None] * w[lo - j + K : hi - j + K + 1]
    return out


def solve_cgo_smooth(
    potential: PotentialField,
    params: CGOParams,
    *,
    K: int = 2,
    grid: int = 48,
    tau_floor: float = 20.0,
    rtol: float = 1e-10,
) -> CGOSolution:
    """Solve (−Δ − 2ζ₁·∇ + V)v = −V for a 1-periodic v and return u_{ζ₁}."""
    if params.tau < tau_floor:
        raise CGOParameterError(f"τ = {params.tau:.4g} is below the floor {tau_floor:g}")
    mesh = potential.mesh
    zeta = params.zeta1
    box = FourierBox(mesh, params.xi, grid)
    nm, n = 2 * K + 1, grid
    started = time.perf_counter()

    v_box = box.sample_potential(potential)
    symbol = _symbol(box, zeta, K)
    bandwidth = v_box.shape[0] // 2
    rhs_phys = np.zeros((nm, n, n), dtype=complex)
    for m in range(-min(bandwidth, K), min(bandwidth, K) + 1):
        rhs_phys[m + K] = -v_box[m + bandwidth] / box.modulation
    rhs = fft.fft2(rhs_phys, norm="forward") / symbol

    coefficients = np.zeros((nm, n, n), dtype=complex)
    residual = 0.0
    rhs_norm = float(np.linalg.norm(rhs))
    if rhs_norm > 0:

        def matvec(flat: np.ndarray) -> np.ndarray:
            w = flat.reshape(nm, n, n)
            phys = fft.ifft2(w, norm="forward")
            product = fft.fft2(_convolve(v_box, phys, K), norm="forward")
            return (w + product / symbol).ravel()

        size = nm * n * n
        operator = LinearOperator((size, size), matvec=matvec, dtype=complex)
        solution, info = gmres(operator, rhs.ravel(), rtol=rtol, atol=0.0, restart=60, maxiter=200)
        residual = float(np.linalg.norm(matvec(solution) - rhs.ravel()) / rhs_norm)
        if info > 0:
            raise SolverError(
                "GMRES did not converge for the periodic remainder", residual=residual
            )
        coefficients = solution.reshape(nm, n, n)

    remainder = box.evaluate(coefficients, mesh.vertices)
    alpha_sq = (TWO_PI * np.arange(-K, K + 1))[:, None, None] ** 2 + (
        box.alpha[0][None, :, None] ** 2 + box.alpha[1][None, None, :] ** 2
    )
    h2_norm = box.side * math.sqrt(float(np.sum((1 + alpha_sq) ** 2 * np.abs(coefficients) ** 2)))
    ctx = FiberContext(params.theta, K, mesh, center=params.n1)
    logger.debug(
        "smooth remainder τ=%.3g: %d unknowns, residual %.2e, %.2fs",
        params.tau,
        nm * n * n,
        residual,
        time.perf_counter() - started,
    )
    return CGOSolution(
        params=params,
        kind=CGOKind.SMOOTH,
        remainder=remainder,
        u=cgo_expansion(params, zeta, remainder, ctx),
        residual=residual,
        diagnostics={"h2_box_norm": h2_norm, "box_side": box.side, "grid": n},
    )

"""Quasi-periodic axial Fourier modes on the elementary cell."""

from __future__ import annotations

import math
import threading
import weakref
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.sparse.linalg import splu

from waveguide_calderon.errors import SpectralError
from waveguide_calderon.geometry.mesh import CrossSectionMesh

TWO_PI = 2.0 * math.pi


@dataclass(frozen=True, eq=False)
class FiberContext:
    """Quasi-momentum θ, mode window and cross-section mesh of one fiber.

    The window holds the modes ``center − K, …, center + K``; mode ``n`` is the
    exponential ``e^{i(θ + 2πn)x₁}``.
    """

    theta: float
    K: int
    mesh: CrossSectionMesh
    center: int = 0

    def __post_init__(self) -> None:
        if not 0.0 <= self.theta < TWO_PI:
            raise SpectralError(f"θ must lie in [0, 2π), got {self.theta}")
        if self.K < 1:
            raise SpectralError(f"mode truncation K must be at least 1, got {self.K}")

    @property
    def n_modes(self) -> int:
        return 2 * self.K + 1

    @cached_property
    def modes(self) -> np.ndarray:
        return np.arange(self.center - self.K, self.center + self.K + 1)

    @cached_property
    def frequencies(self) -> np.ndarray:
        """Axial frequencies ω_n = θ + 2πn of the window."""
        return self.theta + TWO_PI * self.modes

    @property
    def n_x1(self) -> int:
        return 4 * self.K + 4

    @cached_property
    def x1_grid(self) -> np.ndarray:
        return np.arange(self.n_x1) / self.n_x1

    def basis(self, x1: np.ndarray) -> np.ndarray:
        """Values of e^{i ω_n x₁}, shape ``(len(x1), n_modes)``."""
        return np.exp(1j * np.outer(np.asarray(x1, dtype=float), self.frequencies))

    def with_window(self, center: int, K: int | None = None) -> FiberContext:
        return FiberContext(self.theta, self.K if K is None else K, self.mesh, center)

    def same_fiber(self, other: FiberContext) -> bool:
        return (
            self.theta == other.theta
            and self.K == other.K
            and self.center == other.center
            and self.mesh is other.mesh
        )


@dataclass(frozen=True, eq=False)
class ModeExpansion:
    """Per-mode nodal cross-section fields of a θ-quasi-periodic cell field."""

    coefficients: np.ndarray
    ctx: FiberContext

    def __post_init__(self) -> None:
        expected = (self.ctx.n_modes, self.ctx.mesh.n_nodes)
        if self.coefficients.shape != expected:
            raise SpectralError(f"coefficients must have shape {expected}")

    @classmethod
    def zeros(cls, ctx: FiberContext) -> ModeExpansion:
        return cls(np.zeros((ctx.n_modes, ctx.mesh.n_nodes), dtype=complex), ctx)

    @classmethod
    def single_mode(cls, ctx: FiberContext, mode: int, field: np.ndarray) -> ModeExpansion:
        out = np.zeros((ctx.n_modes, ctx.mesh.n_nodes), dtype=complex)
        out[mode - ctx.modes[0]] = field
        return cls(out, ctx)

    def mode(self, n: int) -> np.ndarray:
        return self.coefficients[n - self.ctx.modes[0]]

    def l2_norm(self) -> float:
        """‖v‖_{L²(Ω̌)} by Parseval: Σₙ ‖v̂ₙ‖²_{L²(ω)}."""
        mass = self.ctx.mesh.mass
        c = self.coefficients
        return math.sqrt(float(np.real(np.einsum("kn,kn->", c.conj(), (mass @ c.T).T))))

    def boundary_trace(self) -> np.ndarray:
        return self.coefficients[:, self.ctx.mesh.boundary_nodes]

    def __add__(self, other: ModeExpansion) -> ModeExpansion:
        return ModeExpansion(self.coefficients + other.coefficients, self.ctx)

    def __sub__(self, other: ModeExpansion) -> ModeExpansion:
        return ModeExpansion(self.coefficients - other.coefficients, self.ctx)

    def __mul__(self, scale: complex) -> ModeExpansion:
        return ModeExpansion(self.coefficients * scale, self.ctx)

    __rmul__ = __mul__


def fiber_project(samples: np.ndarray, ctx: FiberContext) -> ModeExpansion:
    """Project samples on the uniform grid x₁ = j/N onto the fiber modes.

    ``samples`` has shape ``(N, n_nodes)`` with N ≥ 4K + 4.
    """
    samples = np.asarray(samples)
    n = samples.shape[0]
    if n < ctx.n_x1:
        raise SpectralError(f"x₁-grid of {n} points is too coarse for K={ctx.K}")
    x1 = np.arange(n) / n
    demodulated = samples * np.exp(-1j * ctx.theta * x1)[:, None]
    spectrum = np.fft.fft(demodulated, axis=0) / n
    return ModeExpansion(spectrum[np.mod(ctx.modes, n)], ctx)


def fiber_synthesize(expansion: ModeExpansion, x1: np.ndarray | None = None) -> np.ndarray:
    """Evaluate the cell field at axial positions (default: the context grid)."""
    ctx = expansion.ctx
    points = ctx.x1_grid if x1 is None else np.asarray(x1, dtype=float)
    return ctx.basis(points) @ expansion.coefficients


def fiber_derivative(expansion: ModeExpansion, x1: np.ndarray | None = None) -> np.ndarray:
    """Axial derivative ∂₁v at the requested positions."""
    ctx = expansion.ctx
    points = ctx.x1_grid if x1 is None else np.asarray(x1, dtype=float)
    weighted = expansion.coefficients * (1j * ctx.frequencies)[:, None]
    return ctx.basis(points) @ weighted


class InteriorMassSolver:
    """Factorized interior mass matrix M_II of one mesh."""

    def __init__(self, mesh: CrossSectionMesh) -> None:
        inner = mesh.interior_nodes
        self._inner = inner
        self._lu = splu(mesh.mass[inner][:, inner].tocsc())

    def solve(self, rhs: np.ndarray) -> np.ndarray:
        if np.iscomplexobj(rhs):
            return self._lu.solve(np.ascontiguousarray(rhs.real)) + 1j * self._lu.solve(
                np.ascontiguousarray(rhs.imag)
            )
        return self._lu.solve(np.ascontiguousarray(rhs))


# entries go away with their mesh
_MASS_SOLVERS: weakref.WeakKeyDictionary[CrossSectionMesh, InteriorMassSolver] = (
    weakref.WeakKeyDictionary()
)
_MASS_SOLVERS_LOCK = threading.Lock()


def _mass_solver(mesh: CrossSectionMesh) -> InteriorMassSolver:
    with _MASS_SOLVERS_LOCK:
        solver = _MASS_SOLVERS.get(mesh)
        if solver is None:
            solver = InteriorMassSolver(mesh)
            _MASS_SOLVERS[mesh] = solver
    return solver


def discrete_cross_laplacian(mesh: CrossSectionMesh, fields: np.ndarray) -> np.ndarray:
    """Discrete Δ′ on interior nodes, zero on the boundary.

    ``fields`` holds nodal fields along its last axis.
    """
    fields = np.asarray(fields)
    flat = fields.reshape(-1, mesh.n_nodes)
    inner = mesh.interior_nodes
    load = (mesh.stiffness @ flat.T)[inner]
    out = np.zeros(flat.shape, dtype=np.result_type(fields, float))
    out[:, inner] = -_mass_solver(mesh).solve(load).T
    return out.reshape(fields.shape)


def mode_operator_apply(expansion: ModeExpansion) -> ModeExpansion:
    """Apply −Δ′ + ω_n² mode by mode on interior nodes (boundary rows are zero)."""
    ctx = expansion.ctx
    inner = ctx.mesh.interior_nodes
    out = -discrete_cross_laplacian(ctx.mesh, expansion.coefficients)
    out[:, inner] += (ctx.frequencies**2)[:, None] * expansion.coefficients[:, inner]
    return ModeExpansion(out, ctx)

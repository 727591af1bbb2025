"""Scalar periodic conductivities and their finite-difference derivatives."""

from __future__ import annotations

import hashlib
import logging
import math
from collections.abc import Callable
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from waveguide_calderon.config import ConductivityKind, ConductivityPreset
from waveguide_calderon.errors import AdmissibilityError
from waveguide_calderon.forward.potential import bump
from waveguide_calderon.geometry.mesh import CrossSectionMesh

logger = logging.getLogger(__name__)

ConductivityFunction = Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]

FD_STEP = 1e-3
AXIAL_SAMPLES = 8


def _broadcast(func: ConductivityFunction, x1, x2, x3) -> np.ndarray:
    shape = np.broadcast_shapes(np.shape(x1), np.shape(x2), np.shape(x3))
    return np.broadcast_to(np.asarray(func(x1, x2, x3), dtype=float), shape)


@dataclass(frozen=True, eq=False)
class ConductivityField:
    """a(x₁, x′) > 0, 1-periodic in x₁, with floor a* and bounds M±.

    ``func`` is evaluated by broadcasting ``(x₁, x₂, x₃)``; derivatives are
    taken by central differences of step ``FD_STEP``.
    """

    func: ConductivityFunction
    mesh: CrossSectionMesh
    a_star: float
    bound_plus: float
    bound_minus: float
    name: str = "a"

    def __post_init__(self) -> None:
        if self.a_star <= 0:
            raise AdmissibilityError(f"conductivity floor a* must be positive, got {self.a_star}")

    def __call__(self, x1, x2, x3) -> np.ndarray:
        return _broadcast(self.func, x1, x2, x3)

    def sqrt(self, x1, x2, x3) -> np.ndarray:
        return np.sqrt(self(x1, x2, x3))

    def samples(self, x1: np.ndarray) -> np.ndarray:
        """Values at axial positions ``x1`` and every mesh node, ``(len(x1), n_nodes)``."""
        v = self.mesh.vertices
        return self(np.asarray(x1, dtype=float)[:, None], v[None, :, 0], v[None, :, 1])

    def sqrt_samples(self, x1: np.ndarray) -> np.ndarray:
        return np.sqrt(self.samples(x1))

    def boundary_samples(
        self, x1: np.ndarray, func: ConductivityFunction | None = None
    ) -> np.ndarray:
        """``func`` (default a) at the boundary loop, ``(len(x1), n_boundary)``."""
        points = self.mesh.vertices[self.mesh.boundary_nodes]
        f = func or self.func
        x1 = np.asarray(x1, dtype=float)[:, None]
        return _broadcast(f, x1, points[None, :, 0], points[None, :, 1])

    @cached_property
    def x1_independent(self) -> bool:
        grid = np.arange(AXIAL_SAMPLES) / AXIAL_SAMPLES
        values = self.samples(grid)
        return bool(np.abs(values - values[:1]).max() <= 1e-14 * max(1.0, np.abs(values).max()))

    @cached_property
    def content_hash(self) -> str:
        digest = hashlib.sha256(self.mesh.mesh_hash.encode())
        grid = np.arange(AXIAL_SAMPLES) / AXIAL_SAMPLES
        digest.update(np.ascontiguousarray(self.samples(grid)).tobytes())
        return digest.hexdigest()[:16]

    def perturbed(
        self, shape: ConductivityFunction, s: float, name: str | None = None
    ) -> ConductivityField:
        """a + s·shape with the same floor and bounds."""
        base = self.func
        return ConductivityField(
            lambda x1, x2, x3: _broadcast(base, x1, x2, x3) + s * _broadcast(shape, x1, x2, x3),
            self.mesh,
            self.a_star,
            self.bound_plus,
            self.bound_minus,
            name or f"{self.name}+{s:g}",
        )


def gradient(func: ConductivityFunction, x1, x2, x3, h: float = FD_STEP) -> tuple[np.ndarray, ...]:
    """Central-difference ∂₁, ∂₂, ∂₃ of ``func``."""
    return (
        (_broadcast(func, x1 + h, x2, x3) - _broadcast(func, x1 - h, x2, x3)) / (2 * h),
        (_broadcast(func, x1, x2 + h, x3) - _broadcast(func, x1, x2 - h, x3)) / (2 * h),
        (_broadcast(func, x1, x2, x3 + h) - _broadcast(func, x1, x2, x3 - h)) / (2 * h),
    )


def hessian_norm(func: ConductivityFunction, x1, x2, x3, h: float = FD_STEP) -> np.ndarray:
    """Frobenius norm of the finite-difference Hessian."""
    coords = [x1, x2, x3]
    total = 0.0
    for i in range(3):
        for j in range(3):
            def shifted(di: float, dj: float, i=i, j=j) -> np.ndarray:
                point = [np.asarray(c, dtype=float) for c in coords]
                point[i] = point[i] + di
                point[j] = point[j] + dj
                return _broadcast(func, *point)

            if i == j:
                second = (shifted(h, 0) - 2 * _broadcast(func, x1, x2, x3) + shifted(-h, 0)) / h**2
            else:
                second = (
                    shifted(h, h) - shifted(h, -h) - shifted(-h, h) + shifted(-h, -h)
                ) / (4 * h**2)
            total = total + second**2
    return np.sqrt(total)


def laplacian(func: ConductivityFunction, x1, x2, x3, h: float = FD_STEP) -> np.ndarray:
    """Seven-point Laplacian of ``func``."""
    center = _broadcast(func, x1, x2, x3)
    return (
        _broadcast(func, x1 + h, x2, x3)
        + _broadcast(func, x1 - h, x2, x3)
        + _broadcast(func, x1, x2 + h, x3)
        + _broadcast(func, x1, x2 - h, x3)
        + _broadcast(func, x1, x2, x3 + h)
        + _broadcast(func, x1, x2, x3 - h)
        - 6.0 * center
    ) / h**2


def normal_derivative(
    a: ConductivityField, func: ConductivityFunction, x1: np.ndarray, h: float = FD_STEP
) -> np.ndarray:
    """∂_ν′ func at the boundary loop by one-sided second-order differences.

    Returns ``(len(x1), n_boundary)``; the stencil points lie inside along −ν′.
    """
    mesh = a.mesh
    points = mesh.vertices[mesh.boundary_nodes]
    normals = mesh.node_normals
    x1 = np.asarray(x1, dtype=float)[:, None]

    def at(offset: float) -> np.ndarray:
        shifted = points - offset * normals
        return _broadcast(func, x1, shifted[None, :, 0], shifted[None, :, 1])

    return (3.0 * at(0.0) - 4.0 * at(h) + at(2.0 * h)) / (2.0 * h)


def conductivity_function(preset: ConductivityPreset) -> ConductivityFunction:
    """The symbolic a(x₁, x₂, x₃) of a preset."""
    value, beta, amp = preset.value, preset.beta, preset.amplitude

    match preset.kind:
        case ConductivityKind.CONSTANT:
            return lambda x1, x2, x3: value + 0.0 * (x1 + x2 + x3)
        case ConductivityKind.EXPONENTIAL:
            return lambda x1, x2, x3: value * np.exp(beta * x2) + 0.0 * (x1 + x3)
        case ConductivityKind.BUMP_FAMILY:
            shape = bump_shape(preset)
            return lambda x1, x2, x3: value + amp * shape(x1, x2, x3)
    raise ValueError(f"unknown conductivity kind {preset.kind!r}")


def bump_shape(preset: ConductivityPreset) -> ConductivityFunction:
    """Unit-amplitude bump of a preset, optionally modulated by 1 + cos(2πx₁)/2."""
    center, radius, axial = preset.center, preset.radius, preset.axial

    def shape(x1, x2, x3):
        profile = bump(x2, x3, center, radius)
        if axial:
            return (1.0 + 0.5 * np.cos(2.0 * math.pi * x1)) * profile
        return profile + 0.0 * x1

    return shape


def build_conductivity(
    preset: ConductivityPreset,
    mesh: CrossSectionMesh,
    *,
    a_star: float,
    bound_plus: float,
    bound_minus: float,
    name: str = "a",
) -> ConductivityField:
    return ConductivityField(
        conductivity_function(preset), mesh, a_star, bound_plus, bound_minus, name
    )

"""Real 1-periodic potentials stored as axial Fourier modes × nodal fields."""

from __future__ import annotations

import hashlib
import math
from collections.abc import Callable
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from waveguide_calderon.errors import AdmissibilityError
from waveguide_calderon.geometry.mesh import CrossSectionMesh

PotentialFunction = Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]

_REALITY_TOLERANCE = 1e-10


@dataclass(frozen=True, eq=False)
class PotentialField:
    """V(x₁, x′) = Σ_{|m|≤M} V̂_m(x′) e^{2πimx₁}.

    ``modes[m + M]`` holds V̂_m. ``bound_plus`` and ``bound_minus`` are the
    declared M₊ and M₋ of the admissible class.
    """

    modes: np.ndarray
    mesh: CrossSectionMesh
    bound_plus: float
    bound_minus: float
    name: str = "V"

    def __post_init__(self) -> None:
        if self.modes.ndim != 2 or self.modes.shape[0] % 2 != 1:
            raise ValueError("modes must have shape (2M+1, n_nodes)")
        if self.modes.shape[1] != self.mesh.n_nodes:
            raise ValueError("modes do not match the mesh")
        scale = max(float(np.abs(self.modes).max()), 1.0)
        if np.abs(self.modes - self.modes[::-1].conj()).max() > _REALITY_TOLERANCE * scale:
            raise AdmissibilityError(f"potential {self.name!r} is not real-valued")

    @property
    def bandwidth(self) -> int:
        return self.modes.shape[0] // 2

    @classmethod
    def from_samples(
        cls,
        mesh: CrossSectionMesh,
        samples: np.ndarray,
        bandwidth: int,
        *,
        bound_plus: float | None = None,
        bound_minus: float | None = None,
        name: str = "V",
    ) -> PotentialField:
        """Build from real samples on the uniform grid x₁ = j/N."""
        samples = np.real_if_close(np.asarray(samples))
        if np.iscomplexobj(samples):
            raise AdmissibilityError(f"potential {name!r} must be real-valued")
        n = samples.shape[0]
        if n < 2 * bandwidth + 1:
            raise ValueError(f"{n} axial samples cannot resolve bandwidth {bandwidth}")
        spectrum = np.fft.fft(samples, axis=0) / n
        index = np.mod(np.arange(-bandwidth, bandwidth + 1), n)
        modes = spectrum[index]
        modes = 0.5 * (modes + modes[::-1].conj())
        sup = float(np.abs(samples).max())
        neg = float(np.maximum(0.0, -samples).max())
        return cls(
            modes,
            mesh,
            sup if bound_plus is None else bound_plus,
            neg if bound_minus is None else bound_minus,
            name,
        )

    @classmethod
    def from_function(
        cls,
        mesh: CrossSectionMesh,
        func: PotentialFunction,
        bandwidth: int = 2,
        *,
        bound_plus: float | None = None,
        bound_minus: float | None = None,
        name: str = "V",
    ) -> PotentialField:
        """Sample ``func(x₁, x₂, x₃)`` on 4M+4 axial points and the mesh nodes."""
        n = 4 * bandwidth + 4
        x1 = (np.arange(n) / n)[:, None]
        values = func(x1, mesh.vertices[None, :, 0], mesh.vertices[None, :, 1])
        values = np.broadcast_to(values, (n, mesh.n_nodes))
        return cls.from_samples(
            mesh, values, bandwidth, bound_plus=bound_plus, bound_minus=bound_minus, name=name
        )

    @classmethod
    def constant(cls, mesh: CrossSectionMesh, value: float, name: str = "V") -> PotentialField:
        modes = np.full((1, mesh.n_nodes), value, dtype=complex)
        return cls(modes, mesh, abs(value), max(0.0, -value), name)

    @classmethod
    def zeros(cls, mesh: CrossSectionMesh) -> PotentialField:
        return cls.constant(mesh, 0.0, name="0")

    def mode(self, m: int) -> np.ndarray:
        if abs(m) > self.bandwidth:
            return np.zeros(self.mesh.n_nodes, dtype=complex)
        return self.modes[m + self.bandwidth]

    def samples(self, x1: np.ndarray) -> np.ndarray:
        """Real values at axial positions ``x1``, shape ``(len(x1), n_nodes)``."""
        m = np.arange(-self.bandwidth, self.bandwidth + 1)
        phases = np.exp(2j * math.pi * np.outer(np.asarray(x1, dtype=float), m))
        return np.real(phases @ self.modes)

    def __call__(self, x1: np.ndarray) -> np.ndarray:
        return self.samples(x1)

    @cached_property
    def _check_grid(self) -> np.ndarray:
        n = 8 * self.bandwidth + 8
        return self.samples(np.arange(n) / n)

    @property
    def sup_norm(self) -> float:
        return float(np.abs(self._check_grid).max())

    @property
    def negative_part_norm(self) -> float:
        return float(np.maximum(0.0, -self._check_grid).max())

    @property
    def is_x1_independent(self) -> bool:
        return self.bandwidth == 0 or bool(
            np.abs(np.delete(self.modes, self.bandwidth, axis=0)).max() == 0
        )

    def check_admissible(self, poincare: float | None = None) -> None:
        """Raise unless V lies in the admissible class 𝒱_ω(M±)."""
        slack = 1e-12 * max(1.0, self.bound_plus)
        if self.sup_norm > self.bound_plus + slack:
            raise AdmissibilityError(
                f"{self.name}: ‖V‖_∞ = {self.sup_norm:.6g} exceeds M₊ = {self.bound_plus:.6g}"
            )
        if self.negative_part_norm > self.bound_minus + slack:
            raise AdmissibilityError(
                f"{self.name}: ‖max(0,−V)‖_∞ = {self.negative_part_norm:.6g} exceeds "
                f"M₋ = {self.bound_minus:.6g}"
            )
        c_omega = self.mesh.poincare_constant if poincare is None else poincare
        if self.bound_minus >= c_omega:
            raise AdmissibilityError(
                f"{self.name}: M₋ = {self.bound_minus:.6g} is not below C_ω = {c_omega:.6g}"
            )

    @cached_property
    def content_hash(self) -> str:
        digest = hashlib.sha256(self.mesh.mesh_hash.encode())
        digest.update(np.ascontiguousarray(self.modes).tobytes())
        return digest.hexdigest()[:16]

    def _combine(self, other: PotentialField, sign: float) -> PotentialField:
        if other.mesh is not self.mesh:
            raise ValueError("potentials live on different meshes")
        width = max(self.bandwidth, other.bandwidth)
        out = np.zeros((2 * width + 1, self.mesh.n_nodes), dtype=complex)
        out[width - self.bandwidth : width + self.bandwidth + 1] += self.modes
        out[width - other.bandwidth : width + other.bandwidth + 1] += sign * other.modes
        op = "+" if sign > 0 else "-"
        return _observed_bounds(out, self.mesh, f"{self.name}{op}{other.name}")

    def __add__(self, other: PotentialField) -> PotentialField:
        return self._combine(other, 1.0)

    def __sub__(self, other: PotentialField) -> PotentialField:
        return self._combine(other, -1.0)

    def scaled(self, factor: float) -> PotentialField:
        return _observed_bounds(self.modes * factor, self.mesh, f"{factor:g}*{self.name}")

    def with_bounds(self, bound_plus: float, bound_minus: float) -> PotentialField:
        return PotentialField(self.modes, self.mesh, bound_plus, bound_minus, self.name)


def _observed_bounds(modes: np.ndarray, mesh: CrossSectionMesh, name: str) -> PotentialField:
    unbounded = PotentialField(modes, mesh, math.inf, math.inf, name)
    return unbounded.with_bounds(unbounded.sup_norm, unbounded.negative_part_norm)


def bump(x2: np.ndarray, x3: np.ndarray, center: tuple[float, float], radius: float) -> np.ndarray:
    """(1 − |x′ − c|²/ρ²)³ inside the disk of radius ρ, zero outside (C² bump)."""
    t = 1.0 - ((x2 - center[0]) ** 2 + (x3 - center[1]) ** 2) / radius**2
    return np.where(t > 0, t, 0.0) ** 3


def smooth_random_function(
    seed: int, terms: int = 4, max_axial: int = 1, max_wavenumber: float = 3.0
) -> PotentialFunction:
    """Seeded smooth trigonometric field with values in [−1, 1]."""
    rng = np.random.default_rng(seed)
    weights = rng.uniform(-1.0, 1.0, terms)
    weights /= np.abs(weights).sum()
    axial = rng.integers(0, max_axial + 1, terms)
    wave = rng.uniform(-max_wavenumber, max_wavenumber, (terms, 2))
    shifts = rng.uniform(0.0, 2.0 * math.pi, (terms, 2))

    def func(x1: np.ndarray, x2: np.ndarray, x3: np.ndarray) -> np.ndarray:
        total = np.zeros(np.broadcast_shapes(np.shape(x1), np.shape(x2)))
        for j in range(terms):
            total = total + weights[j] * np.cos(
                2.0 * math.pi * axial[j] * x1 + shifts[j, 0]
            ) * np.cos(wave[j, 0] * x2 + wave[j, 1] * x3 + shifts[j, 1])
        return total

    return func

"""H⁻¹ and H¹ norms of cell fields."""

from __future__ import annotations

import math
from collections.abc import Callable

import numpy as np
from scipy import fft
from scipy.sparse.linalg import splu

from waveguide_calderon.geometry.mesh import CrossSectionMesh
from waveguide_calderon.spectral.fiber import ModeExpansion

CellSampler = Callable[[np.ndarray], np.ndarray]

AXIAL_SAMPLES = 256
SINE_MODES = 32


def _riesz_energy(mesh: CrossSectionMesh, shift: float, loads: np.ndarray) -> float:
    """Σ Re(rhsᴴ φ) with (K + shift·M)_II φ = rhs for each column of ``loads``."""
    inner = mesh.interior_nodes
    matrix = (mesh.stiffness + shift * mesh.mass)[inner][:, inner].tocsc()
    rhs = loads[inner]
    lu = splu(matrix)
    solved = lu.solve(np.ascontiguousarray(rhs.real))
    solved = solved + 1j * lu.solve(np.ascontiguousarray(rhs.imag))
    return float(np.real(np.sum(rhs.conj() * solved)))


def h_minus1_norm(
    field: CellSampler,
    mesh: CrossSectionMesh,
    *,
    periodic: bool = False,
    samples: int = AXIAL_SAMPLES,
    modes: int = SINE_MODES,
) -> float:
    """Dual norm of a cell field against H¹ test fields vanishing on Γ̌.

    By default the test fields also vanish on the end faces x₁ ∈ {0, 1} and the
    axial direction is expanded in √2 sin(jπx₁). With ``periodic=True`` they are
    1-periodic instead and the expansion uses e^{2πijx₁}, |j| ≤ ``modes``.
    ``field`` maps axial positions of shape ``(m,)`` to nodal values ``(m, n_nodes)``.
    """
    total = 0.0
    if periodic:
        x1 = np.arange(samples) / samples
        values = np.asarray(field(x1))
        spectrum = fft.fft(values, axis=0) / samples
        for j in range(-modes, modes + 1):
            load = mesh.mass @ spectrum[j % samples]
            total += _riesz_energy(mesh, 1.0 + (2.0 * math.pi * j) ** 2, load[:, None])
    else:
        x1 = (np.arange(samples) + 0.5) / samples
        values = np.asarray(field(x1))
        transformed = fft.dst(values.real, type=2, axis=0)
        if np.iscomplexobj(values):
            transformed = transformed + 1j * fft.dst(values.imag, type=2, axis=0)
        coefficients = math.sqrt(2.0) / (2.0 * samples) * transformed
        for j in range(1, modes + 1):
            load = mesh.mass @ coefficients[j - 1]
            total += _riesz_energy(mesh, 1.0 + (j * math.pi) ** 2, load[:, None])
    return math.sqrt(max(total, 0.0))


def h1_norm(expansion: ModeExpansion) -> float:
    """‖v‖_{H¹(Ω̌)} of a mode expansion."""
    ctx = expansion.ctx
    mesh = ctx.mesh
    total = 0.0
    for index, omega in enumerate(ctx.frequencies):
        c = expansion.coefficients[index]
        operator = mesh.stiffness + (1.0 + omega**2) * mesh.mass
        total += float(np.real(c.conj() @ (operator @ c)))
    return math.sqrt(max(total, 0.0))

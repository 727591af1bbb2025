"""Build potentials from named configuration presets."""

from __future__ import annotations

import math

import numpy as np

from waveguide_calderon.config import PotentialKind, PotentialPreset
from waveguide_calderon.forward.potential import (
    PotentialField,
    PotentialFunction,
    bump,
    smooth_random_function,
)
from waveguide_calderon.geometry.mesh import CrossSectionMesh


def preset_function(preset: PotentialPreset, seed: int = 0) -> PotentialFunction:
    """The symbolic V(x₁, x₂, x₃) of a preset."""
    base, amp = preset.value, preset.amplitude
    center, radius = preset.center, preset.radius

    match preset.kind:
        case PotentialKind.CONSTANT:
            return lambda x1, x2, x3: np.full(np.broadcast_shapes(np.shape(x1), np.shape(x2)), base)
        case PotentialKind.BUMP:
            return lambda x1, x2, x3: base + amp * bump(x2, x3, center, radius) + 0.0 * x1
        case PotentialKind.COS_BUMP:
            return lambda x1, x2, x3: base + amp * np.cos(2.0 * math.pi * x1) * bump(
                x2, x3, center, radius
            )
        case PotentialKind.PLANE_WAVE_BUMP:
            e2, e3 = preset.eta0
            return lambda x1, x2, x3: base + amp * np.cos(e2 * x2 + e3 * x3) * bump(
                x2, x3, center, radius
            ) + 0.0 * x1
        case PotentialKind.RANDOM:
            field = smooth_random_function(seed if preset.seed is None else preset.seed)
            return lambda x1, x2, x3: base + amp * field(x1, x2, x3)
    raise ValueError(f"unknown potential kind {preset.kind!r}")


def _bandwidth(preset: PotentialPreset) -> int:
    if preset.kind in (PotentialKind.CONSTANT, PotentialKind.BUMP, PotentialKind.PLANE_WAVE_BUMP):
        return 0
    return max(1, preset.bandwidth)


def build_potential(
    preset: PotentialPreset, mesh: CrossSectionMesh, *, name: str = "V", seed: int = 0
) -> PotentialField:
    """Sample a preset on the mesh; undeclared bounds default to the observed ones."""
    if preset.kind == PotentialKind.CONSTANT:
        field = PotentialField.constant(mesh, preset.value, name=name)
    else:
        field = PotentialField.from_function(
            mesh, preset_function(preset, seed), _bandwidth(preset), name=name
        )
    return field.with_bounds(
        field.bound_plus if preset.bound_plus is None else preset.bound_plus,
        field.bound_minus if preset.bound_minus is None else preset.bound_minus,
    )

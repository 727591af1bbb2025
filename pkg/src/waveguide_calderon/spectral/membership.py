"""Quasi-periodic membership test for cell fields with known Laplacian."""

from __future__ import annotations

import logging
from collections.abc import Callable
from dataclasses import dataclass

import numpy as np

from waveguide_calderon.errors import SpectralError
from waveguide_calderon.models import MembershipReport
from waveguide_calderon.spectral.fiber import (
    FiberContext,
    discrete_cross_laplacian,
    fiber_project,
)

logger = logging.getLogger(__name__)

CellSampler = Callable[[np.ndarray], np.ndarray]

CONSISTENCY_STEP = 1e-4
CONSISTENCY_TOLERANCE = 1e-5
_CONSISTENCY_POINTS = np.array([0.3, 0.55, 0.8])


@dataclass(frozen=True)
class CellFunction:
    """A cell field given by samplers of its values and its axial derivative.

    Each sampler maps axial positions of shape ``(m,)`` to nodal fields of
    shape ``(m, n_nodes)``.
    """

    value: CellSampler
    axial_derivative: CellSampler


def _relative(defect: np.ndarray, scale: float) -> float:
    return float(np.abs(defect).max() / scale) if scale > 0 else float(np.abs(defect).max())


def _check_consistency(v: CellFunction, laplacian: CellSampler, ctx: FiberContext) -> None:
    inner = ctx.mesh.interior_nodes
    x = _CONSISTENCY_POINTS
    step = CONSISTENCY_STEP
    centre = v.value(x)
    second = (v.value(x + step) - 2.0 * centre + v.value(x - step)) / step**2
    expected = discrete_cross_laplacian(ctx.mesh, centre) + second
    supplied = laplacian(x)
    scale = max(float(np.abs(supplied[:, inner]).max()), float(np.abs(expected[:, inner]).max()))
    residual = _relative(supplied[:, inner] - expected[:, inner], scale)
    if residual > CONSISTENCY_TOLERANCE:
        raise SpectralError(f"Δv is not the Laplacian of v (relative residual {residual:.3e})")


def quasi_periodic_membership(
    v: CellFunction,
    laplacian: CellSampler,
    ctx: FiberContext,
    tol: float = 1e-8,
) -> MembershipReport:
    """Decide whether ``v`` is θ-quasi-periodic by two independent tests.

    The mode test projects v and Δv on the fiber modes and checks
    ``(Δv)ˆₙ = (Δ′ − ωₙ²) v̂ₙ`` on interior nodes. The trace test compares
    v and ∂₁v at the two end faces of the cell.
    """
    _check_consistency(v, laplacian, ctx)

    grid = ctx.x1_grid
    inner = ctx.mesh.interior_nodes
    v_hat = fiber_project(v.value(grid), ctx).coefficients
    h_hat = fiber_project(laplacian(grid), ctx).coefficients
    predicted = discrete_cross_laplacian(ctx.mesh, v_hat)
    predicted[:, inner] -= (ctx.frequencies**2)[:, None] * v_hat[:, inner]
    residual = h_hat[:, inner] - predicted[:, inner]
    scale = max(float(np.abs(h_hat[:, inner]).max()), float(np.abs(predicted[:, inner]).max()))
    mode_residual = _relative(residual, scale)

    ends = np.array([0.0, 1.0])
    phase = np.exp(1j * ctx.theta)
    values = v.value(ends)
    slopes = v.axial_derivative(ends)
    value_scale = float(np.abs(v.value(grid)).max())
    slope_scale = max(float(np.abs(v.axial_derivative(grid)).max()), value_scale)
    trace_defect = _relative(values[1] - phase * values[0], value_scale)
    derivative_defect = _relative(slopes[1] - phase * slopes[0], slope_scale)

    trace_ok = trace_defect < tol and derivative_defect < tol
    mode_ok = mode_residual < tol
    if trace_ok != mode_ok:
        logger.warning(
            "membership tests disagree: trace defect %.3e, mode residual %.3e",
            max(trace_defect, derivative_defect),
            mode_residual,
        )
    return MembershipReport(
        member=trace_ok and mode_ok,
        trace_defect=trace_defect,
        derivative_defect=derivative_defect,
        mode_residual=mode_residual,
        trace_test=trace_ok,
        mode_test=mode_ok,
    )

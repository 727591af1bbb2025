"""Direct quadrature of volume integrals over the cell (0, 1) × ω."""

from __future__ import annotations

import math
from collections.abc import Callable

import numpy as np
from scipy.interpolate import LinearNDInterpolator

from waveguide_calderon.geometry.mesh import CrossSectionMesh

CellFunction = Callable[[np.ndarray, np.ndarray, np.ndarray], np.ndarray]

AXIAL_POINTS = 64

# degree-5 seven-point rule on the reference triangle (barycentric, weight)
_A1, _B1 = 0.059715871789770, 0.470142064105115
_A2, _B2 = 0.797426985353087, 0.101286507323456
_W0, _W1, _W2 = 0.225, 0.132394152788506, 0.125939180544827
_BARYCENTRIC = np.array(
    [
        (1 / 3, 1 / 3, 1 / 3),
        (_A1, _B1, _B1),
        (_B1, _A1, _B1),
        (_B1, _B1, _A1),
        (_A2, _B2, _B2),
        (_B2, _A2, _B2),
        (_B2, _B2, _A2),
    ]
)
_WEIGHTS = np.array([_W0, _W1, _W1, _W1, _W2, _W2, _W2])


def triangle_rule(mesh: CrossSectionMesh) -> tuple[np.ndarray, np.ndarray]:
    """Quadrature points ``(n_points, 2)`` and weights over ω."""
    corners = mesh.vertices[mesh.triangles]
    d1 = corners[:, 1] - corners[:, 0]
    d2 = corners[:, 2] - corners[:, 0]
    areas = 0.5 * np.abs(d1[:, 0] * d2[:, 1] - d1[:, 1] * d2[:, 0])
    points = np.einsum("qk,tkd->tqd", _BARYCENTRIC, corners).reshape(-1, 2)
    weights = (areas[:, None] * _WEIGHTS[None, :]).ravel()
    return points, weights


def cell_integral(
    func: CellFunction, mesh: CrossSectionMesh, axial: int = AXIAL_POINTS
) -> complex:
    """∫₀¹∫_ω func dx′ dx₁ with the periodic rectangle rule in x₁."""
    points, weights = triangle_rule(mesh)
    x1 = (np.arange(axial) / axial)[:, None]
    values = func(x1, points[None, :, 0], points[None, :, 1])
    values = np.broadcast_to(values, (axial, len(weights)))
    return complex(np.sum(values * weights[None, :]) / axial)


def fourier_coefficient(
    func: CellFunction,
    mesh: CrossSectionMesh,
    k: int,
    eta: tuple[float, float],
    axial: int = AXIAL_POINTS,
) -> complex:
    """∫_{Ω̌} V e^{−i(2πkx₁ + η·x′)} dx."""
    e2, e3 = eta
    return cell_integral(
        lambda x1, x2, x3: func(x1, x2, x3)
        * np.exp(-1j * (2.0 * math.pi * k * x1 + e2 * x2 + e3 * x3)),
        mesh,
        axial,
    )


def volume_pairing_oracle(
    potential: CellFunction,
    second: CellFunction,
    first: CellFunction,
    mesh: CrossSectionMesh,
    axial: int = AXIAL_POINTS,
) -> complex:
    """∫_{Ω̌} V u₂ ū₁ dx."""
    return cell_integral(
        lambda x1, x2, x3: potential(x1, x2, x3) * second(x1, x2, x3) * np.conj(first(x1, x2, x3)),
        mesh,
        axial,
    )


def nodal_callable(
    mesh: CrossSectionMesh, axial_values: Callable[[np.ndarray], np.ndarray]
) -> CellFunction:
    """Wrap a field known at mesh nodes for any x₁ as a pointwise callable.

    ``axial_values(x1)`` returns ``(len(x1), n_nodes)``; transverse values are
    interpolated linearly on the triangles.
    """

    def evaluate(x1, x2, x3):
        x1 = np.atleast_1d(np.asarray(x1, dtype=float)).ravel()
        nodal = np.asarray(axial_values(x1))
        interpolator = LinearNDInterpolator(mesh.vertices, nodal.T, fill_value=0.0)
        points = np.stack(np.broadcast_arrays(np.ravel(x2), np.ravel(x3)), axis=1)
        values = interpolator(points)
        return values.T.reshape(len(x1), -1)

    return evaluate

"""Boundary pairing of the DN difference against the CGO pair.

Both CGO solutions carry factors e^{±τξ·x′} that no mesh of fixed size can
represent. The pairing is therefore evaluated in conjugated variables: with
f = T₀u_{ζ₂}, u_{ζ₂} = e^{ζ₂·x}(1 + q₂) and u_{ζ₁} = e^{ζ₁·x}(1 + w₁),

    (Λ₂ − Λ₁)f = e^{ζ₂·x} ∂_ν y,   ū_{ζ₁} e^{ζ₂·x} = e^{−iκ·x}(1 + w̄₁),

where κ = (2πk, η) and y solves (−Δ − 2ζ₂·∇ + V₁)y = (V₁ − V₂)(1 + q₂) with
y = 0 on Γ̌. Only O(1) quantities enter the arithmetic.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

import numpy as np
import scipy.sparse as sp
from scipy.sparse.linalg import splu

from waveguide_calderon import fem
from waveguide_calderon.cgo.solution import CGOSolution
from waveguide_calderon.cgo.vanishing import assemble_conjugated, potential_coupling
from waveguide_calderon.errors import GeometryError, SolverError
from waveguide_calderon.forward.dnmap import SimulatedDNData
from waveguide_calderon.geometry.faces import epsilon_faces
from waveguide_calderon.geometry.mesh import CrossSectionMesh
from waveguide_calderon.models import CGOKind

logger = logging.getLogger(__name__)

SUPPORT_TOLERANCE = 1e-8


@dataclass(frozen=True)
class PairingResult:
    """Observed and unobserved parts of −∫_Γ̌ [(Λ₂ − Λ₁)f] ū₁.

    ``volume`` is the discrete ∫(V₁ − V₂) u₂ ū₁. It matches the sum of the two
    boundary parts up to discretization error and is only available in
    simulation.
    """

    observed: complex
    unobserved: complex
    volume: complex

    @property
    def total(self) -> complex:
        return self.observed + self.unobserved

    @property
    def consistency(self) -> float:
        """|total − volume| relative to |volume|."""
        scale = max(abs(self.volume), 1e-300)
        return abs(self.total - self.volume) / scale


@dataclass(frozen=True, eq=False)
class ConjugatedFlux:
    """e^{−ζ₂·x}(Λ₂ − Λ₁)f in periodic axial modes.

    ``flux[j]`` holds the nodal boundary values of mode j of ∂_ν y, indexed by
    loop position. ``load`` is the mode-major load of (V₁ − V₂)(1 + q₂).
    """

    flux: np.ndarray
    load: np.ndarray
    solution: np.ndarray


def edge_mass(mesh: CrossSectionMesh, mask: np.ndarray) -> sp.csr_matrix:
    """Consistent boundary mass over the masked edges, indexed by loop position."""
    positions = np.arange(mesh.n_boundary)
    edges = np.stack([positions, np.roll(positions, -1)], axis=1)[mask]
    return fem.boundary_mass_matrix(mesh.vertices[mesh.boundary_nodes], edges)


def conjugated_flux(data: SimulatedDNData, u2: CGOSolution) -> ConjugatedFlux:
    """Conjugated DN difference applied to the trace of ``u2``.

    The Dirichlet problem for y is solved by Galerkin in the conjugated
    variable. Its boundary flux is read off the residual of the boundary rows,
    which keeps the flux conservative even where the outflow layer is thin.
    """
    mesh = data.mesh
    K = u2.remainder.shape[0] // 2
    n = mesh.n_nodes
    system = assemble_conjugated(data.first, u2.params.zeta2, K)
    factor = u2.remainder.astype(complex)
    factor[K] += 1.0
    load = potential_coupling(data.first - data.second, K) @ factor.ravel()

    y = np.zeros(system.matrix.shape[0], dtype=complex)
    if np.any(load):
        a_ii = system.matrix[system.interior][:, system.interior].tocsc()
        try:
            y[system.interior] = splu(a_ii).solve(load[system.interior])
        except RuntimeError as exc:
            raise SolverError("conjugated difference problem is singular") from exc
    residual = (system.matrix[system.boundary] @ y - load[system.boundary]).reshape(
        2 * K + 1, mesh.n_boundary
    )
    boundary_mass = edge_mass(mesh, np.ones(mesh.n_boundary, dtype=bool)).tocsc()
    flux = splu(boundary_mass).solve(np.ascontiguousarray(residual.T)).T
    return ConjugatedFlux(flux=flux, load=load.reshape(2 * K + 1, n), solution=y)


def conjugated_test_modes(u1: CGOSolution, K: int) -> np.ndarray:
    """Modes of e^{−iκ·x}(1 + w̄₁) paired with mode j of the flux.

    Row ``j + K`` holds mode −j, so that the axial integral of a product is
    the sum over j of row-wise products.
    """
    params = u1.params
    mesh = u1.ctx.mesh
    K1 = u1.remainder.shape[0] // 2
    factor = u1.remainder.astype(complex)
    factor[K1] += 1.0
    plane = np.exp(-1j * (mesh.vertices @ np.asarray(params.eta, dtype=float)))
    out = np.zeros((2 * K + 1, mesh.n_nodes), dtype=complex)
    for j in range(-K, K + 1):
        m = j - params.k
        if abs(m) <= K1:
            out[j + K] = plane * factor[m + K1].conj()
    return out


def _check_support(data: SimulatedDNData, u2: CGOSolution) -> None:
    """T₀u_{ζ₂} must vanish off the inner nodes of the input face."""
    mesh = data.mesh
    K = u2.remainder.shape[0] // 2
    trace = u2.remainder[:, mesh.boundary_nodes].astype(complex)
    trace[K] += 1.0
    outside = np.ones(mesh.n_boundary, dtype=bool)
    outside[data.partition.input_face.inner_nodes] = False
    scale = max(float(np.abs(trace).max()), 1.0)
    if np.any(outside) and float(np.abs(trace[:, outside]).max()) > SUPPORT_TOLERANCE * scale:
        raise GeometryError("the CGO trace is not supported on the input face")


def pairing_from_boundary(
    data: SimulatedDNData, u2: CGOSolution, u1: CGOSolution, epsilon: float
) -> PairingResult:
    """Pair (Λ₂ − Λ₁)f, f = T₀u_{ζ₂}, with ū_{ζ₁} over the boundary.

    The observed part integrates over the ε-shadowed edges ξ·ν′ ≤ ε, which must
    lie inside the output face. When V₁ = V₂ every part is exactly zero.
    """
    if u2.kind != CGOKind.VANISHING:
        raise ValueError("the first CGO solution must be of vanishing kind")
    if u1.ctx.mesh is not data.mesh or u2.ctx.mesh is not data.mesh:
        raise ValueError("CGO solutions and data live on different meshes")
    same = u1.params.k == u2.params.k and u1.params.tau == u2.params.tau
    if not same or not np.allclose(u1.params.eta, u2.params.eta):
        raise ValueError("CGO solutions were built from different parameters")
    mesh = data.mesh
    _, shadow = epsilon_faces(mesh, u2.params.xi, epsilon)
    if not shadow.issubset(data.partition.output_face):
        raise GeometryError("the ε-shadowed face is not contained in the output face")
    _check_support(data, u2)

    K = u2.remainder.shape[0] // 2
    result = conjugated_flux(data, u2)
    test = conjugated_test_modes(u1, K)
    test_boundary = test[:, mesh.boundary_nodes]

    def part(mask: np.ndarray) -> complex:
        mass = edge_mass(mesh, mask)
        return complex(-np.sum(result.flux * (mass @ test_boundary.T).T))

    observed = part(shadow.mask)
    unobserved = part(~shadow.mask)
    volume = complex(np.sum(result.load * test))
    logger.debug(
        "pairing: observed %.4e, unobserved %.4e, volume %.4e",
        abs(observed),
        abs(unobserved),
        abs(volume),
    )
    return PairingResult(observed, unobserved, volume)

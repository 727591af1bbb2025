"""Illuminated and shadowed boundary faces, ε-faces and boundary partitions."""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass
from enum import StrEnum
from functools import cached_property

import numpy as np

from waveguide_calderon.errors import GeometryError
from waveguide_calderon.geometry.mesh import CrossSectionMesh

logger = logging.getLogger(__name__)

FACE_TOLERANCE = 1e-12
EPSILON_CANDIDATES = tuple(2.0**-j for j in range(1, 15))
EPSILON_FLOOR = 1e-4
SECTOR_SAMPLES = 64


class FaceTag(StrEnum):
    """Role of a boundary edge set."""

    PLUS = "plus"
    MINUS = "minus"
    INPUT = "input"
    OUTPUT = "output"


def unit_vector(xi: tuple[float, float] | np.ndarray, name: str = "ξ") -> np.ndarray:
    """Validate that ``xi`` has length one and return it as an array."""
    vec = np.asarray(xi, dtype=float)
    if vec.shape != (2,) or abs(np.linalg.norm(vec) - 1.0) > 1e-12:
        raise GeometryError(f"{name} must be a unit 2-vector, got {vec.tolist()}")
    return vec


@dataclass(frozen=True, eq=False)
class FaceSet:
    """A subset of the boundary edges of one mesh."""

    mesh: CrossSectionMesh
    mask: np.ndarray
    tag: FaceTag
    direction: np.ndarray
    threshold: float = 0.0

    @property
    def edges(self) -> np.ndarray:
        return np.flatnonzero(self.mask)

    def __len__(self) -> int:
        return int(self.mask.sum())

    @property
    def is_empty(self) -> bool:
        return not self.mask.any()

    def issubset(self, other: FaceSet) -> bool:
        return bool(np.all(~self.mask | other.mask))

    @cached_property
    def touching_nodes(self) -> np.ndarray:
        """Loop positions of boundary nodes adjacent to at least one member edge."""
        return np.flatnonzero(self.mask | np.roll(self.mask, 1))

    @cached_property
    def inner_nodes(self) -> np.ndarray:
        """Loop positions whose two adjacent edges are both members."""
        return np.flatnonzero(self.mask & np.roll(self.mask, 1))

    @cached_property
    def node_weights(self) -> np.ndarray:
        """Trapezoid weights of the member edges at each boundary loop position."""
        half = np.where(self.mask, 0.5 * self.mesh.edge_lengths, 0.0)
        return half + np.roll(half, 1)


def face_partition(
    mesh: CrossSectionMesh, xi0: tuple[float, float] | np.ndarray
) -> tuple[FaceSet, FaceSet]:
    """Split the boundary into the ξ₀-illuminated (plus) and shadowed (minus) faces.

    Both inequalities are non-strict, so edges tangent to ξ₀ belong to both sets.
    """
    xi = unit_vector(xi0, "ξ₀")
    dots = mesh.edge_normals @ xi
    plus = FaceSet(mesh, dots >= -FACE_TOLERANCE, FaceTag.PLUS, xi)
    minus = FaceSet(mesh, dots <= FACE_TOLERANCE, FaceTag.MINUS, xi)
    return plus, minus


def epsilon_faces(
    mesh: CrossSectionMesh, xi: tuple[float, float] | np.ndarray, epsilon: float
) -> tuple[FaceSet, FaceSet]:
    """Edges with ξ·ν′ > ε (plus) and ξ·ν′ ≤ ε (minus)."""
    direction = unit_vector(xi)
    if epsilon <= 0:
        raise GeometryError(f"ε must be positive, got {epsilon}")
    if epsilon >= 1:
        logger.warning("ε = %.3g ≥ 1: the plus ε-face is empty", epsilon)
    dots = mesh.edge_normals @ direction
    plus = FaceSet(mesh, dots > epsilon, FaceTag.PLUS, direction, epsilon)
    minus = FaceSet(mesh, dots <= epsilon, FaceTag.MINUS, direction, epsilon)
    return plus, minus


def sector_directions(xi0: np.ndarray, epsilon: float, samples: int = SECTOR_SAMPLES) -> np.ndarray:
    """Unit vectors ξ with |ξ − ξ₀| ≤ ε, evenly spaced in angle."""
    spread = 2.0 * math.asin(min(epsilon / 2.0, 1.0))
    angles = math.atan2(xi0[1], xi0[0]) + np.linspace(-spread, spread, samples)
    return np.stack([np.cos(angles), np.sin(angles)], axis=1)


def _inclusions_hold(
    mesh: CrossSectionMesh, input_face: FaceSet, output_face: FaceSet, xi0: np.ndarray, eps: float
) -> bool:
    for xi in sector_directions(xi0, eps):
        dots = mesh.edge_normals @ xi
        # ∂ω⁻_{ε,−ξ} ⊆ F′ and ∂ω⁻_{ε,ξ} ⊆ G′
        if np.any((-dots <= eps) & ~input_face.mask):
            return False
        if np.any((dots <= eps) & ~output_face.mask):
            return False
    return True


def choose_epsilon(
    mesh: CrossSectionMesh,
    input_face: FaceSet,
    output_face: FaceSet,
    xi0: tuple[float, float] | np.ndarray,
) -> float:
    """Largest ε = 2⁻ʲ for which the sector inclusions hold around ξ₀."""
    direction = unit_vector(xi0, "ξ₀")
    if not np.all(input_face.mask | output_face.mask):
        raise GeometryError("input and output faces must cover the whole boundary")
    for eps in EPSILON_CANDIDATES:
        if eps < EPSILON_FLOOR:
            break
        if _inclusions_hold(mesh, input_face, output_face, direction, eps):
            logger.debug("choose_epsilon: ε = %g", eps)
            return eps
    raise GeometryError("faces too small for the direction ξ₀")


@dataclass(frozen=True, eq=False)
class BoundaryPartition:
    """Input face F′, output face G′, sector direction ξ₀ and its admissible ε."""

    input_face: FaceSet
    output_face: FaceSet
    xi0: np.ndarray
    epsilon: float

    def __post_init__(self) -> None:
        if not np.all(self.input_face.mask | self.output_face.mask):
            raise GeometryError("F′ ∪ G′ must cover the boundary")
        if not np.any(self.input_face.mask & self.output_face.mask):
            raise GeometryError("F′ ∩ G′ must be nonempty")

    @property
    def mesh(self) -> CrossSectionMesh:
        return self.input_face.mesh

    @classmethod
    def from_faces(
        cls, input_face: FaceSet, output_face: FaceSet, xi0: tuple[float, float] | np.ndarray
    ) -> BoundaryPartition:
        eps = choose_epsilon(input_face.mesh, input_face, output_face, xi0)
        return cls(input_face, output_face, unit_vector(xi0, "ξ₀"), eps)

    @classmethod
    def from_margins(
        cls,
        mesh: CrossSectionMesh,
        xi0: tuple[float, float] | np.ndarray,
        input_margin: float,
        output_margin: float,
    ) -> BoundaryPartition:
        """F′ = {ξ₀·ν′ ≥ −input_margin}, G′ = {ξ₀·ν′ ≤ output_margin}."""
        direction = unit_vector(xi0, "ξ₀")
        dots = mesh.edge_normals @ direction
        input_face = FaceSet(mesh, dots >= -input_margin, FaceTag.INPUT, direction)
        output_face = FaceSet(mesh, dots <= output_margin, FaceTag.OUTPUT, direction)
        return cls.from_faces(input_face, output_face, direction)

    @classmethod
    def full_boundary(
        cls, mesh: CrossSectionMesh, xi0: tuple[float, float] | np.ndarray = (1.0, 0.0)
    ) -> BoundaryPartition:
        everything = np.ones(mesh.n_boundary, dtype=bool)
        direction = unit_vector(xi0, "ξ₀")
        return cls(
            FaceSet(mesh, everything, FaceTag.INPUT, direction),
            FaceSet(mesh, everything.copy(), FaceTag.OUTPUT, direction),
            direction,
            0.5,
        )

    def accepts(self, xi: np.ndarray) -> bool:
        return bool(np.linalg.norm(np.asarray(xi) - self.xi0) <= self.epsilon + 1e-12)


def _smoothstep(t: np.ndarray) -> np.ndarray:
    t = np.clip(t, 0.0, 1.0)
    return t**3 * (10.0 - 15.0 * t + 6.0 * t**2)


def cutoff_profile(
    mesh: CrossSectionMesh, xi: tuple[float, float] | np.ndarray, epsilon: float
) -> tuple[np.ndarray, np.ndarray]:
    """Boundary cutoff ψ and the loop positions where it is imposed.

    ψ = 1 at nodes touching ∂ω⁺_{ε/2,−ξ} and vanishes at nodes outside ∂ω⁺_{ε/3,−ξ}.
    In between it is a quintic smoothstep of the relative arc-length distance.
    Returns ``(psi, constrained)``, both indexed by boundary loop position.
    """
    direction = unit_vector(xi)
    dots = -(mesh.edge_normals @ direction)
    core = dots > epsilon / 2.0
    support = dots > epsilon / 3.0
    core_nodes = core | np.roll(core, 1)
    support_nodes = support | np.roll(support, 1)

    psi = np.zeros(mesh.n_boundary)
    psi[core_nodes] = 1.0
    ramp = support_nodes & ~core_nodes
    if ramp.any() and core_nodes.any():
        s = mesh.arc_length
        gap = np.abs(s[:, None] - s[None, :])
        arc = np.minimum(gap, mesh.perimeter - gap)
        to_core = arc[:, core_nodes].min(axis=1)
        outside = ~support_nodes
        to_outside = arc[:, outside].min(axis=1) if outside.any() else np.full(len(s), np.inf)
        with np.errstate(invalid="ignore"):
            t = np.where(np.isinf(to_outside), 1.0, to_outside / (to_outside + to_core))
        psi[ramp] = _smoothstep(t[ramp])
    return psi, np.flatnonzero(support_nodes)

"""Cross-section meshes, boundary faces and the Poincaré constant."""

from waveguide_calderon.geometry.faces import (
    BoundaryPartition,
    FaceSet,
    FaceTag,
    choose_epsilon,
    cutoff_profile,
    epsilon_faces,
    face_partition,
)
from waveguide_calderon.geometry.mesh import (
    CrossSectionKind,
    CrossSectionMesh,
    CrossSectionSpec,
    build_mesh,
)
from waveguide_calderon.geometry.poincare import (
    dirichlet_eigenpairs,
    poincare_constant,
    poincare_constant_converged,
)

__all__ = [
    "BoundaryPartition",
    "CrossSectionKind",
    "CrossSectionMesh",
    "CrossSectionSpec",
    "FaceSet",
    "FaceTag",
    "build_mesh",
    "choose_epsilon",
    "cutoff_profile",
    "dirichlet_eigenpairs",
    "epsilon_faces",
    "face_partition",
    "poincare_constant",
    "poincare_constant_converged",
]

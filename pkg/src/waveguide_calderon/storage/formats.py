"""Versioned on-disk formats for meshes and mode expansions."""

from __future__ import annotations

import logging
from pathlib import Path

import numpy as np

from waveguide_calderon.errors import GeometryError, SpectralError
from waveguide_calderon.geometry.mesh import CrossSectionMesh
from waveguide_calderon.spectral.fiber import FiberContext, ModeExpansion

logger = logging.getLogger(__name__)

MESH_FORMAT_VERSION = 1
MESH_HEADER = "# waveguide-calderon mesh v"
EXPANSION_FORMAT_VERSION = 1


def write_mesh(mesh: CrossSectionMesh, path: str | Path) -> None:
    """Write nodes, triangles and the boundary loop as plain text."""
    lines = [f"{MESH_HEADER}{MESH_FORMAT_VERSION}", f"h {float(mesh.h)!r}"]
    lines.append(f"nodes {mesh.n_nodes}")
    lines += [f"{float(x)!r} {float(y)!r}" for x, y in mesh.vertices]
    lines.append(f"triangles {len(mesh.triangles)}")
    lines += [" ".join(str(int(i)) for i in t) for t in mesh.triangles]
    lines.append(f"boundary {mesh.n_boundary}")
    lines += [f"{int(a)} {int(b)}" for a, b in mesh.boundary_edges]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _block(lines: list[str], start: int, name: str) -> tuple[int, int]:
    keyword, _, count = lines[start].partition(" ")
    if keyword != name:
        raise GeometryError(f"expected a {name!r} block, found {lines[start]!r}")
    return start + 1, int(count)


def read_mesh(path: str | Path) -> CrossSectionMesh:
    lines = Path(path).read_text(encoding="utf-8").splitlines()
    if not lines or not lines[0].startswith(MESH_HEADER):
        raise GeometryError(f"{path} is not a mesh file")
    version = lines[0].removeprefix(MESH_HEADER)
    if version != str(MESH_FORMAT_VERSION):
        raise GeometryError(f"unsupported mesh format version {version!r}")
    h = float(lines[1].split()[1])
    pos, count = _block(lines, 2, "nodes")
    vertices = np.array([[float(v) for v in line.split()] for line in lines[pos : pos + count]])
    pos, count = _block(lines, pos + count, "triangles")
    triangles = np.array([[int(v) for v in line.split()] for line in lines[pos : pos + count]])
    pos, count = _block(lines, pos + count, "boundary")
    edges = np.array([[int(v) for v in line.split()] for line in lines[pos : pos + count]])
    return CrossSectionMesh(
        vertices.reshape(-1, 2), triangles.reshape(-1, 3), edges.reshape(-1, 2), h
    )


def save_expansion(expansion: ModeExpansion, path: str | Path) -> None:
    ctx = expansion.ctx
    np.savez_compressed(
        path,
        version=EXPANSION_FORMAT_VERSION,
        coefficients=expansion.coefficients,
        theta=ctx.theta,
        K=ctx.K,
        center=ctx.center,
        mesh_hash=ctx.mesh.mesh_hash,
    )


def load_expansion(path: str | Path, mesh: CrossSectionMesh) -> ModeExpansion:
    """Load a mode expansion saved for ``mesh``."""
    with np.load(path) as data:
        if int(data["version"]) != EXPANSION_FORMAT_VERSION:
            raise SpectralError(f"unsupported expansion format version {int(data['version'])}")
        if str(data["mesh_hash"]) != mesh.mesh_hash:
            raise SpectralError("expansion was saved for a different mesh")
        ctx = FiberContext(float(data["theta"]), int(data["K"]), mesh, int(data["center"]))
        return ModeExpansion(np.array(data["coefficients"]), ctx)

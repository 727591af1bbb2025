"""Cross-section specifications and their triangulations."""

from __future__ import annotations

import hashlib
import logging
import math
from dataclasses import dataclass
from enum import StrEnum
from functools import cached_property
from typing import Any

import numpy as np
import scipy.sparse as sp
from pydantic import BaseModel, Field, model_validator
from scipy.interpolate import LinearNDInterpolator
from scipy.spatial import Delaunay

from waveguide_calderon import fem
from waveguide_calderon.errors import GeometryError

logger = logging.getLogger(__name__)


class CrossSectionKind(StrEnum):
    """Supported cross-section shapes."""

    DISK = "disk"
    ELLIPSE = "ellipse"
    POLYGON = "polygon"


class CrossSectionSpec(BaseModel):
    """Shape and resolution of the waveguide cross-section ω."""

    kind: CrossSectionKind = Field(default=CrossSectionKind.DISK, description="Shape family")
    radius: float = Field(default=1.0, gt=0, description="Disk radius")
    semi_axes: tuple[float, float] | None = Field(
        default=None, description="Ellipse semi-axes (a, b) along x₂ and x₃"
    )
    vertices: list[tuple[float, float]] | None = Field(
        default=None, description="Polygon vertices in order"
    )
    h: float = Field(default=0.1, gt=0, description="Target mesh size")
    boundary_points: int | None = Field(
        default=None, ge=8, description="Exact number of boundary samples (curved shapes)"
    )
    layer_depth: float = Field(
        default=0.0, ge=0, description="Depth of the innermost graded boundary ring"
    )
    layer_count: int = Field(default=0, ge=0, description="Number of graded boundary rings")

    @model_validator(mode="after")
    def _check_shape_parameters(self) -> CrossSectionSpec:
        if self.kind == CrossSectionKind.ELLIPSE:
            if self.semi_axes is None or min(self.semi_axes) <= 0:
                raise ValueError("ellipse needs positive semi_axes")
        if self.kind == CrossSectionKind.POLYGON and (
            self.vertices is None or len(self.vertices) < 3
        ):
            raise ValueError("polygon needs at least three vertices")
        return self


@dataclass(frozen=True, eq=False)
class CrossSectionMesh:
    """Triangulated cross-section.

    Boundary edges form one counter-clockwise loop: edge ``i`` runs from
    ``boundary_nodes[i]`` to ``boundary_nodes[i + 1]``.
    """

    vertices: np.ndarray
    triangles: np.ndarray
    boundary_edges: np.ndarray
    h: float

    @property
    def n_nodes(self) -> int:
        return len(self.vertices)

    @property
    def n_boundary(self) -> int:
        return len(self.boundary_edges)

    @cached_property
    def boundary_nodes(self) -> np.ndarray:
        return self.boundary_edges[:, 0].copy()

    @cached_property
    def interior_nodes(self) -> np.ndarray:
        mask = np.ones(self.n_nodes, dtype=bool)
        mask[self.boundary_nodes] = False
        return np.flatnonzero(mask)

    @cached_property
    def triangle_areas(self) -> np.ndarray:
        return fem.triangle_geometry(self.vertices, self.triangles)[0]

    @cached_property
    def edge_lengths(self) -> np.ndarray:
        d = self.vertices[self.boundary_edges[:, 1]] - self.vertices[self.boundary_edges[:, 0]]
        return np.linalg.norm(d, axis=1)

    @cached_property
    def edge_midpoints(self) -> np.ndarray:
        e = self.boundary_edges
        return 0.5 * (self.vertices[e[:, 0]] + self.vertices[e[:, 1]])

    @cached_property
    def edge_normals(self) -> np.ndarray:
        """Outward unit normals ν′, one per boundary edge."""
        d = self.vertices[self.boundary_edges[:, 1]] - self.vertices[self.boundary_edges[:, 0]]
        normals = np.stack([d[:, 1], -d[:, 0]], axis=1)
        return normals / np.linalg.norm(normals, axis=1)[:, None]

    @cached_property
    def node_normals(self) -> np.ndarray:
        """Unit normals at boundary nodes (average of the two adjacent edges)."""
        avg = self.edge_normals + np.roll(self.edge_normals, 1, axis=0)
        return avg / np.linalg.norm(avg, axis=1)[:, None]

    @cached_property
    def arc_length(self) -> np.ndarray:
        """Arc-length coordinate of each boundary node along the loop."""
        return np.concatenate([[0.0], np.cumsum(self.edge_lengths)[:-1]])

    @property
    def perimeter(self) -> float:
        return float(self.edge_lengths.sum())

    @cached_property
    def wall_spacing(self) -> float:
        """Largest distance from a boundary node to its nearest interior neighbour."""
        tri = self.triangles
        pairs = np.concatenate([tri[:, [0, 1]], tri[:, [1, 2]], tri[:, [2, 0]]])
        pairs = np.concatenate([pairs, pairs[:, ::-1]])
        on_boundary = np.zeros(self.n_nodes, dtype=bool)
        on_boundary[self.boundary_nodes] = True
        pairs = pairs[on_boundary[pairs[:, 0]] & ~on_boundary[pairs[:, 1]]]
        if len(pairs) == 0:
            return self.h
        lengths = np.linalg.norm(self.vertices[pairs[:, 0]] - self.vertices[pairs[:, 1]], axis=1)
        nearest = np.full(self.n_nodes, np.inf)
        np.minimum.at(nearest, pairs[:, 0], lengths)
        finite = nearest[self.boundary_nodes]
        return float(finite[np.isfinite(finite)].max())

    @cached_property
    def c_omega(self) -> float:
        """sup |x′| over the cross-section."""
        return float(np.linalg.norm(self.vertices, axis=1).max())

    @cached_property
    def mesh_hash(self) -> str:
        digest = hashlib.sha256()
        digest.update(np.ascontiguousarray(self.vertices, dtype=np.float64).tobytes())
        digest.update(np.ascontiguousarray(self.triangles, dtype=np.int64).tobytes())
        return digest.hexdigest()[:16]

    @cached_property
    def stiffness(self) -> sp.csr_matrix:
        return fem.stiffness_matrix(self.vertices, self.triangles)

    @cached_property
    def mass(self) -> sp.csr_matrix:
        return fem.mass_matrix(self.vertices, self.triangles)

    @cached_property
    def boundary_mass(self) -> sp.csr_matrix:
        return fem.boundary_mass_matrix(self.vertices, self.boundary_edges)

    @cached_property
    def lumped_mass(self) -> np.ndarray:
        return np.asarray(self.mass.sum(axis=1)).ravel()

    @cached_property
    def poincare_constant(self) -> float:
        from waveguide_calderon.geometry.poincare import poincare_constant

        return poincare_constant(self)

    def weighted_mass(self, weight: np.ndarray) -> sp.csr_matrix:
        return fem.mass_matrix(self.vertices, self.triangles, weight)

    def interpolator(self, values: np.ndarray) -> LinearNDInterpolator:
        """Piecewise-linear interpolant of nodal values, zero outside the hull."""
        return LinearNDInterpolator(self.vertices, values, fill_value=0.0)

    def contains(self, points: np.ndarray) -> np.ndarray:
        return points_in_polygon(points, self.vertices[self.boundary_nodes])


def points_in_polygon(points: np.ndarray, polygon: np.ndarray) -> np.ndarray:
    """Even-odd ray casting test for many points against one closed polygon."""
    points = np.atleast_2d(points)
    x, y = points[:, 0:1], points[:, 1:2]
    x0, y0 = polygon[None, :, 0], polygon[None, :, 1]
    x1 = np.roll(polygon[:, 0], -1)[None, :]
    y1 = np.roll(polygon[:, 1], -1)[None, :]
    straddles = (y0 > y) != (y1 > y)
    with np.errstate(divide="ignore", invalid="ignore"):
        x_cross = x0 + (y - y0) * (x1 - x0) / (y1 - y0)
    crossings = straddles & (x < x_cross)
    return crossings.sum(axis=1) % 2 == 1


def distance_to_polyline(points: np.ndarray, polygon: np.ndarray) -> np.ndarray:
    """Distance from each point to the closed polyline."""
    a = polygon[None, :, :]
    b = np.roll(polygon, -1, axis=0)[None, :, :]
    p = points[:, None, :]
    ab = b - a
    t = np.clip(((p - a) * ab).sum(axis=2) / (ab * ab).sum(axis=2), 0.0, 1.0)
    closest = a + t[:, :, None] * ab
    return np.linalg.norm(p - closest, axis=2).min(axis=1)


def _segments_cross(p1: np.ndarray, p2: np.ndarray, q1: np.ndarray, q2: np.ndarray) -> bool:
    def orient(a: np.ndarray, b: np.ndarray, c: np.ndarray) -> float:
        return float((b[0] - a[0]) * (c[1] - a[1]) - (b[1] - a[1]) * (c[0] - a[0]))

    d1, d2 = orient(q1, q2, p1), orient(q1, q2, p2)
    d3, d4 = orient(p1, p2, q1), orient(p1, p2, q2)
    return d1 * d2 < 0 and d3 * d4 < 0


def _polygon_boundary(spec: CrossSectionSpec) -> np.ndarray:
    verts = np.asarray(spec.vertices, dtype=float)
    signed_area = 0.5 * np.sum(
        verts[:, 0] * np.roll(verts[:, 1], -1) - np.roll(verts[:, 0], -1) * verts[:, 1]
    )
    if abs(signed_area) < 1e-12:
        raise GeometryError("degenerate polygon: zero enclosed area")
    if signed_area < 0:
        verts = verts[::-1]
    n = len(verts)
    for i in range(n):
        for j in range(i + 1, n):
            if j == i + 1 or (i == 0 and j == n - 1):
                continue
            if _segments_cross(verts[i], verts[(i + 1) % n], verts[j], verts[(j + 1) % n]):
                raise GeometryError("degenerate polygon: edges intersect")
    points = []
    for i in range(n):
        a, b = verts[i], verts[(i + 1) % n]
        pieces = max(1, math.ceil(np.linalg.norm(b - a) / spec.h - 1e-9))
        t = np.arange(pieces)[:, None] / pieces
        points.append(a + t * (b - a))
    return np.vstack(points)


def _ellipse_axes(spec: CrossSectionSpec) -> tuple[float, float]:
    if spec.kind == CrossSectionKind.DISK:
        return spec.radius, spec.radius
    assert spec.semi_axes is not None
    return spec.semi_axes


def _curved_boundary(spec: CrossSectionSpec) -> np.ndarray:
    a, b = _ellipse_axes(spec)
    perimeter = math.pi * (3 * (a + b) - math.sqrt((3 * a + b) * (a + 3 * b)))
    n = spec.boundary_points or max(16, math.ceil(perimeter / spec.h - 1e-9))
    t = 2.0 * math.pi * np.arange(n) / n
    return np.stack([a * np.cos(t), b * np.sin(t)], axis=1)


def _curved_interior(spec: CrossSectionSpec) -> np.ndarray:
    a, b = _ellipse_axes(spec)
    rings = max(1, round(max(a, b) / spec.h))
    points = [np.zeros((1, 2))]
    for j in range(1, rings):
        rho = j / rings
        count = max(6, round(2.0 * math.pi * rho * 0.5 * (a + b) / spec.h))
        t = 2.0 * math.pi * (np.arange(count) + 0.5 * (j % 2)) / count
        points.append(np.stack([a * rho * np.cos(t), b * rho * np.sin(t)], axis=1))
    return np.vstack(points)


def layer_depths(spec: CrossSectionSpec) -> np.ndarray:
    """Geometric ring depths from ``layer_depth`` up to 0.6 h."""
    outer = 0.6 * spec.h
    if spec.layer_depth >= outer:
        raise GeometryError(f"layer_depth must be below {outer:.4g} (0.6 h)")
    if spec.layer_count == 1:
        return np.array([spec.layer_depth])
    ratio = (outer / spec.layer_depth) ** (1.0 / (spec.layer_count - 1))
    return spec.layer_depth * ratio ** np.arange(spec.layer_count)


def _boundary_layers(spec: CrossSectionSpec, boundary: np.ndarray) -> list[np.ndarray]:
    tangent = np.roll(boundary, -1, axis=0) - np.roll(boundary, 1, axis=0)
    normal = np.stack([tangent[:, 1], -tangent[:, 0]], axis=1)
    normal /= np.linalg.norm(normal, axis=1)[:, None]
    return [boundary - d * normal for d in layer_depths(spec)]


def _strip_triangles(outer: np.ndarray, inner: np.ndarray) -> np.ndarray:
    """Two triangles per quad between consecutive rings of equal length."""
    outer_next, inner_next = np.roll(outer, -1), np.roll(inner, -1)
    first = np.stack([outer, outer_next, inner_next], axis=1)
    second = np.stack([outer, inner_next, inner], axis=1)
    return np.vstack([first, second])


def _layered_triangulation(
    spec: CrossSectionSpec, boundary: np.ndarray, interior: np.ndarray
) -> tuple[np.ndarray, np.ndarray]:
    """Structured strips through the graded rings and a Delaunay core inside them.

    Thin rings are far from isotropic, so they are connected ring to ring
    instead of being left to the Delaunay criterion.
    """
    n = len(boundary)
    rings = _boundary_layers(spec, boundary)
    innermost = rings[-1]
    keep = points_in_polygon(interior, innermost) & (
        distance_to_polyline(interior, innermost) >= 0.25 * spec.h
    )
    core_points = np.vstack([innermost, interior[keep]])
    points = np.vstack([boundary, *rings, interior[keep]])

    index = [np.arange(n) + k * n for k in range(len(rings) + 1)]
    strips = [_strip_triangles(index[k], index[k + 1]) for k in range(len(rings))]

    core = Delaunay(core_points).simplices
    centroids = core_points[core].mean(axis=1)
    core = core[points_in_polygon(centroids, innermost)]
    # the innermost ring and the kept interior points follow the outer rings in order
    return points, np.vstack([*strips, core + len(rings) * n])


def _lattice_interior(spec: CrossSectionSpec, boundary: np.ndarray) -> np.ndarray:
    h = spec.h
    lo = np.floor(boundary.min(axis=0) / h).astype(int)
    hi = np.ceil(boundary.max(axis=0) / h).astype(int)
    gx, gy = np.meshgrid(np.arange(lo[0], hi[0] + 1) * h, np.arange(lo[1], hi[1] + 1) * h)
    candidates = np.stack([gx.ravel(), gy.ravel()], axis=1)
    inside = points_in_polygon(candidates, boundary)
    candidates = candidates[inside]
    keep = distance_to_polyline(candidates, boundary) >= 0.5 * h
    return candidates[keep]


def _boundary_loop(triangles: np.ndarray, n_boundary: int) -> np.ndarray:
    directed = np.concatenate([triangles[:, [0, 1]], triangles[:, [1, 2]], triangles[:, [2, 0]]])
    keys = np.sort(directed, axis=1)
    _, inverse, counts = np.unique(keys, axis=0, return_inverse=True, return_counts=True)
    boundary = directed[counts[inverse.ravel()] == 1]
    successor = dict(zip(boundary[:, 0].tolist(), boundary[:, 1].tolist(), strict=True))
    if len(successor) != len(boundary):
        raise GeometryError("boundary edges do not form a single closed loop")
    loop = [0] if 0 in successor else [int(boundary[0, 0])]
    while len(loop) <= len(boundary):
        nxt = successor.get(loop[-1])
        if nxt is None:
            raise GeometryError("boundary edges do not form a single closed loop")
        if nxt == loop[0]:
            break
        loop.append(nxt)
    if len(loop) != len(boundary):
        raise GeometryError("boundary edges do not form a single closed loop")
    if len(loop) != n_boundary or sorted(loop) != list(range(n_boundary)):
        raise GeometryError("triangulation did not recover the boundary polyline; reduce h")
    nodes = np.asarray(loop)
    return np.stack([nodes, np.roll(nodes, -1)], axis=1)


def build_mesh(spec: CrossSectionSpec) -> CrossSectionMesh:
    """Triangulate the cross-section described by ``spec``."""
    if spec.kind == CrossSectionKind.POLYGON:
        if spec.layer_count:
            raise GeometryError("graded boundary layers are only supported on curved shapes")
        boundary = _polygon_boundary(spec)
    else:
        boundary = _curved_boundary(spec)

    origin = np.zeros((1, 2))
    inside = points_in_polygon(origin, boundary)[0]
    if not inside or distance_to_polyline(origin, boundary)[0] < 1e-12:
        raise GeometryError("cross-section must contain the origin in its interior")

    if spec.kind == CrossSectionKind.POLYGON:
        interior = _lattice_interior(spec, boundary)
    else:
        interior = _curved_interior(spec)
    if spec.layer_count and spec.layer_depth > 0:
        points, simplices = _layered_triangulation(spec, boundary, interior)
    else:
        points = np.vstack([boundary, interior])
        simplices = Delaunay(points).simplices
        centroids = points[simplices].mean(axis=1)
        simplices = simplices[points_in_polygon(centroids, boundary)]
    area, _, _ = fem.triangle_geometry(points, simplices)
    flipped = area < 0
    simplices[flipped] = simplices[flipped][:, [0, 2, 1]]
    simplices = simplices[np.abs(area) > 1e-12 * spec.h**2]

    used = np.zeros(len(points), dtype=bool)
    used[simplices.ravel()] = True
    if not used[: len(boundary)].all():
        raise GeometryError("triangulation did not recover the boundary polyline; reduce h")
    if not used.all():
        remap = np.cumsum(used) - 1
        points = points[used]
        simplices = remap[simplices]

    edges = _boundary_loop(simplices, len(boundary))
    mesh = CrossSectionMesh(vertices=points, triangles=simplices, boundary_edges=edges, h=spec.h)
    logger.debug(
        "meshed %s: %d nodes, %d triangles, %d boundary edges",
        spec.kind.value,
        mesh.n_nodes,
        len(simplices),
        mesh.n_boundary,
    )
    return mesh


def mesh_summary(mesh: CrossSectionMesh) -> dict[str, Any]:
    """Plain-data description of a mesh for reports."""
    return {
        "nodes": mesh.n_nodes,
        "triangles": len(mesh.triangles),
        "boundary_edges": mesh.n_boundary,
        "area": float(mesh.triangle_areas.sum()),
        "perimeter": mesh.perimeter,
        "h": mesh.h,
        "wall_spacing": mesh.wall_spacing,
        "mesh_hash": mesh.mesh_hash,
    }

"""Tests for cross-section meshing."""

from __future__ import annotations

import math

import numpy as np
import pytest

from waveguide_calderon.errors import GeometryError
from waveguide_calderon.geometry.mesh import (
    CrossSectionKind,
    CrossSectionMesh,
    CrossSectionSpec,
    build_mesh,
    layer_depths,
    mesh_summary,
    points_in_polygon,
)


class TestBuildMesh:
    def test_disk_area_and_perimeter(self, disk_mesh: CrossSectionMesh) -> None:
        assert disk_mesh.triangle_areas.sum() == pytest.approx(math.pi, rel=0.03)
        assert disk_mesh.perimeter == pytest.approx(2 * math.pi, rel=0.03)

    def test_square_area_is_exact(self, square_mesh: CrossSectionMesh) -> None:
        assert square_mesh.triangle_areas.sum() == pytest.approx(1.0, abs=1e-12)
        assert square_mesh.perimeter == pytest.approx(4.0, abs=1e-12)

    def test_triangles_are_positively_oriented(self, disk_mesh: CrossSectionMesh) -> None:
        assert np.all(disk_mesh.triangle_areas > 0)

    def test_boundary_is_one_counter_clockwise_loop(self, disk_mesh: CrossSectionMesh) -> None:
        edges = disk_mesh.boundary_edges
        assert np.array_equal(edges[1:, 0], edges[:-1, 1])
        assert edges[-1, 1] == edges[0, 0]
        # outward normals point away from the origin on a disk
        assert np.all(np.sum(disk_mesh.edge_normals * disk_mesh.edge_midpoints, axis=1) > 0)

    def test_interior_and_boundary_nodes_partition(self, disk_mesh: CrossSectionMesh) -> None:
        both = np.concatenate([disk_mesh.boundary_nodes, disk_mesh.interior_nodes])
        assert sorted(both.tolist()) == list(range(disk_mesh.n_nodes))

    def test_ellipse(self) -> None:
        mesh = build_mesh(
            CrossSectionSpec(kind=CrossSectionKind.ELLIPSE, semi_axes=(1.0, 0.5), h=0.15)
        )
        assert mesh.triangle_areas.sum() == pytest.approx(math.pi * 0.5, rel=0.03)
        assert mesh.c_omega == pytest.approx(1.0)

    def test_boundary_points_override(self) -> None:
        mesh = build_mesh(CrossSectionSpec(radius=1.0, h=0.3, boundary_points=40))
        assert mesh.n_boundary == 40

    def test_graded_layers_add_nodes(self) -> None:
        plain = build_mesh(CrossSectionSpec(radius=1.0, h=0.3))
        graded = build_mesh(CrossSectionSpec(radius=1.0, h=0.3, layer_depth=0.02, layer_count=3))
        assert graded.n_nodes == plain.n_nodes + 3 * plain.n_boundary
        assert graded.n_boundary == plain.n_boundary

    def test_layer_depths_are_graded(self) -> None:
        spec = CrossSectionSpec(radius=1.0, h=0.15, layer_depth=0.001, layer_count=10)
        depths = layer_depths(spec)
        assert depths[0] == pytest.approx(0.001)
        assert depths[-1] == pytest.approx(0.09)
        assert np.allclose(depths[1:] / depths[:-1], depths[1] / depths[0])

    def test_layers_are_structured(self, layered_disk_mesh: CrossSectionMesh) -> None:
        mesh = layered_disk_mesh
        assert mesh.n_boundary == 128
        assert mesh.wall_spacing == pytest.approx(0.001, rel=1e-6)
        assert np.all(mesh.triangle_areas > 0)
        # two triangles per quad in each of the ten strips
        assert len(mesh.triangles) > 2 * 128 * 10
        polygon = 0.5 * 128 * math.sin(2.0 * math.pi / 128)
        assert mesh.triangle_areas.sum() == pytest.approx(polygon, rel=1e-10)

    def test_layer_too_deep(self) -> None:
        with pytest.raises(GeometryError, match="0.6 h"):
            build_mesh(CrossSectionSpec(radius=1.0, h=0.3, layer_depth=0.2, layer_count=2))

    def test_deterministic_hash(self, disk_spec: CrossSectionSpec) -> None:
        assert build_mesh(disk_spec).mesh_hash == build_mesh(disk_spec).mesh_hash

    def test_summary(self, square_mesh: CrossSectionMesh) -> None:
        summary = mesh_summary(square_mesh)
        assert summary["nodes"] == square_mesh.n_nodes
        assert summary["boundary_edges"] == square_mesh.n_boundary
        assert summary["area"] == pytest.approx(1.0)


class TestInvalidShapes:
    def test_origin_outside(self) -> None:
        spec = CrossSectionSpec(
            kind=CrossSectionKind.POLYGON,
            vertices=[(1.0, 1.0), (2.0, 1.0), (2.0, 2.0), (1.0, 2.0)],
            h=0.25,
        )
        with pytest.raises(GeometryError, match="origin"):
            build_mesh(spec)

    def test_self_intersecting_polygon(self) -> None:
        spec = CrossSectionSpec(
            kind=CrossSectionKind.POLYGON,
            vertices=[(-1.0, -1.0), (1.0, 1.0), (1.0, -1.0), (-1.0, 1.0)],
            h=0.25,
        )
        with pytest.raises(GeometryError, match="intersect"):
            build_mesh(spec)

    def test_polygon_without_vertices(self) -> None:
        with pytest.raises(ValueError, match="three vertices"):
            CrossSectionSpec(kind=CrossSectionKind.POLYGON, vertices=[(0.0, 0.0)])

    def test_layers_on_polygon(self) -> None:
        spec = CrossSectionSpec(
            kind=CrossSectionKind.POLYGON,
            vertices=[(-0.5, -0.5), (0.5, -0.5), (0.5, 0.5), (-0.5, 0.5)],
            h=0.25,
            layer_depth=0.01,
            layer_count=2,
        )
        with pytest.raises(GeometryError, match="curved"):
            build_mesh(spec)


def test_points_in_polygon() -> None:
    square = np.array([[0.0, 0.0], [1.0, 0.0], [1.0, 1.0], [0.0, 1.0]])
    inside = points_in_polygon(np.array([[0.5, 0.5], [1.5, 0.5], [0.2, 0.9]]), square)
    assert inside.tolist() == [True, False, True]

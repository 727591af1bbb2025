"""Shared test fixtures."""

from __future__ import annotations

import logging
import math
from pathlib import Path
from typing import Any

import numpy as np
import pytest

from waveguide_calderon.config import CalderonSettings, ExperimentConfig, load_config
from waveguide_calderon.forward.potential import PotentialField
from waveguide_calderon.geometry.faces import BoundaryPartition
from waveguide_calderon.geometry.mesh import (
    CrossSectionKind,
    CrossSectionMesh,
    CrossSectionSpec,
    build_mesh,
)

SMALL_CONFIG = """\
schema_version = 1
seed = 3

[cross_section]
kind = "disk"
radius = 1.0
h = 0.3

[faces]
xi0 = [1.0, 0.0]
input_margin = 0.7071
output_margin = 0.7071

[fiber]
thetas = [0.0, 3.141592653589793]
K = 1

[potentials.one]
kind = "constant"
value = 1.0

[potentials.base]
kind = "cos_bump"
value = 1.0
amplitude = 0.5
radius = 0.6

[potentials.perturbed]
kind = "constant"
value = 1.0

[potentials.bump]
kind = "bump"
value = 0.0
amplitude = 1.0
center = [0.1, 0.0]
radius = 0.6

[conductivities.background]
kind = "constant"
value = 1.0

[conductivities.bumped]
kind = "bump_family"
value = 1.0
amplitude = 0.03
radius = 0.6
axial = true

[cgo]
k = 0
eta = [0.0, 6.283185307179586]
r = 0.3
potential = "one"
taus = [25.0, 50.0]
carleman_taus = [30.0, 60.0]
carleman_fields = 4
tau_floor = 20.0
grid = 16

[recover]
first = "base"
second = "perturbed"
k = 1
eta = [0.0, 2.0]
ks = [0, 1]
box_side = 2.5
max_index = 1
directions = [[1.0, 0.0]]
tau_floor = 10.0
tau_max = 30.0

[stability]
base = "base"
perturbation = "bump"
exponents = [-6, -4, -2]
gamma_star = 1e-6

[conductivity]
first = "background"
second = "bumped"
perturbation = "bumped"
exponents = [-9, -8]
"""


@pytest.fixture(scope="session")
def disk_spec() -> CrossSectionSpec:
    """Coarse unit disk."""
    return CrossSectionSpec(kind=CrossSectionKind.DISK, radius=1.0, h=0.3)


@pytest.fixture(scope="session")
def disk_mesh(disk_spec: CrossSectionSpec) -> CrossSectionMesh:
    return build_mesh(disk_spec)


@pytest.fixture(scope="session")
def fine_disk_mesh() -> CrossSectionMesh:
    return build_mesh(CrossSectionSpec(kind=CrossSectionKind.DISK, radius=1.0, h=0.15))


@pytest.fixture(scope="session")
def layered_disk_mesh() -> CrossSectionMesh:
    """Unit disk whose graded boundary rings resolve CGO layers up to τ = 200."""
    return build_mesh(
        CrossSectionSpec(
            kind=CrossSectionKind.DISK,
            radius=1.0,
            h=0.15,
            boundary_points=128,
            layer_depth=0.001,
            layer_count=10,
        )
    )


@pytest.fixture(scope="session")
def square_mesh() -> CrossSectionMesh:
    """Unit square centred at the origin."""
    return build_mesh(
        CrossSectionSpec(
            kind=CrossSectionKind.POLYGON,
            vertices=[(-0.5, -0.5), (0.5, -0.5), (0.5, 0.5), (-0.5, 0.5)],
            h=0.125,
        )
    )


@pytest.fixture(scope="session")
def partition(disk_mesh: CrossSectionMesh) -> BoundaryPartition:
    """F′ and G′ around ξ₀ = (1, 0) with the default margins."""
    return BoundaryPartition.from_margins(disk_mesh, (1.0, 0.0), 0.7071, 0.7071)


@pytest.fixture(scope="session")
def layered_partition(layered_disk_mesh: CrossSectionMesh) -> BoundaryPartition:
    return BoundaryPartition.from_margins(layered_disk_mesh, (1.0, 0.0), 0.7071, 0.7071)


@pytest.fixture(scope="session")
def full_partition(disk_mesh: CrossSectionMesh) -> BoundaryPartition:
    return BoundaryPartition.full_boundary(disk_mesh)


@pytest.fixture(scope="session")
def unit_potential(disk_mesh: CrossSectionMesh) -> PotentialField:
    return PotentialField.constant(disk_mesh, 1.0, name="one")


@pytest.fixture(scope="session")
def cos_potential(disk_mesh: CrossSectionMesh) -> PotentialField:
    """V = 1 + ½cos(2πx₁)(1 − |x′|²)."""
    return PotentialField.from_function(
        disk_mesh,
        lambda x1, x2, x3: 1.0 + 0.5 * np.cos(2.0 * math.pi * x1) * (1.0 - x2**2 - x3**2),
        bandwidth=1,
        name="cos",
    )


@pytest.fixture
def config_path(tmp_path: Any) -> Path:
    """A small experiment file in a temporary directory."""
    path = tmp_path / "experiment.toml"
    path.write_text(SMALL_CONFIG, encoding="utf-8")
    return path


@pytest.fixture
def experiment(config_path: Path) -> ExperimentConfig:
    return load_config(config_path)


@pytest.fixture
def settings(tmp_path: Any) -> CalderonSettings:
    """Settings writing into a temporary run directory."""
    return CalderonSettings(output_dir=str(tmp_path / "run"), quiet=True)


@pytest.fixture(autouse=True)
def _reset_package_logger():
    """Undo configure_logging so caplog sees package records in every test."""
    yield
    root = logging.getLogger("waveguide_calderon")
    root.handlers = []
    root.setLevel(logging.NOTSET)
    root.propagate = True

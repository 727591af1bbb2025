"""Run-time settings and the versioned experiment configuration."""

from __future__ import annotations

import hashlib
import json
import math
import tomllib
from enum import StrEnum
from pathlib import Path
from typing import Literal

from pydantic import BaseModel, Field, field_validator, model_validator
from pydantic_settings import BaseSettings

from waveguide_calderon.geometry.mesh import CrossSectionSpec

SCHEMA_VERSION = 1
GAMMA_STAR_LIMIT = math.exp(-math.e)


class CalderonSettings(BaseSettings):
    """Toolkit settings, loaded from env vars or CLI args."""

    model_config = {"env_prefix": "CALDERON_"}

    output_dir: str = Field(default="runs", description="Directory for reports and tables")
    workers: int = Field(default=1, ge=1, description="Worker threads for parallel maps")

    # Display
    verbose: bool = Field(default=False, description="Verbose terminal output")
    quiet: bool = Field(default=False, description="Suppress terminal output")
    log_level: str | None = Field(default=None, description="Explicit log level override")


def _unit(value: tuple[float, float], name: str) -> tuple[float, float]:
    if abs(math.hypot(*value) - 1.0) > 1e-9:
        raise ValueError(f"{name} must be a unit vector, got {value}")
    return value


class FacesConfig(BaseModel):
    """Sector direction ξ₀ and the margins that define F′ and G′."""

    xi0: tuple[float, float] = Field(default=(1.0, 0.0), description="Sector direction ξ₀")
    input_margin: float = Field(
        default=0.7071, ge=0, le=1, description="F′ = {ξ₀·ν′ ≥ −input_margin}"
    )
    output_margin: float = Field(
        default=0.7071, ge=0, le=1, description="G′ = {ξ₀·ν′ ≤ output_margin}"
    )

    @field_validator("xi0")
    @classmethod
    def _xi0_unit(cls, value: tuple[float, float]) -> tuple[float, float]:
        return _unit(value, "ξ₀")


class FiberConfig(BaseModel):
    """θ-grid and mode truncation."""

    thetas: list[float] = Field(default_factory=lambda: [0.0], description="Quasi-momenta θ")
    K: int = Field(default=2, ge=1, description="Axial modes per window: center ± K")

    @field_validator("thetas")
    @classmethod
    def _thetas_in_range(cls, value: list[float]) -> list[float]:
        if not value:
            raise ValueError("θ-grid must not be empty")
        if any(not 0.0 <= t < 2.0 * math.pi for t in value):
            raise ValueError("every θ must lie in [0, 2π)")
        return value


class PotentialKind(StrEnum):
    CONSTANT = "constant"
    BUMP = "bump"
    COS_BUMP = "cos_bump"
    PLANE_WAVE_BUMP = "plane_wave_bump"
    RANDOM = "random"


class PotentialPreset(BaseModel):
    """A named symbolic potential."""

    kind: PotentialKind = Field(description="Preset family")
    value: float = Field(default=0.0, description="Constant value or additive offset")
    amplitude: float = Field(default=1.0, description="Amplitude of the shaped part")
    center: tuple[float, float] = Field(default=(0.0, 0.0), description="Bump centre")
    radius: float = Field(default=0.5, gt=0, description="Bump radius")
    eta0: tuple[float, float] = Field(default=(0.0, 0.0), description="Plane-wave frequency")
    bandwidth: int = Field(default=2, ge=0, description="Axial bandwidth M")
    seed: int | None = Field(default=None, description="Seed for the random preset")
    bound_plus: float | None = Field(default=None, description="Declared M₊")
    bound_minus: float | None = Field(default=None, description="Declared M₋")


class ConductivityKind(StrEnum):
    CONSTANT = "constant"
    EXPONENTIAL = "exponential"
    BUMP_FAMILY = "bump_family"


class ConductivityPreset(BaseModel):
    """A named symbolic conductivity."""

    kind: ConductivityKind = Field(description="Preset family")
    value: float = Field(default=1.0, gt=0, description="Constant c, or base value a₀")
    beta: float = Field(default=0.0, description="Exponent β of c·e^{βx₂}")
    amplitude: float = Field(default=0.0, description="Bump amplitude s")
    center: tuple[float, float] = Field(default=(0.0, 0.0), description="Bump centre")
    radius: float = Field(default=0.5, gt=0, description="Bump radius")
    axial: bool = Field(default=False, description="Modulate the bump by 1 + cos(2πx₁)/2")


class CGOConfig(BaseModel):
    """CGO parameters and τ-ladders."""

    k: int = Field(default=0, description="Axial frequency index")
    eta: tuple[float, float] = Field(
        default=(0.0, 2.0 * math.pi), description="Transverse frequency η ≠ 0"
    )
    r: float = Field(default=0.3, gt=0, description="Radius parameter")
    theta: float = Field(default=0.0, ge=0, lt=2.0 * math.pi, description="Quasi-momentum")
    potential: str = Field(default="one", description="Potential preset for the remainders")
    taus: list[float] = Field(
        default_factory=lambda: [25.0, 50.0, 100.0, 200.0], description="Decay-ladder targets"
    )
    carleman_taus: list[float] = Field(
        default_factory=lambda: [30.0, 60.0, 120.0], description="Carleman ladder"
    )
    carleman_fields: int = Field(default=20, ge=1, description="Random zero-trace test fields")
    tau_floor: float = Field(default=20.0, gt=0, description="Smallest admissible τ")
    grid: int = Field(default=48, ge=8, description="Fourier points per box side")
    gmres_rtol: float = Field(default=1e-10, gt=0, description="GMRES relative tolerance")

    @field_validator("eta")
    @classmethod
    def _eta_nonzero(cls, value: tuple[float, float]) -> tuple[float, float]:
        if math.hypot(*value) == 0.0:
            raise ValueError("η must be nonzero")
        return value


class RecoverConfig(BaseModel):
    """Fourier recovery of V₁ − V₂."""

    first: str = Field(default="base", description="Preset for V₁")
    second: str = Field(default="perturbed", description="Preset for V₂")
    k: int = Field(default=1, description="Axial index of a single coefficient")
    eta: tuple[float, float] = Field(default=(0.0, 2.0), description="η of a single coefficient")
    ks: list[int] = Field(default_factory=lambda: [-1, 0, 1], description="Axial grid indices")
    box_side: float = Field(default=2.5, gt=0, description="Period L of the transverse grid")
    max_index: int = Field(default=1, ge=1, description="Largest |a|, |b| with η = 2π(a, b)/L")
    directions: list[tuple[float, float]] = Field(
        default_factory=lambda: [(1.0, 0.0)], description="Sector directions ξ₀"
    )
    tau_floor: float = Field(default=10.0, gt=0, description="Smallest τ used by the policy")
    tau_max: float = Field(default=60.0, gt=0, description="Largest τ used by the policy")
    c_hat: float = Field(default=1.0, gt=0, description="Fitted exponential constant ĉ")

    @field_validator("eta")
    @classmethod
    def _eta_nonzero(cls, value: tuple[float, float]) -> tuple[float, float]:
        if math.hypot(*value) == 0.0:
            raise ValueError("η must be nonzero")
        return value

    @field_validator("directions")
    @classmethod
    def _directions_unit(cls, value: list[tuple[float, float]]) -> list[tuple[float, float]]:
        return [_unit(p, "sector direction") for p in value]


class StabilityConfig(BaseModel):
    """Perturbation ladder V₂(s) = V₁ + s·W."""

    base: str = Field(default="base", description="Preset for V₁")
    perturbation: str = Field(default="bump", description="Preset for W")
    exponents: list[int] = Field(
        default_factory=lambda: list(range(-8, -1)), description="Ladder s = 2^e"
    )
    gamma_star: float = Field(default=1e-6, gt=0, description="Branch point γ* of Φ")
    include_zero: bool = Field(default=True, description="Add the s = 0 member")

    @field_validator("gamma_star")
    @classmethod
    def _gamma_star_branch(cls, value: float) -> float:
        if value >= GAMMA_STAR_LIMIT:
            raise ValueError(f"γ* must be below e^(-e) ≈ {GAMMA_STAR_LIMIT:.4f}")
        return value


class ConductivityConfig(BaseModel):
    """Conductivity pair and ladder."""

    first: str = Field(default="background", description="Preset for a₁")
    second: str = Field(default="bumped", description="Preset for a₂")
    perturbation: str = Field(default="bumped", description="Bump preset for the ladder")
    exponents: list[int] = Field(
        default_factory=lambda: list(range(-6, -1)), description="Ladder s = 2^e"
    )
    a_star: float = Field(default=0.5, gt=0, description="Conductivity floor a*")
    bound_plus: float = Field(default=2.0, gt=0, description="M₊")
    bound_minus: float = Field(default=1.0, ge=0, description="M₋")
    theta: float = Field(default=0.0, ge=0, lt=2.0 * math.pi, description="Fiber of the Σ maps")


class Tolerances(BaseModel):
    residual: float = Field(default=1e-8, gt=0, description="Relative solver residual")
    membership: float = Field(default=1e-8, gt=0, description="Membership trace tolerance")
    compatibility: float = Field(default=1e-10, gt=0, description="Boundary compatibility")
    agreement: float = Field(default=0.02, gt=0, description="Cross-check relative agreement")


class ExperimentConfig(BaseModel):
    """A complete experiment description, read from TOML."""

    schema_version: Literal[1] = Field(default=1, description="Configuration schema version")
    cross_section: CrossSectionSpec = Field(
        default_factory=CrossSectionSpec, description="Cross-section ω"
    )
    faces: FacesConfig = Field(default_factory=FacesConfig, description="Boundary partition")
    fiber: FiberConfig = Field(default_factory=FiberConfig, description="Fiber grid")
    potentials: dict[str, PotentialPreset] = Field(
        default_factory=dict, description="Named potentials"
    )
    conductivities: dict[str, ConductivityPreset] = Field(
        default_factory=dict, description="Named conductivities"
    )
    cgo: CGOConfig = Field(default_factory=CGOConfig, description="CGO settings")
    recover: RecoverConfig = Field(default_factory=RecoverConfig, description="Recovery settings")
    stability: StabilityConfig = Field(
        default_factory=StabilityConfig, description="Stability ladder"
    )
    conductivity: ConductivityConfig = Field(
        default_factory=ConductivityConfig, description="Conductivity chain"
    )
    tolerances: Tolerances = Field(default_factory=Tolerances, description="Tolerances")
    seed: int = Field(default=0, description="Seed for every random choice")

    @model_validator(mode="after")
    def _references_exist(self) -> ExperimentConfig:
        potentials = {
            "cgo.potential": self.cgo.potential,
            "recover.first": self.recover.first,
            "recover.second": self.recover.second,
            "stability.base": self.stability.base,
            "stability.perturbation": self.stability.perturbation,
        }
        conductivities = {
            "conductivity.first": self.conductivity.first,
            "conductivity.second": self.conductivity.second,
            "conductivity.perturbation": self.conductivity.perturbation,
        }
        missing = [
            f"{key} → {name!r}" for key, name in potentials.items() if name not in self.potentials
        ]
        missing += [
            f"{key} → {name!r}"
            for key, name in conductivities.items()
            if name not in self.conductivities
        ]
        if missing:
            raise ValueError("unknown preset references: " + ", ".join(missing))
        return self


def load_config(path: str | Path) -> ExperimentConfig:
    """Parse and validate a TOML experiment file."""
    with open(path, "rb") as f:
        data = tomllib.load(f)
    return ExperimentConfig.model_validate(data)


def config_hash(config: ExperimentConfig) -> str:
    """SHA-256 of the canonical JSON dump."""
    canonical = json.dumps(config.model_dump(mode="json"), sort_keys=True, separators=(",", ":"))
    return hashlib.sha256(canonical.encode()).hexdigest()

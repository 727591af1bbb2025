"""Container for a computed CGO solution u = e^{ζ·x}(1 + v)."""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np

from waveguide_calderon.cgo.params import CGOParams
from waveguide_calderon.models import CGOKind
from waveguide_calderon.spectral.fiber import FiberContext, ModeExpansion


@dataclass(frozen=True, eq=False)
class CGOSolution:
    """A CGO solution on one fiber.

    ``remainder[j + K]`` is the 1-periodic axial mode j of v; ``u`` lives on the
    window centred at the axial index of e^{ζ·x}.
    """

    params: CGOParams
    kind: CGOKind
    remainder: np.ndarray
    u: ModeExpansion
    residual: float
    trace_defect: float = 0.0
    diagnostics: dict[str, Any] = field(default_factory=dict)

    @property
    def ctx(self) -> FiberContext:
        return self.u.ctx

    @property
    def zeta(self) -> np.ndarray:
        return self.params.zeta1 if self.kind == CGOKind.SMOOTH else self.params.zeta2

    @property
    def remainder_norm(self) -> float:
        """‖v‖_{L²(Ω̌)} by Parseval over the periodic modes."""
        mass = self.ctx.mesh.mass
        v = self.remainder
        return math.sqrt(float(np.real(np.einsum("kn,kn->", v.conj(), (mass @ v.T).T))))


def cgo_expansion(
    params: CGOParams, zeta: np.ndarray, remainder: np.ndarray, ctx: FiberContext
) -> ModeExpansion:
    """Mode coefficients of e^{ζ·x}(1 + v) on a window centred at ζ's axial index."""
    phase = params.transverse_phase(zeta, ctx.mesh.vertices)
    coefficients = remainder * phase[None, :]
    coefficients[ctx.K] += phase
    return ModeExpansion(coefficients, ctx)

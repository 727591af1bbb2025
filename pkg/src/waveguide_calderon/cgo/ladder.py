"""τ-ladders of CGO remainders and boundary-trace growth."""

from __future__ import annotations

import logging
import math

import numpy as np

from waveguide_calderon.cgo.params import params_for_tau
from waveguide_calderon.cgo.smooth import solve_cgo_smooth
from waveguide_calderon.cgo.solution import CGOSolution
from waveguide_calderon.cgo.vanishing import solve_cgo_vanishing
from waveguide_calderon.forward.potential import PotentialField
from waveguide_calderon.forward.solver import DirichletData, FiberOperator
from waveguide_calderon.models import CGOKind, DecayLadder, LadderRow
from waveguide_calderon.parallel import parallel_map

logger = logging.getLogger(__name__)


def trace_norm(solution: CGOSolution) -> float:
    """‖T₀u‖_{H_θ(Γ̌)}: L² norm of the harmonic lift of the trace."""
    ctx = solution.ctx
    lift = FiberOperator(PotentialField.zeros(ctx.mesh), ctx)
    data = DirichletData(solution.u.boundary_trace().copy(), ctx)
    return lift.solve(data).l2_norm()


def loglog_slope(taus: list[float], values: list[float]) -> float:
    slope, _ = np.polyfit(np.log(taus), np.log(values), 1)
    return float(slope)


def decay_ladder(
    potential: PotentialField,
    kind: CGOKind,
    k: int,
    eta: tuple[float, float],
    theta: float,
    taus: list[float],
    *,
    xi0: tuple[float, float] | None = None,
    epsilon: float = 0.25,
    K: int = 2,
    grid: int = 48,
    tau_floor: float = 20.0,
    with_trace: bool = False,
    workers: int = 1,
) -> DecayLadder:
    """‖v‖_{L²(Ω̌)} across a τ-ladder with the fitted log-log slope."""

    def one(tau: float) -> LadderRow:
        params = params_for_tau(k, eta, theta, tau, xi0=xi0)
        if kind == CGOKind.SMOOTH:
            solution = solve_cgo_smooth(potential, params, K=K, grid=grid, tau_floor=tau_floor)
        else:
            solution = solve_cgo_vanishing(potential, params, epsilon, K=K, tau_floor=tau_floor)
        logger.info(
            "%s remainder at τ=%.4g: ‖v‖ = %.4e", kind.value, params.tau, solution.remainder_norm
        )
        return LadderRow(
            tau=params.tau,
            r=params.r,
            norm=solution.remainder_norm,
            residual=solution.residual,
            trace_norm=trace_norm(solution) if with_trace else None,
        )

    rows = parallel_map(one, taus, workers)
    positive = [(row.tau, row.norm) for row in rows if row.norm > 0]
    slope = loglog_slope(*zip(*positive, strict=True)) if len(positive) >= 2 else 0.0
    return DecayLadder(kind=kind, rows=rows, slope=slope)


def trace_growth_ratios(ladder: DecayLadder, c_omega: float) -> list[float]:
    """‖T₀u_{ζ₂}‖ e^{−c_ω τ} per ladder row; bounded when the trace law holds."""
    return [
        row.trace_norm * math.exp(-c_omega * row.tau)
        for row in ladder.rows
        if row.trace_norm is not None
    ]

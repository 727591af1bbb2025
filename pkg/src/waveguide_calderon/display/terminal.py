"""Rich terminal display for reports and ladders."""

from __future__ import annotations

import contextlib
import logging
from typing import Any

from rich.console import Console
from rich.logging import RichHandler
from rich.panel import Panel
from rich.table import Table
from rich.text import Text

from waveguide_calderon.config import CalderonSettings
from waveguide_calderon.models import (
    AdmissibilityReport,
    CarlemanTable,
    ConductivityLadderReport,
    ConductivityStabilityReport,
    CoverageReport,
    DecayLadder,
    DerivedExample,
    DNSupResult,
    FrequencySample,
    SigmaDifferenceReport,
    StabilityReport,
)


def configure_logging(settings: CalderonSettings, console: Console | None = None) -> None:
    """Route package logs through a RichHandler at the level the settings ask for."""
    if settings.log_level:
        level = settings.log_level.upper()
    elif settings.verbose:
        level = "DEBUG"
    elif settings.quiet:
        level = "WARNING"
    else:
        level = "INFO"
    handler = RichHandler(console=console, show_path=False, rich_tracebacks=False)
    root = logging.getLogger("waveguide_calderon")
    root.handlers = [handler]
    root.setLevel(level)
    root.propagate = False


def _check(flag: bool) -> Text:
    return Text("yes", style="green") if flag else Text("no", style="bold red")


def _num(value: float | None) -> str:
    return "-" if value is None else f"{value:.4e}"


class TerminalDisplay:
    """Rich terminal display for experiment summaries."""

    def __init__(self, settings: CalderonSettings) -> None:
        self._settings = settings
        self._console = Console()

    @property
    def console(self) -> Console:
        """Access the underlying Rich console."""
        return self._console

    def _print(self, renderable: Any) -> None:
        if self._settings.quiet:
            return
        try:
            self._console.print(renderable)
        except (UnicodeEncodeError, OSError):
            # terminals without the math glyphs get the plain repr
            with contextlib.suppress(Exception):
                self._console.print(str(renderable))

    def display_summary(self, title: str, values: dict[str, Any]) -> None:
        lines = [f"[dim]{key}:[/dim] {value}" for key, value in values.items()]
        self._print(Panel("\n".join(lines), title=f"[bold]{title}[/bold]", padding=(0, 1)))

    def display_dn_sup(self, result: DNSupResult) -> None:
        table = Table(title="DN difference per fiber")
        table.add_column("θ", justify="right")
        table.add_column("‖Λ₁ − Λ₂‖", justify="right")
        for fiber in result.fibers:
            style = "bold" if fiber.theta == result.theta_max else ""
            table.add_row(f"{fiber.theta:.4f}", _num(fiber.gamma), style=style)
        self._print(table)
        self._print(f"  γ = [bold]{result.gamma:.6e}[/bold] at θ = {result.theta_max:.4f}")

    def display_ladder(self, ladder: DecayLadder) -> None:
        table = Table(title=f"Remainder decay ({ladder.kind.value})")
        table.add_column("τ", justify="right")
        table.add_column("r", justify="right")
        table.add_column("‖v‖", justify="right")
        table.add_column("residual", justify="right")
        table.add_column("‖T₀u‖", justify="right")
        for row in ladder.rows:
            table.add_row(
                f"{row.tau:.4g}",
                f"{row.r:.4g}",
                _num(row.norm),
                _num(row.residual),
                _num(row.trace_norm),
            )
        self._print(table)
        self._print(f"  log-log slope: [bold]{ladder.slope:.3f}[/bold]")

    def display_carleman(self, table_data: CarlemanTable) -> None:
        table = Table(title="Carleman ratio floor")
        table.add_column("τ", justify="right")
        table.add_column("min ratio", justify="right")
        for tau, floor in sorted(table_data.floors.items()):
            table.add_row(f"{float(tau):.4g}", _num(floor))
        self._print(table)
        self._print(f"  non-decreasing: {'yes' if table_data.floor_nondecreasing else 'no'}")

    def display_coefficients(
        self, samples: list[FrequencySample], coverage: CoverageReport | None = None
    ) -> None:
        table = Table(title="Fourier coefficients of V₁ − V₂")
        for column in ("k", "η", "τ", "estimate", "1/τ", "e^{Cτ}γ"):
            table.add_column(column, justify="right")
        for s in samples:
            table.add_row(
                str(s.k),
                f"({s.eta[0]:.3g}, {s.eta[1]:.3g})",
                f"{s.tau:.4g}",
                f"{s.estimate_real:+.4e} {s.estimate_imag:+.4e}i",
                _num(s.remainder_term),
                _num(s.data_term),
            )
        self._print(table)
        if coverage is not None:
            self._print(
                f"  coverage: {coverage.covered}/{coverage.total} grid frequencies, "
                f"{len(coverage.gaps)} gaps"
            )

    def display_stability(self, report: StabilityReport) -> None:
        table = Table(title="Stability ladder", show_lines=False)
        for column in ("s", "γ", "δ", "Φ(γ)", "δ/Φ"):
            table.add_column(column, justify="right")
        for r in report.records:
            table.add_row(f"{r.s:.3g}", _num(r.gamma), _num(r.delta), _num(r.phi), _num(r.ratio))
        self._print(table)
        self._print(
            f"  fitted C = [bold]{report.fitted_constant:.4g}[/bold]  "
            f"spread = {report.spread:.3g}  skipped = {len(report.skipped)}"
        )

    def display_admissibility(self, report: AdmissibilityReport) -> None:
        table = Table(title="Conductivity admissibility")
        table.add_column("condition")
        table.add_column("holds", justify="center")
        for name in (
            "periodic",
            "floor",
            "w1_bound",
            "negative_part",
            "poincare_gap",
            "smallness_w1",
            "smallness_w2",
        ):
            table.add_row(name, _check(getattr(report, name)))
        self._print(table)
        self._print(
            f"  min a = {report.min_value:.4g}  ‖a‖_W1 = {report.w1_norm:.4g}  "
            f"‖a‖_W2 = {report.w2_norm:.4g}  ‖max(0,−V_a)‖ = {report.negative_part_sup:.4g}"
        )

    def display_sigma(self, report: SigmaDifferenceReport) -> None:
        self.display_summary(
            "Σ difference",
            {
                "‖Σ₁ − Σ₂‖": _num(report.sigma_norm),
                "‖Λ₁ − Λ₂‖": _num(report.lambda_norm),
                "‖Λ₁ − Λ₂‖ ≤ a*^(-1/2)‖Σ₁ − Σ₂‖": report.inequality_holds,
            },
        )

    def display_conductivity(self, report: ConductivityStabilityReport) -> None:
        self.display_summary(
            "Conductivity stability",
            {
                "‖a₁ − a₂‖_H¹": _num(report.h1_difference),
                "‖α‖_H¹ direct": _num(report.alpha_direct),
                "‖α‖_H¹ solved": _num(report.alpha_solved),
                "α agreement": f"{report.alpha_agreement:.3%}",
                "factor bound holds": report.factor_holds,
                "dual ratio": _num(report.dual_ratio),
                "Φ": _num(report.phi),
                "ratio": _num(report.ratio),
            },
        )

    def display_conductivity_ladder(self, report: ConductivityLadderReport) -> None:
        table = Table(title="Conductivity ladder")
        for column in ("s", "‖a₁ − a₂‖_H¹", "‖Σ₁ − Σ₂‖", "Φ", "ratio"):
            table.add_column(column, justify="right")
        for r in report.rows:
            table.add_row(
                f"{r.s:.3g}", _num(r.h1_difference), _num(r.sigma_norm), _num(r.phi), _num(r.ratio)
            )
        self._print(table)
        self._print(
            f"  fitted C = [bold]{report.fitted_constant:.4g}[/bold]  spread = {report.spread:.3g}"
        )

    def display_examples(self, rows: list[DerivedExample]) -> None:
        table = Table(title="Derived reference values")
        table.add_column("name")
        table.add_column("value", justify="right")
        table.add_column("source", style="dim")
        for row in rows:
            table.add_row(row.name, f"{row.value:.10g}", row.source)
        self._print(table)

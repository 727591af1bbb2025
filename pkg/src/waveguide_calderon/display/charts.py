"""Plotly figures built from the CSV tables of a run directory."""

from __future__ import annotations

import logging
import pathlib
from collections.abc import Callable

import plotly.graph_objects as go

from waveguide_calderon.storage.artifacts import read_csv

logger = logging.getLogger(__name__)

Rows = list[dict[str, str]]

SERIES_COLORS: dict[str, str] = {
    "smooth": "#3b82f6",
    "vanishing": "#22c55e",
    "gamma": "#eab308",
    "delta": "#f97316",
    "phi": "#a855f7",
}

LADDER_TABLES = {"smooth": "ladder_smooth.csv", "vanishing": "ladder_vanishing.csv"}
STABILITY_TABLE = "stability.csv"
CARLEMAN_TABLE = "carleman.csv"
DN_TABLE = "dn_fibers.csv"
CONDUCTIVITY_TABLE = "conductivity_ladder.csv"


def _floats(rows: Rows, column: str) -> list[float]:
    return [float(r[column]) for r in rows]


def _layout(fig: go.Figure, title: str, x: str, y: str, *, log_x: bool, log_y: bool) -> go.Figure:
    fig.update_layout(title=title, xaxis_title=x, yaxis_title=y, template="plotly_dark")
    if log_x:
        fig.update_xaxes(type="log")
    if log_y:
        fig.update_yaxes(type="log")
    return fig


def chart_decay_ladder(ladders: dict[str, Rows]) -> go.Figure:
    """log ‖v‖ against log τ for each remainder family."""
    fig = go.Figure()
    for kind, rows in ladders.items():
        color = SERIES_COLORS.get(kind, "#6b7280")
        fig.add_trace(
            go.Scatter(
                x=_floats(rows, "tau"),
                y=_floats(rows, "norm"),
                mode="markers+lines",
                name=kind,
                marker=dict(color=color),
                line=dict(color=color),
            )
        )
    return _layout(fig, "Remainder decay", "τ", "‖v‖", log_x=True, log_y=True)


def chart_stability(rows: Rows) -> go.Figure:
    """γ, δ and Φ(γ) along the perturbation ladder."""
    fig = go.Figure()
    positive = [r for r in rows if float(r["s"]) > 0]
    s = _floats(positive, "s")
    for column, label in (("gamma", "γ"), ("delta", "δ"), ("phi", "Φ(γ)")):
        fig.add_trace(
            go.Scatter(
                x=s,
                y=_floats(positive, column),
                mode="markers+lines",
                name=label,
                line=dict(color=SERIES_COLORS[column]),
            )
        )
    return _layout(fig, "Stability ladder", "s", "value", log_x=True, log_y=True)


def chart_carleman(rows: Rows) -> go.Figure:
    """Every Carleman quotient and the per-τ floor."""
    fig = go.Figure()
    fig.add_trace(
        go.Scatter(
            x=_floats(rows, "tau"),
            y=_floats(rows, "ratio"),
            mode="markers",
            name="fields",
            marker=dict(color="#6b7280", size=5),
        )
    )
    floors: dict[float, float] = {}
    for r in rows:
        tau, ratio = float(r["tau"]), float(r["ratio"])
        floors[tau] = min(ratio, floors.get(tau, ratio))
    taus = sorted(floors)
    fig.add_trace(
        go.Scatter(
            x=taus,
            y=[floors[t] for t in taus],
            mode="markers+lines",
            name="floor",
            line=dict(color="#f97316"),
        )
    )
    return _layout(fig, "Carleman quotient", "τ", "ratio", log_x=True, log_y=False)


def chart_dn_fibers(rows: Rows) -> go.Figure:
    fig = go.Figure()
    fig.add_trace(
        go.Bar(x=_floats(rows, "theta"), y=_floats(rows, "gamma"), marker_color="#eab308")
    )
    return _layout(fig, "DN difference per fiber", "θ", "‖Λ₁ − Λ₂‖", log_x=False, log_y=False)


def chart_conductivity_ladder(rows: Rows) -> go.Figure:
    fig = go.Figure()
    s = _floats(rows, "s")
    for column, label, color in (
        ("h1_difference", "‖a₁ − a₂‖_H¹", "#f97316"),
        ("sigma_norm", "‖Σ₁ − Σ₂‖", "#eab308"),
        ("phi", "Φ", "#a855f7"),
    ):
        fig.add_trace(
            go.Scatter(
                x=s,
                y=_floats(rows, column),
                mode="markers+lines",
                name=label,
                line=dict(color=color),
            )
        )
    return _layout(fig, "Conductivity ladder", "s", "value", log_x=True, log_y=True)


_HTML_TEMPLATE = """\
<!DOCTYPE html>
<html lang="en">
<head>
<meta charset="utf-8">
<title>waveguide-calderon report</title>
<style>
body {{ margin: 0 auto; max-width: 1100px; padding: 1rem 2rem;
       background: #111827; color: #d1d5db; font: 15px/1.5 system-ui, sans-serif; }}
header {{ border-bottom: 1px solid #374151; margin-bottom: 1rem; }}
nav a {{ color: #93c5fd; margin-right: 1rem; text-decoration: none; }}
section {{ margin: 1.5rem 0; }}
section h2 {{ font-size: 1.05rem; color: #f3f4f6; margin: 0 0 .4rem; }}
</style>
</head>
<body>
<header>
<h1>waveguide-calderon report</h1>
<p>{subtitle}</p>
<nav>{links}</nav>
</header>
{charts}
</body>
</html>
"""


def collect_figures(run_dir: pathlib.Path) -> list[tuple[str, go.Figure]]:
    """Every chart whose input tables exist in ``run_dir``."""
    figures: list[tuple[str, go.Figure]] = []
    ladders = {
        kind: read_csv(run_dir / name)
        for kind, name in LADDER_TABLES.items()
        if (run_dir / name).exists()
    }
    if ladders:
        figures.append(("decay_ladder", chart_decay_ladder(ladders)))
    builders: list[tuple[str, str, Callable[[Rows], go.Figure]]] = [
        ("stability", STABILITY_TABLE, chart_stability),
        ("carleman", CARLEMAN_TABLE, chart_carleman),
        ("dn_fibers", DN_TABLE, chart_dn_fibers),
        ("conductivity_ladder", CONDUCTIVITY_TABLE, chart_conductivity_ladder),
    ]
    for name, table, build in builders:
        path = run_dir / table
        if path.exists():
            rows = read_csv(path)
            if rows:
                figures.append((name, build(rows)))
    return figures


def generate_html_report(
    run_dir: str | pathlib.Path, output_path: str | pathlib.Path | None = None
) -> pathlib.Path:
    """Render every available chart of a run into one self-contained HTML file.

    The first chart embeds Plotly.js; the others reference the loaded library.
    Raises FileNotFoundError when the directory holds no chartable table.
    """
    run_dir = pathlib.Path(run_dir)
    figures = collect_figures(run_dir)
    if not figures:
        raise FileNotFoundError(f"no chartable CSV tables in {run_dir}")
    sections: list[str] = []
    links: list[str] = []
    for idx, (name, fig) in enumerate(figures):
        plot = fig.to_html(
            full_html=False,
            include_plotlyjs=idx == 0,
            config={"responsive": True},
            div_id=f"chart-{name}",
        )
        title = fig.layout.title.text or name
        links.append(f'<a href="#{name}">{title}</a>')
        sections.append(f'<section id="{name}"><h2>{title}</h2>{plot}</section>')

    html = _HTML_TEMPLATE.format(
        subtitle=f"{len(figures)} charts from {run_dir.name}",
        links="".join(links),
        charts="\n".join(sections),
    )
    output_path = pathlib.Path(output_path) if output_path else run_dir / "report.html"
    output_path.write_text(html, encoding="utf-8")
    logger.info("wrote %s with %d charts", output_path, len(figures))
    return output_path

"""Tests for the chart generation module."""

from __future__ import annotations

import pathlib

import plotly.graph_objects as go
import pytest

from waveguide_calderon.display.charts import (
    chart_carleman,
    chart_conductivity_ladder,
    chart_decay_ladder,
    chart_dn_fibers,
    chart_stability,
    collect_figures,
    generate_html_report,
)
from waveguide_calderon.storage import ArtifactStore


def _ladder_rows() -> list[dict[str, str]]:
    return [
        {"tau": "25", "norm": "0.04"},
        {"tau": "50", "norm": "0.02"},
        {"tau": "100", "norm": "0.01"},
    ]


def _stability_rows() -> list[dict[str, str]]:
    return [
        {"s": "0", "gamma": "0", "delta": "0", "phi": "0"},
        {"s": "0.25", "gamma": "1e-3", "delta": "1e-2", "phi": "1e-3"},
        {"s": "0.5", "gamma": "2e-3", "delta": "2e-2", "phi": "2e-3"},
    ]


@pytest.fixture
def run_dir(tmp_path: pathlib.Path) -> pathlib.Path:
    store = ArtifactStore(tmp_path / "run", "hash")
    store.write_csv("ladder_smooth.csv", [{"tau": 25.0, "norm": 0.04}, {"tau": 50.0, "norm": 0.02}])
    store.write_csv(
        "stability.csv",
        [
            {"s": 0.0, "gamma": 0.0, "delta": 0.0, "phi": 0.0, "ratio": 0.0},
            {"s": 0.25, "gamma": 1e-3, "delta": 1e-2, "phi": 1e-3, "ratio": 10.0},
        ],
    )
    store.write_csv("dn_fibers.csv", [{"theta": 0.0, "gamma": 0.1}, {"theta": 3.14, "gamma": 0.2}])
    return store.root


# ---------------------------------------------------------------------------
# Individual charts
# ---------------------------------------------------------------------------


def test_decay_ladder_one_trace_per_kind() -> None:
    fig = chart_decay_ladder({"smooth": _ladder_rows(), "vanishing": _ladder_rows()})
    assert isinstance(fig, go.Figure)
    assert [trace.name for trace in fig.data] == ["smooth", "vanishing"]
    assert fig.layout.xaxis.type == "log"
    assert fig.layout.yaxis.type == "log"


def test_stability_skips_zero_scale() -> None:
    fig = chart_stability(_stability_rows())
    assert len(fig.data) == 3
    assert list(fig.data[0].x) == [0.25, 0.5]


def test_carleman_floor() -> None:
    rows = [
        {"tau": "30", "field_index": "0", "ratio": "2.0"},
        {"tau": "30", "field_index": "1", "ratio": "1.5"},
        {"tau": "60", "field_index": "0", "ratio": "3.0"},
    ]
    fig = chart_carleman(rows)
    assert len(fig.data) == 2
    assert list(fig.data[1].y) == [1.5, 3.0]


def test_dn_fibers_bar() -> None:
    fig = chart_dn_fibers([{"theta": "0", "gamma": "0.1"}, {"theta": "1", "gamma": "0.3"}])
    assert isinstance(fig.data[0], go.Bar)


def test_conductivity_ladder_traces() -> None:
    rows = [{"s": "0.002", "h1_difference": "1e-3", "sigma_norm": "1e-4", "phi": "1e-4"}]
    assert len(chart_conductivity_ladder(rows).data) == 3


# ---------------------------------------------------------------------------
# generate_html_report
# ---------------------------------------------------------------------------


def test_collect_figures(run_dir: pathlib.Path) -> None:
    names = [name for name, _ in collect_figures(run_dir)]
    assert names == ["decay_ladder", "stability", "dn_fibers"]


def test_generate_html_report_creates_file(run_dir: pathlib.Path) -> None:
    out = generate_html_report(run_dir)
    assert out == run_dir / "report.html"
    assert out.stat().st_size > 0


def test_generate_html_report_content(run_dir: pathlib.Path, tmp_path: pathlib.Path) -> None:
    out = generate_html_report(run_dir, tmp_path / "custom.html")
    content = out.read_text(encoding="utf-8")
    assert "<!DOCTYPE html>" in content
    assert "Remainder decay" in content
    assert "chart-stability" in content
    assert 'href="#dn_fibers"' in content
    assert "plotly" in content.lower()


def test_generate_html_report_without_tables(tmp_path: pathlib.Path) -> None:
    with pytest.raises(FileNotFoundError):
        generate_html_report(tmp_path)

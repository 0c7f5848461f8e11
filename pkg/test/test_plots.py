"""
Figure rendering from written artifacts
"""

import json

import pytest

from api import plots
from core.exceptions import ExportError
from foldship_cli import EXIT_OK, EXIT_USAGE, main

from conftest import PROJECT_FILE

PNG_MAGIC = b'\x89PNG'


def _run(tmp_path, *args, config=PROJECT_FILE):
    return main(["--config", str(config), "--out", str(tmp_path), *args])


@pytest.fixture
def artifacts(tmp_path):
    """Small sweep, energy curve, fold curve and a 10 s flight in one directory."""
    assert _run(tmp_path, "sweep", "--n-range", "7", "7", "--m-range", "4", "4",
                "--lambda-range", "0.85", "0.9") == EXIT_OK
    assert _run(tmp_path, "energy") == EXIT_OK
    assert _run(tmp_path, "pattern", "--curve") == EXIT_OK
    short = tmp_path / "short.json"
    short.write_text(json.dumps({
        "version": 1,
        "scenario": {"duration_s": 10.0, "waypoints": [{"t": 0.0, "targets": {"z": 1.0}}]},
    }), encoding="utf-8")
    assert _run(tmp_path, "simulate", config=short) == EXIT_OK
    return tmp_path


def test_plot_renders_every_artifact(artifacts, capsys):
    capsys.readouterr()
    assert _run(artifacts, "plot") == EXIT_OK
    for stem in ("fold_curve_n7_m4_l0.90", "feasibility_map", "weight_distribution",
                 "energy_curve", "trajectory_sma1"):
        figure = artifacts / f"{stem}.png"
        assert figure.exists(), stem
        assert figure.read_bytes()[:4] == PNG_MAGIC
    assert capsys.readouterr().out.count("📈") == 5


def test_plot_svg_format(artifacts):
    assert _run(artifacts, "plot", "--format", "svg") == EXIT_OK
    assert "<svg" in (artifacts / "energy_curve.svg").read_text(encoding="utf-8")


def test_plot_empty_directory_is_usage_error(tmp_path):
    assert _run(tmp_path, "plot") == EXIT_USAGE


def test_render_all_rejects_unknown_format(tmp_path):
    with pytest.raises(ExportError):
        plots.render_all(str(tmp_path), "bmp")


def test_weight_distribution_needs_a_feasible_design(tmp_path):
    assert _run(tmp_path, "sweep", "--n-range", "7", "7", "--m-range", "4", "4",
                "--lambda-range", "0.6", "0.65") == EXIT_OK
    _, rows = plots.read_artifact_csv(str(tmp_path / "sweep.csv"))
    with pytest.raises(ExportError):
        plots.plot_weight_distribution(rows, str(tmp_path / "w.png"))
    assert plots.render_all(str(tmp_path)) == [str(tmp_path / "feasibility_map.png")]


def test_weight_shares_add_up(artifacts):
    provenance, rows = plots.read_artifact_csv(str(artifacts / "sweep.csv"))
    assert provenance.startswith("foldship ")
    feasible = [r for r in rows if r['feasible'] == 'True']
    assert feasible
    for row in feasible:
        shares = plots.weight_shares(row)
        assert set(shares) == set(plots.MASS_GROUPS)
        assert sum(shares.values()) == pytest.approx(1.0)
        assert 0.3 < shares['membrane'] < 0.7

"""
Plots - matplotlib figures rendered from the CSV/JSON artifacts

Handles:
- Bistability energy over the fold angle (fold_curve_*.csv)
- Feasibility map of the (n, m, lambda) grid (feasibility_map.csv)
- Weight distribution of the feasible designs (sweep.csv)
- Mission energy against cruise speed (energy_curve.csv + energy_summary.json)
- Position traces of a simulated flight (trajectory_*.csv)

Figures are rebuilt from files on disk only, so any earlier run can be
re-plotted without recomputation. Each figure carries the provenance line
of the artifact it was drawn from.
"""

import os
import csv
import glob
import json
import math
import logging
from typing import Any, Dict, List, Optional, Tuple

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt  # noqa: E402

from core.exceptions import ExportError  # noqa: E402

logger = logging.getLogger(__name__)

GOLDEN_MEAN = (math.sqrt(5.0) - 1.0) / 2.0
FIG_WIDTH_IN = 6.4

STYLE = {
    "figure.figsize": (FIG_WIDTH_IN, FIG_WIDTH_IN * GOLDEN_MEAN),
    "figure.dpi": 100,
    "savefig.dpi": 150,
    "savefig.bbox": "tight",
    "font.size": 10,
    "axes.labelsize": 10,
    "axes.titlesize": 11,
    "legend.fontsize": 8,
    "xtick.labelsize": 8,
    "ytick.labelsize": 8,
    "axes.spines.top": False,
    "axes.spines.right": False,
    "axes.grid": True,
    "grid.alpha": 0.3,
    "lines.linewidth": 1.5,
}

FORMATS = ("png", "pdf", "svg")

# Mass columns of sweep.csv per weight-distribution group
MASS_GROUPS = {
    'membrane': ('envelope_g', 'sheath_g', 'seal_overlap_g'),
    'exoskeleton': ('exoskeleton_tubes_g', 'junctions_g', 'kevlar_g'),
    'mechatronics': ('mechatronics_g',),
    'battery': ('battery_g',),
    'valves': ('valves_g',),
}


def setup_style() -> None:
    """Apply the shared rcParams."""
    plt.rcParams.update(STYLE)


# =================== ARTIFACT READING ===================

def read_artifact_csv(path: str) -> Tuple[Optional[str], List[Dict[str, str]]]:
    """Provenance line (without '# ') and the rows of a report CSV."""
    try:
        with open(path, encoding='utf-8', newline='') as fh:
            first = fh.readline()
            provenance = None
            if first.startswith("#"):
                provenance = first[1:].strip()
            else:
                fh.seek(0)
            return provenance, list(csv.DictReader(fh))
    except OSError as e:
        raise ExportError(f"cannot read {path}: {e}") from e


def _column(rows: List[Dict[str, str]], name: str) -> List[float]:
    return [float(r[name]) for r in rows]


def _is_true(value: str) -> bool:
    return value.strip().lower() == 'true'


def save_figure(fig, path: str, provenance: Optional[str] = None) -> str:
    """Stamp the provenance line, save and close the figure."""
    if provenance:
        fig.text(0.99, 0.005, provenance, ha='right', va='bottom', fontsize=6, alpha=0.6)
    try:
        fig.savefig(path)
    except (OSError, ValueError) as e:
        raise ExportError(f"cannot write figure {path}: {e}") from e
    finally:
        plt.close(fig)
    logger.info(f"📈 Figure written: {path}")
    return path


# =================== FIGURES ===================

def plot_fold_energy(rows: List[Dict[str, str]], path: str, provenance: Optional[str] = None) -> str:
    """Normalized bistability energy against the fold angle."""
    fig, ax = plt.subplots()
    ax.plot(_column(rows, 'alpha_deg'), _column(rows, 'normalized_energy'), color='tab:blue')
    ax.set_xlabel("fold angle alpha (deg)")
    ax.set_ylabel("normalized energy")
    ax.set_title("Bistability energy")
    return save_figure(fig, path, provenance)


def plot_feasibility_map(rows: List[Dict[str, str]], path: str, provenance: Optional[str] = None) -> str:
    """Every grid point in (n, m, lambda); feasible designs highlighted."""
    fig = plt.figure(figsize=(FIG_WIDTH_IN, FIG_WIDTH_IN * 0.8))
    ax = fig.add_subplot(projection='3d')
    feasible = [r for r in rows if _is_true(r['feasible'])]
    rejected = [r for r in rows if not _is_true(r['feasible'])]
    if rejected:
        ax.scatter(_column(rejected, 'n'), _column(rejected, 'm'), _column(rejected, 'lambda'),
                   s=2, color='0.75', alpha=0.3, label="infeasible")
    if feasible:
        ax.scatter(_column(feasible, 'n'), _column(feasible, 'm'), _column(feasible, 'lambda'),
                   s=18, color='tab:green', marker='s', label=f"feasible ({len(feasible)})")
    ax.set_xlabel("n")
    ax.set_ylabel("m")
    ax.set_zlabel("lambda")
    ax.set_title("Feasibility map")
    ax.legend(loc='upper left')
    return save_figure(fig, path, provenance)


def weight_shares(row: Dict[str, str]) -> Dict[str, float]:
    """Group shares of the built mass for one sweep row."""
    grams = {group: sum(float(row[c]) for c in cols) for group, cols in MASS_GROUPS.items()}
    built = sum(grams.values())
    if built <= 0.0:
        return {group: 0.0 for group in grams}
    return {group: g / built for group, g in grams.items()}


def plot_weight_distribution(rows: List[Dict[str, str]], path: str, provenance: Optional[str] = None) -> str:
    """
    Stacked mass shares of the feasible designs, one bar per design.

    Raises:
        ExportError: the sweep has no feasible design
    """
    feasible = [r for r in rows if _is_true(r['feasible'])]
    if not feasible:
        raise ExportError("weight distribution needs at least one feasible design")
    labels = [f"{r['n']},{r['m']},{float(r['lambda']):.2f}" for r in feasible]
    shares = [weight_shares(r) for r in feasible]

    fig, ax = plt.subplots(figsize=(max(FIG_WIDTH_IN, 0.25 * len(feasible)), FIG_WIDTH_IN * GOLDEN_MEAN))
    bottom = [0.0] * len(feasible)
    for group in MASS_GROUPS:
        heights = [100.0 * s[group] for s in shares]
        ax.bar(range(len(feasible)), heights, bottom=bottom, label=group, width=0.8)
        bottom = [b + h for b, h in zip(bottom, heights)]
    ax.set_xticks(range(len(feasible)))
    ax.set_xticklabels(labels, rotation=90, fontsize=6)
    ax.set_xlabel("design (n, m, lambda)")
    ax.set_ylabel("share of built mass (%)")
    ax.set_ylim(0, 100)
    ax.set_title("Weight distribution of feasible designs")
    ax.legend(loc='upper right', ncol=len(MASS_GROUPS))
    return save_figure(fig, path, provenance)


def plot_energy_curve(
    rows: List[Dict[str, str]],
    path: str,
    battery_Wh: Optional[float] = None,
    minimum_speed: Optional[float] = None,
    provenance: Optional[str] = None,
) -> str:
    """Mission energy against cruise speed, with the battery capacity line."""
    fig, ax = plt.subplots()
    ax.plot(_column(rows, 'v_m_s'), _column(rows, 'energy_Wh'), color='tab:blue', label="mission energy")
    if battery_Wh is not None:
        ax.axhline(battery_Wh, color='tab:red', linestyle='--', label=f"battery {battery_Wh:g} Wh")
    if minimum_speed is not None:
        ax.axvline(minimum_speed, color='tab:green', linestyle=':', label=f"min speed {minimum_speed:.3f} m/s")
    ax.set_xscale('log')
    ax.set_xlabel("cruise speed (m/s)")
    ax.set_ylabel("energy (Wh)")
    ax.set_title("Mission energy")
    ax.legend()
    return save_figure(fig, path, provenance)


def plot_trajectory(rows: List[Dict[str, str]], path: str, provenance: Optional[str] = None) -> str:
    """x and z position over time, one panel each."""
    t = _column(rows, 't')
    fig, (ax_x, ax_z) = plt.subplots(2, 1, sharex=True, figsize=(FIG_WIDTH_IN, FIG_WIDTH_IN * 0.75))
    ax_x.plot(t, _column(rows, 'x'), color='tab:blue')
    ax_x.set_ylabel("x (m)")
    ax_z.plot(t, _column(rows, 'z'), color='tab:orange')
    ax_z.set_ylabel("z (m)")
    ax_z.set_xlabel("time (s)")
    ax_x.set_title("Flight trajectory")
    return save_figure(fig, path, provenance)


# =================== BATCH ===================

def _stem(path: str) -> str:
    return os.path.splitext(os.path.basename(path))[0]


def _energy_summary(out_dir: str) -> Dict[str, Any]:
    path = os.path.join(out_dir, "energy_summary.json")
    if not os.path.exists(path):
        return {}
    try:
        with open(path, encoding='utf-8') as fh:
            return json.load(fh)
    except (OSError, ValueError) as e:
        raise ExportError(f"cannot read {path}: {e}") from e


def render_all(out_dir: str, fmt: str = "png") -> List[str]:
    """
    Render a figure for every known artifact in out_dir.

    Returns the written figure paths, empty when nothing was found.

    Raises:
        ExportError: unknown format or unreadable artifact
    """
    if fmt not in FORMATS:
        raise ExportError(f"unknown figure format {fmt!r} (choose from {', '.join(FORMATS)})")
    setup_style()
    written: List[str] = []

    def target(stem: str) -> str:
        return os.path.join(out_dir, f"{stem}.{fmt}")

    for path in sorted(glob.glob(os.path.join(out_dir, "fold_curve_*.csv"))):
        provenance, rows = read_artifact_csv(path)
        written.append(plot_fold_energy(rows, target(_stem(path)), provenance))

    feasibility = os.path.join(out_dir, "feasibility_map.csv")
    if os.path.exists(feasibility):
        provenance, rows = read_artifact_csv(feasibility)
        written.append(plot_feasibility_map(rows, target("feasibility_map"), provenance))

    sweep = os.path.join(out_dir, "sweep.csv")
    if os.path.exists(sweep):
        provenance, rows = read_artifact_csv(sweep)
        if any(_is_true(r['feasible']) for r in rows):
            written.append(plot_weight_distribution(rows, target("weight_distribution"), provenance))
        else:
            logger.warning("⚠️  sweep has no feasible design, weight distribution skipped")

    energy = os.path.join(out_dir, "energy_curve.csv")
    if os.path.exists(energy):
        provenance, rows = read_artifact_csv(energy)
        summary = _energy_summary(out_dir)
        minimum = (summary.get('minimum_feasible') or {}).get('v_cruise')
        written.append(plot_energy_curve(rows, target("energy_curve"), summary.get('battery_Wh'),
                                         minimum, provenance))

    for path in sorted(glob.glob(os.path.join(out_dir, "trajectory_*.csv"))):
        provenance, rows = read_artifact_csv(path)
        written.append(plot_trajectory(rows, target(_stem(path)), provenance))

    logger.info(f"📈 {len(written)} figure(s) rendered in {out_dir}")
    return written

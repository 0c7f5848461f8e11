"""
Core module for FoldShip

Kresling-origami rigid airship design-to-mission toolkit.

Main Components:
- kresling_geometry: segment geometry, fold kinematics, mesh and volume
- mass_model: bill of materials, mass rollup, lift, cut plan
- design_sweep: exhaustive (n, m, lambda) sweep and pair ranking
- pattern_export: flat crease pattern and SVG writer
- flight_controller: saturated sliding-mode law with moving-average correction
- flight_sim: fixed-step point-mass simulator
- energy_planner: mission energy versus cruise speed

Usage:
    from core import DesignInputs, evaluate_design

    evaluation = evaluate_design(DesignInputs(), n=7, m=4, lam=0.9)
    print(evaluation.extra_payload_g)
"""

from .config import Config, get_config
from .exceptions import FoldShipError
from .kresling_geometry import KreslingParams, derive_segment, fold_state, build_mesh, enclosed_volume
from .mass_model import DesignInputs, evaluate_design
from .design_sweep import SweepGrid, run_sweep, rank_pairs
from .pattern_export import unfold, export_svg
from .flight_controller import AxisGains, AxisController
from .flight_sim import PlantParams, Scenario, run_scenario, summarize
from .energy_planner import PowerModel, mission_energy, minimum_feasible_speed

__version__ = "1.0.0"
__license__ = "MIT"

__all__ = [
    "Config",
    "get_config",
    "FoldShipError",
    "KreslingParams",
    "derive_segment",
    "fold_state",
    "build_mesh",
    "enclosed_volume",
    "DesignInputs",
    "evaluate_design",
    "SweepGrid",
    "run_sweep",
    "rank_pairs",
    "unfold",
    "export_svg",
    "AxisGains",
    "AxisController",
    "PlantParams",
    "Scenario",
    "run_scenario",
    "summarize",
    "PowerModel",
    "mission_energy",
    "minimum_feasible_speed",
    "__version__",
]


def get_version():
    """Current toolkit version string."""
    return __version__


def get_module_info():
    """Name, version and component list of the core package."""
    return {
        "name": "FoldShip Core",
        "version": __version__,
        "license": __license__,
        "components": {
            "kresling_geometry": "Segment geometry, fold kinematics, mesh and volume",
            "mass_model": "Mass rollup, lift and cut plan",
            "design_sweep": "Design-space sweep and pair ranking",
            "pattern_export": "Crease pattern and SVG export",
            "flight_controller": "Sliding-mode controller with moving-average correction",
            "flight_sim": "Point-mass flight simulator",
            "energy_planner": "Mission energy planner",
        },
    }


__all__.extend(["get_version", "get_module_info"])

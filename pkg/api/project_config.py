"""
Project Configuration - strict, versioned JSON project file

One document carries every engineering input of a run:
- design_inputs: editable airship parameters (mm, g, kg/m^3 ...)
- sweep_grid: n/m ranges and the lambda grid
- plant, gains, controller: flight simulation setup (plant.volume_m3 null
  means the deployed volume of the nominal design)
- power_model: mission energy model
- scenario: timed waypoints
- output_dir: where artifacts go

Unknown keys are rejected at every level. The sha256 of the canonical
JSON is the provenance id stamped on every output file.

Version: 1.0.0
"""

import copy
import json
import hashlib
import logging
from dataclasses import dataclass, fields
from typing import Dict, Any, Optional

from core import __version__
from core.exceptions import ConfigError
from core.design_sweep import SweepGrid
from core.energy_planner import PowerModel
from core.flight_controller import CONTROL_RATE_HZ, AxisController, AxisGains, build_controllers
from core.flight_sim import AXES, PHYSICS_DT, PlantParams, Scenario, Waypoint
from core.kresling_geometry import KreslingParams, build_mesh, enclosed_volume
from core.mass_model import DesignInputs

logger = logging.getLogger(__name__)

CONFIG_VERSION = 1

TOP_LEVEL_KEYS = (
    "version", "design_inputs", "sweep_grid", "plant", "gains",
    "controller", "power_model", "scenario", "output_dir",
)
PLANT_KEYS = (
    "volume_m3", "net_weight_kg", "rho_air", "added_mass_x", "added_mass_z", "added_mass_y",
    "C_D_x", "C_D_z", "C_D_y", "A_x", "A_z", "A_y", "floor_z",
)
GAIN_KEYS = ("F_max", "v_max", "tol")
CONTROLLER_KEYS = ("sma_window_s", "damping", "control_rate_hz", "physics_dt")
SCENARIO_KEYS = ("duration_s", "initial_position", "waypoints")
WAYPOINT_KEYS = ("t", "targets", "cruise_speeds")


# =================== DEFAULT DOCUMENT ===================

def default_document() -> Dict[str, Any]:
    """The reference project: nominal airship, full sweep grid, hover-then-cruise mission."""
    return {
        "version": CONFIG_VERSION,
        "design_inputs": DesignInputs().to_dict(),
        "sweep_grid": SweepGrid().to_dict(),
        "plant": {
            "volume_m3": None,
            "net_weight_kg": 0.02,
            "rho_air": 1.231,
            "added_mass_x": 1.165,
            "added_mass_z": 0.29,
            "C_D_x": 1.2,
            "C_D_z": 0.9,
            "A_x": 0.41,
            "A_z": 0.355,
            "floor_z": 0.0,
        },
        "gains": {
            "x": {"F_max": 1.25, "v_max": 0.15, "tol": 0.1},
            "y": {"F_max": 1.25, "v_max": 0.15, "tol": 0.1},
            "z": {"F_max": 1.25, "v_max": 1.0, "tol": 0.1},
            "psi": {"F_max": 0.1, "v_max": 0.5, "tol": 0.05},
        },
        "controller": {
            "sma_window_s": 1.0,
            "damping": True,
            "control_rate_hz": CONTROL_RATE_HZ,
            "physics_dt": PHYSICS_DT,
        },
        "power_model": {
            "motor_quadratic": [3.347, 25.857, 1.69],
            "electronics_W": 4.515,
            "hover_thrust_N": 0.1962,
            "battery_Wh": 14.8,
            "mission_distance_m": 300.0,
            "drag_coefficient": 1.2,
            "rho_air": 1.231,
            "reference_area_m2": 0.41,
            "forward_mode": "combined",
        },
        "scenario": Scenario.reference().to_dict(),
        "output_dir": "out",
    }


# =================== PARSING HELPERS ===================

def _check_keys(section: Any, allowed, where: str) -> Dict[str, Any]:
    if not isinstance(section, dict):
        raise ConfigError(f"{where} must be a JSON object")
    unknown = sorted(set(section) - set(allowed))
    if unknown:
        raise ConfigError(f"unknown key(s) in {where}: {', '.join(unknown)}")
    return section


def _number(value: Any, where: str) -> float:
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"{where} must be a number (got {value!r})")
    return value


def _number_map(section: Any, where: str, allowed=AXES) -> Dict[str, float]:
    section = _check_keys(section, allowed, where)
    return {k: float(_number(v, f"{where}.{k}")) for k, v in section.items()}


def design_volume(inputs: DesignInputs) -> float:
    """Deployed volume (m^3) of the nominal design; the plant default when volume_m3 is null."""
    params = KreslingParams.from_envelope(inputs.n, inputs.m, inputs.lam, inputs.D, inputs.H0)
    return enclosed_volume(build_mesh(params))


# =================== PROJECT CONFIG ===================

@dataclass
class ProjectConfig:
    design_inputs: DesignInputs
    sweep_grid: SweepGrid
    plant: PlantParams
    gains: Dict[str, AxisGains]
    sma_window_s: float
    damping: bool
    control_rate_hz: float
    physics_dt: float
    power_model: PowerModel
    scenario: Scenario
    output_dir: str
    config_hash: str
    source: str = "<defaults>"

    @classmethod
    def from_dict(cls, document: Dict[str, Any], source: str = "<dict>") -> "ProjectConfig":
        """
        Build a validated config from a parsed document.

        Missing sections fall back to the reference project; unknown keys
        never do.

        Raises:
            ConfigError: unknown key, wrong type or invalid value
        """
        doc = _check_keys(document, TOP_LEVEL_KEYS, "project config")
        if doc.get("version", CONFIG_VERSION) != CONFIG_VERSION:
            raise ConfigError(f"unsupported config version {doc.get('version')!r} (expected {CONFIG_VERSION})")

        defaults = default_document()
        merged = copy.deepcopy(defaults)
        for key, value in doc.items():
            if isinstance(value, dict) and key not in ("scenario", "gains"):
                allowed = {
                    "design_inputs": [f.name for f in fields(DesignInputs)],
                    "sweep_grid": list(SweepGrid().to_dict()),
                    "plant": PLANT_KEYS,
                    "controller": CONTROLLER_KEYS,
                    "power_model": [f.name for f in fields(PowerModel)],
                }[key]
                merged[key].update(_check_keys(value, allowed, key))
            else:
                merged[key] = value

        try:
            design_inputs = DesignInputs(**merged["design_inputs"])
            grid_doc = merged["sweep_grid"]
            sweep_grid = SweepGrid(
                n_range=tuple(grid_doc["n_range"]),
                m_range=tuple(grid_doc["m_range"]),
                lambda_min=_number(grid_doc["lambda_min"], "sweep_grid.lambda_min"),
                lambda_max=_number(grid_doc["lambda_max"], "sweep_grid.lambda_max"),
                lambda_step=_number(grid_doc["lambda_step"], "sweep_grid.lambda_step"),
            )
            plant_doc = dict(merged["plant"])
            volume_m3 = plant_doc.pop("volume_m3")
            if volume_m3 is None:
                volume_m3 = design_volume(design_inputs)
            plant_doc = {k: _number(v, f"plant.{k}") for k, v in plant_doc.items()}
            plant = PlantParams.reference(
                volume_m3=_number(volume_m3, "plant.volume_m3"),
                net_weight_kg=plant_doc.pop("net_weight_kg"),
                rho_air=plant_doc.pop("rho_air"),
                **plant_doc,
            )
            gains_doc = _check_keys(merged["gains"], AXES, "gains")
            gains = {
                axis: AxisGains(**_check_keys(g, GAIN_KEYS, f"gains.{axis}"))
                for axis, g in gains_doc.items()
            }
            ctrl_doc = merged["controller"]
            if not isinstance(ctrl_doc["damping"], bool):
                raise ConfigError("controller.damping must be true or false")
            power_doc = dict(merged["power_model"])
            power_doc["motor_quadratic"] = tuple(power_doc["motor_quadratic"])
            power_model = PowerModel(**power_doc)
            scenario = _parse_scenario(merged["scenario"])
            output_dir = merged["output_dir"]
            if not isinstance(output_dir, str) or not output_dir:
                raise ConfigError("output_dir must be a non-empty string")
        except (TypeError, KeyError) as e:
            raise ConfigError(f"invalid project config: {e}") from e

        canonical = json.dumps(merged, sort_keys=True, separators=(",", ":"))
        return cls(
            design_inputs=design_inputs,
            sweep_grid=sweep_grid,
            plant=plant,
            gains=gains,
            sma_window_s=float(_number(ctrl_doc["sma_window_s"], "controller.sma_window_s")),
            damping=ctrl_doc["damping"],
            control_rate_hz=float(_number(ctrl_doc["control_rate_hz"], "controller.control_rate_hz")),
            physics_dt=float(_number(ctrl_doc["physics_dt"], "controller.physics_dt")),
            power_model=power_model,
            scenario=scenario,
            output_dir=output_dir,
            config_hash=hashlib.sha256(canonical.encode("utf-8")).hexdigest(),
            source=source,
        )

    def build_controllers(self, sma_window_s: Optional[float] = None) -> Dict[str, AxisController]:
        return build_controllers(
            self.gains,
            sma_window_s=self.sma_window_s if sma_window_s is None else sma_window_s,
            damping=self.damping,
            control_rate_hz=self.control_rate_hz,
        )

    def provenance(self) -> str:
        return f"foldship {__version__} config sha256:{self.config_hash}"


def _parse_scenario(doc: Any) -> Scenario:
    doc = _check_keys(doc, SCENARIO_KEYS, "scenario")
    waypoints = []
    for i, wp in enumerate(doc.get("waypoints", [])):
        where = f"scenario.waypoints[{i}]"
        wp = _check_keys(wp, WAYPOINT_KEYS, where)
        waypoints.append(Waypoint(
            t=float(_number(wp.get("t", 0.0), f"{where}.t")),
            targets=_number_map(wp.get("targets", {}), f"{where}.targets"),
            cruise_speeds=_number_map(wp.get("cruise_speeds", {}), f"{where}.cruise_speeds"),
        ))
    return Scenario(
        duration_s=float(_number(doc.get("duration_s", 0.0), "scenario.duration_s")),
        waypoints=waypoints,
        initial_position=_number_map(doc.get("initial_position", {}), "scenario.initial_position"),
    )


def load_project_config(path: Optional[str] = None) -> ProjectConfig:
    """
    Read and validate a project file; no path means the reference project.

    Raises:
        ConfigError: unreadable file, malformed JSON (with line and column) or invalid content
    """
    if path is None:
        return ProjectConfig.from_dict(default_document(), source="<defaults>")
    try:
        with open(path, 'r', encoding='utf-8') as fh:
            text = fh.read()
    except OSError as e:
        raise ConfigError(f"cannot read project config {path}: {e}") from e
    try:
        document = json.loads(text)
    except json.JSONDecodeError as e:
        raise ConfigError(f"{path}: malformed JSON at line {e.lineno}, column {e.colno}: {e.msg}") from e
    config = ProjectConfig.from_dict(document, source=path)
    logger.info(f"⚙️  Project config loaded: {path} (sha256 {config.config_hash[:12]})")
    return config

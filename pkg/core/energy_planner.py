"""
Energy Planner - mission energy budget versus cruise speed

Handles:
- Motor electrical power from thrust (quadratic regression)
- Quadratic drag at cruise
- Mission energy, duration and battery feasibility
- Energy-versus-speed curve with its battery crossings
- Minimum feasible cruise speed (bracketed root on the decreasing branch)

Power is W, energy Wh, thrust N, speed m/s.

Version: 1.0.0
"""

import math
import logging
from dataclasses import dataclass, field, asdict
from typing import Dict, Any, List, Optional, Sequence, Tuple

from scipy.optimize import brentq, minimize_scalar

from core.exceptions import ConfigError, DomainError

logger = logging.getLogger(__name__)

GRAVITY = 9.81

FORWARD_MODES = ("combined", "split")

# Speed search window for the energy minimum (m/s)
SPEED_SEARCH_MAX = 2.0


# =================== DEVICE TABLE ===================

@dataclass(frozen=True)
class DevicePower:
    name: str
    count: int
    unit_W: float

    @property
    def total_W(self) -> float:
        return self.count * self.unit_W


def device_power_table() -> List[DevicePower]:
    """Onboard electronics consumption; the totals sum to electronics_W."""
    return [
        DevicePower("LiDAR", 4, 0.7),
        DevicePower("sonar", 1, 0.015),
        DevicePower("video transmitter", 1, 0.5),
        DevicePower("camera", 1, 1.2),
    ]


def electronics_power(table: Optional[Sequence[DevicePower]] = None) -> float:
    return math.fsum(d.total_W for d in (table if table is not None else device_power_table()))


# =================== MODEL ===================

@dataclass
class PowerModel:
    """
    Mission power model.

    motor_quadratic (a, b, c): P = a*F^2 + b*F + c for one motor.
    forward_mode: 'combined' evaluates one motor on the full drag thrust,
    'split' runs two forward motors at half the thrust each.
    """
    motor_quadratic: Tuple[float, float, float] = (3.347, 25.857, 1.69)
    electronics_W: float = field(default_factory=electronics_power)
    hover_thrust_N: float = 0.02 * GRAVITY
    battery_Wh: float = 14.8
    mission_distance_m: float = 300.0
    drag_coefficient: float = 1.2
    rho_air: float = 1.231
    reference_area_m2: float = 0.41
    forward_mode: str = "combined"

    def __post_init__(self):
        self.motor_quadratic = tuple(float(c) for c in self.motor_quadratic)
        if len(self.motor_quadratic) != 3:
            raise ConfigError("motor_quadratic needs exactly three coefficients (a, b, c)")
        if self.forward_mode not in FORWARD_MODES:
            raise ConfigError(f"forward_mode must be one of {FORWARD_MODES} (got '{self.forward_mode}')")
        if self.mission_distance_m <= 0:
            raise ConfigError(f"mission_distance_m must be > 0 (got {self.mission_distance_m})")
        if self.battery_Wh < 0:
            raise ConfigError(f"battery_Wh must be >= 0 (got {self.battery_Wh})")
        if self.battery_Wh == 0:
            logger.warning("⚠️  battery_Wh is 0: no mission can be feasible")
        for name in ("electronics_W", "hover_thrust_N", "drag_coefficient", "rho_air", "reference_area_m2"):
            if getattr(self, name) < 0:
                raise ConfigError(f"{name} must be >= 0 (got {getattr(self, name)})")

    def to_dict(self) -> Dict[str, Any]:
        data = asdict(self)
        data['motor_quadratic'] = list(self.motor_quadratic)
        return data


@dataclass(frozen=True)
class MissionEnergy:
    v_cruise: float
    power_W: float
    duration_min: float
    total_Wh: float
    feasible: bool

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


@dataclass
class EnergyCurve:
    rows: List[MissionEnergy]
    crossings: List[float]

    def to_rows(self) -> List[Dict[str, Any]]:
        return [
            {'v_m_s': r.v_cruise, 'energy_Wh': r.total_Wh, 'duration_min': r.duration_min, 'feasible': r.feasible}
            for r in self.rows
        ]


# =================== POWER / DRAG ===================

def motor_power(thrust: float, coefficients: Tuple[float, float, float] = (3.347, 25.857, 1.69)) -> float:
    """
    Electrical power (W) of one motor producing thrust (N).

    Clamped below by the idle draw c.

    Raises:
        DomainError: negative or non-finite thrust
    """
    if not math.isfinite(thrust) or thrust < 0:
        raise DomainError(f"thrust must be a finite value >= 0 N (got {thrust})")
    a, b, c = coefficients
    return max(a * thrust * thrust + b * thrust + c, c)


def drag_force(v: float, C_D: float, rho: float, A: float) -> float:
    """F_D = 0.5 * C_D * rho * v^2 * A."""
    if v < 0:
        raise DomainError(f"speed must be >= 0 m/s (got {v})")
    return 0.5 * C_D * rho * v * v * A


def forward_power(thrust: float, model: PowerModel) -> float:
    """Propulsion power for a forward thrust under the model's bookkeeping mode."""
    if model.forward_mode == "split":
        return 2.0 * motor_power(thrust / 2.0, model.motor_quadratic)
    return motor_power(thrust, model.motor_quadratic)


def cruise_power(v_cruise: float, model: PowerModel) -> float:
    """Total electrical power while cruising at v_cruise."""
    drag = drag_force(v_cruise, model.drag_coefficient, model.rho_air, model.reference_area_m2)
    return (
        model.electronics_W
        + motor_power(model.hover_thrust_N, model.motor_quadratic)
        + forward_power(drag, model)
    )


# =================== MISSION ===================

def mission_energy(v_cruise: float, model: PowerModel) -> MissionEnergy:
    """
    Energy to fly the mission distance at constant cruise speed.

    Raises:
        DomainError: v_cruise <= 0
    """
    if not math.isfinite(v_cruise) or v_cruise <= 0:
        raise DomainError(f"cruise speed must be > 0 m/s (got {v_cruise})")
    duration_s = model.mission_distance_m / v_cruise
    power = cruise_power(v_cruise, model)
    total_Wh = power * duration_s / 3600.0
    return MissionEnergy(
        v_cruise=v_cruise,
        power_W=power,
        duration_min=duration_s / 60.0,
        total_Wh=total_Wh,
        feasible=total_Wh <= model.battery_Wh,
    )


def _surplus(v: float, model: PowerModel) -> float:
    return mission_energy(v, model).total_Wh - model.battery_Wh


def energy_curve(v_grid: Sequence[float], model: PowerModel, xtol: float = 1e-6) -> EnergyCurve:
    """
    Mission energy on a sorted positive speed grid plus every battery crossing.

    Crossings are refined with brentq between grid points that change
    feasibility.
    """
    speeds = [float(v) for v in v_grid]
    if not speeds:
        raise DomainError("speed grid is empty")
    if any(v <= 0 for v in speeds) or any(b <= a for a, b in zip(speeds, speeds[1:])):
        raise DomainError("speed grid must be strictly increasing and positive")

    rows = [mission_energy(v, model) for v in speeds]
    crossings: List[float] = []
    for left, right in zip(rows, rows[1:]):
        f_left = left.total_Wh - model.battery_Wh
        f_right = right.total_Wh - model.battery_Wh
        if f_left == 0.0:
            crossings.append(left.v_cruise)
        elif f_left * f_right < 0.0:
            crossings.append(brentq(_surplus, left.v_cruise, right.v_cruise, args=(model,), xtol=xtol))
    if rows[-1].total_Wh == model.battery_Wh and (not crossings or crossings[-1] != rows[-1].v_cruise):
        crossings.append(rows[-1].v_cruise)
    return EnergyCurve(rows=rows, crossings=crossings)


def optimal_speed(model: PowerModel, v_hi: float = SPEED_SEARCH_MAX) -> float:
    """Cruise speed of minimum mission energy in (0, v_hi]."""
    res = minimize_scalar(
        lambda v: mission_energy(v, model).total_Wh,
        bounds=(1e-3, v_hi),
        method='bounded',
        options={'xatol': 1e-6},
    )
    return float(res.x)


def minimum_feasible_speed(
    model: PowerModel,
    v_lo: float = 0.01,
    v_hi: Optional[float] = None,
    xtol: float = 1e-6,
) -> Optional[MissionEnergy]:
    """
    Slowest cruise speed whose mission energy fits the battery.

    Root of energy(v) - battery_Wh on the decreasing branch between v_lo
    and the energy-optimal speed. None when no speed is feasible.
    """
    v_opt = optimal_speed(model, v_hi or SPEED_SEARCH_MAX)
    if _surplus(v_opt, model) > 0.0:
        logger.warning(f"⚠️  no feasible cruise speed: best case {mission_energy(v_opt, model).total_Wh:.2f} Wh "
                       f"> battery {model.battery_Wh:.2f} Wh")
        return None
    if _surplus(v_lo, model) <= 0.0:
        return mission_energy(v_lo, model)
    v_min = brentq(_surplus, v_lo, v_opt, args=(model,), xtol=xtol)
    result = mission_energy(v_min, model)
    logger.info(
        f"🔋 minimum feasible speed {v_min:.4f} m/s ({result.duration_min:.1f} min, "
        f"{result.total_Wh:.2f} Wh, mode={model.forward_mode})"
    )
    return result

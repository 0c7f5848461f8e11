"""
Flight Simulator - fixed-step point-mass dynamics of the airship

Handles:
- Per-axis inertia with added mass, quadratic drag and net weight on z
- Semi-implicit Euler physics at 500 Hz, controllers at 40 Hz (zero-order hold)
- Timed waypoint scenarios and the reference hover-then-cruise mission
- Electrical energy accounting with the mission power model
- Run summaries (settling time, steady-state error, peak and cruise speed)

Version: 1.0.0
"""

import math
import logging
import statistics
from dataclasses import dataclass, field
from typing import Dict, Any, List, Optional, Sequence, Tuple

from core.exceptions import ConfigError, SimulationError
from core.energy_planner import GRAVITY, PowerModel, forward_power, motor_power
from core.flight_controller import CONTROL_RATE_HZ, AxisController, AxisGains

logger = logging.getLogger(__name__)

AXES = ("x", "y", "z", "psi")
PHYSICS_DT = 1.0 / 500.0

# Settling band as a fraction of the commanded step
SETTLING_FRACTION = 0.02


# =================== PLANT ===================

@dataclass(frozen=True)
class PlantParams:
    """
    Point-mass plant. base_mass kg, net_weight N (down), added masses kg,
    areas m^2. y and psi default to the x-axis values.
    """
    base_mass: float
    net_weight: float
    added_mass_x: float = 1.165
    added_mass_z: float = 0.29
    C_D_x: float = 1.2
    C_D_z: float = 0.9
    A_x: float = 0.41
    A_z: float = 0.355
    rho_air: float = 1.231
    added_mass_y: Optional[float] = None
    C_D_y: Optional[float] = None
    A_y: Optional[float] = None
    floor_z: float = 0.0

    def __post_init__(self):
        if not self.base_mass > 0:
            raise ConfigError(f"base_mass must be > 0 kg (got {self.base_mass})")
        for name in ("net_weight", "added_mass_x", "added_mass_z", "C_D_x", "C_D_z", "A_x", "A_z", "rho_air"):
            value = getattr(self, name)
            if not math.isfinite(value) or value < 0:
                raise ConfigError(f"plant {name} must be a finite value >= 0 (got {value})")

    @classmethod
    def reference(cls, volume_m3: float = 0.825, net_weight_kg: float = 0.02, rho_air: float = 1.231,
                  **overrides) -> "PlantParams":
        """Displaced-air mass plus net-weight mass as base inertia."""
        return cls(
            base_mass=rho_air * volume_m3 + net_weight_kg,
            net_weight=net_weight_kg * GRAVITY,
            rho_air=rho_air,
            **overrides,
        )

    def axis_params(self, axis: str) -> Tuple[float, float, float]:
        """(inertia, C_D, A) for one axis."""
        if axis == "z":
            return self.base_mass + self.added_mass_z, self.C_D_z, self.A_z
        if axis == "y":
            return (
                self.base_mass + (self.added_mass_y if self.added_mass_y is not None else self.added_mass_x),
                self.C_D_y if self.C_D_y is not None else self.C_D_x,
                self.A_y if self.A_y is not None else self.A_x,
            )
        if axis in ("x", "psi"):
            return self.base_mass + self.added_mass_x, self.C_D_x, self.A_x
        raise ConfigError(f"unknown axis '{axis}'")

    def to_dict(self) -> Dict[str, Any]:
        return {k: getattr(self, k) for k in self.__dataclass_fields__}


# =================== STATE ===================

@dataclass(frozen=True)
class SimState:
    t: float
    pos: Dict[str, float]
    vel: Dict[str, float]
    applied: Dict[str, float]
    energy_J: float = 0.0

    @classmethod
    def at_rest(cls, position: Optional[Dict[str, float]] = None) -> "SimState":
        position = position or {}
        return cls(
            t=0.0,
            pos={a: float(position.get(a, 0.0)) for a in AXES},
            vel={a: 0.0 for a in AXES},
            applied={a: 0.0 for a in AXES},
        )


def step_physics(state: SimState, plant: PlantParams, forces: Dict[str, float], dt: float,
                 power_W: float = 0.0) -> SimState:
    """
    Advance one fixed step with semi-implicit Euler.

    (base_mass + added_mass) * dv/dt = tau* - drag - net_weight (z only).
    The vehicle rests on floor_z and cannot sink through it.

    Raises:
        SimulationError: non-finite force or state
    """
    pos, vel = dict(state.pos), dict(state.vel)
    applied = {a: float(forces.get(a, 0.0)) for a in AXES}
    for axis in AXES:
        tau = applied[axis]
        inertia, C_D, A = plant.axis_params(axis)
        v = vel[axis]
        force = tau - 0.5 * C_D * plant.rho_air * v * abs(v) * A
        if axis == "z":
            force -= plant.net_weight
        v = v + force / inertia * dt
        p = pos[axis] + v * dt
        if axis == "z" and p < plant.floor_z:
            p = plant.floor_z
            v = max(v, 0.0)
        if not (math.isfinite(p) and math.isfinite(v)):
            raise SimulationError(f"non-finite state on axis {axis} at t={state.t:.4f}s (tau={tau})")
        pos[axis], vel[axis] = p, v
    return SimState(t=state.t + dt, pos=pos, vel=vel, applied=applied, energy_J=state.energy_J + power_W * dt)


def electrical_power(forces: Dict[str, float], model: PowerModel, powered_axes: Sequence[str] = ("x", "z")) -> float:
    """Electronics plus one Z motor and the forward propulsion on x, as the mission planner books it."""
    power = model.electronics_W
    for axis in powered_axes:
        thrust = abs(forces.get(axis, 0.0))
        power += forward_power(thrust, model) if axis != "z" else motor_power(thrust, model.motor_quadratic)
    return power


# =================== SCENARIO ===================

@dataclass(frozen=True)
class Waypoint:
    """Targets (and optional per-axis cruise speeds) that become active at t."""
    t: float
    targets: Dict[str, float]
    cruise_speeds: Dict[str, float] = field(default_factory=dict)


@dataclass
class Scenario:
    duration_s: float
    waypoints: List[Waypoint]
    initial_position: Dict[str, float] = field(default_factory=dict)

    def __post_init__(self):
        if not self.duration_s > 0:
            raise ConfigError(f"scenario duration must be > 0 s (got {self.duration_s})")
        self.waypoints = sorted(self.waypoints, key=lambda w: w.t)
        for wp in self.waypoints:
            if wp.t < 0 or wp.t > self.duration_s:
                raise ConfigError(f"waypoint at t={wp.t}s is outside [0, {self.duration_s}] s")
            for axis in list(wp.targets) + list(wp.cruise_speeds):
                if axis not in AXES:
                    raise ConfigError(f"waypoint at t={wp.t}s names unknown axis '{axis}'")
            for axis, speed in wp.cruise_speeds.items():
                if not speed > 0:
                    raise ConfigError(f"cruise speed for {axis} must be > 0 (got {speed})")

    @classmethod
    def reference(cls, altitude_m: float = 1.0, distance_m: float = 2.0, cruise_start_s: float = 50.0,
                  duration_s: float = 100.0) -> "Scenario":
        """Take off to altitude at t=0, then move forward by distance."""
        return cls(
            duration_s=duration_s,
            waypoints=[
                Waypoint(t=0.0, targets={"z": altitude_m}),
                Waypoint(t=cruise_start_s, targets={"x": distance_m}),
            ],
        )

    def axes(self) -> List[str]:
        seen = {a for wp in self.waypoints for a in list(wp.targets) + list(wp.cruise_speeds)}
        return [a for a in AXES if a in seen]

    def command_time(self, axis: str) -> float:
        """Time of the last waypoint that sets a target on axis."""
        times = [wp.t for wp in self.waypoints if axis in wp.targets]
        return times[-1] if times else 0.0

    def final_target(self, axis: str) -> float:
        targets = [wp.targets[axis] for wp in self.waypoints if axis in wp.targets]
        return targets[-1] if targets else float(self.initial_position.get(axis, 0.0))

    def to_dict(self) -> Dict[str, Any]:
        return {
            'duration_s': self.duration_s,
            'initial_position': dict(self.initial_position),
            'waypoints': [
                {'t': w.t, 'targets': dict(w.targets), 'cruise_speeds': dict(w.cruise_speeds)}
                for w in self.waypoints
            ],
        }


# =================== LOG ===================

@dataclass
class SimSample:
    t: float
    pos: Dict[str, float]
    vel: Dict[str, float]
    applied: Dict[str, float]
    energy_J: float
    control: Dict[str, Dict[str, Any]]


@dataclass
class SimLog:
    samples: List[SimSample] = field(default_factory=list)
    final_state: Optional[SimState] = None
    dt: float = PHYSICS_DT
    control_rate_hz: float = CONTROL_RATE_HZ

    def series(self, key: str, axis: str) -> List[float]:
        return [getattr(s, key)[axis] for s in self.samples]

    def times(self) -> List[float]:
        return [s.t for s in self.samples]

    def trajectory_rows(self) -> List[Dict[str, Any]]:
        return [
            {
                't': s.t,
                'x': s.pos['x'], 'y': s.pos['y'], 'z': s.pos['z'], 'psi': s.pos['psi'],
                'vx': s.vel['x'], 'vy': s.vel['y'], 'vz': s.vel['z'], 'vpsi': s.vel['psi'],
                'tau_x': s.applied['x'], 'tau_z': s.applied['z'],
                'energy_J': s.energy_J,
            }
            for s in self.samples
        ]

    def force_rows(self) -> List[Dict[str, Any]]:
        rows = []
        for s in self.samples:
            for axis, c in s.control.items():
                rows.append({
                    't': s.t, 'axis': axis, 's': c['s'], 'tau': c['tau'],
                    'tau_sma': c['tau_sma'], 'tau_star': c['tau_star'],
                })
        return rows


# =================== RUN ===================

def run_scenario(
    scenario: Scenario,
    plant: PlantParams,
    controllers: Dict[str, AxisController],
    power_model: Optional[PowerModel] = None,
    dt: float = PHYSICS_DT,
    control_rate_hz: float = CONTROL_RATE_HZ,
) -> SimLog:
    """
    Run the scenario to its end and return the control-rate log.

    Forces are recomputed on control ticks and held between them; ticks
    are counted on the physics step index so runs are bit-identical.

    Raises:
        ConfigError: the scenario drives an axis with no controller
        SimulationError: non-finite state
    """
    missing = [a for a in scenario.axes() if a not in controllers]
    if missing:
        raise ConfigError(f"scenario references unconfigured axes: {', '.join(missing)}")
    if not dt > 0 or not control_rate_hz > 0:
        raise ConfigError(f"dt and control rate must be > 0 (got dt={dt}, rate={control_rate_hz})")

    power_model = power_model or PowerModel()
    for ctrl in controllers.values():
        ctrl.reset()
        ctrl.set_target(scenario.initial_position.get(ctrl.name, 0.0))

    state = SimState.at_rest(scenario.initial_position)
    if state.pos["z"] < plant.floor_z:
        raise ConfigError(f"initial z {state.pos['z']} is below the floor {plant.floor_z}")

    physics_rate = 1.0 / dt
    total_steps = int(round(scenario.duration_s / dt))
    pending = list(scenario.waypoints)
    log = SimLog(dt=dt, control_rate_hz=control_rate_hz)
    forces = {a: 0.0 for a in AXES}
    power = electrical_power(forces, power_model)
    ticks = 0

    for k in range(total_steps):
        t = k * dt
        while pending and pending[0].t <= t + 1e-12:
            wp = pending.pop(0)
            for axis, speed in wp.cruise_speeds.items():
                controllers[axis].set_cruise_speed(speed)
            for axis, target in wp.targets.items():
                controllers[axis].set_target(target)
            logger.debug(f"waypoint t={wp.t}s targets={wp.targets}")

        if k * control_rate_hz >= ticks * physics_rate - 1e-9:
            ticks += 1
            control = {}
            for axis, ctrl in controllers.items():
                forces[axis] = ctrl.compute_tau(state.pos[axis], state.vel[axis])
                control[axis] = dict(ctrl.snapshot(), saturated=ctrl.saturated)
            power = electrical_power(forces, power_model)
            log.samples.append(SimSample(
                t=t, pos=dict(state.pos), vel=dict(state.vel),
                applied=dict(forces), energy_J=state.energy_J, control=control,
            ))

        state = step_physics(state, plant, forces, dt, power)

    log.final_state = state
    logger.info(
        f"🛩️  Scenario done: {scenario.duration_s:.0f}s, {ticks} control ticks, "
        f"final x={state.pos['x']:.4f} z={state.pos['z']:.4f}, energy {state.energy_J / 3600.0:.3f} Wh"
    )
    return log


def _settling_time(times: List[float], values: List[float], target: float, start_value: float,
                   t_cmd: float) -> Optional[float]:
    band = SETTLING_FRACTION * max(abs(target - start_value), 1e-9)
    settled_at = None
    for t, v in zip(times, values):
        if t < t_cmd:
            continue
        if abs(v - target) <= band:
            if settled_at is None:
                settled_at = t
        else:
            settled_at = None
    return None if settled_at is None else settled_at - t_cmd


def summarize(log: SimLog, scenario: Scenario) -> Dict[str, Any]:
    """
    Per-axis settling time, steady-state error, peak and cruise speed, plus
    total energy. Cruise speed is the median |v| over ticks where the axis
    controller was saturated after its last command.
    """
    if not log.samples or log.final_state is None:
        raise SimulationError("cannot summarize an empty simulation log")
    times = log.times()
    final = log.final_state
    axes: Dict[str, Any] = {}
    for axis in scenario.axes():
        t_cmd = scenario.command_time(axis)
        target = scenario.final_target(axis)
        positions = log.series('pos', axis)
        velocities = log.series('vel', axis)
        start_value = next((p for t, p in zip(times, positions) if t >= t_cmd), positions[0])
        cruise = [
            abs(s.vel[axis]) for s in log.samples
            if s.t >= t_cmd and axis in s.control and s.control[axis]['saturated']
        ]
        axes[axis] = {
            'target': target,
            'final_position': final.pos[axis],
            'steady_state_error': abs(target - final.pos[axis]),
            'settling_time_s': _settling_time(times, positions, target, start_value, t_cmd),
            'peak_velocity': max(abs(v) for v in velocities),
            'cruise_velocity': statistics.median(cruise) if cruise else None,
        }
    return {
        'duration_s': scenario.duration_s,
        'axes': axes,
        'total_energy_J': final.energy_J,
        'total_energy_Wh': final.energy_J / 3600.0,
    }

"""
Flight Controller - saturated sliding-mode law with moving-average force correction

One AxisController per controlled coordinate (x, y, z, psi). Inside the
boundary layer |s| < xi*tol the law is linear in s (PD behaviour); outside
it applies constant-magnitude force (sliding-mode behaviour). The moving
average of previously applied forces is added back to cancel steady
disturbances such as net weight and cruise drag.

Version: 1.0.0
"""

import math
import logging
from collections import deque
from dataclasses import dataclass, replace
from typing import Deque, Dict, Any, Optional

from core.exceptions import ConfigError, SimulationError

logger = logging.getLogger(__name__)

CONTROL_RATE_HZ = 40.0

# Running sum is recomputed from the buffer this often
SMA_REFRESH_STEPS = 10_000


@dataclass(frozen=True)
class AxisGains:
    """
    F_max: N (N*m for psi), v_max: m/s (rad/s), tol: m (rad).

    xi = F_max / v_max, so the saturated law balances at |v| = v_max.
    """
    F_max: float
    v_max: float
    tol: float

    def __post_init__(self):
        for name in ("F_max", "v_max", "tol"):
            value = getattr(self, name)
            if not (isinstance(value, (int, float)) and math.isfinite(value) and value > 0):
                raise ConfigError(f"gain {name} must be a positive finite number (got {value})")

    @property
    def xi(self) -> float:
        return self.F_max / self.v_max

    def to_dict(self) -> Dict[str, Any]:
        return {'F_max': self.F_max, 'v_max': self.v_max, 'tol': self.tol, 'xi': self.xi}


def sliding_surface(err: float, err_rate: float, xi: float) -> float:
    """s = xi*err + err_rate, with err = position - target."""
    return xi * err + err_rate


def saturate(u: float) -> float:
    """Clamp to [-1, 1]; identity inside, boundary included."""
    if u > 1.0:
        return 1.0
    if u < -1.0:
        return -1.0
    return u


class AxisController:
    """
    Per-axis controller state: target, SMA buffer and last outputs.

    Usage:
        ctrl = AxisController(AxisGains(1.25, 0.15, 0.1), sma_window_s=1.0)
        ctrl.set_target(2.0)
        force = ctrl.compute_tau(pos, vel)
    """

    def __init__(
        self,
        gains: AxisGains,
        sma_window_s: float = 0.0,
        control_rate_hz: float = CONTROL_RATE_HZ,
        damping: bool = True,
        target: float = 0.0,
        name: str = "",
    ):
        if sma_window_s < 0 or not math.isfinite(sma_window_s):
            raise ConfigError(f"SMA window must be >= 0 s (got {sma_window_s})")
        if control_rate_hz <= 0:
            raise ConfigError(f"control rate must be > 0 Hz (got {control_rate_hz})")
        self.gains = gains
        self._base_gains = gains
        self.sma_window_s = sma_window_s
        self.control_rate_hz = control_rate_hz
        self.damping = damping
        self.name = name
        self.window_samples = int(round(sma_window_s * control_rate_hz))
        self.target = float(target)

        self.sma_buffer: Deque[float] = deque(maxlen=max(self.window_samples, 1))
        self._sum = 0.0
        self._steps = 0

        self.last_s = 0.0
        self.last_tau = 0.0
        self.last_sma = 0.0
        self.last_tau_star = 0.0

    def set_target(self, target: float) -> None:
        if not math.isfinite(target):
            raise SimulationError(f"axis {self.name}: non-finite target {target}")
        self.target = float(target)

    def set_cruise_speed(self, v_max: float) -> None:
        """Replace v_max until the next reset()."""
        self.gains = replace(self.gains, v_max=v_max)

    def reset(self) -> None:
        """Restore the configured gains and clear the SMA buffer; the next call behaves like the first one."""
        self.gains = self._base_gains
        self.sma_buffer.clear()
        self._sum = 0.0
        self._steps = 0
        self.last_s = self.last_tau = self.last_sma = self.last_tau_star = 0.0

    def sma(self) -> float:
        """Mean of the previously applied forces in the buffer (0 when disabled or empty)."""
        if self.window_samples == 0 or not self.sma_buffer:
            return 0.0
        return self._sum / len(self.sma_buffer)

    def _push(self, tau_star: float) -> None:
        if self.window_samples == 0:
            return
        if len(self.sma_buffer) == self.sma_buffer.maxlen:
            self._sum -= self.sma_buffer[0]
        self.sma_buffer.append(tau_star)
        self._sum += tau_star
        self._steps += 1
        if self._steps % SMA_REFRESH_STEPS == 0:
            self._sum = math.fsum(self.sma_buffer)

    def compute_tau(self, pos: float, vel: float) -> float:
        """
        Applied force tau* for the current measurement.

        tau = -F*sat(s/(xi*tol)) - xi*vel; tau* = clamp(tau + SMA, +-F).
        Positive force pushes toward the target when below it.

        Raises:
            SimulationError: non-finite measurement
        """
        if not (math.isfinite(pos) and math.isfinite(vel)):
            raise SimulationError(f"axis {self.name}: non-finite measurement pos={pos} vel={vel}")
        F, xi, tol = self.gains.F_max, self.gains.xi, self.gains.tol
        err = pos - self.target
        s = sliding_surface(err, vel, xi)
        tau = -F * saturate(s / (xi * tol))
        if self.damping:
            tau -= xi * vel
        sma = self.sma()
        tau_star = min(max(tau + sma, -F), F)
        self._push(tau_star)

        self.last_s, self.last_tau, self.last_sma, self.last_tau_star = s, tau, sma, tau_star
        return tau_star

    @property
    def saturated(self) -> bool:
        """Last surface value was outside the boundary layer."""
        return abs(self.last_s) >= self.gains.xi * self.gains.tol

    def snapshot(self) -> Dict[str, Any]:
        return {
            'axis': self.name,
            'target': self.target,
            's': self.last_s,
            'tau': self.last_tau,
            'tau_sma': self.last_sma,
            'tau_star': self.last_tau_star,
        }


def build_controllers(
    gains: Dict[str, AxisGains],
    sma_window_s: float = 0.0,
    damping: bool = True,
    control_rate_hz: float = CONTROL_RATE_HZ,
    windows: Optional[Dict[str, float]] = None,
) -> Dict[str, AxisController]:
    """One controller per configured axis; windows overrides the SMA window per axis."""
    windows = windows or {}
    return {
        axis: AxisController(
            g,
            sma_window_s=windows.get(axis, sma_window_s),
            control_rate_hz=control_rate_hz,
            damping=damping,
            name=axis,
        )
        for axis, g in gains.items()
    }

"""
Request Validators - FoldShip service

Validates JSON request bodies for the design, sweep, energy and
simulation endpoints. Every validator returns:
    {'valid': bool, 'errors': [...], 'warnings': [...], 'sanitized_data': {...}}
"""

import math
from dataclasses import fields
from typing import Dict, Any, List, Optional

from core.config import get_config
from core.energy_planner import FORWARD_MODES
from core.mass_model import DesignInputs

config = get_config()

DESIGN_INPUT_KEYS = {f.name for f in fields(DesignInputs)}

MAX_SIM_DURATION_S = 600.0
MAX_SMA_WINDOW_S = 30.0
MAX_ENERGY_POINTS = 10000


def _result(errors: List[str], warnings: List[str], sanitized: Dict[str, Any]) -> Dict[str, Any]:
    return {
        'valid': not errors,
        'errors': errors,
        'warnings': warnings,
        'sanitized_data': sanitized if not errors else {},
    }


def _not_object() -> Dict[str, Any]:
    return {
        'valid': False,
        'errors': ['Invalid payload: expected JSON object'],
        'warnings': [],
        'sanitized_data': {},
    }


def _is_number(value: Any) -> bool:
    return isinstance(value, (int, float)) and not isinstance(value, bool) and math.isfinite(value)


def _is_int(value: Any) -> bool:
    return _is_number(value) and int(value) == value


def _design_overrides(data: Dict[str, Any], errors: List[str]) -> Dict[str, Any]:
    overrides = data.get('design_inputs', {})
    if not isinstance(overrides, dict):
        errors.append('design_inputs must be an object')
        return {}
    unknown = sorted(set(overrides) - DESIGN_INPUT_KEYS)
    if unknown:
        errors.append(f"unknown design_inputs key(s): {', '.join(unknown)}")
    for key, value in overrides.items():
        if key in DESIGN_INPUT_KEYS and not _is_number(value):
            errors.append(f'design_inputs.{key} must be a number')
    return dict(overrides)


# =================== DESIGN ===================

def validate_design_request(data: Any) -> Dict[str, Any]:
    """Body: {"n": 7, "m": 4, "lambda": 0.9, "design_inputs": {...optional overrides}}"""
    if not isinstance(data, dict):
        return _not_object()
    errors: List[str] = []
    warnings: List[str] = []
    sanitized: Dict[str, Any] = {}

    n, m, lam = data.get('n'), data.get('m'), data.get('lambda')
    if not _is_int(n) or n < 3:
        errors.append('n is required and must be an integer >= 3')
    else:
        sanitized['n'] = int(n)
    if not _is_int(m) or m < 1:
        errors.append('m is required and must be an integer >= 1')
    else:
        sanitized['m'] = int(m)
    if not _is_number(lam) or not 0.5 < lam <= 1.0:
        errors.append('lambda is required and must be in (0.5, 1]')
    else:
        sanitized['lam'] = float(lam)
        if lam > 0.9:
            warnings.append('lambda above 0.9 leaves very little twist')

    sanitized['design_inputs'] = _design_overrides(data, errors)
    return _result(errors, warnings, sanitized)


# =================== SWEEP ===================

def validate_sweep_request(data: Any, max_points: Optional[int] = None) -> Dict[str, Any]:
    """Body: optional n_range, m_range, lambda_min, lambda_max, lambda_step, design_inputs."""
    if not isinstance(data, dict):
        return _not_object()
    max_points = max_points or config.max_sweep_points_per_request
    errors: List[str] = []
    warnings: List[str] = []
    sanitized: Dict[str, Any] = {}

    for key in ('n_range', 'm_range'):
        if key in data:
            value = data[key]
            if (not isinstance(value, list) or len(value) != 2
                    or not all(_is_int(v) for v in value) or value[0] > value[1]):
                errors.append(f'{key} must be [lo, hi] integers with lo <= hi')
            else:
                sanitized[key] = (int(value[0]), int(value[1]))
    for key in ('lambda_min', 'lambda_max', 'lambda_step'):
        if key in data:
            if not _is_number(data[key]) or data[key] <= 0:
                errors.append(f'{key} must be a positive number')
            else:
                sanitized[key] = float(data[key])

    sanitized['design_inputs'] = _design_overrides(data, errors)

    if not errors:
        n_lo, n_hi = sanitized.get('n_range', (3, 10))
        m_lo, m_hi = sanitized.get('m_range', (2, 10))
        l_min = sanitized.get('lambda_min', 0.51)
        l_max = sanitized.get('lambda_max', 0.90)
        step = sanitized.get('lambda_step', 0.01)
        if l_min <= 0.5 or l_max > 1.0 or l_min > l_max:
            errors.append('lambda grid must satisfy 0.5 < lambda_min <= lambda_max <= 1')
        else:
            points = (n_hi - n_lo + 1) * (m_hi - m_lo + 1) * (int(round((l_max - l_min) / step)) + 1)
            if points > max_points:
                errors.append(f'grid has {points} points, limit is {max_points}')
            elif points > max_points // 2:
                warnings.append(f'large grid: {points} points')
    return _result(errors, warnings, sanitized)


# =================== ENERGY ===================

def validate_energy_request(data: Any) -> Dict[str, Any]:
    """Body: v_min, v_max, v_step (m/s), optional forward_mode and battery_Wh."""
    if not isinstance(data, dict):
        return _not_object()
    errors: List[str] = []
    warnings: List[str] = []
    sanitized: Dict[str, Any] = {
        'v_min': data.get('v_min', 0.02),
        'v_max': data.get('v_max', 2.0),
        'v_step': data.get('v_step', 0.01),
    }
    for key in ('v_min', 'v_max', 'v_step'):
        if not _is_number(sanitized[key]) or sanitized[key] <= 0:
            errors.append(f'{key} must be a positive number')
    if not errors:
        if sanitized['v_max'] < sanitized['v_min']:
            errors.append('v_max must be >= v_min')
        elif (sanitized['v_max'] - sanitized['v_min']) / sanitized['v_step'] + 1 > MAX_ENERGY_POINTS:
            errors.append(f'speed grid exceeds {MAX_ENERGY_POINTS} points')

    mode = data.get('forward_mode')
    if mode is not None:
        if mode not in FORWARD_MODES:
            errors.append(f"forward_mode must be one of: {', '.join(FORWARD_MODES)}")
        else:
            sanitized['forward_mode'] = mode
    if 'battery_Wh' in data:
        if not _is_number(data['battery_Wh']) or data['battery_Wh'] < 0:
            errors.append('battery_Wh must be a number >= 0')
        else:
            sanitized['battery_Wh'] = float(data['battery_Wh'])
            if data['battery_Wh'] == 0:
                warnings.append('battery_Wh is 0: nothing can be feasible')
    return _result(errors, warnings, sanitized)


# =================== SIMULATION ===================

def validate_simulation_request(data: Any) -> Dict[str, Any]:
    """Body: optional sma_window_s, duration_s, damping, include_trajectory."""
    if not isinstance(data, dict):
        return _not_object()
    errors: List[str] = []
    warnings: List[str] = []
    sanitized: Dict[str, Any] = {}

    if 'sma_window_s' in data:
        w = data['sma_window_s']
        if not _is_number(w) or w < 0 or w > MAX_SMA_WINDOW_S:
            errors.append(f'sma_window_s must be between 0 and {MAX_SMA_WINDOW_S}')
        else:
            sanitized['sma_window_s'] = float(w)
    if 'duration_s' in data:
        d = data['duration_s']
        if not _is_number(d) or d <= 0 or d > MAX_SIM_DURATION_S:
            errors.append(f'duration_s must be in (0, {MAX_SIM_DURATION_S}]')
        else:
            sanitized['duration_s'] = float(d)
    for key in ('damping', 'include_trajectory'):
        if key in data:
            if not isinstance(data[key], bool):
                errors.append(f'{key} must be true or false')
            else:
                sanitized[key] = data[key]
    if sanitized.get('include_trajectory'):
        warnings.append('trajectory included: response holds one row per control tick')
    return _result(errors, warnings, sanitized)

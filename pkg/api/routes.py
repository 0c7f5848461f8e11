"""
API Routes - FoldShip service

REST surface over the core toolkit:
- design evaluation and bill of materials
- design-space sweep
- mission energy curve
- flight simulation

Every request starts from the project config loaded at startup
(current_app.project); request bodies only carry overrides.
"""

import copy
import time
from functools import wraps

from flask import Blueprint, request, current_app

from api.response_formatter import (
    success_response,
    error_response,
    exception_response,
    validation_error_response,
)
from api.validators import (
    validate_design_request,
    validate_sweep_request,
    validate_energy_request,
    validate_simulation_request,
)
from api import report_writer as rw
from core import get_module_info
from core.config import get_config
from core.exceptions import FoldShipError, SimulationError
from core.design_sweep import SweepGrid, run_sweep
from core.energy_planner import energy_curve, minimum_feasible_speed, optimal_speed
from core.flight_sim import Scenario, run_scenario, summarize
from core.mass_model import DesignInputs, bom_rows, evaluate_design, mass_fractions

config = get_config()
api_bp = Blueprint('api', __name__)


# =================== ERROR HANDLING DECORATOR ===================

def handle_route_errors(func):
    """Map toolkit errors to 400/422 and anything unexpected to 500."""
    @wraps(func)
    def wrapper(*args, **kwargs):
        try:
            return func(*args, **kwargs)
        except SimulationError as e:
            current_app.logger.warning(f"⚠️  Numeric failure in {func.__name__}: {e}")
            return exception_response(e)
        except (FoldShipError, ValueError) as e:
            current_app.logger.info(f"Rejected input in {func.__name__}: {e}")
            return exception_response(e)
        except Exception as e:
            current_app.logger.exception(f"Route error in {func.__name__}: {e}")
            return exception_response(e)
    return wrapper


def _design_inputs(overrides) -> DesignInputs:
    base = current_app.project.design_inputs.to_dict()
    base.update(overrides)
    return DesignInputs(**base)


def _reply(data, validation):
    return success_response(data, provenance=current_app.project.provenance(), warnings=validation['warnings'])


# =================== DESIGNS ===================

@api_bp.route('/designs/evaluate', methods=['POST'])
@handle_route_errors
def evaluate_design_route():
    """Evaluate one (n, m, lambda) design: mass rollup, lift, payload, bounds and BOM."""
    validation = validate_design_request(request.get_json(silent=True))
    if not validation['valid']:
        return validation_error_response(validation)
    data = validation['sanitized_data']

    inputs = _design_inputs(data['design_inputs'])
    evaluation = evaluate_design(inputs, data['n'], data['m'], data['lam'])
    result = evaluation.to_dict()
    result['mass_fractions'] = mass_fractions(evaluation.mass)
    result['bom'] = rw.bom_table(bom_rows(inputs, evaluation))

    current_app.logger.info(
        f"📐 Evaluated n={data['n']} m={data['m']} lambda={data['lam']:.2f}: "
        f"payload {evaluation.extra_payload_g:.2f} g, feasible={evaluation.feasible}"
    )
    return _reply(result, validation)


@api_bp.route('/designs/sweep', methods=['POST'])
@handle_route_errors
def sweep_route():
    """Run a design-space sweep; the full table is returned only when include_rows is true."""
    body = request.get_json(silent=True)
    include_rows = isinstance(body, dict) and body.pop('include_rows', False) is True
    validation = validate_sweep_request(body)
    if not validation['valid']:
        return validation_error_response(validation)
    data = validation['sanitized_data']

    base = current_app.project.sweep_grid
    grid = SweepGrid(
        n_range=data.get('n_range', base.n_range),
        m_range=data.get('m_range', base.m_range),
        lambda_min=data.get('lambda_min', base.lambda_min),
        lambda_max=data.get('lambda_max', base.lambda_max),
        lambda_step=data.get('lambda_step', base.lambda_step),
    )
    if grid.size() > config.max_sweep_points_per_request:
        return error_response(
            f"grid has {grid.size()} points, limit is {config.max_sweep_points_per_request}",
            400, code='GRID_TOO_LARGE'
        )

    started = time.perf_counter()
    result = run_sweep(_design_inputs(data['design_inputs']), grid, workers=config.sweep_workers)
    summary = result.summary()
    summary['elapsed_s'] = round(time.perf_counter() - started, 3)
    if include_rows:
        summary['rows'] = rw.sweep_rows(result)

    current_app.logger.info(
        f"🔍 Sweep of {summary['evaluated']} points: {summary['feasible_count']} feasible"
    )
    return _reply(summary, validation)


# =================== ENERGY ===================

@api_bp.route('/energy/curve', methods=['POST'])
@handle_route_errors
def energy_curve_route():
    """Mission energy over a speed grid, battery crossings and minimum feasible speed."""
    validation = validate_energy_request(request.get_json(silent=True))
    if not validation['valid']:
        return validation_error_response(validation)
    data = validation['sanitized_data']

    model = copy.deepcopy(current_app.project.power_model)
    if 'forward_mode' in data:
        model.forward_mode = data['forward_mode']
    if 'battery_Wh' in data:
        model.battery_Wh = data['battery_Wh']

    count = int(round((data['v_max'] - data['v_min']) / data['v_step'])) + 1
    grid = [round(data['v_min'] + i * data['v_step'], 10) for i in range(count)]
    curve = energy_curve(grid, model)
    best = minimum_feasible_speed(model)

    return _reply({
        'power_model': model.to_dict(),
        'curve': curve.to_rows(),
        'crossings_m_s': curve.crossings,
        'optimal_speed_m_s': optimal_speed(model),
        'minimum_feasible': best.to_dict() if best else None,
    }, validation)


# =================== SIMULATIONS ===================

@api_bp.route('/simulations', methods=['POST'])
@handle_route_errors
def simulation_route():
    """Run the project scenario (optionally shortened) and return its summary."""
    validation = validate_simulation_request(request.get_json(silent=True))
    if not validation['valid']:
        return validation_error_response(validation)
    data = validation['sanitized_data']
    project = current_app.project

    scenario = project.scenario
    if 'duration_s' in data:
        scenario = Scenario(
            duration_s=data['duration_s'],
            waypoints=[wp for wp in scenario.waypoints if wp.t <= data['duration_s']],
            initial_position=dict(scenario.initial_position),
        )
    window = data.get('sma_window_s', project.sma_window_s)
    controllers = project.build_controllers(sma_window_s=window)
    if 'damping' in data:
        for ctrl in controllers.values():
            ctrl.damping = data['damping']

    log = run_scenario(scenario, project.plant, controllers, project.power_model,
                       dt=project.physics_dt, control_rate_hz=project.control_rate_hz)
    summary = summarize(log, scenario)
    summary['sma_window_s'] = window
    if data.get('include_trajectory'):
        summary['trajectory'] = log.trajectory_rows()

    current_app.logger.info(
        f"🛩️  Simulated {scenario.duration_s:g} s with SMA window {window:g} s: "
        f"{summary['total_energy_Wh']:.3f} Wh"
    )
    return _reply(summary, validation)


# =================== SYSTEM INFORMATION ===================

@api_bp.route('/health', methods=['GET'])
def health_check():
    """Fast health check."""
    project = getattr(current_app, 'project', None)
    info = get_module_info()
    return success_response({
        'api_status': 'healthy',
        'version': info['version'],
        'project_config': project.source if project else None,
        'config_hash': project.config_hash if project else None,
        'sweep_workers': config.sweep_workers,
        'components': sorted(info['components']),
    })

"""
FoldShip - command-line entry point

Commands:
    eval      evaluate one (n, m, lambda) design
    sweep     exhaustive design-space sweep
    pattern   crease pattern SVG, mesh OBJ and fold curve
    bom       bill of materials CSV and tube cut plan
    energy    mission energy curve and minimum feasible speed
    simulate  hover-then-cruise flight simulation
    plot      figures from the artifacts already in the output directory

Exit codes: 0 success, 1 usage/config error, 2 infeasible design when
--require-feasible is set, 3 numeric failure.

Usage:
    python foldship_cli.py eval --n 7 --m 4 --lambda 0.9
    python foldship_cli.py sweep --config config/project.json --workers 4
"""

import os
import sys
import math
import argparse
import logging
from logging.handlers import RotatingFileHandler
from typing import List, Optional

from dotenv import load_dotenv

from core.config import Config, get_config
from core.exceptions import FoldShipError, SimulationError
from core.design_sweep import SweepGrid, feasibility_map, run_sweep
from core.energy_planner import energy_curve, minimum_feasible_speed, optimal_speed
from core.flight_sim import run_scenario, summarize
from core.kresling_geometry import (
    KreslingParams,
    build_mesh,
    derive_segment,
    enclosed_volume,
    fold_curve,
    write_obj,
)
from core.mass_model import bom_rows, cut_plan, edge_inventory, evaluate_design, expand_edges, mass_fractions
from core.pattern_export import export_svg, unfold
from api.project_config import ProjectConfig, load_project_config
from api import plots
from api import report_writer as rw

logger = logging.getLogger("foldship")

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_INFEASIBLE = 2
EXIT_NUMERIC = 3

# Editable design parameters with units, shown by --help
PARAMETER_TABLE = [
    ("n", "-", "polygon side count (optimized)"),
    ("m", "-", "segment count (optimized)"),
    ("lam", "-", "angle ratio lambda (optimized)"),
    ("D", "mm", "cave passage diameter"),
    ("H0", "mm", "folded height bound"),
    ("H1", "mm", "deployed height bound"),
    ("rho_air", "kg/m3", "air density"),
    ("rho_He", "kg/m3", "helium density"),
    ("m_CT", "g/m", "carbon tube linear mass"),
    ("m_mecatrn", "g", "mechatronics board and wires"),
    ("m_motors", "g", "mass of one motor"),
    ("m_propellers", "g", "mass of one propeller"),
    ("N_motors", "-", "motor count"),
    ("m_battery", "g", "mass of one battery"),
    ("N_battery", "-", "battery count"),
    ("m_simpleTPUjct", "g", "simple TPU junction"),
    ("m_latticeeTPUjct", "g", "TPU junction with micro-lattice"),
    ("N_patchs", "-", "micro-lattice junction count"),
    ("d_env", "g/m2", "envelope areal density"),
    ("d_glue", "g/m2", "glue areal density"),
    ("t_ovlp", "mm", "seal overlap width"),
    ("N_seal", "-", "seal count"),
    ("t_sheath", "mm", "sheath width"),
    ("r_pct", "%", "sheathed share of ring and side tubes"),
    ("m_valve", "g", "mass of one valve"),
    ("N_valve", "-", "valve count"),
    ("N_exo", "-", "extra exoskeleton count (must be 0)"),
    ("N_CVNT", "-", "airship body count (must be 1)"),
    ("m_kevlar", "g/m", "Kevlar wire linear mass"),
    ("Dist_CVNT", "mm", "distance between bodies (unused)"),
    ("L_tubes", "mm", "raw tube stock length"),
    ("kevlar_length_m", "m", "Kevlar wire length"),
    ("mass_correction_g", "g", "mass removed from the rollup"),
]


# =================== LOGGING ===================

def configure_logging(config: Config) -> None:
    """Console handler plus an optional rotating file, formatted from Config."""
    root = logging.getLogger()
    root.handlers.clear()
    root.setLevel(config.log_level)
    formatter = logging.Formatter(config.log_format, datefmt=config.log_date_format)

    console = logging.StreamHandler(sys.stderr)
    console.setFormatter(formatter)
    root.addHandler(console)

    if config.log_to_file:
        log_dir = os.path.dirname(config.log_file_path)
        if log_dir:
            os.makedirs(log_dir, exist_ok=True)
        file_handler = RotatingFileHandler(
            config.log_file_path,
            maxBytes=config.log_rotation_size_mb * 1024 * 1024,
            backupCount=config.log_backup_count,
            encoding='utf-8',
        )
        file_handler.setFormatter(formatter)
        root.addHandler(file_handler)


# =================== PARSER ===================

class _Parser(argparse.ArgumentParser):
    """Usage errors exit with 1 like every other config error."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _parameter_epilog() -> str:
    lines = ["design parameters (project file section 'design_inputs'):"]
    lines += [f"  {name:<18} [{unit:>5}]  {desc}" for name, unit, desc in PARAMETER_TABLE]
    return "\n".join(lines)


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(
        prog="foldship",
        description="Kresling-origami airship design-to-mission toolkit.",
        epilog=_parameter_epilog(),
        formatter_class=argparse.RawDescriptionHelpFormatter,
    )
    parser.add_argument("--config", default=None, help="project JSON file (default: $FOLDSHIP_PROJECT if it exists)")
    parser.add_argument("--out", default=None, help="output directory (default: project output_dir)")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def design_args(p):
        p.add_argument("--n", type=int, default=None, help="polygon side count")
        p.add_argument("--m", type=int, default=None, help="segment count")
        p.add_argument("--lambda", dest="lam", type=float, default=None, help="angle ratio")

    p_eval = sub.add_parser("eval", help="evaluate one design", epilog=_parameter_epilog(),
                            formatter_class=argparse.RawDescriptionHelpFormatter)
    design_args(p_eval)
    p_eval.add_argument("--require-feasible", action="store_true", help="exit 2 when the design does not float")

    p_sweep = sub.add_parser("sweep", help="sweep the (n, m, lambda) grid")
    p_sweep.add_argument("--workers", type=int, default=None, help="worker processes (default: FOLDSHIP_WORKERS)")
    p_sweep.add_argument("--n-range", type=int, nargs=2, metavar=("LO", "HI"))
    p_sweep.add_argument("--m-range", type=int, nargs=2, metavar=("LO", "HI"))
    p_sweep.add_argument("--lambda-range", type=float, nargs=2, metavar=("LO", "HI"))
    p_sweep.add_argument("--lambda-step", type=float)

    p_pattern = sub.add_parser("pattern", help="crease pattern, mesh and fold curve")
    design_args(p_pattern)
    p_pattern.add_argument("--alpha", type=float, default=None, help="fold angle in degrees (default: deployed)")
    p_pattern.add_argument("--curve", action="store_true", help="also write the fold curve CSV")

    p_bom = sub.add_parser("bom", help="bill of materials and cut plan")
    design_args(p_bom)
    p_bom.add_argument("--kerf", type=float, default=0.0, help="saw kerf per cut, mm")

    p_energy = sub.add_parser("energy", help="mission energy curve")
    p_energy.add_argument("--v-min", type=float, default=0.02)
    p_energy.add_argument("--v-max", type=float, default=2.0)
    p_energy.add_argument("--v-step", type=float, default=0.01)
    p_energy.add_argument("--mode", choices=("combined", "split"), default=None)
    p_energy.add_argument("--battery", type=float, default=None, help="battery capacity override, Wh")

    p_sim = sub.add_parser("simulate", help="flight simulation of the project scenario")
    p_sim.add_argument("--sma-window", type=float, default=None, help="moving-average window, s (0 disables)")

    p_plot = sub.add_parser("plot", help="render figures from existing artifacts")
    p_plot.add_argument("--format", dest="fmt", choices=plots.FORMATS, default="png")
    return parser


# =================== COMMANDS ===================

def _design(project: ProjectConfig, args):
    inputs = project.design_inputs
    n = args.n if args.n is not None else inputs.n
    m = args.m if args.m is not None else inputs.m
    lam = args.lam if args.lam is not None else inputs.lam
    return n, m, lam


def cmd_eval(project: ProjectConfig, args, out_dir: str) -> int:
    n, m, lam = _design(project, args)
    evaluation = evaluate_design(project.design_inputs, n, m, lam)
    report = evaluation.to_dict()
    report['mass_fractions'] = mass_fractions(evaluation.mass)
    path = os.path.join(out_dir, f"eval_n{n}_m{m}_l{lam:.2f}.json")
    rw.write_json(path, report, project.provenance())

    mark = "✅" if evaluation.feasible else "❌"
    print(f"{mark} design n={n} m={m} lambda={lam:.2f}")
    print(f"   volume {evaluation.volume_deployed:.4f} m3, lift {evaluation.lift_g:.1f} g, "
          f"mass {evaluation.mass.total_g:.1f} g, extra payload {evaluation.extra_payload_g:.1f} g")
    print(f"   deployed height {evaluation.deployed_height:.1f} mm (fits: {evaluation.fits_height}), "
          f"folded fits: {evaluation.fits_folded}")
    if args.require_feasible and not evaluation.feasible:
        logger.warning(f"⚠️  design n={n} m={m} lambda={lam:.2f} is infeasible")
        return EXIT_INFEASIBLE
    return EXIT_OK


def cmd_sweep(project: ProjectConfig, args, out_dir: str, config: Config) -> int:
    grid = project.sweep_grid
    if args.n_range or args.m_range or args.lambda_range or args.lambda_step:
        grid = SweepGrid(
            n_range=tuple(args.n_range or grid.n_range),
            m_range=tuple(args.m_range or grid.m_range),
            lambda_min=(args.lambda_range or (grid.lambda_min, grid.lambda_max))[0],
            lambda_max=(args.lambda_range or (grid.lambda_min, grid.lambda_max))[1],
            lambda_step=args.lambda_step or grid.lambda_step,
        )
    workers = args.workers if args.workers is not None else config.sweep_workers
    workers = max(1, min(workers, config.max_sweep_workers))
    result = run_sweep(project.design_inputs, grid, workers=workers)

    rw.write_csv(os.path.join(out_dir, "sweep.csv"), rw.sweep_rows(result), rw.SWEEP_COLUMNS,
                 project.provenance())
    rw.write_csv(os.path.join(out_dir, "feasibility_map.csv"), feasibility_map(result),
                 ['n', 'm', 'lambda', 'feasible', 'extra_payload_g'], project.provenance())
    summary = result.summary()
    rw.write_json(os.path.join(out_dir, "sweep_summary.json"), summary, project.provenance())

    print(f"🔍 {summary['evaluated']} configurations, {summary['feasible_count']} feasible")
    if result.best_pair:
        lo, hi = result.best_lambda_band
        print(f"   best pair n={result.best_pair[0]} m={result.best_pair[1]}, lambda band [{lo:.2f}, {hi:.2f}]")
    else:
        print("   no feasible design")
    return EXIT_OK


def cmd_pattern(project: ProjectConfig, args, out_dir: str) -> int:
    n, m, lam = _design(project, args)
    inputs = project.design_inputs
    params = KreslingParams.from_envelope(n, m, lam, inputs.D, inputs.H0)
    geom = derive_segment(params, require_bistable=False)
    alpha = geom.alpha_deployed if args.alpha is None else math.radians(args.alpha)

    tag = f"n{n}_m{m}_l{lam:.2f}"
    pattern = unfold(params, inputs)
    export_svg(pattern, os.path.join(out_dir, f"pattern_{tag}.svg"))
    mesh = build_mesh(params, alpha)
    write_obj(mesh, os.path.join(out_dir, f"mesh_{tag}.obj"),
              header_lines=[project.provenance(), f"alpha_deg {math.degrees(alpha):.6f}"])

    volume = enclosed_volume(mesh)
    print(f"📐 pattern {tag}: {len(pattern.panels)} panels, {len(pattern.creases)} creases, "
          f"row width {pattern.row_width:.1f} mm")
    print(f"   mesh at alpha={math.degrees(alpha):.2f} deg: volume {volume:.4f} m3")
    if params.bistable:
        deployed = enclosed_volume(build_mesh(params, geom.alpha_deployed))
        folded = enclosed_volume(build_mesh(params, geom.alpha_folded))
        if folded > 0:
            print(f"   deployed {deployed:.4f} m3 / folded {folded:.4f} m3 = {deployed / folded:.2f}")

    if args.curve:
        rows = [
            {
                'alpha_deg': math.degrees(s.alpha), 'h_mm': s.h, 'b_mm': s.b,
                'strain': s.strain, 'normalized_energy': s.normalized_energy,
            }
            for s in fold_curve(params)
        ]
        rw.write_csv(os.path.join(out_dir, f"fold_curve_{tag}.csv"), rows,
                     ['alpha_deg', 'h_mm', 'b_mm', 'strain', 'normalized_energy'], project.provenance())
    return EXIT_OK


def cmd_bom(project: ProjectConfig, args, out_dir: str) -> int:
    n, m, lam = _design(project, args)
    inputs = project.design_inputs
    evaluation = evaluate_design(inputs, n, m, lam)
    geom = derive_segment(evaluation.params)
    plan = cut_plan(expand_edges(edge_inventory(geom, n, m)), inputs.L_tubes, kerf_mm=args.kerf)

    tag = f"n{n}_m{m}_l{lam:.2f}"
    rw.write_csv(os.path.join(out_dir, f"bom_{tag}.csv"), rw.bom_table(bom_rows(inputs, evaluation)),
                 ['component', 'quantity', 'unit', 'unit_mass_g', 'subtotal_g'], project.provenance())
    rw.write_text(os.path.join(out_dir, f"cut_plan_{tag}.txt"), rw.cut_plan_lines(plan), project.provenance())
    print(f"🧾 tube length {evaluation.L_CVNT / 1000.0:.2f} m in {plan.bar_count} bars of "
          f"{inputs.L_tubes:.0f} mm, total mass {evaluation.mass.total_g:.1f} g")
    return EXIT_OK


def cmd_energy(project: ProjectConfig, args, out_dir: str) -> int:
    model = project.power_model
    if args.mode:
        model.forward_mode = args.mode
    if args.battery is not None:
        model.battery_Wh = args.battery
    if args.v_min <= 0 or args.v_max < args.v_min or args.v_step <= 0:
        raise FoldShipError("speed grid needs 0 < v-min <= v-max and v-step > 0")
    count = int(round((args.v_max - args.v_min) / args.v_step)) + 1
    grid = [round(args.v_min + i * args.v_step, 10) for i in range(count)]
    curve = energy_curve(grid, model)
    best = minimum_feasible_speed(model)

    rw.write_csv(os.path.join(out_dir, "energy_curve.csv"), curve.to_rows(),
                 ['v_m_s', 'energy_Wh', 'duration_min', 'feasible'], project.provenance())
    summary = {
        'forward_mode': model.forward_mode,
        'battery_Wh': model.battery_Wh,
        'crossings_m_s': curve.crossings,
        'optimal_speed_m_s': optimal_speed(model),
        'minimum_feasible': best.to_dict() if best else None,
    }
    rw.write_json(os.path.join(out_dir, "energy_summary.json"), summary, project.provenance())
    if best:
        print(f"🔋 minimum feasible speed {best.v_cruise:.4f} m/s, {best.duration_min:.1f} min, "
              f"{best.total_Wh:.2f} Wh ({model.forward_mode})")
    else:
        print("🔋 no feasible cruise speed for this battery")
    return EXIT_OK


def cmd_simulate(project: ProjectConfig, args, out_dir: str) -> int:
    window = project.sma_window_s if args.sma_window is None else args.sma_window
    controllers = project.build_controllers(sma_window_s=window)
    log = run_scenario(project.scenario, project.plant, controllers, project.power_model,
                       dt=project.physics_dt, control_rate_hz=project.control_rate_hz)
    summary = summarize(log, project.scenario)
    summary['sma_window_s'] = window

    tag = f"sma{window:g}"
    rw.write_csv(os.path.join(out_dir, f"trajectory_{tag}.csv"), log.trajectory_rows(),
                 ['t', 'x', 'y', 'z', 'psi', 'vx', 'vy', 'vz', 'vpsi', 'tau_x', 'tau_z', 'energy_J'],
                 project.provenance())
    rw.write_csv(os.path.join(out_dir, f"forces_{tag}.csv"), log.force_rows(),
                 ['t', 'axis', 's', 'tau', 'tau_sma', 'tau_star'], project.provenance())
    rw.write_json(os.path.join(out_dir, f"sim_summary_{tag}.json"), summary, project.provenance())

    for axis, info in summary['axes'].items():
        cruise = info['cruise_velocity']
        print(f"🛩️  {axis}: final {info['final_position']:.4f} (target {info['target']}), "
              f"error {info['steady_state_error']:.4f}, cruise {cruise if cruise is None else round(cruise, 4)}")
    print(f"   energy {summary['total_energy_Wh']:.3f} Wh")
    return EXIT_OK


def cmd_plot(project: ProjectConfig, args, out_dir: str) -> int:
    written = plots.render_all(out_dir, args.fmt)
    if not written:
        raise FoldShipError(f"nothing to plot in {out_dir}; run sweep, energy, simulate or pattern --curve first")
    for path in written:
        print(f"📈 {path}")
    return EXIT_OK


# =================== MAIN ===================

def main(argv: Optional[List[str]] = None) -> int:
    load_dotenv()
    config = get_config()
    configure_logging(config)
    args = build_parser().parse_args(argv)

    try:
        path = args.config
        if path is None and os.path.exists(config.project_config_path):
            path = config.project_config_path
        project = load_project_config(path)
        out_dir = rw.ensure_dir(args.out or project.output_dir)

        if args.command == "eval":
            return cmd_eval(project, args, out_dir)
        if args.command == "sweep":
            return cmd_sweep(project, args, out_dir, config)
        if args.command == "pattern":
            return cmd_pattern(project, args, out_dir)
        if args.command == "bom":
            return cmd_bom(project, args, out_dir)
        if args.command == "energy":
            return cmd_energy(project, args, out_dir)
        if args.command == "simulate":
            return cmd_simulate(project, args, out_dir)
        if args.command == "plot":
            return cmd_plot(project, args, out_dir)
    except (SimulationError, ArithmeticError) as e:
        logger.error(f"❌ numeric failure: {e}")
        return EXIT_NUMERIC
    except (FoldShipError, ValueError, OSError) as e:
        logger.error(f"❌ {e}")
        return EXIT_USAGE
    return EXIT_USAGE


if __name__ == '__main__':
    sys.exit(main())

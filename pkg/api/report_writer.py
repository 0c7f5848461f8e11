"""
Report Writer - CSV, JSON and plain-text artifacts with a provenance header

Every file starts with (or carries) the tool version and config hash so an
artifact can be traced back to the project file that produced it.
"""

import os
import csv
import json
import logging
from typing import Dict, Any, Iterable, List, Optional, Sequence

from core.exceptions import ExportError
from core.design_sweep import SweepResult
from core.mass_model import BomRow, CutPlan, DesignEvaluation

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = [
    'n', 'm', 'lambda', 'R_mm', 'h0_mm', 'L_CVNT_mm', 'S_CVNT_m2', 'volume_deployed_m3', 'lift_g',
    'envelope_g', 'exoskeleton_tubes_g', 'junctions_g', 'mechatronics_g', 'battery_g', 'valves_g',
    'sheath_g', 'seal_overlap_g', 'kevlar_g', 'correction_g', 'total_g', 'extra_payload_g', 'deployed_height_mm',
    'fits_height', 'fits_folded', 'feasible',
]


def ensure_dir(path: str) -> str:
    try:
        os.makedirs(path, exist_ok=True)
    except OSError as e:
        raise ExportError(f"cannot create output directory {path}: {e}") from e
    return path


def write_csv(path: str, rows: Iterable[Dict[str, Any]], columns: Sequence[str],
              provenance: Optional[str] = None) -> str:
    """Write rows as CSV, provenance as a leading '#' comment line."""
    try:
        with open(path, 'w', encoding='utf-8', newline='') as fh:
            if provenance:
                fh.write(f"# {provenance}\n")
            writer = csv.DictWriter(fh, fieldnames=list(columns), lineterminator='\n', extrasaction='raise')
            writer.writeheader()
            for row in rows:
                writer.writerow(row)
    except (OSError, ValueError) as e:
        raise ExportError(f"cannot write CSV to {path}: {e}") from e
    logger.info(f"📄 CSV written: {path}")
    return path


def write_json(path: str, data: Dict[str, Any], provenance: Optional[str] = None) -> str:
    payload = dict(data)
    if provenance:
        payload['_provenance'] = provenance
    try:
        with open(path, 'w', encoding='utf-8', newline='\n') as fh:
            json.dump(payload, fh, indent=2, sort_keys=True)
            fh.write("\n")
    except (OSError, TypeError) as e:
        raise ExportError(f"cannot write JSON to {path}: {e}") from e
    logger.info(f"📄 JSON written: {path}")
    return path


def write_text(path: str, lines: Iterable[str], provenance: Optional[str] = None) -> str:
    try:
        with open(path, 'w', encoding='utf-8', newline='\n') as fh:
            if provenance:
                fh.write(f"# {provenance}\n")
            for line in lines:
                fh.write(line + "\n")
    except OSError as e:
        raise ExportError(f"cannot write text to {path}: {e}") from e
    logger.info(f"📄 Text written: {path}")
    return path


# =================== ROW BUILDERS ===================

def evaluation_row(e: DesignEvaluation) -> Dict[str, Any]:
    row = {
        'n': e.params.n,
        'm': e.params.m,
        'lambda': e.params.lam,
        'R_mm': e.params.R,
        'h0_mm': e.params.h0,
        'L_CVNT_mm': e.L_CVNT,
        'S_CVNT_m2': e.S_CVNT,
        'volume_deployed_m3': e.volume_deployed,
        'lift_g': e.lift_g,
        'extra_payload_g': e.extra_payload_g,
        'deployed_height_mm': e.deployed_height,
        'fits_height': e.fits_height,
        'fits_folded': e.fits_folded,
        'feasible': e.feasible,
        'total_g': e.mass.total_g,
    }
    row.update(e.mass.components())
    return row


def sweep_rows(result: SweepResult) -> List[Dict[str, Any]]:
    return [evaluation_row(e) for e in result.evaluations]


def bom_table(rows: Sequence[BomRow]) -> List[Dict[str, Any]]:
    return [
        {
            'component': r.component,
            'quantity': round(r.quantity, 6),
            'unit': r.unit,
            'unit_mass_g': r.unit_mass_g,
            'subtotal_g': round(r.subtotal_g, 6),
        }
        for r in rows
    ]


def cut_plan_lines(plan: CutPlan) -> List[str]:
    """Human-readable cut plan: one line per bar, cuts longest first."""
    lines = [
        f"stock length: {plan.stock_mm:.1f} mm",
        f"bars: {plan.bar_count}",
        f"total waste: {plan.total_waste_mm:.1f} mm",
        "",
    ]
    for bar in plan.bars:
        cuts = ", ".join(f"{cls} {length:.1f}" for cls, length in bar.cuts)
        lines.append(f"bar {bar.index + 1:3d}: {cuts} | waste {bar.waste_mm:.1f} mm")
    return lines

"""
Mass Model - bill of materials, mass rollup and aerostatic lift

Handles:
- Tube length and envelope surface of one Kresling airship
- Component mass rollup (envelope, sheaths, seals, tubes, junctions,
  mechatronics, battery, valves, optional Kevlar wire)
- Buoyant lift, extra payload and cave-envelope feasibility flags
- Tube edge inventory, first-fit-decreasing cut plan and BOM rows

Units: lengths mm, surfaces m^2, masses g, densities kg/m^3.

Version: 1.0.0
"""

import math
import logging
from dataclasses import dataclass, field, asdict, fields
from typing import Dict, Any, List, Sequence, Tuple

from core.exceptions import ConfigError, CutPlanError, GeometryError, UnsupportedFeatureError
from core.kresling_geometry import (
    KreslingParams,
    KreslingSegmentGeometry,
    build_mesh,
    derive_segment,
    enclosed_volume,
    fold_state,
)

logger = logging.getLogger(__name__)

# Tolerance on cave-bound comparisons (mm), absorbs float round-off only
BOUND_TOL_MM = 1e-6


# =================== DESIGN INPUTS ===================

@dataclass
class DesignInputs:
    """
    Editable design parameters, defaults set to the reference airship.

    Symbols follow the parameter table: geometry to optimize (n, m, lam),
    cave bounds (D, H0, H1), physics, and manufacturing constants.
    """
    # Geometry to optimize (nominal design)
    n: int = 7
    m: int = 4
    lam: float = 0.9

    # Cave bounds (mm)
    D: float = 720.0
    H0: float = 320.0
    H1: float = 2440.0

    # Physics (kg/m^3)
    rho_air: float = 1.231
    rho_He: float = 0.1692

    # Manufacturing
    m_CT: float = 3.76              # g/m carbon tube
    m_mecatrn: float = 30.0         # g board + wires
    m_motors: float = 9.1           # g each
    m_propellers: float = 0.46      # g each
    N_motors: int = 4
    m_battery: float = 80.0         # g each
    N_battery: int = 1
    m_simpleTPUjct: float = 0.75    # g each
    m_latticeeTPUjct: float = 3.4   # g each
    N_patchs: int = 17
    d_env: float = 70.0             # g/m^2
    d_glue: float = 0.0             # g/m^2
    t_ovlp: float = 10.0            # mm
    N_seal: int = 2
    t_sheath: float = 35.0          # mm
    r_pct: float = 10.0             # %
    m_valve: float = 7.0            # g each
    N_valve: int = 1
    N_exo: int = 0
    N_CVNT: int = 1
    m_kevlar: float = 0.28          # g/m
    Dist_CVNT: float = 0.0          # mm
    L_tubes: float = 1000.0         # mm raw stock

    # Extensions
    kevlar_length_m: float = 0.0
    # g removed from the rollup: mean gap to the reference (7, 4) payload curve
    # over lambda 0.83..0.90. 0 gives the bare formulas.
    mass_correction_g: float = 33.5
    lambda_step: float = 0.01

    def __post_init__(self):
        errors = self.errors()
        if errors:
            raise ConfigError("invalid design inputs: " + "; ".join(errors))

    def errors(self) -> List[str]:
        """Collect every invariant violation instead of stopping at the first."""
        errors: List[str] = []
        counts = ("n", "m", "N_motors", "N_battery", "N_patchs", "N_seal",
                  "N_valve", "N_exo", "N_CVNT")
        for f in fields(self):
            value = getattr(self, f.name)
            if isinstance(value, bool) or not isinstance(value, (int, float)):
                errors.append(f"{f.name} must be numeric")
                continue
            if not math.isfinite(value):
                errors.append(f"{f.name} must be finite")
            elif value < 0:
                errors.append(f"{f.name} must be >= 0 (got {value})")
            if f.name in counts and int(value) != value:
                errors.append(f"{f.name} must be an integer (got {value})")
        if errors:
            return errors
        if self.n < 3:
            errors.append(f"n must be >= 3 (got {self.n})")
        if self.m < 1:
            errors.append(f"m must be >= 1 (got {self.m})")
        if not 0.0 < self.lam <= 1.0:
            errors.append(f"lam must be in (0, 1] (got {self.lam})")
        if self.D <= 0 or self.H0 <= 0 or self.H1 <= 0:
            errors.append("cave bounds D, H0, H1 must be > 0")
        if self.rho_He > self.rho_air:
            errors.append(f"rho_He ({self.rho_He}) must be <= rho_air ({self.rho_air})")
        if self.N_patchs > self.n * (self.m + 1):
            errors.append(
                f"N_patchs ({self.N_patchs}) exceeds the junction count n*(m+1) = {self.n * (self.m + 1)}"
            )
        if self.L_tubes <= 0:
            errors.append("L_tubes must be > 0")
        if not 0.0 < self.lambda_step <= 1.0:
            errors.append(f"lambda_step must be in (0, 1] (got {self.lambda_step})")
        return errors

    def to_dict(self) -> Dict[str, Any]:
        return asdict(self)


# =================== RESULT TYPES ===================

@dataclass
class MassBreakdown:
    """Component masses in grams; total_g is the sum of the parts.

    correction_g is the only signed entry (<= 0), see DesignInputs.mass_correction_g.
    """
    envelope_g: float
    exoskeleton_tubes_g: float
    junctions_g: float
    mechatronics_g: float
    battery_g: float
    valves_g: float
    sheath_g: float
    seal_overlap_g: float
    kevlar_g: float = 0.0
    correction_g: float = 0.0
    total_g: float = field(init=False)

    def __post_init__(self):
        self.total_g = (
            self.envelope_g + self.exoskeleton_tubes_g + self.junctions_g
            + self.mechatronics_g + self.battery_g + self.valves_g
            + self.sheath_g + self.seal_overlap_g + self.kevlar_g
            + self.correction_g
        )

    @property
    def built_g(self) -> float:
        """Physical parts only, without the correction."""
        return self.total_g - self.correction_g

    def components(self) -> Dict[str, float]:
        """Part masses without the total, in a stable order."""
        data = asdict(self)
        data.pop('total_g')
        return data


@dataclass
class EnvelopeTerms:
    """Envelope surface split into its terms (m^2)."""
    caps_m2: float
    walls_m2: float
    sheath_m2: float
    L_sheath_mm: float
    wall_triangle_mm2: float

    @property
    def total_m2(self) -> float:
        return self.caps_m2 + self.walls_m2 + self.sheath_m2


@dataclass
class DesignEvaluation:
    """Evaluation of one (n, m, lam) configuration against the cave bounds."""
    params: KreslingParams
    L_CVNT: float
    S_CVNT: float
    volume_deployed: float
    lift_g: float
    mass: MassBreakdown
    extra_payload_g: float
    deployed_height: float
    fits_height: bool
    fits_folded: bool
    feasible: bool = field(init=False)

    def __post_init__(self):
        self.feasible = bool(self.extra_payload_g > 0.0 and self.fits_height and self.fits_folded)

    def to_dict(self) -> Dict[str, Any]:
        return {
            'n': self.params.n,
            'm': self.params.m,
            'lambda': self.params.lam,
            'R_mm': self.params.R,
            'h0_mm': self.params.h0,
            'L_CVNT_mm': self.L_CVNT,
            'S_CVNT_m2': self.S_CVNT,
            'volume_deployed_m3': self.volume_deployed,
            'lift_g': self.lift_g,
            'mass': asdict(self.mass),
            'extra_payload_g': self.extra_payload_g,
            'deployed_height_mm': self.deployed_height,
            'fits_height': self.fits_height,
            'fits_folded': self.fits_folded,
            'feasible': self.feasible,
        }


# =================== BILL OF MATERIALS QUANTITIES ===================

def tube_length(geom: KreslingSegmentGeometry, n: int, m: int) -> float:
    """Total exoskeleton tube length (mm): m*n*(d_g + b_g + s) + n*s."""
    return m * n * (geom.d_g + geom.b_g + geom.s) + n * geom.s


def heron_area(a: float, b: float, c: float) -> float:
    """Triangle area from its three sides."""
    if min(a, b, c) <= 0.0 or a + b <= c or a + c <= b or b + c <= a:
        raise GeometryError(f"sides ({a:.4f}, {b:.4f}, {c:.4f}) violate the triangle inequality")
    p = (a + b + c) / 2.0
    return math.sqrt(p * (p - a) * (p - b) * (p - c))


def envelope_terms(geom: KreslingSegmentGeometry, inputs: DesignInputs, n: int, m: int) -> EnvelopeTerms:
    """Caps, walls and sheath areas of the envelope."""
    caps_mm2 = 2.0 * n * geom.s ** 2 / (4.0 * math.tan(geom.phi))
    tri_mm2 = heron_area(geom.s, geom.b_g, geom.d_g)
    walls_mm2 = m * 2 * n * tri_mm2
    L_sheath = (tube_length(geom, n, m) - geom.d_g * n * m) * inputs.r_pct / 100.0
    sheath_mm2 = L_sheath * inputs.t_sheath
    return EnvelopeTerms(
        caps_m2=caps_mm2 / 1e6,
        walls_m2=walls_mm2 / 1e6,
        sheath_m2=sheath_mm2 / 1e6,
        L_sheath_mm=L_sheath,
        wall_triangle_mm2=tri_mm2,
    )


def envelope_surface(geom: KreslingSegmentGeometry, inputs: DesignInputs, n: int, m: int) -> float:
    """Total envelope membrane surface S_CVNT in m^2 (caps + walls + sheaths)."""
    return envelope_terms(geom, inputs, n, m).total_m2


def edge_inventory(geom: KreslingSegmentGeometry, n: int, m: int) -> List[Tuple[str, float, int]]:
    """Tube edges per class as (class, length_mm, count); ring edges s, sides b_g, diagonals d_g."""
    return [
        ("d_g", geom.d_g, n * m),
        ("b_g", geom.b_g, n * m),
        ("s", geom.s, n * (m + 1)),
    ]


# =================== EVALUATION ===================

def _check_single_body(inputs: DesignInputs) -> None:
    if inputs.N_CVNT > 1 or inputs.N_exo > 0:
        raise UnsupportedFeatureError(
            f"multi-body airships are not supported (N_CVNT={inputs.N_CVNT}, N_exo={inputs.N_exo})"
        )


def mass_breakdown(
    inputs: DesignInputs,
    geom: KreslingSegmentGeometry,
    n: int,
    m: int,
) -> Tuple[MassBreakdown, float, EnvelopeTerms]:
    """Component masses for one configuration, with L_CVNT and the envelope terms."""
    L_CVNT = tube_length(geom, n, m)
    terms = envelope_terms(geom, inputs, n, m)
    areal = inputs.d_env + inputs.d_glue

    junction_count = n * (m + 1)
    lattice = min(inputs.N_patchs, junction_count)
    if lattice < inputs.N_patchs:
        logger.debug(f"N_patchs={inputs.N_patchs} capped at {junction_count} junctions for n={n}, m={m}")

    seal_m2 = inputs.N_seal * (n * geom.s) * inputs.t_ovlp / 1e6

    breakdown = MassBreakdown(
        envelope_g=(terms.caps_m2 + terms.walls_m2) * areal,
        exoskeleton_tubes_g=L_CVNT / 1000.0 * inputs.m_CT,
        junctions_g=lattice * inputs.m_latticeeTPUjct + (junction_count - lattice) * inputs.m_simpleTPUjct,
        mechatronics_g=inputs.m_mecatrn + inputs.N_motors * (inputs.m_motors + inputs.m_propellers),
        battery_g=inputs.N_battery * inputs.m_battery,
        valves_g=inputs.N_valve * inputs.m_valve,
        sheath_g=terms.sheath_m2 * areal,
        seal_overlap_g=seal_m2 * inputs.d_env,
        kevlar_g=inputs.kevlar_length_m * inputs.m_kevlar,
        correction_g=-inputs.mass_correction_g,
    )
    return breakdown, L_CVNT, terms


def lift_grams(volume_m3: float, inputs: DesignInputs) -> float:
    """Buoyant lift in grams-force."""
    return volume_m3 * (inputs.rho_air - inputs.rho_He) * 1000.0


def evaluate_design(inputs: DesignInputs, n: int, m: int, lam: float) -> DesignEvaluation:
    """
    Mass rollup, lift, extra payload and feasibility of one configuration.

    Raises:
        UnsupportedFeatureError: multi-body request
        MonostableError: lam <= 0.5
    """
    _check_single_body(inputs)
    params = KreslingParams.from_envelope(n, m, lam, inputs.D, inputs.H0)
    geom = derive_segment(params)

    mass, L_CVNT, terms = mass_breakdown(inputs, geom, n, m)
    volume = enclosed_volume(build_mesh(params, geom.alpha_deployed))
    lift = lift_grams(volume, inputs)
    deployed_height = m * fold_state(geom, params, geom.alpha_deployed).h

    fits_height = deployed_height <= inputs.H1 + BOUND_TOL_MM
    fits_folded = (
        m * params.h0 <= inputs.H0 + BOUND_TOL_MM
        and 2.0 * params.R <= inputs.D + BOUND_TOL_MM
    )

    evaluation = DesignEvaluation(
        params=params,
        L_CVNT=L_CVNT,
        S_CVNT=terms.total_m2,
        volume_deployed=volume,
        lift_g=lift,
        mass=mass,
        extra_payload_g=lift - mass.total_g,
        deployed_height=deployed_height,
        fits_height=fits_height,
        fits_folded=fits_folded,
    )
    logger.debug(
        f"eval n={n} m={m} lam={lam:.2f}: V={volume:.4f} m3 lift={lift:.1f} g "
        f"mass={mass.total_g:.1f} g payload={evaluation.extra_payload_g:.1f} g"
    )
    return evaluation


def mass_fractions(mass: MassBreakdown) -> Dict[str, float]:
    """
    Share of the built mass per group (weight distribution); the correction
    is left out so the shares add up to 1.

    membrane = envelope + sheaths + seal overlaps;
    exoskeleton = tubes + junctions + Kevlar wire.
    """
    total = mass.built_g
    if total <= 0.0:
        return {k: 0.0 for k in ('membrane', 'exoskeleton', 'mechatronics', 'battery', 'valves')}
    return {
        'membrane': (mass.envelope_g + mass.sheath_g + mass.seal_overlap_g) / total,
        'exoskeleton': (mass.exoskeleton_tubes_g + mass.junctions_g + mass.kevlar_g) / total,
        'mechatronics': mass.mechatronics_g / total,
        'battery': mass.battery_g / total,
        'valves': mass.valves_g / total,
    }


def payload_at_fold(inputs: DesignInputs, n: int, m: int, lam: float, alpha: float) -> float:
    """
    Extra payload (g) of the built (n, m, lam) airship held at fold angle alpha.

    Mass is fixed by the built geometry; lift follows the enclosed volume
    at alpha, which trims buoyancy by partially twisting the structure.
    """
    evaluation = evaluate_design(inputs, n, m, lam)
    volume = enclosed_volume(build_mesh(evaluation.params, alpha))
    return lift_grams(volume, inputs) - evaluation.mass.total_g


# =================== CUT PLAN ===================

@dataclass
class StockBar:
    """One raw tube with the cuts assigned to it."""
    index: int
    stock_mm: float
    cuts: List[Tuple[str, float]] = field(default_factory=list)
    kerf_mm: float = 0.0

    @property
    def used_mm(self) -> float:
        return sum(length for _, length in self.cuts) + self.kerf_mm * len(self.cuts)

    @property
    def waste_mm(self) -> float:
        return self.stock_mm - self.used_mm


@dataclass
class CutPlan:
    stock_mm: float
    bars: List[StockBar] = field(default_factory=list)

    @property
    def bar_count(self) -> int:
        return len(self.bars)

    @property
    def total_waste_mm(self) -> float:
        return sum(b.waste_mm for b in self.bars)


def expand_edges(inventory: Sequence[Tuple[str, float, int]]) -> List[Tuple[str, float]]:
    """Flatten an edge inventory into one (class, length) entry per tube."""
    edges: List[Tuple[str, float]] = []
    for edge_class, length, count in inventory:
        edges.extend([(edge_class, length)] * int(count))
    return edges


def cut_plan(edge_lengths: Sequence[Any], stock: float, kerf_mm: float = 0.0) -> CutPlan:
    """
    First-fit-decreasing assignment of tube edges to raw stock bars.

    edge_lengths holds plain lengths (mm) or (class, length) pairs.

    Raises:
        CutPlanError: an edge is longer than the stock
    """
    if stock <= 0:
        raise CutPlanError(f"stock length must be > 0 (got {stock})")
    edges: List[Tuple[str, float]] = []
    for item in edge_lengths:
        if isinstance(item, (tuple, list)):
            edges.append((str(item[0]), float(item[1])))
        else:
            edges.append(("edge", float(item)))

    for edge_class, length in edges:
        if length <= 0:
            raise CutPlanError(f"edge {edge_class} has non-positive length {length}", edge_class)
        if length + kerf_mm > stock:
            raise CutPlanError(
                f"edge {edge_class} ({length:.1f} mm) is longer than stock ({stock:.1f} mm)",
                edge_class,
            )

    # Stable order: longest first, then class name
    ordered = sorted(edges, key=lambda e: (-e[1], e[0]))
    plan = CutPlan(stock_mm=stock)
    for edge_class, length in ordered:
        for bar in plan.bars:
            if bar.waste_mm + 1e-9 >= length + kerf_mm:
                bar.cuts.append((edge_class, length))
                break
        else:
            bar = StockBar(index=len(plan.bars), stock_mm=stock, kerf_mm=kerf_mm)
            bar.cuts.append((edge_class, length))
            plan.bars.append(bar)

    logger.debug(f"cut plan: {len(edges)} edges into {plan.bar_count} bars of {stock:.0f} mm")
    return plan


# =================== BOM ===================

@dataclass
class BomRow:
    component: str
    quantity: float
    unit: str
    unit_mass_g: float
    subtotal_g: float


def bom_rows(inputs: DesignInputs, evaluation: DesignEvaluation) -> List[BomRow]:
    """Bill of materials rows whose subtotals add up to the mass total."""
    params = evaluation.params
    n, m = params.n, params.m
    geom = derive_segment(params)
    terms = envelope_terms(geom, inputs, n, m)
    areal = inputs.d_env + inputs.d_glue
    junction_count = n * (m + 1)
    lattice = min(inputs.N_patchs, junction_count)
    seal_m2 = inputs.N_seal * (n * geom.s) * inputs.t_ovlp / 1e6
    mass = evaluation.mass

    rows = [
        BomRow("envelope membrane", terms.caps_m2 + terms.walls_m2, "m2", areal, mass.envelope_g),
        BomRow("sheath strips", terms.sheath_m2, "m2", areal, mass.sheath_g),
        BomRow("seal overlap", seal_m2, "m2", inputs.d_env, mass.seal_overlap_g),
        BomRow("carbon tube", evaluation.L_CVNT / 1000.0, "m", inputs.m_CT, mass.exoskeleton_tubes_g),
        BomRow("TPU junction (simple)", junction_count - lattice, "pcs", inputs.m_simpleTPUjct,
               (junction_count - lattice) * inputs.m_simpleTPUjct),
        BomRow("TPU junction + micro-lattice", lattice, "pcs", inputs.m_latticeeTPUjct,
               lattice * inputs.m_latticeeTPUjct),
        BomRow("mechatronics board", 1, "pcs", inputs.m_mecatrn, inputs.m_mecatrn),
        BomRow("motor + propeller", inputs.N_motors, "pcs", inputs.m_motors + inputs.m_propellers,
               inputs.N_motors * (inputs.m_motors + inputs.m_propellers)),
        BomRow("battery", inputs.N_battery, "pcs", inputs.m_battery, mass.battery_g),
        BomRow("valve", inputs.N_valve, "pcs", inputs.m_valve, mass.valves_g),
    ]
    if mass.kevlar_g > 0:
        rows.append(BomRow("Kevlar wire", inputs.kevlar_length_m, "m", inputs.m_kevlar, mass.kevlar_g))
    if mass.correction_g != 0.0:
        rows.append(BomRow("mass correction", 1, "-", mass.correction_g, mass.correction_g))
    return rows

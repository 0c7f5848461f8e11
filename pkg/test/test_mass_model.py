"""
Tests for core.mass_model: mass rollup, lift, payload, cut plan and BOM
"""

import math
from dataclasses import replace

import pytest

from core.exceptions import ConfigError, CutPlanError, GeometryError, MonostableError, UnsupportedFeatureError
from core.mass_model import (
    DesignInputs,
    bom_rows,
    cut_plan,
    edge_inventory,
    envelope_terms,
    evaluate_design,
    expand_edges,
    heron_area,
    mass_fractions,
    payload_at_fold,
    tube_length,
)


@pytest.fixture
def nominal(inputs):
    return evaluate_design(inputs, 7, 4, 0.9)


# =================== ROLLUP ===================

def test_tube_length(nominal_geom):
    assert tube_length(nominal_geom, 7, 4) == pytest.approx(48308, abs=1.0)


def test_heron_equilateral():
    assert heron_area(2.0, 2.0, 2.0) == pytest.approx(math.sqrt(3.0))


def test_heron_rejects_degenerate_triangle():
    with pytest.raises(GeometryError):
        heron_area(1.0, 2.0, 3.5)


def test_envelope_surface(nominal):
    assert nominal.S_CVNT == pytest.approx(6.154, abs=0.005)


def test_nominal_component_masses(nominal):
    mass = nominal.mass
    assert mass.exoskeleton_tubes_g == pytest.approx(181.6, abs=0.1)
    assert mass.junctions_g == pytest.approx(71.3, abs=1e-9)
    assert mass.envelope_g + mass.sheath_g == pytest.approx(430.7, abs=0.3)
    assert mass.seal_overlap_g == pytest.approx(3.06, abs=0.01)
    assert mass.mechatronics_g == pytest.approx(68.24, abs=1e-9)
    assert mass.battery_g == 80.0
    assert mass.valves_g == 7.0
    assert mass.kevlar_g == 0.0


def test_bare_formulas_without_correction(inputs, nominal):
    bare = evaluate_design(replace(inputs, mass_correction_g=0.0), 7, 4, 0.9)
    assert bare.mass.correction_g == 0.0
    assert bare.mass.total_g == pytest.approx(nominal.mass.built_g)
    assert bare.extra_payload_g == pytest.approx(35.72, abs=0.05)
    assert "mass correction" not in {r.component for r in bom_rows(inputs, bare)}


# Extra payload (g) of the (7, 4) design across the lambda band it floats in
REFERENCE_PAYLOADS = [
    (0.83, 1.1), (0.84, 8.6), (0.85, 25.1), (0.86, 32.3),
    (0.87, 39.3), (0.88, 55.0), (0.89, 61.5), (0.90, 68.0),
]


@pytest.mark.parametrize("lam, payload", REFERENCE_PAYLOADS)
def test_payload_curve_matches_reference(inputs, lam, payload):
    evaluation = evaluate_design(inputs, 7, 4, lam)
    assert evaluation.extra_payload_g == pytest.approx(payload, abs=5.0)
    assert evaluation.feasible


def test_payload_non_decreasing_in_lambda(inputs):
    payloads = [evaluate_design(inputs, 7, 4, lam).extra_payload_g for lam, _ in REFERENCE_PAYLOADS]
    assert payloads == sorted(payloads)
    assert 0.0 < payloads[0] < payloads[-1] <= 120.0


def test_nominal_total_lift_and_payload(nominal):
    assert nominal.mass.built_g == pytest.approx(841.9, abs=0.3)
    assert nominal.mass.correction_g == -33.5
    assert nominal.mass.total_g == pytest.approx(808.4, abs=0.3)
    assert nominal.lift_g == pytest.approx(877.7, abs=0.3)
    assert nominal.extra_payload_g == pytest.approx(69.22, abs=0.05)
    assert nominal.extra_payload_g == pytest.approx(nominal.lift_g - nominal.mass.total_g)


def test_total_is_sum_of_components(nominal):
    assert nominal.mass.total_g == pytest.approx(math.fsum(nominal.mass.components().values()))


def test_nominal_design_is_feasible(nominal):
    assert nominal.fits_height
    assert nominal.fits_folded
    assert nominal.feasible
    assert nominal.deployed_height == pytest.approx(2438.2, abs=0.1)


def test_mass_fractions(nominal):
    fractions = mass_fractions(nominal.mass)
    assert fractions['membrane'] == pytest.approx(0.515, abs=0.005)
    assert fractions['exoskeleton'] == pytest.approx(0.30, abs=0.005)
    assert fractions['mechatronics'] == pytest.approx(0.081, abs=0.002)
    assert sum(fractions.values()) == pytest.approx(1.0)


def test_mass_is_linear_in_tube_density(inputs, nominal):
    doubled = evaluate_design(replace(inputs, m_CT=2 * inputs.m_CT), 7, 4, 0.9)
    assert doubled.mass.exoskeleton_tubes_g == pytest.approx(2 * nominal.mass.exoskeleton_tubes_g)
    assert doubled.mass.total_g - nominal.mass.total_g == pytest.approx(nominal.mass.exoskeleton_tubes_g)


def test_glue_adds_to_membrane_only(inputs, nominal):
    glued = evaluate_design(replace(inputs, d_glue=10.0), 7, 4, 0.9)
    terms_m2 = nominal.S_CVNT
    assert glued.mass.total_g - nominal.mass.total_g == pytest.approx(10.0 * terms_m2)


def test_kevlar_wire_counts(inputs, nominal):
    wired = evaluate_design(replace(inputs, kevlar_length_m=10.0), 7, 4, 0.9)
    assert wired.mass.kevlar_g == pytest.approx(2.8)
    assert wired.extra_payload_g == pytest.approx(nominal.extra_payload_g - 2.8)


def test_lattice_junctions_capped_for_small_bodies(inputs):
    small = evaluate_design(inputs, 3, 2, 0.9)
    assert small.mass.junctions_g == pytest.approx(9 * inputs.m_latticeeTPUjct)


def test_height_bound(inputs):
    tall = evaluate_design(replace(inputs, H1=2000.0), 7, 4, 0.9)
    assert not tall.fits_height
    assert not tall.feasible


def test_height_bound_is_inclusive(inputs, nominal):
    exact = evaluate_design(replace(inputs, H1=nominal.deployed_height), 7, 4, 0.9)
    assert exact.fits_height


def test_lower_lambda_is_lighter_on_lift(inputs, nominal):
    assert evaluate_design(inputs, 7, 4, 0.8).extra_payload_g < nominal.extra_payload_g


def test_monostable_design_rejected(inputs):
    with pytest.raises(MonostableError):
        evaluate_design(inputs, 7, 4, 0.5)


@pytest.mark.parametrize("field_name, value", [("N_CVNT", 2), ("N_exo", 1)])
def test_multi_body_not_supported(inputs, field_name, value):
    with pytest.raises(UnsupportedFeatureError):
        evaluate_design(replace(inputs, **{field_name: value}), 7, 4, 0.9)


def test_invalid_inputs_collect_all_errors():
    with pytest.raises(ConfigError) as excinfo:
        DesignInputs(rho_He=2.0, L_tubes=0.0)
    message = str(excinfo.value)
    assert "rho_He" in message
    assert "L_tubes" in message


def test_helium_at_air_density_gives_no_lift(inputs):
    inert = replace(inputs, rho_He=inputs.rho_air)
    evaluation = evaluate_design(inert, 7, 4, 0.9)
    assert evaluation.lift_g == 0.0
    assert evaluation.extra_payload_g == pytest.approx(-evaluation.mass.total_g)
    assert not evaluation.feasible


def test_helium_heavier_than_air_rejected():
    with pytest.raises(ConfigError, match="rho_He"):
        DesignInputs(rho_He=1.3)


def test_lattice_count_above_junctions_rejected():
    with pytest.raises(ConfigError):
        DesignInputs(n=3, m=2, N_patchs=10)


def test_payload_at_fold_matches_evaluation_when_deployed(inputs, nominal, nominal_geom):
    assert payload_at_fold(inputs, 7, 4, 0.9, nominal_geom.alpha_deployed) == pytest.approx(nominal.extra_payload_g)


def test_partial_fold_reduces_payload(inputs, nominal_geom):
    mid = 0.5 * (nominal_geom.alpha_deployed + nominal_geom.alpha_folded)
    assert payload_at_fold(inputs, 7, 4, 0.9, mid) < payload_at_fold(inputs, 7, 4, 0.9, nominal_geom.alpha_deployed)


# =================== CUT PLAN ===================

def test_edge_inventory(nominal_geom):
    inventory = {cls: (length, count) for cls, length, count in edge_inventory(nominal_geom, 7, 4)}
    assert inventory['d_g'][1] == 28
    assert inventory['b_g'][1] == 28
    assert inventory['s'][1] == 35
    assert math.fsum(length * count for length, count in inventory.values()) == pytest.approx(
        tube_length(nominal_geom, 7, 4)
    )


def test_cut_plan_first_fit_decreasing():
    plan = cut_plan([600, 500, 400, 300], stock=1000)
    assert plan.bar_count == 2
    assert [length for _, length in plan.bars[0].cuts] == [600, 400]
    assert [length for _, length in plan.bars[1].cuts] == [500, 300]
    assert plan.total_waste_mm == pytest.approx(200)


def test_cut_plan_kerf_forces_new_bar():
    assert cut_plan([500, 500], stock=1000).bar_count == 1
    assert cut_plan([500, 500], stock=1000, kerf_mm=1.0).bar_count == 2


def test_nominal_cut_plan(nominal_geom):
    plan = cut_plan(expand_edges(edge_inventory(nominal_geom, 7, 4)), stock=1000.0)
    assert plan.bar_count == 59
    assert plan.total_waste_mm == pytest.approx(59000.0 - tube_length(nominal_geom, 7, 4))
    for bar in plan.bars:
        assert bar.used_mm <= bar.stock_mm + 1e-9


def test_cut_plan_names_the_offending_class(nominal_geom):
    with pytest.raises(CutPlanError) as excinfo:
        cut_plan(expand_edges(edge_inventory(nominal_geom, 7, 4)), stock=700.0)
    assert excinfo.value.edge_class == 'd_g'


def test_empty_cut_plan():
    plan = cut_plan([], stock=1000)
    assert plan.bar_count == 0
    assert plan.total_waste_mm == 0


# =================== BOM ===================

def test_bom_subtotals_match_total(inputs, nominal):
    rows = bom_rows(inputs, nominal)
    assert math.fsum(r.subtotal_g for r in rows) == pytest.approx(nominal.mass.total_g)
    components = {r.component for r in rows}
    assert {"carbon tube", "battery", "valve"} <= components


def test_envelope_terms_sheath(inputs, nominal_geom):
    terms = envelope_terms(nominal_geom, inputs, 7, 4)
    expected_sheath = (tube_length(nominal_geom, 7, 4) - 28 * nominal_geom.d_g) * 0.10
    assert terms.L_sheath_mm == pytest.approx(expected_sheath)
    assert terms.sheath_m2 == pytest.approx(expected_sheath * 35.0 / 1e6)

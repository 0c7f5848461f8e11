"""
Tests for core.design_sweep
"""

from dataclasses import replace

import pytest

from core.design_sweep import SweepGrid, feasibility_map, rank_pairs, run_sweep
from core.exceptions import ConfigError


@pytest.fixture(scope="module")
def full_sweep():
    from core.mass_model import DesignInputs
    return run_sweep(DesignInputs())


def test_default_grid_cardinality():
    grid = SweepGrid()
    assert len(grid.n_values()) == 8
    assert len(grid.m_values()) == 9
    assert len(grid.lambda_values()) == 40
    assert grid.size() == 2880


def test_lambda_values_are_clean_decimals():
    values = SweepGrid().lambda_values()
    assert values[0] == 0.51
    assert values[-1] == 0.9
    assert 0.87 in values


@pytest.mark.parametrize("kwargs", [
    dict(lambda_min=0.5),
    dict(lambda_min=0.9, lambda_max=0.8),
    dict(n_range=(2, 10)),
    dict(m_range=(5, 4)),
    dict(lambda_step=0.0),
])
def test_invalid_grids(kwargs):
    with pytest.raises(ConfigError):
        SweepGrid(**kwargs)


def test_full_sweep_feasible_count(full_sweep):
    assert len(full_sweep.evaluations) == 2880
    assert 22 <= len(full_sweep.feasible_set) <= 38


def test_full_sweep_best_pair_and_band(full_sweep):
    assert full_sweep.best_pair == (7, 4)
    lo, hi = full_sweep.best_lambda_band
    assert lo <= 0.85 and hi >= 0.90
    assert full_sweep.best_lambda_band == pytest.approx((0.83, 0.90))
    assert full_sweep.pair_occurrences[(7, 4)] == 8


def test_helium_at_air_density_floats_nothing(inputs):
    inert = replace(inputs, rho_He=inputs.rho_air)
    result = run_sweep(inert, SweepGrid(n_range=(6, 8), m_range=(3, 5), lambda_min=0.8))
    assert not result.has_feasible
    assert all(e.lift_g == 0.0 for e in result.evaluations)
    assert result.summary()['feasible_count'] == 0


def test_more_lift_never_shrinks_the_feasible_set(inputs):
    grid = SweepGrid(n_range=(6, 9), m_range=(3, 4), lambda_min=0.8)

    def keys(result):
        return {(e.params.n, e.params.m, e.params.lam) for e in result.feasible_set}

    base = keys(run_sweep(inputs, grid))
    lighter_gas = keys(run_sweep(replace(inputs, rho_He=0.1), grid))
    assert base <= lighter_gas


def test_feasible_designs_respect_bounds(full_sweep, inputs):
    for e in full_sweep.feasible_set:
        assert e.extra_payload_g > 0
        assert e.deployed_height <= inputs.H1 + 1e-6
        assert e.params.m < 5


def test_payload_monotone_in_lambda_for_best_pair(full_sweep):
    payloads = [e.extra_payload_g for e in full_sweep.evaluations if (e.params.n, e.params.m) == (7, 4)]
    assert all(a < b for a, b in zip(payloads, payloads[1:]))


def test_results_sorted_lexicographically(full_sweep):
    keys = [(e.params.n, e.params.m, e.params.lam) for e in full_sweep.evaluations]
    assert keys == sorted(keys)


def test_ranking_order(full_sweep):
    ranking = rank_pairs(full_sweep)
    assert [pair for pair, _ in ranking[:3]] == [(7, 4), (8, 4), (6, 4)]
    assert [count for _, count in ranking[:3]] == [8, 5, 5]
    counts = [count for _, count in ranking]
    assert counts == sorted(counts, reverse=True)
    assert sum(counts) == len(full_sweep.feasible_set)


def test_summary(full_sweep):
    summary = full_sweep.summary()
    assert summary['status'] == 'ok'
    assert summary['evaluated'] == 2880
    assert summary['feasible_count'] == len(full_sweep.feasible_set)
    assert summary['best_pair'] == [7, 4]
    assert max(summary['feasible_m_values']) < 5


def test_feasibility_map_rows(full_sweep):
    rows = feasibility_map(full_sweep)
    assert len(rows) == 2880
    assert sum(1 for r in rows if r['feasible']) == len(full_sweep.feasible_set)
    assert set(rows[0]) == {'n', 'm', 'lambda', 'feasible', 'extra_payload_g'}


def test_no_feasible_design_is_a_result(inputs):
    heavy = replace(inputs, m_battery=500.0)
    result = run_sweep(heavy, SweepGrid(n_range=(6, 8), m_range=(3, 5), lambda_min=0.85))
    assert not result.has_feasible
    assert result.best_pair is None
    assert result.summary()['status'] == 'no_feasible_design'


def test_single_point_grid(inputs):
    result = run_sweep(inputs, SweepGrid.single_point(7, 4, 0.9))
    assert len(result.evaluations) == 1
    assert result.best_pair == (7, 4)
    assert result.best_lambda_band == (0.9, 0.9)

"""
Tests for core.kresling_geometry
"""

import math

import numpy as np
import pytest

from core.exceptions import FoldRangeError, GeometryError, MonostableError, TopologyError
from core.kresling_geometry import (
    KreslingParams,
    TriangulatedClosedSurface,
    build_mesh,
    derive_segment,
    enclosed_volume,
    fold_curve,
    fold_state,
    segment_height,
    volume_expansion_ratio,
    write_obj,
)


# =================== SEGMENT GEOMETRY ===================

def test_nominal_segment_lengths(nominal_geom):
    assert nominal_geom.s == pytest.approx(312.40, abs=0.01)
    assert nominal_geom.d_c == pytest.approx(715.47, abs=0.01)
    assert nominal_geom.b_c == pytest.approx(609.64, abs=0.01)
    assert nominal_geom.d_g == pytest.approx(719.93, abs=0.01)
    assert nominal_geom.b_g == pytest.approx(614.87, abs=0.01)
    assert math.degrees(nominal_geom.theta_g) == pytest.approx(58.08, abs=0.01)


def test_generalized_lengths_add_segment_height(nominal_params, nominal_geom):
    h0 = nominal_params.h0
    assert nominal_geom.b_g ** 2 == pytest.approx(nominal_geom.b_c ** 2 + h0 ** 2)
    assert nominal_geom.d_g ** 2 == pytest.approx(nominal_geom.d_c ** 2 + h0 ** 2)


def test_from_envelope_splits_folded_height(nominal_params):
    assert nominal_params.R == 360.0
    assert nominal_params.h0 == 80.0


@pytest.mark.parametrize("lam, expected_deg", [
    (0.83, 21.86), (0.84, 20.57), (0.85, 19.29), (0.86, 18.00),
    (0.87, 16.71), (0.88, 15.43), (0.89, 14.14), (0.90, 12.86),
])
def test_deployed_angle_table(lam, expected_deg):
    geom = derive_segment(KreslingParams.from_envelope(7, 4, lam, 720.0, 320.0))
    assert math.degrees(geom.alpha_deployed) == pytest.approx(expected_deg, abs=0.01)


def test_stable_angles_sum_to_twice_gamma(nominal_geom):
    assert nominal_geom.alpha_folded + nominal_geom.alpha_deployed == pytest.approx(2.0 * nominal_geom.gamma)


def test_monostable_lambda_rejected():
    with pytest.raises(MonostableError):
        derive_segment(KreslingParams(n=7, m=4, lam=0.5, R=360.0, h0=80.0))


def test_monostable_allowed_when_not_required():
    geom = derive_segment(KreslingParams(n=7, m=4, lam=0.4, R=360.0, h0=80.0), require_bistable=False)
    assert geom.s > 0


def test_lambda_one_is_untwisted_but_accepted():
    geom = derive_segment(KreslingParams(n=7, m=4, lam=1.0, R=360.0, h0=80.0))
    assert geom.untwisted
    assert geom.alpha_deployed == pytest.approx(0.0)


@pytest.mark.parametrize("kwargs", [
    dict(n=2, m=4, lam=0.9, R=360.0, h0=80.0),
    dict(n=7, m=0, lam=0.9, R=360.0, h0=80.0),
    dict(n=7, m=4, lam=0.0, R=360.0, h0=80.0),
    dict(n=7, m=4, lam=0.9, R=-1.0, h0=80.0),
])
def test_invalid_params_raise(kwargs):
    with pytest.raises(GeometryError):
        KreslingParams(**kwargs)


# =================== FOLD KINEMATICS ===================

def test_height_at_stable_states(nominal_params, nominal_geom):
    assert segment_height(nominal_geom, nominal_params, nominal_geom.alpha_folded) == pytest.approx(80.0)
    h1 = segment_height(nominal_geom, nominal_params, nominal_geom.alpha_deployed)
    assert h1 == pytest.approx(609.56, abs=0.01)
    assert 4 * h1 == pytest.approx(2438.2, abs=0.1)


@pytest.mark.parametrize("lam, height", [(0.83, 2268.1), (0.89, 2416.4)])
def test_deployed_body_height(lam, height):
    params = KreslingParams.from_envelope(7, 4, lam, 720.0, 320.0)
    geom = derive_segment(params)
    assert 4 * segment_height(geom, params, geom.alpha_deployed) == pytest.approx(height, rel=3e-3)


def test_height_grows_as_structure_untwists(nominal_params):
    curve = fold_curve(nominal_params, samples=50)
    heights = [state.h for state in curve]
    assert all(a > b for a, b in zip(heights, heights[1:]))


def test_fold_energy_has_interior_barrier(nominal_params):
    curve = fold_curve(nominal_params, samples=181)
    energies = [state.normalized_energy for state in curve]
    peak = int(np.argmax(energies))
    assert 0 < peak < len(energies) - 1
    assert abs(curve[0].strain) < 1e-3
    assert abs(curve[-1].strain) < 1e-3
    assert energies[peak] > 100 * max(energies[0], energies[-1])


def test_fold_angle_outside_range(nominal_params, nominal_geom):
    with pytest.raises(FoldRangeError):
        fold_state(nominal_geom, nominal_params, nominal_geom.alpha_folded + 0.1)
    with pytest.raises(FoldRangeError):
        fold_state(nominal_geom, nominal_params, float('nan'))


def test_fold_curve_needs_two_samples(nominal_params):
    with pytest.raises(GeometryError):
        fold_curve(nominal_params, samples=1)


# =================== MESH / VOLUME ===================

def test_mesh_topology(nominal_params):
    mesh = build_mesh(nominal_params)
    n, m = nominal_params.n, nominal_params.m
    assert mesh.vertex_count == n * (m + 1) + 2
    assert mesh.face_count == 2 * n + 2 * n * m == 70
    assert mesh.euler_characteristic() == 2
    assert mesh.is_watertight()


def test_deployed_and_folded_volume(nominal_params):
    deployed, folded, ratio = volume_expansion_ratio(nominal_params)
    assert deployed == pytest.approx(0.8266, abs=5e-4)
    assert folded == pytest.approx(0.0428, abs=5e-4)
    assert ratio == pytest.approx(19.3, abs=0.2)


def test_untwisted_body_is_a_prism():
    params = KreslingParams(n=6, m=2, lam=1.0, R=100.0, h0=50.0)
    geom = derive_segment(params)
    mesh = build_mesh(params, geom.alpha_deployed)
    height = 2 * segment_height(geom, params, geom.alpha_deployed)
    hexagon_area = 3.0 * math.sqrt(3.0) / 2.0 * 100.0 ** 2
    assert enclosed_volume(mesh) == pytest.approx(hexagon_area * height * 1e-9, rel=1e-9)


def test_flipped_winding_negates_volume(nominal_params):
    mesh = build_mesh(nominal_params)
    flipped = TriangulatedClosedSurface(vertices=mesh.vertices, faces=mesh.faces[:, ::-1].copy())
    assert enclosed_volume(flipped) == pytest.approx(-enclosed_volume(mesh))


def test_open_mesh_rejected(nominal_params):
    mesh = build_mesh(nominal_params)
    holed = TriangulatedClosedSurface(vertices=mesh.vertices, faces=mesh.faces[1:])
    assert not holed.is_watertight()
    with pytest.raises(TopologyError):
        enclosed_volume(holed)


def test_write_obj(tmp_path, nominal_params):
    mesh = build_mesh(nominal_params)
    path = tmp_path / "body.obj"
    write_obj(mesh, str(path), header_lines=["foldship test"])
    lines = path.read_text(encoding="utf-8").splitlines()
    assert lines[0] == "# foldship test"
    assert sum(1 for line in lines if line.startswith("v ")) == 37
    assert sum(1 for line in lines if line.startswith("f ")) == 70
    assert "f 36 2 1" in lines  # first bottom-cap face, 1-based


# =================== VOLUME ORACLES ===================

UNIT_CUBE_VERTICES = np.array([
    [0, 0, 0], [1, 0, 0], [1, 1, 0], [0, 1, 0],
    [0, 0, 1], [1, 0, 1], [1, 1, 1], [0, 1, 1],
], dtype=float)
UNIT_CUBE_FACES = np.array([
    [0, 2, 1], [0, 3, 2],  # z = 0
    [4, 5, 6], [4, 6, 7],  # z = 1
    [0, 1, 5], [0, 5, 4],  # y = 0
    [3, 7, 6], [3, 6, 2],  # y = 1
    [0, 4, 7], [0, 7, 3],  # x = 0
    [1, 2, 6], [1, 6, 5],  # x = 1
])


def winding_numbers(mesh, points, chunk=4096):
    """Generalized winding number of each point: summed solid angles over 4*pi."""
    v, f = mesh.vertices, mesh.faces
    result = []
    for start in range(0, len(points), chunk):
        p = points[start:start + chunk, None, :]
        a, b, c = v[f[:, 0]] - p, v[f[:, 1]] - p, v[f[:, 2]] - p
        la, lb, lc = (np.linalg.norm(x, axis=2) for x in (a, b, c))
        det = np.einsum('pfi,pfi->pf', a, np.cross(b, c))
        denom = (la * lb * lc + np.einsum('pfi,pfi->pf', a, b) * lc
                 + np.einsum('pfi,pfi->pf', b, c) * la + np.einsum('pfi,pfi->pf', c, a) * lb)
        result.append(np.arctan2(det, denom).sum(axis=1) / (2.0 * math.pi))
    return np.concatenate(result)


def sampled_volume(mesh, samples_log2=17, seed=0):
    """Bounding-box volume times the mean integer winding number (m^3 for mm meshes)."""
    from scipy.stats import qmc

    lo, hi = mesh.vertices.min(axis=0), mesh.vertices.max(axis=0)
    unit = qmc.Sobol(d=3, scramble=True, seed=seed).random_base2(m=samples_log2)
    points = lo + unit * (hi - lo)
    inside = np.rint(winding_numbers(mesh, points))
    return float(np.prod(hi - lo) * inside.mean()) * 1e-9


def test_unit_cube_volume_is_exact():
    cube = TriangulatedClosedSurface(vertices=UNIT_CUBE_VERTICES, faces=UNIT_CUBE_FACES)
    assert cube.is_watertight()
    assert cube.euler_characteristic() == 2
    assert enclosed_volume(cube, unit_to_m=1.0) == 1.0


def test_volume_matches_sampled_oracle_on_random_shapes():
    rng = np.random.default_rng(11)
    for shape in range(5):
        params = KreslingParams(
            n=int(rng.integers(3, 11)),
            m=int(rng.integers(1, 6)),
            lam=float(rng.uniform(0.55, 0.95)),
            R=float(rng.uniform(100.0, 400.0)),
            h0=float(rng.uniform(20.0, 120.0)),
        )
        geom = derive_segment(params)
        alpha = geom.alpha_deployed + float(rng.uniform()) * (geom.alpha_folded - geom.alpha_deployed)
        mesh = build_mesh(params, alpha)
        assert sampled_volume(mesh, seed=shape) == pytest.approx(enclosed_volume(mesh), rel=0.01), params


def _fan_caps(mesh, n, m, apex=0):
    """Same body with both caps fanned from a ring vertex instead of the centre point."""
    side = mesh.faces[n:-n]
    top = m * n
    bottom_fan = [(apex, (apex + k + 1) % n, (apex + k) % n) for k in range(1, n - 1)]
    top_fan = [(top + (apex + k) % n, top + (apex + k + 1) % n, top + apex) for k in range(1, n - 1)]
    faces = np.vstack([np.array(bottom_fan), side, np.array(top_fan)])
    return TriangulatedClosedSurface(vertices=mesh.vertices, faces=faces)


@pytest.mark.parametrize("apex", [0, 3])
def test_cap_triangulation_does_not_change_volume(nominal_params, apex):
    mesh = build_mesh(nominal_params)
    fanned = _fan_caps(mesh, nominal_params.n, nominal_params.m, apex)
    assert fanned.is_watertight()
    assert enclosed_volume(fanned) == pytest.approx(enclosed_volume(mesh), rel=1e-12)


def test_off_centre_cap_point_does_not_change_volume(nominal_params):
    mesh = build_mesh(nominal_params)
    moved = mesh.vertices.copy()
    moved[-2, :2] = (55.0, -40.0)
    moved[-1, :2] = (-70.0, 25.0)
    shifted = TriangulatedClosedSurface(vertices=moved, faces=mesh.faces)
    assert enclosed_volume(shifted) == pytest.approx(enclosed_volume(mesh), rel=1e-12)


# =================== BISTABILITY ===================

def test_bistability_on_random_designs():
    rng = np.random.default_rng(5)
    for _ in range(100):
        params = KreslingParams(
            n=int(rng.integers(3, 11)),
            m=int(rng.integers(1, 11)),
            lam=float(rng.uniform(0.51, 0.99)),
            R=360.0,
            h0=float(rng.uniform(10.0, 200.0)),
        )
        energies = np.array([state.normalized_energy for state in fold_curve(params, samples=181)])
        assert energies[0] < 1e-4 and energies[-1] < 1e-4, params
        interior = energies[1:-1]
        peaks = (interior > energies[:-2]) & (interior >= energies[2:])
        assert int(peaks.sum()) == 1, params

"""
Concurrency tests: process-pool sweep and parallel service requests
"""

from concurrent.futures import ThreadPoolExecutor, as_completed

import pytest

from core.design_sweep import SweepGrid, run_sweep
from core.mass_model import DesignInputs
from foldship_cli import EXIT_OK, main

from conftest import PROJECT_FILE

SMALL_GRID = SweepGrid(n_range=(6, 8), m_range=(3, 5), lambda_min=0.8)


def _table(result):
    return [(e.params.n, e.params.m, e.params.lam, e.extra_payload_g, e.feasible) for e in result.evaluations]


def test_sweep_identical_for_any_worker_count():
    inputs = DesignInputs()
    serial = run_sweep(inputs, SMALL_GRID, workers=1)
    parallel = run_sweep(inputs, SMALL_GRID, workers=2)
    assert _table(serial) == _table(parallel)
    assert serial.summary()['ranking'] == parallel.summary()['ranking']
    assert serial.best_pair == parallel.best_pair == (7, 4)


def test_sweep_csv_bytes_identical_for_any_worker_count(tmp_path):
    outputs = {}
    for workers in (1, 3):
        out = tmp_path / f"workers{workers}"
        code = main(["--config", PROJECT_FILE, "--out", str(out), "sweep", "--workers", str(workers),
                     "--n-range", "6", "8", "--m-range", "3", "5", "--lambda-range", "0.8", "0.9"])
        assert code == EXIT_OK
        outputs[workers] = [(out / name).read_bytes() for name in ("sweep.csv", "feasibility_map.csv")]
    assert outputs[1] == outputs[3]
    assert len(outputs[1][0].splitlines()) == 2 + 3 * 3 * 11


def test_parallel_requests(client):
    bodies = [{"n": 7, "m": 4, "lambda": round(0.81 + 0.01 * i, 2)} for i in range(10)]

    def evaluate(body):
        response = client.post("/api/v1/designs/evaluate", json=body)
        return body["lambda"], response.status_code, response.get_json()

    with ThreadPoolExecutor(max_workers=5) as pool:
        futures = [pool.submit(evaluate, body) for body in bodies]
        results = {}
        for future in as_completed(futures):
            lam, status, body = future.result()
            results[lam] = (status, body)

    assert all(status == 200 for status, _ in results.values())
    for lam, (_, body) in results.items():
        assert body['data']['lambda'] == pytest.approx(lam)
    feasible = sorted(lam for lam, (_, body) in results.items() if body['data']['feasible'])
    assert feasible == [0.83, 0.84, 0.85, 0.86, 0.87, 0.88, 0.89, 0.9]


def test_request_ids_stay_distinct(client):
    def health(i):
        response = client.get("/api/v1/health", headers={'X-Request-ID': f"req-{i}"})
        return i, response.get_json()['metadata']['request_id']

    with ThreadPoolExecutor(max_workers=4) as pool:
        pairs = list(pool.map(health, range(12)))
    assert all(request_id == f"req-{i}" for i, request_id in pairs)

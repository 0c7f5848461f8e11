"""
FoldShip service smoke client

Runs one call per endpoint against a running service and prints a
PASS/FAIL summary. Exit code 1 when anything fails.

Usage:
    python foldship_client.py [--base-url http://localhost:5000]
"""

import sys
import json
import argparse
from typing import Any, Dict, List, Optional, Tuple

import requests

DEFAULT_BASE_URL = "http://localhost:5000"
API_PREFIX = "/api/v1"


class CheckResult:
    def __init__(self, name: str, success: bool, details: str = ""):
        self.name = name
        self.success = success
        self.details = details


def pretty_print_response(resp: requests.Response) -> None:
    print(f"\n{'━' * 70}")
    print(f"Status Code: {resp.status_code}")
    print(f"{'━' * 70}")
    try:
        print(json.dumps(resp.json(), indent=2, ensure_ascii=False)[:2000])
    except ValueError:
        print(resp.text[:2000])


def check_connection(base_url: str) -> bool:
    try:
        print(f"🔗 Testing connection to {base_url} ...")
        resp = requests.get(f"{base_url}/", timeout=5)
        if resp.status_code == 200:
            print(f"✅ Server is running (version {resp.json().get('version', '?')})")
            return True
        print(f"⚠️  Server responded with status {resp.status_code}")
        return False
    except requests.exceptions.ConnectionError:
        print(f"❌ Cannot connect to server at {base_url}")
        print("   Run: python main.py")
        return False


def call(name: str, method: str, url: str, expected: List[int], payload: Optional[Dict[str, Any]] = None,
         timeout: float = 120.0) -> Tuple[CheckResult, Optional[Dict[str, Any]]]:
    print(f"\n▶ {name}")
    try:
        resp = requests.request(method, url, json=payload, timeout=timeout)
    except requests.exceptions.RequestException as e:
        return CheckResult(name, False, f"Exception: {e}"), None
    pretty_print_response(resp)
    ok = resp.status_code in expected
    detail = f"Status {resp.status_code}" + ("" if ok else f", expected {expected}")
    try:
        body = resp.json()
    except ValueError:
        body = None
    return CheckResult(name, ok, detail), body


def run_all_checks(base_url: str) -> int:
    if not check_connection(base_url):
        print("\n❌ Aborting: server not reachable.")
        return 1
    api = f"{base_url}{API_PREFIX}"
    results: List[CheckResult] = []

    results.append(call("GET /health", "GET", f"{api}/health", [200])[0])

    result, body = call("POST /designs/evaluate (nominal)", "POST", f"{api}/designs/evaluate", [200],
                        {"n": 7, "m": 4, "lambda": 0.9})
    if result.success and body and not body['data']['feasible']:
        result = CheckResult(result.name, False, "nominal design reported infeasible")
    results.append(result)

    results.append(call("POST /designs/evaluate (bad lambda)", "POST", f"{api}/designs/evaluate", [400],
                        {"n": 7, "m": 4, "lambda": 0.4})[0])
    results.append(call("POST /designs/sweep (n=7 column)", "POST", f"{api}/designs/sweep", [200],
                        {"n_range": [7, 7], "m_range": [2, 6]})[0])
    results.append(call("POST /energy/curve", "POST", f"{api}/energy/curve", [200],
                        {"v_min": 0.05, "v_max": 1.5, "v_step": 0.05})[0])
    results.append(call("POST /simulations (hover 20 s)", "POST", f"{api}/simulations", [200],
                        {"duration_s": 20.0, "sma_window_s": 1.0})[0])

    print("\n" + "=" * 70)
    print("📊 SMOKE RUN SUMMARY")
    print("=" * 70)
    failed = 0
    for r in results:
        failed += 0 if r.success else 1
        print(f"- [{'PASS' if r.success else 'FAIL'}] {r.name} → {r.details}")
    print("=" * 70)
    print(f"✅ PASSED: {len(results) - failed}")
    print(f"❌ FAILED: {failed}")
    return 0 if failed == 0 else 1


def main(argv: Optional[List[str]] = None) -> int:
    parser = argparse.ArgumentParser(description="FoldShip service smoke client")
    parser.add_argument("--base-url", default=DEFAULT_BASE_URL)
    args = parser.parse_args(argv)
    return run_all_checks(args.base_url.rstrip("/"))


if __name__ == "__main__":
    sys.exit(main())

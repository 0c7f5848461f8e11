"""
Design Sweep - exhaustive (n, m, lambda) exploration under cave bounds

Handles:
- The evaluation grid and its cardinality
- Parallel evaluation over per-(n, m) chunks with deterministic reassembly
- Feasible subset, pair occurrence ranking and best lambda band
- Flat feasibility-map rows for external plotting

Version: 1.0.0
"""

import time
import logging
from collections import Counter
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Dict, Any, List, Optional, Tuple

import numpy as np

from core.exceptions import ConfigError
from core.mass_model import DesignEvaluation, DesignInputs, evaluate_design

logger = logging.getLogger(__name__)

Pair = Tuple[int, int]


# =================== GRID ===================

@dataclass(frozen=True)
class SweepGrid:
    """Inclusive integer ranges for n and m plus a lambda grid."""
    n_range: Tuple[int, int] = (3, 10)
    m_range: Tuple[int, int] = (2, 10)
    lambda_min: float = 0.51
    lambda_max: float = 0.90
    lambda_step: float = 0.01

    def __post_init__(self):
        for name, (lo, hi) in (("n_range", self.n_range), ("m_range", self.m_range)):
            if int(lo) != lo or int(hi) != hi or lo > hi:
                raise ConfigError(f"{name} must be an increasing integer interval (got {lo}..{hi})")
        if self.n_range[0] < 3:
            raise ConfigError(f"n_range must start at 3 or more (got {self.n_range[0]})")
        if self.m_range[0] < 1:
            raise ConfigError(f"m_range must start at 1 or more (got {self.m_range[0]})")
        if not 0.5 < self.lambda_min <= self.lambda_max <= 1.0:
            raise ConfigError(
                f"lambda grid must satisfy 0.5 < min <= max <= 1 (got {self.lambda_min}..{self.lambda_max})"
            )
        if self.lambda_step <= 0:
            raise ConfigError(f"lambda_step must be > 0 (got {self.lambda_step})")

    @classmethod
    def single_point(cls, n: int, m: int, lam: float) -> "SweepGrid":
        return cls(n_range=(n, n), m_range=(m, m), lambda_min=lam, lambda_max=lam, lambda_step=0.01)

    def n_values(self) -> List[int]:
        return list(range(int(self.n_range[0]), int(self.n_range[1]) + 1))

    def m_values(self) -> List[int]:
        return list(range(int(self.m_range[0]), int(self.m_range[1]) + 1))

    def lambda_values(self) -> List[float]:
        """Grid values rounded to 10 decimals so 0.51 + k*0.01 prints and compares cleanly."""
        count = int(round((self.lambda_max - self.lambda_min) / self.lambda_step)) + 1
        values = np.round(self.lambda_min + self.lambda_step * np.arange(count), 10)
        return [float(v) for v in values if v <= self.lambda_max + 1e-12]

    def size(self) -> int:
        return len(self.n_values()) * len(self.m_values()) * len(self.lambda_values())

    def to_dict(self) -> Dict[str, Any]:
        return {
            'n_range': list(self.n_range),
            'm_range': list(self.m_range),
            'lambda_min': self.lambda_min,
            'lambda_max': self.lambda_max,
            'lambda_step': self.lambda_step,
        }


# =================== RESULT ===================

@dataclass
class SweepResult:
    grid: SweepGrid
    evaluations: List[DesignEvaluation]
    feasible_set: List[DesignEvaluation] = field(default_factory=list)
    pair_occurrences: Dict[Pair, int] = field(default_factory=dict)
    best_pair: Optional[Pair] = None
    best_lambda_band: Optional[Tuple[float, float]] = None
    elapsed_s: float = 0.0

    @property
    def has_feasible(self) -> bool:
        return bool(self.feasible_set)

    def summary(self) -> Dict[str, Any]:
        """JSON-ready summary; a sweep with nothing feasible reports status 'no_feasible_design'."""
        ranking = rank_pairs(self)
        feasible_m = sorted({e.params.m for e in self.feasible_set})
        return {
            'status': 'ok' if self.has_feasible else 'no_feasible_design',
            'grid': self.grid.to_dict(),
            'evaluated': len(self.evaluations),
            'feasible_count': len(self.feasible_set),
            'best_pair': list(self.best_pair) if self.best_pair else None,
            'best_lambda_band': list(self.best_lambda_band) if self.best_lambda_band else None,
            'feasible_m_values': feasible_m,
            'ranking': [
                {'n': pair[0], 'm': pair[1], 'occurrences': count}
                for pair, count in ranking
            ],
        }


# =================== SWEEP ===================

def _evaluate_chunk(inputs: DesignInputs, n: int, m: int, lambdas: List[float]) -> List[DesignEvaluation]:
    """Evaluate every lambda of one (n, m) pair; runs inside worker processes."""
    return [evaluate_design(inputs, n, m, lam) for lam in lambdas]


def _sort_key(evaluation: DesignEvaluation) -> Tuple[int, int, float]:
    return (evaluation.params.n, evaluation.params.m, evaluation.params.lam)


def run_sweep(inputs: DesignInputs, grid: Optional[SweepGrid] = None, workers: int = 1) -> SweepResult:
    """
    Evaluate every grid point and rank the (n, m) pairs.

    Output order is lexicographic in (n, m, lambda) for any worker count.
    An empty feasible set is a valid result, not an error.
    """
    grid = grid or SweepGrid()
    lambdas = grid.lambda_values()
    chunks = [(n, m) for n in grid.n_values() for m in grid.m_values()]
    logger.info(f"🔍 Sweep started: {grid.size()} configurations, {len(chunks)} chunks, workers={workers}")
    started = time.perf_counter()

    evaluations: List[DesignEvaluation] = []
    if workers <= 1 or len(chunks) == 1:
        for n, m in chunks:
            evaluations.extend(_evaluate_chunk(inputs, n, m, lambdas))
    else:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            futures = [pool.submit(_evaluate_chunk, inputs, n, m, lambdas) for n, m in chunks]
            for future in futures:
                evaluations.extend(future.result())

    evaluations.sort(key=_sort_key)
    result = _assemble(grid, evaluations)
    result.elapsed_s = time.perf_counter() - started

    if result.has_feasible:
        logger.info(
            f"✅ Sweep finished in {result.elapsed_s:.2f}s: {len(result.feasible_set)}/{len(evaluations)} "
            f"feasible, best pair {result.best_pair}, lambda band {result.best_lambda_band}"
        )
    else:
        logger.warning(f"⚠️  Sweep finished in {result.elapsed_s:.2f}s: no feasible design in {len(evaluations)}")
    return result


def _assemble(grid: SweepGrid, evaluations: List[DesignEvaluation]) -> SweepResult:
    feasible = [e for e in evaluations if e.feasible]
    occurrences = Counter((e.params.n, e.params.m) for e in feasible)
    result = SweepResult(
        grid=grid,
        evaluations=evaluations,
        feasible_set=feasible,
        pair_occurrences=dict(sorted(occurrences.items())),
    )
    ranking = rank_pairs(result)
    if ranking:
        best = ranking[0][0]
        band = [e.params.lam for e in feasible if (e.params.n, e.params.m) == best]
        result.best_pair = best
        result.best_lambda_band = (min(band), max(band))
    return result


def rank_pairs(result: SweepResult) -> List[Tuple[Pair, int]]:
    """
    Feasible pairs by descending occurrence count.

    Ties go to the larger payload margin at the pair's best lambda,
    then to the smaller n (lighter exoskeleton), then the smaller m.
    """
    best_margin: Dict[Pair, float] = {}
    for e in result.feasible_set:
        pair = (e.params.n, e.params.m)
        best_margin[pair] = max(best_margin.get(pair, float('-inf')), e.extra_payload_g)

    return sorted(
        result.pair_occurrences.items(),
        key=lambda item: (-item[1], -best_margin.get(item[0], 0.0), item[0][0], item[0][1]),
    )


def feasibility_map(result: SweepResult) -> List[Dict[str, Any]]:
    """One plotting row per evaluated configuration."""
    return [
        {
            'n': e.params.n,
            'm': e.params.m,
            'lambda': e.params.lam,
            'feasible': e.feasible,
            'extra_payload_g': e.extra_payload_g,
        }
        for e in result.evaluations
    ]

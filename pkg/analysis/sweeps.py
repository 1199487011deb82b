"""
Finite-section sweeps and their convergence statistics.

A sweep evaluates one spectrum per schedule point. Points are independent, so they
run on a thread pool; rows are assembled in schedule order afterwards, which keeps
reports independent of completion order.
"""

import logging
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass, field
from typing import Any, Callable, Dict, List, Sequence, Tuple

import numpy as np

from linalg.matrix_core import sym_eig
from linalg.symplectic_core import symplectic_eigenvalues
from operators.operator_models import (
    COMMUTATION_TOL,
    HHOperatorSpec,
    HOperatorSpec,
    TruncationSchedule,
    annotations,
    truncate_h,
    truncate_hh,
)
from utils.errors import ScheduleError

logger = logging.getLogger(__name__)

SYMPLECTIC = 'symplectic'
SPECTRAL = 'spectral'


@dataclass(frozen=True)
class SweepRow:
    """Sorted values at one truncation; dimension is the order of the truncated matrix."""
    n: int
    dimension: int
    values: Tuple[float, ...]


@dataclass(frozen=True)
class SweepReport:
    kind: str                              # 'symplectic' or 'spectral'
    schedule: Tuple[int, ...]
    per_n: Tuple[SweepRow, ...]
    annotations: Dict[str, Any] = field(default_factory=dict, hash=False)

    def row(self, n: int) -> SweepRow:
        for r in self.per_n:
            if r.n == n:
                return r
        raise KeyError(n)


@dataclass(frozen=True)
class Branch:
    """d_k counted from the top (k = 1 is the largest value) across the schedule."""
    k: int
    values: Tuple[float, ...]
    delta: float
    stabilized: bool


@dataclass(frozen=True)
class ConvergenceStats:
    hausdorff_successive: Tuple[float, ...]
    branches: Tuple[Branch, ...]
    branch_tol: float


def run_points(fn: Callable[[int], Any], ns: Sequence[int], workers: int = 1) -> List[Any]:
    """
    Evaluate fn(n) for every n, results in the order of ``ns``.

    With several workers the first failure in schedule order is re-raised.
    """
    if workers <= 1 or len(ns) == 1:
        return [fn(n) for n in ns]

    results: Dict[int, Any] = {}
    failures: Dict[int, BaseException] = {}
    with ThreadPoolExecutor(max_workers=min(workers, len(ns))) as executor:
        futures = {executor.submit(fn, n): n for n in ns}
        for future in as_completed(futures):
            n = futures[future]
            try:
                results[n] = future.result()
                logger.debug(f"n={n}: done")
            except Exception as e:
                failures[n] = e

    for n in ns:
        if n in failures:
            logger.error(f"n={n}: {failures[n]}")
            raise failures[n]
    return [results[n] for n in ns]


def _as_row(n: int, dimension: int, values: np.ndarray) -> SweepRow:
    return SweepRow(n=int(n), dimension=int(dimension), values=tuple(float(v) for v in np.sort(values)))


def symplectic_sweep(
    spec: HHOperatorSpec,
    schedule: TruncationSchedule,
    workers: int = 1,
    ctol: float = COMMUTATION_TOL
) -> SweepReport:
    """
    Symplectic eigenvalues of the 2n x 2n truncation at every schedule point.

    Args:
        spec: HH operator spec
        schedule: Half-dimensions n
        workers: Thread count
        ctol: Relative commutation tolerance for class A/B specs

    Returns:
        SweepReport of kind 'symplectic'
    """
    def point(n: int) -> SweepRow:
        return _as_row(n, 2 * n, symplectic_eigenvalues(truncate_hh(spec, n, ctol)))

    logger.info(f"Symplectic sweep over n={list(schedule.ns)} ({workers} workers)")
    rows = run_points(point, schedule.ns, workers)
    return SweepReport(SYMPLECTIC, schedule.ns, tuple(rows), annotations(spec))


def spectral_sweep(spec: HOperatorSpec, schedule: TruncationSchedule, workers: int = 1) -> SweepReport:
    """Ordinary eigenvalues of the n x n truncation at every schedule point."""
    def point(n: int) -> SweepRow:
        return _as_row(n, n, sym_eig(truncate_h(spec, n)).eigenvalues)

    logger.info(f"Spectral sweep over n={list(schedule.ns)} ({workers} workers)")
    rows = run_points(point, schedule.ns, workers)
    return SweepReport(SPECTRAL, schedule.ns, tuple(rows), annotations(spec))


def _nearest_gaps(points: np.ndarray, ref: np.ndarray) -> np.ndarray:
    """Distance from each point to the nearest element of sorted ``ref``."""
    idx = np.searchsorted(ref, points)
    below = ref[np.clip(idx - 1, 0, len(ref) - 1)]
    above = ref[np.clip(idx, 0, len(ref) - 1)]
    return np.minimum(np.abs(points - below), np.abs(points - above))


def hausdorff(xs: Sequence[float], ys: Sequence[float]) -> float:
    """
    Hausdorff distance between two finite point sets on the real line.

    Raises:
        ValueError: either set is empty
    """
    x = np.sort(np.asarray(xs, dtype=np.float64))
    y = np.sort(np.asarray(ys, dtype=np.float64))
    if x.size == 0 or y.size == 0:
        raise ValueError("Hausdorff distance needs two nonempty sets")
    return float(max(_nearest_gaps(x, y).max(), _nearest_gaps(y, x).max()))


def convergence_stats(report: SweepReport, branch_tol: float = 1e-9) -> ConvergenceStats:
    """
    Successive Hausdorff distances and per-branch stabilization.

    Branches are indexed from the largest value down, one per value present in
    both of the last two rows; a branch covers every row long enough to contain
    it and is stabilized when its last step moved less than ``branch_tol``.

    Raises:
        ScheduleError: fewer than two schedule points
    """
    rows = report.per_n
    if len(rows) < 2:
        raise ScheduleError("Convergence statistics need at least two schedule points")

    distances = tuple(hausdorff(a.values, b.values) for a, b in zip(rows, rows[1:]))

    branches = []
    depth = min(len(rows[-1].values), len(rows[-2].values))
    for k in range(1, depth + 1):
        series = tuple(r.values[-k] for r in rows if len(r.values) >= k)
        delta = abs(series[-1] - series[-2])
        branches.append(Branch(k, series, delta, delta < branch_tol))

    stable = sum(b.stabilized for b in branches)
    logger.info(f"Convergence: last Hausdorff step {distances[-1]:.3e}, {stable}/{len(branches)} branches stabilized")
    return ConvergenceStats(distances, tuple(branches), branch_tol)

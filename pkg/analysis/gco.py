"""
Numerical evidence for the three Gaussian covariance operator conditions.

For T in class A ([A 0; 0 B]) or class B ([A B; B A], reduced by the orthosymplectic
rotation to [A+B 0; 0 A-B]) write P, Q for the commuting diagonal blocks. Then

    cond1  P >= Q^-1                  (positivity of S - iJ)
    cond2  P - I, Q - I Hilbert-Schmidt
    cond3  PQ - I trace class

Series conditions are judged by a stagnation rule over partial sums at checkpoints:
normalized increments delta_j = (S_j - S_{j-1}) / log2(N_j / N_{j-1}) over the last
``stagnation_window`` steps must each fall below the tail tolerance, or contract
geometrically (delta_j <= contraction * delta_{j-1}).
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np
import scipy.linalg

from linalg.matrix_core import inv_spd, sym_eig
from operators.operator_models import (
    COMMUTATION_TOL,
    ClassA,
    ClassB,
    Doubled,
    HHOperatorSpec,
    Product,
    TruncationSchedule,
    annotations,
    check_commuting,
    component_specs,
    diagonal_entries,
    is_diagonal,
    truncate_h,
)
from utils.errors import ScheduleError, SpecFormatError
from utils.schedule_parser import ScheduleParser

logger = logging.getLogger(__name__)

PASS = 'pass'
FAIL = 'fail'
EVIDENCE_ONLY = 'evidence-only'

POSITIVITY_TOL = 1e-9


@dataclass(frozen=True)
class GcoParams:
    schedule: TruncationSchedule
    hs_tail_tol: float = 1e-10
    trace_tail_tol: float = 1e-10
    stagnation_window: int = 3
    contraction: float = 0.75
    series_start: int = 16
    series_cap: int = 65536
    ctol: float = COMMUTATION_TOL


@dataclass(frozen=True)
class ConditionResult:
    """Verdict plus its evidence series of (n or N, value) pairs."""
    verdict: str
    series: Tuple[Tuple[int, float], ...]
    method: str


@dataclass(frozen=True)
class GcoReport:
    spec_class: str
    cond1: ConditionResult
    cond2: ConditionResult
    cond3: ConditionResult
    overall: bool
    annotations: Dict[str, Any] = field(default_factory=dict, hash=False)

    @property
    def verdicts(self) -> List[str]:
        return [self.cond1.verdict, self.cond2.verdict, self.cond3.verdict]


def stagnates(
    checkpoints: Sequence[int],
    sums: Sequence[float],
    tail_tol: float,
    window: int,
    contraction: float
) -> bool:
    """
    Stagnation rule over partial sums taken at increasing checkpoints.

    Raises:
        ScheduleError: fewer than window + 1 checkpoints
    """
    if window < 1:
        raise ValueError(f"stagnation window must be >= 1, got {window}")
    if len(checkpoints) < window + 1:
        raise ScheduleError(
            f"Stagnation window {window} needs {window + 1} checkpoints, got {len(checkpoints)}"
        )

    points = np.asarray(checkpoints, dtype=np.float64)
    values = np.asarray(sums, dtype=np.float64)
    deltas = np.diff(values) / np.log2(points[1:] / points[:-1])
    tail = deltas[-window:]

    if np.all(tail < tail_tol):
        return True
    return window > 1 and bool(np.all(tail[1:] <= contraction * tail[:-1]))


def _pair(spec: HHOperatorSpec):
    if isinstance(spec, (ClassA, Doubled)):
        label = 'class_a'
    elif isinstance(spec, ClassB):
        label = 'class_b'
    else:
        raise SpecFormatError(f"GCO check needs a class A or class B spec, got {type(spec).__name__}")
    p, q = component_specs(spec)
    return label, p, q, getattr(spec, 'assume_commuting', False)


def _positivity(p, q, params: GcoParams, assume_commuting: bool) -> ConditionResult:
    series = []
    for n in params.schedule:
        p_n = truncate_h(p, n)
        q_n = truncate_h(q, n)
        check_commuting(p_n, q_n, f"GCO pair at n={n}", assume_commuting, params.ctol)
        lam = float(sym_eig(p_n - inv_spd(q_n)).eigenvalues[0])
        series.append((n, lam))
        logger.debug(f"cond1 n={n}: lambda_min = {lam:.6e}")

    positive = all(lam >= -POSITIVITY_TOL for _, lam in series)
    if is_diagonal(q):
        verdict = PASS if positive else FAIL
        method = 'truncated inverse (exact for diagonal second block)'
    else:
        verdict = EVIDENCE_ONLY
        method = 'truncated inverse (truncation and inversion do not commute)'
        logger.warning("cond1 downgraded to evidence-only: second block is not diagonal")
    return ConditionResult(verdict, tuple(series), method)


def _diagonal_series(summands: np.ndarray, checkpoints: List[int]) -> Tuple[Tuple[int, float], ...]:
    totals = np.cumsum(summands)
    return tuple((n, float(totals[n - 1])) for n in checkpoints)


def _verdict(series, tail_tol: float, params: GcoParams) -> str:
    checkpoints = [n for n, _ in series]
    sums = [s for _, s in series]
    ok = stagnates(checkpoints, sums, tail_tol, params.stagnation_window, params.contraction)
    return PASS if ok else FAIL


def gco_check(spec: HHOperatorSpec, params: GcoParams) -> GcoReport:
    """
    Gather evidence for the three GCO conditions.

    Args:
        spec: ClassA, ClassB or Doubled spec
        params: Schedule, tolerances and stagnation parameters

    Returns:
        GcoReport; overall is true only when all three conditions pass

    Raises:
        SpecFormatError: spec is not class A or class B
        ScheduleError: too few checkpoints for the stagnation window
    """
    label, p, q, assume_commuting = _pair(spec)
    window = params.stagnation_window
    diagonal = is_diagonal(p) and is_diagonal(q)

    if diagonal:
        checkpoints = ScheduleParser.dyadic(params.series_start, params.series_cap)
    else:
        checkpoints = list(params.schedule.ns)
    if len(checkpoints) < window + 1:
        raise ScheduleError(
            f"Stagnation window {window} needs {window + 1} checkpoints, got {len(checkpoints)}"
        )

    logger.info(f"GCO check on {label} spec ({'diagonal' if diagonal else 'banded'} blocks)")
    cond1 = _positivity(p, q, params, assume_commuting)

    if diagonal:
        count = checkpoints[-1]
        p_diag = diagonal_entries(p, count)
        q_diag = diagonal_entries(q, count)
        hs = _diagonal_series((p_diag - 1.0) ** 2 + (q_diag - 1.0) ** 2, checkpoints)
        trace = _diagonal_series(np.abs(p_diag * q_diag - 1.0), checkpoints)
        cond2 = ConditionResult(_verdict(hs, params.hs_tail_tol, params), hs, 'diagonal partial sums')
        cond3 = ConditionResult(_verdict(trace, params.trace_tail_tol, params), trace,
                                'diagonal partial sums')
    else:
        product = Product(p, q, assume_commuting=True)
        hs_rows, trace_rows = [], []
        for n in checkpoints:
            eye = np.eye(n)
            p_n = truncate_h(p, n) - eye
            q_n = truncate_h(q, n) - eye
            hs_rows.append((n, float(np.sum(p_n * p_n) + np.sum(q_n * q_n))))
            trace_rows.append((n, float(np.sum(scipy.linalg.svdvals(truncate_h(product, n) - eye)))))
        hs = tuple(hs_rows)
        trace = tuple(trace_rows)
        cond2 = ConditionResult(_verdict(hs, params.hs_tail_tol, params), hs, 'truncation Frobenius norms')
        trace_verdict = _verdict(trace, params.trace_tail_tol, params)
        if trace_verdict == PASS:
            trace_verdict = EVIDENCE_ONLY
        cond3 = ConditionResult(trace_verdict, trace, 'truncation nuclear norms')

    overall = all(c.verdict == PASS for c in (cond1, cond2, cond3))
    for name, cond in (('cond1', cond1), ('cond2', cond2), ('cond3', cond3)):
        logger.info(f"  {name}: {cond.verdict} ({cond.method})")
    logger.info(f"GCO overall: {'pass' if overall else 'not certified'}")
    return GcoReport(label, cond1, cond2, cond3, overall, annotations(spec))

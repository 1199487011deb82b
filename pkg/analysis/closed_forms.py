"""
Closed-form symplectic spectra for class A and class B blocks, the spectral
inclusion check for commuting pairs, and the [m, M] bounds check.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, Tuple

import numpy as np

from linalg.matrix_core import DenseMatrix, require_spd, sqrt_from_eig, sym_eig, symmetrize
from linalg.symplectic_core import half_order, symplectic_eigenvalues
from operators.operator_models import (
    COMMUTATION_TOL,
    HHOperatorSpec,
    TruncationSchedule,
    annotations,
    check_commuting,
    truncate_hh,
)

logger = logging.getLogger(__name__)

BOUNDS_SLACK = 1e-9


def _sorted_product_spectrum(p: DenseMatrix, q: DenseMatrix, label: str, ctol: float) -> np.ndarray:
    """Ascending eigenvalues of sym(sqrt(P) sqrt(Q)) for commuting SPD P, Q."""
    p = symmetrize(p, f"{label} first factor")
    q = symmetrize(q, f"{label} second factor")
    check_commuting(p, q, label, assume_commuting=False, ctol=ctol)
    root_p = sqrt_from_eig(require_spd(p, f"{label} first factor"))
    root_q = sqrt_from_eig(require_spd(q, f"{label} second factor"))
    product = root_p @ root_q
    return np.array(sym_eig(0.5 * (product + product.T)).eigenvalues)


def class_a_closed_form(a: DenseMatrix, b: DenseMatrix, ctol: float = COMMUTATION_TOL) -> np.ndarray:
    """
    Symplectic spectrum of [A 0; 0 B] as the spectrum of sqrt(A) sqrt(B).

    Raises:
        CommutationError: ||AB - BA||_F > ctol ||A||_F ||B||_F
        NotPositiveDefiniteError: A or B not SPD
    """
    return _sorted_product_spectrum(a, b, 'class A', ctol)


def class_b_closed_form(a: DenseMatrix, b: DenseMatrix, ctol: float = COMMUTATION_TOL) -> np.ndarray:
    """Symplectic spectrum of [A B; B A] as the spectrum of sqrt(A+B) sqrt(A-B)."""
    return _sorted_product_spectrum(a + b, a - b, 'class B', ctol)


def spectral_inclusion_gap(x: DenseMatrix, y: DenseMatrix) -> float:
    """
    Largest distance from an eigenvalue of XY to the product set {lambda_i(X) mu_j(Y)}.

    X and Y are symmetric and expected to commute, so XY is symmetric too.
    """
    lam = sym_eig(x).eigenvalues
    mu = sym_eig(y).eigenvalues
    products = np.outer(lam, mu).ravel()
    xy = x @ y
    spectrum = sym_eig(0.5 * (xy + xy.T)).eigenvalues
    gaps = np.min(np.abs(spectrum[:, None] - products[None, :]), axis=1)
    return float(gaps.max())


@dataclass(frozen=True)
class BoundViolation:
    n: int
    k: int
    d_k: float
    excess: float


@dataclass(frozen=True)
class BoundsReport:
    """m, M are the extreme eigenvalues of the (largest) truncation checked."""
    m: float
    M: float
    violations: Tuple[BoundViolation, ...]
    annotations: Dict[str, Any] = field(default_factory=dict, hash=False)

    @property
    def ok(self) -> bool:
        return not self.violations


def _violations(t: DenseMatrix, n: int, slack: float) -> Tuple[float, float, Tuple[BoundViolation, ...]]:
    eig = require_spd(t, 'T')
    lo, hi = float(eig.eigenvalues[0]), float(eig.eigenvalues[-1])
    d = symplectic_eigenvalues(t)
    lower, upper = lo - slack * hi, hi + slack * hi

    found = []
    for k, value in enumerate(d, start=1):
        if value < lower:
            found.append(BoundViolation(n, k, float(value), float(lower - value)))
        elif value > upper:
            found.append(BoundViolation(n, k, float(value), float(value - upper)))
    return lo, hi, tuple(found)


def bounds_check(t: DenseMatrix, slack: float = BOUNDS_SLACK) -> BoundsReport:
    """
    Check every symplectic eigenvalue of T lies in [lambda_min(T), lambda_max(T)].

    Args:
        t: SPD matrix of even order
        slack: Allowance relative to lambda_max

    Returns:
        BoundsReport, violations empty for valid input
    """
    n = half_order(t, 'T')
    lo, hi, found = _violations(t, n, slack)
    if found:
        logger.warning(f"{len(found)} symplectic eigenvalues outside [{lo:.6g}, {hi:.6g}]")
    return BoundsReport(lo, hi, found)


def bounds_sweep(
    spec: HHOperatorSpec,
    schedule: TruncationSchedule,
    slack: float = BOUNDS_SLACK,
    ctol: float = COMMUTATION_TOL
) -> BoundsReport:
    """Bounds check at every schedule point; m, M are taken from the largest truncation."""
    violations = []
    lo = hi = float('nan')
    for n in schedule:
        lo, hi, found = _violations(truncate_hh(spec, n, ctol), n, slack)
        violations.extend(found)
        logger.debug(f"n={n}: spectrum [{lo:.6g}, {hi:.6g}], {len(found)} violations")
    if violations:
        logger.warning(f"{len(violations)} bound violations across the sweep")
    return BoundsReport(lo, hi, tuple(violations), annotations(spec))

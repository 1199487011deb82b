"""
Dense real matrix arithmetic and symmetric eigendecomposition.

Matrices are plain 2-D ``numpy`` float64 arrays. ``as_matrix`` is the checked
constructor; everything downstream assumes its invariants (finite entries,
two dimensions) and never mutates its inputs.
"""

import logging
from dataclasses import dataclass
from typing import Optional

import numpy as np
import scipy.linalg

from utils.errors import (
    DimensionError,
    NonConvergenceError,
    NotPositiveDefiniteError,
    NotSymmetricError,
)

logger = logging.getLogger(__name__)

DenseMatrix = np.ndarray

SYMMETRY_TOL = 1e-12
PSD_CLAMP_TOL = 1e-10
SPD_TOL = 1e-12
JACOBI_OFFDIAG_TOL = 1e-14


@dataclass(frozen=True)
class EigensolverOptions:
    """Process-wide eigensolver configuration."""
    method: str = 'auto'          # 'auto', 'jacobi' or 'lapack'
    jacobi_max_order: int = 32    # 'auto' uses Jacobi up to this order
    max_sweeps: int = 100


_solver_options = EigensolverOptions()


def init_eigensolver(
    method: str = 'auto',
    jacobi_max_order: int = 32,
    max_sweeps: int = 100
) -> EigensolverOptions:
    """
    Install the eigensolver options used when ``sym_eig`` gets no explicit method.

    Args:
        method: 'auto', 'jacobi' or 'lapack'
        jacobi_max_order: Largest order handled by Jacobi under 'auto'
        max_sweeps: Sweep limit for the Jacobi iteration

    Returns:
        The installed options
    """
    global _solver_options
    if method not in ('auto', 'jacobi', 'lapack'):
        raise ValueError(f"Unknown eigensolver method: {method}")
    _solver_options = EigensolverOptions(method, jacobi_max_order, max_sweeps)
    logger.debug(f"Eigensolver configured: {_solver_options}")
    return _solver_options


def get_eigensolver() -> EigensolverOptions:
    return _solver_options


@dataclass(frozen=True)
class SymEigResult:
    """Eigenvalues in ascending order and the orthogonal matrix of eigenvectors (columns)."""
    eigenvalues: np.ndarray
    vectors: DenseMatrix


def as_matrix(data, name: str = 'matrix') -> DenseMatrix:
    """
    Build a validated read-only float64 matrix.

    Args:
        data: Nested sequence or array
        name: Label used in error messages

    Returns:
        2-D float64 array with all entries finite
    """
    arr = np.array(data, dtype=np.float64)
    if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
        raise DimensionError(f"{name} must be a non-empty 2-D matrix, got shape {arr.shape}")
    if not np.all(np.isfinite(arr)):
        raise DimensionError(f"{name} has non-finite entries")
    arr.setflags(write=False)
    return arr


def identity(n: int) -> DenseMatrix:
    return np.eye(n)


def transpose(s: DenseMatrix) -> DenseMatrix:
    return np.ascontiguousarray(s.T)


def frobenius(s: DenseMatrix) -> float:
    return float(np.linalg.norm(s, 'fro'))


def mat_mul(a: DenseMatrix, b: DenseMatrix) -> DenseMatrix:
    if a.shape[1] != b.shape[0]:
        raise DimensionError(f"Cannot multiply {a.shape} by {b.shape}")
    return a @ b


def require_square(s: DenseMatrix, name: str = 'matrix') -> int:
    if s.ndim != 2 or s.shape[0] != s.shape[1]:
        raise DimensionError(f"{name} must be square, got shape {s.shape}")
    return s.shape[0]


def symmetrize(s: DenseMatrix, name: str = 'matrix') -> DenseMatrix:
    """
    Return (S + S^T)/2 after checking S is symmetric up to rounding.

    Raises:
        NotSymmetricError: if ||S - S^T||_inf > 1e-12 * ||S||_inf
    """
    require_square(s, name)
    scale = np.linalg.norm(s, np.inf)
    asym = np.linalg.norm(s - s.T, np.inf)
    if asym > SYMMETRY_TOL * scale:
        raise NotSymmetricError(f"{name} is not symmetric (asymmetry {asym:.3e}, scale {scale:.3e})")
    return 0.5 * (s + s.T)


def _jacobi_eigh(s: DenseMatrix, max_sweeps: int):
    """Cyclic Jacobi rotations on a symmetric matrix; returns unsorted (values, vectors)."""
    a = np.array(s, dtype=np.float64)
    n = a.shape[0]
    v = np.eye(n)
    scale = np.linalg.norm(a, 'fro')
    if scale == 0.0 or n == 1:
        return np.diag(a).copy(), v

    threshold = JACOBI_OFFDIAG_TOL * scale
    skip_below = 0.01 * threshold
    upper = np.triu_indices(n, 1)

    for sweep in range(max_sweeps + 1):
        off = np.max(np.abs(a[upper]))
        if off < threshold:
            logger.debug(f"Jacobi converged after {sweep} sweeps (order {n})")
            return np.diag(a).copy(), v
        if sweep == max_sweeps:
            break

        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                if abs(apq) <= skip_below:
                    continue
                theta = (a[q, q] - a[p, p]) / (2.0 * apq)
                t = 1.0 / (abs(theta) + np.sqrt(theta * theta + 1.0))
                if theta < 0.0:
                    t = -t
                c = 1.0 / np.sqrt(t * t + 1.0)
                s_ = t * c

                col_p = a[:, p].copy()
                col_q = a[:, q].copy()
                a[:, p] = c * col_p - s_ * col_q
                a[:, q] = s_ * col_p + c * col_q

                row_p = a[p, :].copy()
                row_q = a[q, :].copy()
                a[p, :] = c * row_p - s_ * row_q
                a[q, :] = s_ * row_p + c * row_q
                a[p, q] = a[q, p] = 0.0

                vec_p = v[:, p].copy()
                vec_q = v[:, q].copy()
                v[:, p] = c * vec_p - s_ * vec_q
                v[:, q] = s_ * vec_p + c * vec_q

    raise NonConvergenceError(
        f"Jacobi iteration did not converge in {max_sweeps} sweeps (order {n}, off-diagonal {off:.3e})"
    )


def sym_eig(
    s: DenseMatrix,
    method: Optional[str] = None,
    max_sweeps: Optional[int] = None
) -> SymEigResult:
    """
    Eigendecomposition of a symmetric matrix.

    Args:
        s: Square matrix, symmetric up to 1e-12 relative
        method: 'jacobi', 'lapack' or 'auto' (default: the installed options)
        max_sweeps: Jacobi sweep limit (default: the installed options)

    Returns:
        SymEigResult with ascending eigenvalues

    Raises:
        DimensionError: non-square input
        NotSymmetricError: asymmetric beyond tolerance
        NonConvergenceError: Jacobi exceeded its sweep limit
    """
    sym = symmetrize(s)
    options = get_eigensolver()
    method = method or options.method
    max_sweeps = options.max_sweeps if max_sweeps is None else max_sweeps

    if method == 'auto':
        method = 'jacobi' if sym.shape[0] <= options.jacobi_max_order else 'lapack'

    if method == 'jacobi':
        values, vectors = _jacobi_eigh(sym, max_sweeps)
        order = np.argsort(values, kind='stable')
        values = values[order]
        vectors = vectors[:, order]
    elif method == 'lapack':
        values, vectors = scipy.linalg.eigh(sym)
    else:
        raise ValueError(f"Unknown eigensolver method: {method}")

    values.setflags(write=False)
    vectors.setflags(write=False)
    return SymEigResult(eigenvalues=values, vectors=vectors)


def _spectral_scale(values: np.ndarray) -> float:
    return float(np.max(np.abs(values))) if values.size else 0.0


def require_spd(s: DenseMatrix, name: str = 'matrix') -> SymEigResult:
    """
    Eigendecompose ``s`` and check it is symmetric positive definite.

    Raises:
        NotPositiveDefiniteError: if lambda_min <= 1e-12 * ||s||
    """
    eig = sym_eig(s)
    lam_min = float(eig.eigenvalues[0])
    scale = _spectral_scale(eig.eigenvalues)
    if scale == 0.0 or lam_min <= SPD_TOL * scale:
        raise NotPositiveDefiniteError(
            f"{name} is not positive definite (lambda_min={lam_min:.6e}, scale={scale:.6e})"
        )
    return eig


def _compose(eig: SymEigResult, values: np.ndarray) -> DenseMatrix:
    q = eig.vectors
    out = (q * values) @ q.T
    return 0.5 * (out + out.T)


def sqrt_from_eig(eig: SymEigResult) -> DenseMatrix:
    """Square root from a precomputed decomposition, clamping negative eigenvalues to 0."""
    return _compose(eig, np.sqrt(np.clip(eig.eigenvalues, 0.0, None)))


def sqrt_psd(s: DenseMatrix) -> DenseMatrix:
    """
    Symmetric positive semidefinite square root.

    Args:
        s: Symmetric PSD matrix (lambda_min >= -1e-10 * ||s||)

    Returns:
        Symmetric PSD R with R @ R ~= s

    Raises:
        NotPositiveDefiniteError: genuinely indefinite input
    """
    eig = sym_eig(s)
    lam_min = float(eig.eigenvalues[0])
    scale = _spectral_scale(eig.eigenvalues)
    if lam_min < -PSD_CLAMP_TOL * scale:
        raise NotPositiveDefiniteError(
            f"Matrix is not positive semidefinite (lambda_min={lam_min:.6e}, scale={scale:.6e})"
        )
    return sqrt_from_eig(eig)


def inv_spd(s: DenseMatrix) -> DenseMatrix:
    """
    Inverse of a symmetric positive definite matrix via its eigendecomposition.

    Raises:
        NotPositiveDefiniteError: singular or indefinite input
    """
    eig = require_spd(s)
    return _compose(eig, 1.0 / eig.eigenvalues)


def random_spd(
    order: int,
    rng: np.random.Generator,
    condition: float = 10.0
) -> DenseMatrix:
    """
    Random SPD matrix with eigenvalues log-spaced on [1, condition].

    Args:
        order: Matrix order
        rng: Seeded generator
        condition: Target condition number (>= 1)

    Returns:
        Symmetric positive definite matrix
    """
    q, r = np.linalg.qr(rng.standard_normal((order, order)))
    q = q * np.sign(np.diag(r))
    values = np.logspace(0.0, np.log10(condition), order) if order > 1 else np.ones(1)
    out = (q * values) @ q.T
    return 0.5 * (out + out.T)


def random_symmetric(order: int, rng: np.random.Generator, scale: float = 1.0) -> DenseMatrix:
    g = rng.standard_normal((order, order)) * scale
    return 0.5 * (g + g.T)

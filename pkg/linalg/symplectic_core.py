"""
Symplectic form, symplectic eigenvalues and the Williamson normal form.

Block convention: the basis of H+H is ordered as all first-component vectors, then all
second-component vectors, so J = [[0, I], [-I, 0]].
"""

import logging
from dataclasses import dataclass

import numpy as np
import scipy.linalg

from linalg.matrix_core import (
    DenseMatrix,
    frobenius,
    require_spd,
    require_square,
    sqrt_from_eig,
    symmetrize,
)
from utils.errors import DegeneracyError, DimensionError, NotSymplecticError, PairingError

logger = logging.getLogger(__name__)

PAIRING_TOL = 1e-7
SYMPLECTIC_TOL = 1e-8
CLUSTER_TOL = 1e-9


@dataclass(frozen=True)
class WilliamsonResult:
    """
    T = M^T diag(d, d) M with M symplectic.

    d is sorted ascending; residual is ||M^T diag(d,d) M - T||_F / ||T||_F.
    """
    d: np.ndarray
    M: DenseMatrix
    residual: float


def half_order(m: DenseMatrix, name: str = 'matrix') -> int:
    order = require_square(m, name)
    if order % 2:
        raise DimensionError(f"{name} must have even order, got {order}")
    return order // 2


def symplectic_form(n: int) -> DenseMatrix:
    """J = [[0, I_n], [-I_n, 0]]."""
    eye = np.eye(n)
    zero = np.zeros((n, n))
    return np.block([[zero, eye], [-eye, zero]])


def symplectic_defect(m: DenseMatrix) -> float:
    """||M^T J M - J||_F."""
    j = symplectic_form(half_order(m))
    return frobenius(m.T @ j @ m - j)


def is_symplectic(m: DenseMatrix, tol: float = SYMPLECTIC_TOL) -> bool:
    return symplectic_defect(m) <= tol


def is_orthosymplectic(m: DenseMatrix, tol: float = SYMPLECTIC_TOL) -> bool:
    """Symplectic and orthogonal at once (preserves every GCO condition)."""
    orth = frobenius(m.T @ m - np.eye(m.shape[0]))
    return orth <= tol and is_symplectic(m, tol)


def class_b_rotation(n: int) -> DenseMatrix:
    """L = (1/sqrt 2)[[I, -I], [I, I]], which takes [[A, B], [B, A]] to [[A+B, 0], [0, A-B]]."""
    eye = np.eye(n)
    return np.block([[eye, -eye], [eye, eye]]) / np.sqrt(2.0)


def _skew_form(t: DenseMatrix):
    """Return (n, eig of t, sqrt(t), K = sqrt(t) J sqrt(t))."""
    n = half_order(t, 'T')
    eig = require_spd(t, 'T')
    root = sqrt_from_eig(eig)
    k = root @ symplectic_form(n) @ root
    k = 0.5 * (k - k.T)
    return n, eig, root, k


def _pair_up(values: np.ndarray, n: int) -> np.ndarray:
    """Collapse 2n ascending values into n pair means, checking each pair matches."""
    values = np.sort(values)
    first, second = values[0::2], values[1::2]
    scale = float(values[-1])
    gap = np.abs(second - first)
    allowed = PAIRING_TOL * np.maximum(second, 1e-3 * scale)
    bad = np.nonzero(gap > allowed)[0]
    if bad.size:
        k = int(bad[0])
        raise PairingError(
            f"Symplectic eigenvalue candidates do not pair: {first[k]:.12g} vs {second[k]:.12g}"
        )
    return 0.5 * (first + second)


def symplectic_eigenvalues(t: DenseMatrix) -> np.ndarray:
    """
    Symplectic eigenvalues of an SPD matrix of even order.

    The skew-symmetric K = sqrt(T) J sqrt(T) has singular values d_1, d_1, ..., d_n, d_n
    (equivalently -K^2 = K^T K has eigenvalues d_k^2, each twice). Singular values are
    taken directly so that the spread of T is not squared.

    Args:
        t: SPD matrix of order 2n

    Returns:
        n symplectic eigenvalues, ascending

    Raises:
        DimensionError: odd order
        NotPositiveDefiniteError: T not SPD
        PairingError: candidates failed to pair within 1e-7 relative
    """
    n, _, _, k = _skew_form(t)
    singular = scipy.linalg.svdvals(k)
    return _pair_up(singular, n)


def _canonical_basis(k: DenseMatrix, n: int):
    """
    Orthogonal O with O^T K O = [[0, L], [-L, 0]], L = diag(d) ascending.

    Real Schur form of a skew-symmetric matrix is block diagonal with 2x2 blocks
    [[0, b], [-b, 0]]; each block yields a pair (u, v) with u^T K v = |b|.
    """
    quasi, z = scipy.linalg.schur(k, output='real')
    order = 2 * n
    offdiag_floor = 1e-13 * max(float(np.max(np.abs(quasi))), 1e-300)

    us, vs, ds = [], [], []
    i = 0
    while i < order:
        if i + 1 >= order or abs(quasi[i + 1, i]) <= offdiag_floor:
            raise DegeneracyError(f"Skew form has no 2x2 block at position {i}")
        upper, lower = quasi[i, i + 1], quasi[i + 1, i]
        d = float(np.sqrt(max(-upper * lower, 0.0)))
        if upper > 0:
            us.append(z[:, i])
            vs.append(z[:, i + 1])
        else:
            us.append(z[:, i + 1])
            vs.append(z[:, i])
        ds.append(d)
        i += 2

    ds = np.array(ds)
    order_idx = np.argsort(ds, kind='stable')
    u = np.column_stack(us)[:, order_idx]
    v = np.column_stack(vs)[:, order_idx]
    return np.hstack([u, v]), ds[order_idx]


def _clusters(d: np.ndarray):
    """Index ranges of ascending d whose neighbours agree within CLUSTER_TOL relative."""
    bounds = [0]
    for j in range(1, len(d)):
        if d[j] - d[j - 1] > CLUSTER_TOL * d[j]:
            bounds.append(j)
    bounds.append(len(d))
    return [slice(a, b) for a, b in zip(bounds, bounds[1:])]


def _fix_rotation(o: DenseMatrix, root: DenseMatrix, d: np.ndarray, n: int) -> DenseMatrix:
    """
    Within a cluster of equal d the pairs (u_j, v_j) are determined only up to a unitary
    W acting on z_j = u_j + i v_j. Pick the W that maximizes the trace of the cluster's
    diagonal block of M, so inputs already in normal form give M = I.
    """
    z = o[:, :n] + 1j * o[:, n:]
    target = root[:, :n] + 1j * root[:, n:]
    out = np.empty_like(z)
    for cluster in _clusters(d):
        overlap = z[:, cluster].conj().T @ target[:, cluster]
        left, _, right_h = np.linalg.svd(overlap)
        out[:, cluster] = z[:, cluster] @ (left @ right_h)
    return np.hstack([out.real, out.imag])


def williamson(t: DenseMatrix) -> WilliamsonResult:
    """
    Williamson normal form T = M^T diag(d, d) M.

    With K = sqrt(T) J sqrt(T) brought to canonical form by an orthogonal O,
    S = sqrt(T)^-1 O diag(d, d)^(1/2) is symplectic with S^T T S = diag(d, d),
    and M = S^-1 = diag(d, d)^(-1/2) O^T sqrt(T).
    d itself comes from the singular values of K, exactly as in symplectic_eigenvalues.

    Args:
        t: SPD matrix of order 2n

    Returns:
        WilliamsonResult with ascending d

    Raises:
        NotPositiveDefiniteError: T not SPD
        PairingError: singular values of K failed to pair
        DegeneracyError: canonical blocks could not be resolved
    """
    t = symmetrize(t, 'T')
    n, _, root, k = _skew_form(t)
    o, _ = _canonical_basis(k, n)
    d = _pair_up(scipy.linalg.svdvals(k), n)
    o = _fix_rotation(o, root, d, n)

    scale = np.concatenate([d, d]) ** -0.5
    m = (scale[:, None] * o.T) @ root

    dd = np.concatenate([d, d])
    rebuilt = m.T @ (dd[:, None] * m)
    residual = frobenius(rebuilt - t) / frobenius(t)
    logger.debug(
        f"Williamson order {2 * n}: residual {residual:.3e}, symplectic defect {symplectic_defect(m):.3e}"
    )
    return WilliamsonResult(d=d, M=m, residual=float(residual))


def symplectic_conjugate(t: DenseMatrix, l: DenseMatrix, tol: float = SYMPLECTIC_TOL) -> DenseMatrix:
    """
    L^T T L, re-symmetrized. Symplectic conjugation preserves the symplectic spectrum.

    Raises:
        NotSymplecticError: L fails the symplectic check at ``tol``
    """
    if l.shape != t.shape:
        raise DimensionError(f"Shapes differ: T {t.shape}, L {l.shape}")
    defect = symplectic_defect(l)
    if defect > tol:
        raise NotSymplecticError(f"Transformation is not symplectic (defect {defect:.3e})")
    out = l.T @ t @ l
    return 0.5 * (out + out.T)


def random_symplectic(n: int, seed: int, magnitude: float = 0.5) -> DenseMatrix:
    """
    Random symplectic matrix [[I,0],[C,I]] @ [[I,D],[0,I]] @ [[G,0],[0,G^-T]].

    C and D are symmetric with entries of scale ``magnitude``; G = I + P with
    ||P||_2 = magnitude / 2, so cond(G) <= 3. Deterministic per seed.

    Args:
        n: Half-dimension
        seed: Generator seed
        magnitude: Perturbation scale in (0, 1]

    Returns:
        2n x 2n symplectic matrix
    """
    if not 0.0 < magnitude <= 1.0:
        raise ValueError(f"magnitude must lie in (0, 1], got {magnitude}")

    rng = np.random.default_rng(seed)
    eye = np.eye(n)
    zero = np.zeros((n, n))

    def sym(scale: float) -> DenseMatrix:
        g = rng.uniform(-1.0, 1.0, (n, n))
        return scale * 0.5 * (g + g.T)

    c = sym(magnitude)
    d = sym(magnitude)
    p = rng.standard_normal((n, n))
    g = eye + 0.5 * magnitude * p / np.linalg.norm(p, 2)

    lower = np.block([[eye, zero], [c, eye]])
    upper = np.block([[eye, d], [zero, eye]])
    dilation = np.block([[g, zero], [zero, np.linalg.inv(g).T]])
    return lower @ upper @ dilation

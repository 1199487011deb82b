"""
Declarative models of operators on H and H+H and their finite sections.

H specs: Diagonal, Toeplitz, Block2x2DirectSum, MatrixDirectSum and the exact composites
Scaled, Sum, Product. HH specs: ClassA [A 0; 0 B], ClassB [A B; B A], Doubled [A 0; 0 A],
Explicit (a finite matrix given directly).

Every H spec has finite bandwidth, so composites truncate exactly.
"""

import logging
from dataclasses import dataclass, field
from typing import Any, Dict, List, Optional, Sequence, Tuple, Union

import numpy as np
import scipy.linalg

from linalg.matrix_core import DenseMatrix, frobenius, require_spd
from operators.seq_expr import ExprAst, evaluate, to_source
from utils.errors import (
    Block2x2ConstraintError,
    CommutationError,
    DimensionError,
    NotPositiveDefiniteError,
    NotSymmetricError,
    ScheduleError,
)

logger = logging.getLogger(__name__)

COMMUTATION_TOL = 1e-10
MAX_TRUNCATION = 2000

Matrix = Tuple[Tuple[float, ...], ...]


def _frozen_matrix(rows) -> Matrix:
    return tuple(tuple(float(x) for x in row) for row in rows)


# H specs

@dataclass(frozen=True)
class Diagonal:
    """k-th diagonal entry is entry_formula evaluated at k >= 1."""
    entry_formula: ExprAst
    metadata: Optional[Dict[str, Any]] = field(default=None, compare=False, hash=False)


@dataclass(frozen=True)
class Toeplitz:
    """Entry (i, j) = coeffs[|i-j|]; symbol a(t) = a0 + 2 sum a_k cos(kt)."""
    coeffs: Tuple[float, ...]
    metadata: Optional[Dict[str, Any]] = field(default=None, compare=False, hash=False)

    def __post_init__(self):
        if len(self.coeffs) == 0:
            raise ValueError("Toeplitz spec needs at least one coefficient")
        object.__setattr__(self, 'coeffs', tuple(float(c) for c in self.coeffs))


@dataclass(frozen=True)
class Block2x2DirectSum:
    """k-th block is [[a_k, b_k], [b_k, -a_k]] with b_k = sqrt(1 - a_k^2), a_k in (0, 1)."""
    a_formula: ExprAst
    metadata: Optional[Dict[str, Any]] = field(default=None, compare=False, hash=False)


@dataclass(frozen=True)
class MatrixDirectSum:
    """block + block + ... along the diagonal."""
    block: Matrix
    metadata: Optional[Dict[str, Any]] = field(default=None, compare=False, hash=False)

    def __post_init__(self):
        block = np.array(self.block, dtype=np.float64)
        if block.ndim != 2 or block.shape[0] != block.shape[1] or block.size == 0:
            raise DimensionError(f"Direct-sum block must be square, got shape {block.shape}")
        if not np.array_equal(block, block.T):
            raise NotSymmetricError("Direct-sum block must be exactly symmetric")
        object.__setattr__(self, 'block', _frozen_matrix(block))

    @property
    def size(self) -> int:
        return len(self.block)


@dataclass(frozen=True)
class Scaled:
    factor: float
    inner: 'HOperatorSpec'
    metadata: Optional[Dict[str, Any]] = field(default=None, compare=False, hash=False)


@dataclass(frozen=True)
class Sum:
    terms: Tuple['HOperatorSpec', ...]
    metadata: Optional[Dict[str, Any]] = field(default=None, compare=False, hash=False)

    def __post_init__(self):
        if len(self.terms) == 0:
            raise ValueError("Sum spec needs at least one term")
        object.__setattr__(self, 'terms', tuple(self.terms))


@dataclass(frozen=True)
class Product:
    """left * right; symmetric only when the factors commute."""
    left: 'HOperatorSpec'
    right: 'HOperatorSpec'
    assume_commuting: bool = False
    metadata: Optional[Dict[str, Any]] = field(default=None, compare=False, hash=False)


HOperatorSpec = Union[Diagonal, Toeplitz, Block2x2DirectSum, MatrixDirectSum, Scaled, Sum, Product]


# HH specs

@dataclass(frozen=True)
class ClassA:
    """[A 0; 0 B] with A, B positive and commuting."""
    a: HOperatorSpec
    b: HOperatorSpec
    assume_commuting: bool = False
    metadata: Optional[Dict[str, Any]] = field(default=None, compare=False, hash=False)


@dataclass(frozen=True)
class ClassB:
    """[A B; B A] with A+B, A-B positive and commuting."""
    a: HOperatorSpec
    b: HOperatorSpec
    assume_commuting: bool = False
    metadata: Optional[Dict[str, Any]] = field(default=None, compare=False, hash=False)


@dataclass(frozen=True)
class Doubled:
    """[A 0; 0 A]."""
    a: HOperatorSpec
    metadata: Optional[Dict[str, Any]] = field(default=None, compare=False, hash=False)


@dataclass(frozen=True)
class Explicit:
    """A finite matrix of even order 2m, truncated to the leading n of each component."""
    t: Matrix
    metadata: Optional[Dict[str, Any]] = field(default=None, compare=False, hash=False)

    def __post_init__(self):
        t = np.array(self.t, dtype=np.float64)
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] % 2:
            raise DimensionError(f"Explicit matrix must be square of even order, got shape {t.shape}")
        object.__setattr__(self, 't', _frozen_matrix(t))

    @property
    def half(self) -> int:
        return len(self.t) // 2


HHOperatorSpec = Union[ClassA, ClassB, Doubled, Explicit]

H_KINDS = (Diagonal, Toeplitz, Block2x2DirectSum, MatrixDirectSum, Scaled, Sum, Product)
HH_KINDS = (ClassA, ClassB, Doubled, Explicit)


@dataclass(frozen=True)
class TruncationSchedule:
    """Strictly increasing half-dimensions n; truncations of H+H have order 2n."""
    ns: Tuple[int, ...]
    cap: int = MAX_TRUNCATION

    def __post_init__(self):
        ns = tuple(int(n) for n in self.ns)
        if not ns:
            raise ScheduleError("Truncation schedule is empty")
        if ns[0] < 1:
            raise ScheduleError(f"Truncation sizes must be positive, got {ns[0]}")
        if any(b <= a for a, b in zip(ns, ns[1:])):
            raise ScheduleError(f"Truncation schedule must be strictly increasing: {list(ns)}")
        if ns[-1] > self.cap:
            raise ScheduleError(f"Truncation size {ns[-1]} exceeds the cap {self.cap}")
        object.__setattr__(self, 'ns', ns)

    def __len__(self) -> int:
        return len(self.ns)

    def __iter__(self):
        return iter(self.ns)


# Structure queries

def bandwidth(spec: HOperatorSpec) -> int:
    """Largest |i - j| with a possibly nonzero entry."""
    if isinstance(spec, Diagonal):
        return 0
    if isinstance(spec, Toeplitz):
        return len(spec.coeffs) - 1
    if isinstance(spec, Block2x2DirectSum):
        return 1
    if isinstance(spec, MatrixDirectSum):
        return spec.size - 1
    if isinstance(spec, Scaled):
        return bandwidth(spec.inner)
    if isinstance(spec, Sum):
        return max(bandwidth(t) for t in spec.terms)
    if isinstance(spec, Product):
        return bandwidth(spec.left) + bandwidth(spec.right)
    raise TypeError(f"Not an H spec: {type(spec).__name__}")


def is_diagonal(spec: HOperatorSpec) -> bool:
    if isinstance(spec, Diagonal):
        return True
    if isinstance(spec, Toeplitz):
        return len(spec.coeffs) == 1 or not any(spec.coeffs[1:])
    if isinstance(spec, MatrixDirectSum):
        return spec.size == 1
    if isinstance(spec, Block2x2DirectSum):
        return False
    if isinstance(spec, Scaled):
        return is_diagonal(spec.inner)
    if isinstance(spec, Sum):
        return all(is_diagonal(t) for t in spec.terms)
    if isinstance(spec, Product):
        return is_diagonal(spec.left) and is_diagonal(spec.right)
    raise TypeError(f"Not an H spec: {type(spec).__name__}")


def diagonal_entries(spec: HOperatorSpec, count: int) -> np.ndarray:
    """
    First ``count`` diagonal entries of a diagonal spec as a vector.

    Raises:
        ValueError: spec is not diagonal
    """
    if not is_diagonal(spec):
        raise ValueError(f"{describe(spec)} is not diagonal")
    if isinstance(spec, Diagonal):
        return evaluate(spec.entry_formula, np.arange(1, count + 1))
    if isinstance(spec, Toeplitz):
        return np.full(count, spec.coeffs[0])
    if isinstance(spec, MatrixDirectSum):
        return np.full(count, spec.block[0][0])
    if isinstance(spec, Scaled):
        return spec.factor * diagonal_entries(spec.inner, count)
    if isinstance(spec, Sum):
        return np.sum([diagonal_entries(t, count) for t in spec.terms], axis=0)
    return diagonal_entries(spec.left, count) * diagonal_entries(spec.right, count)


def describe(spec) -> str:
    """Short human-readable label used in logs and report annotations."""
    if isinstance(spec, Diagonal):
        return f"diagonal[{to_source(spec.entry_formula)}]"
    if isinstance(spec, Toeplitz):
        return f"toeplitz{list(spec.coeffs)}"
    if isinstance(spec, Block2x2DirectSum):
        return f"block2x2[{to_source(spec.a_formula)}]"
    if isinstance(spec, MatrixDirectSum):
        return f"matrix_direct_sum{[list(r) for r in spec.block]}"
    if isinstance(spec, Scaled):
        return f"{spec.factor:g}*{describe(spec.inner)}"
    if isinstance(spec, Sum):
        return "(" + " + ".join(describe(t) for t in spec.terms) + ")"
    if isinstance(spec, Product):
        return f"{describe(spec.left)}*{describe(spec.right)}"
    if isinstance(spec, ClassA):
        return f"class_a({describe(spec.a)}, {describe(spec.b)})"
    if isinstance(spec, ClassB):
        return f"class_b({describe(spec.a)}, {describe(spec.b)})"
    if isinstance(spec, Doubled):
        return f"doubled({describe(spec.a)})"
    if isinstance(spec, Explicit):
        return f"explicit[{2 * spec.half}x{2 * spec.half}]"
    raise TypeError(f"Not an operator spec: {type(spec).__name__}")


def symbol_range(spec: Toeplitz, samples: int = 1024) -> Tuple[float, float]:
    """
    Estimate [ess inf a, ess sup a] of a Toeplitz symbol a(t) = a0 + 2 sum a_k cos(kt).

    Args:
        spec: Toeplitz spec
        samples: Uniform grid points on [-pi, pi] (at least 64), endpoints included

    Returns:
        (min, max) of the symbol over the grid
    """
    if samples < 64:
        raise ValueError(f"samples must be >= 64, got {samples}")
    t = np.linspace(-np.pi, np.pi, samples)
    coeffs = np.asarray(spec.coeffs)
    k = np.arange(1, len(coeffs))
    values = coeffs[0] + 2.0 * (coeffs[1:, None] * np.cos(np.outer(k, t))).sum(axis=0)
    return float(values.min()), float(values.max())


# Truncation

def _blocks_needed(n: int, size: int) -> int:
    return -(-n // size)


def truncate_h(spec: HOperatorSpec, n: int) -> DenseMatrix:
    """
    Leading n x n section P_n A P_n.

    Direct sums may be cut mid-block.

    Raises:
        EvaluationError: formula failure at some k <= n
        Block2x2ConstraintError: some a_k outside (0, 1)
    """
    if n < 1:
        raise DimensionError(f"Truncation size must be positive, got {n}")

    if isinstance(spec, Diagonal):
        return np.diag(evaluate(spec.entry_formula, np.arange(1, n + 1)))

    if isinstance(spec, Toeplitz):
        column = np.zeros(n)
        m = min(len(spec.coeffs), n)
        column[:m] = spec.coeffs[:m]
        return scipy.linalg.toeplitz(column)

    if isinstance(spec, Block2x2DirectSum):
        count = _blocks_needed(n, 2)
        a = evaluate(spec.a_formula, np.arange(1, count + 1))
        bad = np.nonzero((a <= 0.0) | (a >= 1.0))[0]
        if bad.size:
            k = int(bad[0]) + 1
            raise Block2x2ConstraintError(f"Block entry a_{k} = {a[bad[0]]:.12g} is outside (0, 1)")
        b = np.sqrt(1.0 - a * a)
        out = np.zeros((2 * count, 2 * count))
        idx = 2 * np.arange(count)
        out[idx, idx] = a
        out[idx + 1, idx + 1] = -a
        out[idx, idx + 1] = b
        out[idx + 1, idx] = b
        return out[:n, :n]

    if isinstance(spec, MatrixDirectSum):
        count = _blocks_needed(n, spec.size)
        out = np.kron(np.eye(count), np.array(spec.block))
        return np.ascontiguousarray(out[:n, :n])

    if isinstance(spec, Scaled):
        return spec.factor * truncate_h(spec.inner, n)

    if isinstance(spec, Sum):
        out = truncate_h(spec.terms[0], n)
        for term in spec.terms[1:]:
            out = out + truncate_h(term, n)
        return out

    if isinstance(spec, Product):
        return _truncate_product(spec, n)

    raise TypeError(f"Not an H spec: {type(spec).__name__}")


def _truncate_product(spec: Product, n: int) -> DenseMatrix:
    """
    (LR)_n from L_{n+w} and R_{n+w}, w = bandwidth(R), mirrored from the upper triangle.

    Entry (i, j) sums L[i, j+s] R[j+s, j] over offsets s = -w..w in that order, so every
    entry is the same float at every n and sections nest exactly.
    """
    w = bandwidth(spec.right)
    big = n + w
    left = truncate_h(spec.left, big)
    right = truncate_h(spec.right, big)

    section = np.zeros((n, n))
    cols = np.arange(n)
    for s in range(-w, w + 1):
        j = cols[cols + s >= 0]
        k = j + s
        section[:, j] += left[:n, k] * right[k, j]

    asym = frobenius(section - section.T)
    scale = frobenius(section)
    if asym > COMMUTATION_TOL * max(scale, 1e-300):
        message = f"Product {describe(spec)} is not symmetric at n={n} (asymmetry {asym:.3e})"
        if not spec.assume_commuting:
            raise CommutationError(message)
        logger.warning(message + "; factors declared commuting")

    upper = np.triu(section)
    return upper + np.triu(section, 1).T


def check_commuting(a: DenseMatrix, b: DenseMatrix, label: str, assume_commuting: bool,
                    ctol: float = COMMUTATION_TOL) -> float:
    """
    ||AB - BA||_F relative to ||A||_F ||B||_F.

    Raises:
        CommutationError: above ``ctol`` and not declared commuting (then only a warning)
    """
    scale = frobenius(a) * frobenius(b)
    rel = frobenius(a @ b - b @ a) / scale if scale > 0 else 0.0
    if rel > ctol:
        message = f"{label}: truncations do not commute (relative commutator {rel:.3e})"
        if not assume_commuting:
            raise CommutationError(message)
        logger.warning(message + "; declared commuting")
    return rel


def _require_positive(s: DenseMatrix, label: str, n: int):
    try:
        require_spd(s, label)
    except NotPositiveDefiniteError as e:
        raise NotPositiveDefiniteError(f"{e} at n={n}") from e


def truncate_hh(spec: HHOperatorSpec, n: int, ctol: float = COMMUTATION_TOL) -> DenseMatrix:
    """
    2n x 2n section in block order [[X11, X12], [X21, X22]].

    ClassA and ClassB truncations are checked for commutation (relative ``ctol``) and
    positivity; Doubled for positivity.

    Raises:
        CommutationError: commutator above ``ctol`` without ``assume_commuting``
        NotPositiveDefiniteError: a block that must be positive is not
        DimensionError: Explicit spec smaller than n
    """
    if isinstance(spec, Explicit):
        t = np.array(spec.t)
        m = spec.half
        if n > m:
            raise DimensionError(f"Explicit matrix has half-order {m}, cannot truncate to {n}")
        if n == m:
            return t
        keep = np.r_[0:n, m:m + n]
        return t[np.ix_(keep, keep)]

    if isinstance(spec, Doubled):
        a = truncate_h(spec.a, n)
        _require_positive(a, 'A', n)
        zero = np.zeros((n, n))
        return np.block([[a, zero], [zero, a]])

    if isinstance(spec, ClassA):
        a = truncate_h(spec.a, n)
        b = truncate_h(spec.b, n)
        check_commuting(a, b, f"class A at n={n}", spec.assume_commuting, ctol)
        _require_positive(a, 'A', n)
        _require_positive(b, 'B', n)
        zero = np.zeros((n, n))
        return np.block([[a, zero], [zero, b]])

    if isinstance(spec, ClassB):
        a = truncate_h(spec.a, n)
        b = truncate_h(spec.b, n)
        plus, minus = a + b, a - b
        check_commuting(plus, minus, f"class B at n={n}", spec.assume_commuting, ctol)
        _require_positive(plus, 'A+B', n)
        _require_positive(minus, 'A-B', n)
        return np.block([[a, b], [b, a]])

    raise TypeError(f"Not an HH spec: {type(spec).__name__}")


def component_specs(spec: HHOperatorSpec) -> Tuple[HOperatorSpec, HOperatorSpec]:
    """
    The commuting pair (P, Q) whose product governs the symplectic spectrum.

    ClassA and Doubled give (A, B); ClassB gives (A+B, A-B).
    """
    if isinstance(spec, ClassA):
        return spec.a, spec.b
    if isinstance(spec, Doubled):
        return spec.a, spec.a
    if isinstance(spec, ClassB):
        return Sum((spec.a, spec.b)), Sum((spec.a, Scaled(-1.0, spec.b)))
    raise TypeError(f"{type(spec).__name__} has no commuting component pair")


def _symbol_ranges(spec, path: str, out: Dict[str, List[float]]):
    if isinstance(spec, Toeplitz):
        out[path or 'operator'] = list(symbol_range(spec))
    elif isinstance(spec, Sum):
        for i, term in enumerate(spec.terms):
            _symbol_ranges(term, f"{path}.terms[{i}]".lstrip('.'), out)
    else:
        for name in ('a', 'b', 'inner', 'left', 'right'):
            child = getattr(spec, name, None)
            if child is not None:
                _symbol_ranges(child, f"{path}.{name}".lstrip('.'), out)


def annotations(spec) -> Dict[str, Any]:
    """Label, estimated symbol ranges of Toeplitz parts, and any user-declared metadata."""
    out: Dict[str, Any] = {'spec': describe(spec)}
    ranges: Dict[str, List[float]] = {}
    _symbol_ranges(spec, '', ranges)
    if ranges:
        out['symbol_range'] = ranges
    if getattr(spec, 'metadata', None):
        out['metadata'] = dict(spec.metadata)
    return out


def schedule_of(ns: Sequence[int], cap: int = MAX_TRUNCATION) -> TruncationSchedule:
    return TruncationSchedule(tuple(ns), cap)

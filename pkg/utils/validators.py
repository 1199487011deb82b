"""
Validation of operator-spec documents.
"""

import logging
import math
from typing import Any, Dict, List, Optional

from operators.seq_expr import Var, parse
from utils.errors import ExprSyntaxError

logger = logging.getLogger(__name__)


class SpecValidator:
    """Validate operator-spec JSON documents before they are built into spec objects."""

    H_KINDS = {
        'diagonal': ({'entry_formula'}, set()),
        'toeplitz': ({'coeffs'}, set()),
        'block2x2': ({'a_formula'}, set()),
        'matrix_direct_sum': ({'block'}, set()),
        'scaled': ({'factor', 'a'}, set()),
        'sum': ({'terms'}, set()),
        'product': ({'left', 'right'}, {'assume_commuting'}),
    }

    HH_KINDS = {
        'class_a': ({'a', 'b'}, {'assume_commuting'}),
        'class_b': ({'a', 'b'}, {'assume_commuting'}),
        'doubled': ({'a'}, set()),
        'explicit': ({'matrix'}, set()),
    }

    COMMON_KEYS = {'space', 'kind', 'metadata'}

    # Largest matrix accepted inline in a spec file
    MAX_INLINE_ORDER = 4000

    def validate_spec(self, doc: Any) -> Dict[str, Any]:
        """
        Validate a top-level spec document.

        Args:
            doc: Parsed JSON value

        Returns:
            Dictionary with 'valid' bool, 'errors' and 'warnings' lists
        """
        errors: List[str] = []
        warnings: List[str] = []

        if not isinstance(doc, dict):
            errors.append(f"Spec must be a JSON object, got {type(doc).__name__}")
        else:
            space = doc.get('space')
            if space not in ('H', 'HH'):
                errors.append(f"'space' must be \"H\" or \"HH\", got {space!r}")
            else:
                self._check_node(doc, space, 'spec', errors, warnings)

        return {
            'valid': len(errors) == 0,
            'errors': errors,
            'warnings': warnings
        }

    def _check_node(self, node: Any, space: str, path: str, errors: List[str], warnings: List[str]):
        if not isinstance(node, dict):
            errors.append(f"{path}: expected an object, got {type(node).__name__}")
            return

        kinds = self.H_KINDS if space == 'H' else self.HH_KINDS
        declared = node.get('space', space)
        if declared != space:
            errors.append(f"{path}: space {declared!r} where {space!r} is required")
            return

        kind = node.get('kind')
        if kind not in kinds:
            other = self.HH_KINDS if space == 'H' else self.H_KINDS
            if kind in other:
                errors.append(f"{path}: kind {kind!r} does not act on space {space}")
            else:
                errors.append(f"{path}: unknown kind {kind!r}")
            return

        required, optional = kinds[kind]
        allowed = required | optional | self.COMMON_KEYS
        for key in sorted(set(node) - allowed):
            errors.append(f"{path}: unknown key {key!r} for kind {kind!r}")
        for key in sorted(required - set(node)):
            errors.append(f"{path}: missing required key {key!r}")

        if 'metadata' in node and not isinstance(node['metadata'], dict):
            errors.append(f"{path}.metadata: must be an object")
        if 'assume_commuting' in node:
            if not isinstance(node['assume_commuting'], bool):
                errors.append(f"{path}.assume_commuting: must be true or false")
            elif node['assume_commuting']:
                warnings.append(f"{path}: commutation check downgraded to a warning")

        if kind in ('diagonal', 'block2x2'):
            key = 'entry_formula' if kind == 'diagonal' else 'a_formula'
            if key in node:
                self._check_formula(node[key], f"{path}.{key}", errors, warnings)
        elif kind == 'toeplitz' and 'coeffs' in node:
            self._check_coeffs(node['coeffs'], f"{path}.coeffs", errors, warnings)
        elif kind == 'matrix_direct_sum' and 'block' in node:
            self._check_matrix(node['block'], f"{path}.block", errors, symmetric=True)
        elif kind == 'explicit' and 'matrix' in node:
            order = self._check_matrix(node['matrix'], f"{path}.matrix", errors, symmetric=False)
            if order is not None and order % 2:
                errors.append(f"{path}.matrix: order must be even, got {order}")
        elif kind == 'scaled':
            if 'factor' in node and not self._is_number(node['factor']):
                errors.append(f"{path}.factor: must be a finite number")
            if 'a' in node:
                self._check_node(node['a'], 'H', f"{path}.a", errors, warnings)
        elif kind == 'sum' and 'terms' in node:
            terms = node['terms']
            if not isinstance(terms, list) or not terms:
                errors.append(f"{path}.terms: must be a nonempty list")
            else:
                for i, term in enumerate(terms):
                    self._check_node(term, 'H', f"{path}.terms[{i}]", errors, warnings)
        elif kind == 'product':
            for key in ('left', 'right'):
                if key in node:
                    self._check_node(node[key], 'H', f"{path}.{key}", errors, warnings)
        elif kind in ('class_a', 'class_b', 'doubled'):
            for key in ('a', 'b'):
                if key in node:
                    self._check_node(node[key], 'H', f"{path}.{key}", errors, warnings)

    @staticmethod
    def _is_number(value: Any) -> bool:
        return (
            isinstance(value, (int, float))
            and not isinstance(value, bool)
            and math.isfinite(value)
        )

    def _check_formula(self, value: Any, path: str, errors: List[str], warnings: List[str]):
        if not isinstance(value, str):
            errors.append(f"{path}: must be a string")
            return
        try:
            ast = parse(value)
        except ExprSyntaxError as e:
            errors.append(f"{path}: {e}")
            return
        if Var() not in _walk(ast):
            warnings.append(f"{path}: formula {value!r} does not depend on n")

    def _check_coeffs(self, value: Any, path: str, errors: List[str], warnings: List[str]):
        if not isinstance(value, list) or not value:
            errors.append(f"{path}: must be a nonempty list of numbers")
            return
        for i, c in enumerate(value):
            if not self._is_number(c):
                errors.append(f"{path}[{i}]: not a finite number: {c!r}")
        if len(value) > 1 and value[-1] == 0:
            warnings.append(f"{path}: trailing zero coefficient")

    def _check_matrix(self, value: Any, path: str, errors: List[str], symmetric: bool) -> Optional[int]:
        """Check a square list-of-rows matrix; returns its order when well formed."""
        if not isinstance(value, list) or not value or not all(isinstance(r, list) for r in value):
            errors.append(f"{path}: must be a nonempty list of rows")
            return None
        order = len(value)
        if order > self.MAX_INLINE_ORDER:
            errors.append(f"{path}: order {order} exceeds {self.MAX_INLINE_ORDER}")
            return None
        for i, row in enumerate(value):
            if len(row) != order:
                errors.append(f"{path}[{i}]: expected {order} entries, got {len(row)}")
                return None
            for j, x in enumerate(row):
                if not self._is_number(x):
                    errors.append(f"{path}[{i}][{j}]: not a finite number: {x!r}")
                    return None
        if symmetric:
            for i in range(order):
                for j in range(i + 1, order):
                    if value[i][j] != value[j][i]:
                        errors.append(f"{path}: not symmetric at ({i}, {j})")
                        return None
        return order


def _walk(ast):
    """Yield every node of an expression tree."""
    yield ast
    for child in ('child', 'base', 'left', 'right'):
        sub = getattr(ast, child, None)
        if sub is not None:
            yield from _walk(sub)

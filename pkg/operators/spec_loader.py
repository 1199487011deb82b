"""
Operator-spec JSON files.

Schema (unknown keys rejected):

    {"space": "H" | "HH",
     "kind": "diagonal" | "toeplitz" | "block2x2" | "matrix_direct_sum" | "scaled" | "sum"
             | "product" | "class_a" | "class_b" | "doubled" | "explicit",
     "entry_formula": str, "a_formula": str, "coeffs": [float], "block": [[float]],
     "matrix": [[float]], "factor": float, "terms": [spec], "left": spec, "right": spec,
     "a": spec, "b": spec, "assume_commuting": bool, "metadata": {...}}
"""

import json
import logging
from pathlib import Path
from typing import Any, Dict, Union

from operators.operator_models import (
    Block2x2DirectSum,
    ClassA,
    ClassB,
    Diagonal,
    Doubled,
    Explicit,
    HHOperatorSpec,
    HOperatorSpec,
    MatrixDirectSum,
    Product,
    Scaled,
    Sum,
    Toeplitz,
)
from operators.seq_expr import parse
from utils.errors import SpecFormatError
from utils.validators import SpecValidator

logger = logging.getLogger(__name__)


def spec_from_dict(doc: Dict[str, Any]) -> Union[HOperatorSpec, HHOperatorSpec]:
    """
    Validate a parsed spec document and build the spec object.

    Raises:
        SpecFormatError: validation failed (carries the error list)
    """
    result = SpecValidator().validate_spec(doc)
    for warning in result['warnings']:
        logger.warning(f"Spec: {warning}")
    if not result['valid']:
        raise SpecFormatError("Invalid operator spec", result['errors'])
    return _build(doc)


def _build(node: Dict[str, Any]):
    kind = node['kind']
    metadata = node.get('metadata')

    if kind == 'diagonal':
        return Diagonal(parse(node['entry_formula']), metadata)
    if kind == 'toeplitz':
        return Toeplitz(tuple(node['coeffs']), metadata)
    if kind == 'block2x2':
        return Block2x2DirectSum(parse(node['a_formula']), metadata)
    if kind == 'matrix_direct_sum':
        return MatrixDirectSum(node['block'], metadata)
    if kind == 'scaled':
        return Scaled(float(node['factor']), _build(node['a']), metadata)
    if kind == 'sum':
        return Sum(tuple(_build(t) for t in node['terms']), metadata)
    if kind == 'product':
        return Product(_build(node['left']), _build(node['right']),
                       node.get('assume_commuting', False), metadata)
    if kind == 'class_a':
        return ClassA(_build(node['a']), _build(node['b']),
                      node.get('assume_commuting', False), metadata)
    if kind == 'class_b':
        return ClassB(_build(node['a']), _build(node['b']),
                      node.get('assume_commuting', False), metadata)
    if kind == 'doubled':
        return Doubled(_build(node['a']), metadata)
    return Explicit(node['matrix'], metadata)


def load_spec(path: str) -> Union[HOperatorSpec, HHOperatorSpec]:
    """
    Read and build an operator spec file.

    Args:
        path: JSON spec path

    Returns:
        H or HH spec object

    Raises:
        SpecFormatError: unreadable JSON or failed validation
    """
    path = Path(path)
    try:
        with open(path, 'r', encoding='utf-8') as f:
            doc = json.load(f)
    except FileNotFoundError:
        raise SpecFormatError(f"Spec file not found: {path}")
    except json.JSONDecodeError as e:
        raise SpecFormatError(f"Spec file {path} is not valid JSON: {e}")

    spec = spec_from_dict(doc)
    logger.debug(f"Loaded spec {path}: {type(spec).__name__}")
    return spec

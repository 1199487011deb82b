"""Operator models and their sequence formulas."""

from .operator_models import TruncationSchedule, truncate_h, truncate_hh
from .seq_expr import evaluate, parse

__all__ = ['TruncationSchedule', 'truncate_h', 'truncate_hh', 'evaluate', 'parse']

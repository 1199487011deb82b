"""
Matrix CSV reading and writing.

Format: one row per line, decimal floats, no header. Parsing is strict; ragged rows
and non-numeric cells are errors.
"""

import logging
from pathlib import Path

import numpy as np
import pandas as pd
from pandas.errors import EmptyDataError, ParserError

from linalg.matrix_core import DenseMatrix, as_matrix
from utils.errors import MatrixFormatError

logger = logging.getLogger(__name__)


def read_matrix_csv(path: str) -> DenseMatrix:
    """
    Load a matrix from a headerless CSV file.

    Args:
        path: Path to the CSV file

    Returns:
        Validated matrix

    Raises:
        MatrixFormatError: missing file, ragged rows, non-numeric cells
    """
    path = Path(path)
    if not path.exists():
        raise MatrixFormatError(f"Matrix file not found: {path}")

    try:
        df = pd.read_csv(path, header=None, skipinitialspace=True, skip_blank_lines=True,
                         float_precision='round_trip')
    except EmptyDataError:
        raise MatrixFormatError(f"Matrix file is empty: {path}")
    except ParserError as e:
        raise MatrixFormatError(f"Ragged rows in {path}: {e}")

    if df.isna().any().any():
        raise MatrixFormatError(f"Ragged rows or empty cells in {path}")

    try:
        values = df.to_numpy(dtype=np.float64)
    except (ValueError, TypeError) as e:
        raise MatrixFormatError(f"Non-numeric entry in {path}: {e}")

    if not np.all(np.isfinite(values)):
        raise MatrixFormatError(f"Non-finite entry in {path}")

    logger.debug(f"Read {values.shape[0]}x{values.shape[1]} matrix from {path}")
    return as_matrix(values, name=str(path))


def write_matrix_csv(matrix: DenseMatrix, path: str) -> Path:
    """Write a matrix as headerless CSV with round-trip float formatting."""
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    pd.DataFrame(np.asarray(matrix)).to_csv(path, header=False, index=False, float_format='%.17g')
    logger.info(f"Wrote {matrix.shape[0]}x{matrix.shape[1]} matrix to {path}")
    return path

"""Dense linear algebra: symmetric eigensolvers, SPD helpers, symplectic machinery."""

from .matrix_core import init_eigensolver, sym_eig, sqrt_psd, inv_spd
from .symplectic_core import WilliamsonResult, symplectic_eigenvalues, williamson

__all__ = [
    'init_eigensolver', 'sym_eig', 'sqrt_psd', 'inv_spd',
    'WilliamsonResult', 'symplectic_eigenvalues', 'williamson',
]

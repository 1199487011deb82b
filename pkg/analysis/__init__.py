"""Sweeps, closed-form cross-checks, bounds and GCO evidence."""

from .closed_forms import bounds_check, class_a_closed_form, class_b_closed_form
from .gco import GcoParams, gco_check
from .sweeps import convergence_stats, hausdorff, spectral_sweep, symplectic_sweep

__all__ = [
    'bounds_check', 'class_a_closed_form', 'class_b_closed_form',
    'GcoParams', 'gco_check',
    'convergence_stats', 'hausdorff', 'spectral_sweep', 'symplectic_sweep',
]

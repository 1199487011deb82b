"""Report serialization."""

from .exporters import load_gco_report, load_sweep_report

__all__ = ['load_gco_report', 'load_sweep_report']

"""Shared utilities. Import submodules directly, e.g. utils.settings, utils.validators."""

from .errors import InputError, NumericalError, PreconditionError, SympSpecError

__all__ = ['SympSpecError', 'InputError', 'PreconditionError', 'NumericalError']

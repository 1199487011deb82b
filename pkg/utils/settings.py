"""
Runtime settings: config/settings.json defaults, then environment overrides.

Environment (a .env file in the working directory is honoured):
    SYMPSPEC_SETTINGS         alternate settings JSON path
    SYMPSPEC_WORKERS          sweep worker threads
    SYMPSPEC_EIG_METHOD       auto | jacobi | lapack
    SYMPSPEC_MAX_TRUNCATION   largest allowed truncation size n
"""

import json
import logging
import os
from dataclasses import dataclass, field, replace
from pathlib import Path
from typing import Optional, Tuple

from dotenv import load_dotenv

from utils.errors import InputError

logger = logging.getLogger(__name__)

DEFAULT_SETTINGS_PATH = Path(__file__).parent.parent / 'config' / 'settings.json'


@dataclass(frozen=True)
class GcoSettings:
    hs_tail_tol: float = 1e-10
    trace_tail_tol: float = 1e-10
    stagnation_window: int = 3
    contraction: float = 0.75
    series_start: int = 16
    series_cap: int = 65536


@dataclass(frozen=True)
class EigensolverSettings:
    method: str = 'auto'
    jacobi_max_order: int = 32
    max_sweeps: int = 100


@dataclass(frozen=True)
class Settings:
    schedule: Tuple[int, ...] = (5, 10, 25, 50, 100, 250, 500)
    max_truncation: int = 2000
    commutation_tol: float = 1e-10
    branch_tol: float = 1e-9
    bounds_slack: float = 1e-9
    workers: int = 4
    eigensolver: EigensolverSettings = field(default_factory=EigensolverSettings)
    gco: GcoSettings = field(default_factory=GcoSettings)


def _from_json(path: Path) -> Settings:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            data = json.load(f)
    except FileNotFoundError:
        raise InputError(f"Settings file not found: {path}")
    except json.JSONDecodeError as e:
        raise InputError(f"Settings file {path} is not valid JSON: {e}")

    try:
        eig = EigensolverSettings(**data.pop('eigensolver', {}))
        gco = GcoSettings(**data.pop('gco', {}))
        if 'schedule' in data:
            data['schedule'] = tuple(int(n) for n in data['schedule'])
        return Settings(eigensolver=eig, gco=gco, **data)
    except TypeError as e:
        raise InputError(f"Unknown setting in {path}: {e}")


def load_settings(path: Optional[str] = None) -> Settings:
    """
    Load settings from JSON and apply environment overrides.

    Args:
        path: Settings file (default: SYMPSPEC_SETTINGS or config/settings.json)

    Returns:
        Frozen Settings
    """
    load_dotenv()

    path = Path(path or os.getenv('SYMPSPEC_SETTINGS', str(DEFAULT_SETTINGS_PATH)))
    settings = _from_json(path) if path.exists() or path != DEFAULT_SETTINGS_PATH else Settings()

    try:
        workers = int(os.getenv('SYMPSPEC_WORKERS', str(settings.workers)))
        max_truncation = int(os.getenv('SYMPSPEC_MAX_TRUNCATION', str(settings.max_truncation)))
    except ValueError as e:
        raise InputError(f"Bad numeric environment override: {e}")
    method = os.getenv('SYMPSPEC_EIG_METHOD', settings.eigensolver.method)

    if workers < 1:
        raise InputError(f"SYMPSPEC_WORKERS must be >= 1, got {workers}")
    if method not in ('auto', 'jacobi', 'lapack'):
        raise InputError(f"SYMPSPEC_EIG_METHOD must be auto, jacobi or lapack, got {method!r}")

    settings = replace(
        settings,
        workers=workers,
        max_truncation=max_truncation,
        eigensolver=replace(settings.eigensolver, method=method),
    )
    logger.debug(f"Settings loaded from {path}: {settings}")
    return settings

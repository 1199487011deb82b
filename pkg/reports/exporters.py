"""
Report serialization: JSON documents (sorted keys, two-space indent) and CSV tables.

Identical reports always serialize to identical bytes. JSON documents read back
into dataclasses equal to the ones written.
"""

import json
import logging
import sys
from dataclasses import asdict
from pathlib import Path
from typing import Any, Dict, Optional

import pandas as pd

from analysis.closed_forms import BoundsReport
from analysis.gco import ConditionResult, GcoReport
from analysis.sweeps import ConvergenceStats, SweepReport, SweepRow
from linalg.symplectic_core import WilliamsonResult
from utils.errors import InputError

logger = logging.getLogger(__name__)

SWEEP_COLUMNS = ['n', 'k', 'value']
WILLIAMSON_COLUMNS = ['k', 'd']
BOUNDS_COLUMNS = ['n', 'k', 'd_k', 'excess']
GCO_COLUMNS = ['condition', 'verdict', 'n', 'value']


def to_json(document: Dict[str, Any]) -> str:
    return json.dumps(document, sort_keys=True, indent=2) + "\n"


def frame_to_csv(df: pd.DataFrame) -> str:
    return df.to_csv(index=False, lineterminator='\n')


def emit(text: str, out: Optional[str] = None):
    """Write to ``out`` (parent directories created) or to stdout."""
    if out is None:
        sys.stdout.write(text)
        sys.stdout.flush()
        return
    path = Path(out)
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='') as f:
        f.write(text)
    logger.info(f"Wrote {path}")


# Sweeps

def sweep_document(report: SweepReport, stats: Optional[ConvergenceStats] = None) -> Dict[str, Any]:
    return {
        'report': asdict(report),
        'convergence': asdict(stats) if stats is not None else None,
    }


def sweep_frame(report: SweepReport) -> pd.DataFrame:
    """One row per (n, k, value), k counting from 1 in ascending order of value."""
    records = [
        {'n': row.n, 'k': k, 'value': value}
        for row in report.per_n
        for k, value in enumerate(row.values, start=1)
    ]
    return pd.DataFrame(records, columns=SWEEP_COLUMNS)


def _load_json(path: str) -> Dict[str, Any]:
    try:
        with open(path, 'r', encoding='utf-8') as f:
            return json.load(f)
    except FileNotFoundError:
        raise InputError(f"Report file not found: {path}")
    except json.JSONDecodeError as e:
        raise InputError(f"Report file {path} is not valid JSON: {e}")


def sweep_report_from_dict(data: Dict[str, Any]) -> SweepReport:
    rows = tuple(
        SweepRow(n=int(r['n']), dimension=int(r['dimension']), values=tuple(float(v) for v in r['values']))
        for r in data['per_n']
    )
    return SweepReport(
        kind=data['kind'],
        schedule=tuple(int(n) for n in data['schedule']),
        per_n=rows,
        annotations=data.get('annotations', {}),
    )


def load_sweep_report(path: str) -> SweepReport:
    """Re-read the report part of a sweep JSON document."""
    try:
        return sweep_report_from_dict(_load_json(path)['report'])
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"Malformed sweep report {path}: {e}")


# GCO

def gco_document(report: GcoReport) -> Dict[str, Any]:
    return asdict(report)


def gco_frame(report: GcoReport) -> pd.DataFrame:
    records = []
    for name in ('cond1', 'cond2', 'cond3'):
        cond: ConditionResult = getattr(report, name)
        for n, value in cond.series:
            records.append({'condition': name, 'verdict': cond.verdict, 'n': n, 'value': value})
    return pd.DataFrame(records, columns=GCO_COLUMNS)


def _condition_from_dict(data: Dict[str, Any]) -> ConditionResult:
    series = tuple((int(n), float(v)) for n, v in data['series'])
    return ConditionResult(verdict=data['verdict'], series=series, method=data['method'])


def gco_report_from_dict(data: Dict[str, Any]) -> GcoReport:
    return GcoReport(
        spec_class=data['spec_class'],
        cond1=_condition_from_dict(data['cond1']),
        cond2=_condition_from_dict(data['cond2']),
        cond3=_condition_from_dict(data['cond3']),
        overall=bool(data['overall']),
        annotations=data.get('annotations', {}),
    )


def load_gco_report(path: str) -> GcoReport:
    try:
        return gco_report_from_dict(_load_json(path))
    except (KeyError, TypeError, ValueError) as e:
        raise InputError(f"Malformed GCO report {path}: {e}")


# Williamson and bounds

def williamson_document(result: WilliamsonResult, with_transform: bool = False) -> Dict[str, Any]:
    doc: Dict[str, Any] = {
        'd': [float(x) for x in result.d],
        'residual': float(result.residual),
    }
    if with_transform:
        doc['M'] = [[float(x) for x in row] for row in result.M]
    return doc


def spectrum_frame(d) -> pd.DataFrame:
    """Symplectic eigenvalues as a k,d table, k counting from 1 in ascending order."""
    return pd.DataFrame(
        {'k': range(1, len(d) + 1), 'd': [float(x) for x in d]},
        columns=WILLIAMSON_COLUMNS,
    )


def williamson_frame(result: WilliamsonResult) -> pd.DataFrame:
    return spectrum_frame(result.d)


def bounds_document(report: BoundsReport) -> Dict[str, Any]:
    doc = asdict(report)
    doc['ok'] = report.ok
    return doc


def bounds_frame(report: BoundsReport) -> pd.DataFrame:
    return pd.DataFrame([asdict(v) for v in report.violations], columns=BOUNDS_COLUMNS)

#!/usr/bin/env python3
"""
Symplectic Spectrum Toolkit - Main Entry Point

Williamson normal forms, symplectic spectra of finite sections of structured
operators, and numerical evidence for Gaussian covariance operator conditions.
"""

import argparse
import json
import logging
import os
import sys
from pathlib import Path
from typing import List, Optional

import numpy as np

from analysis.closed_forms import bounds_check, bounds_sweep
from analysis.gco import EVIDENCE_ONLY, FAIL, GcoParams, gco_check
from analysis.sweeps import convergence_stats, spectral_sweep, symplectic_sweep
from linalg.matrix_core import init_eigensolver, random_spd
from linalg.matrix_io import read_matrix_csv
from linalg.symplectic_core import symplectic_eigenvalues, williamson
from operators.operator_models import H_KINDS, HH_KINDS, truncate_hh
from operators.seq_expr import evaluate, parse
from operators.spec_loader import load_spec
from reports import exporters
from utils.errors import InputError, SpecFormatError, SympSpecError
from utils.schedule_parser import ScheduleParser
from utils.settings import Settings, load_settings

EXIT_CODES = """exit codes:
  0  success / all GCO conditions pass
  1  a GCO condition fails, or bound violations were found
  2  input error (files, formulas, schedules, dimensions)
  3  precondition violated (not symmetric, not positive definite, not commuting, ...)
  4  numerical failure (non-convergence, pairing or degeneracy, formula evaluation)
  5  GCO: nothing fails but some condition is evidence-only
"""


def setup_logging(verbose: bool = False, log_file: str = None):
    """Configure logging for the application. Stdout is reserved for reports."""
    level = logging.DEBUG if verbose else logging.INFO

    stream_handler = logging.StreamHandler(sys.stderr)
    stream_handler.setLevel(level)
    handlers = [stream_handler]

    if log_file:
        log_path = Path(log_file)
        log_path.parent.mkdir(parents=True, exist_ok=True)
        file_handler = logging.FileHandler(log_file, encoding='utf-8')
        file_handler.setLevel(level)
        handlers.append(file_handler)

    logging.basicConfig(
        level=level,
        format='%(asctime)s - %(name)s - %(levelname)s - %(message)s',
        handlers=handlers,
        force=True
    )


def report_error(error: SympSpecError) -> int:
    """Log the failure and print one machine-readable line on stderr."""
    logging.getLogger(__name__).error(f"{type(error).__name__}: {error}")
    line = {'error': type(error).__name__, 'exit_code': error.exit_code, 'message': str(error)}
    sys.stderr.write(json.dumps(line, sort_keys=True) + "\n")
    return error.exit_code


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--verbose', '-v', action='store_true', help='Enable verbose logging')
    common.add_argument(
        '--log-file',
        type=str,
        default=os.getenv('SYMPSPEC_LOG_FILE'),
        help='Log file path (default: SYMPSPEC_LOG_FILE env var, none if unset)'
    )
    common.add_argument('--settings', type=str, help='Settings JSON (default: config/settings.json)')
    common.add_argument('--format', choices=['json', 'csv'], default='json', help='Output format')
    common.add_argument('--out', type=str, help='Output path (default: stdout)')

    source = argparse.ArgumentParser(add_help=False)
    source.add_argument('--matrix', type=str, help='Matrix CSV (one row per line, no header)')
    source.add_argument('--spec', type=str, help='HH operator spec JSON, truncated at --n')
    source.add_argument('--n', type=int, help='Truncation half-dimension for --spec')
    source.add_argument('--random', type=int, metavar='ORDER',
                        help='Random SPD test matrix of this even order')
    source.add_argument('--seed', type=int, default=0, help='Seed for --random (default: 0)')

    sweeps = argparse.ArgumentParser(add_help=False)
    sweeps.add_argument('--schedule', type=str,
                        help='Truncation sizes, e.g. 5,10,25 or 10:50:10 (default: from settings)')
    sweeps.add_argument('--workers', type=int, help='Sweep worker threads (default: from settings)')

    parser = argparse.ArgumentParser(
        description='Symplectic spectra, finite-section sweeps and GCO checks',
        epilog=EXIT_CODES,
        formatter_class=argparse.RawDescriptionHelpFormatter
    )
    sub = parser.add_subparsers(dest='command', required=True)

    cmd = sub.add_parser('williamson', parents=[common, source], help='Williamson normal form')
    cmd.add_argument('--with-transform', action='store_true', help='Include M in JSON output')

    sub.add_parser('sympeig', parents=[common, source], help='Symplectic eigenvalues')

    cmd = sub.add_parser('bounds', parents=[common, source, sweeps],
                         help='Check symplectic eigenvalues lie in [lambda_min, lambda_max]')
    cmd.add_argument('--tol', type=float, help='Slack relative to lambda_max (default: from settings)')

    cmd = sub.add_parser('sweep', parents=[common, sweeps], help='Finite-section sweep of a spec')
    cmd.add_argument('--spec', type=str, required=True, help='Operator spec JSON (H or HH)')
    cmd.add_argument('--tol', type=float, help='Branch stabilization tolerance (default: from settings)')

    cmd = sub.add_parser('gco', parents=[common, sweeps], help='GCO condition evidence')
    cmd.add_argument('--spec', type=str, required=True, help='Class A or class B spec JSON')
    cmd.add_argument('--tol', type=float, help='Tail tolerance for both series conditions')

    cmd = sub.add_parser('seq-eval', parents=[common], help='Evaluate a formula in n')
    cmd.add_argument('--expr', type=str, required=True, help='Formula, e.g. "2 + 2/n^2"')
    cmd.add_argument('--n', type=int, required=True, help='Value of n (>= 1)')

    return parser


def _schedule(args, settings: Settings):
    if getattr(args, 'schedule', None) is not None:
        return ScheduleParser.parse(args.schedule, settings.max_truncation)
    return ScheduleParser.from_list(settings.schedule, settings.max_truncation)


def _workers(args, settings: Settings) -> int:
    workers = getattr(args, 'workers', None) or settings.workers
    if workers < 1:
        raise InputError(f"--workers must be >= 1, got {workers}")
    return workers


def _load_hh(path: str):
    spec = load_spec(path)
    if not isinstance(spec, HH_KINDS):
        raise SpecFormatError(f"{path} describes an operator on H; an HH spec is needed here")
    return spec


def _source_matrix(args, settings: Settings) -> np.ndarray:
    chosen = [x for x in (args.matrix, args.spec, args.random) if x is not None]
    if len(chosen) != 1:
        raise InputError("Give exactly one of --matrix, --spec (with --n) or --random")
    if args.matrix is not None:
        return read_matrix_csv(args.matrix)
    if args.spec is not None:
        if args.n is None:
            raise InputError("--spec needs --n")
        return truncate_hh(_load_hh(args.spec), args.n, settings.commutation_tol)
    if args.random < 2 or args.random % 2:
        raise InputError(f"--random needs a positive even order, got {args.random}")
    return random_spd(args.random, np.random.default_rng(args.seed))


def _emit_table_or_json(args, frame, document):
    if args.format == 'csv':
        exporters.emit(exporters.frame_to_csv(frame), args.out)
    else:
        exporters.emit(exporters.to_json(document), args.out)


def cmd_williamson(args, settings: Settings) -> int:
    logger = logging.getLogger(__name__)
    result = williamson(_source_matrix(args, settings))
    logger.info(f"Williamson: {len(result.d)} symplectic eigenvalues, residual {result.residual:.3e}")
    _emit_table_or_json(
        args,
        exporters.williamson_frame(result),
        exporters.williamson_document(result, args.with_transform)
    )
    return 0


def cmd_sympeig(args, settings: Settings) -> int:
    d = symplectic_eigenvalues(_source_matrix(args, settings))
    _emit_table_or_json(args, exporters.spectrum_frame(d), {'d': [float(x) for x in d]})
    return 0


def cmd_bounds(args, settings: Settings) -> int:
    slack = settings.bounds_slack if args.tol is None else args.tol
    if args.spec is not None and args.n is None:
        report = bounds_sweep(_load_hh(args.spec), _schedule(args, settings), slack, settings.commutation_tol)
    else:
        report = bounds_check(_source_matrix(args, settings), slack)
    _emit_table_or_json(args, exporters.bounds_frame(report), exporters.bounds_document(report))
    return 0 if report.ok else 1


def cmd_sweep(args, settings: Settings) -> int:
    logger = logging.getLogger(__name__)
    spec = load_spec(args.spec)
    schedule = _schedule(args, settings)
    workers = _workers(args, settings)

    if isinstance(spec, H_KINDS):
        report = spectral_sweep(spec, schedule, workers)
    else:
        report = symplectic_sweep(spec, schedule, workers, settings.commutation_tol)

    stats = None
    if len(schedule) >= 2:
        stats = convergence_stats(report, settings.branch_tol if args.tol is None else args.tol)
    else:
        logger.info("Single schedule point: no convergence statistics")

    _emit_table_or_json(args, exporters.sweep_frame(report), exporters.sweep_document(report, stats))
    return 0


def cmd_gco(args, settings: Settings) -> int:
    spec = load_spec(args.spec)
    if not isinstance(spec, HH_KINDS):
        raise SpecFormatError(f"{args.spec} describes an operator on H; GCO needs class A or class B")

    g = settings.gco
    params = GcoParams(
        schedule=_schedule(args, settings),
        hs_tail_tol=g.hs_tail_tol if args.tol is None else args.tol,
        trace_tail_tol=g.trace_tail_tol if args.tol is None else args.tol,
        stagnation_window=g.stagnation_window,
        contraction=g.contraction,
        series_start=g.series_start,
        series_cap=g.series_cap,
        ctol=settings.commutation_tol,
    )
    report = gco_check(spec, params)
    _emit_table_or_json(args, exporters.gco_frame(report), exporters.gco_document(report))

    if report.overall:
        return 0
    if FAIL in report.verdicts:
        return 1
    if EVIDENCE_ONLY in report.verdicts:
        return 5
    return 1


def cmd_seq_eval(args, settings: Settings) -> int:
    if args.n < 1:
        raise InputError(f"--n must be >= 1, got {args.n}")
    value = evaluate(parse(args.expr), args.n)
    exporters.emit(f"{value:.12g}\n", args.out)
    return 0


COMMANDS = {
    'williamson': cmd_williamson,
    'sympeig': cmd_sympeig,
    'bounds': cmd_bounds,
    'sweep': cmd_sweep,
    'gco': cmd_gco,
    'seq-eval': cmd_seq_eval,
}


def main(argv: Optional[List[str]] = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)

    setup_logging(verbose=args.verbose, log_file=args.log_file)
    logger = logging.getLogger(__name__)

    try:
        settings = load_settings(args.settings)
        e = settings.eigensolver
        init_eigensolver(e.method, e.jacobi_max_order, e.max_sweeps)
        logger.debug(f"Running {args.command}")
        return COMMANDS[args.command](args, settings)
    except SympSpecError as error:
        return report_error(error)


if __name__ == '__main__':
    sys.exit(main())

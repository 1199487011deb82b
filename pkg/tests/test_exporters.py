import io
import json

import numpy as np
import pandas as pd
import pytest

from analysis.closed_forms import bounds_check
from analysis.gco import GcoParams, gco_check
from analysis.sweeps import convergence_stats, symplectic_sweep
from linalg.symplectic_core import williamson
from operators.operator_models import ClassA, Diagonal, Doubled, Toeplitz, schedule_of
from operators.seq_expr import parse
from reports import exporters
from utils.errors import InputError

DOUBLED = Doubled(Toeplitz((2.0, 0.5)))


@pytest.fixture
def sweep_report():
    return symplectic_sweep(DOUBLED, schedule_of([3, 5]))


def test_sweep_json_reads_back(tmp_path, sweep_report):
    text = exporters.to_json(exporters.sweep_document(sweep_report, convergence_stats(sweep_report)))
    path = tmp_path / 'sweep.json'
    path.write_text(text)
    assert exporters.load_sweep_report(str(path)) == sweep_report


def test_json_is_deterministic(sweep_report):
    first = exporters.to_json(exporters.sweep_document(sweep_report))
    second = exporters.to_json(exporters.sweep_document(symplectic_sweep(DOUBLED, schedule_of([3, 5]))))
    assert first == second
    assert first.endswith("\n")
    assert json.loads(first)['convergence'] is None


def test_sweep_csv(sweep_report):
    df = pd.read_csv(io.StringIO(exporters.frame_to_csv(exporters.sweep_frame(sweep_report))))
    assert list(df.columns) == exporters.SWEEP_COLUMNS
    assert len(df) == 3 + 5
    assert list(df[df['n'] == 3]['k']) == [1, 2, 3]


def test_gco_json_reads_back(tmp_path):
    one = Diagonal(parse("1"))
    report = gco_check(ClassA(one, one), GcoParams(schedule=schedule_of([5, 10])))
    path = tmp_path / 'gco.json'
    exporters.emit(exporters.to_json(exporters.gco_document(report)), str(path))
    assert exporters.load_gco_report(str(path)) == report

    df = exporters.gco_frame(report)
    assert list(df.columns) == exporters.GCO_COLUMNS
    assert set(df['condition']) == {'cond1', 'cond2', 'cond3'}


def test_load_report_errors(tmp_path):
    with pytest.raises(InputError):
        exporters.load_sweep_report(str(tmp_path / 'missing.json'))
    path = tmp_path / 'bad.json'
    path.write_text('{"report": {"kind": "symplectic"}}')
    with pytest.raises(InputError):
        exporters.load_sweep_report(str(path))


def test_williamson_document():
    result = williamson(np.diag([4.0, 1.0]))
    doc = exporters.williamson_document(result)
    assert set(doc) == {'d', 'residual'}
    assert doc['d'] == pytest.approx([2.0])
    with_m = exporters.williamson_document(result, with_transform=True)
    assert np.allclose(with_m['M'], result.M)
    assert list(exporters.williamson_frame(result).columns) == exporters.WILLIAMSON_COLUMNS


def test_bounds_document():
    report = bounds_check(np.eye(4))
    doc = exporters.bounds_document(report)
    assert doc['ok'] is True
    assert len(doc['violations']) == 0
    assert exporters.bounds_frame(report).empty


def test_emit_to_stdout(capsys):
    exporters.emit("hello\n")
    assert capsys.readouterr().out == "hello\n"

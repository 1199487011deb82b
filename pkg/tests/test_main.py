import json

import numpy as np
import pytest

from linalg.matrix_io import write_matrix_csv
from main import main


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in ('SYMPSPEC_SETTINGS', 'SYMPSPEC_WORKERS', 'SYMPSPEC_EIG_METHOD',
                 'SYMPSPEC_MAX_TRUNCATION', 'SYMPSPEC_LOG_FILE'):
        monkeypatch.delenv(name, raising=False)


def error_line(stderr: str) -> dict:
    lines = [line for line in stderr.splitlines() if line.startswith('{')]
    return json.loads(lines[-1])


def test_seq_eval(capsys):
    assert main(['seq-eval', '--expr', '1 + 1/(2*(n+1)^2) + 1/(2*(n+1)^3)', '--n', '1']) == 0
    assert float(capsys.readouterr().out) == 1.1875


def test_seq_eval_sequence_formula(capsys):
    assert main(['seq-eval', '--expr', '2+2/n^2', '--n', '2']) == 0
    assert capsys.readouterr().out == "2.5\n"


def test_seq_eval_syntax_error(capsys):
    assert main(['seq-eval', '--expr', '2 +', '--n', '1']) == 2
    line = error_line(capsys.readouterr().err)
    assert line['error'] == 'ExprSyntaxError'
    assert line['exit_code'] == 2


def test_seq_eval_division_by_zero(capsys):
    assert main(['seq-eval', '--expr', '1/(n-2)', '--n', '2']) == 4


def test_sympeig_from_csv(tmp_path, capsys):
    path = write_matrix_csv(np.diag([2.0, 3.0, 2.0, 3.0]), tmp_path / 't.csv')
    assert main(['sympeig', '--matrix', str(path)]) == 0
    assert json.loads(capsys.readouterr().out)['d'] == pytest.approx([2.0, 3.0])


def test_sympeig_rejects_indefinite(tmp_path, capsys):
    path = write_matrix_csv(np.diag([1.0, -1.0, 1.0, 1.0]), tmp_path / 't.csv')
    assert main(['sympeig', '--matrix', str(path)]) == 3
    assert error_line(capsys.readouterr().err)['error'] == 'NotPositiveDefiniteError'


def test_sympeig_odd_order(tmp_path):
    path = write_matrix_csv(np.eye(3), tmp_path / 't.csv')
    assert main(['sympeig', '--matrix', str(path)]) == 2


def test_williamson_csv_output(capsys):
    assert main(['williamson', '--random', '6', '--seed', '1', '--format', 'csv']) == 0
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == 'k,d'
    assert len(lines) == 4


def test_williamson_with_transform(spec_path, tmp_path):
    out = tmp_path / 'w.json'
    assert main(['williamson', '--spec', spec_path('doubled_toeplitz.json'), '--n', '5',
                 '--with-transform', '--out', str(out)]) == 0
    doc = json.loads(out.read_text())
    assert np.array(doc['M']).shape == (10, 10)
    assert doc['residual'] < 1e-8


def test_source_must_be_unique(capsys):
    assert main(['sympeig']) == 2
    assert main(['sympeig', '--random', '4', '--matrix', 'x.csv']) == 2


def test_sweep_json(spec_path, capsys):
    assert main(['sweep', '--spec', spec_path('doubled_toeplitz.json'), '--schedule', '5,10']) == 0
    doc = json.loads(capsys.readouterr().out)
    assert doc['report']['kind'] == 'symplectic'
    assert [row['dimension'] for row in doc['report']['per_n']] == [10, 20]
    assert doc['convergence'] is not None


def test_sweep_of_h_spec(spec_path, capsys):
    assert main(['sweep', '--spec', spec_path('block2x2_half.json'), '--schedule', '4,5',
                 '--format', 'csv']) == 0
    assert capsys.readouterr().out.startswith('n,k,value\n')


def test_sweep_bad_schedule(spec_path):
    assert main(['sweep', '--spec', spec_path('doubled_toeplitz.json'), '--schedule', '10,5']) == 2


def test_bounds_sweep(spec_path, capsys):
    assert main(['bounds', '--spec', spec_path('class_b_toeplitz.json'), '--schedule', '5,10']) == 0
    assert json.loads(capsys.readouterr().out)['ok'] is True


def test_gco_exit_codes(spec_path, capsys):
    assert main(['gco', '--spec', spec_path('class_b_diagonal.json'), '--schedule', '5,10,25']) == 0
    assert main(['gco', '--spec', spec_path('harmonic_class_a.json'), '--schedule', '5,10,25']) == 1
    assert main(['gco', '--spec', spec_path('toeplitz.json')]) == 2


def test_gco_writes_report(spec_path, tmp_path):
    out = tmp_path / 'gco' / 'identity.json'
    assert main(['gco', '--spec', spec_path('identity_class_a.json'), '--schedule', '5,10',
                 '--out', str(out)]) == 0
    doc = json.loads(out.read_text())
    assert doc['overall'] is True
    assert doc['cond3']['series'][-1][1] == 0.0


def test_log_file(tmp_path):
    log = tmp_path / 'logs' / 'run.log'
    assert main(['seq-eval', '--expr', 'n', '--n', '3', '--log-file', str(log), '-v']) == 0
    assert log.exists()

import json

import pytest

from utils.errors import InputError
from utils.settings import Settings, load_settings


@pytest.fixture(autouse=True)
def clean_env(monkeypatch):
    for name in ('SYMPSPEC_SETTINGS', 'SYMPSPEC_WORKERS', 'SYMPSPEC_EIG_METHOD', 'SYMPSPEC_MAX_TRUNCATION'):
        monkeypatch.delenv(name, raising=False)


def test_default_settings_file_matches_defaults():
    settings = load_settings()
    assert settings == Settings()


def test_settings_file_overrides(tmp_path):
    path = tmp_path / 'settings.json'
    path.write_text(json.dumps({'schedule': [4, 8], 'workers': 2, 'gco': {'stagnation_window': 2}}))
    settings = load_settings(str(path))
    assert settings.schedule == (4, 8)
    assert settings.workers == 2
    assert settings.gco.stagnation_window == 2
    assert settings.gco.contraction == 0.75


def test_environment_overrides(monkeypatch):
    monkeypatch.setenv('SYMPSPEC_WORKERS', '7')
    monkeypatch.setenv('SYMPSPEC_EIG_METHOD', 'lapack')
    settings = load_settings()
    assert settings.workers == 7
    assert settings.eigensolver.method == 'lapack'


@pytest.mark.parametrize('name, value', [
    ('SYMPSPEC_WORKERS', 'many'),
    ('SYMPSPEC_WORKERS', '0'),
    ('SYMPSPEC_EIG_METHOD', 'power'),
])
def test_bad_environment_overrides(monkeypatch, name, value):
    monkeypatch.setenv(name, value)
    with pytest.raises(InputError):
        load_settings()


def test_unknown_setting(tmp_path):
    path = tmp_path / 'settings.json'
    path.write_text(json.dumps({'colour': 'red'}))
    with pytest.raises(InputError):
        load_settings(str(path))


def test_missing_explicit_settings_file(tmp_path):
    with pytest.raises(InputError):
        load_settings(str(tmp_path / 'missing.json'))

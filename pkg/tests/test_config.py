import logging

import pytest

from spbw.config import DEFAULT_CAP, Config
from spbw.errors import SpbwError


def test_defaults(monkeypatch):
    monkeypatch.delenv('SPBW_CAP', raising=False)
    config = Config(paths=[])
    assert config.cap == DEFAULT_CAP
    assert config.ideal_cap == 64
    assert config.seed == 0


def test_layers(tmp_path, monkeypatch):
    monkeypatch.delenv('SPBW_CAP', raising=False)
    first, second = tmp_path / 'a.toml', tmp_path / 'b.toml'
    first.write_text('cap = 100\nseed = 3\n')
    second.write_text('seed = 5\n')
    config = Config(paths=[first, second, tmp_path / 'missing.toml'])
    assert config.cap == 100
    assert config.seed == 5
    assert Config(paths=[first], seed=9).seed == 9


def test_environment(monkeypatch):
    monkeypatch.setenv('SPBW_CAP', '1024')
    assert Config(paths=[]).cap == 1024
    monkeypatch.setenv('SPBW_CAP', 'lots')
    with pytest.raises(SpbwError):
        Config(paths=[])


def test_unknown_keys(tmp_path, caplog):
    path = tmp_path / 'config.toml'
    path.write_text('colour = "blue"\n')
    with caplog.at_level(logging.WARNING, logger='spbw'):
        Config(paths=[path])
    assert 'colour' in caplog.text

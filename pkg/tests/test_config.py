""" pytests tests for lib/config.py """
# pylint: disable=missing-module-docstring
# pylint: disable=missing-class-docstring
# pylint: disable=missing-function-docstring
# pylint: disable=redefined-outer-name
import logging
import os

import pytest

from lib.config import DEFAULTS, load_config, validate

TESTS = os.path.dirname(__file__)


@pytest.fixture()
def write_config(tmp_path):
    def write(text):
        path = tmp_path / "config.yaml"
        path.write_text(text, encoding="utf-8")
        return str(path)

    return write


class TestLoadConfig:
    def test_defaults(self):
        assert load_config() == DEFAULTS
        assert load_config() is not DEFAULTS

    def test_tests_config(self):
        cfg = load_config(os.path.join(TESTS, "config.yaml"))
        assert cfg["SEED"] == 7
        assert cfg["PROTOCOL"] == "cv:2"
        assert cfg["FORMAT"] == "csv"

    def test_partial_file_keeps_defaults(self, write_config):
        cfg = load_config(write_config("SEED: 3\n"))
        assert cfg["SEED"] == 3
        assert cfg["PROTOCOL"] == DEFAULTS["PROTOCOL"]

    def test_empty_file(self, write_config):
        assert load_config(write_config("")) == DEFAULTS

    def test_unknown_key_is_ignored(self, write_config, caplog):
        with caplog.at_level(logging.WARNING):
            cfg = load_config(write_config("PAUSE_FOR: 1\n"))
        assert "PAUSE_FOR" not in cfg
        assert "unknown config key PAUSE_FOR" in caplog.text

    def test_not_a_mapping(self, write_config):
        with pytest.raises(ValueError):
            load_config(write_config("- SEED\n"))

    def test_missing_file(self, tmp_path):
        with pytest.raises(OSError):
            load_config(str(tmp_path / "missing.yaml"))


class TestValidate:
    def test_coerces_types(self):
        cfg = validate({**DEFAULTS, "SEED": "5", "GAP_THRESHOLD": "0.3"})
        assert cfg["SEED"] == 5
        assert cfg["GAP_THRESHOLD"] == 0.3

    @pytest.mark.parametrize(
        "key,value",
        [
            ("SEED", "x"),
            ("FORMAT", "xml"),
            ("GAP_THRESHOLD", 1.5),
            ("MEASURE_DECIMALS", -1),
            ("STATS_DECIMALS", None),
            ("DEBUG", "False"),
            ("DEBUG", 1),
        ],
    )
    def test_rejects(self, key, value):
        with pytest.raises(ValueError):
            validate({**DEFAULTS, key: value})

""" pytests tests for utils/baseline_table.py """
# pylint: disable=missing-module-docstring
# pylint: disable=missing-class-docstring
# pylint: disable=missing-function-docstring
# pylint: disable=redefined-outer-name
import os

import pytest
import yaml

from lib.harness import Protocol
from lib.helpers import read_text
from lib.metrics import Measure
from lib.registry import ingest_baselines
from utils.baseline_table import BaselineTable, evaluate_dataset, main

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


def fixture(name):
    return os.path.join(FIXTURES, name)


@pytest.fixture()
def cfg():
    return {
        "KIND": "BASELINE_TABLE",
        "CONCURRENCY": 1,
        "PROTOCOL": "full",
        "SEED": 1,
        "RESULTS_DIR": "results",
        "DATASETS": {
            "toy": {"ARFF": fixture("toy.arff"), "XML": fixture("toy.xml")},
            "toy_meka": {"ARFF": fixture("toy_meka.arff"), "MEKA": True},
        },
    }


@pytest.fixture()
def write_cfg(tmp_path):
    def write(cfg):
        path = tmp_path / "baseline-table.yaml"
        path.write_text(yaml.safe_dump(cfg), encoding="utf-8")
        return str(path)

    return write


class TestEvaluateDataset:
    def test_toy(self):
        run = evaluate_dataset(
            "toy",
            {"ARFF": fixture("toy.arff"), "XML": fixture("toy.xml")},
            Protocol(),
        )
        assert run.error is None
        assert run.stats["distinct"] == 5
        assert run.report[Measure.HL] == pytest.approx(1 / 3)

    def test_failure_is_reported_as_text(self):
        run = evaluate_dataset(
            "broken", {"ARFF": fixture("malformed.arff")}, Protocol()
        )
        assert run.stats is None
        assert "line" in run.error


class TestBaselineTable:
    def test_relative_paths(self):
        bt = BaselineTable(
            {"DATASETS": {"d": {"ARFF": "d.arff", "XML": "d.xml"}}},
            base_dir="/data",
        )
        assert bt.datasets["d"]["ARFF"] == "/data/d.arff"
        assert bt.datasets["d"]["XML"] == "/data/d.xml"
        assert bt.results_dir == "/data/results"

    def test_valid(self, cfg):
        assert not BaselineTable(cfg).check_for_invalid_values()

    def test_invalid_values(self):
        bt = BaselineTable(
            {"CONCURRENCY": 0, "PROTOCOL": "cv:1", "DATASETS": {"d": {}}}
        )
        problems = bt.check_for_invalid_values()
        assert len(problems) == 3
        assert "d: no ARFF file" in problems

    def test_empty(self):
        assert BaselineTable({}).check_for_invalid_values() == [
            "DATASETS is empty"
        ]


class TestMain:
    def test_writes_tables(self, cfg, write_cfg, tmp_path):
        assert main(["-c", write_cfg(cfg)]) == 0
        stats = read_text(str(tmp_path / "results" / "stats.csv"))
        assert "toy,6,2,3,1.667,0.556,5," in stats
        baselines = ingest_baselines(
            read_text(str(tmp_path / "results" / "baselines.csv"))
        )
        assert baselines[("toy", Measure.SACC)] == pytest.approx(0.1667)
        assert baselines[("toy", Measure.HL)] == baselines[
            ("toy_meka", Measure.HL)
        ]

    def test_incorrect_kind(self, cfg, write_cfg):
        cfg["KIND"] = "BACKTESTING"
        assert main(["-c", write_cfg(cfg)]) == 1

    def test_invalid_config(self, cfg, write_cfg):
        cfg["PROTOCOL"] = "loo"
        assert main(["-c", write_cfg(cfg)]) == 1

    def test_failed_dataset(self, cfg, write_cfg, tmp_path):
        cfg["DATASETS"]["broken"] = {"ARFF": fixture("bad_label.arff")}
        assert main(["-c", write_cfg(cfg)]) == 2
        stats = read_text(str(tmp_path / "results" / "stats.csv"))
        assert "broken" not in stats
        assert "toy_meka" in stats

""" pytests tests for lib/harness.py """
# pylint: disable=missing-module-docstring
# pylint: disable=missing-class-docstring
# pylint: disable=missing-function-docstring
# pylint: disable=redefined-outer-name
import os

import pytest

from lib.harness import (
    FULL,
    HOLDOUT,
    KFOLD,
    Protocol,
    evaluate_baseline,
    evaluate_folds,
    split_holdout,
    split_kfold,
)
from lib.metrics import Measure
from lib.mldata import FeatureSpec, Instance, LabelSet, MultiLabelDataset
from lib.mulan import load_dataset

FIXTURES = os.path.join(os.path.dirname(__file__), "fixtures")


@pytest.fixture()
def toy():
    return load_dataset(
        os.path.join(FIXTURES, "toy.arff"), os.path.join(FIXTURES, "toy.xml")
    )


def counted(n):
    # instance i carries its own index as its only feature
    return MultiLabelDataset(
        name=f"counted{n}",
        instances=tuple(
            Instance((float(i),), LabelSet.of([i % 2], 2)) for i in range(n)
        ),
        label_names=("even", "odd"),
        feature_schema=(FeatureSpec("i", "NUMERIC"),),
    )


@pytest.fixture()
def ten():
    return counted(10)


def ids(d):
    return [int(inst.features[0]) for inst in d.instances]


class TestProtocol:
    @pytest.mark.parametrize(
        "text,kind,fraction,k",
        [
            ("full", FULL, None, None),
            ("holdout:0.7", HOLDOUT, 0.7, None),
            ("cv:10", KFOLD, None, 10),
            ("kfold:5", KFOLD, None, 5),
            (" CV:3 ", KFOLD, None, 3),
        ],
    )
    def test_parse(self, text, kind, fraction, k):
        p = Protocol.parse(text, seed=3)
        assert (p.kind, p.train_fraction, p.k) == (kind, fraction, k)
        assert p.seed == 3

    @pytest.mark.parametrize(
        "text",
        ["", "cv", "cv:1", "cv:x", "holdout:1.0", "holdout:0", "full:2"],
    )
    def test_rejects(self, text):
        with pytest.raises(ValueError):
            Protocol.parse(text)

    def test_str(self):
        assert str(Protocol.parse("holdout:0.5")) == "holdout:0.5"
        assert str(Protocol.parse("cv:10")) == "cv:10"
        assert str(Protocol()) == "full"


class TestSplitHoldout:
    def test_sizes_and_disjointness(self, ten):
        train, test = split_holdout(ten, Protocol.parse("holdout:0.7"))
        assert (train.n, test.n) == (7, 3)
        assert sorted(ids(train) + ids(test)) == list(range(10))

    def test_seeded(self, ten):
        first = split_holdout(ten, Protocol.parse("holdout:0.5", seed=1))
        again = split_holdout(ten, Protocol.parse("holdout:0.5", seed=1))
        assert ids(first[1]) == ids(again[1])

    def test_keeps_one_instance_on_each_side(self, ten):
        train, test = split_holdout(ten, Protocol.parse("holdout:0.99"))
        assert (train.n, test.n) == (9, 1)
        train, test = split_holdout(ten, Protocol.parse("holdout:0.01"))
        assert (train.n, test.n) == (1, 9)

    @pytest.mark.parametrize(
        "fraction,n,n_train",
        [("0.07", 100, 7), ("0.29", 100, 29), ("0.7", 10, 7), ("0.67", 3, 2)],
    )
    def test_exact_products_are_not_rounded_up(self, fraction, n, n_train):
        train, test = split_holdout(
            counted(n), Protocol.parse(f"holdout:{fraction}")
        )
        assert (train.n, test.n) == (n_train, n - n_train)

    def test_single_instance(self, ten):
        with pytest.raises(ValueError):
            split_holdout(ten.subset([0]), Protocol.parse("holdout:0.5"))

    def test_needs_holdout_protocol(self, ten):
        with pytest.raises(ValueError):
            split_holdout(ten, Protocol.parse("cv:2"))


class TestSplitKfold:
    def test_folds_partition_the_dataset(self, ten):
        splits = split_kfold(ten, Protocol.parse("cv:3"))
        assert len(splits) == 3
        tests = [ids(test) for _, test in splits]
        assert sorted(sum(tests, [])) == list(range(10))
        assert sorted(len(t) for t in tests) == [3, 3, 4]
        for train, test in splits:
            assert not set(ids(train)) & set(ids(test))
            assert train.n + test.n == 10

    def test_leave_one_out(self, ten):
        splits = split_kfold(ten, Protocol.parse("cv:10"))
        assert all(test.n == 1 for _, test in splits)

    def test_more_folds_than_instances(self, ten):
        with pytest.raises(ValueError):
            split_kfold(ten, Protocol.parse("cv:11"))

    def test_seeded(self, ten):
        first = split_kfold(ten, Protocol.parse("cv:5", seed=9))
        again = split_kfold(ten, Protocol.parse("cv:5", seed=9))
        assert [ids(t) for _, t in first] == [ids(t) for _, t in again]


class TestEvaluate:
    def test_full_on_toy(self, toy):
        report = evaluate_baseline(toy, Protocol())
        assert report[Measure.HL] == pytest.approx(1 / 3)
        assert report[Measure.SACC] == pytest.approx(1 / 6)
        assert report[Measure.ACC] == pytest.approx(3.5 / 6)
        assert report[Measure.PR] == pytest.approx(4 / 6)
        assert report[Measure.RE] == pytest.approx(31 / 36)
        assert report[Measure.F1] == pytest.approx(4.3 / 6)
        assert report[Measure.F1_MACRO] == pytest.approx(1.6 / 3)
        assert report[Measure.F1_MICRO] == pytest.approx(16 / 22)

    def test_full_ignores_the_seed(self, toy):
        first = evaluate_baseline(toy, Protocol(seed=1))
        second = evaluate_baseline(toy, Protocol(seed=2))
        assert first == second

    def test_one_report_per_fold(self, toy):
        assert len(evaluate_folds(toy, Protocol.parse("cv:3"))) == 3
        assert len(evaluate_folds(toy, Protocol.parse("holdout:0.5"))) == 1

    def test_kfold_averages_fold_reports(self, toy):
        p = Protocol.parse("cv:2", seed=5)
        folds = evaluate_folds(toy, p)
        report = evaluate_baseline(toy, p)
        for measure in report.values:
            assert report[measure] == pytest.approx(
                (folds[0][measure] + folds[1][measure]) / 2
            )

    def test_deterministic(self, toy):
        p = Protocol.parse("holdout:0.5", seed=11)
        assert evaluate_baseline(toy, p) == evaluate_baseline(toy, p)

    def test_duplicating_every_instance(self, toy):
        twice = MultiLabelDataset(
            name="toy2",
            instances=toy.instances + toy.instances,
            label_names=toy.label_names,
            feature_schema=toy.feature_schema,
        )
        report = evaluate_baseline(toy, Protocol())
        doubled = evaluate_baseline(twice, Protocol())
        for measure in report.values:
            assert doubled[measure] == pytest.approx(report[measure])

    def test_kfold_matches_pooled_when_every_fold_predicts_alike(self):
        # label 0 dominates every training set and sigma stays 1
        d = MultiLabelDataset(
            name="stable",
            instances=tuple(
                Instance((float(i),), LabelSet.of([0, 2] if i < 3 else [0], 3))
                for i in range(12)
            ),
            label_names=("a", "b", "c"),
            feature_schema=(FeatureSpec("i", "NUMERIC"),),
        )
        folds = evaluate_baseline(d, Protocol.parse("cv:3", seed=4))
        pooled = evaluate_baseline(d, Protocol())
        example_based = [
            Measure.HL,
            Measure.SACC,
            Measure.ACC,
            Measure.PR,
            Measure.RE,
            Measure.F1,
        ]
        for measure in example_based:
            assert folds[measure] == pytest.approx(pooled[measure])

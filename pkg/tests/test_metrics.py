""" pytests tests for lib/metrics.py """
# pylint: disable=missing-module-docstring
# pylint: disable=missing-class-docstring
# pylint: disable=missing-function-docstring
# pylint: disable=redefined-outer-name
import json

import numpy as np
import pytest

from lib.metrics import (
    MEASURES,
    BipartitionPair,
    Direction,
    EvaluationReport,
    Measure,
    accuracy,
    confusion,
    evaluate_all,
    evaluate_matrices,
    f_measure,
    hamming_loss,
    macro_f1,
    micro_f1,
    precision,
    recall,
    subset_accuracy,
)
from lib.mldata import LabelSet


def pair(truth, predicted, q):
    return BipartitionPair(LabelSet.of(truth, q), LabelSet.of(predicted, q))


@pytest.fixture()
def two_pairs():
    return [pair([0, 1], [0], 3), pair([2], [1, 2], 3)]


def oracle(pairs):
    """every measure straight from its set definition"""

    def ratio(num, den, both_empty):
        if den == 0:
            return 1.0 if both_empty else 0.0
        return num / den

    n, q = len(pairs), pairs[0].q
    values = {m: 0.0 for m in MEASURES}
    for p in pairs:
        y, z = set(p.truth.members), set(p.predicted.members)
        empty = not y and not z
        values[Measure.HL] += len(y ^ z) / q / n
        values[Measure.SACC] += (y == z) / n
        values[Measure.ACC] += ratio(len(y & z), len(y | z), empty) / n
        values[Measure.PR] += ratio(len(y & z), len(z), empty) / n
        values[Measure.RE] += ratio(len(y & z), len(y), empty) / n
        values[Measure.F1] += (
            ratio(2 * len(y & z), len(y) + len(z), empty) / n
        )

    def f1(tp, fp, fn):
        return 0.0 if 2 * tp + fp + fn == 0 else 2 * tp / (2 * tp + fp + fn)

    counts = []
    for j in range(q):
        tp = sum(1 for p in pairs if j in p.truth and j in p.predicted)
        fp = sum(1 for p in pairs if j not in p.truth and j in p.predicted)
        fn = sum(1 for p in pairs if j in p.truth and j not in p.predicted)
        counts.append((tp, fp, fn))
    values[Measure.F1_MACRO] = sum(f1(*c) for c in counts) / q
    totals = [sum(c[i] for c in counts) for i in range(3)]
    values[Measure.F1_MICRO] = f1(*totals)
    return values


def random_pairs(rng):
    n = int(rng.integers(1, 7))
    q = int(rng.integers(1, 5))
    truth = rng.random((n, q)) < 0.5
    predicted = rng.random((n, q)) < 0.5
    return [
        BipartitionPair(
            LabelSet.from_vector(truth[i]), LabelSet.from_vector(predicted[i])
        )
        for i in range(n)
    ]


class TestMeasure:
    def test_directions(self):
        assert Measure.HL.direction == Direction.LOWER_BETTER
        assert all(
            m.direction == Direction.HIGHER_BETTER
            for m in MEASURES
            if m is not Measure.HL
        )

    def test_column_order(self):
        assert [m.value for m in MEASURES] == [
            "Acc",
            "F1",
            "HL",
            "Pr",
            "Re",
            "SAcc",
            "F1-macro",
            "F1-micro",
        ]

    @pytest.mark.parametrize(
        "text,measure",
        [
            ("hamming-loss", Measure.HL),
            ("HammingLoss", Measure.HL),
            ("F1^M", Measure.F1_MACRO),
            ("macro-f1", Measure.F1_MACRO),
            ("F1^mu", Measure.F1_MICRO),
            ("micro-f1", Measure.F1_MICRO),
            ("subset-accuracy", Measure.SACC),
            (" acc ", Measure.ACC),
            ("F1-micro", Measure.F1_MICRO),
        ],
    )
    def test_aliases(self, text, measure):
        assert Measure.parse(text) is measure

    def test_unknown(self):
        with pytest.raises(ValueError):
            Measure.parse("ranking-loss")


class TestTwoPairs:
    def test_example_based(self, two_pairs):
        assert hamming_loss(two_pairs) == pytest.approx(1 / 3)
        assert subset_accuracy(two_pairs) == 0.0
        assert accuracy(two_pairs) == pytest.approx(0.5)
        assert precision(two_pairs) == pytest.approx(0.75)
        assert recall(two_pairs) == pytest.approx(0.75)
        assert f_measure(two_pairs) == pytest.approx(2 / 3)

    def test_confusion(self, two_pairs):
        counts = confusion(two_pairs)
        assert counts.q == 3
        assert counts.n == 2
        assert counts.label(0) == (1, 0, 1, 0)
        assert counts.label(1) == (0, 1, 0, 1)
        assert counts.label(2) == (1, 0, 1, 0)

    def test_label_based(self, two_pairs):
        counts = confusion(two_pairs)
        assert macro_f1(counts) == pytest.approx(2 / 3)
        assert micro_f1(counts) == pytest.approx(2 / 3)


class TestEdgeCases:
    def test_empty_sequence(self):
        with pytest.raises(ValueError):
            hamming_loss([])

    def test_mixed_label_spaces(self):
        with pytest.raises(ValueError):
            hamming_loss([pair([0], [0], 2), pair([0], [0], 3)])

    def test_pair_label_spaces(self):
        with pytest.raises(ValueError):
            BipartitionPair(LabelSet.of([0], 2), LabelSet.of([0], 3))

    def test_both_empty_scores_one(self):
        pairs = [pair([], [], 2)]
        assert accuracy(pairs) == 1.0
        assert precision(pairs) == 1.0
        assert recall(pairs) == 1.0
        assert f_measure(pairs) == 1.0
        assert hamming_loss(pairs) == 0.0

    def test_empty_prediction_scores_zero(self):
        pairs = [pair([0], [], 2)]
        assert precision(pairs) == 0.0
        assert recall(pairs) == 0.0
        assert accuracy(pairs) == 0.0

    def test_label_never_seen_nor_predicted(self):
        # 0/0 per-label F1 counts as 0
        pairs = [pair([0], [0], 2)]
        assert macro_f1(confusion(pairs)) == pytest.approx(0.5)
        assert micro_f1(confusion(pairs)) == pytest.approx(1.0)


class TestInvariants:
    def test_perfect_predictions(self):
        pairs = [pair([0, 1], [0, 1], 3), pair([2], [2], 3), pair([1], [1], 3)]
        report = evaluate_all(pairs)
        assert report[Measure.HL] == 0.0
        for measure in MEASURES:
            if measure is not Measure.HL:
                assert report[measure] == pytest.approx(1.0)

    def test_complemented_predictions(self):
        pairs = [pair([0, 1], [2], 3), pair([2], [0, 1], 3)]
        assert hamming_loss(pairs) == 1.0
        assert subset_accuracy(pairs) == 0.0

    def test_random_pairs_match_set_definitions(self):
        rng = np.random.default_rng(20230518)
        for _ in range(1000):
            pairs = random_pairs(rng)
            report = evaluate_all(pairs)
            expected = oracle(pairs)
            for measure in MEASURES:
                assert abs(report[measure] - expected[measure]) <= 1e-12

            counts = confusion(pairs)
            n, q = len(pairs), pairs[0].q
            assert report[Measure.HL] == pytest.approx(
                1 - (counts.tp.sum() + counts.tn.sum()) / (n * q), abs=1e-12
            )
            assert all(0.0 <= v <= 1.0 for v in report.values.values())

    def test_swapping_truth_and_prediction(self):
        rng = np.random.default_rng(7)
        symmetric = [
            Measure.HL,
            Measure.SACC,
            Measure.ACC,
            Measure.F1,
            Measure.F1_MACRO,
            Measure.F1_MICRO,
        ]
        for _ in range(200):
            pairs = random_pairs(rng)
            swapped = [BipartitionPair(p.predicted, p.truth) for p in pairs]
            report, mirror = evaluate_all(pairs), evaluate_all(swapped)
            for measure in symmetric:
                assert mirror[measure] == pytest.approx(report[measure])
            assert mirror[Measure.PR] == pytest.approx(report[Measure.RE])
            assert mirror[Measure.RE] == pytest.approx(report[Measure.PR])

    def test_pair_f1_is_harmonic_mean_of_pr_and_re(self):
        rng = np.random.default_rng(11)
        for _ in range(200):
            for p in random_pairs(rng):
                report = evaluate_all([p])
                pr, rc = report[Measure.PR], report[Measure.RE]
                expected = 2 * pr * rc / (pr + rc) if pr + rc > 0 else 0.0
                assert report[Measure.F1] == pytest.approx(expected)


class TestEvaluationReport:
    def test_matrices(self):
        truth = np.array([[1, 1, 0], [0, 0, 1]], dtype=bool)
        predicted = np.array([[1, 0, 0], [0, 1, 1]], dtype=bool)
        report = evaluate_matrices(truth, predicted)
        assert report[Measure.ACC] == pytest.approx(0.5)
        assert report[Measure.F1_MICRO] == pytest.approx(2 / 3)

    def test_shape_mismatch(self):
        with pytest.raises(ValueError):
            evaluate_matrices(np.zeros((2, 3)), np.zeros((2, 2)))

    def test_out_of_range(self):
        with pytest.raises(ValueError):
            EvaluationReport({Measure.ACC: 1.5})

    def test_mean(self):
        mean = EvaluationReport.mean(
            [
                EvaluationReport({Measure.ACC: 0.2, Measure.HL: 0.4}),
                EvaluationReport({Measure.ACC: 0.4, Measure.HL: 0.0}),
            ]
        )
        assert mean[Measure.ACC] == pytest.approx(0.3)
        assert mean[Measure.HL] == pytest.approx(0.2)

    def test_mean_of_nothing(self):
        with pytest.raises(ValueError):
            EvaluationReport.mean([])

    def test_csv(self, two_pairs):
        text = evaluate_all(two_pairs).to_csv("d", decimals=2)
        lines = text.splitlines()
        assert lines[0] == "dataset,measure,value,direction"
        assert lines[1] == "d,Acc,0.50,higher"
        assert lines[3] == "d,HL,0.33,lower"
        assert len(lines) == 9

    def test_csv_quotes_dataset_names(self, two_pairs):
        text = evaluate_all(two_pairs).to_csv("emotions,v2", decimals=2)
        assert text.splitlines()[1] == '"emotions,v2",Acc,0.50,higher'

    def test_json(self, two_pairs):
        data = json.loads(evaluate_all(two_pairs).to_json("d"))
        assert data["dataset"] == "d"
        assert data["values"]["Pr"] == pytest.approx(0.75)
        assert data["directions"]["HL"] == "lower"

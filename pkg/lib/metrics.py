""" bipartition evaluation measures: example-based and label-based """
import json
from dataclasses import dataclass
from enum import Enum
from typing import Any, Dict, List, Mapping, Sequence, Tuple

import numpy as np
import pandas as pd

from lib.mldata import LabelSet

# per-example terms of Accuracy, Precision, Recall and F-Measure when both
# the true and the predicted labelsets are empty
EMPTY_PAIR_SCORE = 1.0
REPORT_COLUMNS = ("dataset", "measure", "value", "direction")


class Direction(str, Enum):
    """whether smaller or greater values of a measure are better"""

    LOWER_BETTER = "lower"
    HIGHER_BETTER = "higher"


class Measure(str, Enum):
    """the eight bipartition measures, in report column order"""

    ACC = "Acc"
    F1 = "F1"
    HL = "HL"
    PR = "Pr"
    RE = "Re"
    SACC = "SAcc"
    F1_MACRO = "F1-macro"
    F1_MICRO = "F1-micro"

    @property
    def direction(self) -> Direction:
        """Hamming-Loss is the only loss among the eight"""
        if self is Measure.HL:
            return Direction.LOWER_BETTER
        return Direction.HIGHER_BETTER

    @classmethod
    def parse(cls, text: str) -> "Measure":
        """returns the measure for a canonical id or a known alias"""
        key = "".join(
            c for c in text.strip().lower() if c.isalnum() or c in "^µμ"
        )
        if key in _ALIASES:
            return _ALIASES[key]
        raise ValueError(f"unknown measure '{text}'")


_ALIASES: Dict[str, Measure] = {}
for _measure, _names in {
    Measure.ACC: ["acc", "accuracy", "examplebasedaccuracy"],
    Measure.F1: ["f1", "fmeasure", "f1measure", "examplebasedf1"],
    Measure.HL: ["hl", "hammingloss", "hamming"],
    Measure.PR: ["pr", "precision", "examplebasedprecision"],
    Measure.RE: ["re", "recall", "examplebasedrecall"],
    Measure.SACC: ["sacc", "subsetaccuracy", "exactmatch"],
    Measure.F1_MACRO: ["f1macro", "f1^m", "macrof1", "maf1", "macrofmeasure"],
    Measure.F1_MICRO: [
        "f1micro",
        "f1^mu",
        "f1^µ",
        "f1^μ",
        "microf1",
        "mif1",
        "microfmeasure",
    ],
}.items():
    for _name in _names:
        _ALIASES[_name] = _measure

MEASURES: Tuple[Measure, ...] = tuple(Measure)


@dataclass(frozen=True)
class BipartitionPair:
    """a true labelset Y_i next to a predicted labelset Z_i"""

    truth: LabelSet
    predicted: LabelSet

    def __post_init__(self) -> None:
        if self.truth.q != self.predicted.q:
            raise ValueError(
                f"truth has {self.truth.q} labels, "
                + f"prediction has {self.predicted.q}"
            )

    @property
    def q(self) -> int:
        """size of the shared label space"""
        return self.truth.q


@dataclass(frozen=True)
class LabelConfusion:
    """per-label binary confusion counts, one entry per label"""

    tp: np.ndarray
    fp: np.ndarray
    tn: np.ndarray
    fn: np.ndarray

    @property
    def q(self) -> int:
        """number of labels"""
        return int(self.tp.shape[0])

    @property
    def n(self) -> int:
        """number of instances the counts were taken over"""
        return int(self.tp[0] + self.fp[0] + self.tn[0] + self.fn[0])

    def label(self, j: int) -> Tuple[int, int, int, int]:
        """(tp, fp, tn, fn) of one label"""
        return (
            int(self.tp[j]),
            int(self.fp[j]),
            int(self.tn[j]),
            int(self.fn[j]),
        )


@dataclass(frozen=True)
class EvaluationReport:
    """measure values of one evaluation, with each measure's direction"""

    values: Mapping[Measure, float]

    def __post_init__(self) -> None:
        for measure, value in self.values.items():
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"{measure.value}={value} outside [0, 1]")

    def __getitem__(self, measure: Measure) -> float:
        return self.values[measure]

    @classmethod
    def mean(cls, reports: Sequence["EvaluationReport"]) -> "EvaluationReport":
        """unweighted mean of several reports over the same measures"""
        if not reports:
            raise ValueError("cannot average an empty list of reports")
        return cls(
            {
                measure: float(np.mean([r[measure] for r in reports]))
                for measure in reports[0].values
            }
        )

    def to_records(self, dataset: str) -> List[Dict[str, Any]]:
        """rows of the dataset,measure,value,direction CSV"""
        return [
            {
                "dataset": dataset,
                "measure": measure.value,
                "value": self.values[measure],
                "direction": measure.direction.value,
            }
            for measure in MEASURES
            if measure in self.values
        ]

    def to_csv(self, dataset: str, decimals: int = 4) -> str:
        """dataset,measure,value,direction CSV text"""
        frame = pd.DataFrame(
            self.to_records(dataset), columns=list(REPORT_COLUMNS)
        )
        return frame.to_csv(
            index=False, float_format=f"%.{decimals}f", lineterminator="\n"
        )

    def to_json(self, dataset: str) -> str:
        """JSON object keyed by measure id"""
        return json.dumps(
            {
                "dataset": dataset,
                "values": {m.value: v for m, v in self.values.items()},
                "directions": {
                    m.value: m.direction.value for m in self.values
                },
            },
            indent=2,
        )


def _matrices(
    pairs: Sequence[BipartitionPair],
) -> Tuple[np.ndarray, np.ndarray]:
    """stacks a pair sequence into N x q truth and prediction matrices"""
    if not pairs:
        raise ValueError("measures need at least one (truth, prediction) pair")
    q = pairs[0].q
    if any(p.q != q for p in pairs):
        raise ValueError("every pair must share the same label space")
    truth = np.zeros((len(pairs), q), dtype=bool)
    predicted = np.zeros((len(pairs), q), dtype=bool)
    for i, pair in enumerate(pairs):
        truth[i, list(pair.truth.members)] = True
        predicted[i, list(pair.predicted.members)] = True
    return truth, predicted


def _ratio(
    numerator: np.ndarray,
    denominator: np.ndarray,
    both_empty: np.ndarray,
) -> np.ndarray:
    """per-example ratio, 0/0 scores EMPTY_PAIR_SCORE when both labelsets
    are empty and 0 otherwise"""
    out = np.where(both_empty, EMPTY_PAIR_SCORE, 0.0)
    np.divide(numerator, denominator, out=out, where=denominator > 0)
    return out


def _example_terms(
    truth: np.ndarray, predicted: np.ndarray
) -> Dict[Measure, np.ndarray]:
    both = (truth & predicted).sum(axis=1).astype(float)
    either = (truth | predicted).sum(axis=1).astype(float)
    y_size = truth.sum(axis=1).astype(float)
    z_size = predicted.sum(axis=1).astype(float)
    empty = (y_size == 0) & (z_size == 0)
    return {
        Measure.HL: (truth ^ predicted).sum(axis=1) / truth.shape[1],
        Measure.SACC: (truth == predicted).all(axis=1).astype(float),
        Measure.ACC: _ratio(both, either, empty),
        Measure.PR: _ratio(both, z_size, empty),
        Measure.RE: _ratio(both, y_size, empty),
        Measure.F1: _ratio(2 * both, y_size + z_size, empty),
    }


def hamming_loss(pairs: Sequence[BipartitionPair]) -> float:
    """fraction of label slots where truth and prediction differ"""
    truth, predicted = _matrices(pairs)
    return float(_example_terms(truth, predicted)[Measure.HL].mean())


def subset_accuracy(pairs: Sequence[BipartitionPair]) -> float:
    """fraction of exact labelset matches"""
    truth, predicted = _matrices(pairs)
    return float(_example_terms(truth, predicted)[Measure.SACC].mean())


def accuracy(pairs: Sequence[BipartitionPair]) -> float:
    """mean Jaccard similarity |Y & Z| / |Y | Z|"""
    truth, predicted = _matrices(pairs)
    return float(_example_terms(truth, predicted)[Measure.ACC].mean())


def precision(pairs: Sequence[BipartitionPair]) -> float:
    """mean |Y & Z| / |Z|"""
    truth, predicted = _matrices(pairs)
    return float(_example_terms(truth, predicted)[Measure.PR].mean())


def recall(pairs: Sequence[BipartitionPair]) -> float:
    """mean |Y & Z| / |Y|"""
    truth, predicted = _matrices(pairs)
    return float(_example_terms(truth, predicted)[Measure.RE].mean())


def f_measure(pairs: Sequence[BipartitionPair]) -> float:
    """mean 2|Y & Z| / (|Y| + |Z|)"""
    truth, predicted = _matrices(pairs)
    return float(_example_terms(truth, predicted)[Measure.F1].mean())


def _confusion(truth: np.ndarray, predicted: np.ndarray) -> LabelConfusion:
    return LabelConfusion(
        tp=(truth & predicted).sum(axis=0).astype(np.int64),
        fp=(~truth & predicted).sum(axis=0).astype(np.int64),
        tn=(~truth & ~predicted).sum(axis=0).astype(np.int64),
        fn=(truth & ~predicted).sum(axis=0).astype(np.int64),
    )


def confusion(pairs: Sequence[BipartitionPair]) -> LabelConfusion:
    """per-label tp/fp/tn/fn counts"""
    return _confusion(*_matrices(pairs))


def _f1(tp: Any, fp: Any, fn: Any) -> Any:
    """2tp / (2tp + fp + fn), with 0/0 scoring 0"""
    denominator = 2 * np.asarray(tp, dtype=float) + fp + fn
    out = np.zeros_like(denominator, dtype=float)
    np.divide(
        2 * np.asarray(tp, dtype=float),
        denominator,
        out=out,
        where=denominator > 0,
    )
    return out


def macro_f1(c: LabelConfusion) -> float:
    """F1 per label, averaged over the labels"""
    return float(_f1(c.tp, c.fp, c.fn).mean())


def micro_f1(c: LabelConfusion) -> float:
    """F1 of the confusion counts summed over every label"""
    return float(_f1(c.tp.sum(), c.fp.sum(), c.fn.sum()))


def evaluate_matrices(
    truth: np.ndarray, predicted: np.ndarray
) -> EvaluationReport:
    """all eight measures from N x q boolean truth/prediction matrices"""
    if truth.shape != predicted.shape or truth.shape[0] == 0:
        raise ValueError(
            f"truth {truth.shape} and prediction {predicted.shape} "
            + "must be equal, non-empty shapes"
        )
    truth = truth.astype(bool)
    predicted = predicted.astype(bool)
    values: Dict[Measure, float] = {
        measure: float(terms.mean())
        for measure, terms in _example_terms(truth, predicted).items()
    }
    counts = _confusion(truth, predicted)
    values[Measure.F1_MACRO] = macro_f1(counts)
    values[Measure.F1_MICRO] = micro_f1(counts)
    # clip float noise such as 1.0000000000000002
    return EvaluationReport(
        {m: min(1.0, max(0.0, values[m])) for m in MEASURES}
    )


def evaluate_all(pairs: Sequence[BipartitionPair]) -> EvaluationReport:
    """all eight measures over a (truth, prediction) sequence"""
    return evaluate_matrices(*_matrices(pairs))

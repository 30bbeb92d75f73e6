""" multi-label dataset model and dataset/label statistics """
import logging
from dataclasses import dataclass, field
from functools import cached_property
from typing import (
    Any,
    Dict,
    FrozenSet,
    Iterable,
    Iterator,
    List,
    NamedTuple,
    Optional,
    Sequence,
    Tuple,
    Union,
)

import numpy as np

# a feature value is a number, a nominal/string token, or None for '?'
FeatureValue = Union[float, int, str, None]
# an ARFF attribute type: NUMERIC/REAL/INTEGER/STRING or the nominal values
FeatureKind = Union[str, Tuple[str, ...]]


@dataclass(frozen=True)
class LabelSet:
    """a subset of the label indices [0, q)"""

    members: FrozenSet[int]
    q: int

    def __post_init__(self) -> None:
        if self.q < 1:
            raise ValueError(f"label space needs at least 1 label: {self.q}")
        for index in self.members:
            if not 0 <= index < self.q:
                raise ValueError(f"label index {index} outside [0, {self.q})")

    @classmethod
    def of(cls, indices: Iterable[int], q: int) -> "LabelSet":
        """builds a LabelSet from any iterable of label indices"""
        return cls(frozenset(int(i) for i in indices), q)

    @classmethod
    def from_vector(cls, vector: Sequence[Any]) -> "LabelSet":
        """builds a LabelSet from a 0/1 membership vector of length q"""
        return cls(
            frozenset(int(i) for i in np.flatnonzero(np.asarray(vector))),
            len(vector),
        )

    def to_vector(self) -> np.ndarray:
        """returns the boolean membership vector of length q"""
        vector = np.zeros(self.q, dtype=bool)
        vector[list(self.members)] = True
        return vector

    def names(self, label_names: Sequence[str]) -> List[str]:
        """returns the label names of the members, in label order"""
        return [label_names[i] for i in sorted(self.members)]

    def __len__(self) -> int:
        return len(self.members)

    def __iter__(self) -> Iterator[int]:
        return iter(sorted(self.members))

    def __contains__(self, index: object) -> bool:
        return index in self.members


@dataclass(frozen=True)
class Instance:
    """one example: its feature values and its true labelset"""

    features: Tuple[FeatureValue, ...]
    labels: LabelSet


@dataclass(frozen=True)
class FeatureSpec:
    """a feature attribute as declared in the ARFF header"""

    name: str
    kind: FeatureKind

    @property
    def is_nominal(self) -> bool:
        """nominal attributes carry their declared values"""
        return isinstance(self.kind, tuple)


@dataclass(frozen=True)
class MultiLabelDataset:
    """N instances over M features and q labels, immutable once built"""

    name: str
    instances: Tuple[Instance, ...]
    label_names: Tuple[str, ...]
    feature_schema: Tuple[FeatureSpec, ...] = field(default_factory=tuple)

    def __post_init__(self) -> None:
        if not self.label_names:
            raise ValueError(f"{self.name}: a dataset needs at least 1 label")
        if not self.instances:
            raise ValueError(f"{self.name}: a dataset needs an instance")
        if len(set(self.label_names)) != len(self.label_names):
            raise ValueError(f"{self.name}: label names must be unique")
        for i, inst in enumerate(self.instances):
            if len(inst.features) != len(self.feature_schema):
                raise ValueError(
                    f"{self.name}: instance {i} has {len(inst.features)} "
                    + f"features, expected {len(self.feature_schema)}"
                )
            if inst.labels.q != len(self.label_names):
                raise ValueError(
                    f"{self.name}: instance {i} lives in a {inst.labels.q}"
                    + f"-label space, expected {len(self.label_names)}"
                )

    @property
    def n(self) -> int:
        """number of instances (N)"""
        return len(self.instances)

    @property
    def q(self) -> int:
        """number of labels (|L|)"""
        return len(self.label_names)

    @property
    def m(self) -> int:
        """number of features (M)"""
        return len(self.feature_schema)

    @cached_property
    def label_matrix(self) -> np.ndarray:
        """N x q boolean matrix, row i is the membership vector of Y_i"""
        matrix = np.zeros((self.n, self.q), dtype=bool)
        for i, inst in enumerate(self.instances):
            matrix[i, list(inst.labels.members)] = True
        matrix.setflags(write=False)
        return matrix

    def subset(
        self, indices: Iterable[int], name: Optional[str] = None
    ) -> "MultiLabelDataset":
        """returns a dataset holding the instances at the given positions"""
        return MultiLabelDataset(
            name=name or self.name,
            instances=tuple(self.instances[i] for i in indices),
            label_names=self.label_names,
            feature_schema=self.feature_schema,
        )


class FreqSummary(NamedTuple):
    """order statistics of the single-label frequencies"""

    min: float
    q1: float
    median: float
    q3: float
    max: float


@dataclass(frozen=True)
class DatasetStats:
    """size, label and labelset statistics of one dataset"""

    name: str
    instances: int
    features: int
    labels: int
    cardinality: float
    density: float
    distinct_labelsets: int
    label_frequencies: Tuple[int, ...]
    freq_summary: FreqSummary
    zero_frequency_labels: int
    empty_labelsets: int

    def to_record(self) -> Dict[str, Any]:
        """flat record, one row of a stats CSV/JSON"""
        return {
            "dataset": self.name,
            "instances": self.instances,
            "features": self.features,
            "labels": self.labels,
            "cardinality": self.cardinality,
            "density": self.density,
            "distinct": self.distinct_labelsets,
            "min": self.freq_summary.min,
            "q1": self.freq_summary.q1,
            "median": self.freq_summary.median,
            "q3": self.freq_summary.q3,
            "max": self.freq_summary.max,
            "zero_frequency_labels": self.zero_frequency_labels,
            "empty_labelsets": self.empty_labelsets,
        }


def cardinality(d: MultiLabelDataset) -> float:
    """average size of the labelsets, CR(D)"""
    return float(d.label_matrix.sum()) / d.n


def density(d: MultiLabelDataset) -> float:
    """cardinality normalised by the number of labels, DS(D)"""
    return cardinality(d) / d.q


def distinct_labelsets(d: MultiLabelDataset) -> int:
    """number of unique labelsets among the instances (#Dist)"""
    return len({inst.labels.members for inst in d.instances})


def label_frequencies(d: MultiLabelDataset) -> np.ndarray:
    """entry i counts the instances whose labelset holds label i"""
    return d.label_matrix.sum(axis=0).astype(np.int64)


def freq_summary(freqs: Sequence[float]) -> FreqSummary:
    """min, quartiles and max of a frequency vector

    quartiles interpolate linearly between the closest ranks, which is
    numpy's default percentile method.
    """
    values = np.asarray(freqs, dtype=float)
    if values.size == 0:
        raise ValueError("freq_summary() needs at least one frequency")
    q1, median, q3 = np.percentile(values, [25, 50, 75])
    return FreqSummary(
        float(values.min()),
        float(q1),
        float(median),
        float(q3),
        float(values.max()),
    )


def cooccurrence(d: MultiLabelDataset) -> np.ndarray:
    """q x q matrix, entry (i, j) counts instances holding both i and j"""
    matrix = d.label_matrix.astype(np.int64)
    return matrix.T @ matrix


def dataset_stats(d: MultiLabelDataset) -> DatasetStats:
    """computes every dataset and label statistic in one pass"""
    freqs = label_frequencies(d)
    zero_frequency = int((freqs == 0).sum())
    empty = int((d.label_matrix.sum(axis=1) == 0).sum())
    if zero_frequency:
        logging.warning(f"{d.name}: {zero_frequency} label(s) never occur")
    if empty:
        logging.warning(f"{d.name}: {empty} instance(s) have no labels")

    return DatasetStats(
        name=d.name,
        instances=d.n,
        features=d.m,
        labels=d.q,
        cardinality=cardinality(d),
        density=density(d),
        distinct_labelsets=distinct_labelsets(d),
        label_frequencies=tuple(int(f) for f in freqs),
        freq_summary=freq_summary(freqs),
        zero_frequency_labels=zero_frequency,
        empty_labelsets=empty,
    )

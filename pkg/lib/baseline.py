""" General_B: the constant-labelset baseline classifier """
import logging
from dataclasses import dataclass
from typing import Any, Dict, List, Sequence, Tuple

import numpy as np

from lib.helpers import round_half_away
from lib.mldata import (
    Instance,
    LabelSet,
    MultiLabelDataset,
    cardinality,
    cooccurrence,
    label_frequencies,
)


@dataclass(frozen=True)
class GeneralBModel:
    """a fitted General_B baseline

    ranked_labels orders every label by descending frequency, sigma is the
    rounded label cardinality, and prediction holds the first sigma ranked
    labels. The model predicts that same labelset for every instance.
    """

    dataset: str
    label_names: Tuple[str, ...]
    ranked_labels: Tuple[int, ...]
    sigma: int
    prediction: LabelSet

    @property
    def q(self) -> int:
        """size of the label space the model was fitted on"""
        return len(self.label_names)

    def predict(self, inst: Instance) -> LabelSet:
        """returns the constant prediction, features are never consulted"""
        if inst.labels.q != self.q:
            raise ValueError(
                f"instance lives in a {inst.labels.q}-label space, "
                + f"model was fitted on {self.q} labels"
            )
        return self.prediction

    def predict_all(self, instances: Sequence[Instance]) -> List[LabelSet]:
        """predicts every instance of a sequence"""
        return [self.predict(inst) for inst in instances]

    def to_record(self) -> Dict[str, Any]:
        """JSON record embedded in reports"""
        return {
            "dataset": self.dataset,
            "sigma": self.sigma,
            "ranked_labels": [self.label_names[i] for i in self.ranked_labels],
            "prediction": self.prediction.names(self.label_names),
        }


def compute_sigma(d: MultiLabelDataset) -> int:
    """closest integer to the label cardinality, kept within [1, q]"""
    return max(1, min(d.q, round_half_away(cardinality(d))))


def rank_labels(d: MultiLabelDataset) -> Tuple[int, ...]:
    """orders the labels by descending frequency

    labels with equal frequency are placed one at a time: the next slot goes
    to the tied label with the largest summed co-occurrence with every label
    already placed, and the lowest index wins whatever is still tied.
    """
    freqs = label_frequencies(d)
    pairs = cooccurrence(d)
    placed: List[int] = []
    # running sum of co-occurrence with the placed labels, per label
    affinity = np.zeros(d.q, dtype=np.int64)
    remaining = set(range(d.q))

    while remaining:
        top = max(freqs[j] for j in remaining)
        tied = [j for j in sorted(remaining) if freqs[j] == top]
        # max() keeps the first of equal keys, so the lowest index wins
        best = max(tied, key=lambda j: affinity[j])
        placed.append(best)
        remaining.remove(best)
        affinity += pairs[best]

    return tuple(placed)


def fit_general_b(d: MultiLabelDataset) -> GeneralBModel:
    """fits General_B on a dataset (a full dataset or a training fold)"""
    ranked = rank_labels(d)
    sigma = compute_sigma(d)
    model = GeneralBModel(
        dataset=d.name,
        label_names=d.label_names,
        ranked_labels=ranked,
        sigma=sigma,
        prediction=LabelSet.of(ranked[:sigma], d.q),
    )
    logging.debug(
        f"{d.name}: ranked labels {[d.label_names[i] for i in ranked]}"
    )
    logging.info(
        f"{d.name}: General_B sigma={sigma} "
        + f"prediction={model.prediction.names(d.label_names)}"
    )
    return model

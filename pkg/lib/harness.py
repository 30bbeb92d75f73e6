""" evaluation protocols: full dataset, hold-out and k-fold """
import logging
import math
import re
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from lib.baseline import fit_general_b
from lib.metrics import EvaluationReport, evaluate_matrices
from lib.mldata import MultiLabelDataset

FULL = "full"
HOLDOUT = "holdout"
KFOLD = "kfold"

_RE_PROTOCOL = re.compile(r"^(full|holdout|cv|kfold)(?::(.+))?$")

Split = Tuple[MultiLabelDataset, MultiLabelDataset]


@dataclass(frozen=True)
class Protocol:
    """how a dataset is split between fitting and evaluation"""

    kind: str = FULL
    train_fraction: Optional[float] = None
    k: Optional[int] = None
    seed: int = 42

    def __post_init__(self) -> None:
        if self.kind == HOLDOUT:
            if self.train_fraction is None or not (
                0.0 < self.train_fraction < 1.0
            ):
                raise ValueError(
                    "hold-out fraction must lie in (0, 1): "
                    + f"{self.train_fraction}"
                )
        elif self.kind == KFOLD:
            if self.k is None or self.k < 2:
                raise ValueError(f"k-fold needs k >= 2: {self.k}")
        elif self.kind != FULL:
            raise ValueError(f"unknown protocol kind '{self.kind}'")

    @classmethod
    def parse(cls, text: str, seed: int = 42) -> "Protocol":
        """parses full | holdout:F | cv:K"""
        matches = _RE_PROTOCOL.match(text.strip().lower())
        if not matches:
            raise ValueError(
                f"bad protocol '{text}', expected full, holdout:F or cv:K"
            )
        kind, arg = matches.groups()
        try:
            if kind == FULL:
                if arg is not None:
                    raise ValueError("full takes no argument")
                return cls(FULL, seed=seed)
            if kind == HOLDOUT:
                return cls(HOLDOUT, train_fraction=float(arg), seed=seed)
            return cls(KFOLD, k=int(arg), seed=seed)
        except (TypeError, ValueError) as err:
            raise ValueError(f"bad protocol '{text}': {err}") from err

    def __str__(self) -> str:
        if self.kind == HOLDOUT:
            return f"holdout:{self.train_fraction:g}"
        if self.kind == KFOLD:
            return f"cv:{self.k}"
        return FULL


def _shuffled(n: int, seed: int) -> np.ndarray:
    return np.random.default_rng(seed).permutation(n)


def split_holdout(d: MultiLabelDataset, p: Protocol) -> Split:
    """seeded shuffle, the first ceil(fraction * N) instances train"""
    if p.kind != HOLDOUT or p.train_fraction is None:
        raise ValueError(f"split_holdout() needs a hold-out protocol: {p}")
    if d.n < 2:
        raise ValueError(f"{d.name}: cannot hold out from {d.n} instance(s)")

    # 0.07 * 100 is 7.000000000000001
    wanted = math.ceil(round(p.train_fraction * d.n, 9))
    n_train = min(d.n - 1, max(1, wanted))
    order = _shuffled(d.n, p.seed)
    logging.debug(f"{d.name}: hold-out {n_train}/{d.n - n_train}")
    return (
        d.subset(sorted(order[:n_train]), name=f"{d.name}[train]"),
        d.subset(sorted(order[n_train:]), name=f"{d.name}[test]"),
    )


def split_kfold(d: MultiLabelDataset, p: Protocol) -> List[Split]:
    """seeded shuffle cut into k test folds of size floor or ceil(N/k)"""
    if p.kind != KFOLD or p.k is None:
        raise ValueError(f"split_kfold() needs a k-fold protocol: {p}")
    if p.k > d.n:
        raise ValueError(f"{d.name}: {p.k} folds for {d.n} instances")

    order = _shuffled(d.n, p.seed)
    # array_split hands the N mod k extra instances to the first folds
    folds = np.array_split(order, p.k)
    splits: List[Split] = []
    for i, test in enumerate(folds):
        train = np.concatenate(folds[:i] + folds[i + 1 :])
        splits.append(
            (
                d.subset(sorted(train), name=f"{d.name}[train{i}]"),
                d.subset(sorted(test), name=f"{d.name}[test{i}]"),
            )
        )
    logging.debug(f"{d.name}: fold sizes {[len(f) for f in folds]}")
    return splits


def _fit_and_score(
    train: MultiLabelDataset, test: MultiLabelDataset
) -> EvaluationReport:
    model = fit_general_b(train)
    predicted = np.array(
        [s.to_vector() for s in model.predict_all(test.instances)]
    )
    return evaluate_matrices(test.label_matrix, predicted)


def evaluate_folds(
    d: MultiLabelDataset, p: Protocol
) -> List[EvaluationReport]:
    """one report per evaluation: a single one for full and hold-out"""
    if p.kind == FULL:
        return [_fit_and_score(d, d)]
    if p.kind == HOLDOUT:
        return [_fit_and_score(*split_holdout(d, p))]
    return [_fit_and_score(*split) for split in split_kfold(d, p)]


def evaluate_baseline(d: MultiLabelDataset, p: Protocol) -> EvaluationReport:
    """General_B measure values for a dataset under a protocol; k-fold
    reports are averaged without weights"""
    reports = evaluate_folds(d, p)
    report = EvaluationReport.mean(reports)
    logging.info(f"{d.name}: evaluated General_B under {p}")
    return report

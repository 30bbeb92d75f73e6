""" published results: ingestion, comparison against baselines, summaries """
import io
import logging
import re
from dataclasses import dataclass, field
from typing import (
    Any,
    Dict,
    Iterable,
    List,
    Mapping,
    Optional,
    Sequence,
    Tuple,
)

import numpy as np
import pandas as pd

from lib.exceptions import MissingBaselineError, ResultsFormatError
from lib.helpers import percentage
from lib.metrics import MEASURES, Direction, EvaluationReport, Measure

RESULT_COLUMNS = [
    "paper_id",
    "dataset",
    "measure",
    "value",
    "protocol",
    "stddev",
]
BASELINE_COLUMNS = ["dataset", "measure", "value"]
UNSPECIFIED = "unspecified"

# values read from CSV carry decimal noise, 0.99 - 0.49 < 0.5 in floats
GAP_TOLERANCE = 1e-9

CellKey = Tuple[str, Measure]
Baselines = Dict[CellKey, float]
Counts = Tuple[int, int]

_RE_PARSER_LINE = re.compile(r"line (\d+)")


@dataclass(frozen=True)
class PublishedResult:
    """one measure value reported by a publication"""

    paper_id: str
    dataset: str
    measure: Measure
    value: float
    protocol: str = UNSPECIFIED
    stddev: Optional[float] = None

    def __post_init__(self) -> None:
        if not 0.0 <= self.value <= 1.0:
            raise ValueError(f"value {self.value} outside [0, 1]")
        if self.stddev is not None and self.stddev < 0:
            raise ValueError(f"negative stddev {self.stddev}")

    @property
    def has_stddev(self) -> bool:
        """whether the publication reported a standard deviation"""
        return self.stddev is not None


def _read_frame(text: str, columns: Sequence[str]) -> pd.DataFrame:
    """reads CSV text as strings, checking the header"""
    if not text.strip():
        return pd.DataFrame(columns=list(columns))
    try:
        frame = pd.read_csv(
            io.StringIO(text),
            dtype=str,
            keep_default_na=False,
            skip_blank_lines=False,
        )
    except pd.errors.ParserError as err:
        matches = _RE_PARSER_LINE.search(str(err))
        line = int(matches.group(1)) if matches else 0
        raise ResultsFormatError([(line, str(err).strip())]) from err

    frame.columns = [str(c).strip() for c in frame.columns]
    if list(frame.columns[: len(columns)]) != list(columns):
        raise ResultsFormatError(
            [
                (
                    1,
                    f"expected header {','.join(columns)}, "
                    + f"got {','.join(frame.columns)}",
                )
            ]
        )
    return frame.fillna("")


def _rows(frame: pd.DataFrame) -> Iterable[Tuple[int, Dict[str, str]]]:
    """yields (line number, stripped row) for every non-blank row"""
    for index, row in enumerate(frame.to_dict("records")):
        cleaned = {k: str(v).strip() for k, v in row.items()}
        if any(cleaned.values()):
            # line 1 is the header
            yield index + 2, cleaned


def _number(row: Dict[str, str], key: str) -> float:
    try:
        return float(row[key])
    except ValueError as err:
        raise ValueError(f"non-numeric {key} '{row[key]}'") from err


def _result(row: Dict[str, str]) -> PublishedResult:
    if not row["paper_id"]:
        raise ValueError("empty paper_id")
    if not row["dataset"]:
        raise ValueError("empty dataset")
    value = _number(row, "value")
    if not 0.0 <= value <= 1.0:
        raise ValueError(f"value {value} outside [0, 1]")
    return PublishedResult(
        paper_id=row["paper_id"],
        dataset=row["dataset"],
        measure=Measure.parse(row["measure"]),
        value=value,
        protocol=row["protocol"] or UNSPECIFIED,
        stddev=_number(row, "stddev") if row["stddev"] else None,
    )


def ingest_csv(text: str) -> List[PublishedResult]:
    """parses a paper_id,dataset,measure,value,protocol,stddev CSV

    every invalid row is collected and reported together in one
    ResultsFormatError.
    """
    frame = _read_frame(text, RESULT_COLUMNS)
    results: List[PublishedResult] = []
    errors: List[Tuple[int, str]] = []
    for line, row in _rows(frame):
        try:
            results.append(_result(row))
        except ValueError as err:
            errors.append((line, str(err)))
    if errors:
        raise ResultsFormatError(errors)
    if not results:
        logging.warning("results file holds no published values")
    logging.debug(f"ingested {len(results)} published value(s)")
    return results


def ingest_baselines(text: str) -> Baselines:
    """parses a dataset,measure,value CSV (a trailing direction column, as
    written by the eval command, is accepted and ignored)"""
    frame = _read_frame(text, BASELINE_COLUMNS)
    baselines: Baselines = {}
    errors: List[Tuple[int, str]] = []
    for line, row in _rows(frame):
        try:
            key = (row["dataset"], Measure.parse(row["measure"]))
            value = _number(row, "value")
            if not 0.0 <= value <= 1.0:
                raise ValueError(f"value {value} outside [0, 1]")
            if key in baselines:
                raise ValueError(
                    f"duplicate baseline {key[0]}/{key[1].value}"
                )
            baselines[key] = value
        except ValueError as err:
            errors.append((line, str(err)))
    if errors:
        raise ResultsFormatError(errors)
    return baselines


def baselines_from_reports(
    reports: Mapping[str, EvaluationReport],
) -> Baselines:
    """turns per-dataset baseline reports into a (dataset, measure) map"""
    return {
        (dataset, measure): value
        for dataset, report in reports.items()
        for measure, value in report.values.items()
    }


def is_underperforming(
    r: PublishedResult, baseline: float, direction: Direction
) -> bool:
    """worse than or equal to the baseline, in the measure's direction"""
    if direction == Direction.LOWER_BETTER:
        return r.value >= baseline
    return r.value <= baseline


@dataclass(frozen=True)
class ComparisonSummary:
    """#U (underperforming) and #M (recorded) counts per cell, per dataset
    row and per measure column"""

    cells: Dict[CellKey, Counts] = field(default_factory=dict)
    dataset_totals: Dict[str, Counts] = field(default_factory=dict)
    measure_totals: Dict[Measure, Counts] = field(default_factory=dict)
    total: Counts = (0, 0)
    with_stddev: int = 0
    protocols: Dict[str, int] = field(default_factory=dict)

    @staticmethod
    def percentage(counts: Counts) -> Optional[float]:
        """100 * #U / #M, None when nothing was recorded"""
        return percentage(*counts)

    def datasets(self) -> List[str]:
        """dataset rows sorted by descending percentage"""

        def key(dataset: str) -> Tuple[int, float, str]:
            pct = self.percentage(self.dataset_totals[dataset])
            return (pct is None, -(pct or 0.0), dataset)

        return sorted(self.dataset_totals, key=key)

    def cell(self, dataset: str, measure: Measure) -> Counts:
        """(#U, #M) of one cell, (0, 0) when empty"""
        return self.cells.get((dataset, measure), (0, 0))


def _counts(frame: pd.DataFrame, by: Any) -> Dict[Any, Counts]:
    grouped = frame.groupby(by, sort=True)["under"].agg(["sum", "count"])
    return {
        key: (int(row["sum"]), int(row["count"]))
        for key, row in grouped.iterrows()
    }


def _orphans(
    results: Sequence[PublishedResult], baselines: Mapping[CellKey, float]
) -> List[Tuple[str, str, str]]:
    return [
        (r.paper_id, r.dataset, r.measure.value)
        for r in results
        if (r.dataset, r.measure) not in baselines
    ]


def compare(
    results: Sequence[PublishedResult], baselines: Mapping[CellKey, float]
) -> ComparisonSummary:
    """counts the published values that fail to beat their baseline"""
    orphans = _orphans(results, baselines)
    if orphans:
        raise MissingBaselineError(orphans)
    if not results:
        return ComparisonSummary()

    frame = pd.DataFrame(
        [
            {
                "dataset": r.dataset,
                "measure": r.measure.value,
                "under": is_underperforming(
                    r, baselines[(r.dataset, r.measure)], r.measure.direction
                ),
                "has_stddev": r.has_stddev,
                "protocol": r.protocol,
            }
            for r in results
        ]
    )
    cells = {
        (dataset, Measure(measure)): counts
        for (dataset, measure), counts in _counts(
            frame, ["dataset", "measure"]
        ).items()
    }
    summary = ComparisonSummary(
        cells=cells,
        dataset_totals=_counts(frame, "dataset"),
        measure_totals={
            Measure(m): counts
            for m, counts in _counts(frame, "measure").items()
        },
        total=(int(frame["under"].sum()), len(frame)),
        with_stddev=int(frame["has_stddev"].sum()),
        protocols={
            str(k): int(v)
            for k, v in frame["protocol"].value_counts().sort_index().items()
        },
    )
    logging.info(
        f"{summary.total[0]} of {summary.total[1]} published value(s) "
        + "underperform or equal the baseline"
    )
    return summary


@dataclass(frozen=True)
class CellDistribution:
    """order statistics of the published values of one (dataset, measure)"""

    count: int
    min: float
    q1: float
    median: float
    q3: float
    max: float
    best: float
    worst: float
    baseline: Optional[float] = None

    @property
    def spread(self) -> float:
        """distance between the highest and the lowest value"""
        return self.max - self.min

    def gap(self, threshold: float = 0.5) -> bool:
        """highest and lowest values differ by at least the threshold"""
        return self.spread >= threshold - GAP_TOLERANCE

    def improvement(self, direction: Direction) -> Optional[float]:
        """how far the best published value beats the baseline"""
        if self.baseline is None:
            return None
        if direction == Direction.LOWER_BETTER:
            return self.baseline - self.best
        return self.best - self.baseline


@dataclass(frozen=True)
class MeasureDistribution:
    """CellDistribution for every (dataset, measure) with published values"""

    cells: Dict[CellKey, CellDistribution] = field(default_factory=dict)

    def datasets(self) -> List[str]:
        """datasets with at least one summarized cell, by name"""
        return sorted({dataset for dataset, _ in self.cells})


def _cell(
    values: np.ndarray, measure: Measure, baseline: Optional[float]
) -> CellDistribution:
    q1, median, q3 = np.percentile(values, [25, 50, 75])
    low, high = float(values.min()), float(values.max())
    if measure.direction == Direction.LOWER_BETTER:
        best, worst = low, high
    else:
        best, worst = high, low
    return CellDistribution(
        count=int(values.size),
        min=low,
        q1=float(q1),
        median=float(median),
        q3=float(q3),
        max=high,
        best=best,
        worst=worst,
        baseline=baseline,
    )


def distribution(
    results: Sequence[PublishedResult],
    baselines: Optional[Mapping[CellKey, float]] = None,
) -> MeasureDistribution:
    """per-cell spread of the published values, with the baseline overlaid"""
    grouped: Dict[CellKey, List[float]] = {}
    for r in results:
        grouped.setdefault((r.dataset, r.measure), []).append(r.value)

    baselines = baselines or {}
    cells = {
        key: _cell(np.asarray(values, dtype=float), key[1], baselines.get(key))
        for key, values in sorted(
            grouped.items(),
            key=lambda item: (item[0][0], MEASURES.index(item[0][1])),
        )
    }
    return MeasureDistribution(cells)

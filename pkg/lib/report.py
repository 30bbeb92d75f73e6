""" Markdown, CSV and JSON renderings of baselines and comparisons """
import json
import logging
import os
from typing import Any, Dict, List, Mapping, Optional, Sequence, Tuple

import pandas as pd

from lib.helpers import fmt_float, fmt_number
from lib.metrics import MEASURES, Measure
from lib.registry import (
    CellKey,
    ComparisonSummary,
    Counts,
    MeasureDistribution,
)

BUNDLE_FILES = [
    "report.md",
    "baselines.csv",
    "underperformance.csv",
    "distribution.csv",
    "bundle.json",
]


def markdown_table(
    header: Sequence[str], rows: Sequence[Sequence[str]]
) -> str:
    """renders a Markdown pipe table"""
    lines = [
        "| " + " | ".join(header) + " |",
        "|" + "|".join("---" for _ in header) + "|",
    ]
    for row in rows:
        lines.append("| " + " | ".join(row) + " |")
    return "\n".join(lines)


def _sorted_cells(
    baselines: Mapping[CellKey, float]
) -> List[Tuple[CellKey, float]]:
    # datasets by name, measures in column order
    return sorted(
        baselines.items(),
        key=lambda item: (item[0][0], MEASURES.index(item[0][1])),
    )


def _pct(counts: Counts) -> str:
    return fmt_float(ComparisonSummary.percentage(counts), 1)


def baseline_frame(baselines: Mapping[CellKey, float]) -> pd.DataFrame:
    """datasets as rows, the eight measures as columns"""
    datasets = sorted({dataset for dataset, _ in baselines})
    return pd.DataFrame(
        [
            [baselines.get((d, m), float("nan")) for m in MEASURES]
            for d in datasets
        ],
        index=pd.Index(datasets, name="dataset"),
        columns=[m.value for m in MEASURES],
    )


def underperformance_frame(summary: ComparisonSummary) -> pd.DataFrame:
    """one row per (dataset, measure) cell, datasets sorted by percentage"""
    records: List[Dict[str, Any]] = []
    for dataset in summary.datasets():
        for measure in MEASURES:
            under, recorded = summary.cell(dataset, measure)
            if not recorded:
                continue
            records.append(
                {
                    "dataset": dataset,
                    "measure": measure.value,
                    "underperforming": under,
                    "recorded": recorded,
                    "percentage": summary.percentage((under, recorded)),
                }
            )
    return pd.DataFrame(
        records,
        columns=[
            "dataset",
            "measure",
            "underperforming",
            "recorded",
            "percentage",
        ],
    )


def distribution_frame(
    dist: MeasureDistribution, threshold: float = 0.5
) -> pd.DataFrame:
    """order statistics of every summarized cell"""
    records = [
        {
            "dataset": dataset,
            "measure": measure.value,
            "count": cell.count,
            "min": cell.min,
            "q1": cell.q1,
            "median": cell.median,
            "q3": cell.q3,
            "max": cell.max,
            "best": cell.best,
            "worst": cell.worst,
            "baseline": cell.baseline,
            "improvement": cell.improvement(measure.direction),
            "gap": cell.gap(threshold),
        }
        for (dataset, measure), cell in dist.cells.items()
    ]
    return pd.DataFrame(
        records,
        columns=[
            "dataset",
            "measure",
            "count",
            "min",
            "q1",
            "median",
            "q3",
            "max",
            "best",
            "worst",
            "baseline",
            "improvement",
            "gap",
        ],
    )


def baseline_table(
    baselines: Mapping[CellKey, float], decimals: int
) -> str:
    """Markdown table with one row per dataset and one column per measure"""
    frame = baseline_frame(baselines)
    rows = [
        [str(dataset)]
        + [
            fmt_float(None if pd.isna(v) else float(v), decimals)
            for v in frame.loc[dataset]
        ]
        for dataset in frame.index
    ]
    return markdown_table(["Dataset"] + list(frame.columns), rows)


def underperformance_table(summary: ComparisonSummary) -> str:
    """Markdown table of #U/#M per cell with row and column totals, rows
    sorted by percentage"""
    header = ["Dataset"] + [m.value for m in MEASURES] + ["#U", "#M", "%"]
    rows: List[List[str]] = []
    for dataset in summary.datasets():
        cells = []
        for measure in MEASURES:
            under, recorded = summary.cell(dataset, measure)
            cells.append(f"{under}/{recorded}" if recorded else "")
        totals = summary.dataset_totals[dataset]
        rows.append(
            [dataset]
            + cells
            + [str(totals[0]), str(totals[1]), _pct(totals)]
        )

    columns = [summary.measure_totals.get(m, (0, 0)) for m in MEASURES]
    rows.append(
        ["#U"]
        + [str(u) for u, _ in columns]
        + [str(summary.total[0]), "", ""]
    )
    rows.append(
        ["#M"]
        + [str(n) for _, n in columns]
        + ["", str(summary.total[1]), ""]
    )
    rows.append(
        ["%"] + [_pct(c) for c in columns] + ["", "", _pct(summary.total)]
    )
    return markdown_table(header, rows)


def _distribution_section(
    dist: MeasureDistribution, threshold: float, decimals: int
) -> str:
    header = [
        "Dataset",
        "Measure",
        "n",
        "Worst",
        "Q1",
        "Median",
        "Q3",
        "Best",
        "Baseline",
        "Gap",
    ]
    rows = [
        [
            dataset,
            measure.value,
            str(cell.count),
            fmt_float(cell.worst, decimals),
            fmt_float(cell.q1, decimals),
            fmt_float(cell.median, decimals),
            fmt_float(cell.q3, decimals),
            fmt_float(cell.best, decimals),
            fmt_float(cell.baseline, decimals),
            "**gap**" if cell.gap(threshold) else "",
        ]
        for (dataset, measure), cell in dist.cells.items()
    ]
    return markdown_table(header, rows)


def render_report(
    summary: ComparisonSummary,
    dist: MeasureDistribution,
    baselines: Optional[Mapping[CellKey, float]] = None,
    threshold: float = 0.5,
    decimals: int = 4,
) -> str:
    """deterministic Markdown report: baselines, underperformance sorted by
    percentage, and per-cell distributions with gap flags"""
    sections = [
        "# Baseline audit",
        "## Baselines",
        baseline_table(baselines or {}, decimals),
        "## Published values underperforming or equal to the baseline",
        underperformance_table(summary),
        f"{summary.with_stddev} of {summary.total[1]} published value(s) "
        + "report a standard deviation.",
    ]
    if summary.protocols:
        sections.append(
            markdown_table(
                ["Protocol", "Values"],
                [[p, str(n)] for p, n in summary.protocols.items()],
            )
        )
    sections += [
        "## Distribution of published values",
        _distribution_section(dist, threshold, decimals),
        f"Gap: best and worst values differ by at least {threshold:g}.",
    ]
    return "\n\n".join(sections) + "\n"


def _csv(frame: pd.DataFrame, decimals: int, index: bool = False) -> str:
    return frame.to_csv(
        index=index, float_format=f"%.{decimals}f", lineterminator="\n"
    )


def baselines_csv(
    baselines: Mapping[CellKey, float], decimals: int = 4
) -> str:
    """dataset,measure,value,direction CSV, as ingest_baselines reads it"""
    frame = pd.DataFrame(
        [
            {
                "dataset": dataset,
                "measure": measure.value,
                "value": value,
                "direction": measure.direction.value,
            }
            for (dataset, measure), value in _sorted_cells(baselines)
        ],
        columns=["dataset", "measure", "value", "direction"],
    )
    return _csv(frame, decimals)


def underperformance_csv(summary: ComparisonSummary) -> str:
    """one CSV row per cell, percentages to one decimal"""
    return _csv(underperformance_frame(summary), 1)


def render_tables(
    summary: ComparisonSummary,
    dist: MeasureDistribution,
    baselines: Optional[Mapping[CellKey, float]] = None,
    threshold: float = 0.5,
    decimals: int = 4,
) -> Dict[str, str]:
    """CSV text of the three report tables, keyed by file name"""
    return {
        "baselines.csv": baselines_csv(baselines or {}, decimals),
        "underperformance.csv": underperformance_csv(summary),
        "distribution.csv": _csv(
            distribution_frame(dist, threshold), decimals
        ),
    }


def _counts_record(counts: Counts) -> Dict[str, Any]:
    return {
        "underperforming": counts[0],
        "recorded": counts[1],
        "percentage": ComparisonSummary.percentage(counts),
    }


def summary_record(summary: ComparisonSummary) -> Dict[str, Any]:
    """comparison counts as JSON-able data"""
    return {
        "cells": underperformance_frame(summary).to_dict("records"),
        "datasets": {
            d: _counts_record(summary.dataset_totals[d])
            for d in summary.datasets()
        },
        "measures": {
            m.value: _counts_record(summary.measure_totals[m])
            for m in MEASURES
            if m in summary.measure_totals
        },
        "total": _counts_record(summary.total),
        "with_stddev": summary.with_stddev,
        "protocols": summary.protocols,
    }


def bundle(
    summary: ComparisonSummary,
    dist: MeasureDistribution,
    baselines: Optional[Mapping[CellKey, float]] = None,
    threshold: float = 0.5,
) -> Dict[str, Any]:
    """every aggregate of the report as plain JSON-able data"""
    return {
        "baselines": [
            {"dataset": d, "measure": m.value, "value": v}
            for (d, m), v in _sorted_cells(baselines or {})
        ],
        "underperformance": summary_record(summary),
        "distribution": [
            {
                k: (None if isinstance(v, float) and pd.isna(v) else v)
                for k, v in record.items()
            }
            for record in distribution_frame(dist, threshold).to_dict(
                "records"
            )
        ],
        "gap_threshold": threshold,
    }


def to_json(data: Dict[str, Any]) -> str:
    """stable JSON text"""
    return json.dumps(data, indent=2, default=_json_default) + "\n"


def _json_default(value: Any) -> Any:
    # numpy scalars coming out of pandas records
    if hasattr(value, "item"):
        return value.item()
    if isinstance(value, Measure):
        return value.value
    raise TypeError(f"cannot serialize {type(value).__name__}")


def write_bundle(
    out_dir: str,
    summary: ComparisonSummary,
    dist: MeasureDistribution,
    baselines: Optional[Mapping[CellKey, float]] = None,
    threshold: float = 0.5,
    decimals: int = 4,
) -> List[str]:
    """writes report.md, the CSV tables and bundle.json into out_dir"""
    os.makedirs(out_dir, exist_ok=True)
    contents = {
        "report.md": render_report(
            summary, dist, baselines, threshold, decimals
        ),
        **render_tables(summary, dist, baselines, threshold, decimals),
        "bundle.json": to_json(bundle(summary, dist, baselines, threshold)),
    }
    paths: List[str] = []
    for filename in BUNDLE_FILES:
        path = os.path.join(out_dir, filename)
        with open(path, "w", encoding="utf-8") as f:
            f.write(contents[filename])
        paths.append(path)
    logging.info(f"wrote {len(paths)} report file(s) to {out_dir}")
    return paths


STATS_HEADER = {
    "dataset": "Dataset",
    "instances": "N",
    "features": "M",
    "labels": "q",
    "cardinality": "CR",
    "density": "DS",
    "distinct": "#Dist",
    "min": "Min",
    "q1": "1Q",
    "median": "Med",
    "q3": "3Q",
    "max": "Max",
    "zero_frequency_labels": "Unused labels",
    "empty_labelsets": "Empty labelsets",
}


def format_stats(
    record: Mapping[str, Any], decimals: int = 3
) -> Dict[str, str]:
    """stats record as strings: CR and DS rounded, counts and quartiles
    without a trailing .0"""
    row: Dict[str, str] = {}
    for key in STATS_HEADER:
        value = record[key]
        if key in ("cardinality", "density"):
            row[key] = fmt_float(value, decimals)
        elif isinstance(value, (int, float)):
            row[key] = fmt_number(value)
        else:
            row[key] = str(value)
    return row


def stats_csv(
    records: Sequence[Mapping[str, Any]], decimals: int = 3
) -> str:
    """one CSV row per dataset"""
    frame = pd.DataFrame(
        [format_stats(r, decimals) for r in records],
        columns=list(STATS_HEADER),
    )
    return frame.to_csv(index=False, lineterminator="\n")


def stats_table(
    records: Sequence[Mapping[str, Any]], decimals: int = 3
) -> str:
    """Markdown table, one row per dataset"""
    rows = [list(format_stats(r, decimals).values()) for r in records]
    return markdown_table(list(STATS_HEADER.values()), rows)


RANKING_HEADER = ("rank", "label", "frequency", "predicted")


def ranking_csv(ranking: Sequence[Mapping[str, Any]]) -> str:
    """General_B label ranking, predicted labels marked with 1"""
    frame = pd.DataFrame(ranking, columns=list(RANKING_HEADER))
    frame["predicted"] = frame["predicted"].astype(int)
    return frame.to_csv(index=False, lineterminator="\n")

""" baseline table: statistics and General_B baselines for many datasets """
import os
import sys
from argparse import ArgumentParser, Namespace
from datetime import datetime
from multiprocessing import Pool
from typing import Any, Dict, List, NamedTuple, Optional, Sequence

import yaml

from lib.exceptions import MlbaseError
from lib.harness import Protocol, evaluate_baseline
from lib.metrics import EvaluationReport
from lib.mldata import dataset_stats
from lib.mulan import load_dataset
from lib.registry import baselines_from_reports
from lib.report import baselines_csv, stats_csv


def log_msg(msg: str) -> None:
    """logs out message prefixed with timestamp"""
    now: str = datetime.now().strftime("%H:%M:%S")
    print(f"{now} BASELINE-TABLE: {msg}")


class DatasetRun(NamedTuple):
    """outcome of one dataset, error is set when it failed"""

    name: str
    stats: Optional[Dict[str, Any]]
    report: Optional[EvaluationReport]
    error: Optional[str]


def evaluate_dataset(
    name: str, entry: Dict[str, Any], protocol: Protocol
) -> DatasetRun:
    """loads one dataset, computes its statistics and baseline report"""
    try:
        d = load_dataset(
            entry["ARFF"],
            entry.get("XML"),
            meka=bool(entry.get("MEKA", False)),
            name=name,
        )
        return DatasetRun(
            name,
            dataset_stats(d).to_record(),
            evaluate_baseline(d, protocol),
            None,
        )
    except (MlbaseError, OSError, ValueError) as err:
        # exceptions are flattened to text to cross the process boundary
        return DatasetRun(name, None, None, str(err))


class BaselineTable:
    """BaselineTable"""

    def __init__(self, cfg: Dict[str, Any], base_dir: str = ".") -> None:
        self.concurrency: int = int(cfg.get("CONCURRENCY", 1))
        self.protocol: str = str(cfg.get("PROTOCOL", "full"))
        self.seed: int = int(cfg.get("SEED", 42))
        self.results_dir: str = os.path.join(
            base_dir, str(cfg.get("RESULTS_DIR", "results"))
        )
        self.stats_decimals: int = int(cfg.get("STATS_DECIMALS", 3))
        self.measure_decimals: int = int(cfg.get("MEASURE_DECIMALS", 4))
        self.datasets: Dict[str, Dict[str, Any]] = {}
        for name, entry in dict(cfg.get("DATASETS") or {}).items():
            entry = dict(entry or {})
            # dataset paths are relative to the config file
            for key in ("ARFF", "XML"):
                if entry.get(key):
                    entry[key] = os.path.join(base_dir, entry[key])
            self.datasets[str(name)] = entry

    def check_for_invalid_values(self) -> List[str]:
        """returns every problem found in the config"""
        problems: List[str] = []
        if not self.datasets:
            problems.append("DATASETS is empty")
        for name, entry in self.datasets.items():
            if not entry.get("ARFF"):
                problems.append(f"{name}: no ARFF file")
        if self.concurrency < 1:
            problems.append(f"CONCURRENCY must be >= 1: {self.concurrency}")
        try:
            Protocol.parse(self.protocol, seed=self.seed)
        except ValueError as err:
            problems.append(str(err))
        return problems

    def parallel_evaluate_all(self) -> List[DatasetRun]:
        """evaluates every dataset, one worker process per dataset"""
        protocol = Protocol.parse(self.protocol, seed=self.seed)
        with Pool(processes=self.concurrency) as pool:
            tasks = [
                pool.apply_async(evaluate_dataset, (name, entry, protocol))
                for name, entry in sorted(self.datasets.items())
            ]
            runs: List[DatasetRun] = [t.get() for t in tasks]

        for run in runs:
            if run.error:
                log_msg(f"{run.name} failed: {run.error}")
            else:
                log_msg(f"{run.name} done")
        return runs

    def write_results(self, runs: Sequence[DatasetRun]) -> List[str]:
        """writes stats.csv and baselines.csv into RESULTS_DIR"""
        done = [r for r in runs if r.error is None]
        os.makedirs(self.results_dir, exist_ok=True)
        stats_path = os.path.join(self.results_dir, "stats.csv")
        with open(stats_path, "w", encoding="utf-8") as f:
            f.write(
                stats_csv(
                    [r.stats for r in done if r.stats], self.stats_decimals
                )
            )
        baselines_path = os.path.join(self.results_dir, "baselines.csv")
        with open(baselines_path, "w", encoding="utf-8") as f:
            f.write(
                baselines_csv(
                    baselines_from_reports(
                        {r.name: r.report for r in done if r.report}
                    ),
                    self.measure_decimals,
                )
            )
        return [stats_path, baselines_path]


def main(argv: Optional[Sequence[str]] = None) -> int:
    """returns 0 when every dataset was evaluated, 2 when some failed"""
    parser: ArgumentParser = ArgumentParser()
    parser.add_argument("-c", "--cfgs", help="baseline table cfg")
    args: Namespace = parser.parse_args(argv)

    with open(args.cfgs, encoding="utf-8") as _c:
        config: Any = yaml.safe_load(_c.read()) or {}

    if config.get("KIND") != "BASELINE_TABLE":
        log_msg("Incorrect KIND: type")
        return 1

    bt = BaselineTable(config, os.path.dirname(os.path.abspath(args.cfgs)))
    problems = bt.check_for_invalid_values()
    if problems:
        for problem in problems:
            log_msg(f"invalid config: {problem}")
        return 1

    log_msg(
        f"evaluating {len(bt.datasets)} dataset(s) under {bt.protocol} "
        + f"with {bt.concurrency} worker(s)"
    )
    runs = bt.parallel_evaluate_all()
    for path in bt.write_results(runs):
        log_msg(f"wrote {path}")
    return 2 if any(r.error for r in runs) else 0


if __name__ == "__main__":
    sys.exit(main())

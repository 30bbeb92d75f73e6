""" mlbase: audits multi-label results against the General_B baseline """

import argparse
import json
import logging
import os
import sys
from os import getpid
from typing import Any, Callable, Dict, List, NoReturn, Optional, Sequence

import colorlog

from lib import report
from lib.baseline import fit_general_b
from lib.config import DEFAULTS, FORMATS, load_config, validate
from lib.exceptions import MlbaseError
from lib.harness import Protocol, evaluate_baseline, evaluate_folds
from lib.helpers import read_text
from lib.metrics import EvaluationReport
from lib.mldata import MultiLabelDataset, dataset_stats, label_frequencies
from lib.mulan import load_dataset
from lib.registry import (
    Baselines,
    PublishedResult,
    baselines_from_reports,
    compare,
    distribution,
    ingest_baselines,
    ingest_csv,
)

__version__ = "1.0.0"

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_DATA = 2


class UsageError(Exception):
    """bad command line or configuration, exit code 1"""


class ArgumentParser(argparse.ArgumentParser):
    """argparse, with usage errors raised instead of exiting with 2"""

    def error(self, message: str) -> NoReturn:
        self.print_usage(sys.stderr)
        raise UsageError(message)


def build_parser() -> ArgumentParser:
    """mlbase <command> [options]"""
    parser = ArgumentParser(
        prog="mlbase",
        description="multi-label dataset statistics, the General_B "
        + "baseline and published-result audits",
    )
    parser.add_argument("command", choices=list(COMMANDS))
    parser.add_argument("-c", "--config", help="config.yaml file")
    parser.add_argument("--dataset", help="ARFF file")
    parser.add_argument("--labels", help="Mulan XML label header")
    parser.add_argument(
        "--meka",
        action="store_true",
        help="labels are declared by -C in the relation name",
    )
    parser.add_argument("--name", help="dataset name, default the relation")
    parser.add_argument(
        "--protocol", help='"full", "holdout:F" or "cv:K"'
    )
    parser.add_argument("--seed", type=int, help="seed for splits")
    parser.add_argument("--results", help="published results CSV")
    parser.add_argument("--baselines", help="dataset,measure,value CSV")
    parser.add_argument("--format", choices=FORMATS, help="output format")
    parser.add_argument("--out", help="directory for the report bundle")
    parser.add_argument(
        "--version", action="version", version=f"%(prog)s {__version__}"
    )
    return parser


def setup_logging(cfg: Dict[str, Any]) -> None:
    """colored console log on stderr, plus a debug.log file when DEBUG"""
    c_handler = colorlog.StreamHandler(sys.stderr)
    c_handler.setFormatter(
        colorlog.ColoredFormatter(
            "%(log_color)s[%(levelname)s] %(message)s",
            log_colors={
                "WARNING": "yellow",
                "ERROR": "red",
                "CRITICAL": "red,bg_white",
            },
        )
    )
    c_handler.setLevel(logging.INFO)

    if cfg["DEBUG"]:
        os.makedirs(cfg["LOGS_DIR"], exist_ok=True)
        f_handler = logging.FileHandler(f"{cfg['LOGS_DIR']}/debug.log")
        f_handler.setLevel(logging.DEBUG)

        logging.basicConfig(
            level=logging.DEBUG,
            format=" ".join(
                [
                    "(%(asctime)s)",
                    f"({getpid()})",
                    "(%(lineno)d)",
                    "(%(funcName)s)",
                    "[%(levelname)s]",
                    "%(message)s",
                ]
            ),
            handlers=[f_handler, c_handler],
            datefmt="%Y-%m-%d %H:%M:%S",
            force=True,
        )
    else:
        logging.basicConfig(
            level=logging.INFO, handlers=[c_handler], force=True
        )


def settings(args: argparse.Namespace) -> Dict[str, Any]:
    """config file values, overridden by the flags given on the command
    line"""
    try:
        cfg = load_config(args.config)
    except (OSError, ValueError) as err:
        raise UsageError(f"config: {err}") from err
    overrides = {
        "SEED": args.seed,
        "PROTOCOL": args.protocol,
        "FORMAT": args.format,
    }
    cfg.update({k: v for k, v in overrides.items() if v is not None})
    try:
        return validate(cfg)
    except ValueError as err:
        raise UsageError(str(err)) from err


def _require(args: argparse.Namespace, flag: str) -> str:
    value = getattr(args, flag)
    if not value:
        raise UsageError(f"{args.command} needs --{flag}")
    return value


def _load(args: argparse.Namespace) -> MultiLabelDataset:
    return load_dataset(
        _require(args, "dataset"),
        args.labels,
        meka=args.meka,
        name=args.name,
    )


def _protocol(cfg: Dict[str, Any]) -> Protocol:
    try:
        return Protocol.parse(cfg["PROTOCOL"], seed=cfg["SEED"])
    except ValueError as err:
        raise UsageError(str(err)) from err


def _write(text: str) -> None:
    sys.stdout.write(text if text.endswith("\n") else text + "\n")


def cmd_stats(args: argparse.Namespace, cfg: Dict[str, Any]) -> None:
    """size, label cardinality/density and label frequency statistics"""
    record = dataset_stats(_load(args)).to_record()
    if cfg["FORMAT"] == "json":
        _write(json.dumps(record, indent=2))
    elif cfg["FORMAT"] == "csv":
        _write(report.stats_csv([record], cfg["STATS_DECIMALS"]))
    else:
        _write(report.stats_table([record], cfg["STATS_DECIMALS"]))


def cmd_baseline(args: argparse.Namespace, cfg: Dict[str, Any]) -> None:
    """the fitted General_B model"""
    d = _load(args)
    model = fit_general_b(d)
    freqs = label_frequencies(d)
    ranking = [
        {
            "rank": rank,
            "label": d.label_names[j],
            "frequency": int(freqs[j]),
            "predicted": j in model.prediction,
        }
        for rank, j in enumerate(model.ranked_labels, start=1)
    ]
    if cfg["FORMAT"] == "json":
        _write(json.dumps({**model.to_record(), "ranking": ranking}, indent=2))
    elif cfg["FORMAT"] == "csv":
        _write(report.ranking_csv(ranking))
    else:
        _write(
            f"General_B for {d.name}: sigma={model.sigma}, predicts "
            + f"{{{', '.join(model.prediction.names(d.label_names))}}}\n\n"
            + report.markdown_table(
                ["Rank", "Label", "Frequency", "Predicted"],
                [
                    [
                        str(r["rank"]),
                        str(r["label"]),
                        str(r["frequency"]),
                        "yes" if r["predicted"] else "",
                    ]
                    for r in ranking
                ],
            )
        )


def cmd_eval(args: argparse.Namespace, cfg: Dict[str, Any]) -> None:
    """the eight measures of General_B under a protocol"""
    d = _load(args)
    protocol = _protocol(cfg)
    folds = evaluate_folds(d, protocol)
    result = EvaluationReport.mean(folds)
    logging.info(f"{d.name}: evaluated General_B under {protocol}")
    decimals = cfg["MEASURE_DECIMALS"]

    if cfg["FORMAT"] == "json":
        data = json.loads(result.to_json(d.name))
        data["protocol"] = str(protocol)
        if len(folds) > 1:
            data["folds"] = [
                {m.value: v for m, v in fold.values.items()} for fold in folds
            ]
        _write(json.dumps(data, indent=2))
    elif cfg["FORMAT"] == "csv":
        _write(result.to_csv(d.name, decimals))
    else:
        _write(
            report.baseline_table(
                baselines_from_reports({d.name: result}), decimals
            )
        )


def _results(args: argparse.Namespace) -> List[PublishedResult]:
    return ingest_csv(read_text(_require(args, "results")))


def _baselines(
    args: argparse.Namespace,
    cfg: Dict[str, Any],
    results: Sequence[PublishedResult],
) -> Baselines:
    """baselines from a CSV, or evaluated live on --dataset"""
    if args.baselines:
        return ingest_baselines(read_text(args.baselines))
    if args.dataset:
        d = _load(args)
        live = evaluate_baseline(d, _protocol(cfg))
        return baselines_from_reports({d.name: live})
    if results:
        raise UsageError(
            f"{args.command} needs --baselines or --dataset to compare against"
        )
    return {}


def cmd_compare(args: argparse.Namespace, cfg: Dict[str, Any]) -> None:
    """counts the published values underperforming the baseline"""
    results = _results(args)
    summary = compare(results, _baselines(args, cfg, results))
    if cfg["FORMAT"] == "json":
        _write(report.to_json(report.summary_record(summary)))
    elif cfg["FORMAT"] == "csv":
        _write(report.underperformance_csv(summary))
    else:
        _write(report.underperformance_table(summary))


def cmd_report(args: argparse.Namespace, cfg: Dict[str, Any]) -> None:
    """every table of the audit, as Markdown or as a file bundle"""
    results = _results(args)
    baselines = _baselines(args, cfg, results)
    summary = compare(results, baselines)
    dist = distribution(results, baselines)
    threshold = cfg["GAP_THRESHOLD"]
    decimals = cfg["MEASURE_DECIMALS"]

    if args.out:
        paths = report.write_bundle(
            args.out, summary, dist, baselines, threshold, decimals
        )
        _write("\n".join(paths))
    elif cfg["FORMAT"] == "json":
        _write(
            report.to_json(report.bundle(summary, dist, baselines, threshold))
        )
    elif cfg["FORMAT"] == "csv":
        tables = report.render_tables(
            summary, dist, baselines, threshold, decimals
        )
        _write(tables["distribution.csv"])
    else:
        _write(
            report.render_report(summary, dist, baselines, threshold, decimals)
        )


COMMANDS: Dict[str, Callable[[argparse.Namespace, Dict[str, Any]], None]] = {
    "stats": cmd_stats,
    "baseline": cmd_baseline,
    "eval": cmd_eval,
    "compare": cmd_compare,
    "report": cmd_report,
}


def run(argv: Optional[Sequence[str]] = None) -> int:
    """runs one command, returns the process exit code"""
    setup_logging(DEFAULTS)
    try:
        args = build_parser().parse_args(argv)
        cfg = settings(args)
    except UsageError as err:
        logging.error(str(err))
        return EXIT_USAGE
    except SystemExit as err:
        # --help and --version
        return int(err.code or 0)

    if cfg["DEBUG"]:
        setup_logging(cfg)
    logging.debug(f"running {args.command} with {json.dumps(cfg)}")

    try:
        COMMANDS[args.command](args, cfg)
    except (MlbaseError, OSError, UnicodeDecodeError) as err:
        logging.error(str(err))
        return EXIT_DATA
    except (UsageError, ValueError) as err:
        logging.error(str(err))
        return EXIT_USAGE
    return EXIT_OK


def main() -> None:
    """console script entry point"""
    sys.exit(run())


if __name__ == "__main__":
    main()

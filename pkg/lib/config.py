""" config.yaml loading """
import logging
from typing import Any, Dict, Optional

import yaml

# built-in defaults, overridden by a config.yaml and then by CLI flags
DEFAULTS: Dict[str, Any] = {
    "DEBUG": False,
    "LOGS_DIR": "log",
    "SEED": 42,
    "PROTOCOL": "full",
    "FORMAT": "table",
    "GAP_THRESHOLD": 0.5,
    "STATS_DECIMALS": 3,
    "MEASURE_DECIMALS": 4,
}

FORMATS = ["table", "csv", "json"]


def load_config(path: Optional[str] = None) -> Dict[str, Any]:
    """returns DEFAULTS merged with the contents of a config.yaml file"""
    cfg: Dict[str, Any] = dict(DEFAULTS)
    if not path:
        return cfg

    with open(path, encoding="utf-8") as f:
        loaded = yaml.safe_load(f.read()) or {}
    if not isinstance(loaded, dict):
        raise ValueError(f"{path}: expected a mapping of UPPERCASE keys")

    for key, value in loaded.items():
        if key not in DEFAULTS:
            logging.warning(f"{path}: ignoring unknown config key {key}")
            continue
        cfg[key] = value
    return validate(cfg)


def validate(cfg: Dict[str, Any]) -> Dict[str, Any]:
    """checks for invalid values in the config"""
    if not isinstance(cfg["DEBUG"], bool):
        debug = cfg["DEBUG"]
        raise ValueError(f"DEBUG must be true or false, not {debug!r}")
    try:
        cfg["LOGS_DIR"] = str(cfg["LOGS_DIR"])
        cfg["SEED"] = int(cfg["SEED"])
        cfg["PROTOCOL"] = str(cfg["PROTOCOL"])
        cfg["GAP_THRESHOLD"] = float(cfg["GAP_THRESHOLD"])
        cfg["STATS_DECIMALS"] = int(cfg["STATS_DECIMALS"])
        cfg["MEASURE_DECIMALS"] = int(cfg["MEASURE_DECIMALS"])
    except (TypeError, ValueError) as err:
        raise ValueError(f"invalid config value: {err}") from err

    if cfg["FORMAT"] not in FORMATS:
        raise ValueError(f"FORMAT must be one of {FORMATS}")
    if not 0.0 <= cfg["GAP_THRESHOLD"] <= 1.0:
        raise ValueError("GAP_THRESHOLD must be within [0, 1]")
    for key in ("STATS_DECIMALS", "MEASURE_DECIMALS"):
        if cfg[key] < 0:
            raise ValueError(f"{key} must not be negative")
    return cfg

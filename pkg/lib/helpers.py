""" helpers module """
import math
from functools import lru_cache
from typing import Optional, Sequence

from lib.exceptions import InputEncodingError


def mean(values: Sequence[float]) -> float:
    """returns the mean value of a list of numbers"""
    return sum(values) / len(values)


@lru_cache(1024)
def percentage(part: float, whole: float) -> Optional[float]:
    """returns part as a percentage of whole, None when whole is 0"""
    if not whole:
        return None
    return 100 * float(part) / float(whole)


def round_half_away(value: float) -> int:
    """rounds to the closest integer, .5 goes away from zero"""
    return int(math.copysign(math.floor(abs(value) + 0.5), value))


def fmt_float(value: Optional[float], decimals: int) -> str:
    """formats a float with a fixed number of decimals, '—' for None"""
    if value is None or value != value:
        return "—"
    return f"{value:.{decimals}f}"


def fmt_number(value: float) -> str:
    """formats counts and quartiles: integers without a trailing .0"""
    if float(value).is_integer():
        return str(int(value))
    return f"{value:g}"


def read_text(path: str) -> str:
    """returns the contents of a UTF-8 text file"""
    try:
        with open(path, encoding="utf-8") as f:
            return f.read()
    except UnicodeDecodeError as err:
        raise InputEncodingError(
            f"{path}: not UTF-8 text, byte {err.start}: {err.reason}"
        ) from err

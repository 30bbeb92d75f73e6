""" exceptions raised by the mlbase library """
from typing import List, Optional, Sequence, Tuple


class MlbaseError(Exception):
    """base class for every data/parse error the CLI maps to exit code 2"""


class ArffParseError(MlbaseError):
    """malformed ARFF header or data row"""

    def __init__(self, message: str, line: Optional[int] = None) -> None:
        self.line = line
        if line is not None and line > 0 and "line" not in message:
            message = f"{message} (line {line})"
        super().__init__(message)


class SchemaError(MlbaseError):
    """the label header and the ARFF attributes disagree"""


class LabelValueError(MlbaseError):
    """a label attribute holds something other than 0/1/true/false"""

    def __init__(self, message: str, line: Optional[int] = None) -> None:
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class ResultsFormatError(MlbaseError):
    """one or more rows of a results/baselines CSV failed validation"""

    def __init__(self, errors: Sequence[Tuple[int, str]]) -> None:
        # (line, message) pairs, line numbers are 1-based and count the header
        self.errors: List[Tuple[int, str]] = list(errors)
        lines = [f"line {line}: {msg}" for line, msg in self.errors]
        super().__init__(
            f"{len(self.errors)} invalid row(s):\n" + "\n".join(lines)
        )


class MissingBaselineError(MlbaseError):
    """compare() was handed results without a matching baseline value"""

    def __init__(self, orphans: Sequence[Tuple[str, str, str]]) -> None:
        # (paper_id, dataset, measure) of every result lacking a baseline
        self.orphans: List[Tuple[str, str, str]] = list(orphans)
        keys = sorted({f"{d}/{m}" for _, d, m in self.orphans})
        super().__init__(
            f"no baseline for {len(self.orphans)} result(s): "
            + ", ".join(keys)
        )


class InputEncodingError(MlbaseError):
    """an input file is not valid UTF-8"""

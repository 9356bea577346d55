"""Reading and writing two-column (x, y) data files.

Accepted layouts: comma-separated or whitespace-separated columns, with an
optional single header line that is recognised by failing to parse as
numbers.  Values are written with ``repr`` so a file written here reads back
bit-identical.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import IGCIError

CSV = "csv_two_col"
WHITESPACE = "whitespace_two_col"


class PairFileError(IGCIError):
    def __init__(self, message, line=None):
        super().__init__(message if line is None else f"line {line}: {message}")
        self.line = line


@dataclass(frozen=True)
class PairFile:
    path: str
    format: str
    header: bool
    rows: tuple[tuple[float, float], ...]
    line_numbers: tuple[int, ...]

    @property
    def xs(self) -> np.ndarray:
        return np.array([r[0] for r in self.rows])

    @property
    def ys(self) -> np.ndarray:
        return np.array([r[1] for r in self.rows])


def _split(line: str, fmt: str) -> list[str]:
    if fmt == CSV:
        return [t.strip() for t in line.split(",")]
    return line.split()


def _parse_row(fields: list[str], lineno: int) -> tuple[float, float]:
    if len(fields) != 2:
        raise PairFileError(f"expected 2 columns, found {len(fields)}", lineno)
    try:
        x, y = float(fields[0]), float(fields[1])
    except ValueError:
        raise PairFileError(f"cannot parse {fields!r} as numbers", lineno) from None
    if not (math.isfinite(x) and math.isfinite(y)):
        raise PairFileError(f"non-finite value in {fields!r}", lineno)
    return x, y


def _looks_numeric(fields: list[str]) -> bool:
    try:
        [float(t) for t in fields]
    except ValueError:
        return False
    return True


def parse_pairs(text: str, path: str = "<string>") -> PairFile:
    lines = [(i, raw.strip()) for i, raw in enumerate(text.splitlines(), 1)]
    lines = [(i, s) for i, s in lines if s]
    if not lines:
        raise PairFileError(f"{path} is empty")
    fmt = CSV if "," in lines[0][1] else WHITESPACE
    header = not _looks_numeric(_split(lines[0][1], fmt))
    body = lines[1:] if header else lines
    if header and body:
        fmt = CSV if "," in body[0][1] else WHITESPACE
    rows, numbers = [], []
    for lineno, line in body:
        rows.append(_parse_row(_split(line, fmt), lineno))
        numbers.append(lineno)
    if len(rows) < 3:
        raise PairFileError(f"{path} has {len(rows)} data rows; at least 3 are required")
    return PairFile(str(path), fmt, header, tuple(rows), tuple(numbers))


def read_pair_file(path) -> PairFile:
    try:
        text = Path(path).read_text()
    except (OSError, UnicodeDecodeError) as exc:
        raise PairFileError(f"cannot read {path}: {exc}") from None
    return parse_pairs(text, str(path))


def format_pairs(xs, ys, fmt: str = CSV, header: bool = True) -> str:
    sep = "," if fmt == CSV else " "
    out = [f"x{sep}y"] if header else []
    out += [f"{float(x)!r}{sep}{float(y)!r}" for x, y in zip(xs, ys)]
    return "\n".join(out) + "\n"


def write_pair_file(path, xs, ys, fmt: str = CSV, header: bool = True) -> None:
    Path(path).write_text(format_pairs(xs, ys, fmt, header))

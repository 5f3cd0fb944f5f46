"""Decoding problems ``(H, A, p)`` and the QDEM1 text format.

A QDEM1 file is UTF-8 with LF newlines::

    QDEM1 <N> <M> <K>
    <M lines: rows of H as sorted column indices, blank for an empty row>
    <K lines: rows of A, same encoding>
    <N lines: one probability per error column>
"""

from __future__ import annotations

import io
import os
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .gf2 import SparseBinaryMatrix, matvec

MAGIC = "QDEM1"


class QdemParseError(ValueError):
    """Base class for QDEM1 and syndrome parse failures."""

    def __init__(self, message: str, line: int | None = None):
        self.line = line
        where = f"line {line}: " if line is not None else ""
        super().__init__(where + message)


class MalformedHeaderError(QdemParseError):
    pass


class MalformedRowError(QdemParseError):
    pass


class IndexOutOfRangeError(QdemParseError):
    pass


class ProbabilityRangeError(QdemParseError):
    pass


class TruncatedStreamError(QdemParseError):
    pass


@dataclass(frozen=True)
class TannerGraph:
    """Edge enumeration shared by every BP run on one problem.

    Edges are numbered column by column (error node), rows ascending inside a
    column.  ``row_edges[row_ptr[i]:row_ptr[i+1]]`` lists the edges of
    detector ``i`` in ascending column order.
    """

    num_rows: int
    num_cols: int
    col_ptr: np.ndarray
    edge_row: np.ndarray
    edge_col: np.ndarray
    row_ptr: np.ndarray
    row_edges: np.ndarray

    @property
    def num_edges(self) -> int:
        return int(self.edge_row.size)

    @classmethod
    def from_matrix(cls, H: SparseBinaryMatrix) -> "TannerGraph":
        edge_col = np.repeat(np.arange(H.num_cols, dtype=np.int64), np.diff(H.col_ptr))
        edge_row = H.row_idx.astype(np.int64)
        row_edges = np.lexsort((edge_col, edge_row)).astype(np.int64)
        return cls(
            num_rows=H.num_rows,
            num_cols=H.num_cols,
            col_ptr=H.col_ptr.astype(np.int64),
            edge_row=edge_row,
            edge_col=edge_col,
            row_ptr=H.row_ptr.astype(np.int64),
            row_edges=row_edges,
        )


@dataclass(frozen=True, eq=False)
class DecodingProblem:
    """Parity checks ``H`` (M x N), logicals ``A`` (K x N), column priors ``p``."""

    H: SparseBinaryMatrix
    A: SparseBinaryMatrix
    p: np.ndarray
    prior_llr: np.ndarray = field(init=False)

    def __post_init__(self):
        p = np.array(self.p, dtype=np.float64)
        if p.ndim != 1:
            raise ValueError("p must be one-dimensional")
        if self.H.num_cols != p.size or self.A.num_cols != p.size:
            raise ValueError(
                f"column mismatch: H has {self.H.num_cols}, A has {self.A.num_cols}, p has {p.size}"
            )
        bad = np.flatnonzero(~((p > 0.0) & (p <= 0.5)))
        if bad.size:
            raise ValueError(f"probability out of range (0, 0.5] at column {int(bad[0])}: {p[bad[0]]!r}")
        p.setflags(write=False)
        llr = np.log((1.0 - p) / p)
        llr.setflags(write=False)
        object.__setattr__(self, "p", p)
        object.__setattr__(self, "prior_llr", llr)

    @property
    def N(self) -> int:
        return self.H.num_cols

    @property
    def M(self) -> int:
        return self.H.num_rows

    @property
    def K(self) -> int:
        return self.A.num_rows

    @cached_property
    def tanner(self) -> TannerGraph:
        return TannerGraph.from_matrix(self.H)

    def syndrome_of(self, e) -> np.ndarray:
        return syndrome_of(self, e)

    def logical_flip(self, e) -> np.ndarray:
        return logical_flip(self, e)

    def error_weight(self, e) -> float:
        return error_weight(self, e)


def _check_len(problem: DecodingProblem, e) -> np.ndarray:
    e = np.asarray(e)
    if e.ndim != 1 or e.shape[0] != problem.N:
        raise ValueError(f"length mismatch: expected error vector of length {problem.N}, got {e.shape}")
    return e


def syndrome_of(problem: DecodingProblem, e) -> np.ndarray:
    return matvec(problem.H, _check_len(problem, e))


def logical_flip(problem: DecodingProblem, e) -> np.ndarray:
    return matvec(problem.A, _check_len(problem, e))


def error_weight(problem: DecodingProblem, e) -> float:
    """Sum of prior LLRs over the support of ``e``."""
    e = _check_len(problem, e)
    return float(np.sum(problem.prior_llr[np.flatnonzero(e & 1)]))


# -- QDEM1 --------------------------------------------------------------------


def _format_row(support) -> str:
    return " ".join(str(int(c)) for c in support)


def dumps_problem(problem: DecodingProblem) -> str:
    out = [f"{MAGIC} {problem.N} {problem.M} {problem.K}"]
    out.extend(_format_row(problem.H.row_support(i)) for i in range(problem.M))
    out.extend(_format_row(problem.A.row_support(i)) for i in range(problem.K))
    out.extend(format(float(x), ".17g") for x in problem.p)
    return "\n".join(out) + "\n"


def _parse_row(text: str, lineno: int, n: int) -> list[int]:
    try:
        idx = [int(tok) for tok in text.split()]
    except ValueError:
        raise MalformedRowError(f"non-integer column index in {text!r}", lineno) from None
    for c in idx:
        if c < 0 or c >= n:
            raise IndexOutOfRangeError(f"column index {c} out of range [0, {n})", lineno)
    if len(set(idx)) != len(idx):
        raise MalformedRowError("duplicate column index", lineno)
    return sorted(idx)


def loads_problem(text: str) -> DecodingProblem:
    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise TruncatedStreamError("empty stream", 1)

    header = lines[0].split()
    if len(header) != 4 or header[0] != MAGIC:
        raise MalformedHeaderError(f"expected '{MAGIC} <N> <M> <K>', got {lines[0]!r}", 1)
    try:
        n, m, k = (int(x) for x in header[1:])
    except ValueError:
        raise MalformedHeaderError(f"non-integer dimension in {lines[0]!r}", 1) from None
    if min(n, m, k) < 0:
        raise MalformedHeaderError("negative dimension", 1)

    expected = 1 + m + k + n
    if len(lines) < expected:
        raise TruncatedStreamError(f"expected {expected} lines, stream ends after {len(lines)}", len(lines) + 1)
    if len(lines) > expected:
        raise MalformedRowError("unexpected content after probability block", expected + 1)

    h_rows = [_parse_row(lines[1 + i], 2 + i, n) for i in range(m)]
    a_rows = [_parse_row(lines[1 + m + i], 2 + m + i, n) for i in range(k)]
    probs = np.empty(n, dtype=np.float64)
    for j in range(n):
        lineno = 2 + m + k + j
        raw = lines[1 + m + k + j].strip()
        try:
            probs[j] = float(raw)
        except ValueError:
            raise MalformedRowError(f"bad probability {raw!r}", lineno) from None
        if not (0.0 < probs[j] <= 0.5):
            raise ProbabilityRangeError(f"probability out of range (0, 0.5]: {raw}", lineno)

    return DecodingProblem(
        H=SparseBinaryMatrix(m, n, h_rows),
        A=SparseBinaryMatrix(k, n, a_rows),
        p=probs,
    )


def load_problem(stream) -> DecodingProblem:
    """Read a QDEM1 problem from a binary or text stream."""
    data = stream.read()
    if isinstance(data, bytes):
        try:
            data = data.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise MalformedHeaderError(f"stream is not UTF-8: {exc}", 1) from None
    return loads_problem(data)


def save_problem(problem: DecodingProblem, stream) -> None:
    text = dumps_problem(problem)
    if isinstance(stream, io.TextIOBase):
        stream.write(text)
    else:
        stream.write(text.encode("utf-8"))


def read_problem(path: str | os.PathLike) -> DecodingProblem:
    with open(path, "rb") as fh:
        return load_problem(fh)


def write_problem(problem: DecodingProblem, path: str | os.PathLike) -> None:
    with open(path, "wb") as fh:
        save_problem(problem, fh)


# -- syndrome files -----------------------------------------------------------


def parse_syndrome(text: str, length: int | None = None) -> np.ndarray:
    line = text.strip("\n")
    if "\n" in line:
        raise QdemParseError("syndrome file must contain a single line", 2)
    if any(ch not in "01" for ch in line):
        raise QdemParseError("syndrome characters must be '0' or '1'", 1)
    s = np.frombuffer(line.encode("ascii"), dtype=np.uint8) - ord("0")
    if length is not None and s.size != length:
        raise QdemParseError(f"syndrome has length {s.size}, expected {length}", 1)
    return s.astype(np.uint8)


def format_bits(v) -> str:
    return "".join("1" if b else "0" for b in np.asarray(v))


def read_syndrome(path: str | os.PathLike, length: int | None = None) -> np.ndarray:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_syndrome(fh.read(), length)


def write_syndrome(s, path: str | os.PathLike) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(format_bits(s) + "\n")

"""Binary linear algebra over GF(2).

Vectors are plain ``numpy.uint8`` arrays holding 0/1 values.  Matrices that
feed message passing are stored as :class:`SparseBinaryMatrix`, which keeps
both row and column adjacency.  Gaussian elimination switches to a dense
representation packed into 64-bit words.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np


class SparseBinaryMatrix:
    """Immutable binary matrix with CSR (rows) and CSC (columns) adjacency.

    Parameters
    ----------
    num_rows, num_cols : int
        Matrix shape.
    rows : iterable of iterables of int
        Column indices of the ones in each row.  Duplicates are rejected
        rather than cancelled.
    """

    __slots__ = ("num_rows", "num_cols", "row_ptr", "col_idx", "col_ptr", "row_idx")

    def __init__(self, num_rows: int, num_cols: int, rows: Iterable[Iterable[int]]):
        num_rows = int(num_rows)
        num_cols = int(num_cols)
        if num_rows < 0 or num_cols < 0:
            raise ValueError(f"negative shape ({num_rows}, {num_cols})")
        supports = [np.asarray(sorted(int(c) for c in r), dtype=np.int64) for r in rows]
        if len(supports) != num_rows:
            raise ValueError(f"expected {num_rows} rows, got {len(supports)}")
        for i, sup in enumerate(supports):
            if sup.size and (sup[0] < 0 or sup[-1] >= num_cols):
                raise ValueError(f"row {i}: column index out of range [0, {num_cols})")
            if sup.size > 1 and np.any(np.diff(sup) == 0):
                raise ValueError(f"row {i}: duplicate column index")

        row_ptr = np.zeros(num_rows + 1, dtype=np.int64)
        row_ptr[1:] = np.cumsum([s.size for s in supports])
        col_idx = np.concatenate(supports) if supports else np.zeros(0, dtype=np.int64)
        col_idx = col_idx.astype(np.int64, copy=False)

        row_of_entry = np.repeat(np.arange(num_rows, dtype=np.int64), np.diff(row_ptr))
        # stable sort on column keeps rows ascending inside each column
        order = np.argsort(col_idx, kind="stable")
        row_idx = row_of_entry[order]
        col_ptr = np.zeros(num_cols + 1, dtype=np.int64)
        np.add.at(col_ptr, col_idx + 1, 1)
        col_ptr = np.cumsum(col_ptr)

        for arr in (row_ptr, col_idx, col_ptr, row_idx):
            arr.setflags(write=False)
        object.__setattr__(self, "num_rows", num_rows)
        object.__setattr__(self, "num_cols", num_cols)
        object.__setattr__(self, "row_ptr", row_ptr)
        object.__setattr__(self, "col_idx", col_idx)
        object.__setattr__(self, "col_ptr", col_ptr)
        object.__setattr__(self, "row_idx", row_idx)
        self._check_transpose()

    def __setattr__(self, name, value):
        raise AttributeError("SparseBinaryMatrix is immutable")

    def __reduce__(self):
        return (SparseBinaryMatrix, (self.num_rows, self.num_cols, self.rows()))

    def _check_transpose(self) -> None:
        # every (i, j) in the row view must appear exactly once in the column view
        width = max(self.num_cols, 1)
        rows_of_row_view = np.repeat(np.arange(self.num_rows, dtype=np.int64), np.diff(self.row_ptr))
        cols_of_col_view = np.repeat(np.arange(self.num_cols, dtype=np.int64), np.diff(self.col_ptr))
        key_a = np.sort(rows_of_row_view * width + self.col_idx)
        key_b = np.sort(self.row_idx * width + cols_of_col_view)
        if not np.array_equal(key_a, key_b):
            raise AssertionError("column adjacency is not the transpose of row adjacency")

    # -- constructors ------------------------------------------------------

    @classmethod
    def from_dense(cls, dense) -> "SparseBinaryMatrix":
        arr = np.asarray(dense)
        if arr.ndim != 2:
            raise ValueError(f"expected a 2-D array, got shape {arr.shape}")
        arr = arr.astype(np.int64) & 1
        return cls(arr.shape[0], arr.shape[1], (np.flatnonzero(r) for r in arr))

    @classmethod
    def zeros(cls, num_rows: int, num_cols: int) -> "SparseBinaryMatrix":
        return cls(num_rows, num_cols, [[] for _ in range(num_rows)])

    # -- views -------------------------------------------------------------

    @property
    def shape(self) -> tuple[int, int]:
        return (self.num_rows, self.num_cols)

    @property
    def nnz(self) -> int:
        return int(self.col_idx.size)

    def row_support(self, i: int) -> np.ndarray:
        return self.col_idx[self.row_ptr[i]:self.row_ptr[i + 1]]

    def col_support(self, j: int) -> np.ndarray:
        return self.row_idx[self.col_ptr[j]:self.col_ptr[j + 1]]

    def rows(self) -> list[list[int]]:
        return [self.row_support(i).tolist() for i in range(self.num_rows)]

    def to_dense(self) -> np.ndarray:
        out = np.zeros((self.num_rows, self.num_cols), dtype=np.uint8)
        rows = np.repeat(np.arange(self.num_rows), np.diff(self.row_ptr))
        out[rows, self.col_idx] = 1
        return out

    @property
    def T(self) -> "SparseBinaryMatrix":
        return SparseBinaryMatrix(self.num_cols, self.num_rows, (self.col_support(j) for j in range(self.num_cols)))

    def __eq__(self, other) -> bool:
        if not isinstance(other, SparseBinaryMatrix):
            return NotImplemented
        return (
            self.shape == other.shape
            and np.array_equal(self.row_ptr, other.row_ptr)
            and np.array_equal(self.col_idx, other.col_idx)
        )

    def __hash__(self):
        return hash((self.shape, self.col_idx.tobytes(), self.row_ptr.tobytes()))

    def __repr__(self) -> str:
        return f"SparseBinaryMatrix(shape={self.shape}, nnz={self.nnz})"


def vstack(mats: Sequence[SparseBinaryMatrix]) -> SparseBinaryMatrix:
    if not mats:
        raise ValueError("vstack of nothing")
    n = mats[0].num_cols
    if any(m.num_cols != n for m in mats):
        raise ValueError("vstack: column counts differ")
    rows: list[list[int]] = []
    for m in mats:
        rows.extend(m.rows())
    return SparseBinaryMatrix(len(rows), n, rows)


def matvec(mat: SparseBinaryMatrix, v) -> np.ndarray:
    """Return ``mat @ v`` over GF(2)."""
    v = np.asarray(v)
    if v.ndim != 1 or v.shape[0] != mat.num_cols:
        raise ValueError(f"dimension mismatch: matrix has {mat.num_cols} columns, vector has length {v.shape[0] if v.ndim else 0}")
    picked = (v[mat.col_idx] & 1).astype(np.int64)
    csum = np.concatenate(([0], np.cumsum(picked)))
    return ((csum[mat.row_ptr[1:]] - csum[mat.row_ptr[:-1]]) & 1).astype(np.uint8)


def mat_mul_dense(a, b) -> np.ndarray:
    """Dense GF(2) product of two 0/1 arrays."""
    a = np.asarray(a, dtype=np.int64)
    b = np.asarray(b, dtype=np.int64)
    return ((a @ b) & 1).astype(np.uint8)


# -- elimination --------------------------------------------------------------


def _pack_rows(dense: np.ndarray) -> np.ndarray:
    """Pack a 0/1 matrix row-wise into uint64 words (little bit order)."""
    m, n = dense.shape
    nwords = max(1, (n + 63) // 64)
    padded = np.zeros((m, nwords * 64), dtype=np.uint8)
    padded[:, :n] = dense
    return np.packbits(padded, axis=1, bitorder="little").view(np.uint64).reshape(m, nwords).copy()


def _unpack_rows(words: np.ndarray, n: int) -> np.ndarray:
    m, nwords = words.shape
    bits = np.unpackbits(words.view(np.uint8).reshape(m, nwords * 8), axis=1, bitorder="little")
    return bits[:, :n].copy()


@dataclass
class Elimination:
    """Gauss-Jordan state for one matrix and one column order.

    ``reduced`` is ``transform @ H[:, col_order]`` in reduced row echelon form;
    row ``k < rank`` has its leading one in ``col_order[pivot_positions[k]]``.
    Mutable scratch owned by a single caller.
    """

    num_rows: int
    num_cols: int
    rank: int
    col_order: np.ndarray
    pivot_positions: np.ndarray
    reduced: np.ndarray
    transform: np.ndarray

    @property
    def pivot_cols(self) -> np.ndarray:
        return self.col_order[self.pivot_positions]

    @property
    def free_positions(self) -> np.ndarray:
        is_pivot = np.zeros(self.num_cols, dtype=bool)
        is_pivot[self.pivot_positions] = True
        return np.flatnonzero(~is_pivot)

    def transform_syndrome(self, s) -> np.ndarray:
        return mat_mul_dense(self.transform, np.asarray(s))


def row_echelon(mat: SparseBinaryMatrix, col_order=None) -> Elimination:
    """Gauss-Jordan elimination with pivots searched in ``col_order``.

    The row operations are recorded in ``Elimination.transform`` so they can
    be replayed on any syndrome.
    """
    m, n = mat.shape
    if col_order is None:
        col_order = np.arange(n, dtype=np.int64)
    else:
        col_order = np.asarray(col_order, dtype=np.int64)
        if col_order.shape != (n,) or not np.array_equal(np.sort(col_order), np.arange(n)):
            raise ValueError(f"col_order must be a permutation of range({n})")

    dense = mat.to_dense()[:, col_order]
    aug = _pack_rows(np.hstack([dense, np.eye(m, dtype=np.uint8)]))

    pivots: list[int] = []
    r = 0
    for c in range(n):
        if r == m:
            break
        w, b = c >> 6, np.uint64(c & 63)
        colbits = (aug[r:, w] >> b) & np.uint64(1)
        hits = np.flatnonzero(colbits)
        if hits.size == 0:
            continue
        p = r + int(hits[0])
        if p != r:
            aug[[r, p]] = aug[[p, r]]
        others = np.flatnonzero((aug[:, w] >> b) & np.uint64(1))
        others = others[others != r]
        if others.size:
            aug[others] ^= aug[r]
        pivots.append(c)
        r += 1

    full = _unpack_rows(aug, n + m)
    return Elimination(
        num_rows=m,
        num_cols=n,
        rank=r,
        col_order=col_order,
        pivot_positions=np.asarray(pivots, dtype=np.int64),
        reduced=full[:, :n],
        transform=full[:, n:],
    )


def solve_with_pivots(elim: Elimination, s) -> np.ndarray | None:
    """Solve ``H x = s`` with ``x`` supported on pivot columns.

    Returns ``None`` when ``s`` lies outside the column space of ``H``.
    """
    s = np.asarray(s)
    if s.shape != (elim.num_rows,):
        raise ValueError(f"dimension mismatch: expected syndrome of length {elim.num_rows}, got {s.shape}")
    st = elim.transform_syndrome(s)
    if np.any(st[elim.rank:]):
        return None
    x = np.zeros(elim.num_cols, dtype=np.uint8)
    x[elim.pivot_cols] = st[:elim.rank]
    return x


def rank(mat: SparseBinaryMatrix) -> int:
    return row_echelon(mat).rank


def kernel_basis(mat: SparseBinaryMatrix) -> np.ndarray:
    """Basis of ``{v : mat @ v = 0}``, one vector per row of the result."""
    elim = row_echelon(mat)
    n = mat.num_cols
    free = elim.free_positions
    basis = np.zeros((free.size, n), dtype=np.uint8)
    for b, f in enumerate(free):
        basis[b, elim.col_order[f]] = 1
        basis[b, elim.pivot_cols] = elim.reduced[:elim.rank, f]
    return basis

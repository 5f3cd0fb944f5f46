"""CSS code constructions and code-capacity decoding problems."""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Literal, Sequence

import numpy as np

from .gf2 import SparseBinaryMatrix, mat_mul_dense, row_echelon, kernel_basis, rank
from .problem import DecodingProblem

Axis = Literal["x", "y"]


@dataclass(frozen=True)
class BBSpec:
    """Bivariate bicycle code ``A = sum x^a or y^b`` over the ``l x m`` torus.

    Each polynomial is three monomials ``(axis, exponent)``.  The constant
    term ``1`` is written ``("x", 0)``.
    """

    l: int
    m: int
    a_terms: tuple[tuple[str, int], ...]
    b_terms: tuple[tuple[str, int], ...]

    def __post_init__(self):
        if self.l < 1 or self.m < 1:
            raise ValueError(f"torus dimensions must be positive, got l={self.l}, m={self.m}")
        for name in ("a_terms", "b_terms"):
            terms = getattr(self, name)
            if len(terms) != 3:
                raise ValueError(f"{name}: expected exactly three monomials, got {len(terms)}")
            reduced = []
            for axis, exp in terms:
                if axis not in ("x", "y"):
                    raise ValueError(f"{name}: unknown axis {axis!r}")
                if not isinstance(exp, (int, np.integer)):
                    raise ValueError(f"{name}: exponent {exp!r} is not an integer")
                size = self.l if axis == "x" else self.m
                reduced.append((axis, int(exp) % size))
            object.__setattr__(self, name, tuple(reduced))


@dataclass(frozen=True)
class CssCode:
    hx: SparseBinaryMatrix
    hz: SparseBinaryMatrix

    def __post_init__(self):
        if self.hx.num_cols != self.hz.num_cols:
            raise ValueError("H_X and H_Z act on different numbers of qubits")

    @property
    def n(self) -> int:
        return self.hx.num_cols

    @property
    def k(self) -> int:
        return self.n - rank(self.hx) - rank(self.hz)

    def is_orthogonal(self) -> bool:
        return not np.any(mat_mul_dense(self.hx.to_dense(), self.hz.to_dense().T))


def _shift(size: int, power: int) -> np.ndarray:
    return np.roll(np.eye(size, dtype=np.uint8), power % size, axis=1)


def circulant(first_row_support: Sequence[int], size: int) -> SparseBinaryMatrix:
    """Square circulant whose row ``i`` is ``first_row_support`` shifted by ``i``."""
    rows = [sorted({(c + i) % size for c in first_row_support}) for i in range(size)]
    return SparseBinaryMatrix(size, size, rows)


def repetition_code(n: int) -> CssCode:
    if n < 2:
        raise ValueError(f"repetition code needs n >= 2, got {n}")
    chain = SparseBinaryMatrix(n - 1, n, [[i, i + 1] for i in range(n - 1)])
    return CssCode(hx=SparseBinaryMatrix.zeros(0, n), hz=chain)


def bb_code(spec: BBSpec) -> CssCode:
    lsz, msz = spec.l, spec.m
    x = np.kron(_shift(lsz, 1), np.eye(msz, dtype=np.uint8))
    y = np.kron(np.eye(lsz, dtype=np.uint8), _shift(msz, 1))

    def poly(terms) -> np.ndarray:
        acc = np.zeros((lsz * msz, lsz * msz), dtype=np.int64)
        for axis, exp in terms:
            base = x if axis == "x" else y
            acc += np.linalg.matrix_power(base.astype(np.int64), exp)
        return (acc & 1).astype(np.uint8)

    a = poly(spec.a_terms)
    b = poly(spec.b_terms)
    hx = np.hstack([a, b])
    hz = np.hstack([b.T, a.T])
    return CssCode(SparseBinaryMatrix.from_dense(hx), SparseBinaryMatrix.from_dense(hz))


def hgp_code(h1: SparseBinaryMatrix, h2: SparseBinaryMatrix) -> CssCode:
    """Hypergraph product ``H_X = [H1 x I | I x H2^T]``, ``H_Z = [I x H2 | H1^T x I]``."""
    d1, d2 = h1.to_dense(), h2.to_dense()
    m1, n1 = d1.shape
    m2, n2 = d2.shape
    hx = np.hstack([np.kron(d1, np.eye(n2, dtype=np.uint8)), np.kron(np.eye(m1, dtype=np.uint8), d2.T)])
    hz = np.hstack([np.kron(np.eye(n1, dtype=np.uint8), d2), np.kron(d1.T, np.eye(m2, dtype=np.uint8))])
    return CssCode(SparseBinaryMatrix.from_dense(hx), SparseBinaryMatrix.from_dense(hz))


def _quotient_basis(kernel_of: SparseBinaryMatrix, modulo: SparseBinaryMatrix) -> np.ndarray:
    """Vectors of ``ker(kernel_of)`` independent modulo ``rowspace(modulo)``."""
    ker = kernel_basis(kernel_of)
    n = kernel_of.num_cols
    if ker.shape[0] == 0:
        return np.zeros((0, n), dtype=np.uint8)
    stacked = np.vstack([modulo.to_dense(), ker])
    # columns of the transpose are the candidate rows; greedy pivots keep the
    # stabilizer rows first, so pivots past them are independent logicals
    elim = row_echelon(SparseBinaryMatrix.from_dense(stacked.T))
    picked = elim.pivot_cols[elim.pivot_cols >= modulo.num_rows] - modulo.num_rows
    return ker[picked]


def logical_operators(code: CssCode) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(A_X, A_Z)`` as dense 0/1 arrays with ``k`` rows each.

    Rows of ``A_Z`` lie in ``ker(H_X)`` and are independent of the row space
    of ``H_Z``; they flag uncorrected X errors.  ``A_X`` is the mirror image.
    """
    if not code.is_orthogonal():
        raise ValueError("H_X and H_Z do not commute")
    a_z = _quotient_basis(code.hx, code.hz)
    a_x = _quotient_basis(code.hz, code.hx)
    return a_x, a_z


def code_capacity_problem(
    code: CssCode,
    a_x,
    a_z,
    p_phys: float,
    error_type: str = "X",
    stacking: str = "XZ",
) -> DecodingProblem:
    """Depolarizing data-qubit noise, X/Y/Z each with probability ``p_phys / 3``.

    ``XZ`` keeps one column per qubit and only the checks that see
    ``error_type``; ``XYZ`` stacks ``H_X`` over ``H_Z`` and uses columns
    ``[X block | Y block | Z block]``.
    """
    if not (0.0 < p_phys <= 0.375):
        raise ValueError(f"p_phys must lie in (0, 0.375], got {p_phys}")
    error_type = error_type.upper()
    stacking = stacking.upper()
    if error_type not in ("X", "Z"):
        raise ValueError(f"error_type must be X or Z, got {error_type!r}")
    if stacking not in ("XZ", "XYZ"):
        raise ValueError(f"stacking must be XZ or XYZ, got {stacking!r}")

    n = code.n
    hx, hz = code.hx.to_dense(), code.hz.to_dense()
    logicals = np.asarray(a_z if error_type == "X" else a_x, dtype=np.uint8).reshape(-1, n)

    if stacking == "XZ":
        h = hz if error_type == "X" else hx
        p = np.full(n, 2.0 * p_phys / 3.0)
        return DecodingProblem(SparseBinaryMatrix.from_dense(h), SparseBinaryMatrix.from_dense(logicals), p)

    zeros_x = np.zeros_like(hx)
    zeros_z = np.zeros_like(hz)
    # X errors trip Z checks, Z errors trip X checks, Y trips both
    h_cols_x = np.vstack([zeros_x, hz])
    h_cols_z = np.vstack([hx, zeros_z])
    h_cols_y = h_cols_x | h_cols_z
    h = np.hstack([h_cols_x, h_cols_y, h_cols_z])

    blank = np.zeros_like(logicals)
    if error_type == "X":
        a = np.hstack([logicals, logicals, blank])
    else:
        a = np.hstack([blank, logicals, logicals])
    p = np.full(3 * n, p_phys / 3.0)
    return DecodingProblem(SparseBinaryMatrix.from_dense(h), SparseBinaryMatrix.from_dense(a), p)


# -- presets ------------------------------------------------------------------

BB_PRESETS: dict[str, BBSpec] = {
    "bb72": BBSpec(6, 6, (("x", 3), ("y", 1), ("y", 2)), (("y", 3), ("x", 1), ("x", 2))),
    "bb90": BBSpec(15, 3, (("x", 9), ("y", 1), ("y", 2)), (("x", 0), ("x", 2), ("x", 7))),
    "bb144": BBSpec(12, 6, (("x", 3), ("y", 1), ("y", 2)), (("y", 3), ("x", 1), ("x", 2))),
}

# 1 + x + x^4 is primitive and divides x^15 - 1, so the circulant's kernel is
# the [15, 4, 8] simplex code
HGP450_CIRCULANT = ((0, 1, 4), 15)

PRESET_PATTERN = re.compile(r"^(rep(\d+)|bb72|bb90|bb144|hgp450)$")


def preset_names() -> list[str]:
    return ["rep<n>", *BB_PRESETS, "hgp450"]


def build_preset(name: str) -> CssCode:
    match = PRESET_PATTERN.match(name)
    if not match:
        raise KeyError(f"unknown code preset {name!r}; expected one of {', '.join(preset_names())}")
    if match.group(2) is not None:
        return repetition_code(int(match.group(2)))
    if name in BB_PRESETS:
        return bb_code(BB_PRESETS[name])
    support, size = HGP450_CIRCULANT
    h = circulant(support, size)
    return hgp_code(h, h)


def preset_problem(name: str, p_phys: float, error_type: str = "X", stacking: str = "XZ") -> tuple[CssCode, DecodingProblem]:
    code = build_preset(name)
    a_x, a_z = logical_operators(code)
    return code, code_capacity_problem(code, a_x, a_z, p_phys, error_type, stacking)

"""Min-sum belief propagation with masked error nodes and warm starts."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import kernels
from .gf2 import matvec
from .problem import DecodingProblem

MSG_MAX = 50.0

MaskAssignment = Sequence[tuple[int, int]]


@dataclass
class BpOutcome:
    """Result of one :func:`masked_bp` run.

    ``hard_decision`` is the last iteration's hard decision with mask values
    substituted; ``decoded`` is the same vector when the run converged and
    ``None`` otherwise.  ``sum_llr`` and ``posterior`` are NaN on masked
    columns.
    """

    converged: bool
    hard_decision: np.ndarray
    final_messages: np.ndarray
    sum_llr: np.ndarray
    posterior: np.ndarray
    iters_run: int

    @property
    def status(self) -> str:
        return "converged" if self.converged else "failure"

    @property
    def decoded(self) -> np.ndarray | None:
        return self.hard_decision if self.converged else None


def initial_messages(problem: DecodingProblem) -> np.ndarray:
    """Iteration-0 error-to-detector messages: each edge carries its column prior."""
    return np.clip(problem.prior_llr[problem.tanner.edge_col], -MSG_MAX, MSG_MAX)


def mask_arrays(n: int, mask: MaskAssignment) -> tuple[np.ndarray, np.ndarray]:
    """Return ``(masked flags, forced ones)`` as 0/1 vectors of length ``n``."""
    flags = np.zeros(n, dtype=np.uint8)
    ones = np.zeros(n, dtype=np.uint8)
    for pos, val in mask:
        if not 0 <= pos < n:
            raise ValueError(f"mask position {pos} out of range [0, {n})")
        if flags[pos]:
            raise ValueError(f"mask position {pos} assigned twice")
        if val not in (0, 1):
            raise ValueError(f"mask value for position {pos} must be 0 or 1, got {val!r}")
        flags[pos] = 1
        ones[pos] = val
    return flags, ones


def masked_bp(
    problem: DecodingProblem,
    edge_msgs,
    mask: MaskAssignment,
    s,
    max_iters: int,
    *,
    scale: float = 1.0,
    kernel=None,
) -> BpOutcome:
    """Run up to ``max_iters`` flooding min-sum iterations with ``mask`` held fixed.

    Columns fixed to 1 are folded into the syndrome first, so BP only has to
    explain the remainder with the free columns.  Convergence is tested
    against that folded syndrome; on success the mask values are written back
    and the result satisfies ``H @ decoded == s``.
    """
    tg = problem.tanner
    s = np.asarray(s, dtype=np.uint8)
    if s.shape != (problem.M,):
        raise ValueError(f"syndrome length mismatch: expected {problem.M}, got {s.shape}")
    if max_iters < 1:
        raise ValueError(f"max_iters must be >= 1, got {max_iters}")
    edge_msgs = np.asarray(edge_msgs, dtype=np.float64)
    if edge_msgs.shape != (tg.num_edges,):
        raise ValueError(f"message vector length mismatch: expected {tg.num_edges}, got {edge_msgs.shape}")

    flags, ones = mask_arrays(problem.N, mask)
    work_synd = s ^ matvec(problem.H, ones) if ones.any() else s

    run = kernel if kernel is not None else kernels.minsum
    converged, iters, msgs, sum_llr, posterior, hard = run(
        tg.col_ptr, tg.edge_row, tg.edge_col, tg.row_ptr, tg.row_edges,
        problem.prior_llr, edge_msgs, flags, work_synd,
        int(max_iters), MSG_MAX, float(scale),
    )
    hard = np.asarray(hard, dtype=np.uint8) | ones
    return BpOutcome(
        converged=bool(converged),
        hard_decision=hard,
        final_messages=msgs,
        sum_llr=sum_llr,
        posterior=posterior,
        iters_run=int(iters),
    )


def plain_bp(problem: DecodingProblem, s, max_iters: int, **kw) -> BpOutcome:
    """Cold-start BP with nothing masked."""
    return masked_bp(problem, initial_messages(problem), (), s, max_iters, **kw)

"""BP-OSD baseline: min-sum BP, then ordered-statistics post-processing."""

from __future__ import annotations

import time
from dataclasses import dataclass
from math import comb

import numpy as np

from .beam import DecodeResult
from .bp import plain_bp
from .gf2 import row_echelon
from .problem import DecodingProblem, error_weight

METHODS = ("osd0", "combination_sweep")


@dataclass(frozen=True)
class OsdConfig:
    bp_iters: int = 30
    order: int = 10
    method: str = "combination_sweep"

    def __post_init__(self):
        if self.bp_iters < 1:
            raise ValueError(f"bp_iters must be >= 1, got {self.bp_iters}")
        if self.order < 0:
            raise ValueError(f"order must be >= 0, got {self.order}")
        if self.method not in METHODS:
            raise ValueError(f"method must be one of {METHODS}, got {self.method!r}")


BP30_OSD = OsdConfig(30, 10, "combination_sweep")


@dataclass
class OsdOutcome:
    decoded: np.ndarray
    consistent: bool
    num_candidates: int


def candidate_count(num_free: int, order: int, method: str = "combination_sweep") -> int:
    if method == "osd0":
        return 1
    return 1 + num_free + comb(min(order, num_free), 2)


def osd_postprocess(problem: DecodingProblem, s, posterior, cfg: OsdConfig) -> OsdOutcome:
    """Solve ``H x = s`` on a reliability-ordered information set.

    Columns are sorted most-likely-in-error first (ascending posterior LLR,
    stable), so elimination picks likely error positions as pivots.  The
    combination sweep then tries every single free bit and every pair among
    the first ``order`` free positions, keeping the lowest-weight solution.
    """
    s = np.asarray(s, dtype=np.uint8)
    order = np.argsort(np.asarray(posterior, dtype=np.float64), kind="stable")
    elim = row_echelon(problem.H, order)
    st = elim.transform_syndrome(s)
    consistent = not np.any(st[elim.rank:])
    base = st[:elim.rank]
    pivot_cols = elim.pivot_cols

    osd0 = np.zeros(problem.N, dtype=np.uint8)
    osd0[pivot_cols] = base
    if cfg.method == "osd0":
        return OsdOutcome(osd0, consistent, 1)

    free = elim.free_positions
    free_cols = elim.col_order[free]
    r_free = elim.reduced[:elim.rank, free].astype(np.int64)
    llr = problem.prior_llr
    llr_piv = llr[pivot_cols]
    llr_free = llr[free_cols]
    w = min(cfg.order, free.size)

    # candidate pivot patterns, one column each: OSD-0, singles, pairs
    pairs = [(a, b) for a in range(w) for b in range(a + 1, w)]
    patterns = np.empty((elim.rank, 1 + free.size + len(pairs)), dtype=np.int64)
    patterns[:, 0] = base
    patterns[:, 1:1 + free.size] = base[:, None] ^ r_free
    if pairs:
        pa = np.array(pairs, dtype=np.int64)
        patterns[:, 1 + free.size:] = base[:, None] ^ r_free[:, pa[:, 0]] ^ r_free[:, pa[:, 1]]
    extra = np.zeros(patterns.shape[1])
    extra[1:1 + free.size] = llr_free
    if pairs:
        extra[1 + free.size:] = llr_free[pa[:, 0]] + llr_free[pa[:, 1]]
    weights = llr_piv @ patterns + extra
    best = int(np.argmin(weights))

    x = np.zeros(problem.N, dtype=np.uint8)
    x[pivot_cols] = patterns[:, best]
    if 1 <= best <= free.size:
        x[free_cols[best - 1]] = 1
    elif best > free.size:
        a, b = pairs[best - 1 - free.size]
        x[free_cols[a]] = 1
        x[free_cols[b]] = 1
    return OsdOutcome(x, consistent, patterns.shape[1])


def bp_osd_decode(problem: DecodingProblem, s, cfg: OsdConfig = BP30_OSD) -> DecodeResult:
    t0 = time.perf_counter()
    s = np.asarray(s, dtype=np.uint8)
    if s.shape != (problem.M,):
        raise ValueError(f"syndrome length mismatch: expected {problem.M}, got {s.shape}")
    bp = plain_bp(problem, s, cfg.bp_iters)
    if bp.converged:
        return DecodeResult(
            decoded=bp.hard_decision,
            converged=True,
            weight=error_weight(problem, bp.hard_decision),
            solutions_found=1,
            wall_time=time.perf_counter() - t0,
        )
    out = osd_postprocess(problem, s, bp.posterior, cfg)
    return DecodeResult(
        decoded=out.decoded,
        converged=out.consistent,
        weight=error_weight(problem, out.decoded),
        paths_expanded=out.num_candidates,
        solutions_found=out.num_candidates if out.consistent else 0,
        wall_time=time.perf_counter() - t0,
    )

"""Beam search decoder over masked BP runs.

Each round, every live path fixes its least reliable error node to 0 and to 1
and runs a short warm-started masked BP.  Children that satisfy the syndrome
are collected as solutions; the others are scored by how decisive their
accumulated posteriors are and only the ``beam_width`` best survive.
"""

from __future__ import annotations

import itertools
import time
from dataclasses import dataclass, field

import numpy as np

from .bp import BpOutcome, initial_messages, masked_bp
from .problem import DecodingProblem, error_weight


@dataclass(frozen=True)
class BeamConfig:
    max_rounds: int
    beam_width: int
    initial_iters: int
    iters_per_round: int
    num_results: int = 1

    def __post_init__(self):
        for name in ("max_rounds", "beam_width", "initial_iters", "iters_per_round", "num_results"):
            value = getattr(self, name)
            if not isinstance(value, (int, np.integer)) or value < 1:
                raise ValueError(f"BeamConfig.{name} must be an integer >= 1, got {value!r}")


PRESETS: dict[str, BeamConfig] = {
    "beam8_230iters": BeamConfig(10, 8, 30, 20, 1),
    "beam32_340iters": BeamConfig(10, 32, 40, 30, 1),
    "beam64_640iters": BeamConfig(20, 64, 40, 30, 1),
    "beam64_32res_640iters": BeamConfig(20, 64, 40, 30, 32),
}


@dataclass
class Path:
    edge_msgs: np.ndarray
    pos_val_pairs: tuple[tuple[int, int], ...]
    next_pos: int
    score: float
    # insertion counter; orders equal scores deterministically
    seq: int = 0


@dataclass
class DecodeResult:
    decoded: np.ndarray
    converged: bool
    weight: float
    rounds_used: int = 0
    paths_expanded: int = 0
    solutions_found: int = 0
    wall_time: float = 0.0


@dataclass
class BeamTrace:
    """Per-round instrumentation: live set size before expansion and BP calls made."""

    set_sizes: list[int] = field(default_factory=list)
    bp_calls: list[int] = field(default_factory=list)
    mask_lengths: list[list[int]] = field(default_factory=list)


def select_branch_node(sum_llr, masked) -> int:
    """Unmasked index with the smallest ``|sum_llr|``; lowest index wins ties.

    ``masked`` is either a boolean flag per node or an iterable of masked
    positions.
    """
    sum_llr = np.asarray(sum_llr, dtype=np.float64)
    flags = _mask_flags(sum_llr.size, masked)
    reliab = np.where(flags, np.inf, np.abs(sum_llr))
    if flags.all():
        raise ValueError("every error node is masked; no branch node left")
    return int(np.argmin(reliab))


def path_score(sum_llr, masked, iters_run: int) -> float:
    """Mean over iterations of the summed ``|sum_llr|`` of unmasked nodes."""
    if iters_run < 1:
        raise ValueError(f"iters_run must be >= 1, got {iters_run}")
    sum_llr = np.asarray(sum_llr, dtype=np.float64)
    flags = _mask_flags(sum_llr.size, masked)
    return float(np.sum(np.abs(sum_llr[~flags])) / iters_run)


def bounded_insert(paths: list[Path], candidate: Path, beam_width: int) -> list[Path]:
    """Keep at most ``beam_width`` paths, evicting the lowest score for a strictly better one.

    Among equal minimum scores the most recently inserted is evicted, so
    older incumbents survive.  Mutates and returns ``paths``.
    """
    if len(paths) < beam_width:
        paths.append(candidate)
        return paths
    worst = min(range(len(paths)), key=lambda k: (paths[k].score, -paths[k].seq))
    if candidate.score > paths[worst].score:
        paths[worst] = candidate
    return paths


def _mask_flags(n: int, masked) -> np.ndarray:
    arr = np.asarray(masked)
    if arr.dtype == bool and arr.shape == (n,):
        return arr
    flags = np.zeros(n, dtype=bool)
    for item in masked:
        pos = item[0] if isinstance(item, tuple) else item
        flags[int(pos)] = True
    return flags


class _Results:
    """Distinct solutions in discovery order; the first of equal weight wins."""

    def __init__(self, problem: DecodingProblem):
        self.problem = problem
        self.seen: set[bytes] = set()
        self.best: np.ndarray | None = None
        self.best_weight = np.inf

    def __len__(self) -> int:
        return len(self.seen)

    def add(self, vec: np.ndarray) -> None:
        key = np.packbits(vec).tobytes()
        if key in self.seen:
            return
        self.seen.add(key)
        w = error_weight(self.problem, vec)
        if w < self.best_weight:
            self.best, self.best_weight = vec.copy(), w


def beam_decode(
    problem: DecodingProblem,
    s,
    cfg: BeamConfig,
    *,
    trace: BeamTrace | None = None,
) -> DecodeResult:
    """Decode syndrome ``s``; see the module docstring for the search."""
    t0 = time.perf_counter()
    s = np.asarray(s, dtype=np.uint8)
    if s.shape != (problem.M,):
        raise ValueError(f"syndrome length mismatch: expected {problem.M}, got {s.shape}")
    if not isinstance(cfg, BeamConfig):
        raise TypeError("cfg must be a BeamConfig")

    results = _Results(problem)
    expanded = 0

    def finish(rounds: int) -> DecodeResult:
        return DecodeResult(
            decoded=results.best,
            converged=True,
            weight=float(results.best_weight),
            rounds_used=rounds,
            paths_expanded=expanded,
            solutions_found=len(results),
            wall_time=time.perf_counter() - t0,
        )

    seed: BpOutcome = masked_bp(problem, initial_messages(problem), (), s, cfg.initial_iters)
    if seed.converged:
        results.add(seed.hard_decision)
        if cfg.num_results == 1:
            return finish(0)

    counter = itertools.count()
    live = [Path(seed.final_messages, (), select_branch_node(seed.sum_llr, ()), 0.0, next(counter))]
    rounds = 0
    for r in range(1, cfg.max_rounds + 1):
        rounds = r
        if not live:
            break
        if trace is not None:
            trace.set_sizes.append(len(live))
            trace.mask_lengths.append([len(p.pos_val_pairs) for p in live])
        calls = 0
        next_set: list[Path] = []
        for parent in sorted(live, key=lambda p: (-p.score, p.seq)):
            for val in (0, 1):
                mask = parent.pos_val_pairs + ((parent.next_pos, val),)
                out = masked_bp(problem, parent.edge_msgs, mask, s, cfg.iters_per_round)
                calls += 1
                expanded += 1
                if out.converged:
                    results.add(out.hard_decision)
                    if len(results) >= cfg.num_results:
                        if trace is not None:
                            trace.bp_calls.append(calls)
                        return finish(r)
                    continue
                flags = np.zeros(problem.N, dtype=bool)
                flags[[pos for pos, _ in mask]] = True
                if flags.all():
                    continue
                child = Path(
                    out.final_messages,
                    mask,
                    select_branch_node(out.sum_llr, flags),
                    path_score(out.sum_llr, flags, out.iters_run),
                    next(counter),
                )
                bounded_insert(next_set, child, cfg.beam_width)
        if trace is not None:
            trace.bp_calls.append(calls)
        live = next_set

    if len(results):
        return finish(rounds)
    return DecodeResult(
        decoded=seed.hard_decision,
        converged=False,
        weight=error_weight(problem, seed.hard_decision),
        rounds_used=rounds,
        paths_expanded=expanded,
        solutions_found=0,
        wall_time=time.perf_counter() - t0,
    )

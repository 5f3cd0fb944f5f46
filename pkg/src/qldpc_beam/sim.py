"""Monte Carlo logical-error-rate and latency harness."""

from __future__ import annotations

import csv
import json
import math
import platform
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import __version__, kernels
from .decoders import Decoder, get_decoder
from .problem import DecodingProblem, logical_flip, syndrome_of

DEFAULT_QUANTILES = (0.5, 0.99, 0.999)
CSV_HEADER = ("shot", "seed", "failed", "converged", "weight", "rounds", "time_ns")


def sample_error(problem: DecodingProblem, rng: np.random.Generator) -> np.ndarray:
    """Independent Bernoulli(p_j) flip on every error column."""
    return (rng.random(problem.N) < problem.p).astype(np.uint8)


def shot_seed(base_seed: int, shot: int) -> int:
    """64-bit seed for one shot, a hash of ``(base_seed, shot)``."""
    ss = np.random.SeedSequence([int(base_seed) & 0xFFFFFFFFFFFFFFFF, int(shot)])
    return int(ss.generate_state(1, np.uint64)[0])


def percentile(samples: Sequence[float], q: float) -> float:
    """Nearest-rank percentile: the ``ceil(q * n)``-th smallest sample."""
    if len(samples) == 0:
        raise ValueError("percentile of an empty sample")
    if not 0.0 < q <= 1.0:
        raise ValueError(f"quantile must lie in (0, 1], got {q}")
    ordered = sorted(samples)
    rank = max(1, math.ceil(q * len(ordered)))
    return ordered[rank - 1]


def combine_xz(ler_x: float, ler_z: float) -> float:
    return min(ler_x + ler_z, 1.0)


@dataclass
class TrialPlan:
    problem: DecodingProblem
    decoder: str | Decoder
    shots: int
    base_seed: int = 0
    workers: int = 1
    keep_per_shot: bool = False
    quantiles: tuple[float, ...] = DEFAULT_QUANTILES

    def __post_init__(self):
        if self.shots < 1:
            raise ValueError(f"shots must be >= 1, got {self.shots}")
        if self.workers < 1:
            raise ValueError(f"workers must be >= 1, got {self.workers}")
        if not isinstance(self.decoder, str) and self.workers > 1:
            raise ValueError("multi-worker runs need a decoder name, not a callable")

    def decoder_name(self) -> str:
        return self.decoder if isinstance(self.decoder, str) else getattr(self.decoder, "__name__", "custom")


@dataclass
class ShotRecord:
    shot: int
    seed: int
    failed: bool
    converged: bool
    weight: float
    rounds: int
    time_ns: int


@dataclass
class SimStats:
    shots: int
    logical_failures: int
    decoder_nonconvergence: int
    mean_time: float
    percentiles: dict[float, float]
    per_shot_log: list[ShotRecord] | None = None

    @property
    def ler(self) -> float:
        return self.logical_failures / self.shots

    def to_dict(self) -> dict:
        return {
            "shots": self.shots,
            "logical_failures": self.logical_failures,
            "decoder_nonconvergence": self.decoder_nonconvergence,
            "logical_error_rate": self.ler,
            "mean_time_s": self.mean_time,
            "percentiles_s": {str(q): v for q, v in self.percentiles.items()},
        }

    def summary_line(self) -> str:
        p999 = self.percentiles.get(0.999, float("nan"))
        return (
            f"shots={self.shots} failures={self.logical_failures} ler={self.ler:.6g} "
            f"mean_ms={self.mean_time * 1e3:.4f} p999_ms={p999 * 1e3:.4f}"
        )


def _run_shots(problem: DecodingProblem, decoder: str | Decoder, base_seed: int, shots: range) -> list[ShotRecord]:
    decode = get_decoder(decoder) if isinstance(decoder, str) else decoder
    # untimed warm-up so JIT loading does not land in the latency tail
    decode(problem, np.zeros(problem.M, dtype=np.uint8))
    records = []
    for k in shots:
        seed = shot_seed(base_seed, k)
        e = sample_error(problem, np.random.default_rng(seed))
        s = syndrome_of(problem, e)
        t0 = time.perf_counter_ns()
        res = decode(problem, s)
        elapsed = time.perf_counter_ns() - t0
        residual = e ^ np.asarray(res.decoded, dtype=np.uint8)
        failed = (not res.converged) or bool(logical_flip(problem, residual).any())
        records.append(ShotRecord(k, seed, failed, bool(res.converged), float(res.weight), int(res.rounds_used), elapsed))
    return records


def _chunks(shots: int, workers: int) -> list[range]:
    bounds = np.linspace(0, shots, workers + 1).astype(int)
    return [range(a, b) for a, b in zip(bounds[:-1], bounds[1:]) if b > a]


def aggregate(records: list[ShotRecord], quantiles: Sequence[float] = DEFAULT_QUANTILES, keep: bool = False) -> SimStats:
    records = sorted(records, key=lambda r: r.shot)
    times = [r.time_ns * 1e-9 for r in records]
    return SimStats(
        shots=len(records),
        logical_failures=sum(r.failed for r in records),
        decoder_nonconvergence=sum(not r.converged for r in records),
        mean_time=float(np.mean(times)),
        percentiles={q: percentile(times, q) for q in quantiles},
        per_shot_log=records if keep else None,
    )


def run_trials(plan: TrialPlan) -> SimStats:
    """Sample, decode and score ``plan.shots`` shots.

    Shot ``k`` always draws from the seed ``shot_seed(base_seed, k)``, so
    failure counts do not depend on the worker count.
    """
    if plan.workers == 1:
        records = _run_shots(plan.problem, plan.decoder, plan.base_seed, range(plan.shots))
    else:
        chunks = _chunks(plan.shots, plan.workers)
        with ProcessPoolExecutor(max_workers=plan.workers) as pool:
            futures = [pool.submit(_run_shots, plan.problem, plan.decoder, plan.base_seed, c) for c in chunks]
            records = [rec for f in futures for rec in f.result()]
    return aggregate(records, plan.quantiles, plan.keep_per_shot)


def run_document(plan: TrialPlan, stats: SimStats, extra: dict | None = None) -> dict:
    doc = {
        "plan": {
            "decoder": plan.decoder_name(),
            "shots": plan.shots,
            "base_seed": plan.base_seed,
            "workers": plan.workers,
            "problem": {"N": plan.problem.N, "M": plan.problem.M, "K": plan.problem.K},
        },
        "stats": stats.to_dict(),
        "software": {"package": "qldpc-beam", "version": __version__, "kernel_backend": kernels.BACKEND},
        "host": {"platform": platform.platform(), "python": platform.python_version(), "processor": platform.processor()},
    }
    if extra:
        doc["plan"].update(extra)
    return doc


def write_json(doc: dict, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2)
        fh.write("\n")


def write_per_shot_csv(records: list[ShotRecord], path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(CSV_HEADER)
        for r in records:
            writer.writerow([r.shot, r.seed, int(r.failed), int(r.converged), repr(r.weight), r.rounds, r.time_ns])

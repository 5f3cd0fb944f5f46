"""Name -> decoder registry shared by the CLI and the simulation harness."""

from __future__ import annotations

import time
from typing import Callable

import numpy as np

from .beam import PRESETS, DecodeResult, beam_decode
from .bp import plain_bp
from .osd import BP30_OSD, bp_osd_decode
from .problem import DecodingProblem, error_weight

# plain BP gets the same iteration budget as the smallest beam preset
PLAIN_BP_ITERS = 230

Decoder = Callable[[DecodingProblem, np.ndarray], DecodeResult]

DECODER_NAMES: tuple[str, ...] = ("bp", "bp30+osd", *PRESETS)


def bp_decode(problem: DecodingProblem, s, max_iters: int = PLAIN_BP_ITERS) -> DecodeResult:
    t0 = time.perf_counter()
    out = plain_bp(problem, s, max_iters)
    return DecodeResult(
        decoded=out.hard_decision,
        converged=out.converged,
        weight=error_weight(problem, out.hard_decision),
        solutions_found=int(out.converged),
        wall_time=time.perf_counter() - t0,
    )


def get_decoder(name: str) -> Decoder:
    if name == "bp":
        return bp_decode
    if name == "bp30+osd":
        return lambda problem, s: bp_osd_decode(problem, s, BP30_OSD)
    if name in PRESETS:
        cfg = PRESETS[name]
        return lambda problem, s: beam_decode(problem, s, cfg)
    raise KeyError(f"unknown decoder {name!r}; valid decoders: {', '.join(DECODER_NAMES)}")

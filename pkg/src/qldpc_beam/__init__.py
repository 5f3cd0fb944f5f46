"""Beam search and BP-OSD decoding for quantum LDPC codes."""

__version__ = "0.1.0"

from .beam import PRESETS, BeamConfig, DecodeResult, beam_decode
from .bp import MSG_MAX, BpOutcome, initial_messages, masked_bp, plain_bp
from .codes import BBSpec, CssCode, bb_code, code_capacity_problem, hgp_code, logical_operators, repetition_code
from .gf2 import SparseBinaryMatrix, kernel_basis, matvec, row_echelon, solve_with_pivots
from .osd import BP30_OSD, OsdConfig, bp_osd_decode
from .problem import DecodingProblem, error_weight, load_problem, logical_flip, save_problem, syndrome_of

__all__ = [
    "BBSpec",
    "BP30_OSD",
    "BeamConfig",
    "BpOutcome",
    "CssCode",
    "DecodeResult",
    "DecodingProblem",
    "MSG_MAX",
    "OsdConfig",
    "PRESETS",
    "SparseBinaryMatrix",
    "bb_code",
    "beam_decode",
    "bp_osd_decode",
    "code_capacity_problem",
    "error_weight",
    "hgp_code",
    "initial_messages",
    "kernel_basis",
    "load_problem",
    "logical_flip",
    "logical_operators",
    "masked_bp",
    "matvec",
    "plain_bp",
    "repetition_code",
    "row_echelon",
    "save_problem",
    "solve_with_pivots",
    "syndrome_of",
]

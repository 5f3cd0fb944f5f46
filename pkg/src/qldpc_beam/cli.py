"""Command-line front end: ``make-code``, ``decode`` and ``simulate``.

Exit codes: 0 success (or converged decode), 1 non-converged decode,
2 usage, file or parse errors.
"""

from __future__ import annotations

import argparse
import sys

from . import __version__
from .codes import build_preset, code_capacity_problem, logical_operators, preset_names
from .decoders import DECODER_NAMES, get_decoder
from .problem import QdemParseError, format_bits, read_problem, read_syndrome, write_problem
from .sim import TrialPlan, run_document, run_trials, write_json, write_per_shot_csv

EXIT_OK = 0
EXIT_NONCONVERGED = 1
EXIT_USAGE = 2


class UsageError(Exception):
    pass


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 2**64:
        raise argparse.ArgumentTypeError(f"seed must fit in 64 unsigned bits, got {text}")
    return value


def _add_code_flags(p: argparse.ArgumentParser, required: bool) -> None:
    p.add_argument("--preset", required=required, help="code preset: rep<n>, bb72, bb90, bb144, hgp450")
    p.add_argument("--noise", type=float, help="physical depolarizing rate p_phys")
    p.add_argument("--type", dest="error_type", choices=("X", "Z"), default="X")
    p.add_argument("--stack", choices=("XZ", "XYZ"), default="XZ")


def _add_decoder_flag(p: argparse.ArgumentParser) -> None:
    p.add_argument("--decoder", default="beam8_230iters",
                   help=f"one of: {', '.join(DECODER_NAMES)} (default beam8_230iters)")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="qldpc-beam", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    mk = sub.add_parser("make-code", help="write a code-capacity QDEM1 problem file")
    _add_code_flags(mk, required=True)
    mk.add_argument("--out", required=True, help="output QDEM1 path")

    dec = sub.add_parser("decode", help="decode one syndrome file")
    dec.add_argument("--problem", required=True)
    dec.add_argument("--syndrome", required=True)
    _add_decoder_flag(dec)

    sim = sub.add_parser("simulate", help="Monte Carlo logical error rate and latency")
    sim.add_argument("--problem", help="QDEM1 file (alternative to --preset)")
    _add_code_flags(sim, required=False)
    _add_decoder_flag(sim)
    sim.add_argument("--shots", type=int, default=1000)
    sim.add_argument("--seed", type=_u64, default=0)
    sim.add_argument("--workers", type=int, default=1)
    sim.add_argument("--out", help="write the SimStats JSON document here")
    sim.add_argument("--per-shot-csv", help="write per-shot records here")
    return parser


def _problem_from_preset(args):
    if args.noise is None:
        raise UsageError("--noise is required with --preset")
    try:
        code = build_preset(args.preset)
    except KeyError as exc:
        raise UsageError(exc.args[0]) from None
    try:
        a_x, a_z = logical_operators(code)
        problem = code_capacity_problem(code, a_x, a_z, args.noise, args.error_type, args.stack)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    return code, problem


def _check_decoder(name: str) -> None:
    if name not in DECODER_NAMES:
        raise UsageError(f"unknown decoder {name!r}; valid decoders: {', '.join(DECODER_NAMES)}")


def cmd_make_code(args) -> int:
    code, problem = _problem_from_preset(args)
    write_problem(problem, args.out)
    print(f"n={code.n} k={code.k} M={problem.M} N={problem.N}")
    return EXIT_OK


def cmd_decode(args) -> int:
    _check_decoder(args.decoder)
    problem = read_problem(args.problem)
    s = read_syndrome(args.syndrome, problem.M)
    res = get_decoder(args.decoder)(problem, s)
    print(format_bits(res.decoded))
    print(f"converged={str(res.converged).lower()} weight={res.weight:.6f} rounds={res.rounds_used}")
    return EXIT_OK if res.converged else EXIT_NONCONVERGED


def cmd_simulate(args) -> int:
    _check_decoder(args.decoder)
    if args.shots < 1:
        raise UsageError(f"--shots must be >= 1, got {args.shots}")
    if args.workers < 1:
        raise UsageError(f"--workers must be >= 1, got {args.workers}")
    extra = {}
    if args.problem and args.preset:
        raise UsageError("give either --problem or --preset, not both")
    if args.problem:
        problem = read_problem(args.problem)
        extra["problem_file"] = args.problem
    elif args.preset:
        _, problem = _problem_from_preset(args)
        extra.update(preset=args.preset, noise=args.noise, error_type=args.error_type, stacking=args.stack)
    else:
        raise UsageError("one of --problem or --preset is required")

    plan = TrialPlan(problem, args.decoder, args.shots, args.seed, args.workers,
                     keep_per_shot=bool(args.per_shot_csv))
    stats = run_trials(plan)
    if args.out:
        write_json(run_document(plan, stats, extra), args.out)
    if args.per_shot_csv:
        write_per_shot_csv(stats.per_shot_log, args.per_shot_csv)
    print(stats.summary_line())
    return EXIT_OK


COMMANDS = {"make-code": cmd_make_code, "decode": cmd_decode, "simulate": cmd_simulate}


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return COMMANDS[args.command](args)
    except (UsageError, QdemParseError, OSError) as exc:
        print(f"qldpc-beam {args.command}: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())

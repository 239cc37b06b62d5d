"""Command-line front end.

Exit codes: 0 decided yes / generated, 1 decided no, 2 usage or input error,
3 resource cap hit.  Machine-readable results go to stdout as ``RESULT`` lines.
"""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .core import FormatError, GameState, parse_board, render, serialize_board
from .game_solver import (DEFAULT_STATE_CAP, StateLimitExceeded, TraceFormatError,
                          check_gadget_trace, parse_trace, who_wins)
from .mate import (DEFAULT_NODE_CAP, SearchLimitExceeded, move_bound, solve_c_move,
                   solve_k_move, solve_unbounded, verify_k_certificate)
from .reductions.q3sat import format_layout, parse_layout, reduce_q3sat
from .reductions.qbf import parse_qdimacs
from .reductions.steiner import SteinerInstance, parse_points, reduce_steiner
from .rules import format_turn, parse_turn

EXIT_YES, EXIT_NO, EXIT_USAGE, EXIT_CAP = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _read(path: str, stdin_used: list[bool]) -> str:
    if path == "-":
        if stdin_used[0]:
            raise UsageError("stdin ('-') can be read only once")
        stdin_used[0] = True
        return sys.stdin.read()
    try:
        return Path(path).read_text(encoding="utf-8")
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from None


def _board(text: str) -> GameState:
    try:
        return parse_board(text)
    except (FormatError, ValueError) as exc:
        raise UsageError(f"bad board: {exc}") from None


def _non_negative(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError("must be non-negative")
    return value


def _positive(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be positive")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pushfight", description="Generalized Push Fight tools.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="decide whether the side to move wins this turn")
    p.add_argument("--regime", choices=["c", "k", "unbounded"], required=True)
    p.add_argument("--c", type=_non_negative, default=None)
    p.add_argument("--k", type=_non_negative, default=None)
    p.add_argument("--node-cap", type=_positive, default=DEFAULT_NODE_CAP)
    p.add_argument("file")

    p = sub.add_parser("verify-turn", help="check a winning-turn certificate")
    p.add_argument("file")
    p.add_argument("turnfile")
    p.add_argument("--k", type=_non_negative, default=None)

    p = sub.add_parser("whowins", help="solve the full game by retrograde analysis")
    p.add_argument("file")
    p.add_argument("--state-cap", type=_positive, default=DEFAULT_STATE_CAP)

    p = sub.add_parser("reduce-steiner", help="rectilinear Steiner tree instance to a k-move board")
    p.add_argument("--ell", type=_non_negative, required=True)
    p.add_argument("pointsfile")

    p = sub.add_parser("reduce-q3sat", help="quantified 3-CNF formula to a who-wins board")
    p.add_argument("qdimacsfile")
    p.add_argument("--out", default=None, metavar="PREFIX")

    p = sub.add_parser("render", help="draw a board")
    p.add_argument("file")
    p.add_argument("--format", choices=["ascii", "svg"], required=True)
    p.add_argument("--outline", action="store_true",
                   help="draw gadget boxes from the .layout file next to FILE")

    p = sub.add_parser("check-gadget", help="run a gadget trace assertion file")
    p.add_argument("file")
    p.add_argument("assertfile")
    return parser


def _solve(args, out, stdin_used) -> int:
    if args.regime == "k" and args.k is None:
        raise UsageError("--regime k requires --k")
    if args.regime != "c" and args.c is not None:
        raise UsageError("--c applies only to --regime c")
    if args.regime != "k" and args.k is not None:
        raise UsageError("--k applies only to --regime k")
    state = _board(_read(args.file, stdin_used))
    if args.regime == "c":
        answer = solve_c_move(state, 2 if args.c is None else args.c)
    elif args.regime == "k":
        answer = solve_k_move(state, args.k, node_cap=args.node_cap)
    else:
        answer = solve_unbounded(state)
    if not answer.winnable:
        out.write("RESULT winnable=false\n")
        return EXIT_NO
    out.write(f"RESULT winnable=true moves={len(answer.witness.moves)}\n")
    out.write(format_turn(answer.witness))
    return EXIT_YES


def _verify(args, out, err, stdin_used) -> int:
    state = _board(_read(args.file, stdin_used))
    try:
        turn = parse_turn(_read(args.turnfile, stdin_used))
    except ValueError as exc:
        raise UsageError(f"bad turn: {exc}") from None
    k = move_bound(state) if args.k is None else args.k
    verdict = verify_k_certificate(state, k, turn)
    out.write(f"RESULT valid={'true' if verdict.ok else 'false'} reason={verdict.reason}\n")
    if not verdict.ok:
        err.write(f"rejected: {verdict.reason}\n")
        return EXIT_NO
    return EXIT_YES


def _whowins(args, out, stdin_used) -> int:
    state = _board(_read(args.file, stdin_used))
    result = who_wins(state, args.state_cap)
    depth = "none" if result.depth_to_outcome is None else result.depth_to_outcome
    out.write(f"RESULT value={result.value} depth={depth} to_move={state.to_move.value}\n")
    mover_wins = result.value == f"{state.to_move.value}_wins"
    return EXIT_YES if mover_wins else EXIT_NO


def _reduce_steiner(args, out, err, stdin_used) -> int:
    try:
        points = parse_points(_read(args.pointsfile, stdin_used))
        inst = SteinerInstance(tuple(points), args.ell)
    except ValueError as exc:
        raise UsageError(f"bad points: {exc}") from None
    state, k = reduce_steiner(inst)
    out.write(serialize_board(state))
    err.write(f"RESULT k={k}\n")
    return EXIT_YES


def _reduce_q3sat(args, out, stdin_used) -> int:
    try:
        formula = parse_qdimacs(_read(args.qdimacsfile, stdin_used))
        state, records = reduce_q3sat(formula)
    except ValueError as exc:
        raise UsageError(f"bad formula: {exc}") from None
    board = serialize_board(state)
    out.write(board)
    if args.out:
        Path(args.out + ".pfb").write_text(board, encoding="utf-8")
        Path(args.out + ".layout").write_text(format_layout(records), encoding="utf-8")
    return EXIT_YES


def _render(args, out, stdin_used) -> int:
    state = _board(_read(args.file, stdin_used))
    records = []
    if args.outline:
        if args.file == "-":
            raise UsageError("--outline needs a board file with a .layout sidecar, not stdin")
        sidecar = Path(args.file).with_suffix(".layout")
        try:
            records = parse_layout(sidecar.read_text(encoding="utf-8"))
        except OSError:
            raise UsageError(f"--outline: no layout file {sidecar}") from None
        except ValueError as exc:
            raise UsageError(f"bad layout {sidecar}: {exc}") from None
    out.write(render(state, args.format, records))
    return EXIT_YES


def _check_gadget(args, out, stdin_used) -> int:
    state = _board(_read(args.file, stdin_used))
    try:
        assertion = parse_trace(_read(args.assertfile, stdin_used))
    except TraceFormatError as exc:
        raise UsageError(f"bad assertion file: {exc}") from None
    report = check_gadget_trace(state, assertion)
    out.write(report.text())
    return EXIT_YES if report.ok else EXIT_NO


def run(argv: list[str] | None = None, out=None, err=None) -> int:
    out = sys.stdout if out is None else out
    err = sys.stderr if err is None else err
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_YES
    stdin_used = [False]
    try:
        if args.command == "solve":
            return _solve(args, out, stdin_used)
        if args.command == "verify-turn":
            return _verify(args, out, err, stdin_used)
        if args.command == "whowins":
            return _whowins(args, out, stdin_used)
        if args.command == "reduce-steiner":
            return _reduce_steiner(args, out, err, stdin_used)
        if args.command == "reduce-q3sat":
            return _reduce_q3sat(args, out, stdin_used)
        if args.command == "render":
            return _render(args, out, stdin_used)
        return _check_gadget(args, out, stdin_used)
    except UsageError as exc:
        err.write(f"error: {exc}\n")
        return EXIT_USAGE
    except (SearchLimitExceeded, StateLimitExceeded) as exc:
        out.write("RESULT unknown reason=cap\n")
        err.write(f"resource cap: {exc}\n")
        return EXIT_CAP


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

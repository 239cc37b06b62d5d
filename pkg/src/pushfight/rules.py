"""Move and push generation, turn application and outcome detection."""

from __future__ import annotations

import enum
from collections import deque
from dataclasses import dataclass
from typing import Iterable, NamedTuple

from .core import (DIRECTIONS, Color, Direction, GameState, Kind, Piece, Square,
                   row_major)


class Outcome(enum.Enum):
    WHITE_WINS = "white_wins"
    BLACK_WINS = "black_wins"
    ONGOING = "ongoing"

    @staticmethod
    def win_for(color: Color) -> "Outcome":
        return Outcome.WHITE_WINS if color is Color.WHITE else Outcome.BLACK_WINS

    @staticmethod
    def loss_for(color: Color) -> "Outcome":
        return Outcome.win_for(color.other)


class IllegalTurn(ValueError):
    """A move, push or budget violation while applying a turn."""

    def __init__(self, reason: str, detail: str):
        super().__init__(f"{reason}: {detail}")
        self.reason = reason


Move = tuple[Square, Square]
Push = tuple[Square, Direction]


@dataclass(frozen=True)
class Turn:
    moves: tuple[Move, ...]
    push: Push

    def __post_init__(self) -> None:
        object.__setattr__(self, "moves", tuple((Square(*a), Square(*b)) for a, b in self.moves))
        object.__setattr__(self, "push", (Square(*self.push[0]), self.push[1]))


class PushResult(NamedTuple):
    new_state: GameState
    ejected: tuple[Piece, Square] | None


# ---------------------------------------------------------------------------
# moves

def reachable_empty(state: GameState, src: Square) -> set[Square]:
    """Empty squares reachable from ``src`` through 4-connected empty squares."""
    cells = state.board.cells
    pieces = state.pieces
    seen: set[Square] = set()
    todo = deque([src])
    while todo:
        sq = todo.popleft()
        for d in DIRECTIONS:
            nxt = sq.step(d)
            if nxt in cells and nxt not in pieces and nxt not in seen:
                seen.add(nxt)
                todo.append(nxt)
    seen.discard(src)
    return seen


def legal_moves(state: GameState, mover: Color | None = None) -> set[Move]:
    mover = state.to_move if mover is None else mover
    return {(src, dst)
            for src in state.squares_of(mover)
            for dst in reachable_empty(state, src)}


def apply_move(state: GameState, move: Move) -> GameState:
    src, dst = move
    pieces = dict(state.pieces)
    pieces[dst] = pieces.pop(src)
    anchor = dst if state.anchor == src else state.anchor
    return GameState(state.board, pieces, anchor)


# ---------------------------------------------------------------------------
# pushes

def push_segment(state: GameState, king: Square, d: Direction) -> tuple[list[Square], bool] | None:
    """The squares a push would shift, and whether the last one leaves the board.

    Returns ``None`` when the push is illegal for board reasons (nothing to
    push, side rail, anchored king in the line).  Does not check ownership.
    """
    cells, pieces = state.board.cells, state.pieces
    seg: list[Square] = []
    sq = king.step(d)
    while sq in pieces:
        if sq == state.anchor:
            return None
        seg.append(sq)
        sq = sq.step(d)
    if not seg:
        return None
    if sq in cells:
        return seg, False
    if state.board.railed(seg[-1], d):
        return None
    return seg, True


def legal_pushes(state: GameState, mover: Color | None = None) -> set[Push]:
    mover = state.to_move if mover is None else mover
    return {(k, d) for k in state.squares_of(mover, Kind.KING) for d in DIRECTIONS
            if push_segment(state, k, d) is not None}


def apply_push(state: GameState, king: Square, d: Direction) -> PushResult:
    """Shift the pushed line one square and anchor the pushing king.

    Raises :class:`IllegalTurn` if ``king`` is not a king or the push is blocked.
    """
    piece = state.pieces.get(king)
    if piece is None or piece.kind is not Kind.KING:
        raise IllegalTurn("illegal_push", f"no king at {tuple(king)}")
    found = push_segment(state, king, d)
    if found is None:
        raise IllegalTurn("illegal_push", f"{tuple(king)} {d.name} is blocked")
    seg, off = found
    pieces = dict(state.pieces)
    ejected = None
    if off:
        last = seg[-1]
        ejected = (pieces.pop(last), last)
        seg = seg[:-1]
    for sq in reversed(seg):
        pieces[sq.step(d)] = pieces.pop(sq)
    new_king = king.step(d)
    pieces[new_king] = pieces.pop(king)
    return PushResult(GameState(state.board, pieces, new_king), ejected)


def apply_turn(state: GameState, turn: Turn, max_moves: int | None = None) -> tuple[GameState, Outcome]:
    """Play ``turn`` for the side to move.

    The returned outcome reflects ejections only: whoever loses a piece loses.
    Whether the next player can push at all is :func:`outcome`'s business.
    """
    mover = state.to_move
    if max_moves is not None and len(turn.moves) > max_moves:
        raise IllegalTurn("too_many_moves", f"{len(turn.moves)} > {max_moves}")
    for i, move in enumerate(turn.moves):
        src, dst = move
        piece = state.pieces.get(src)
        if piece is None or piece.color is not mover:
            raise IllegalTurn("illegal_move", f"move {i + 1}: no {mover.value} piece at {tuple(src)}")
        if dst == src or dst not in reachable_empty(state, src):
            raise IllegalTurn("illegal_move", f"move {i + 1}: {tuple(dst)} unreachable from {tuple(src)}")
        state = apply_move(state, move)
    king, d = turn.push
    piece = state.pieces.get(king)
    if piece is None or piece.color is not mover or piece.kind is not Kind.KING:
        raise IllegalTurn("illegal_push", f"no {mover.value} king at {tuple(king)}")
    new_state, ejected = apply_push(state, king, d)
    if ejected is None:
        return new_state, Outcome.ONGOING
    return new_state, Outcome.loss_for(ejected[0].color)


def outcome(state: GameState) -> Outcome:
    mover = state.to_move
    if legal_pushes(state, mover):
        return Outcome.ONGOING
    return Outcome.loss_for(mover)


def winning_push(state: GameState, mover: Color, kings: Iterable[Square] | None = None) -> Push | None:
    """First (row-major king, then N,E,S,W) push ejecting an opponent piece."""
    kings = state.squares_of(mover, Kind.KING) if kings is None else sorted(kings, key=row_major)
    for k in kings:
        for d in DIRECTIONS:
            found = push_segment(state, k, d)
            if found and found[1] and state.pieces[found[0][-1]].color is not mover:
                return k, d
    return None


# ---------------------------------------------------------------------------
# turn text format

def parse_turn(text: str) -> Turn:
    moves: list[Move] = []
    push: Push | None = None
    for lineno, line in enumerate(text.splitlines(), start=1):
        parts = line.split()
        if not parts:
            continue
        if push is not None:
            raise ValueError(f"line {lineno}: content after push")
        try:
            if parts[0] == "move" and len(parts) == 5:
                a, b, c, e = map(int, parts[1:])
                moves.append((Square(a, b), Square(c, e)))
            elif parts[0] == "push" and len(parts) == 4:
                push = (Square(int(parts[1]), int(parts[2])), Direction[parts[3]])
            else:
                raise ValueError
        except (ValueError, KeyError):
            raise ValueError(f"line {lineno}: expected 'move C R C R' or 'push C R DIR'") from None
    if push is None:
        raise ValueError("turn has no push line")
    return Turn(tuple(moves), push)


def format_turn(turn: Turn) -> str:
    lines = [f"move {a.col} {a.row} {b.col} {b.row}" for a, b in turn.moves]
    k, d = turn.push
    lines.append(f"push {k.col} {k.row} {d.name}")
    return "\n".join(lines) + "\n"

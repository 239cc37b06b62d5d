"""Mate-in-1 deciders for the three move-budget regimes.

* ``solve_c_move``  -- breadth-first search over configurations to depth c.
* ``solve_k_move``  -- same search with depth ``min(k, n**6)`` and a node cap;
  exponential in the worst case.
* ``solve_unbounded`` -- search over equivalence classes, polynomial.

Each solver tries the mover's kings in row-major order as the pushing king,
treating the others as pawns.  A returned witness always replays through
:func:`pushfight.rules.apply_turn` to a win for the mover.
"""

from __future__ import annotations

from collections import deque
from typing import Iterator, NamedTuple

from .classes import (ClassDescriptor, Config, NeighborEdge, SingleKingView,
                      _placement, descriptor_of, is_winning_class,
                      neighbor_edges, pawnspace_of, ray, realize_in_class)
from .core import DIRECTIONS, Direction, GameState, Kind, Square, row_major
from .rules import IllegalTurn, Outcome, Turn, apply_turn

DEFAULT_NODE_CAP = 10 ** 7


class SearchLimitExceeded(RuntimeError):
    """The configuration search hit its node cap; the answer is unknown."""


class Mate1Answer(NamedTuple):
    winnable: bool
    witness: Turn | None = None


class Verdict(NamedTuple):
    ok: bool
    reason: str

    def __bool__(self) -> bool:
        return self.ok


def move_bound(state: GameState) -> int:
    """Moves that always suffice for a winning turn: n**6 for area n."""
    return state.board.area ** 6


# ---------------------------------------------------------------------------
# configuration search

def _views(state: GameState) -> list[SingleKingView]:
    return [SingleKingView(state, k) for k in state.squares_of(state.to_move, Kind.KING)]


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


class _Grid:
    """Bitmask encoding of one view: squares are bits in row-major order."""

    def __init__(self, view: SingleKingView):
        self.view = view
        self.squares = sorted(view.cells, key=row_major)
        self.index = {sq: i for i, sq in enumerate(self.squares)}
        self.nbr = [sum(1 << self.index[sq.step(d)] for d in DIRECTIONS if sq.step(d) in self.index)
                    for sq in self.squares]
        self.full = (1 << len(self.squares)) - 1
        self.opp = sum(1 << self.index[sq] for sq in view.opponent)
        board, anchor = view.base.board, view.base.anchor
        # per king square: (direction, line mask) for lines that would win once full
        self.win_lines: list[list[tuple[Direction, int]]] = []
        for sq in self.squares:
            lines = []
            for d in DIRECTIONS:
                line = ray(view, sq, d)
                if (line and line[-1] in view.opponent and not board.railed(line[-1], d)
                        and anchor not in line):
                    lines.append((d, sum(1 << self.index[x] for x in line)))
            self.win_lines.append(lines)

    def encode(self, cfg: Config) -> tuple[int, int]:
        return self.index[cfg.king], sum(1 << self.index[sq] for sq in cfg.pawns)

    def win(self, king: int, pawns: int) -> Direction | None:
        occupied = pawns | self.opp
        for d, line in self.win_lines[king]:
            if line & ~occupied == 0:
                return d
        return None

    def moves(self, king: int, pawns: int) -> list[tuple[int, int, int, int]]:
        """(src, dst, new_king, new_pawns) for every single move, sorted by (src, dst)."""
        mine = pawns | (1 << king)
        empty = self.full & ~(mine | self.opp)
        out = []
        left = empty
        while left:
            seed = left & -left
            region = seed
            frontier = seed
            while frontier:
                grow = 0
                for i in _bits(frontier):
                    grow |= self.nbr[i]
                frontier = grow & empty & ~region
                region |= frontier
            left &= ~region
            border = 0
            for i in _bits(region):
                border |= self.nbr[i]
            for src in _bits(border & mine):
                for dst in _bits(region):
                    if src == king:
                        out.append((src, dst, dst, pawns))
                    else:
                        out.append((src, dst, king, pawns & ~(1 << src) | (1 << dst)))
        out.sort()
        return out


def _config_search(state: GameState, depth_cap: int, node_cap: int | None) -> Mate1Answer:
    nodes = 0
    for view in _views(state):
        grid = _Grid(view)
        start = grid.encode(view.initial_config())
        parent: dict[tuple[int, int], tuple[tuple[int, int], int, int] | None] = {start: None}
        frontier = deque([(start, 0)])
        while frontier:
            node, depth = frontier.popleft()
            d = grid.win(*node)
            if d is not None:
                moves = []
                while parent[node] is not None:
                    node, src, dst = parent[node]
                    moves.append((grid.squares[src], grid.squares[dst]))
                moves.reverse()
                final_king = view.pushing_king
                for src, dst in moves:
                    if src == final_king:
                        final_king = dst
                return Mate1Answer(True, Turn(tuple(moves), (final_king, d)))
            if depth >= depth_cap:
                continue
            for src, dst, king, pawns in grid.moves(*node):
                nxt = (king, pawns)
                if nxt in parent:
                    continue
                nodes += 1
                if node_cap is not None and nodes > node_cap:
                    raise SearchLimitExceeded(f"more than {node_cap} configurations")
                parent[nxt] = (node, src, dst)
                frontier.append((nxt, depth + 1))
    return Mate1Answer(False)


def solve_c_move(state: GameState, c: int) -> Mate1Answer:
    if c < 0:
        raise ValueError("c must be non-negative")
    return _config_search(state, c, None)


def solve_k_move(state: GameState, k: int, node_cap: int = DEFAULT_NODE_CAP) -> Mate1Answer:
    """Exact k-move decision.

    Rejects early when the class search says no winning turn exists at any
    length; otherwise searches configurations to depth ``min(k, n**6)``.
    Raises :class:`SearchLimitExceeded` instead of guessing when ``node_cap``
    is hit.
    """
    if k < 0:
        raise ValueError("k must be non-negative")
    if not solve_unbounded(state).winnable:
        return Mate1Answer(False)
    return _config_search(state, min(k, move_bound(state)), node_cap)


def verify_k_certificate(state: GameState, k: int, turn: Turn) -> Verdict:
    """Deterministic check of a guessed turn: legal, short enough, and winning."""
    if len(turn.moves) > min(k, move_bound(state)):
        return Verdict(False, "too_many_moves")
    mover = state.to_move
    try:
        _, result = apply_turn(state, turn)
    except IllegalTurn as exc:
        return Verdict(False, exc.reason)
    if result is not Outcome.win_for(mover):
        return Verdict(False, "not_a_win")
    return Verdict(True, "ok")


# ---------------------------------------------------------------------------
# class-graph search

def class_search(view: SingleKingView) -> tuple[list[NeighborEdge], Direction] | None:
    """BFS over the class graph from the view's start class.

    Returns the edge path to the first winning class found and its push
    direction, or ``None``.
    """
    start = descriptor_of(view, view.initial_config())
    parent: dict[ClassDescriptor, tuple[ClassDescriptor, NeighborEdge] | None] = {start: None}
    frontier = deque([start])
    while frontier:
        c = frontier.popleft()
        d = is_winning_class(view, c)
        if d is not None:
            path = []
            while parent[c] is not None:
                prev, edge = parent[c]
                path.append(edge)
                c = prev
            return path[::-1], d
        for edge in neighbor_edges(view, c):
            if edge.target not in parent:
                parent[edge.target] = (c, edge)
                frontier.append(edge.target)
    return None


def reachable_classes(view: SingleKingView) -> set[ClassDescriptor]:
    start = descriptor_of(view, view.initial_config())
    seen = {start}
    frontier = [start]
    while frontier:
        c = frontier.pop()
        for edge in neighbor_edges(view, c):
            if edge.target not in seen:
                seen.add(edge.target)
                frontier.append(edge.target)
    return seen


def _step_config(view: SingleKingView, cur: Config, edge: NeighborEdge) -> Config:
    """A config in ``cur``'s class where the king can take ``edge``'s step."""
    ps = pawnspace_of(view, cur.king)
    t = cur.king.step(edge.direction)
    vacated = ps.owner[t]
    pawns: set[Square] = {sq for sq in cur.pawns if ps.owner[sq] != vacated}
    for part, count in edge.split:
        pawns |= _placement(part, count, [], cur.pawns)
    return Config(cur.king, frozenset(pawns))


def _win_config(view: SingleKingView, cur: Config, d: Direction) -> Config:
    ps = pawnspace_of(view, cur.king)
    line = set(ray(view, cur.king, d))
    pawns: set[Square] = set()
    for i, comp in enumerate(ps.components):
        count = sum(1 for sq in cur.pawns if ps.owner[sq] == i)
        must = sorted(comp & line, key=row_major)
        pawns |= _placement(comp, count, must, cur.pawns)
    return Config(cur.king, frozenset(pawns))


def _merge_king_steps(moves: list[tuple[Square, Square]], king: Square) -> list[tuple[Square, Square]]:
    out: list[tuple[Square, Square]] = []
    run_start = None
    for src, dst in moves:
        if src == king:
            if run_start is None:
                run_start = src
            king = dst
            continue
        if run_start is not None and run_start != king:
            out.append((run_start, king))
        run_start = None
        out.append((src, dst))
    if run_start is not None and run_start != king:
        out.append((run_start, king))
    return out


def solve_unbounded(state: GameState) -> Mate1Answer:
    for view in _views(state):
        found = class_search(view)
        if found is None:
            continue
        path, d = found
        cur = view.initial_config()
        moves: list[tuple[Square, Square]] = []
        for edge in path:
            ready = _step_config(view, cur, edge)
            moves += realize_in_class(view, cur, ready)
            t = cur.king.step(edge.direction)
            moves.append((cur.king, t))
            cur = Config(t, ready.pawns)
        final = _win_config(view, cur, d)
        moves += realize_in_class(view, cur, final)
        moves = _merge_king_steps(moves, view.pushing_king)
        return Mate1Answer(True, Turn(tuple(moves), (cur.king, d)))
    return Mate1Answer(False)

"""Rectilinear Steiner tree -> k-move mate-in-1, and an exact Steiner oracle."""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations

from ..core import (BLACK_KING, BLACK_PAWN, WHITE_KING, WHITE_PAWN, Board, Direction,
                    GameState, Piece, Square)

MAX_ORACLE_POINTS = 5

Point = tuple[int, int]


@dataclass(frozen=True)
class SteinerInstance:
    points: tuple[Point, ...]
    ell: int

    def __post_init__(self) -> None:
        pts = tuple((int(x), int(y)) for x, y in self.points)
        object.__setattr__(self, "points", pts)
        if not pts:
            raise ValueError("need at least one point")
        if len(set(pts)) != len(pts):
            raise ValueError("points must be distinct")
        if self.ell < 0:
            raise ValueError("length must be non-negative")


def parse_points(text: str) -> list[Point]:
    points = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ValueError(f"line {lineno}: expected 'x y'")
        try:
            points.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise ValueError(f"line {lineno}: non-integer coordinate") from None
    return points


def normalize_points(points) -> list[Point]:
    """Translate so min x = 2 and min y = 4, then move a lowest point first."""
    dx = 2 - min(x for x, _ in points)
    dy = 4 - min(y for _, y in points)
    moved = [(x + dx, y + dy) for x, y in points]
    first = min((p for p in moved if p[1] == 4), key=lambda p: p[0])
    return [first] + [p for p in moved if p != first]


def reduce_steiner(inst: SteinerInstance) -> tuple[GameState, int]:
    """Build the k-move instance; White must free its king through the alley.

    Coordinates below are 1-based (x right, y up) and converted to board
    squares in :func:`to_square` only.
    """
    pts = normalize_points(inst.points)
    n = len(pts)
    x1 = pts[0][0]
    height = max(y for _, y in pts)
    width = n + max(x for x, _ in pts)

    def to_square(x: int, y: int) -> Square:
        return Square(x - 1, height - y)

    holes = set(pts)
    pieces: dict[Square, Piece] = {}
    for x in range(1, width + 1):
        for y in range(1, height + 1):
            if (x, y) in holes:
                continue
            if (y == 3 and x != x1) or (y == 2 and (x < x1 - 1 or x > x1 + n)) or y == 1:
                piece = BLACK_PAWN
            else:
                piece = WHITE_PAWN
            pieces[to_square(x, y)] = piece
    pieces[to_square(x1 + n, 2)] = WHITE_KING
    anchor = to_square(x1 - 1, 2)
    pieces[anchor] = BLACK_KING
    board = Board.rectangle(width, height, open_edges=[(to_square(x1, 1), Direction.S)])
    return GameState(board, pieces, anchor), inst.ell + 3


def _mst_length(points: list[Point]) -> int:
    # Prim under the L1 metric
    if len(points) <= 1:
        return 0
    best = {p: abs(p[0] - points[0][0]) + abs(p[1] - points[0][1]) for p in points[1:]}
    total = 0
    while best:
        p = min(best, key=best.get)
        total += best.pop(p)
        for q in best:
            dist = abs(p[0] - q[0]) + abs(p[1] - q[1])
            if dist < best[q]:
                best[q] = dist
    return total


def steiner_oracle(points) -> int:
    """Exact rectilinear Steiner minimal tree length for up to 5 terminals.

    Tries every set of at most ``n - 2`` Hanan-grid Steiner points and keeps
    the cheapest L1 spanning tree.
    """
    terminals = sorted(set((int(x), int(y)) for x, y in points))
    if not terminals:
        raise ValueError("no points")
    if len(terminals) > MAX_ORACLE_POINTS:
        raise ValueError(f"at most {MAX_ORACLE_POINTS} points supported")
    xs = sorted({x for x, _ in terminals})
    ys = sorted({y for _, y in terminals})
    candidates = [(x, y) for x in xs for y in ys if (x, y) not in terminals]
    best = _mst_length(terminals)
    for size in range(1, max(0, len(terminals) - 2) + 1):
        for extra in combinations(candidates, size):
            best = min(best, _mst_length(terminals + list(extra)))
    return best

"""Boards, pieces and game states, plus the PFB v1 text format and renderers.

Coordinates are 0-based ``(col, row)`` with row 0 at the top; ``N`` points to
``row - 1``.  All values are immutable once built.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from types import MappingProxyType
from typing import Iterable, Mapping, NamedTuple


class Square(NamedTuple):
    col: int
    row: int

    def step(self, d: "Direction", k: int = 1) -> "Square":
        return Square(self.col + k * d.dc, self.row + k * d.dr)


def row_major(sq: Square) -> tuple[int, int]:
    """Sort key: top row first, then leftmost."""
    return (sq.row, sq.col)


class Direction(enum.Enum):
    # declaration order is the global N,E,S,W tie-break order
    N = (0, -1)
    E = (1, 0)
    S = (0, 1)
    W = (-1, 0)

    @property
    def dc(self) -> int:
        return self.value[0]

    @property
    def dr(self) -> int:
        return self.value[1]

    @property
    def opposite(self) -> "Direction":
        return _OPPOSITE[self]


_OPPOSITE = {Direction.N: Direction.S, Direction.S: Direction.N,
             Direction.E: Direction.W, Direction.W: Direction.E}
DIRECTIONS = tuple(Direction)


class Color(enum.Enum):
    WHITE = "white"
    BLACK = "black"

    @property
    def other(self) -> "Color":
        return Color.BLACK if self is Color.WHITE else Color.WHITE


class Kind(enum.Enum):
    PAWN = "pawn"
    KING = "king"


class Piece(NamedTuple):
    color: Color
    kind: Kind


WHITE_PAWN = Piece(Color.WHITE, Kind.PAWN)
WHITE_KING = Piece(Color.WHITE, Kind.KING)
BLACK_PAWN = Piece(Color.BLACK, Kind.PAWN)
BLACK_KING = Piece(Color.BLACK, Kind.KING)


class FormatError(ValueError):
    """Malformed or invariant-violating board text."""

    def __init__(self, message: str, line: int | None = None, col: int | None = None):
        where = ""
        if line is not None:
            where = f"line {line}" + (f", column {col}" if col is not None else "") + ": "
        super().__init__(where + message)
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Board:
    """A polyomino with a side-rail flag on each boundary edge."""

    cells: frozenset[Square]
    rails: frozenset[tuple[Square, Direction]]

    def __post_init__(self) -> None:
        object.__setattr__(self, "cells", frozenset(Square(*c) for c in self.cells))
        object.__setattr__(self, "rails", frozenset((Square(*s), d) for s, d in self.rails))
        if not self.cells:
            raise ValueError("board must have at least one cell")
        for sq in self.cells:
            if sq.col < 0 or sq.row < 0:
                raise ValueError(f"negative coordinate {sq}")
        for sq, d in self.rails:
            if sq not in self.cells:
                raise ValueError(f"rail on off-board square {sq}")
            if sq.step(d) in self.cells:
                raise ValueError(f"rail on interior edge {sq} {d.name}")

    @classmethod
    def rectangle(cls, cols: int, rows: int, *, open_edges: Iterable[tuple[Square, Direction]] = ()) -> "Board":
        """Fully railed rectangle, minus ``open_edges``."""
        cells = {Square(c, r) for c in range(cols) for r in range(rows)}
        return cls.from_cells(cells, open_edges=open_edges)

    @classmethod
    def from_cells(cls, cells: Iterable[Square], *, open_edges: Iterable[tuple[Square, Direction]] = ()) -> "Board":
        cells = frozenset(cells)
        opened = set(open_edges)
        rails = {(sq, d) for sq in cells for d in DIRECTIONS
                 if sq.step(d) not in cells and (sq, d) not in opened}
        return cls(cells, frozenset(rails))

    @property
    def area(self) -> int:
        return len(self.cells)

    @property
    def width(self) -> int:
        return max(sq.col for sq in self.cells) + 1

    @property
    def height(self) -> int:
        return max(sq.row for sq in self.cells) + 1

    def railed(self, sq: Square, d: Direction) -> bool:
        return (sq, d) in self.rails

    def boundary_edges(self) -> list[tuple[Square, Direction]]:
        return [(sq, d) for sq in sorted(self.cells, key=row_major) for d in DIRECTIONS
                if sq.step(d) not in self.cells]

    def open_edges(self) -> list[tuple[Square, Direction]]:
        return [e for e in self.boundary_edges() if e not in self.rails]


@dataclass(frozen=True, eq=False)
class GameState:
    """Board plus piece placement and optional anchor.

    The side to move is derived from the anchor: anchor on a white king means
    black moves; anchor on a black king, or no anchor at all, means white.
    """

    board: Board
    pieces: Mapping[Square, Piece] = field(default_factory=dict)
    anchor: Square | None = None

    def __post_init__(self) -> None:
        pieces = {Square(*sq): Piece(*p) for sq, p in dict(self.pieces).items()}
        object.__setattr__(self, "pieces", MappingProxyType(pieces))
        for sq in pieces:
            if sq not in self.board.cells:
                raise ValueError(f"piece off board at {sq}")
        if self.anchor is not None:
            anchor = Square(*self.anchor)
            object.__setattr__(self, "anchor", anchor)
            held = pieces.get(anchor)
            if held is None or held.kind is not Kind.KING:
                raise ValueError(f"anchor at {anchor} is not on a king")

    def _key(self):
        return (self.board, frozenset(self.pieces.items()), self.anchor)

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, GameState):
            return NotImplemented
        return self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return f"GameState(\n{serialize_board(self)})"

    @property
    def to_move(self) -> Color:
        if self.anchor is None:
            return Color.WHITE
        return self.pieces[self.anchor].color.other

    def squares_of(self, color: Color, kind: Kind | None = None) -> list[Square]:
        return sorted((sq for sq, p in self.pieces.items()
                       if p.color is color and (kind is None or p.kind is kind)), key=row_major)

    def is_empty(self, sq: Square) -> bool:
        return sq in self.board.cells and sq not in self.pieces

    def replace(self, pieces: Mapping[Square, Piece] | None = None, anchor: Square | None | type = ...) -> "GameState":
        return GameState(self.board,
                         self.pieces if pieces is None else pieces,
                         self.anchor if anchor is ... else anchor)


# ---------------------------------------------------------------------------
# PFB v1

_GLYPHS = {
    WHITE_PAWN: "P", WHITE_KING: "K", BLACK_PAWN: "p", BLACK_KING: "k",
}
_ANCHORED = {Color.WHITE: "A", Color.BLACK: "a"}
_FROM_GLYPH = {
    "P": (WHITE_PAWN, False), "K": (WHITE_KING, False), "A": (WHITE_KING, True),
    "p": (BLACK_PAWN, False), "k": (BLACK_KING, False), "a": (BLACK_KING, True),
}


def glyph(state: GameState, sq: Square) -> str:
    if sq not in state.board.cells:
        return "#"
    piece = state.pieces.get(sq)
    if piece is None:
        return "."
    if sq == state.anchor:
        return _ANCHORED[piece.color]
    return _GLYPHS[piece]


def _header_int(line: str, key: str, lineno: int) -> int:
    parts = line.split()
    if len(parts) != 2 or parts[0] != key:
        raise FormatError(f"expected '{key} N'", lineno)
    try:
        value = int(parts[1])
    except ValueError:
        raise FormatError(f"bad integer {parts[1]!r}", lineno, len(key) + 2) from None
    if value < 1:
        raise FormatError(f"{key} must be positive", lineno)
    return value


def parse_board(text: str) -> GameState:
    """Parse PFB v1 text into a :class:`GameState`."""
    lines = text.replace("\r\n", "\n").split("\n")
    while lines and not lines[-1].strip():
        lines.pop()
    if len(lines) < 3:
        raise FormatError("truncated header", len(lines) + 1)
    if lines[0].strip() != "PFB v1":
        raise FormatError("expected 'PFB v1'", 1)
    rows = _header_int(lines[1].strip(), "rows", 2)
    cols = _header_int(lines[2].strip(), "cols", 3)
    if len(lines) < 3 + rows:
        raise FormatError(f"expected {rows} grid rows", len(lines) + 1)

    cells: set[Square] = set()
    pieces: dict[Square, Piece] = {}
    anchors: list[Square] = []
    for r in range(rows):
        lineno = 4 + r
        line = lines[3 + r]
        if len(line) != cols:
            raise FormatError(f"grid row has {len(line)} glyphs, expected {cols}", lineno)
        for c, ch in enumerate(line):
            sq = Square(c, r)
            if ch == "#":
                continue
            if ch == ".":
                cells.add(sq)
                continue
            if ch not in _FROM_GLYPH:
                raise FormatError(f"unknown glyph {ch!r}", lineno, c + 1)
            cells.add(sq)
            piece, anchored = _FROM_GLYPH[ch]
            pieces[sq] = piece
            if anchored:
                anchors.append(sq)
    if not cells:
        raise FormatError("board has no cells", 4)
    if len(anchors) > 1:
        raise FormatError(f"{len(anchors)} anchors; at most one allowed", 4)

    opened: set[tuple[Square, Direction]] = set()
    for i, line in enumerate(lines[3 + rows:], start=4 + rows):
        if not line.strip():
            continue
        parts = line.split()
        if len(parts) != 4 or parts[0] != "open":
            raise FormatError("expected 'open COL ROW DIR'", i)
        try:
            sq = Square(int(parts[1]), int(parts[2]))
        except ValueError:
            raise FormatError("bad coordinate", i) from None
        if parts[3] not in Direction.__members__:
            raise FormatError(f"bad direction {parts[3]!r}", i, len(line) - len(parts[3]) + 1)
        d = Direction[parts[3]]
        if sq not in cells:
            raise FormatError(f"open edge on non-board square {tuple(sq)}", i)
        if sq.step(d) in cells:
            raise FormatError(f"open edge {tuple(sq)} {d.name} is not a boundary edge", i)
        opened.add((sq, d))

    board = Board.from_cells(cells, open_edges=opened)
    return GameState(board, pieces, anchors[0] if anchors else None)


def serialize_board(state: GameState) -> str:
    """Canonical PFB v1 text; grid is the bounding box anchored at (0, 0)."""
    board = state.board
    out = ["PFB v1", f"rows {board.height}", f"cols {board.width}"]
    for r in range(board.height):
        out.append("".join(glyph(state, Square(c, r)) for c in range(board.width)))
    for sq, d in board.open_edges():
        out.append(f"open {sq.col} {sq.row} {d.name}")
    return "\n".join(out) + "\n"


# ---------------------------------------------------------------------------
# rendering

def render(state: GameState, fmt: str = "ascii", outline: Iterable = ()) -> str:
    if fmt == "ascii":
        text = render_ascii(state)
        boxes = [f"outline {rec.name} {' '.join(map(str, rec.box))}" for rec in outline]
        return text + "".join(line + "\n" for line in boxes)
    if fmt == "svg":
        return render_svg(state, outline)
    raise ValueError(f"unknown render format {fmt!r}")


def render_ascii(state: GameState) -> str:
    """Glyph grid with rails drawn as ``-``/``|`` on a doubled lattice."""
    board = state.board
    W, H = board.width, board.height
    grid = [[" "] * (2 * W + 1) for _ in range(2 * H + 1)]
    for sq in board.cells:
        x, y = 2 * sq.col + 1, 2 * sq.row + 1
        grid[y][x] = glyph(state, sq)
        for d in DIRECTIONS:
            if board.railed(sq, d):
                ex, ey = x + d.dc, y + d.dr
                grid[ey][ex] = "-" if d.dr else "|"
                if d.dr:
                    for cx in (ex - 1, ex + 1):
                        grid[ey][cx] = "+"
                else:
                    for cy in (ey - 1, ey + 1):
                        grid[cy][ex] = "+"
    return "\n".join("".join(row).rstrip() for row in grid) + "\n"


_CELL = 40


def render_svg(state: GameState, outline: Iterable = ()) -> str:
    board = state.board
    W, H = board.width, board.height
    pad = 10
    out = [f'<svg xmlns="http://www.w3.org/2000/svg" width="{W * _CELL + 2 * pad}" '
           f'height="{H * _CELL + 2 * pad}" viewBox="{-pad} {-pad} {W * _CELL + 2 * pad} {H * _CELL + 2 * pad}">']
    for sq in sorted(board.cells, key=row_major):
        out.append(f'<rect x="{sq.col * _CELL}" y="{sq.row * _CELL}" width="{_CELL}" height="{_CELL}" '
                   'fill="#f4ead5" stroke="#c8b89a" stroke-width="1"/>')
    for sq, piece in sorted(state.pieces.items(), key=lambda kv: row_major(kv[0])):
        cx, cy = sq.col * _CELL + _CELL / 2, sq.row * _CELL + _CELL / 2
        fill = "#ffffff" if piece.color is Color.WHITE else "#222222"
        if piece.kind is Kind.PAWN:
            out.append(f'<circle cx="{cx}" cy="{cy}" r="{_CELL * 0.35}" fill="{fill}" stroke="#000" stroke-width="1.5"/>')
        else:
            s = _CELL * 0.7
            out.append(f'<rect x="{cx - s / 2}" y="{cy - s / 2}" width="{s}" height="{s}" '
                       f'fill="{fill}" stroke="#000" stroke-width="1.5"/>')
        if sq == state.anchor:
            out.append(f'<circle cx="{cx}" cy="{cy}" r="{_CELL * 0.15}" fill="none" stroke="#d03030" stroke-width="3"/>')
    for sq, d in sorted(board.rails, key=lambda e: (row_major(e[0]), DIRECTIONS.index(e[1]))):
        x0, y0 = sq.col * _CELL, sq.row * _CELL
        x1, y1 = x0 + _CELL, y0 + _CELL
        seg = {Direction.N: (x0, y0, x1, y0), Direction.S: (x0, y1, x1, y1),
               Direction.W: (x0, y0, x0, y1), Direction.E: (x1, y0, x1, y1)}[d]
        out.append('<line x1="{}" y1="{}" x2="{}" y2="{}" stroke="#555" stroke-width="6" '
                   'stroke-linecap="square"/>'.format(*seg))
    for rec in outline:
        c0, r0, c1, r1 = rec.box
        out.append(f'<rect x="{c0 * _CELL}" y="{r0 * _CELL}" width="{(c1 - c0 + 1) * _CELL}" '
                   f'height="{(r1 - r0 + 1) * _CELL}" fill="none" stroke="#2060d0" '
                   'stroke-width="2" stroke-dasharray="6 3"/>')
        out.append(f'<text x="{c0 * _CELL + 3}" y="{r0 * _CELL + 12}" font-size="11" '
                   f'fill="#2060d0">{rec.name}</text>')
    out.append("</svg>")
    return "\n".join(out) + "\n"

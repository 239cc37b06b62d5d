"""Cell templates for the QBF reduction and standalone fixtures for checking them.

Every template lives in a sea of white pawns: only its empty squares and its
non-white-pawn pieces are listed.  With White's moves spent elsewhere, a white
king in such a sea can push in direction d iff the neighbouring square is
occupied and some square further along that line is empty; the push fills the
nearest such square and leaves one behind the king.  The templates below are
designed around that single fact.

Coordinates are (col, row) offsets, row 0 on top.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from ..core import (BLACK_KING, BLACK_PAWN, WHITE_KING, WHITE_PAWN, Board, Direction,
                    GameState, Piece, Square)

Box = tuple[int, int, int, int]  # col0, row0, col1, row1, inclusive


@dataclass(frozen=True)
class GadgetRecord:
    name: str
    box: Box
    meta: tuple[tuple[str, str], ...] = ()

    NAMES = ("move_wasting", "existential", "universal_left", "universal_right", "bridge",
             "clause", "reward", "connection", "overflow")

    def __post_init__(self) -> None:
        if self.name not in self.NAMES:
            raise ValueError(f"unknown gadget name {self.name!r}")
        c0, r0, c1, r1 = self.box
        if c0 > c1 or r0 > r1:
            raise ValueError(f"empty box {self.box}")

    def contains(self, sq: Square) -> bool:
        c0, r0, c1, r1 = self.box
        return c0 <= sq.col <= c1 and r0 <= sq.row <= r1

    def squares(self) -> list[Square]:
        c0, r0, c1, r1 = self.box
        return [Square(c, r) for r in range(r0, r1 + 1) for c in range(c0, c1 + 1)]

    def get(self, key: str, default: str | None = None) -> str | None:
        return dict(self.meta).get(key, default)


def boxes_overlap(a: Box, b: Box) -> bool:
    return not (a[2] < b[0] or b[2] < a[0] or a[3] < b[1] or b[3] < a[1])


@dataclass
class Canvas:
    """Sparse board contents: ``None`` marks an empty square, absent means white pawn."""

    cells: set[Square] = field(default_factory=set)
    marks: dict[Square, Piece | None] = field(default_factory=dict)
    open_edges: list[tuple[Square, Direction]] = field(default_factory=list)

    def add_rect(self, c0: int, r0: int, c1: int, r1: int) -> None:
        self.cells.update(Square(c, r) for c in range(c0, c1 + 1) for r in range(r0, r1 + 1))

    def hole(self, c: int, r: int) -> None:
        self.marks[Square(c, r)] = None

    def put(self, c: int, r: int, piece: Piece) -> None:
        self.marks[Square(c, r)] = piece

    def state(self, anchor: Square | None = None) -> GameState:
        missing = set(self.marks) - self.cells
        if missing:
            raise ValueError(f"marks outside the board: {sorted(missing)[:3]}")
        pieces = {}
        for sq in self.cells:
            piece = self.marks.get(sq, WHITE_PAWN)
            if piece is not None:
                pieces[sq] = piece
        board = Board.from_cells(self.cells, open_edges=self.open_edges)
        return GameState(board, pieces, anchor)


# ---------------------------------------------------------------------------
# variable gadgets

def core_holes(p: int) -> list[tuple[int, int]]:
    """Empty squares of the (p+5) x 5 core once the king stands on (0, 4).

    Pushing right first ejects p+1 pawns along row 4; pushing up first ejects
    p along row 3.  Either way the king climbs out through column p+3.
    """
    a, e, f = p + 1, p + 3, p + 4
    return [(0, 2), (a, 0), (a, 1), (e, 0), (e, 2), (f, 2), (a + 1, 3)]


CORE_KING = (0, 4)
LOWER_ROW, UPPER_ROW = 4, 3


def core_width(p: int) -> int:
    return p + 5


def exit_column(p: int, universal: bool) -> int:
    """Column (relative to the gadget box) the king leaves through."""
    return p + 3 + (1 if universal else 0)


def paint_existential(cv: Canvas, x: int, y: int, p: int) -> None:
    """Core with its entry column emptied; the king arrives by two pushes from below."""
    for c, r in core_holes(p):
        cv.hole(x + c, y + r)
    cv.hole(x, y + 4)
    cv.hole(x, y + 3)


def paint_universal_left(cv: Canvas, x: int, y: int, p: int) -> None:
    """Entry column then a full core; the first push inside is forced to the right."""
    for c, r in core_holes(p):
        cv.hole(x + 1 + c, y + r)
    cv.hole(x, y + 4)
    cv.hole(x, y + 3)


def paint_universal_right(cv: Canvas, x: int, y: int) -> None:
    """4 x 4 block, top row level with the left region's row 2.

    The black pawn sits in the lower literal row under an empty square.  It
    may step up before White's forced push, which moves one empty square from
    the lower row to the upper one.  The forced push then either shoves the
    pawn one square right, toward the empty square at the block's right end,
    or fills the square it left.  Either way the pawn is walled in for good.
    """
    cv.put(x + 1, y + 2, BLACK_PAWN)
    cv.hole(x + 1, y + 1)
    cv.hole(x + 3, y + 2)


# ---------------------------------------------------------------------------
# clause / bridge / reward

CLAUSE_WIDTH = 5
CLAUSE_HEIGHT = 4


def paint_clause(cv: Canvas, x: int, y: int) -> None:
    """Checked column x+2.  The king arrives on (x+2, y) heading right.

    It must push down once to reach row y+1, from where it can run right.
    Empty squares beside the column block every sideways push below row y+1.
    Row y's run-in squares and row y+1's run-out squares are painted by
    :func:`paint_run`.
    """
    mid = x + 2
    cv.hole(mid - 1, y + 1)
    for dr in (2, 3):
        cv.hole(mid - 1, y + dr)
        cv.hole(mid + 1, y + dr)


def paint_run(cv: Canvas, row: int, start: int, stop: int) -> None:
    """King on (start, row) pushes right until it stands on (stop, row)."""
    for c in range(start + 2, stop + 2):
        cv.hole(c, row)


def paint_climb(cv: Canvas, col: int, bottom: int, top: int) -> None:
    """King entering (col, bottom) from below pushes up until it stands on (col, top).

    Column col+1 is emptied alongside so no sideways push is available.
    """
    for r in range(top - 1, bottom + 1):
        cv.hole(col, r)
    for r in range(top + 1, bottom + 1):
        cv.hole(col + 1, r)


# ---------------------------------------------------------------------------
# move-wasting gadget

def paint_move_wasting(cv: Canvas, right: int, bottom: int) -> tuple[Square, list[Square]]:
    """Protrusion of four columns right of ``right`` in rows bottom-1, bottom.

    Returns the anchored black king's square and the active squares.
    """
    x = right + 3
    cells = [(x - 2, bottom), (x - 1, bottom - 1), (x - 1, bottom), (x, bottom - 1),
             (x, bottom), (x + 1, bottom)]
    cv.cells.update(Square(c, r) for c, r in cells)
    cv.put(x, bottom, BLACK_KING)
    cv.hole(x - 1, bottom - 1)
    cv.hole(x - 1, bottom)
    for c in (x - 1, x):
        cv.open_edges.append((Square(c, bottom - 1), Direction.N))
        cv.open_edges.append((Square(c, bottom), Direction.S))
    return Square(x, bottom), [Square(c, r) for c, r in cells]


# ---------------------------------------------------------------------------
# standalone fixtures (state, region boxes, named squares)

@dataclass(frozen=True)
class Fixture:
    state: GameState
    regions: tuple[Box, ...]
    points: dict


def core_fixture(p: int, lower: int | None = None, upper: int | None = None) -> Fixture:
    """The core with the king on its entry square and ``lower``/``upper`` holes outside."""
    lower = p + 1 if lower is None else lower
    upper = p if upper is None else upper
    ox, oy = 1, 3
    cv = Canvas()
    right = p + 6 + max(lower, upper) + 1
    cv.add_rect(0, 0, right + ox, 6 + oy)
    for c, r in core_holes(p):
        cv.hole(c + ox, r + oy)
    cv.put(ox, 4 + oy, WHITE_KING)
    cv.hole(ox, 5 + oy)
    e = p + 3
    cv.hole(e + ox, -1 + oy)
    cv.hole(e + ox, -2 + oy)
    for i in range(lower):
        cv.hole(p + 6 + i + ox, LOWER_ROW + oy)
    for i in range(upper):
        cv.hole(p + 6 + i + ox, UPPER_ROW + oy)
    box = (ox, oy, ox + p + 4, oy + 4)
    return Fixture(cv.state(), (box,), {"exit": Square(e + ox, oy - 1), "king": Square(ox, 4 + oy),
                                        "lower": LOWER_ROW + oy, "upper": UPPER_ROW + oy})


def universal_fixture(p: int) -> Fixture:
    ox, oy = 1, 3
    left_w = p + 6
    vx = left_w + 1
    ext = vx + 5
    cv = Canvas()
    cv.add_rect(0, 0, ext + p + 2 + ox, 6 + oy)
    for c, r in core_holes(p):
        cv.hole(1 + c + ox, r + oy)
    cv.put(ox, 4 + oy, WHITE_KING)
    cv.hole(ox, 5 + oy)
    e = exit_column(p, True)
    cv.hole(e + ox, -1 + oy)
    cv.hole(e + ox, -2 + oy)
    paint_universal_right(cv, vx + ox, 2 + oy)
    for i in range(p):
        cv.hole(ext + i + ox, LOWER_ROW + oy)
    for i in range(p - 1):
        cv.hole(ext + i + ox, UPPER_ROW + oy)
    left = (ox, oy, ox + left_w - 1, oy + 4)
    right = (vx + ox, 2 + oy, vx + 3 + ox, 5 + oy)
    return Fixture(cv.state(), (left, right), {
        "exit": Square(e + ox, oy - 1), "king": Square(ox, 4 + oy),
        "black": Square(vx + 1 + ox, 4 + oy), "black_up": Square(vx + 1 + ox, 3 + oy),
        "lower": LOWER_ROW + oy, "upper": UPPER_ROW + oy})


def clause_fixture(below: int) -> Fixture:
    """One clause with ``below`` empty squares in its checked column far below."""
    ox, oy = 3, 1
    cv = Canvas()
    cv.add_rect(0, 0, 8 + ox, 11)
    mid = 2
    cv.put(-2 + ox, oy, WHITE_KING)
    paint_run(cv, oy, -2 + ox, mid + ox)
    paint_clause(cv, ox, oy)
    paint_run(cv, oy + 1, mid + ox, 5 + ox)
    for i in range(below):
        cv.hole(mid + ox, 7 + i)
    box = (ox, oy, ox + CLAUSE_WIDTH - 1, oy + CLAUSE_HEIGHT - 1)
    return Fixture(cv.state(), (box,), {"exit": Square(5 + ox, oy + 1), "king": Square(-2 + ox, oy),
                                        "check": Square(mid + ox, oy)})


def move_wasting_fixture(width: int = 4) -> Fixture:
    """Three bottom rows ``width`` wide plus the protrusion; a white king sits top-left."""
    cv = Canvas()
    cv.add_rect(0, 0, width - 1, 2)
    bk, active = paint_move_wasting(cv, width - 1, 2)
    cv.put(0, 0, WHITE_KING)
    box = (width, 1, width + 3, 2)
    return Fixture(cv.state(anchor=bk), (box,), {"black_king": bk})


# ---------------------------------------------------------------------------
# expected traces

def _lines(regions, steps) -> str:
    out = ["# generated trace; coordinates are board squares"]
    out += [f"region {a} {b} {c} {d}" for a, b, c, d in regions]
    out += steps
    return "\n".join(out) + "\n"


def path_steps(start: Square, dirs: str, first_step: int = 1) -> list[str]:
    """``expect push`` lines for the king walking ``dirs`` (one push each) from ``start``."""
    out, sq = [], start
    for i, ch in enumerate(dirs):
        d = Direction[ch]
        out.append(f"step {first_step + i} expect push {sq.col} {sq.row} {ch}")
        sq = sq.step(d)
    return out


def core_path(p: int, branch: str) -> str:
    """Push directions through the core: the two exits and the three dead ends."""
    run = "E" * (p + 1)
    return {"right": run + "NNEENNN", "up": "N" + run + "NEENNN",
            "right_dead": run + "NNWS", "up_dead": "N" + run + "NN",
            "up_late_dead": "N" + run + "NEENNWS"}[branch]


def core_trace(p: int, branch: str) -> str:
    fx = core_fixture(p)
    k, ex = fx.points["king"], fx.points["exit"]
    dirs = core_path(p, branch)
    n = len(dirs)
    steps = ["step 1 expect pushes 2"] + path_steps(k, dirs)
    if branch in ("right", "up"):
        lower = p + 1 if branch == "right" else 0
        upper = p if branch == "up" else 0
        steps += [f"step {n} expect exit {ex.col} {ex.row}",
                  f"step {n} expect ejected {fx.points['lower']} {lower}",
                  f"step {n} expect ejected {fx.points['upper']} {upper}"]
    else:
        steps.append(f"step {n} expect stuck")
    return _lines(fx.regions, steps)


def universal_trace(p: int, black_up: bool) -> str:
    """Black picks, White's push into the core is forced, then the matching branch exits."""
    fx = universal_fixture(p)
    k, ex, b, up = (fx.points[x] for x in ("king", "exit", "black", "black_up"))
    steps = ["step 1 expect black_options 2"]
    if black_up:
        steps.append(f"step 1 black {b.col} {b.row} {up.col} {up.row}")
    steps += ["step 1 expect pushes 1", f"step 1 expect push {k.col} {k.row} E",
              "step 2 expect black_options 1", "step 2 expect pushes 2"]
    dirs = core_path(p, "right" if black_up else "up")
    steps += path_steps(k.step(Direction.E), dirs, first_step=2)
    n = len(dirs) + 1
    steps += [f"step {n} expect exit {ex.col} {ex.row}"]
    return _lines(fx.regions, steps)


def clause_trace(below: int) -> str:
    fx = clause_fixture(below)
    ex, chk = fx.points["exit"], fx.points["check"]
    if below == 0:
        return _lines(fx.regions, ["step 4 expect stuck"])
    steps = ["step 4 expect pushes 1", f"step 5 expect push {chk.col} {chk.row} S"]
    if below > 1:
        steps.append("step 6 expect pushes 2")
        steps.append(f"step 6 expect push {chk.col} {chk.row + 1} E")
    steps.append(f"step 8 expect exit {ex.col} {ex.row}")
    steps.append("step 8 expect stuck")
    return _lines(fx.regions, steps)


def move_wasting_trace(width: int = 4) -> str:
    fx = move_wasting_fixture(width)
    return _lines(fx.regions, ["expect move_wasting_cycle"])


def gadget_suite() -> dict[str, str]:
    """File name -> contents for every shipped gadget board and trace."""
    from ..core import serialize_board
    files = {}
    for p in (2, 3):
        files[f"core_p{p}.pfb"] = serialize_board(core_fixture(p).state)
        for branch in ("right", "up", "right_dead", "up_dead", "up_late_dead"):
            files[f"core_p{p}_{branch}.trace"] = core_trace(p, branch)
        files[f"universal_p{p}.pfb"] = serialize_board(universal_fixture(p).state)
        files[f"universal_p{p}_stay.trace"] = universal_trace(p, False)
        files[f"universal_p{p}_up.trace"] = universal_trace(p, True)
    for name, below in (("clause_blocked", 0), ("clause_open", 1)):
        files[f"{name}.pfb"] = serialize_board(clause_fixture(below).state)
        files[f"{name}.trace"] = clause_trace(below)
    files["move_wasting.pfb"] = serialize_board(move_wasting_fixture().state)
    files["move_wasting.trace"] = move_wasting_trace()
    return files

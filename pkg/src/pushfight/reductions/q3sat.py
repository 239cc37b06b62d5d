"""Quantified 3-SAT -> Push Fight (who wins, two moves per turn).

Layout, rows counted from the top:

* variable gadgets climb from the bottom-left, one per quantifier, each five
  rows above and p+3 (or p+4) columns right of the previous one;
* universal right regions sit in one column block to their right;
* a bridge carries the king from the last variable gadget up to row 2;
* clause gadgets step one row down and five columns right each;
* the reward column, with a black pawn under an open top edge, follows;
* every literal row gets its remaining empty squares in the overflow block;
* the move-wasting gadget occupies the bottom three rows and juts out right.

For variable x the upper literal row (gadget row 3) carries x and the lower
row (gadget row 4) carries not-x.  The core's right-first branch fills the
lower row, so it sets x true.
"""

from __future__ import annotations

from ..core import BLACK_PAWN, WHITE_KING, Direction, GameState, Square
from .gadgets import (CLAUSE_HEIGHT, Canvas, GadgetRecord, exit_column, paint_climb,
                      paint_clause, paint_existential, paint_move_wasting, paint_run,
                      paint_universal_left, paint_universal_right)
from .qbf import FORALL, QbfFormula

TOP_ROW = 2  # row of the bridge run and the first clause


def literal_rows(f: QbfFormula) -> dict[int, int]:
    """Board row carrying each literal, before the whole layout is known."""
    n, m = len(f.prefix), len(f.clauses)
    top = m + 6
    rows = {}
    for i, v in enumerate(f.variables):
        y = top + 5 * (n - 1 - i)
        rows[v] = y + 3
        rows[-v] = y + 4
    return rows


def row_budgets(f: QbfFormula) -> dict[int, int]:
    """Empty squares each literal row needs right of its gadget."""
    p = f.p
    out = {}
    for q, v in f.prefix:
        out[v] = p - 1 if q == FORALL else p
        out[-v] = p if q == FORALL else p + 1
    return out


def reduce_q3sat(f: QbfFormula) -> tuple[GameState, list[GadgetRecord]]:
    if not f.prefix:
        raise ValueError("formula has no variables")
    p = f.p
    n, m = len(f.prefix), len(f.clauses)
    cv = Canvas()
    records: list[GadgetRecord] = []

    top = m + 6
    ys = [top + 5 * (n - 1 - i) for i in range(n)]
    bottom = ys[0] + 9

    # variable gadgets
    xs, x = [], 0
    for i, (q, v) in enumerate(f.prefix):
        xs.append(x)
        universal = q == FORALL
        width = p + 5 + (1 if universal else 0)
        meta = [("var", str(v)), ("index", str(i)), ("p", str(p))]
        if i == 0:
            meta.append(("king", f"{x},{ys[0] + 6}"))
        if universal:
            paint_universal_left(cv, x, ys[i], p)
            records.append(GadgetRecord("universal_left", (x, ys[i], x + width - 1, ys[i] + 4), tuple(meta)))
        else:
            paint_existential(cv, x, ys[i], p)
            records.append(GadgetRecord("existential", (x, ys[i], x + width - 1, ys[i] + 4), tuple(meta)))
        x += exit_column(p, universal)
    cv.put(xs[0], ys[0] + 6, WHITE_KING)
    exit_col = x
    any_universal = any(q == FORALL for q, _ in f.prefix)

    vx = exit_col + 3
    for i, (q, v) in enumerate(f.prefix):
        if q == FORALL:
            paint_universal_right(cv, vx, ys[i] + 2)
            records.append(GadgetRecord("universal_right", (vx, ys[i] + 2, vx + 3, ys[i] + 5),
                                        (("var", str(v)), ("index", str(i)))))

    checked = [vx + 6 + 5 * j for j in range(m)]
    reward_col = checked[-1] + 4 if m else vx + 6

    # bridge
    first_stop = checked[0] if m else reward_col
    paint_climb(cv, exit_col, top - 1, TOP_ROW)
    paint_run(cv, TOP_ROW, exit_col, first_stop)
    if any_universal:
        for c in range(vx, vx + 4):
            cv.hole(c, TOP_ROW + 1)
    records.append(GadgetRecord("bridge", (exit_col, TOP_ROW - 1, first_stop - (3 if m else 2), top - 1)))

    # clauses
    for j, clause in enumerate(f.clauses):
        mid, row = checked[j], TOP_ROW + j
        paint_clause(cv, mid - 2, row)
        stop = checked[j + 1] if j + 1 < m else reward_col
        paint_run(cv, row + 1, mid, stop)
        records.append(GadgetRecord("clause", (mid - 2, row, mid + 2, row + CLAUSE_HEIGHT - 1),
                                    (("index", str(j)), ("column", str(mid)),
                                     ("literals", ",".join(map(str, clause))))))

    reward_row = TOP_ROW + m
    cv.put(reward_col, 0, BLACK_PAWN)
    cv.open_edges.append((Square(reward_col, 0), Direction.N))
    records.append(GadgetRecord("reward", (reward_col - 1, 0, reward_col + 1, reward_row),
                                (("column", str(reward_col)),)))

    # connection holes, then overflow up to each row's budget
    rows = literal_rows(f)
    used = {lit: 0 for lit in rows}
    for j, clause in enumerate(f.clauses):
        for lit in sorted(set(clause)):
            cv.hole(checked[j], rows[lit])
            used[lit] += 1
    if m:
        records.append(GadgetRecord("connection", (checked[0], top, checked[-1], ys[0] + 4)))
    over_col = reward_col + 3
    budgets = row_budgets(f)
    widest = 0
    for lit in sorted(rows, key=lambda l: rows[l]):
        extra = budgets[lit] - used[lit]
        if extra < 0:
            raise AssertionError(f"literal {lit} occurs more often than its row allows")
        for k in range(extra):
            cv.hole(over_col + k, rows[lit])
        widest = max(widest, extra)
    if widest:
        records.append(GadgetRecord("overflow", (over_col, top, over_col + widest - 1, ys[0] + 4)))

    right = max(reward_col + 1, over_col + widest - 1)
    cv.add_rect(0, 0, right, bottom)
    bk, active = paint_move_wasting(cv, right, bottom)
    a = (min(s.col for s in active), min(s.row for s in active),
         max(s.col for s in active), max(s.row for s in active))
    records.append(GadgetRecord("move_wasting", (0, bottom - 2, a[2], bottom),
                                (("black_king", f"{bk.col},{bk.row}"),
                                 ("active", ",".join(map(str, a))))))
    return cv.state(anchor=bk), records


# ---------------------------------------------------------------------------
# layout sidecar

def format_layout(records: list[GadgetRecord]) -> str:
    lines = []
    for r in records:
        meta = "".join(f" {k}={v}" for k, v in r.meta)
        lines.append(f"GADGET {r.name} {r.box[0]} {r.box[1]} {r.box[2]} {r.box[3]}{meta}")
    return "\n".join(lines) + "\n"


def parse_layout(text: str) -> list[GadgetRecord]:
    out = []
    for lineno, line in enumerate(text.splitlines(), start=1):
        parts = line.split()
        if not parts:
            continue
        if parts[0] != "GADGET" or len(parts) < 6:
            raise ValueError(f"line {lineno}: expected 'GADGET name x0 y0 x1 y1 [meta]'")
        try:
            box = tuple(int(t) for t in parts[2:6])
        except ValueError:
            raise ValueError(f"line {lineno}: non-integer box") from None
        meta = []
        for tok in parts[6:]:
            key, sep, val = tok.partition("=")
            if not sep:
                raise ValueError(f"line {lineno}: metadata {tok!r} is not key=value")
            meta.append((key, val))
        out.append(GadgetRecord(parts[1], box, tuple(meta)))
    return out

"""Structural checks on reduction outputs, shared by the reduction and acceptance tests."""

from pushfight.core import BLACK_KING, WHITE_KING, WHITE_PAWN, Color, Direction, Square
from pushfight.reductions.gadgets import boxes_overlap
from pushfight.reductions.q3sat import literal_rows, reduce_q3sat, row_budgets
from pushfight.reductions.qbf import EXISTS, FORALL, QbfFormula

A, E = FORALL, EXISTS

EXAMPLE = QbfFormula(((A, 1), (E, 2)), ((1, -2), (-1, 2)))

SMALL = [
    EXAMPLE,
    QbfFormula(((E, 1),), ((1,),)),
    QbfFormula(((E, 1),), ((1,), (-1,))),
    QbfFormula(((A, 1),), ((1,),)),
    QbfFormula(((A, 1),), ((1, -1),)),
    QbfFormula(((E, 1), (A, 2)), ((1, 2), (1, -2))),
    QbfFormula(((E, 1), (A, 2)), ((1, 2), (-1, -2))),
    QbfFormula(((A, 1), (E, 2)), ((1, 2), (-1, -2))),
    QbfFormula(((A, 1), (E, 2)), ((1, 2), (-1, 2), (-2,))),
    QbfFormula(((E, 1), (E, 2), (E, 3)), ((-1, 2), (3,), (-3, 1, 2))),
    QbfFormula(((A, 1), (E, 2), (A, 3)), ((2, -3, -1), (1, -3), (1, -2, 3))),
    QbfFormula(((E, 1),), ()),
    QbfFormula(((A, 1),), ()),
]


def black_region(records):
    return frozenset(sq for r in records if r.name == "universal_right" for sq in r.squares())


def check_structure(f):
    state, records = reduce_q3sat(f)
    board = state.board

    for i, a in enumerate(records):
        for b in records[i + 1:]:
            assert not boxes_overlap(a.box, b.box), (a, b)

    first = records[0]
    king = Square(*map(int, first.get("king").split(",")))
    assert state.pieces[king] == WHITE_KING
    assert state.pieces[king.step(Direction.N)] == WHITE_PAWN
    assert king.row > first.box[3]
    for sq in board.cells:
        special = state.pieces.get(sq) != WHITE_PAWN
        if special and sq != king:
            assert any(r.contains(sq) for r in records), sq

    mw = next(r for r in records if r.name == "move_wasting")
    assert state.pieces[state.anchor] == BLACK_KING and mw.contains(state.anchor)
    assert state.to_move is Color.WHITE
    reward = next(r for r in records if r.name == "reward")
    reward_sq = Square(int(reward.get("column")), 0)
    outside = [e for e in board.open_edges() if not mw.contains(e[0])]
    assert outside == [(reward_sq, Direction.N)]
    assert board.open_edges() != outside

    rows = literal_rows(f)
    budgets = row_budgets(f)
    occ = f.occurrences()
    holes = [sq for sq in board.cells if sq not in state.pieces]
    uright = [r for r in records if r.name == "universal_right"]
    connection = [r for r in records if r.name == "connection"]
    for r in records:
        if r.name not in ("existential", "universal_left"):
            continue
        v = int(r.get("var"))
        for lit in (v, -v):
            beyond = [h for h in holes if h.row == rows[lit] and h.col > r.box[2]]
            free = [h for h in beyond if not any(u.contains(h) for u in uright)]
            assert len(free) == budgets[lit], (lit, free)
            linked = [h for h in beyond if any(c.contains(h) for c in connection)]
            assert len(linked) == occ[lit]
            if r.name == "universal_left":
                assert len(beyond) == len(free) + 1
                assert budgets[lit] in (f.p - 1, f.p)
            else:
                assert len(beyond) == len(free) and budgets[lit] in (f.p, f.p + 1)
    return state, records

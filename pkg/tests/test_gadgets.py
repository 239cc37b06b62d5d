import pytest

from pushfight.core import Color, Direction, Square
from pushfight.game_solver import (TraceFormatError, check_gadget_trace, move_wasting_cycle,
                                   parse_trace, white_push_paths)
from pushfight.reductions.gadgets import (Canvas, GadgetRecord, boxes_overlap, clause_fixture,
                                          clause_trace, core_fixture, core_path, core_trace,
                                          move_wasting_fixture, move_wasting_trace,
                                          universal_fixture, universal_trace)
from pushfight.rules import apply_move, apply_push

BRANCHES = ["right", "up", "right_dead", "up_dead", "up_late_dead"]


def run(fx, text):
    return check_gadget_trace(fx.state, parse_trace(text))


@pytest.mark.parametrize("p", [1, 2, 3])
@pytest.mark.parametrize("branch", BRANCHES)
def test_core_traces(p, branch):
    report = run(core_fixture(p), core_trace(p, branch))
    assert report.ok, report.text()
    assert report.lines[-1] == "RESULT pass"


@pytest.mark.parametrize("p", [1, 2, 3])
def test_core_exits_are_exactly_the_two_branches(p):
    fx = core_fixture(p)
    lines = white_push_paths(fx.state, 40)
    exits = {path for path, king, _ in lines if king == fx.points["exit"]}
    assert exits == {core_path(p, "right"), core_path(p, "up")}
    assert all(stuck for _, _, stuck in lines)


@pytest.mark.parametrize("p", [2, 3])
def test_core_budgets_are_tight(p):
    exit_sq = core_fixture(p).points["exit"]
    short_lower = core_fixture(p, lower=p)
    assert {path for path, king, _ in white_push_paths(short_lower.state, 40)
            if king == exit_sq} == {core_path(p, "up")}
    short_upper = core_fixture(p, upper=p - 1)
    assert {path for path, king, _ in white_push_paths(short_upper.state, 40)
            if king == exit_sq} == {core_path(p, "right")}


@pytest.mark.parametrize("p", [1, 2, 3])
@pytest.mark.parametrize("black_up", [False, True])
def test_universal_traces(p, black_up):
    report = run(universal_fixture(p), universal_trace(p, black_up))
    assert report.ok, report.text()


@pytest.mark.parametrize("p", [2, 3])
@pytest.mark.parametrize("black_up", [False, True])
def test_universal_choice_fixes_the_branch(p, black_up):
    fx = universal_fixture(p)
    s = fx.state
    if black_up:
        s = apply_move(s, (fx.points["black"], fx.points["black_up"]))
    lines = white_push_paths(s, 40)
    exits = {path for path, king, _ in lines if king == fx.points["exit"]}
    assert exits == {"E" + core_path(p, "right" if black_up else "up")}


def test_universal_pawn_is_walled_in_after_the_forced_push():
    fx = universal_fixture(2)
    for black_up in (False, True):
        s = fx.state
        if black_up:
            s = apply_move(s, (fx.points["black"], fx.points["black_up"]))
        s, _ = apply_push(s, fx.points["king"], Direction.E)
        pawn, = s.squares_of(Color.BLACK)
        assert all(pawn.step(d) in s.pieces for d in Direction)


@pytest.mark.parametrize("below", [0, 1, 2, 3])
def test_clause_traces(below):
    report = run(clause_fixture(below), clause_trace(below))
    assert report.ok, report.text()


@pytest.mark.parametrize("below", [0, 1, 2, 3])
def test_clause_blocks_iff_checked_column_is_full(below):
    fx = clause_fixture(below)
    ends = {king for _, king, _ in white_push_paths(fx.state, 30)}
    assert (fx.points["exit"] in ends) == (below > 0)


@pytest.mark.parametrize("width", [3, 4, 6])
def test_move_wasting_cycle(width):
    fx = move_wasting_fixture(width)
    report = run(fx, move_wasting_trace(width))
    assert report.ok, report.text()
    assert "cycle restores the initial region" in report.lines


def test_move_wasting_cycle_needs_white_to_move():
    fx = move_wasting_fixture()
    region = parse_trace(move_wasting_trace()).squares()
    ok, lines = move_wasting_cycle(fx.state.replace(anchor=Square(0, 0)), region)
    assert not ok and lines[0].startswith("FAIL")


def test_failing_trace_names_step_expected_and_actual():
    fx = core_fixture(2)
    text = core_trace(2, "right").replace("expect exit 6 2", "expect exit 5 2")
    report = run(fx, text)
    assert not report.ok
    assert "FAIL step 10: expected exit 5 2, got king on 6 2" in report.lines
    assert report.lines[-1] == "RESULT fail"


def test_branch_point_without_choice_fails():
    fx = core_fixture(2)
    report = run(fx, "region 1 3 5 7\nstep 1 expect pushes 2\n")
    assert not report.ok
    assert any("branch point" in line for line in report.lines)


@pytest.mark.parametrize("text, message", [
    ("step 1 expect pushes 2\n", "no region"),
    ("region 0 0 3 3\nstep 1 expect push 9 9 N\n", "outside the region"),
    ("region 0 0 3 3\nstep 1 expect push 1 1 Q\n", "bad direction"),
    ("region 0 0 3 3\nstep 0 expect stuck\n", "steps start at 1"),
    ("region 0 0 3 3\nwobble\n", "unrecognized"),
    ("region 3 0 0 3\n", "empty region"),
    ("region 0 0 3 x\n", "bad number"),
])
def test_trace_format_errors(text, message):
    with pytest.raises(TraceFormatError, match=message):
        parse_trace(text)


def test_trace_header_states_the_model():
    report = run(clause_fixture(1), clause_trace(1))
    assert report.lines[0].startswith("# model: White's moves are suppressed")


def test_boxes_overlap_and_records():
    assert boxes_overlap((0, 0, 2, 2), (2, 2, 3, 3))
    assert not boxes_overlap((0, 0, 2, 2), (3, 0, 4, 2))
    rec = GadgetRecord("clause", (1, 1, 2, 3), (("index", "0"),))
    assert rec.contains(Square(2, 3)) and not rec.contains(Square(3, 3))
    assert len(rec.squares()) == 6 and rec.get("index") == "0"
    with pytest.raises(ValueError):
        GadgetRecord("teleporter", (0, 0, 1, 1))


def test_canvas_fills_unmarked_squares_with_white_pawns():
    cv = Canvas()
    cv.add_rect(0, 0, 2, 1)
    cv.hole(1, 1)
    s = cv.state()
    assert len(s.pieces) == 5 and Square(1, 1) not in s.pieces

"""Who-wins by retrograde analysis on tiny boards, and the gadget trace checker."""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterable, NamedTuple

from .core import Color, Direction, GameState, Kind, Square, row_major
from .mate import solve_c_move
from .rules import apply_move, apply_push, legal_pushes, push_segment

DEFAULT_STATE_CAP = 10 ** 7

WHITE_WINS, BLACK_WINS, DRAW = "white_wins", "black_wins", "draw"


class StateLimitExceeded(RuntimeError):
    """The game graph has more states than the caller allowed."""


class SolveResult(NamedTuple):
    value: str
    depth_to_outcome: int | None = None


def _winner_value(color: Color) -> str:
    return WHITE_WINS if color is Color.WHITE else BLACK_WINS


# ---------------------------------------------------------------------------
# turn graph

def move_configurations(state: GameState, mover: Color, budget: int = 2,
                        within: frozenset[Square] | None = None) -> list[GameState]:
    """Distinct placements after at most ``budget`` moves by ``mover`` (start included).

    With ``within`` set, moves must start, travel and end inside those squares.
    """
    seen = {frozenset(state.pieces.items()): state}
    layer = [state]
    for _ in range(budget):
        nxt = []
        for s in layer:
            for src in s.squares_of(mover):
                if within is not None and src not in within:
                    continue
                for dst in _reachable(s, src, within):
                    t = apply_move(s, (src, dst))
                    key = frozenset(t.pieces.items())
                    if key not in seen:
                        seen[key] = t
                        nxt.append(t)
        layer = nxt
    return list(seen.values())


def _reachable(state: GameState, src: Square, within: frozenset[Square] | None) -> list[Square]:
    cells, pieces = state.board.cells, state.pieces
    seen = {src}
    todo = [src]
    while todo:
        sq = todo.pop()
        for d in Direction:
            nxt = sq.step(d)
            if (nxt in cells and nxt not in pieces and nxt not in seen
                    and (within is None or nxt in within)):
                seen.add(nxt)
                todo.append(nxt)
    seen.discard(src)
    return sorted(seen, key=row_major)


class TurnOption(NamedTuple):
    """Either a successor state, or a finished game with ``winner``."""
    state: GameState | None
    winner: Color | None


def turn_options(state: GameState) -> set[TurnOption]:
    mover = state.to_move
    out: set[TurnOption] = set()
    for cfg in move_configurations(state, mover):
        for king, d in legal_pushes(cfg, mover):
            nxt, ejected = apply_push(cfg, king, d)
            if ejected is None:
                out.add(TurnOption(nxt, None))
            else:
                out.add(TurnOption(None, ejected[0].color.other))
    return out


# ---------------------------------------------------------------------------
# retrograde solver

@dataclass
class GameTable:
    values: dict[GameState, SolveResult] = field(default_factory=dict)
    options: dict[GameState, set[TurnOption]] = field(default_factory=dict)

    def __getitem__(self, state: GameState) -> SolveResult:
        return self.values[state]


def solve_table(roots: Iterable[GameState], state_cap: int = DEFAULT_STATE_CAP) -> GameTable:
    """Solve every state reachable from ``roots``.

    Wins and losses come from backward induction in order of increasing
    depth; whatever is left unresolved can be prolonged forever by both sides
    and is a draw.
    """
    options: dict[GameState, set[TurnOption]] = {}
    todo = deque()
    for r in roots:
        if r not in options:
            options[r] = set()
            todo.append(r)
    expanded = set()
    while todo:
        s = todo.popleft()
        opts = turn_options(s)
        options[s] = opts
        expanded.add(s)
        for o in opts:
            if o.state is not None and o.state not in options:
                if len(options) >= state_cap:
                    raise StateLimitExceeded(f"more than {state_cap} states")
                options[o.state] = set()
                todo.append(o.state)

    parents: dict[GameState, list[GameState]] = {s: [] for s in options}
    pending: dict[GameState, int] = {}
    values: dict[GameState, SolveResult] = {}
    queue: deque[GameState] = deque()
    seeds: list[GameState] = []
    for s, opts in options.items():
        mover = s.to_move
        succ = {o.state for o in opts if o.state is not None}
        for t in succ:
            parents[t].append(s)
        if not opts:
            values[s] = SolveResult(_winner_value(mover.other), 0)
            seeds.append(s)
            continue
        if any(o.winner is mover for o in opts):
            values[s] = SolveResult(_winner_value(mover), 1)
            seeds.append(s)
            continue
        pending[s] = len(succ)
        if not succ:  # every turn ejects one of the mover's own pieces
            values[s] = SolveResult(_winner_value(mover.other), 1)
            seeds.append(s)
    queue.extend(sorted(seeds, key=lambda s: values[s].depth_to_outcome))
    # states resolve in nondecreasing depth, so the first win found is shortest
    # and the last loss resolved is the longest resistance
    while queue:
        t = queue.popleft()
        tv = values[t]
        for s in parents[t]:
            if s in values:
                continue
            mover = s.to_move
            if tv.value == _winner_value(mover):
                values[s] = SolveResult(tv.value, tv.depth_to_outcome + 1)
                queue.append(s)
            else:
                pending[s] -= 1
                if pending[s] == 0:
                    depth = max(values[u].depth_to_outcome
                                for u in {o.state for o in options[s] if o.state is not None})
                    values[s] = SolveResult(_winner_value(mover.other), depth + 1)
                    queue.append(s)
    for s in options:
        values.setdefault(s, SolveResult(DRAW, None))
    return GameTable(values, options)


def who_wins(state: GameState, state_cap: int = DEFAULT_STATE_CAP) -> SolveResult:
    return solve_table([state], state_cap)[state]


# ---------------------------------------------------------------------------
# gadget traces

TRACE_HEADER = ("# model: White's moves are suppressed (spent in the move-wasting gadget); "
                "each White turn is a single push")


class TraceFormatError(ValueError):
    pass


@dataclass
class TraceAssertion:
    regions: list[tuple[int, int, int, int]] = field(default_factory=list)
    # step -> list of (kind, args)
    steps: dict[int, list[tuple[str, tuple]]] = field(default_factory=dict)
    cycle: bool = False

    def squares(self) -> frozenset[Square]:
        return frozenset(Square(c, r) for c0, r0, c1, r1 in self.regions
                         for c in range(c0, c1 + 1) for r in range(r0, r1 + 1))

    def near(self, sq: Square) -> bool:
        return any(c0 - 1 <= sq.col <= c1 + 1 and r0 - 1 <= sq.row <= r1 + 1
                   for c0, r0, c1, r1 in self.regions)

    @property
    def last_step(self) -> int:
        return max(self.steps, default=0)


def parse_trace(text: str) -> TraceAssertion:
    ta = TraceAssertion()
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        try:
            if parts[0] == "region" and len(parts) == 5:
                c0, r0, c1, r1 = map(int, parts[1:])
                if c0 > c1 or r0 > r1:
                    raise TraceFormatError(f"line {lineno}: empty region")
                ta.regions.append((c0, r0, c1, r1))
            elif parts == ["expect", "move_wasting_cycle"]:
                ta.cycle = True
            elif parts[0] == "step" and len(parts) >= 3:
                n = int(parts[1])
                if n < 1:
                    raise TraceFormatError(f"line {lineno}: steps start at 1")
                ta.steps.setdefault(n, []).append(_parse_expectation(parts[2:], lineno))
            else:
                raise TraceFormatError(f"line {lineno}: unrecognized {line!r}")
        except ValueError as exc:
            if isinstance(exc, TraceFormatError):
                raise
            raise TraceFormatError(f"line {lineno}: bad number") from None
    if not ta.regions:
        raise TraceFormatError("no region line")
    for n, items in ta.steps.items():
        for kind, args in items:
            if kind in ("push", "exit", "black"):
                for sq in args[:2] if kind == "black" else args[:1]:
                    if not ta.near(sq):
                        raise TraceFormatError(f"step {n}: {tuple(sq)} is outside the region")
    return ta


def _parse_expectation(parts: list[str], lineno: int) -> tuple[str, tuple]:
    if parts[0] == "black" and len(parts) == 5:
        a, b, c, d = map(int, parts[1:])
        return "black", (Square(a, b), Square(c, d))
    if parts[0] != "expect" or len(parts) < 2:
        raise TraceFormatError(f"line {lineno}: expected 'expect ...' or 'black ...'")
    kind, args = parts[1], parts[2:]
    if kind == "push" and len(args) == 3:
        try:
            d = Direction[args[2]]
        except KeyError:
            raise TraceFormatError(f"line {lineno}: bad direction {args[2]!r}") from None
        return "push", (Square(int(args[0]), int(args[1])), d)
    if kind == "exit" and len(args) == 2:
        return "exit", (Square(int(args[0]), int(args[1])),)
    if kind == "ejected" and len(args) == 2:
        return "ejected", (int(args[0]), int(args[1]))
    if kind in ("pushes", "black_options") and len(args) == 1:
        return kind, (int(args[0]),)
    if kind == "stuck" and not args:
        return "stuck", ()
    raise TraceFormatError(f"line {lineno}: unknown expectation {' '.join(parts)!r}")


@dataclass
class TraceReport:
    ok: bool
    lines: list[str]

    def text(self) -> str:
        return "\n".join(self.lines) + "\n"


def white_to_push(state: GameState) -> GameState:
    """Hand the turn to White as if Black had just pushed with its (first) king."""
    bk = state.squares_of(Color.BLACK, Kind.KING)
    return state.replace(anchor=bk[0] if bk else None)


def _white_king(state: GameState) -> Square:
    kings = state.squares_of(Color.WHITE, Kind.KING)
    if not kings:
        raise ValueError("no white king")
    return kings[0]


def _region_key(state: GameState, squares: frozenset[Square]):
    return frozenset((sq, p) for sq, p in state.pieces.items() if sq in squares)


def check_gadget_trace(state: GameState, ta: TraceAssertion) -> TraceReport:
    lines = [TRACE_HEADER]
    region = ta.squares()
    ok = True

    def fail(msg: str) -> None:
        nonlocal ok
        ok = False
        lines.append(f"FAIL {msg}")

    if ta.cycle:
        cyc_ok, cyc_lines = move_wasting_cycle(state, region)
        lines += cyc_lines
        if not cyc_ok:
            fail("move-wasting cycle")
    ejected: dict[int, int] = {}
    cur = white_to_push(state)
    for n in range(1, ta.last_step + 1):
        items = ta.steps.get(n, [])
        for kind, args in items:
            if kind == "black_options":
                black_turn = cur.replace(anchor=_white_king(cur))
                got = len({_region_key(s, region)
                           for s in move_configurations(black_turn, Color.BLACK, 2, region)})
                if got != args[0]:
                    fail(f"step {n}: expected {args[0]} black options, got {got}")
        for kind, args in items:
            if kind == "black":
                src, dst = args
                piece = cur.pieces.get(src)
                if piece is None or piece.color is not Color.BLACK or dst not in _reachable(cur, src, region):
                    fail(f"step {n}: black move {tuple(src)}->{tuple(dst)} is not legal in the region")
                    return TraceReport(False, lines)
                cur = apply_move(cur, (src, dst))
                lines.append(f"step {n} black {src.col} {src.row} -> {dst.col} {dst.row}")
        cur = white_to_push(cur)
        legal = sorted(legal_pushes(cur, Color.WHITE), key=lambda kd: (row_major(kd[0]), kd[1].value))
        for kind, args in items:
            if kind == "pushes" and len(legal) != args[0]:
                fail(f"step {n}: expected {args[0]} legal pushes, got {len(legal)}")
        chosen = [args for kind, args in items if kind == "push"]
        if chosen:
            pick = chosen[0]
            if pick not in legal:
                fail(f"step {n}: expected push {pick[0].col} {pick[0].row} {pick[1].name} to be legal, "
                     f"got {_fmt_pushes(legal)}")
                return TraceReport(False, lines)
        elif len(legal) == 1:
            pick = legal[0]
        elif not legal:
            fail(f"step {n}: expected a push, got stuck")
            return TraceReport(False, lines)
        else:
            fail(f"step {n}: branch point with {_fmt_pushes(legal)} and no push given")
            return TraceReport(False, lines)
        king, d = pick
        seg, _ = push_segment(cur, king, d)
        for sq in seg:
            if sq in region and sq.step(d) not in region and d in (Direction.E, Direction.W):
                ejected[sq.row] = ejected.get(sq.row, 0) + 1
        cur, lost = apply_push(cur, king, d)
        lines.append(f"step {n} push {king.col} {king.row} {d.name} (of {len(legal)})")
        if lost is not None:
            lines.append(f"step {n} ejected {lost[0].color.value} {lost[0].kind.value} from "
                         f"{lost[1].col} {lost[1].row}")
        king = king.step(d)
        for kind, args in items:
            if kind == "exit" and args[0] != king:
                fail(f"step {n}: expected exit {args[0].col} {args[0].row}, got king on {king.col} {king.row}")
            elif kind == "ejected" and ejected.get(args[0], 0) != args[1]:
                fail(f"step {n}: expected {args[1]} ejected along row {args[0]}, "
                     f"got {ejected.get(args[0], 0)}")
            elif kind == "stuck":
                after = legal_pushes(white_to_push(cur), Color.WHITE)
                if after:
                    fail(f"step {n}: expected stuck, got {_fmt_pushes(sorted(after, key=lambda kd: (row_major(kd[0]), kd[1].value)))}")
                else:
                    lines.append(f"step {n} stuck: White has no push and loses")
    lines.append("RESULT pass" if ok else "RESULT fail")
    return TraceReport(ok, lines)


def _fmt_pushes(pushes) -> str:
    return "[" + ", ".join(f"{k.col} {k.row} {d.name}" for k, d in pushes) + "]"


def white_push_paths(state: GameState, max_steps: int) -> list[tuple[str, Square, bool]]:
    """Every push-only White line up to ``max_steps``: (directions, final king, stuck)."""
    out = []
    stack = [(white_to_push(state), "")]
    while stack:
        cur, path = stack.pop()
        legal = sorted(legal_pushes(cur, Color.WHITE), key=lambda kd: (row_major(kd[0]), kd[1].value))
        if not legal or len(path) >= max_steps:
            king = _white_king(cur)
            out.append((path, king, not legal))
            continue
        for k, d in legal:
            nxt, _ = apply_push(cur, k, d)
            stack.append((white_to_push(nxt), path + d.name))
    return sorted(out)


# ---------------------------------------------------------------------------
# move-wasting cycle

def move_wasting_cycle(state: GameState, region: frozenset[Square]) -> tuple[bool, list[str]]:
    """Check the four-phase cycle from ``state`` (White to move, anchor on the black king).

    White phases: of all placements reachable by at most two White moves inside
    the region, exactly one leaves Black without a winning turn.  Black phases:
    over all Black move sequences inside the region, exactly one push result
    is possible.  After four phases the region is back where it started.
    """
    lines = []
    wk = _white_king(state)
    if state.to_move is not Color.WHITE:
        return False, ["FAIL cycle must start with White to move"]
    start = _region_key(state, region)
    cur = state
    for phase in range(1, 5):
        if phase % 2:
            safe = []
            configs = move_configurations(cur, Color.WHITE, 2, region)
            for cfg in configs:
                after = cfg.replace(anchor=wk)
                if not solve_c_move(after, 2).winnable:
                    safe.append(after)
            lines.append(f"phase {phase} white: {len(configs)} placements, {len(safe)} safe")
            if len(safe) != 1:
                return False, lines + [f"FAIL phase {phase}: expected exactly 1 safe placement, got {len(safe)}"]
            cur = safe[0]
        else:
            results = {}
            for cfg in move_configurations(cur, Color.BLACK, 2, region):
                for k, d in legal_pushes(cfg, Color.BLACK):
                    nxt, lost = apply_push(cfg, k, d)
                    results[(_region_key(nxt, region), nxt.anchor, lost is not None)] = (nxt, k, d)
            lines.append(f"phase {phase} black: {len(results)} distinct push results")
            if len(results) != 1:
                return False, lines + [f"FAIL phase {phase}: expected exactly 1 push result, got {len(results)}"]
            (key, (cur, k, d)), = results.items()
            if key[2]:
                return False, lines + [f"FAIL phase {phase}: black push ejects a piece"]
            lines.append(f"phase {phase} black pushes {k.col} {k.row} {d.name}")
    back = _region_key(cur, region) == start
    lines.append("cycle restores the initial region" if back else "FAIL region not restored")
    return back, lines

"""Equivalence classes of single-king configurations.

Fix the opponent's pieces and one pushing king; every other piece of the mover
acts as a pawn.  Squares not holding the king or an opponent piece form the
pawnspace.  Two configurations are equivalent when the king sits on the same
square and every pawnspace component holds the same number of pawns; a class
is named by a :class:`ClassDescriptor`.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from typing import Iterator, NamedTuple

from .core import DIRECTIONS, Color, Direction, GameState, Kind, Square, row_major


class Config(NamedTuple):
    king: Square
    pawns: frozenset[Square]


class ClassDescriptor(NamedTuple):
    king: Square
    signature: tuple[tuple[Square, int], ...]

    def counts(self) -> dict[Square, int]:
        return dict(self.signature)


class Pawnspace(NamedTuple):
    components: tuple[frozenset[Square], ...]
    ids: tuple[Square, ...]
    owner: dict[Square, int]

    def index_of(self, sq: Square) -> int:
        return self.owner[sq]


class DescriptorMismatch(ValueError):
    pass


@dataclass(frozen=True, eq=False)
class SingleKingView:
    """A game state seen from one pushing king of the side to move."""

    base: GameState
    pushing_king: Square
    mover: Color = field(init=False)
    demoted: frozenset[Square] = field(init=False)
    _cache: dict = field(init=False, repr=False, compare=False)

    def __post_init__(self) -> None:
        mover = self.base.to_move
        piece = self.base.pieces.get(self.pushing_king)
        if piece is None or piece.color is not mover or piece.kind is not Kind.KING:
            raise ValueError(f"no {mover.value} king at {self.pushing_king}")
        object.__setattr__(self, "mover", mover)
        object.__setattr__(self, "demoted", frozenset(
            sq for sq in self.base.squares_of(mover, Kind.KING) if sq != self.pushing_king))
        object.__setattr__(self, "_cache", {})

    @property
    def opponent(self) -> frozenset[Square]:
        opp = self._cache.get("opp")
        if opp is None:
            opp = frozenset(self.base.squares_of(self.mover.other))
            self._cache["opp"] = opp
        return opp

    @property
    def cells(self) -> frozenset[Square]:
        return self.base.board.cells

    def initial_config(self) -> Config:
        pawns = frozenset(sq for sq in self.base.squares_of(self.mover) if sq != self.pushing_king)
        return Config(self.pushing_king, pawns)

    @property
    def pawn_total(self) -> int:
        return len(self.base.squares_of(self.mover)) - 1

    def state_of(self, config: Config) -> GameState:
        """Concrete state for ``config``; demoted kings come back as kings.

        Only the multiset of piece kinds matters to the rules, so demoted kings
        are reassigned to the first pawn squares in row-major order.
        """
        pieces = {sq: p for sq, p in self.base.pieces.items() if p.color is not self.mover}
        king_piece = self.base.pieces[self.pushing_king]
        pawn_piece = king_piece._replace(kind=Kind.PAWN)
        pieces[config.king] = king_piece
        n_demoted = len(self.demoted)
        for i, sq in enumerate(sorted(config.pawns, key=row_major)):
            pieces[sq] = king_piece if i < n_demoted else pawn_piece
        return GameState(self.base.board, pieces, self.base.anchor)


def _components(region: frozenset[Square] | set[Square]) -> list[frozenset[Square]]:
    left = set(region)
    comps = []
    for start in sorted(region, key=row_major):
        if start not in left:
            continue
        left.discard(start)
        comp = {start}
        todo = [start]
        while todo:
            sq = todo.pop()
            for d in DIRECTIONS:
                nxt = sq.step(d)
                if nxt in left:
                    left.discard(nxt)
                    comp.add(nxt)
                    todo.append(nxt)
        comps.append(frozenset(comp))
    return comps


def pawnspace_of(view: SingleKingView, king_at: Square) -> Pawnspace:
    cache = view._cache.setdefault("ps", {})
    ps = cache.get(king_at)
    if ps is None:
        region = view.cells - view.opponent - {king_at}
        comps = tuple(_components(region))
        ids = tuple(min(c, key=row_major) for c in comps)
        owner = {sq: i for i, c in enumerate(comps) for sq in c}
        ps = Pawnspace(comps, ids, owner)
        cache[king_at] = ps
    return ps


def descriptor_of(view: SingleKingView, config: Config) -> ClassDescriptor:
    ps = pawnspace_of(view, config.king)
    counts = [0] * len(ps.components)
    for sq in config.pawns:
        counts[ps.owner[sq]] += 1
    return ClassDescriptor(config.king, tuple(zip(ps.ids, counts)))


def weak_compositions(total: int, caps: list[int]) -> Iterator[tuple[int, ...]]:
    """Ordered splits of ``total`` into ``len(caps)`` parts with ``part_i <= caps[i]``, lexicographic."""
    if not caps:
        if total == 0:
            yield ()
        return
    rest_cap = sum(caps[1:])
    for first in range(max(0, total - rest_cap), min(total, caps[0]) + 1):
        for tail in weak_compositions(total - first, caps[1:]):
            yield (first,) + tail


class NeighborEdge(NamedTuple):
    direction: Direction
    target: ClassDescriptor
    # pawns placed in each piece of the vacated component, keyed by the piece's min square
    split: tuple[tuple[frozenset[Square], int], ...]


def neighbor_edges(view: SingleKingView, c: ClassDescriptor) -> Iterator[NeighborEdge]:
    """Unit king steps out of class ``c`` with the pawn split that realizes each."""
    king = c.king
    ps = pawnspace_of(view, king)
    counts = c.counts()
    for d in DIRECTIONS:
        t = king.step(d)
        if t not in view.cells or t in view.opponent:
            continue
        xi = ps.owner[t]
        comp = ps.components[xi]
        total = counts[ps.ids[xi]]
        if total >= len(comp):
            continue
        new_ps = pawnspace_of(view, t)
        fixed = [0] * len(new_ps.components)
        for i, cid in enumerate(ps.ids):
            if i != xi:
                fixed[new_ps.owner[cid]] += counts[cid]
        parts = _components(comp - {t})
        homes = [new_ps.owner[min(p, key=row_major)] for p in parts]
        for comp_split in weak_compositions(total, [len(p) for p in parts]):
            new_counts = list(fixed)
            for home, a in zip(homes, comp_split):
                new_counts[home] += a
            target = ClassDescriptor(t, tuple(zip(new_ps.ids, new_counts)))
            yield NeighborEdge(d, target, tuple(zip(parts, comp_split)))


def class_neighbors(view: SingleKingView, c: ClassDescriptor) -> set[ClassDescriptor]:
    return {e.target for e in neighbor_edges(view, c)}


def ray(view: SingleKingView, king: Square, d: Direction) -> list[Square]:
    out = []
    sq = king.step(d)
    while sq in view.cells:
        out.append(sq)
        sq = sq.step(d)
    return out


def winning_direction_ok(view: SingleKingView, c: ClassDescriptor, d: Direction) -> bool:
    line = ray(view, c.king, d)
    if not line:
        return False
    far = line[-1]
    if far not in view.opponent or view.base.board.railed(far, d):
        return False
    if view.base.anchor is not None and view.base.anchor in line:
        return False
    ps = pawnspace_of(view, c.king)
    need = [0] * len(ps.components)
    for sq in line:
        if sq not in view.opponent:
            need[ps.owner[sq]] += 1
    counts = c.counts()
    return all(need[i] <= counts[cid] for i, cid in enumerate(ps.ids))


def is_winning_class(view: SingleKingView, c: ClassDescriptor) -> Direction | None:
    for d in DIRECTIONS:
        if winning_direction_ok(view, c, d):
            return d
    return None


# ---------------------------------------------------------------------------
# moving within a class

def _placement(region: frozenset[Square], count: int, must: list[Square],
               prefer: frozenset[Square], avoid: frozenset[Square] = frozenset()) -> set[Square]:
    """``count`` squares of ``region``: all of ``must`` first, then ``prefer``, then row-major."""
    chosen = list(dict.fromkeys(must))
    rest = sorted(region - set(chosen) - avoid, key=lambda sq: (sq not in prefer, row_major(sq)))
    chosen.extend(rest[:count - len(chosen)])
    if len(chosen) != count:
        raise ValueError("cannot place pawns")
    return set(chosen)


def _shortest_path(region: frozenset[Square], src: Square, dst: Square) -> list[Square]:
    prev = {src: None}
    todo = deque([src])
    while todo:
        sq = todo.popleft()
        if sq == dst:
            break
        for d in DIRECTIONS:
            nxt = sq.step(d)
            if nxt in region and nxt not in prev:
                prev[nxt] = sq
                todo.append(nxt)
    path = [dst]
    while path[-1] != src:
        path.append(prev[path[-1]])
    return path[::-1]


def realize_in_class(view: SingleKingView, from_config: Config, to_config: Config) -> list[tuple[Square, Square]]:
    """Pawn moves turning ``from_config`` into ``to_config`` without leaving the class.

    Each round fixes the row-major-least misplaced pawn by shifting the chain
    of pawns along a shortest path to the nearest (row-major-least) missing
    pawn square; every pawn moves at most once per round.
    """
    if descriptor_of(view, from_config) != descriptor_of(view, to_config):
        raise DescriptorMismatch("configurations are in different classes")
    ps = pawnspace_of(view, from_config.king)
    pawns = set(from_config.pawns)
    goal = to_config.pawns
    moves: list[tuple[Square, Square]] = []
    while True:
        misplaced = sorted(pawns - goal, key=row_major)
        if not misplaced:
            return moves
        s = misplaced[0]
        region = ps.components[ps.owner[s]]
        t = min((sq for sq in region if sq in goal and sq not in pawns), key=row_major)
        path = _shortest_path(region, s, t)
        chain = [sq for sq in path if sq in pawns]
        dest = t
        for sq in reversed(chain):
            moves.append((sq, dest))
            pawns.discard(sq)
            pawns.add(dest)
            dest = sq


def format_descriptor(c: ClassDescriptor) -> str:
    sig = "; ".join(f"sig ({sq.col},{sq.row})={n}" for sq, n in c.signature)
    head = f"king {c.king.col} {c.king.row}"
    return f"{head}; {sig}" if sig else head

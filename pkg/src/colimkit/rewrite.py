"""Bounded equality search for pasting composites of squares.

States are composite trees with edges in canonical form.  A move rewrites
one node of the tree by a connection law, an identity law, functoriality of
the degenerate squares, or the interchange law.  The search runs in two
phases: first only the simplifying moves (and interchange) from both ends,
always expanding the state with the fewest cells, looking for a common
simplification; then breadth-first over every move under a state budget.
"""

from __future__ import annotations

import heapq
import itertools
from dataclasses import dataclass, field
from typing import Iterator, Optional

from .category import Path, compose_path
from .double import (
    DEFAULT_WORD_DEPTH,
    Composite,
    EdgeAlgebra,
    GridExpr,
    Square,
    Thin,
    _algebra,
    boundaries_equal,
    eps1,
    eps2,
    gamma,
    gamma_prime,
    grid_tree,
    h_chain,
    is_h_identity,
    is_v_identity,
    recognize_thin,
    v_chain,
)
from .errors import ColimkitError
from .outcome import Verdict

DEFAULT_DEPTH = 12
DEFAULT_MAX_STATES = 5_000

Move = tuple[str, Square]


@dataclass
class SearchResult:
    verdict: Verdict
    depth: Optional[int] = None
    moves: list[str] = field(default_factory=list)
    states: int = 0
    phase: Optional[str] = None

    def as_dict(self) -> dict:
        return {
            "verdict": self.verdict.value,
            "depth": self.depth,
            "moves": list(self.moves),
            "states_explored": self.states,
            "phase": self.phase,
        }


# -- canonical trees ------------------------------------------------------------


class _Trees:
    """Tree constructors that keep every leaf edge in canonical form."""

    def __init__(self, E: EdgeAlgebra):
        self.E = E

    def path(self, p: Path) -> Path:
        return self.E.canon(p)

    def leaf(self, sq: Square) -> Square:
        c = self.E.canon
        top, bottom, left, right = c(sq.top), c(sq.bottom), c(sq.left), c(sq.right)
        if isinstance(sq.kind, Thin):
            return recognize_thin(top, bottom, left, right)
        return Square(sq.kind, top, bottom, left, right)

    def canon(self, sq: Square) -> Square:
        if isinstance(sq.kind, Composite):
            parts = [self.canon(p) for p in sq.kind.parts]
            return self.node(sq.kind.op, parts)
        return self.leaf(sq)

    def node(self, op: str, parts: list[Square]) -> Square:
        build = h_chain if op == "h" else v_chain
        return build(parts, self.E)

    def thin(self, name: str, p: Path) -> Square:
        p = self.E.canon(p)
        return {"eps1": eps1, "eps2": eps2, "gamma": gamma, "gammap": gamma_prime}[name](p)


def _edge(sq: Square) -> Optional[Path]:
    k = sq.kind
    return k.edge if isinstance(k, Thin) else None


def _is(sq: Square, construction: str) -> bool:
    return sq.construction == construction


def _pair_parts(sq: Square, op: str) -> Optional[tuple[Square, Square]]:
    k = sq.kind
    if isinstance(k, Composite) and k.op == op and len(k.parts) == 2:
        return k.parts
    return None


def _match_block(a: Square, b: Square, c: Square, d: Square, T: _Trees) -> Iterator[Move]:
    """2x2 block [[a, b], [c, d]] against the connection laws for composites."""
    if _is(a, "gammap") and _is(b, "eps2") and _is(c, "eps1") and _is(d, "gammap"):
        x = _edge(a)
        if _edge(b) == x and _edge(c) == x and x.tgt == _edge(d).src:
            yield "rule-iii", T.thin("gammap", compose_path(x, _edge(d)))
    if _is(a, "gamma") and _is(b, "eps1") and _is(c, "eps2") and _is(d, "gamma"):
        x, y = _edge(a), _edge(d)
        if _edge(b) == y and _edge(c) == y and x.tgt == y.src:
            yield "rule-iv", T.thin("gamma", compose_path(x, y))


# -- move generation -------------------------------------------------------------------


class MoveSet:
    def __init__(self, T: _Trees, pres, expand: bool):
        self.T = T
        self.pres = pres
        self.expand = expand

    def _sub(self, p: Path, i: int, j: int) -> Path:
        """Sub-path of p from generator i to j (exclusive), objects via the presentation."""
        gens = p.gens[i:j]
        amap = self.pres.arrow_map if self.pres is not None else None
        if amap is None:
            raise RuntimeError("splitting a path needs a presentation")
        if not gens:
            obj = p.src if i == 0 else amap[p.gens[i - 1]].tgt
            return Path(obj, obj, ())
        return Path(amap[gens[0]].src, amap[gens[-1]].tgt, gens)

    def neighbors(self, sq: Square) -> Iterator[Move]:
        yield from self._local(sq)
        k = sq.kind
        if isinstance(k, Composite):
            for i, part in enumerate(k.parts):
                for name, new in self.neighbors(part):
                    parts = list(k.parts)
                    parts[i] = new
                    try:
                        yield name, self.T.node(k.op, parts)
                    except ColimkitError:
                        continue

    def _local(self, sq: Square) -> Iterator[Move]:
        k = sq.kind
        T = self.T
        if isinstance(k, Composite):
            parts = list(k.parts)
            n = len(parts)
            horiz = k.op == "h"
            is_ident = is_h_identity if horiz else is_v_identity
            for i, p in enumerate(parts):
                if is_ident(p):
                    name = "delete-" + ("column" if horiz else "row") + "-identity"
                    try:
                        yield name, T.node(k.op, parts[:i] + parts[i + 1 :])
                    except ColimkitError:
                        continue
            for i in range(n - 1):
                x, y = parts[i], parts[i + 1]
                for name, repl in self._pair(x, y, horiz):
                    try:
                        yield name, T.node(k.op, parts[:i] + [repl] + parts[i + 2 :])
                    except ColimkitError:
                        continue
            if self.expand:
                if horiz:
                    edges = [p.left for p in parts] + [parts[-1].right]
                else:
                    edges = [p.top for p in parts] + [parts[-1].bottom]
                for i, e in enumerate(edges):
                    ins = T.thin("eps2" if horiz else "eps1", e)
                    if ins.construction == "id" and not e.is_identity:
                        continue
                    name = "insert-" + ("column" if horiz else "row") + "-identity"
                    yield name, T.node(k.op, parts[:i] + [ins] + parts[i:])
            return
        if self.expand and isinstance(k, Thin):
            yield from self._expand_leaf(sq)

    def _pair(self, x: Square, y: Square, horiz: bool) -> Iterator[Move]:
        T = self.T
        if horiz:
            if _is(x, "gammap") and _is(y, "gamma") and _edge(x) == _edge(y):
                yield "rule-i", T.thin("eps1", _edge(x))
            if _is(x, "eps1") and _is(y, "eps1"):
                yield "merge-eps1", T.thin("eps1", compose_path(_edge(x), _edge(y)))
            cx, cy = _pair_parts(x, "v"), _pair_parts(y, "v")
            if cx and cy:
                yield from _match_block(cx[0], cy[0], cx[1], cy[1], T)
        else:
            if _is(x, "gammap") and _is(y, "gamma") and _edge(x) == _edge(y):
                yield "rule-ii", T.thin("eps2", _edge(x))
            if _is(x, "eps2") and _is(y, "eps2"):
                yield "merge-eps2", T.thin("eps2", compose_path(_edge(x), _edge(y)))
            rx, ry = _pair_parts(x, "h"), _pair_parts(y, "h")
            if rx and ry:
                yield from _match_block(rx[0], rx[1], ry[0], ry[1], T)
        # interchange: two stacked columns <-> two rows of pairs (and transposed)
        inner = "v" if horiz else "h"
        outer = "h" if horiz else "v"
        kx, ky = x.kind, y.kind
        if (
            isinstance(kx, Composite)
            and isinstance(ky, Composite)
            and kx.op == inner
            and ky.op == inner
            and len(kx.parts) == len(ky.parts)
        ):
            try:
                pieces = [T.node(outer, [a, b]) for a, b in zip(kx.parts, ky.parts)]
                yield "interchange", T.node(inner, pieces)
            except ColimkitError:
                pass

    def _expand_leaf(self, sq: Square) -> Iterator[Move]:
        T = self.T
        c = sq.construction
        e = _edge(sq)
        if c in ("eps1", "eps2"):
            op = "h" if c == "eps1" else "v"
            yield ("rule-i-reverse" if c == "eps1" else "rule-ii-reverse",
                   T.node(op, [T.thin("gammap", e), T.thin("gamma", e)]))
        if e is None or len(e.gens) < 2 or self.pres is None:
            return
        for i in range(1, len(e.gens)):
            a, b = self._sub(e, 0, i), self._sub(e, i, len(e.gens))
            if c == "gammap":
                top = T.node("h", [T.thin("gammap", a), T.thin("eps2", a)])
                bot = T.node("h", [T.thin("eps1", a), T.thin("gammap", b)])
                yield "rule-iii-reverse", T.node("v", [top, bot])
            elif c == "gamma":
                top = T.node("h", [T.thin("gamma", a), T.thin("eps1", b)])
                bot = T.node("h", [T.thin("eps2", b), T.thin("gamma", b)])
                yield "rule-iv-reverse", T.node("v", [top, bot])
            elif c == "eps1":
                yield "split-eps1", T.node("h", [T.thin("eps1", a), T.thin("eps1", b)])
            elif c == "eps2":
                yield "split-eps2", T.node("v", [T.thin("eps2", a), T.thin("eps2", b)])


# -- search --------------------------------------------------------------------------------


def _meet_search(
    start: Square,
    goal: Square,
    moves: MoveSet,
    depth_limit: int,
    max_states: int,
) -> tuple[Optional[list[str]], int]:
    """Bidirectional breadth-first search; returns the move list of a connection."""
    if start == goal:
        return [], 1
    parents = [{start: None}, {goal: None}]
    frontiers = [[start], [goal]]
    depths = [0, 0]
    explored = 2
    while depths[0] + depths[1] < depth_limit and (frontiers[0] or frontiers[1]):
        live = [i for i in (0, 1) if frontiers[i]]
        side = min(live, key=lambda i: len(frontiers[i]))
        nxt = []
        mine, other = parents[side], parents[1 - side]
        for state in frontiers[side]:
            for name, new in moves.neighbors(state):
                if new in mine:
                    continue
                mine[new] = (state, name)
                explored += 1
                if new in other:
                    return _trace(new, parents, side), explored
                nxt.append(new)
                if explored > max_states:
                    return None, explored
        frontiers[side] = nxt
        depths[side] += 1
    return None, explored


def cell_count(sq: Square) -> int:
    k = sq.kind
    if isinstance(k, Composite):
        return sum(cell_count(p) for p in k.parts)
    return 1


def _smallest_first_meet(
    start: Square,
    goal: Square,
    moves: MoveSet,
    depth_limit: int,
    max_states: int,
) -> tuple[Optional[list[str]], int]:
    """Bidirectional best-first search ordered by (cells, depth).

    A connection counts only if its total length is within ``depth_limit``.
    """
    if start == goal:
        return [], 1
    tick = itertools.count()
    parents = [{start: None}, {goal: None}]
    depth = [{start: 0}, {goal: 0}]
    heaps = [[(cell_count(start), 0, next(tick), start)], [(cell_count(goal), 0, next(tick), goal)]]
    explored = 2
    while heaps[0] or heaps[1]:
        live = [i for i in (0, 1) if heaps[i]]
        side = min(live, key=lambda i: heaps[i][0][:2])
        _, d, _, state = heapq.heappop(heaps[side])
        if d >= depth_limit:
            continue
        mine, other = parents[side], parents[1 - side]
        for name, new in moves.neighbors(state):
            if new in mine:
                continue
            mine[new] = (state, name)
            depth[side][new] = d + 1
            explored += 1
            if new in other and d + 1 + depth[1 - side][new] <= depth_limit:
                return _trace(new, parents, side), explored
            heapq.heappush(heaps[side], (cell_count(new), d + 1, next(tick), new))
            if explored > max_states:
                return None, explored
    return None, explored


def _trace(meet: Square, parents, side: int) -> list[str]:
    def walk(table, node):
        out = []
        while table[node] is not None:
            node, name = table[node]
            out.append(name)
        return out

    first = walk(parents[0], meet)[::-1]
    second = [f"{m} (reversed)" for m in walk(parents[1], meet)]
    return first + second


def generator_content(sq: Square) -> list[Square]:
    k = sq.kind
    if isinstance(k, Composite):
        return sorted((g for p in k.parts for g in generator_content(p)), key=repr)
    return [] if isinstance(k, Thin) else [sq]


def squares_equal(
    x: Square,
    y: Square,
    depth_limit: int = DEFAULT_DEPTH,
    pres=None,
    word_depth: int = DEFAULT_WORD_DEPTH,
    max_states: int = DEFAULT_MAX_STATES,
    thin_shortcut: bool = True,
) -> SearchResult:
    E = _algebra(pres, word_depth)
    b = boundaries_equal(x.boundary, y.boundary, E)
    if b is Verdict.NOT_EQUAL_WITHIN_BOUND:
        return SearchResult(Verdict.BOUNDARY_MISMATCH, phase="boundary")
    if thin_shortcut and b is Verdict.EQUAL and x.is_thin and y.is_thin:
        # thin composites are determined by their shell
        return SearchResult(Verdict.EQUAL, depth=0, moves=["thin-boundary"], phase="thin")
    T = _Trees(E)
    sx, sy = T.canon(x), T.canon(y)
    if sx == sy:
        return SearchResult(Verdict.EQUAL, depth=0, states=1, phase="syntactic")
    if generator_content(sx) != generator_content(sy):
        # no move creates, deletes or relabels a generator square
        return SearchResult(Verdict.NOT_PROVEN, states=2, phase="generator-content")
    total = 0
    phases = (("simplify", False, _smallest_first_meet), ("full", True, _meet_search))
    for phase, expand, search in phases:
        found, n = search(sx, sy, MoveSet(T, E.pres, expand), depth_limit, max_states)
        total += n
        if found is not None:
            return SearchResult(Verdict.EQUAL, depth=len(found), moves=found, states=total, phase=phase)
    return SearchResult(Verdict.NOT_PROVEN, states=total, phase="exhausted")


def grids_equal(
    g1: GridExpr,
    g2: GridExpr,
    depth_limit: int = DEFAULT_DEPTH,
    pres=None,
    word_depth: int = DEFAULT_WORD_DEPTH,
    max_states: int = DEFAULT_MAX_STATES,
    thin_shortcut: bool = True,
) -> SearchResult:
    E = _algebra(pres, word_depth)
    return squares_equal(
        grid_tree(g1, E), grid_tree(g2, E), depth_limit, E, word_depth, max_states, thin_shortcut
    )

"""Squares of a double category with connections, their compositions, and grids.

Corner convention: P top-left, Q top-right, R bottom-left, S bottom-right;
edges run rightward and downward, so top: P->Q, left: P->R, right: Q->S,
bottom: R->S.  Thin squares have these boundaries (1 is an identity edge):

    construction   top   left   right   bottom
    id(X)          1     1      1       1
    eps1(a)        a     1      1       a
    eps2(a)        1     a      a       1
    gamma(a)       a     a      1       1
    gammap(a)      1     1      a       a

x h y (horizontal, x beside y) needs right(x) = left(y); x v z (vertical,
x above z) needs bottom(x) = top(z).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable, NamedTuple, Optional, Sequence, Union

from .category import (
    CategoryPresentation,
    Path,
    compose_all,
    compose_path,
    identity,
    normalize_path,
    paths_equal,
)
from .errors import EdgeMismatch, InvalidGrid, NonThinCell
from .outcome import Verdict

DEFAULT_WORD_DEPTH = 8

THIN_CONSTRUCTIONS = ("id", "eps1", "eps2", "gamma", "gammap", "composite")


@dataclass(frozen=True)
class Generator:
    name: str


@dataclass(frozen=True)
class Thin:
    construction: str
    edge: Optional[Path] = None


@dataclass(frozen=True)
class Composite:
    op: str  # "h" or "v"
    parts: tuple["Square", ...]


Kind = Union[Generator, Thin, Composite]


@dataclass(frozen=True)
class Square:
    kind: Kind
    top: Path
    bottom: Path
    left: Path
    right: Path

    def __post_init__(self):
        t, b, l, r = self.top, self.bottom, self.left, self.right
        if not (t.src == l.src and t.tgt == r.src and l.tgt == b.src and b.tgt == r.tgt):
            raise EdgeMismatch(
                f"boundary corners do not meet: top {t.src}->{t.tgt}, left {l.src}->{l.tgt}, "
                f"right {r.src}->{r.tgt}, bottom {b.src}->{b.tgt}"
            )

    @property
    def boundary(self) -> "Boundary":
        return Boundary(self.top, self.bottom, self.left, self.right)

    @property
    def is_thin(self) -> bool:
        if isinstance(self.kind, Thin):
            return True
        if isinstance(self.kind, Composite):
            return all(p.is_thin for p in self.kind.parts)
        return False

    @property
    def construction(self) -> Optional[str]:
        return self.kind.construction if isinstance(self.kind, Thin) else None

    def __str__(self) -> str:
        k = self.kind
        if isinstance(k, Generator):
            return k.name
        if isinstance(k, Thin):
            if k.construction == "id":
                return f"id({self.top.src})"
            if k.construction == "composite":
                return f"thin({self.top}; {self.left}; {self.right}; {self.bottom})"
            return f"{k.construction}({k.edge})"
        sep = " | " if k.op == "h" else " / "
        return "[" + sep.join(str(p) for p in k.parts) + "]"


class Boundary(NamedTuple):
    top: Path
    bottom: Path
    left: Path
    right: Path


# -- edge equality modulo a presentation -------------------------------------


class EdgeAlgebra:
    """Equality and canonical forms for edge paths, optionally modulo relations."""

    def __init__(self, pres: Optional[CategoryPresentation] = None, word_depth: int = DEFAULT_WORD_DEPTH):
        self.pres = pres
        self.word_depth = word_depth
        self._active = pres is not None and bool(pres.relations)
        self.canon = lru_cache(maxsize=None)(self._canon)

    def _canon(self, p: Path) -> Path:
        if not self._active:
            return p
        res = normalize_path(p, self.pres, self.word_depth)
        return res.path if res.exhausted else p

    def same(self, p: Path, q: Path) -> bool:
        if p == q:
            return True
        if (p.src, p.tgt) != (q.src, q.tgt) or not self._active:
            return False
        if self.canon(p) == self.canon(q):
            return True
        return paths_equal(p, q, self.pres, self.word_depth) is Verdict.EQUAL

    def compare(self, p: Path, q: Path) -> Verdict:
        if p == q:
            return Verdict.EQUAL
        if (p.src, p.tgt) != (q.src, q.tgt):
            return Verdict.NOT_EQUAL_WITHIN_BOUND
        if not self._active:
            return Verdict.NOT_EQUAL_WITHIN_BOUND
        return paths_equal(p, q, self.pres, self.word_depth)


def _algebra(pres, word_depth) -> EdgeAlgebra:
    if isinstance(pres, EdgeAlgebra):
        return pres
    return EdgeAlgebra(pres, word_depth)


# -- constructors -------------------------------------------------------------


def generator(name: str, top: Path, bottom: Path, left: Path, right: Path) -> Square:
    return Square(Generator(name), top, bottom, left, right)


def double_identity(obj: str) -> Square:
    i = identity(obj)
    return Square(Thin("id", i), i, i, i, i)


def eps1(a: Path) -> Square:
    if a.is_identity:
        return double_identity(a.src)
    return Square(Thin("eps1", a), a, a, identity(a.src), identity(a.tgt))


def eps2(a: Path) -> Square:
    if a.is_identity:
        return double_identity(a.src)
    return Square(Thin("eps2", a), identity(a.src), identity(a.tgt), a, a)


def gamma(a: Path) -> Square:
    if a.is_identity:
        return double_identity(a.src)
    return Square(Thin("gamma", a), a, identity(a.tgt), a, identity(a.tgt))


def gamma_prime(a: Path) -> Square:
    if a.is_identity:
        return double_identity(a.src)
    return Square(Thin("gammap", a), identity(a.src), a, identity(a.src), a)


THIN_BUILDERS = {"eps1": eps1, "eps2": eps2, "gamma": gamma, "gammap": gamma_prime}


def recognize_thin(top: Path, bottom: Path, left: Path, right: Path) -> Square:
    """The thin square with this boundary, named by its construction when it has one."""
    if top.is_identity and bottom.is_identity and left.is_identity and right.is_identity:
        return double_identity(top.src)
    if left.is_identity and right.is_identity and top == bottom:
        return eps1(top)
    if top.is_identity and bottom.is_identity and left == right:
        return eps2(left)
    if bottom.is_identity and right.is_identity and top == left:
        return gamma(top)
    if top.is_identity and left.is_identity and bottom == right:
        return gamma_prime(bottom)
    return Square(Thin("composite"), top, bottom, left, right)


def shell_verdict(top: Path, bottom: Path, left: Path, right: Path, pres=None, word_depth=DEFAULT_WORD_DEPTH) -> Verdict:
    """Does top.right = left.bottom hold (modulo the presentation)?"""
    E = _algebra(pres, word_depth)
    return E.compare(compose_path(top, right), compose_path(left, bottom))


def thin_square(top: Path, bottom: Path, left: Path, right: Path, pres=None, word_depth=DEFAULT_WORD_DEPTH) -> Square:
    """A thin square with an arbitrary boundary; the shell condition must hold."""
    # corner check happens in Square itself
    probe = Square(Thin("composite"), top, bottom, left, right)
    if shell_verdict(top, bottom, left, right, pres, word_depth) is not Verdict.EQUAL:
        raise EdgeMismatch(f"shell condition fails for thin square {probe}")
    E = _algebra(pres, word_depth)
    c = [E.canon(p) for p in (top, bottom, left, right)]
    named = recognize_thin(*c)
    if named.construction != "composite":
        return named
    return probe


# -- composition ----------------------------------------------------------------


def is_h_identity(sq: Square) -> bool:
    return sq.construction in ("id", "eps2")


def is_v_identity(sq: Square) -> bool:
    return sq.construction in ("id", "eps1")


def _flat(op: str, parts: Iterable[Square]) -> tuple[Square, ...]:
    out: list[Square] = []
    for p in parts:
        if isinstance(p.kind, Composite) and p.kind.op == op:
            out.extend(p.kind.parts)
        else:
            out.append(p)
    return tuple(out)


def h_chain(parts: Sequence[Square], pres=None, word_depth=DEFAULT_WORD_DEPTH) -> Square:
    """Horizontal composite of a row, keeping its tree (no simplification)."""
    E = _algebra(pres, word_depth)
    parts = _flat("h", parts)
    if not parts:
        raise InvalidGrid("empty horizontal composite")
    for x, y in zip(parts, parts[1:]):
        if not E.same(x.right, y.left):
            raise EdgeMismatch(f"right edge {x.right} of {x} differs from left edge {y.left} of {y}")
    if len(parts) == 1:
        return parts[0]
    top = compose_all(p.top for p in parts)
    bottom = compose_all(p.bottom for p in parts)
    return Square(Composite("h", parts), top, bottom, parts[0].left, parts[-1].right)


def v_chain(parts: Sequence[Square], pres=None, word_depth=DEFAULT_WORD_DEPTH) -> Square:
    """Vertical composite of a column, top to bottom, keeping its tree."""
    E = _algebra(pres, word_depth)
    parts = _flat("v", parts)
    if not parts:
        raise InvalidGrid("empty vertical composite")
    for x, z in zip(parts, parts[1:]):
        if not E.same(x.bottom, z.top):
            raise EdgeMismatch(f"bottom edge {x.bottom} of {x} differs from top edge {z.top} of {z}")
    if len(parts) == 1:
        return parts[0]
    left = compose_all(p.left for p in parts)
    right = compose_all(p.right for p in parts)
    return Square(Composite("v", parts), parts[0].top, parts[-1].bottom, left, right)


def hcompose(x: Square, y: Square, pres=None, word_depth=DEFAULT_WORD_DEPTH) -> Square:
    """x beside y.  Thin with thin gives a thin square; identities are absorbed."""
    E = _algebra(pres, word_depth)
    if not E.same(x.right, y.left):
        raise EdgeMismatch(f"right edge {x.right} of {x} differs from left edge {y.left} of {y}")
    if is_h_identity(y):
        return x
    if is_h_identity(x):
        return y
    if x.is_thin and y.is_thin:
        return thin_square(
            compose_path(x.top, y.top), compose_path(x.bottom, y.bottom), x.left, y.right, E
        )
    return h_chain((x, y), E)


def vcompose(x: Square, z: Square, pres=None, word_depth=DEFAULT_WORD_DEPTH) -> Square:
    """x above z."""
    E = _algebra(pres, word_depth)
    if not E.same(x.bottom, z.top):
        raise EdgeMismatch(f"bottom edge {x.bottom} of {x} differs from top edge {z.top} of {z}")
    if is_v_identity(z):
        return x
    if is_v_identity(x):
        return z
    if x.is_thin and z.is_thin:
        return thin_square(
            x.top, z.bottom, compose_path(x.left, z.left), compose_path(x.right, z.right), E
        )
    return v_chain((x, z), E)


# -- grids ------------------------------------------------------------------------


@dataclass(frozen=True)
class GridExpr:
    cells: tuple[tuple[Square, ...], ...]

    def __post_init__(self):
        cells = tuple(tuple(r) for r in self.cells)
        if not cells or not cells[0]:
            raise InvalidGrid("grid needs at least one row and one column")
        width = len(cells[0])
        if any(len(r) != width for r in cells):
            raise InvalidGrid("grid rows have different lengths")
        object.__setattr__(self, "cells", cells)

    @property
    def rows(self) -> int:
        return len(self.cells)

    @property
    def cols(self) -> int:
        return len(self.cells[0])

    def cell(self, r: int, c: int) -> Square:
        return self.cells[r][c]

    def column(self, c: int) -> tuple[Square, ...]:
        return tuple(row[c] for row in self.cells)

    def all_cells(self) -> Iterable[Square]:
        for row in self.cells:
            yield from row

    @property
    def is_thin(self) -> bool:
        return all(c.is_thin for c in self.all_cells())

    def beside(self, other: "GridExpr") -> "GridExpr":
        if self.rows != other.rows:
            raise InvalidGrid("side-by-side grids need the same number of rows")
        return GridExpr(tuple(a + b for a, b in zip(self.cells, other.cells)))

    def above(self, other: "GridExpr") -> "GridExpr":
        if self.cols != other.cols:
            raise InvalidGrid("stacked grids need the same number of columns")
        return GridExpr(self.cells + other.cells)


def grid(rows: Sequence[Sequence[Square]]) -> GridExpr:
    return GridExpr(tuple(tuple(r) for r in rows))


def validate_grid(g: GridExpr, pres=None, word_depth=DEFAULT_WORD_DEPTH) -> None:
    E = _algebra(pres, word_depth)
    for r in range(g.rows):
        for c in range(g.cols):
            x = g.cell(r, c)
            if c + 1 < g.cols and not E.same(x.right, g.cell(r, c + 1).left):
                raise EdgeMismatch(f"cells ({r},{c}) and ({r},{c + 1}) disagree on their shared vertical edge")
            if r + 1 < g.rows and not E.same(x.bottom, g.cell(r + 1, c).top):
                raise EdgeMismatch(f"cells ({r},{c}) and ({r + 1},{c}) disagree on their shared horizontal edge")


def eval_grid_boundary(g: GridExpr, pres=None, word_depth=DEFAULT_WORD_DEPTH) -> Boundary:
    validate_grid(g, pres, word_depth)
    return Boundary(
        compose_all(c.top for c in g.cells[0]),
        compose_all(c.bottom for c in g.cells[-1]),
        compose_all(c.left for c in g.column(0)),
        compose_all(c.right for c in g.column(g.cols - 1)),
    )


def compose_rows_first(g: GridExpr, pres=None, word_depth=DEFAULT_WORD_DEPTH) -> Square:
    """Each row composed horizontally, then the rows stacked."""
    E = _algebra(pres, word_depth)
    rows = []
    for row in g.cells:
        acc = row[0]
        for x in row[1:]:
            acc = hcompose(acc, x, E)
        rows.append(acc)
    out = rows[0]
    for x in rows[1:]:
        out = vcompose(out, x, E)
    return out


def compose_columns_first(g: GridExpr, pres=None, word_depth=DEFAULT_WORD_DEPTH) -> Square:
    E = _algebra(pres, word_depth)
    cols = []
    for c in range(g.cols):
        col = g.column(c)
        acc = col[0]
        for x in col[1:]:
            acc = vcompose(acc, x, E)
        cols.append(acc)
    out = cols[0]
    for x in cols[1:]:
        out = hcompose(out, x, E)
    return out


def grid_tree(g: GridExpr, pres=None, word_depth=DEFAULT_WORD_DEPTH) -> Square:
    """The grid as an unsimplified rows-of-columns composite tree."""
    E = _algebra(pres, word_depth)
    validate_grid(g, E)
    return v_chain([h_chain(row, E) for row in g.cells], E)


def thin_eval(g: GridExpr, pres=None, word_depth=DEFAULT_WORD_DEPTH) -> Square:
    E = _algebra(pres, word_depth)
    for r, row in enumerate(g.cells):
        for c, x in enumerate(row):
            if not x.is_thin:
                raise NonThinCell(f"cell ({r},{c}) is not thin: {x}")
    b = eval_grid_boundary(g, E)
    return thin_square(b.top, b.bottom, b.left, b.right, E)


def boundaries_equal(b1: Boundary, b2: Boundary, pres=None, word_depth=DEFAULT_WORD_DEPTH) -> Verdict:
    """Side-by-side comparison; any refuted side refutes the whole boundary."""
    E = _algebra(pres, word_depth)
    verdicts = [E.compare(p, q) for p, q in zip(b1, b2)]
    if any(v is Verdict.NOT_EQUAL_WITHIN_BOUND for v in verdicts):
        return Verdict.NOT_EQUAL_WITHIN_BOUND
    if all(v is Verdict.EQUAL for v in verdicts):
        return Verdict.EQUAL
    return Verdict.INCONCLUSIVE

"""Finitely presented categories, paths, and one-dimensional rewriting."""

from __future__ import annotations

import itertools
import re
from collections import Counter
from dataclasses import dataclass, field
from functools import cached_property
from typing import Hashable, Iterable, Iterator, Sequence

from .errors import (
    CornerMismatch,
    InvalidPath,
    InvalidPresentation,
    MalformedTable,
    NonComposable,
    NotParallel,
)
from .outcome import Report, Verdict

_TOKEN = re.compile(r"^[A-Za-z0-9_][A-Za-z0-9_'.\-]*$")


def _check_token(name: str, what: str) -> None:
    if not isinstance(name, str) or not _TOKEN.match(name):
        raise InvalidPresentation(f"bad {what} identifier {name!r}")


@dataclass(frozen=True, order=True)
class ArrowGen:
    name: str
    src: str
    tgt: str


@dataclass(frozen=True)
class Path:
    """A composable string of generators; the empty string is the identity at src."""

    src: str
    tgt: str
    gens: tuple[str, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "gens", tuple(self.gens))
        if not self.gens and self.src != self.tgt:
            raise InvalidPath(f"identity path needs src == tgt, got {self.src} -> {self.tgt}")

    @property
    def is_identity(self) -> bool:
        return not self.gens

    def __len__(self) -> int:
        return len(self.gens)

    def __str__(self) -> str:
        if not self.gens:
            return f"1({self.src})"
        return " ".join(self.gens)

    def sort_key(self) -> tuple:
        return (len(self.gens), self.gens, self.src, self.tgt)


def identity(obj: str) -> Path:
    return Path(obj, obj, ())


def compose_path(p: Path, q: Path) -> Path:
    """Diagrammatic composite: first p, then q."""
    if p.tgt != q.src:
        raise NonComposable(f"cannot compose {p} ({p.src}->{p.tgt}) with {q} ({q.src}->{q.tgt})")
    return Path(p.src, q.tgt, p.gens + q.gens)


def compose_all(paths: Iterable[Path]) -> Path:
    paths = list(paths)
    if not paths:
        raise ValueError("compose_all needs at least one path")
    out = paths[0]
    for q in paths[1:]:
        out = compose_path(out, q)
    return out


@dataclass(frozen=True)
class Relation:
    lhs: Path
    rhs: Path

    def __post_init__(self):
        if (self.lhs.src, self.lhs.tgt) != (self.rhs.src, self.rhs.tgt):
            raise NotParallel(f"relation sides {self.lhs} and {self.rhs} are not parallel")


@dataclass(frozen=True)
class CategoryPresentation:
    objects: frozenset[str] = frozenset()
    arrows: frozenset[ArrowGen] = frozenset()
    relations: frozenset[Relation] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "objects", frozenset(self.objects))
        object.__setattr__(self, "arrows", frozenset(self.arrows))
        object.__setattr__(self, "relations", frozenset(self.relations))
        for obj in self.objects:
            _check_token(obj, "object")
        names = set()
        for arrow in self.arrows:
            _check_token(arrow.name, "arrow")
            if arrow.name in names:
                raise InvalidPresentation(f"duplicate arrow name {arrow.name!r}")
            names.add(arrow.name)
            for end in (arrow.src, arrow.tgt):
                if end not in self.objects:
                    raise InvalidPresentation(f"arrow {arrow.name} references unknown object {end!r}")
        for rel in self.relations:
            self.check_path(rel.lhs)
            self.check_path(rel.rhs)

    @cached_property
    def arrow_map(self) -> dict[str, ArrowGen]:
        return {a.name: a for a in self.arrows}

    @cached_property
    def _rules(self) -> tuple[tuple[tuple[str, ...], tuple[str, ...]], ...]:
        # both orientations; identity sides are skipped because an empty
        # pattern would match everywhere
        rules = set()
        for rel in self.relations:
            for a, b in ((rel.lhs, rel.rhs), (rel.rhs, rel.lhs)):
                if a.gens and a.gens != b.gens:
                    rules.add((a.gens, b.gens))
        return tuple(sorted(rules))

    def path(self, *names: str, at: str | None = None) -> Path:
        """Build a path from generator names; ``at`` gives the object for an empty path."""
        if not names:
            if at is None or at not in self.objects:
                raise InvalidPath(f"identity path needs a known object, got {at!r}")
            return identity(at)
        out = None
        for n in names:
            if n not in self.arrow_map:
                raise InvalidPath(f"unknown generator {n!r}")
            a = self.arrow_map[n]
            if out is not None and out.tgt != a.src:
                raise InvalidPath(f"{n} starts at {a.src}, but the path so far ends at {out.tgt}")
            out = Path(a.src, a.tgt, (n,)) if out is None else Path(out.src, a.tgt, out.gens + (n,))
        return out

    def check_path(self, p: Path) -> None:
        if p.src not in self.objects or p.tgt not in self.objects:
            raise InvalidPath(f"path {p} has unknown endpoint")
        here = p.src
        for n in p.gens:
            a = self.arrow_map.get(n)
            if a is None:
                raise InvalidPath(f"unknown generator {n!r} in path {p}")
            if a.src != here:
                raise InvalidPath(f"generator {n} does not start at {here} in path {p}")
            here = a.tgt
        if here != p.tgt:
            raise InvalidPath(f"path {p} ends at {here}, not {p.tgt}")

    def rewrites(self, p: Path) -> Iterator[Path]:
        """Every path one relation step away from p (either direction)."""
        g = p.gens
        for lhs, rhs in self._rules:
            k = len(lhs)
            for i in range(len(g) - k + 1):
                if g[i : i + k] == lhs:
                    new = g[:i] + rhs + g[i + k :]
                    if not new and p.src != p.tgt:
                        continue
                    yield Path(p.src, p.tgt, new)


def free_presentation(arrows: Iterable[ArrowGen], objects: Iterable[str] = ()) -> CategoryPresentation:
    arrows = list(arrows)
    objs = set(objects)
    for a in arrows:
        objs.update((a.src, a.tgt))
    return CategoryPresentation(frozenset(objs), frozenset(arrows))


# -- bounded word problem ---------------------------------------------------


@dataclass(frozen=True)
class Closure:
    members: frozenset[Path]
    exhausted: bool


def bounded_closure(p: Path, pres: CategoryPresentation, depth_limit: int) -> Closure:
    """Paths within ``depth_limit`` relation steps of p.

    ``exhausted`` is True when no path at distance depth_limit + 1 exists,
    i.e. the members are the whole equivalence class.
    """
    if depth_limit < 0:
        raise ValueError("depth_limit must be >= 0")
    seen = {p}
    frontier = [p]
    for _ in range(depth_limit):
        nxt = []
        for q in frontier:
            for r in pres.rewrites(q):
                if r not in seen:
                    seen.add(r)
                    nxt.append(r)
        frontier = nxt
        if not frontier:
            return Closure(frozenset(seen), True)
    for q in frontier:
        for r in pres.rewrites(q):
            if r not in seen:
                return Closure(frozenset(seen), False)
    return Closure(frozenset(seen), True)


@dataclass(frozen=True)
class NormalizationResult:
    """``path`` is the least path found; it is the normal form only when ``exhausted``."""

    path: Path
    exhausted: bool

    @property
    def is_normal(self) -> bool:
        return self.exhausted

    @property
    def inconclusive(self) -> bool:
        return not self.exhausted


def _order_key(p: Path) -> tuple:
    return (len(p.gens), p.gens)


def normalize_path(p: Path, pres: CategoryPresentation, depth_limit: int = 8) -> NormalizationResult:
    pres.check_path(p)
    closure = bounded_closure(p, pres, depth_limit)
    best = min(closure.members, key=_order_key)
    return NormalizationResult(best, closure.exhausted)


def paths_equal(p: Path, q: Path, pres: CategoryPresentation, depth_limit: int = 8) -> Verdict:
    if (p.src, p.tgt) != (q.src, q.tgt):
        raise NotParallel(f"{p} and {q} are not parallel")
    if p == q:
        return Verdict.EQUAL
    pres.check_path(p)
    pres.check_path(q)
    cp = bounded_closure(p, pres, depth_limit)
    if q in cp.members:
        return Verdict.EQUAL
    cq = bounded_closure(q, pres, depth_limit)
    if cp.members & cq.members:
        return Verdict.EQUAL
    if cp.exhausted and cq.exhausted:
        return Verdict.NOT_EQUAL_WITHIN_BOUND
    return Verdict.INCONCLUSIVE


def check_commutative_square(
    a: Path, b: Path, c: Path, d: Path, pres: CategoryPresentation, depth_limit: int = 8
) -> Verdict:
    """Does the square with top a, right b, left c, bottom d commute (ab = cd)?"""
    if not (a.tgt == b.src and c.tgt == d.src and a.src == c.src and b.tgt == d.tgt):
        raise CornerMismatch(
            f"edges do not bound a square: a={a.src}->{a.tgt} b={b.src}->{b.tgt} "
            f"c={c.src}->{c.tgt} d={d.src}->{d.tgt}"
        )
    return paths_equal(compose_path(a, b), compose_path(c, d), pres, depth_limit)


# -- commutative words ------------------------------------------------------

_INT = re.compile(r"^-?\d+$")


def atom_key(atom: Hashable) -> tuple:
    """Numbers (or numeric strings) first by value, everything else by text."""
    if isinstance(atom, bool):
        return (1, str(atom))
    if isinstance(atom, int):
        return (0, atom, "")
    text = str(atom)
    if _INT.match(text):
        return (0, int(text), text)
    return (1, text)


@dataclass(frozen=True)
class CommutativeWord:
    atoms: tuple[tuple[Hashable, int], ...] = ()

    def as_dict(self) -> dict:
        return dict(self.atoms)

    def render(self) -> str:
        return " ".join(f"{a}^{n}" if n != 1 else f"{a}" for a, n in self.atoms)

    def __str__(self) -> str:
        return self.render()


def commutative_normalize(word: Sequence[Hashable]) -> CommutativeWord:
    counts = Counter(word)
    return CommutativeWord(tuple(sorted(counts.items(), key=lambda kv: atom_key(kv[0]))))


# -- finite composition tables ----------------------------------------------


@dataclass
class CompositionTable:
    """A finite category given extensionally.

    ``compose[(f, g)] = h`` means f followed by g equals h (so f: X->Y, g: Y->Z).
    """

    objects: list[str]
    arrows: dict[str, tuple[str, str]]
    identities: dict[str, str]
    compose: dict[tuple[str, str], str] = field(default_factory=dict)

    def composable_pairs(self) -> Iterator[tuple[str, str]]:
        for f, (_, y) in sorted(self.arrows.items()):
            for g, (y2, _) in sorted(self.arrows.items()):
                if y == y2:
                    yield f, g


def _validate_table(t: CompositionTable) -> None:
    for name, (s, d) in t.arrows.items():
        if s not in t.objects or d not in t.objects:
            raise MalformedTable(f"arrow {name} has endpoint outside the object set")
    for obj in t.objects:
        ident = t.identities.get(obj)
        if ident is None:
            raise MalformedTable(f"object {obj} has no identity arrow")
        if t.arrows.get(ident) != (obj, obj):
            raise MalformedTable(f"identity {ident} of {obj} is not an endomorphism of {obj}")
    for (f, g), h in t.compose.items():
        for n in (f, g, h):
            if n not in t.arrows:
                raise MalformedTable(f"composition entry mentions unknown arrow {n}")
        (fs, ft), (gs, gt) = t.arrows[f], t.arrows[g]
        if ft != gs:
            raise MalformedTable(f"entry {f};{g} composes non-composable arrows")
        if t.arrows[h] != (fs, gt):
            raise MalformedTable(f"composite {f};{g} = {h} has endpoints {t.arrows[h]}, expected {(fs, gt)}")
    for pair in t.composable_pairs():
        if pair not in t.compose:
            raise MalformedTable(f"table has no entry for composable pair {pair}")


def check_category_axioms(table: CompositionTable) -> Report:
    _validate_table(table)
    report = Report("category-axioms")
    comp = table.compose
    for f, g in table.composable_pairs():
        for h, (hs, _) in sorted(table.arrows.items()):
            if hs != table.arrows[g][1]:
                continue
            left = comp[(comp[(f, g)], h)]
            right = comp[(f, comp[(g, h)])]
            if left != right:
                report.add(law="associativity", triple=[f, g, h], left=left, right=right)
    for f, (s, t) in sorted(table.arrows.items()):
        if comp[(table.identities[s], f)] != f:
            report.add(law="left-identity", arrow=f, got=comp[(table.identities[s], f)])
        if comp[(f, table.identities[t])] != f:
            report.add(law="right-identity", arrow=f, got=comp[(f, table.identities[t])])
    report.details["arrows"] = len(table.arrows)
    report.details["triples_checked"] = sum(
        1
        for f, g in table.composable_pairs()
        for h in table.arrows
        if table.arrows[h][0] == table.arrows[g][1]
    )
    return report


def cyclic_monoid_table(n: int, prefix: str = "m") -> CompositionTable:
    """One-object category of the additive monoid Z/n."""
    arrows = {f"{prefix}{i}": ("*", "*") for i in range(n)}
    compose = {
        (f"{prefix}{i}", f"{prefix}{j}"): f"{prefix}{(i + j) % n}"
        for i, j in itertools.product(range(n), repeat=2)
    }
    return CompositionTable(["*"], arrows, {"*": f"{prefix}0"}, compose)


__all__ = [
    "ArrowGen",
    "Path",
    "Relation",
    "CategoryPresentation",
    "CommutativeWord",
    "CompositionTable",
    "NormalizationResult",
    "bounded_closure",
    "check_category_axioms",
    "check_commutative_square",
    "commutative_normalize",
    "compose_all",
    "compose_path",
    "cyclic_monoid_table",
    "free_presentation",
    "identity",
    "normalize_path",
    "paths_equal",
]

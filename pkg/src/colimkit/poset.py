"""Finite posets viewed as thin categories, where colimits are joins."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Hashable, Iterable, Optional

from .errors import InvalidPoset, NoJoin, NotInCarrier
from .outcome import Report

Leq = Callable[[Hashable, Hashable], bool]


@dataclass(frozen=True)
class FinitePoset:
    carrier: tuple
    leq: Leq
    kind: str = "extensional"

    def __post_init__(self):
        carrier = tuple(self.carrier)
        if len(set(carrier)) != len(carrier):
            raise InvalidPoset("carrier has repeated elements")
        object.__setattr__(self, "carrier", carrier)
        self.validate()

    def validate(self) -> None:
        xs, le = self.carrier, self.leq
        for x in xs:
            if not le(x, x):
                raise InvalidPoset(f"not reflexive at {x!r}")
        for x in xs:
            for y in xs:
                if x != y and le(x, y) and le(y, x):
                    raise InvalidPoset(f"not antisymmetric: {x!r} and {y!r}")
        for x in xs:
            ups = [y for y in xs if le(x, y)]
            for y in ups:
                for z in xs:
                    if le(y, z) and not le(x, z):
                        raise InvalidPoset(f"not transitive: {x!r} <= {y!r} <= {z!r}")

    def __contains__(self, x) -> bool:
        return x in self.carrier

    def upper_bounds(self, *xs) -> list:
        return [c for c in self.carrier if all(self.leq(x, c) for x in xs)]


def numeric_poset(lo: int, hi: int) -> FinitePoset:
    return FinitePoset(tuple(range(lo, hi + 1)), lambda x, y: x <= y, "numeric")


def divisibility_poset(lo: int, hi: int) -> FinitePoset:
    if lo < 1:
        raise InvalidPoset("divisibility poset needs positive integers")
    return FinitePoset(tuple(range(lo, hi + 1)), lambda x, y: y % x == 0, "divisibility")


def extensional_poset(carrier: Iterable, pairs: Iterable[tuple]) -> FinitePoset:
    """``pairs`` lists x <= y facts; reflexive pairs are added, nothing else is closed."""
    carrier = tuple(carrier)
    rel = frozenset(pairs) | {(x, x) for x in carrier}
    for x, y in rel:
        if x not in carrier or y not in carrier:
            raise InvalidPoset(f"pair ({x!r}, {y!r}) mentions an element outside the carrier")
    return FinitePoset(carrier, lambda x, y: (x, y) in rel, "extensional")


def poset_join(p: FinitePoset, a, b) -> Optional[object]:
    """Least upper bound of a and b, or None when the upper bounds have no minimum."""
    for x in (a, b):
        if x not in p:
            raise NotInCarrier(f"{x!r} is not in the carrier")
    ups = p.upper_bounds(a, b)
    for c in ups:
        if all(p.leq(c, u) for u in ups):
            return c
    return None


def join_as_colimit_check(p: FinitePoset, a, b, w) -> Report:
    """Check that the join of a and b is the colimit vertex of the span a <- w -> b.

    In a thin category a cocone on the span is just an upper bound u of a and b
    (the triangles commute automatically) and a factorization is an arrow j -> u,
    of which there is at most one.
    """
    for x in (a, b, w):
        if x not in p:
            raise NotInCarrier(f"{x!r} is not in the carrier")
    if not (p.leq(w, a) and p.leq(w, b)):
        raise ValueError(f"{w!r} is not a common lower bound of {a!r} and {b!r}")
    j = poset_join(p, a, b)
    if j is None:
        raise NoJoin(f"{a!r} and {b!r} have no join in this poset")
    report = Report("join-as-colimit")
    if not (p.leq(a, j) and p.leq(b, j)):
        report.add(problem="join is not a cocone vertex", join=j)
    ups = p.upper_bounds(a, b)
    for u in ups:
        arrows = 1 if p.leq(j, u) else 0
        if arrows != 1:
            report.add(problem="upper bound receives no arrow from the join", upper_bound=u)
    report.details.update(join=j, upper_bounds=len(ups), lower_bound=w)
    return report

"""Colimits of finite diagrams of finite sets.

The colimit of a diagram D is the quotient of the disjoint union of its
node sets by the equivalence generated by x ~ D(a)(x) for every edge a.
Every commuting cocone then factors through it by exactly one function.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Mapping

from .errors import NonCommutingCocone, SearchSpaceTooLarge, StructuralMismatch
from .outcome import Report
from .unionfind import UnionFind

ENUMERATION_GUARD = 10**6


@dataclass(frozen=True, order=True)
class Edge:
    name: str
    src: str
    tgt: str


@dataclass(frozen=True)
class ShapeGraph:
    nodes: tuple[str, ...] = ()
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        nodes = tuple(sorted(self.nodes))
        if len(set(nodes)) != len(nodes):
            raise StructuralMismatch("duplicate node id in shape")
        edges = tuple(sorted(self.edges))
        if len({e.name for e in edges}) != len(edges):
            raise StructuralMismatch("duplicate edge id in shape")
        for e in edges:
            if e.src not in nodes or e.tgt not in nodes:
                raise StructuralMismatch(f"edge {e.name} has an endpoint outside the shape")
        object.__setattr__(self, "nodes", nodes)
        object.__setattr__(self, "edges", edges)


@dataclass(frozen=True)
class FinSetObj:
    elements: frozenset[str] = frozenset()

    def __post_init__(self):
        object.__setattr__(self, "elements", frozenset(self.elements))

    def __len__(self) -> int:
        return len(self.elements)

    def __iter__(self):
        return iter(sorted(self.elements))

    def __contains__(self, x) -> bool:
        return x in self.elements


def finset(*elements: str) -> FinSetObj:
    return FinSetObj(frozenset(elements))


@dataclass(frozen=True)
class FinFn:
    dom: FinSetObj
    cod: FinSetObj
    pairs: tuple[tuple[str, str], ...]

    def __post_init__(self):
        pairs = tuple(sorted(dict(self.pairs).items()))
        if len(pairs) != len(tuple(self.pairs)):
            raise StructuralMismatch("function assigns an element twice")
        object.__setattr__(self, "pairs", pairs)
        keys = {x for x, _ in pairs}
        if keys != set(self.dom.elements):
            missing = sorted(set(self.dom.elements) - keys)
            extra = sorted(keys - set(self.dom.elements))
            raise StructuralMismatch(f"function not total on its domain (missing {missing}, extra {extra})")
        for x, y in pairs:
            if y not in self.cod:
                raise StructuralMismatch(f"image {y!r} of {x!r} is outside the codomain")

    @classmethod
    def from_mapping(cls, dom: FinSetObj, cod: FinSetObj, mapping: Mapping[str, str]) -> "FinFn":
        return cls(dom, cod, tuple(mapping.items()))

    @cached_property
    def mapping(self) -> dict[str, str]:
        return dict(self.pairs)

    def __call__(self, x: str) -> str:
        return self.mapping[x]

    def then(self, g: "FinFn") -> "FinFn":
        """Diagrammatic composite: apply self, then g."""
        if self.cod != g.dom:
            raise StructuralMismatch("composite of functions with mismatched middle set")
        return FinFn(self.dom, g.cod, tuple((x, g(y)) for x, y in self.pairs))


def identity_fn(s: FinSetObj) -> FinFn:
    return FinFn(s, s, tuple((x, x) for x in s))


@dataclass(frozen=True)
class SetDiagram:
    shape: ShapeGraph
    node_sets: Mapping[str, FinSetObj]
    edge_fns: Mapping[str, FinFn]

    def __post_init__(self):
        object.__setattr__(self, "node_sets", dict(sorted(self.node_sets.items())))
        object.__setattr__(self, "edge_fns", dict(sorted(self.edge_fns.items())))
        if set(self.node_sets) != set(self.shape.nodes):
            raise StructuralMismatch("node_sets must cover exactly the shape's nodes")
        if set(self.edge_fns) != {e.name for e in self.shape.edges}:
            raise StructuralMismatch("edge_fns must cover exactly the shape's edges")
        for e in self.shape.edges:
            f = self.edge_fns[e.name]
            if f.dom != self.node_sets[e.src] or f.cod != self.node_sets[e.tgt]:
                raise StructuralMismatch(f"function on edge {e.name} does not match its endpoint sets")

    def __hash__(self):
        return hash((self.shape, tuple(self.node_sets.items()), tuple(self.edge_fns.items())))

    def points(self) -> list[tuple[str, str]]:
        """Elements of the disjoint union, as (node, element) pairs in canonical order."""
        return [(n, x) for n in self.shape.nodes for x in self.node_sets[n]]


def diagram(
    nodes: Mapping[str, Iterable[str]],
    edges: Iterable[tuple[str, str, str, Mapping[str, str]]] = (),
) -> SetDiagram:
    """Convenience builder: ``edges`` are (name, src, tgt, mapping)."""
    sets = {n: FinSetObj(frozenset(els)) for n, els in nodes.items()}
    edges = list(edges)
    shape = ShapeGraph(tuple(sets), tuple(Edge(n, s, t) for n, s, t, _ in edges))
    fns = {n: FinFn.from_mapping(sets[s], sets[t], m) for n, s, t, m in edges}
    return SetDiagram(shape, sets, fns)


@dataclass(frozen=True)
class Cocone:
    diagram: SetDiagram
    vertex: FinSetObj
    legs: Mapping[str, FinFn]

    def __post_init__(self):
        object.__setattr__(self, "legs", dict(sorted(self.legs.items())))
        _check_structure(self)


def cocone(d: SetDiagram, vertex: Iterable[str], legs: Mapping[str, Mapping[str, str]]) -> Cocone:
    v = FinSetObj(frozenset(vertex))
    built = {}
    for n, m in legs.items():
        if n not in d.node_sets:
            raise StructuralMismatch(f"leg for unknown node {n!r}")
        built[n] = FinFn.from_mapping(d.node_sets[n], v, m)
    return Cocone(d, v, built)


@dataclass(frozen=True)
class ColimitResult:
    diagram: SetDiagram
    apex: FinSetObj
    injections: Mapping[str, FinFn]
    class_map: Mapping[tuple[str, str], str]
    representatives: Mapping[str, tuple[str, str]] = field(default_factory=dict)

    def partition(self) -> frozenset[frozenset[tuple[str, str]]]:
        blocks: dict[str, set] = {}
        for pt, cls in self.class_map.items():
            blocks.setdefault(cls, set()).add(pt)
        return frozenset(frozenset(b) for b in blocks.values())

    def as_cocone(self) -> Cocone:
        return Cocone(self.diagram, self.apex, self.injections)


def class_name(node: str, elem: str) -> str:
    return f"class({node}.{elem})"


def _check_structure(c: Cocone) -> None:
    d = c.diagram
    for n in c.legs:
        if n not in d.node_sets:
            raise StructuralMismatch(f"dangling leg for node {n!r} not in the diagram")
    for n in d.shape.nodes:
        leg = c.legs.get(n)
        if leg is None:
            raise StructuralMismatch(f"cocone has no leg for node {n!r}")
        if leg.dom != d.node_sets[n] or leg.cod != c.vertex:
            raise StructuralMismatch(f"leg at {n!r} has the wrong domain or codomain")


def check_cocone(c: Cocone) -> Report:
    """Check legs[tgt] . D(a) = legs[src] for every edge a, pointwise."""
    _check_structure(c)
    report = Report("cocone")
    d = c.diagram
    for e in d.shape.edges:
        f = d.edge_fns[e.name]
        for x in d.node_sets[e.src]:
            direct = c.legs[e.src](x)
            via = c.legs[e.tgt](f(x))
            if direct != via:
                report.add(edge=e.name, element=x, direct=direct, via_edge=via)
    report.details["edges"] = len(d.shape.edges)
    return report


def colimit(d: SetDiagram) -> ColimitResult:
    points = d.points()
    uf = UnionFind(points)
    for e in d.shape.edges:
        f = d.edge_fns[e.name]
        for x in d.node_sets[e.src]:
            uf.union((e.src, x), (e.tgt, f(x)))
    rep = uf.canonical()  # tuples compare lexicographically: (node id, element)
    class_map = {pt: class_name(*rep[pt]) for pt in points}
    apex = FinSetObj(frozenset(class_map.values()))
    injections = {
        n: FinFn(d.node_sets[n], apex, tuple((x, class_map[(n, x)]) for x in d.node_sets[n]))
        for n in d.shape.nodes
    }
    reps = {class_name(*r): r for r in set(rep.values())}
    return ColimitResult(d, apex, injections, class_map, dict(sorted(reps.items())))


def factorize(r: ColimitResult, c: Cocone) -> FinFn:
    """The unique map apex -> c.vertex through which the cocone c factors."""
    if c.diagram != r.diagram:
        raise StructuralMismatch("cocone and colimit are over different diagrams")
    report = check_cocone(c)
    if not report.ok:
        raise NonCommutingCocone("cocone does not commute; it cannot factor", report.violations)
    pairs = [(cls, c.legs[node](elem)) for cls, (node, elem) in r.representatives.items()]
    phi = FinFn(r.apex, c.vertex, tuple(pairs))
    # defensive: commuting cocone means phi is independent of the representative
    for (node, elem), cls in r.class_map.items():
        assert phi(cls) == c.legs[node](elem)
    return phi


def verify_universal_property(d: SetDiagram, c: Cocone, r: ColimitResult | None = None) -> Report:
    """Enumerate every function apex -> vertex and count those that factor c."""
    if c.diagram != d:
        raise StructuralMismatch("cocone is over a different diagram")
    r = r if r is not None else colimit(d)
    n_apex, n_vertex = len(r.apex), len(c.vertex)
    if n_vertex**n_apex > ENUMERATION_GUARD:
        raise SearchSpaceTooLarge(f"{n_vertex}^{n_apex} candidate functions exceed {ENUMERATION_GUARD}")
    phi = factorize(r, c)
    apex_elems = list(r.apex)
    vertex_elems = list(c.vertex)
    points = d.points()
    count = 0
    found = []
    for images in itertools.product(vertex_elems, repeat=n_apex):
        cand = dict(zip(apex_elems, images))
        if all(cand[r.class_map[(n, x)]] == c.legs[n](x) for n, x in points):
            count += 1
            found.append(cand)
    report = Report("universal-property")
    report.details.update(candidates=n_vertex**n_apex, factorizations=count)
    if count != 1:
        report.add(problem="factorization count is not one", count=count)
    elif found[0] != phi.mapping:
        report.add(problem="enumerated factorization differs from factorize", enumerated=found[0])
    return report

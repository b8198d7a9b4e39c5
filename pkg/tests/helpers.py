"""Independent oracles and seeded generators for the test suite.

The oracles deliberately avoid the engine's data structures: partitions are
computed by repeated merging of plain Python sets, joins by scanning.
"""

from __future__ import annotations

import itertools
import math
import random
from importlib.resources import files

from colimkit.category import ArrowGen, Path, free_presentation
from colimkit.colimit import Cocone, FinFn, FinSetObj, SetDiagram, diagram
from colimkit.double import (
    GridExpr,
    double_identity,
    eps1,
    eps2,
    gamma,
    gamma_prime,
    generator,
)

FIXTURES = files("colimkit").joinpath("fixtures")


def fixture_text(name: str) -> str:
    return FIXTURES.joinpath(name).read_text(encoding="utf-8")


def fixture_names() -> list[str]:
    return sorted(p.name for p in FIXTURES.iterdir() if p.name.endswith(".ck"))


# -- colimit oracles ---------------------------------------------------------------------


def brute_partition(d: SetDiagram) -> frozenset[frozenset]:
    """Start from singletons and merge (i, x) with (j, f(x)) until nothing changes."""
    blocks = [{(n, x)} for n in d.shape.nodes for x in d.node_sets[n].elements]
    changed = True
    while changed:
        changed = False
        for e in d.shape.edges:
            f = d.edge_fns[e.name].mapping
            for x in d.node_sets[e.src].elements:
                a = next(b for b in blocks if (e.src, x) in b)
                b = next(b for b in blocks if (e.tgt, f[x]) in b)
                if a is not b:
                    a |= b
                    blocks.remove(b)
                    changed = True
    return frozenset(frozenset(b) for b in blocks)


def count_factorizations(partition, cocone: Cocone) -> int:
    """Number of maps from the blocks of ``partition`` to the vertex that factor the legs."""
    blocks = sorted(partition, key=sorted)
    vertex = sorted(cocone.vertex.elements)
    count = 0
    for images in itertools.product(vertex, repeat=len(blocks)):
        if all(cocone.legs[n](x) == img for blk, img in zip(blocks, images) for n, x in blk):
            count += 1
    return count


def random_diagram(rng: random.Random, max_nodes=4, max_edges=4, max_set=4) -> SetDiagram:
    n = rng.randint(0, max_nodes)
    nodes = [f"n{i}" for i in range(n)]
    sets = {v: [f"x{k}" for k in range(rng.randint(0, max_set))] for v in nodes}
    edges = []
    if nodes:
        for k in range(rng.randint(0, max_edges)):
            s, t = rng.choice(nodes), rng.choice(nodes)
            if sets[s] and not sets[t]:
                continue
            edges.append((f"e{k}", s, t, {x: rng.choice(sets[t]) for x in sets[s]}))
    return diagram(sets, edges)


def random_commuting_cocone(rng: random.Random, d: SetDiagram, guard: int = 10**6):
    """Send each oracle block to a random vertex element, keeping |V|^blocks under the guard."""
    blocks = sorted(brute_partition(d), key=sorted)
    size = rng.randint(1, 3)
    if size ** len(blocks) > guard:
        size = 1
    vertex = [f"v{i}" for i in range(size)]
    legs: dict[str, dict] = {n: {} for n in d.shape.nodes}
    for blk in blocks:
        v = rng.choice(vertex)
        for n, x in blk:
            legs[n][x] = v
    vobj = FinSetObj(frozenset(vertex))
    return Cocone(d, vobj, {n: FinFn.from_mapping(d.node_sets[n], vobj, m) for n, m in legs.items()})


def random_nested_triple(rng: random.Random):
    universe = [f"u{i}" for i in range(12)]
    w = set(rng.sample(universe, rng.randint(0, 4)))
    x = w | set(rng.sample(universe, rng.randint(0, 5)))
    y = w | set(rng.sample(universe, rng.randint(0, 5)))
    return sorted(w), sorted(x), sorted(y)


def span_diagram(w, x, y) -> SetDiagram:
    return diagram(
        {"W": w, "X": x, "Y": y},
        [("i", "W", "X", {e: e for e in w}), ("j", "W", "Y", {e: e for e in w})],
    )


def lcm(a: int, b: int) -> int:
    return a * b // math.gcd(a, b)


# -- paths and squares -------------------------------------------------------------------

QUIVER_OBJECTS = tuple(f"X{i}" for i in range(5))
QUIVER = free_presentation(
    [ArrowGen(f"f{i}{j}", a, b) for i, a in enumerate(QUIVER_OBJECTS) for j, b in enumerate(QUIVER_OBJECTS) if i != j]
    + [ArrowGen(f"k{i}", a, a) for i, a in enumerate(QUIVER_OBJECTS)],
    QUIVER_OBJECTS,
)


def _step(rng: random.Random, here: str) -> ArrowGen:
    return rng.choice([a for a in sorted(QUIVER.arrows) if a.src == here])


def random_walk(rng: random.Random, start: str, length: int) -> Path:
    gens, here = [], start
    for _ in range(length):
        a = _step(rng, here)
        gens.append(a.name)
        here = a.tgt
    return Path(start, here, tuple(gens))


def random_path_to(rng: random.Random, start: str, end: str, extra: int) -> Path:
    """A walk of ``extra`` free steps, then one more step to ``end`` if needed."""
    p = random_walk(rng, start, extra)
    if p.tgt == end:
        return p
    last = next(a for a in QUIVER.arrows if a.src == p.tgt and a.tgt == end)
    return Path(start, end, p.gens + (last.name,))


def random_generator_square(rng: random.Random, name: str):
    p = rng.choice(QUIVER_OBJECTS)
    top = random_walk(rng, p, rng.randint(1, 2))
    left = random_walk(rng, p, rng.randint(1, 2))
    right = random_walk(rng, top.tgt, rng.randint(1, 2))
    bottom = random_path_to(rng, left.tgt, right.tgt, rng.randint(0, 1))
    return generator(name, top, bottom, left, right)


def _thin_options(rng: random.Random, here: str, top, left):
    """Thin squares at corner ``here`` whose top/left match the given edges (None = free)."""
    opts = []

    def free():
        return random_walk(rng, here, rng.randint(0, 2))

    t_id = top is None or top.is_identity
    l_id = left is None or left.is_identity
    if t_id and l_id:
        opts.append(double_identity(here))
        opts.append(gamma_prime(free()))
    if l_id:
        opts.append(eps1(top if top is not None else free()))
    if t_id:
        opts.append(eps2(left if left is not None else free()))
    if top is None and left is None:
        opts.append(gamma(free()))
    elif top is not None and left is not None and top == left:
        opts.append(gamma(top))
    elif top is not None and left is None:
        opts.append(gamma(top))
    elif left is not None and top is None:
        opts.append(gamma(left))
    return opts


def random_thin_grid(rng: random.Random, rows: int = 2, cols: int = 2, tries: int = 200) -> GridExpr:
    for _ in range(tries):
        cells = [[None] * cols for _ in range(rows)]
        ok = True
        for r in range(rows):
            for c in range(cols):
                top = cells[r - 1][c].bottom if r else None
                left = cells[r][c - 1].right if c else None
                if top is not None:
                    here = top.src
                elif left is not None:
                    here = left.src
                else:
                    here = rng.choice(QUIVER_OBJECTS)
                opts = _thin_options(rng, here, top, left)
                if not opts:
                    ok = False
                    break
                cells[r][c] = rng.choice(opts)
            if not ok:
                break
        if ok:
            return GridExpr(tuple(tuple(row) for row in cells))
    raise RuntimeError("could not build a thin grid")


def with_generators(rng: random.Random, g: GridExpr, prob: float = 0.5) -> GridExpr:
    """Replace cells by generator squares on the same boundary."""
    rows = []
    for r, row in enumerate(g.cells):
        out = []
        for c, x in enumerate(row):
            if rng.random() < prob:
                x = generator(f"s{r}{c}", x.top, x.bottom, x.left, x.right)
            out.append(x)
        rows.append(tuple(out))
    return GridExpr(tuple(rows))

"""Text format for colimkit documents.

A document is a sequence of keyword blocks::

    category C { objects X Y; arrows f: X -> Y, g: Y -> Z; relation f g = h; }
    diagram D over shape { nodes i j; edge a: i -> j } sets { i = {w}; j = {w, x} } maps { a: w -> w }
    cocone K on D { vertex {p, q}; leg i: w -> p; leg j: w -> p, x -> q }
    poset P { divisibility 1..60 }
    grid G over C { row gammap(a) eps2(a); row eps1(a) gammap(b) }
    cube Q over C { face 1 0 = s; ... }
    message M { atoms h e l l o }
    network N { source S; receiver SC; link S -> SC }

Paths are generator names separated by spaces, or ``1(X)`` for the identity
at X.  Blocks may reference each other in any order.  ``serialize`` writes
the canonical form: blocks sorted by kind then name, unordered members
sorted, one space between tokens.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from typing import Iterator, Optional, Union

from .category import (
    ArrowGen,
    CategoryPresentation,
    CompositionTable,
    Path,
    Relation,
    identity,
)
from .colimit import Cocone, Edge, FinFn, FinSetObj, SetDiagram, ShapeGraph
from .cube import FACE_KEYS, CubeFaces
from .double import (
    EdgeAlgebra,
    GridExpr,
    Square,
    double_identity,
    eps1,
    eps2,
    gamma,
    gamma_prime,
    generator,
    grid_tree,
    thin_square,
)
from .errors import ColimkitError, DslSyntaxError, SemanticError
from .poset import FinitePoset, divisibility_poset, extensional_poset, numeric_poset
from .relay import Message, ServerNetwork

KINDS = ("category", "diagram", "cocone", "poset", "grid", "cube", "message", "network")

# -- tokens ----------------------------------------------------------------------------

_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>\#[^\n]*)
  | (?P<punct>->|\.\.|<=|[{}();,:=|])
  | (?P<ident>[A-Za-z0-9_'][A-Za-z0-9_']*)
    """,
    re.VERBOSE,
)


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    col: int


def tokenize(text: str) -> list[Token]:
    out = []
    pos, line, col = 0, 1, 1
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if not m:
            raise DslSyntaxError(f"unexpected character {text[pos]!r}", line, col)
        kind = m.lastgroup
        chunk = m.group()
        if kind == "nl":
            line, col = line + 1, 1
        else:
            if kind in ("punct", "ident"):
                out.append(Token(kind, chunk, line, col))
            col += len(chunk)
        pos = m.end()
    out.append(Token("eof", "", line, col))
    return out


# -- syntax tree ---------------------------------------------------------------------------


@dataclass(frozen=True, order=True)
class PathText:
    """Generator names, or the identity at ``obj`` when ``gens`` is empty."""

    gens: tuple[str, ...] = ()
    obj: Optional[str] = None

    def render(self) -> str:
        return " ".join(self.gens) if self.gens else f"1({self.obj})"


@dataclass(frozen=True, order=True)
class CellText:
    """A square expression: ``ref`` names a square or grid; ``thin`` has four paths."""

    op: str
    args: tuple = ()

    def render(self) -> str:
        if self.op == "ref":
            return self.args[0]
        if self.op == "id":
            return f"id({self.args[0]})"
        if self.op == "thin":
            t, l, r, b = self.args
            return f"thin(top = {t.render()}, left = {l.render()}, right = {r.render()}, bottom = {b.render()})"
        return f"{self.op}({self.args[0].render()})"


@dataclass(frozen=True)
class CategoryBlock:
    name: str
    objects: tuple[str, ...] = ()
    arrows: tuple[tuple[str, str, str], ...] = ()
    relations: tuple[tuple[PathText, PathText], ...] = ()
    identities: tuple[tuple[str, str], ...] = ()
    compose: tuple[tuple[str, str, str], ...] = ()
    squares: tuple[tuple[str, PathText, PathText, PathText, PathText], ...] = ()
    kind = "category"


@dataclass(frozen=True)
class DiagramBlock:
    name: str
    nodes: tuple[str, ...] = ()
    edges: tuple[tuple[str, str, str], ...] = ()
    sets: tuple[tuple[str, tuple[str, ...]], ...] = ()
    maps: tuple[tuple[str, tuple[tuple[str, str], ...]], ...] = ()
    kind = "diagram"


@dataclass(frozen=True)
class CoconeBlock:
    name: str
    diagram: str
    vertex: tuple[str, ...] = ()
    legs: tuple[tuple[str, tuple[tuple[str, str], ...]], ...] = ()
    kind = "cocone"


@dataclass(frozen=True)
class PosetBlock:
    name: str
    builtin: Optional[str] = None  # "numeric" | "divisibility"
    lo: int = 0
    hi: int = 0
    elements: tuple[str, ...] = ()
    leq: tuple[tuple[str, str], ...] = ()
    kind = "poset"


@dataclass(frozen=True)
class GridBlock:
    name: str
    category: str
    rows: tuple[tuple[CellText, ...], ...] = ()
    kind = "grid"


@dataclass(frozen=True)
class CubeBlock:
    name: str
    category: str
    faces: tuple[tuple[tuple[int, int], CellText], ...] = ()
    kind = "cube"


@dataclass(frozen=True)
class MessageBlock:
    name: str
    atoms: tuple[str, ...] = ()
    kind = "message"


@dataclass(frozen=True)
class NetworkBlock:
    name: str
    source: str = ""
    receiver: str = ""
    servers: tuple[str, ...] = ()
    links: tuple[tuple[str, str], ...] = ()
    kind = "network"


Block = Union[
    CategoryBlock, DiagramBlock, CoconeBlock, PosetBlock, GridBlock, CubeBlock, MessageBlock, NetworkBlock
]


def _block_key(b: Block) -> tuple[int, str]:
    return KINDS.index(b.kind), b.name


@dataclass(frozen=True)
class Document:
    blocks: tuple[Block, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "blocks", tuple(sorted(self.blocks, key=_block_key)))

    def of_kind(self, kind: str) -> list[Block]:
        return [b for b in self.blocks if b.kind == kind]

    def get(self, kind: str, name: Optional[str] = None) -> Block:
        found = self.of_kind(kind)
        if name is not None:
            found = [b for b in found if b.name == name]
            if not found:
                raise SemanticError(f"no {kind} named {name!r}")
            return found[0]
        if not found:
            raise SemanticError(f"document has no {kind} block")
        if len(found) > 1:
            names = ", ".join(b.name for b in found)
            raise SemanticError(f"several {kind} blocks ({names}); name the one to use")
        return found[0]


# -- parser ------------------------------------------------------------------------------------


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    # token helpers
    @property
    def tok(self) -> Token:
        return self.toks[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.toks[min(self.i + k, len(self.toks) - 1)]

    def error(self, msg: str, tok: Optional[Token] = None):
        tok = tok or self.tok
        found = tok.text or "end of input"
        raise DslSyntaxError(f"{msg}, found {found!r}", tok.line, tok.col)

    def at(self, text: str) -> bool:
        return self.tok.text == text and self.tok.kind != "eof"

    def take(self, text: str) -> Token:
        if not self.at(text):
            self.error(f"expected {text!r}")
        t = self.tok
        self.i += 1
        return t

    def accept(self, text: str) -> bool:
        if self.at(text):
            self.i += 1
            return True
        return False

    def ident(self, what: str = "identifier") -> str:
        if self.tok.kind != "ident":
            self.error(f"expected {what}")
        t = self.tok
        self.i += 1
        return t.text

    def integer(self) -> int:
        t = self.tok
        text = self.ident("integer")
        if not text.isdigit():
            self.error("expected integer", t)
        return int(text)

    def end_statement(self, closer: str = "}") -> None:
        if not self.accept(";") and not self.at(closer):
            self.error(f"expected ';' or {closer!r}")

    # grammar
    def document(self) -> Document:
        blocks = []
        names = set()
        while self.tok.kind != "eof":
            start = self.tok
            kw = self.ident("block keyword")
            handler = getattr(self, f"_{kw}", None)
            if kw not in KINDS or handler is None:
                self.error(f"unknown block keyword {kw!r}", start)
            block = handler()
            if (block.kind, block.name) in names:
                raise DslSyntaxError(f"duplicate {block.kind} {block.name!r}", start.line, start.col)
            names.add((block.kind, block.name))
            blocks.append(block)
        return Document(tuple(blocks))

    def path(self) -> PathText:
        if self.tok.text == "1" and self.peek().text == "(":
            self.take("1")
            self.take("(")
            obj = self.ident("object")
            self.take(")")
            return PathText((), obj)
        gens = []
        while self.tok.kind == "ident" and not (self.tok.text == "1" and self.peek().text == "("):
            gens.append(self.ident())
        if not gens:
            self.error("expected a path")
        return PathText(tuple(gens))

    def element_set(self) -> tuple[str, ...]:
        self.take("{")
        out = []
        while not self.at("}"):
            out.append(self.ident("element"))
            if not self.accept(","):
                break
        self.take("}")
        return tuple(out)

    def pairs(self, closer: str = "}") -> tuple[tuple[str, str], ...]:
        out = []
        while True:
            x = self.ident("element")
            self.take("->")
            out.append((x, self.ident("element")))
            if not self.accept(","):
                break
        return tuple(out)

    def _category(self) -> CategoryBlock:
        name = self.ident("category name")
        self.take("{")
        objects, arrows, relations, idents, compose, squares = [], [], [], [], [], []
        while not self.accept("}"):
            kw_tok = self.tok
            kw = self.ident("statement keyword")
            if kw == "objects":
                while self.tok.kind == "ident":
                    objects.append(self.ident())
            elif kw == "arrows":
                while True:
                    a = self.ident("arrow name")
                    self.take(":")
                    s = self.ident("object")
                    self.take("->")
                    arrows.append((a, s, self.ident("object")))
                    if not self.accept(","):
                        break
            elif kw == "relation":
                lhs = self.path()
                self.take("=")
                relations.append((lhs, self.path()))
            elif kw == "identity":
                obj = self.ident("object")
                self.take("=")
                idents.append((obj, self.ident("arrow")))
            elif kw == "compose":
                f = self.ident("arrow")
                g = self.ident("arrow")
                self.take("=")
                compose.append((f, g, self.ident("arrow")))
            elif kw == "square":
                sq = self.ident("square name")
                self.take(":")
                sides = self.sides()
                squares.append((sq, sides["top"], sides["bottom"], sides["left"], sides["right"]))
            else:
                self.error(f"unknown category statement {kw!r}", kw_tok)
            self.end_statement()
        return CategoryBlock(
            name,
            tuple(sorted(set(objects))),
            tuple(sorted(set(arrows))),
            tuple(sorted(set(relations))),
            tuple(sorted(set(idents))),
            tuple(sorted(set(compose))),
            tuple(sorted(set(squares))),
        )

    def sides(self) -> dict[str, PathText]:
        sides: dict[str, PathText] = {}
        while True:
            t = self.tok
            side = self.ident("side name")
            if side not in ("top", "bottom", "left", "right") or side in sides:
                self.error("expected each of top, bottom, left, right once", t)
            self.take("=")
            sides[side] = self.path()
            if not self.accept(","):
                break
        if len(sides) != 4:
            self.error("a square needs top, bottom, left and right")
        return sides

    def _diagram(self) -> DiagramBlock:
        name = self.ident("diagram name")
        self.take("over")
        self.take("shape")
        self.take("{")
        nodes, edges = [], []
        while not self.accept("}"):
            t = self.tok
            kw = self.ident("statement keyword")
            if kw == "nodes":
                while self.tok.kind == "ident":
                    nodes.append(self.ident())
            elif kw == "edge":
                e = self.ident("edge name")
                self.take(":")
                s = self.ident("node")
                self.take("->")
                edges.append((e, s, self.ident("node")))
            else:
                self.error(f"unknown shape statement {kw!r}", t)
            self.end_statement()
        self.take("sets")
        self.take("{")
        sets = []
        while not self.accept("}"):
            node = self.ident("node")
            self.take("=")
            sets.append((node, tuple(sorted(set(self.element_set())))))
            self.end_statement()
        maps = []
        if self.accept("maps"):
            self.take("{")
            while not self.accept("}"):
                e = self.ident("edge")
                self.take(":")
                maps.append((e, tuple(sorted(set(self.pairs())))))
                self.end_statement()
        return DiagramBlock(
            name, tuple(sorted(set(nodes))), tuple(sorted(set(edges))), tuple(sorted(sets)), tuple(sorted(maps))
        )

    def _cocone(self) -> CoconeBlock:
        name = self.ident("cocone name")
        self.take("on")
        diagram = self.ident("diagram name")
        self.take("{")
        vertex, legs = None, []
        while not self.accept("}"):
            t = self.tok
            kw = self.ident("statement keyword")
            if kw == "vertex":
                vertex = self.element_set()
            elif kw == "leg":
                node = self.ident("node")
                self.take(":")
                legs.append((node, tuple(sorted(set(self.pairs()))) if not self.at(";") and not self.at("}") else ()))
            else:
                self.error(f"unknown cocone statement {kw!r}", t)
            self.end_statement()
        if vertex is None:
            raise DslSyntaxError(f"cocone {name} has no vertex", self.tok.line, self.tok.col)
        return CoconeBlock(name, diagram, tuple(sorted(set(vertex))), tuple(sorted(legs)))

    def _poset(self) -> PosetBlock:
        name = self.ident("poset name")
        self.take("{")
        builtin, lo, hi, elements, leq = None, 0, 0, [], []
        while not self.accept("}"):
            t = self.tok
            kw = self.ident("statement keyword")
            if kw in ("numeric", "divisibility"):
                builtin = kw
                lo = self.integer()
                self.take("..")
                hi = self.integer()
            elif kw == "elements":
                while self.tok.kind == "ident":
                    elements.append(self.ident())
            elif kw == "leq":
                while True:
                    x = self.ident("element")
                    self.take("<=")
                    leq.append((x, self.ident("element")))
                    if not self.accept(","):
                        break
            else:
                self.error(f"unknown poset statement {kw!r}", t)
            self.end_statement()
        return PosetBlock(name, builtin, lo, hi, tuple(sorted(set(elements))), tuple(sorted(set(leq))))

    def cell(self) -> CellText:
        t = self.tok
        head = self.ident("square expression")
        if not self.at("("):
            return CellText("ref", (head,))
        self.take("(")
        if head == "id":
            obj = self.ident("object")
            self.take(")")
            return CellText("id", (obj,))
        if head in ("eps1", "eps2", "gamma", "gammap"):
            p = self.path()
            self.take(")")
            return CellText(head, (p,))
        if head == "thin":
            s = self.sides()
            self.take(")")
            return CellText("thin", (s["top"], s["left"], s["right"], s["bottom"]))
        self.error(f"unknown square constructor {head!r}", t)

    def _grid(self) -> GridBlock:
        name = self.ident("grid name")
        self.take("over")
        cat = self.ident("category name")
        self.take("{")
        rows = []
        while not self.accept("}"):
            self.take("row")
            row = []
            while not self.at(";") and not self.at("}"):
                row.append(self.cell())
            if not row:
                self.error("empty row")
            rows.append(tuple(row))
            self.end_statement()
        return GridBlock(name, cat, tuple(rows))

    def _cube(self) -> CubeBlock:
        name = self.ident("cube name")
        self.take("over")
        cat = self.ident("category name")
        self.take("{")
        faces = {}
        while not self.accept("}"):
            t = self.take("face")
            i = self.integer()
            a = self.integer()
            if (i, a) not in FACE_KEYS or (i, a) in faces:
                self.error("faces are 'face I A' with I in 1..3, A in 0..1, each once", t)
            self.take("=")
            faces[(i, a)] = self.cell()
            self.end_statement()
        return CubeBlock(name, cat, tuple(sorted(faces.items())))

    def _message(self) -> MessageBlock:
        name = self.ident("message name")
        self.take("{")
        atoms = []
        while not self.accept("}"):
            self.take("atoms")
            while self.tok.kind == "ident":
                atoms.append(self.ident())
            self.end_statement()
        return MessageBlock(name, tuple(atoms))

    def _network(self) -> NetworkBlock:
        name = self.ident("network name")
        self.take("{")
        source = receiver = ""
        servers, links = [], []
        while not self.accept("}"):
            t = self.tok
            kw = self.ident("statement keyword")
            if kw == "source":
                source = self.ident("server")
            elif kw == "receiver":
                receiver = self.ident("server")
            elif kw == "servers":
                while self.tok.kind == "ident":
                    servers.append(self.ident())
            elif kw == "link":
                while True:
                    u = self.ident("server")
                    self.take("->")
                    links.append((u, self.ident("server")))
                    if not self.accept(","):
                        break
            else:
                self.error(f"unknown network statement {kw!r}", t)
            self.end_statement()
        allservers = set(servers) | {x for l in links for x in l} | {s for s in (source, receiver) if s}
        return NetworkBlock(name, source, receiver, tuple(sorted(allservers)), tuple(sorted(set(links))))


def parse_syntax(text: str) -> Document:
    """Parse without semantic checks."""
    return _Parser(text).document()


def parse(text: str) -> Document:
    doc = parse_syntax(text)
    resolve(doc)
    return doc


# -- canonical text -------------------------------------------------------------------------


def _join(items: Iterator[str], sep: str = ", ") -> str:
    return sep.join(items)


def _serialize_block(b: Block) -> str:
    if isinstance(b, CategoryBlock):
        stmts = []
        if b.objects:
            stmts.append("objects " + " ".join(b.objects))
        if b.arrows:
            stmts.append("arrows " + _join(f"{a}: {s} -> {t}" for a, s, t in b.arrows))
        stmts += [f"relation {l.render()} = {r.render()}" for l, r in b.relations]
        stmts += [f"identity {o} = {a}" for o, a in b.identities]
        stmts += [f"compose {f} {g} = {h}" for f, g, h in b.compose]
        stmts += [
            f"square {n}: top = {t.render()}, bottom = {bo.render()}, left = {l.render()}, right = {r.render()}"
            for n, t, bo, l, r in b.squares
        ]
        return f"category {b.name} {{ " + "".join(s + "; " for s in stmts) + "}"
    if isinstance(b, DiagramBlock):
        shape = []
        if b.nodes:
            shape.append("nodes " + " ".join(b.nodes))
        shape += [f"edge {e}: {s} -> {t}" for e, s, t in b.edges]
        sets = [f"{n} = {{{_join(iter(els))}}}" for n, els in b.sets]
        maps = [f"{e}: " + _join(f"{x} -> {y}" for x, y in ps) for e, ps in b.maps]
        text = (
            f"diagram {b.name} over shape {{ " + "".join(s + "; " for s in shape) + "} "
            "sets { " + "".join(s + "; " for s in sets) + "}"
        )
        if maps:
            text += " maps { " + "".join(s + "; " for s in maps) + "}"
        return text
    if isinstance(b, CoconeBlock):
        stmts = [f"vertex {{{_join(iter(b.vertex))}}}"]
        stmts += [f"leg {n}: " + _join(f"{x} -> {y}" for x, y in ps) for n, ps in b.legs]
        return f"cocone {b.name} on {b.diagram} {{ " + "".join(s + "; " for s in stmts) + "}"
    if isinstance(b, PosetBlock):
        stmts = []
        if b.builtin:
            stmts.append(f"{b.builtin} {b.lo}..{b.hi}")
        if b.elements:
            stmts.append("elements " + " ".join(b.elements))
        if b.leq:
            stmts.append("leq " + _join(f"{x} <= {y}" for x, y in b.leq))
        return f"poset {b.name} {{ " + "".join(s + "; " for s in stmts) + "}"
    if isinstance(b, GridBlock):
        rows = ["row " + " ".join(c.render() for c in r) for r in b.rows]
        return f"grid {b.name} over {b.category} {{ " + "".join(s + "; " for s in rows) + "}"
    if isinstance(b, CubeBlock):
        faces = [f"face {i} {a} = {c.render()}" for (i, a), c in b.faces]
        return f"cube {b.name} over {b.category} {{ " + "".join(s + "; " for s in faces) + "}"
    if isinstance(b, MessageBlock):
        return f"message {b.name} {{ atoms" + "".join(" " + a for a in b.atoms) + "; }"
    if isinstance(b, NetworkBlock):
        stmts = [f"source {b.source}", f"receiver {b.receiver}"]
        if b.servers:
            stmts.append("servers " + " ".join(b.servers))
        if b.links:
            stmts.append("link " + _join(f"{u} -> {v}" for u, v in b.links))
        return f"network {b.name} {{ " + "".join(s + "; " for s in stmts) + "}"
    raise TypeError(f"not a block: {b!r}")


def serialize(doc: Document) -> str:
    return "".join(_serialize_block(b) + "\n" for b in doc.blocks)


# -- semantic resolution ------------------------------------------------------------------------


@dataclass
class Workspace:
    """Engine objects built from a document."""

    presentations: dict[str, CategoryPresentation] = field(default_factory=dict)
    tables: dict[str, CompositionTable] = field(default_factory=dict)
    squares: dict[str, dict[str, Square]] = field(default_factory=dict)
    diagrams: dict[str, SetDiagram] = field(default_factory=dict)
    cocones: dict[str, Cocone] = field(default_factory=dict)
    posets: dict[str, FinitePoset] = field(default_factory=dict)
    grids: dict[str, GridExpr] = field(default_factory=dict)
    grid_category: dict[str, str] = field(default_factory=dict)
    cubes: dict[str, CubeFaces] = field(default_factory=dict)
    cube_category: dict[str, str] = field(default_factory=dict)
    messages: dict[str, Message] = field(default_factory=dict)
    networks: dict[str, ServerNetwork] = field(default_factory=dict)


def _to_path(pt: PathText, pres: CategoryPresentation, where: str) -> Path:
    if not pt.gens:
        if pt.obj not in pres.objects:
            raise SemanticError(f"{where}: unknown object {pt.obj!r}")
        return identity(pt.obj)
    for g in pt.gens:
        if g not in pres.arrow_map:
            raise SemanticError(f"{where}: unknown arrow {g!r}")
    try:
        return pres.path(*pt.gens)
    except ColimkitError as exc:
        raise SemanticError(f"{where}: {exc}") from exc


def _build_category(b: CategoryBlock, ws: Workspace) -> None:
    where = f"category {b.name}"
    objects = set(b.objects)
    for a, s, t in b.arrows:
        for end in (s, t):
            if end not in objects:
                raise SemanticError(f"{where}: arrow {a} references unknown object {end!r}")
    try:
        bare = CategoryPresentation(frozenset(objects), frozenset(ArrowGen(*a) for a in b.arrows))
    except ColimkitError as exc:
        raise SemanticError(f"{where}: {exc}") from exc
    rels = []
    for l, r in b.relations:
        lp, rp = _to_path(l, bare, where), _to_path(r, bare, where)
        try:
            rels.append(Relation(lp, rp))
        except ColimkitError as exc:
            raise SemanticError(f"{where}: {exc}") from exc
    pres = CategoryPresentation(bare.objects, bare.arrows, frozenset(rels))
    ws.presentations[b.name] = pres
    if b.identities or b.compose:
        arrows = {a: (s, t) for a, s, t in b.arrows}
        ws.tables[b.name] = CompositionTable(
            sorted(objects), arrows, dict(b.identities), {(f, g): h for f, g, h in b.compose}
        )
    sqs = {}
    for name, t, bo, l, r in b.squares:
        sw = f"{where}, square {name}"
        paths = [_to_path(p, pres, sw) for p in (t, bo, l, r)]
        try:
            sqs[name] = generator(name, *paths)
        except ColimkitError as exc:
            raise SemanticError(f"{sw}: {exc}") from exc
    ws.squares[b.name] = sqs


def _build_diagram(b: DiagramBlock) -> SetDiagram:
    where = f"diagram {b.name}"
    sets = dict(b.sets)
    for node in b.nodes:
        if node not in sets:
            raise SemanticError(f"{where}: node {node!r} has no set")
    for node in sets:
        if node not in b.nodes:
            raise SemanticError(f"{where}: set given for unknown node {node!r}")
    maps = dict(b.maps)
    for e, s, t in b.edges:
        if e not in maps:
            raise SemanticError(f"{where}: edge {e!r} has no map")
    for e in maps:
        if e not in {x for x, _, _ in b.edges}:
            raise SemanticError(f"{where}: map given for unknown edge {e!r}")
    try:
        objs = {n: FinSetObj(frozenset(els)) for n, els in sets.items()}
        shape = ShapeGraph(b.nodes, tuple(Edge(*e) for e in b.edges))
        fns = {e: FinFn(objs[s], objs[t], maps[e]) for e, s, t in b.edges}
        return SetDiagram(shape, objs, fns)
    except ColimkitError as exc:
        raise SemanticError(f"{where}: {exc}") from exc


def _build_cocone(b: CoconeBlock, ws: Workspace) -> Cocone:
    where = f"cocone {b.name}"
    d = ws.diagrams.get(b.diagram)
    if d is None:
        raise SemanticError(f"{where}: unknown diagram {b.diagram!r}")
    v = FinSetObj(frozenset(b.vertex))
    legs = {}
    for node, pairs in b.legs:
        if node not in d.node_sets:
            raise SemanticError(f"{where}: leg for unknown node {node!r}")
        try:
            legs[node] = FinFn(d.node_sets[node], v, pairs)
        except ColimkitError as exc:
            raise SemanticError(f"{where}, leg {node}: {exc}") from exc
    for node in d.shape.nodes:
        if node not in legs:
            raise SemanticError(f"{where}: no leg for node {node!r}")
    try:
        return Cocone(d, v, legs)
    except ColimkitError as exc:
        raise SemanticError(f"{where}: {exc}") from exc


def _build_poset(b: PosetBlock) -> FinitePoset:
    where = f"poset {b.name}"
    try:
        if b.builtin == "numeric":
            return numeric_poset(b.lo, b.hi)
        if b.builtin == "divisibility":
            return divisibility_poset(b.lo, b.hi)
        return extensional_poset(b.elements, b.leq)
    except ColimkitError as exc:
        raise SemanticError(f"{where}: {exc}") from exc


def _build_cell(c: CellText, cat: str, ws: Workspace, where: str, building: set) -> Square:
    pres = ws.presentations[cat]
    if c.op == "ref":
        name = c.args[0]
        if name in ws.squares.get(cat, {}):
            return ws.squares[cat][name]
        if name in ws.grids:
            if ws.grid_category[name] != cat:
                raise SemanticError(f"{where}: grid {name!r} is over a different category")
            return grid_tree(ws.grids[name], pres)
        if name in building:
            raise SemanticError(f"{where}: grid {name!r} refers to itself")
        raise SemanticError(f"{where}: unknown square or grid {name!r}")
    if c.op == "id":
        if c.args[0] not in pres.objects:
            raise SemanticError(f"{where}: unknown object {c.args[0]!r}")
        return double_identity(c.args[0])
    try:
        if c.op == "thin":
            t, l, r, b = (_to_path(p, pres, where) for p in c.args)
            return thin_square(t, b, l, r, pres)
        build = {"eps1": eps1, "eps2": eps2, "gamma": gamma, "gammap": gamma_prime}[c.op]
        return build(_to_path(c.args[0], pres, where))
    except SemanticError:
        raise
    except ColimkitError as exc:
        raise SemanticError(f"{where}: {exc}") from exc


def _grid_refs(b: GridBlock) -> set[str]:
    return {c.args[0] for row in b.rows for c in row if c.op == "ref"}


def resolve(doc: Document) -> Workspace:
    ws = Workspace()
    for b in doc.of_kind("category"):
        _build_category(b, ws)
    for b in doc.of_kind("diagram"):
        ws.diagrams[b.name] = _build_diagram(b)
    for b in doc.of_kind("cocone"):
        ws.cocones[b.name] = _build_cocone(b, ws)
    for b in doc.of_kind("poset"):
        ws.posets[b.name] = _build_poset(b)
    pending = {b.name: b for b in doc.of_kind("grid")}
    while pending:
        ready = [b for b in pending.values() if not (_grid_refs(b) & set(pending))]
        if not ready:
            raise SemanticError("grids " + ", ".join(sorted(pending)) + " refer to each other in a cycle")
        for b in sorted(ready, key=lambda b: b.name):
            where = f"grid {b.name}"
            if b.category not in ws.presentations:
                raise SemanticError(f"{where}: unknown category {b.category!r}")
            rows = tuple(
                tuple(_build_cell(c, b.category, ws, where, set(pending)) for c in row) for row in b.rows
            )
            try:
                g = GridExpr(rows)
                grid_tree(g, ws.presentations[b.category])
            except ColimkitError as exc:
                raise SemanticError(f"{where}: {exc}") from exc
            ws.grids[b.name] = g
            ws.grid_category[b.name] = b.category
            del pending[b.name]
    for b in doc.of_kind("cube"):
        where = f"cube {b.name}"
        if b.category not in ws.presentations:
            raise SemanticError(f"{where}: unknown category {b.category!r}")
        if len(b.faces) != 6:
            raise SemanticError(f"{where}: a cube needs six faces")
        faces = {k: _build_cell(c, b.category, ws, where, set()) for k, c in b.faces}
        ws.cubes[b.name] = CubeFaces(faces)
        ws.cube_category[b.name] = b.category
    for b in doc.of_kind("message"):
        ws.messages[b.name] = Message(b.atoms)
    for b in doc.of_kind("network"):
        where = f"network {b.name}"
        if not b.source or not b.receiver:
            raise SemanticError(f"{where}: needs a source and a receiver")
        try:
            ws.networks[b.name] = ServerNetwork(frozenset(b.servers), frozenset(b.links), b.source, b.receiver)
        except ColimkitError as exc:
            raise SemanticError(f"{where}: {exc}") from exc
    return ws


def edge_algebra(ws: Workspace, category: str, word_depth: int) -> EdgeAlgebra:
    return EdgeAlgebra(ws.presentations[category], word_depth)

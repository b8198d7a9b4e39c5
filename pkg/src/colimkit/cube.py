"""Cubes of squares and the commutative-cube test.

Face (i, alpha) is the face where coordinate i is fixed at alpha.  Its two
free directions j < k become the square's vertical (j) and horizontal (k)
directions.  Writing e1(x2, x3), e2(x1, x3), e3(x1, x2) for the twelve cube
edges, the faces read

    face     top          bottom       left         right
    (1, a)   e3(a, 0)     e3(a, 1)     e2(a, 0)     e2(a, 1)
    (2, a)   e3(0, a)     e3(1, a)     e1(a, 0)     e1(a, 1)
    (3, a)   e2(0, a)     e2(1, a)     e1(0, a)     e1(1, a)

The two composites are 2x3 grids; corner gaps are filled with thin squares:

    left:   eps2 | (2,0) | (3,1)        right:  gammap | (1,0) | gamma
            gammap | (1,1) | gamma              (3,0)  | (2,1) | eps2
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .double import (
    DEFAULT_WORD_DEPTH,
    GridExpr,
    Square,
    _algebra,
    double_identity,
    eps1,
    eps2,
    gamma,
    gamma_prime,
    validate_grid,
)
from .errors import ColimkitError, NonComposableCube
from .rewrite import DEFAULT_DEPTH, DEFAULT_MAX_STATES, SearchResult, grids_equal

FACE_KEYS = tuple((i, a) for i in (1, 2, 3) for a in (0, 1))


def _edge_slots():
    """Each cube edge with the two (face, side) slots that carry it."""
    slots = []
    for x1 in (0, 1):
        for x2 in (0, 1):
            slots.append((f"e3({x1},{x2})", ((1, x1), "top" if x2 == 0 else "bottom"),
                          ((2, x2), "top" if x1 == 0 else "bottom")))
    for x1 in (0, 1):
        for x3 in (0, 1):
            slots.append((f"e2({x1},{x3})", ((1, x1), "left" if x3 == 0 else "right"),
                          ((3, x3), "top" if x1 == 0 else "bottom")))
    for x2 in (0, 1):
        for x3 in (0, 1):
            slots.append((f"e1({x2},{x3})", ((2, x2), "left" if x3 == 0 else "right"),
                          ((3, x3), "left" if x2 == 0 else "right")))
    return tuple(slots)


EDGE_SLOTS = _edge_slots()


@dataclass(frozen=True)
class CubeFaces:
    faces: Mapping[tuple[int, int], Square]

    def __post_init__(self):
        if set(self.faces) != set(FACE_KEYS):
            raise NonComposableCube("a cube needs exactly the six faces (i, alpha), i in 1..3, alpha in 0..1")
        object.__setattr__(self, "faces", dict(sorted(self.faces.items())))

    def __getitem__(self, key: tuple[int, int]) -> Square:
        return self.faces[key]

    def __hash__(self):
        return hash(tuple(self.faces.items()))


def cube_mismatches(c: CubeFaces, pres=None, word_depth=DEFAULT_WORD_DEPTH) -> list[dict]:
    E = _algebra(pres, word_depth)
    bad = []
    for name, (fa, sa), (fb, sb) in EDGE_SLOTS:
        pa, pb = getattr(c[fa], sa), getattr(c[fb], sb)
        if not E.same(pa, pb):
            bad.append({"edge": name, "faces": [list(fa), list(fb)], "paths": [str(pa), str(pb)]})
    return bad


def cube_composite(c: CubeFaces, side: str, pres=None, word_depth=DEFAULT_WORD_DEPTH) -> GridExpr:
    E = _algebra(pres, word_depth)
    bad = cube_mismatches(c, E)
    if bad:
        raise NonComposableCube(f"faces disagree on {len(bad)} edge(s): " + ", ".join(b["edge"] for b in bad))
    side = side.lower()
    if side == "left":
        f20, f31, f11 = c[(2, 0)], c[(3, 1)], c[(1, 1)]
        rows = [
            [eps2(f20.left), f20, f31],
            [gamma_prime(f11.left), f11, gamma(f11.right)],
        ]
    elif side == "right":
        f10, f30, f21 = c[(1, 0)], c[(3, 0)], c[(2, 1)]
        rows = [
            [gamma_prime(f10.left), f10, gamma(f10.right)],
            [f30, f21, eps2(f21.right)],
        ]
    else:
        raise ValueError(f"side must be 'left' or 'right', not {side!r}")
    g = GridExpr(tuple(tuple(r) for r in rows))
    try:
        validate_grid(g, E)
    except ColimkitError as exc:
        raise NonComposableCube(f"{side} composite does not compose: {exc}") from exc
    return g


def is_commutative_cube(
    c: CubeFaces,
    depth_limit: int = DEFAULT_DEPTH,
    pres=None,
    word_depth: int = DEFAULT_WORD_DEPTH,
    max_states: int = DEFAULT_MAX_STATES,
) -> SearchResult:
    E = _algebra(pres, word_depth)
    left = cube_composite(c, "left", E)
    right = cube_composite(c, "right", E)
    return grids_equal(left, right, depth_limit, E, word_depth, max_states)


def identity_cube(obj: str) -> CubeFaces:
    d = double_identity(obj)
    return CubeFaces({k: d for k in FACE_KEYS})


def degenerate_cube(s: Square, direction: int) -> CubeFaces:
    """The cube with s as both faces in ``direction`` and thin sides from s's edges."""
    if direction == 3:
        faces = {
            (3, 0): s, (3, 1): s,
            (1, 0): eps2(s.top), (1, 1): eps2(s.bottom),
            (2, 0): eps2(s.left), (2, 1): eps2(s.right),
        }
    elif direction == 1:
        faces = {
            (1, 0): s, (1, 1): s,
            (2, 0): eps1(s.top), (2, 1): eps1(s.bottom),
            (3, 0): eps1(s.left), (3, 1): eps1(s.right),
        }
    elif direction == 2:
        faces = {
            (2, 0): s, (2, 1): s,
            (1, 0): eps1(s.top), (1, 1): eps1(s.bottom),
            (3, 0): eps2(s.left), (3, 1): eps2(s.right),
        }
    else:
        raise ValueError("direction must be 1, 2 or 3")
    return CubeFaces(faces)


def replace_face(c: CubeFaces, key: tuple[int, int], square: Square) -> CubeFaces:
    faces = dict(c.faces)
    faces[key] = square
    return CubeFaces(faces)

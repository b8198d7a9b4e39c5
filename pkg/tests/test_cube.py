import random

import pytest

from colimkit.cube import (
    EDGE_SLOTS,
    FACE_KEYS,
    CubeFaces,
    cube_composite,
    cube_mismatches,
    degenerate_cube,
    identity_cube,
    is_commutative_cube,
    replace_face,
)
from colimkit.double import eps1, eval_grid_boundary, generator
from colimkit.dsl import parse, resolve
from colimkit.errors import NonComposableCube
from colimkit.outcome import Verdict
from helpers import fixture_text, random_generator_square


def test_twelve_edges_each_shared_by_two_faces():
    assert len(EDGE_SLOTS) == 12
    counts = {}
    for _, a, b in EDGE_SLOTS:
        for face, _side in (a, b):
            counts[face] = counts.get(face, 0) + 1
    assert counts == {k: 4 for k in FACE_KEYS}


def test_identity_cube():
    c = identity_cube("P")
    for side in ("left", "right"):
        g = cube_composite(c, side)
        assert g.is_thin and all(p.is_identity for p in eval_grid_boundary(g))
    assert is_commutative_cube(c).verdict is Verdict.EQUAL


@pytest.mark.parametrize("direction", [1, 2, 3])
def test_degenerate_cube(direction):
    s = random_generator_square(random.Random(direction), "s")
    c = degenerate_cube(s, direction)
    assert cube_mismatches(c) == []
    left, right = cube_composite(c, "left"), cube_composite(c, "right")
    assert (left.rows, left.cols) == (right.rows, right.cols) == (2, 3)
    assert eval_grid_boundary(left) == eval_grid_boundary(right)
    r = is_commutative_cube(c)
    assert r.verdict is Verdict.EQUAL and r.phase != "thin"


def test_perturbed_face_is_not_equal():
    s = random_generator_square(random.Random(5), "s")
    c = degenerate_cube(s, 3)
    t = generator("t", s.top, s.bottom, s.left, s.right)
    r = is_commutative_cube(replace_face(c, (3, 1), t))
    assert r.verdict in (Verdict.NOT_PROVEN, Verdict.BOUNDARY_MISMATCH)


def test_six_distinct_generators_build_composites():
    s = random_generator_square(random.Random(8), "s")
    base = degenerate_cube(s, 3)
    faces = {k: generator(f"g{k[0]}{k[1]}", *base[k].boundary) for k in FACE_KEYS}
    c = CubeFaces(faces)
    cube_composite(c, "left")
    cube_composite(c, "right")
    assert is_commutative_cube(c).verdict is Verdict.NOT_PROVEN


def test_inconsistent_edges():
    s = random_generator_square(random.Random(2), "s")
    c = replace_face(degenerate_cube(s, 3), (1, 0), eps1(s.top))
    assert cube_mismatches(c)
    with pytest.raises(NonComposableCube):
        is_commutative_cube(c)


def test_cube_needs_six_faces():
    with pytest.raises(NonComposableCube):
        CubeFaces({(1, 0): identity_cube("P")[(1, 0)]})


def test_cube_fixture():
    ws = resolve(parse(fixture_text("cubes.ck")))
    pres = ws.presentations["shell"]
    assert is_commutative_cube(ws.cubes["unit"], pres=pres).verdict is Verdict.EQUAL
    assert is_commutative_cube(ws.cubes["flat_s"], pres=pres).verdict is Verdict.EQUAL
    assert is_commutative_cube(ws.cubes["bent"], pres=pres).verdict is Verdict.NOT_PROVEN

import random
from collections import Counter

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from colimkit.category import (
    ArrowGen,
    CategoryPresentation,
    CompositionTable,
    Path,
    Relation,
    bounded_closure,
    check_category_axioms,
    check_commutative_square,
    commutative_normalize,
    compose_path,
    cyclic_monoid_table,
    free_presentation,
    identity,
    normalize_path,
    paths_equal,
)
from colimkit.errors import (
    CornerMismatch,
    InvalidPath,
    InvalidPresentation,
    MalformedTable,
    NonComposable,
    NotParallel,
)
from colimkit.outcome import Verdict

CHAIN = free_presentation(
    [ArrowGen("f", "X", "Y"), ArrowGen("g", "Y", "Z"), ArrowGen("h", "Z", "W")]
)


def square_pres(*relations):
    arrows = [ArrowGen("a", "P", "R"), ArrowGen("b", "R", "S"), ArrowGen("c", "P", "Q"), ArrowGen("d", "Q", "S")]
    base = free_presentation(arrows)
    rels = [Relation(base.path(*l.split()), base.path(*r.split())) for l, r in relations]
    return CategoryPresentation(base.objects, base.arrows, frozenset(rels))


def three_way():
    # a b = c d = e f, all P -> S
    arrows = [
        ArrowGen("a", "P", "A"), ArrowGen("b", "A", "S"),
        ArrowGen("c", "P", "C"), ArrowGen("d", "C", "S"),
        ArrowGen("e", "P", "E"), ArrowGen("f", "E", "S"),
    ]
    base = free_presentation(arrows)
    rels = [Relation(base.path("a", "b"), base.path("c", "d")), Relation(base.path("c", "d"), base.path("e", "f"))]
    return CategoryPresentation(base.objects, base.arrows, frozenset(rels))


# -- composition --------------------------------------------------------------------------


def test_compose_chain():
    f, g = CHAIN.path("f"), CHAIN.path("g")
    fg = compose_path(f, g)
    assert (fg.src, fg.tgt, fg.gens) == ("X", "Z", ("f", "g"))


def test_identity_absorbed():
    f = CHAIN.path("f")
    assert compose_path(identity("X"), f) == f == compose_path(f, identity("Y"))


def test_associativity_is_definitional():
    f, g, h = (CHAIN.path(x) for x in "fgh")
    assert compose_path(compose_path(f, g), h) == compose_path(f, compose_path(g, h))


def test_noncomposable():
    with pytest.raises(NonComposable):
        compose_path(CHAIN.path("g"), CHAIN.path("f"))


def test_identity_path_needs_equal_ends():
    with pytest.raises(InvalidPath):
        Path("X", "Y", ())


def test_path_checks_generators():
    with pytest.raises(InvalidPath):
        CHAIN.path("f", "h")
    with pytest.raises(InvalidPath):
        CHAIN.path("nope")


def test_relation_must_be_parallel():
    with pytest.raises(NotParallel):
        Relation(CHAIN.path("f"), CHAIN.path("g"))


def test_presentation_rejects_unknown_object():
    with pytest.raises(InvalidPresentation):
        CategoryPresentation(frozenset({"X"}), frozenset({ArrowGen("f", "X", "Y")}))


# -- normalization ---------------------------------------------------------------------------


def test_normalize_without_relations_is_identity():
    p = CHAIN.path("f", "g")
    r = normalize_path(p, CHAIN)
    assert r.path == p and r.exhausted


def test_normalize_two_element_class():
    pres = square_pres(("a b", "c d"))
    r = normalize_path(pres.path("c", "d"), pres)
    assert r.exhausted and r.path.gens == ("a", "b")


def test_normalize_three_element_class_by_depth():
    pres = three_way()
    shallow = normalize_path(pres.path("e", "f"), pres, depth_limit=1)
    assert shallow.inconclusive
    deep = normalize_path(pres.path("e", "f"), pres, depth_limit=3)
    assert deep.exhausted and deep.path.gens == ("a", "b")


def test_closure_matches_brute_force_class():
    pres = three_way()
    cl = bounded_closure(pres.path("a", "b"), pres, 5)
    assert cl.exhausted
    assert {p.gens for p in cl.members} == {("a", "b"), ("c", "d"), ("e", "f")}


def test_normalize_idempotent_at_depth_zero():
    pres = three_way()
    nf = normalize_path(pres.path("e", "f"), pres, 4).path
    for depth in (0, 1, 4):
        assert normalize_path(nf, pres, depth).path == nf


def test_paths_equal_verdicts():
    pres = square_pres(("a b", "c d"))
    ab, cd = pres.path("a", "b"), pres.path("c", "d")
    assert paths_equal(ab, ab, CHAIN) is Verdict.EQUAL
    assert paths_equal(ab, cd, pres) is Verdict.EQUAL
    free = square_pres()
    assert paths_equal(ab, cd, free) is Verdict.NOT_EQUAL_WITHIN_BOUND
    with pytest.raises(NotParallel):
        paths_equal(pres.path("a"), pres.path("c"), pres)


def test_paths_equal_inconclusive_on_infinite_class():
    # x = x x makes the class of x infinite; y is never reached and never refuted
    base = free_presentation([ArrowGen("x", "O", "O"), ArrowGen("y", "O", "O")])
    pres = CategoryPresentation(base.objects, base.arrows, frozenset({Relation(base.path("x"), base.path("x", "x"))}))
    assert paths_equal(pres.path("x"), pres.path("y"), pres, 3) is Verdict.INCONCLUSIVE
    assert paths_equal(pres.path("x"), pres.path("x", "x", "x"), pres, 3) is Verdict.EQUAL


def test_commutative_square():
    pres = square_pres(("a b", "c d"))
    a, b, c, d = (pres.path(x) for x in "abcd")
    # top c, right d, left a, bottom b
    assert check_commutative_square(c, d, a, b, pres) is Verdict.EQUAL
    assert check_commutative_square(c, d, a, b, square_pres()) is Verdict.NOT_EQUAL_WITHIN_BOUND
    assert check_commutative_square(c, d, c, d, square_pres()) is Verdict.EQUAL
    with pytest.raises(CornerMismatch):
        check_commutative_square(c, d, a, d, pres)


@settings(max_examples=60, deadline=None)
@given(st.lists(st.sampled_from(["a b", "c d", "e f"]), min_size=2, max_size=3), st.integers(0, 5))
def test_paths_equal_is_an_equivalence(words, depth):
    pres = three_way()
    paths = [pres.path(*w.split()) for w in words]
    # the class has diameter 2, so depth >= 2 decides everything
    d = max(depth, 2)
    for p in paths:
        assert paths_equal(p, p, pres, d) is Verdict.EQUAL
    for p in paths:
        for q in paths:
            assert paths_equal(p, q, pres, d) is paths_equal(q, p, pres, d) is Verdict.EQUAL


@settings(max_examples=60, deadline=None)
@given(st.sampled_from(["a b", "c d", "e f"]), st.integers(0, 6), st.integers(0, 6))
def test_normalize_idempotent(word, d1, d2):
    pres = three_way()
    res = normalize_path(pres.path(*word.split()), pres, d1)
    if res.exhausted:
        assert normalize_path(res.path, pres, d2).path == res.path


# -- commutative words -----------------------------------------------------------------------


def test_commutative_word_example():
    nf = commutative_normalize([3, 2, 5, 3, 2, 5, 3])
    assert nf.as_dict() == {2: 2, 3: 3, 5: 2}
    assert nf.render() == "2^2 3^3 5^2"


def test_commutative_word_empty():
    assert commutative_normalize([]).as_dict() == {}
    assert commutative_normalize([]).render() == ""


@given(st.lists(st.one_of(st.integers(0, 9), st.sampled_from("xyz")), max_size=30), st.randoms())
def test_commutative_word_matches_sort_and_count(word, rnd):
    expected = Counter(word)
    nf = commutative_normalize(word)
    assert nf.as_dict() == dict(expected)
    shuffled = list(word)
    rnd.shuffle(shuffled)
    assert commutative_normalize(shuffled) == nf


# -- composition tables ------------------------------------------------------------------------


def test_single_identity_table():
    t = CompositionTable(["X"], {"1": ("X", "X")}, {"X": "1"}, {("1", "1"): "1"})
    assert check_category_axioms(t).ok


def test_mod3_monoid():
    rep = check_category_axioms(cyclic_monoid_table(3))
    assert rep.ok and rep.details["triples_checked"] == 27


def test_perturbed_monoid_reports_violations():
    t = cyclic_monoid_table(3)
    compose = dict(t.compose)
    compose[("m1", "m1")] = "m0"
    rep = check_category_axioms(CompositionTable(t.objects, t.arrows, t.identities, compose))
    assert not rep.ok
    assert {v["law"] for v in rep.violations} == {"associativity"}
    # (m1 m1) m2 = m0 m2 = m2 but m1 (m1 m2) = m1 m0 = m1
    assert ["m1", "m1", "m2"] in [v["triple"] for v in rep.violations]


def test_identity_violation_listed():
    t = cyclic_monoid_table(2)
    compose = dict(t.compose)
    compose[("m0", "m1")] = "m0"
    rep = check_category_axioms(CompositionTable(t.objects, t.arrows, t.identities, compose))
    assert any(v["law"] == "left-identity" and v["arrow"] == "m1" for v in rep.violations)


def test_malformed_table():
    t = CompositionTable(
        ["X", "Y"],
        {"1X": ("X", "X"), "1Y": ("Y", "Y"), "f": ("X", "Y")},
        {"X": "1X", "Y": "1Y"},
        {("1X", "1X"): "1X", ("1Y", "1Y"): "1Y", ("1X", "f"): "1X", ("f", "1Y"): "f"},
    )
    with pytest.raises(MalformedTable):
        check_category_axioms(t)


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 6))
def test_cyclic_tables_are_categories(n):
    assert check_category_axioms(cyclic_monoid_table(n)).ok


def test_random_redirect_is_caught():
    # brute force: redirecting any single non-identity composite in Z/4 breaks a law
    rng = random.Random(4)
    t = cyclic_monoid_table(4)
    for _ in range(10):
        (f, g) = rng.choice([k for k in t.compose if "m0" not in k])
        wrong = rng.choice([a for a in t.arrows if a != t.compose[(f, g)]])
        compose = dict(t.compose)
        compose[(f, g)] = wrong
        assert not check_category_axioms(CompositionTable(t.objects, t.arrows, t.identities, compose)).ok

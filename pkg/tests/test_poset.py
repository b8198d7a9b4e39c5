import pytest
from hypothesis import given
from hypothesis import strategies as st

from colimkit.errors import InvalidPoset, NoJoin, NotInCarrier
from colimkit.poset import (
    FinitePoset,
    divisibility_poset,
    extensional_poset,
    join_as_colimit_check,
    numeric_poset,
    poset_join,
)
from helpers import lcm

DIV = divisibility_poset(1, 60)
NUM = numeric_poset(1, 10)
ANTICHAIN = extensional_poset(["a", "b"], [])


def test_numeric_join_is_max():
    assert poset_join(NUM, 2, 3) == 3


def test_divisibility_join_example():
    # upper bounds of 4 and 6 in 1..60 are 12, 24, 36, 48, 60; 12 divides them all
    assert DIV.upper_bounds(4, 6) == [12, 24, 36, 48, 60]
    assert poset_join(DIV, 4, 6) == 12


def test_antichain_has_no_join():
    assert poset_join(ANTICHAIN, "a", "b") is None


def test_not_in_carrier():
    with pytest.raises(NotInCarrier):
        poset_join(NUM, 0, 3)


@given(st.integers(1, 60), st.integers(1, 60))
def test_divisibility_join_is_lcm_or_none(a, b):
    j = poset_join(DIV, a, b)
    m = lcm(a, b)
    assert j == (m if m <= 60 else None)


@given(st.integers(1, 60), st.integers(1, 60))
def test_join_is_least_by_full_scan(a, b):
    j = poset_join(DIV, a, b)
    ups = [c for c in range(1, 61) if c % a == 0 and c % b == 0]
    if j is None:
        assert all(any(c % u != 0 for c in ups) for u in ups)
    else:
        assert j in ups and all(u % j == 0 for u in ups)


def test_join_as_colimit_numeric():
    rep = join_as_colimit_check(NUM, 2, 3, 1)
    assert rep.ok and rep.details["join"] == 3


def test_join_as_colimit_divisibility():
    rep = join_as_colimit_check(DIV, 4, 6, 2)
    assert rep.ok and rep.details["join"] == 12 and rep.details["upper_bounds"] == 5


def test_join_as_colimit_antichain():
    p = extensional_poset(["w", "a", "b"], [("w", "a"), ("w", "b")])
    with pytest.raises(NoJoin):
        join_as_colimit_check(p, "a", "b", "w")


def test_join_as_colimit_needs_lower_bound():
    with pytest.raises(ValueError):
        join_as_colimit_check(DIV, 4, 6, 3)


def test_diamond_poset():
    p = extensional_poset(
        ["bot", "l", "r", "top"],
        [("bot", "l"), ("bot", "r"), ("l", "top"), ("r", "top"), ("bot", "top")],
    )
    assert poset_join(p, "l", "r") == "top"
    assert poset_join(p, "bot", "l") == "l"


def test_two_minimal_upper_bounds_means_no_join():
    # a, b < c, d with c, d incomparable
    p = extensional_poset(["a", "b", "c", "d"], [("a", "c"), ("a", "d"), ("b", "c"), ("b", "d")])
    assert poset_join(p, "a", "b") is None


def test_validation_is_eager():
    with pytest.raises(InvalidPoset):
        extensional_poset(["a", "b"], [("a", "b"), ("b", "a")])
    with pytest.raises(InvalidPoset):
        extensional_poset(["a", "b", "c"], [("a", "b"), ("b", "c")])
    with pytest.raises(InvalidPoset):
        FinitePoset((1, 2), lambda x, y: x < y)
    with pytest.raises(InvalidPoset):
        extensional_poset(["a"], [("a", "z")])

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from colimkit.errors import DuplicateIndex, InconsistentTotal, MissingPart, UnreachableReceiver
from colimkit.relay import (
    LabelledPart,
    Message,
    ServerNetwork,
    diamond_network,
    reassemble,
    route,
    run_relay,
    split,
)

WIRE = ServerNetwork(frozenset({"S", "SC"}), frozenset({("S", "SC")}), "S", "SC")
TWO_WAY = ServerNetwork(
    frozenset({"S", "S1", "S2", "SC"}),
    frozenset({("S", "S1"), ("S", "S2"), ("S1", "SC"), ("S2", "SC")}),
    "S",
    "SC",
)


def concat(parts):
    return tuple(a for p in sorted(parts, key=lambda p: p.index) for a in p.payload)


def test_split_into_one():
    m = Message(tuple("hello"))
    assert split(m, 1, 99) == [LabelledPart(0, 1, m.payload)]


def test_split_abcdef():
    parts = split(Message(tuple("abcdef")), 3, 7)
    assert [p.index for p in parts] == [0, 1, 2] and {p.total for p in parts} == {3}
    assert concat(parts) == tuple("abcdef")


def test_split_empty():
    parts = split(Message(()), 4, 1)
    assert len(parts) == 4 and all(p.payload == () for p in parts)


def test_split_needs_a_part():
    with pytest.raises(ValueError):
        split(Message(()), 0, 1)


def test_single_link_identity_order():
    parts = split(Message(tuple("abcdefgh")), 5, 3)
    for seed in range(10):
        ds = route(parts, WIRE, seed)
        assert [d.part.index for d in ds] == [0, 1, 2, 3, 4]
        assert {d.route for d in ds} == {("S", "SC")}


def test_two_seeds_same_multiset():
    parts = split(Message(tuple("abcdefgh")), 2, 3)
    a, b = route(parts, TWO_WAY, 1), route(parts, TWO_WAY, 2)
    assert sorted(d.part.index for d in a) == sorted(d.part.index for d in b) == [0, 1]
    for d in a + b:
        assert d.route[0] == "S" and d.route[-1] == "SC"


def test_routes_avoid_cycles_and_follow_links():
    net = diamond_network()
    parts = split(Message(tuple(range(30))), 8, 0)
    for seed in range(20):
        for d in route(parts, net, seed):
            assert len(set(d.route)) == len(d.route)
            assert all(hop in net.links for hop in zip(d.route, d.route[1:]))


def test_diamond_has_five_servers():
    assert len(diamond_network().servers) == 5


def test_isolated_sink_is_rejected():
    with pytest.raises(UnreachableReceiver):
        ServerNetwork(
            frozenset({"S", "SC", "X"}),
            frozenset({("S", "SC"), ("S", "X")}),
            "S",
            "SC",
        )


def test_reassemble_in_any_order():
    m = Message(tuple("abcdefgh"))
    parts = split(m, 4, 2)
    assert reassemble(parts) == m
    assert reassemble(list(reversed(parts))) == m


def test_reassemble_errors():
    parts = split(Message(tuple("abcdef")), 3, 5)
    with pytest.raises(MissingPart):
        reassemble([parts[0], parts[2]])
    with pytest.raises(DuplicateIndex):
        reassemble(parts + [parts[1]])
    with pytest.raises(InconsistentTotal):
        reassemble(parts[:2] + [LabelledPart(2, 4, parts[2].payload)])
    with pytest.raises(MissingPart):
        reassemble([])


def test_run_relay_single_part():
    m = Message(tuple("xyz"))
    assert run_relay(m, 1, diamond_network(), 1, 2).output == m


def test_twenty_seed_pairs_agree():
    m = Message(tuple("colimits"))
    outs = {run_relay(m, 4, diamond_network(), s, 100 + s).output for s in range(20)}
    assert outs == {m}


def test_empty_message():
    assert run_relay(Message(()), 3, diamond_network(), 0, 0).output == Message(())


def test_run_is_deterministic():
    m = Message.from_bytes(b"deterministic")
    a = run_relay(m, 5, diamond_network(), 4, 9)
    b = run_relay(m, 5, diamond_network(), 4, 9)
    assert a.as_dict() == b.as_dict()


@settings(max_examples=100, deadline=None)
@given(st.binary(max_size=64), st.integers(1, 8), st.integers(0, 2**32), st.integers(0, 2**32))
def test_choice_independence(data, n, s1, s2):
    m = Message.from_bytes(data)
    run = run_relay(m, n, diamond_network(), s1, s2)
    assert run.output.to_bytes() == data
    assert sorted(run.delivered_order) == list(range(n))


@given(st.lists(st.integers(0, 9), max_size=40), st.integers(1, 10), st.integers(0, 1000), st.randoms())
def test_reassemble_left_inverse_of_split(payload, n, seed, rnd):
    m = Message(tuple(payload))
    parts = split(m, n, seed)
    assert concat(parts) == m.payload
    rnd.shuffle(parts)
    assert reassemble(parts) == m


def test_routes_vary_with_seed():
    parts = split(Message(tuple(range(40))), 8, 0)
    seen = {tuple(d.route for d in route(parts, diamond_network(), s)) for s in range(10)}
    assert len(seen) > 1
    orders = {tuple(d.part.index for d in route(parts, diamond_network(), s)) for s in range(10)}
    assert len(orders) > 1

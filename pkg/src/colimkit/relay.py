"""Deterministic split / route / reassemble simulation.

A message is cut into labelled parts, each part wanders from the source
server to the receiving server along a seeded route, the parts arrive in a
seeded order, and the receiver puts them back together by label.  The
output never depends on the seeds.
"""

from __future__ import annotations

import random
from dataclasses import dataclass, field
from typing import Hashable, Iterable, Sequence

from .errors import DuplicateIndex, InconsistentTotal, MissingPart, UnreachableReceiver

Atom = Hashable


@dataclass(frozen=True)
class Message:
    payload: tuple[Atom, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "payload", tuple(self.payload))

    @classmethod
    def from_bytes(cls, data: bytes) -> "Message":
        return cls(tuple(data))

    def to_bytes(self) -> bytes:
        return bytes(self.payload)

    def __len__(self) -> int:
        return len(self.payload)


@dataclass(frozen=True)
class LabelledPart:
    index: int
    total: int
    payload: tuple[Atom, ...]


@dataclass(frozen=True)
class ServerNetwork:
    servers: frozenset[str]
    links: frozenset[tuple[str, str]]
    source: str
    receiver: str

    def __post_init__(self):
        object.__setattr__(self, "servers", frozenset(self.servers))
        object.__setattr__(self, "links", frozenset(self.links))
        for end in (self.source, self.receiver):
            if end not in self.servers:
                raise UnreachableReceiver(f"{end!r} is not a server of the network")
        for u, v in self.links:
            if u not in self.servers or v not in self.servers:
                raise UnreachableReceiver(f"link {u}->{v} leaves the server set")
        stuck = sorted(s for s in self.servers if not self._reaches(s, frozenset()))
        if stuck:
            raise UnreachableReceiver(f"servers {stuck} cannot reach {self.receiver!r}")

    def successors(self, u: str) -> list[str]:
        return sorted(v for (x, v) in self.links if x == u)

    def _reaches(self, start: str, blocked: frozenset) -> bool:
        seen, stack = {start}, [start]
        while stack:
            u = stack.pop()
            if u == self.receiver:
                return True
            for v in self.successors(u):
                if v not in seen and v not in blocked:
                    seen.add(v)
                    stack.append(v)
        return False


def diamond_network(width: int = 3, source: str = "S", receiver: str = "SC") -> ServerNetwork:
    """Source fans out to ``width`` relays, which all forward to the receiver.

    Neighbouring relays are also linked, so routes of different lengths exist.
    """
    relays = [f"S{i}" for i in range(1, width + 1)]
    links = {(source, r) for r in relays} | {(r, receiver) for r in relays}
    links |= {(a, b) for a, b in zip(relays, relays[1:])}
    return ServerNetwork(frozenset([source, receiver, *relays]), frozenset(links), source, receiver)


def split(m: Message, n: int, seed: int) -> list[LabelledPart]:
    if n < 1:
        raise ValueError("a message splits into at least one part")
    rng = random.Random(seed)
    cuts = sorted(rng.randint(0, len(m.payload)) for _ in range(n - 1))
    bounds = [0, *cuts, len(m.payload)]
    return [LabelledPart(i, n, m.payload[bounds[i] : bounds[i + 1]]) for i in range(n)]


@dataclass(frozen=True)
class Delivery:
    part: LabelledPart
    route: tuple[str, ...]


def _walk(net: ServerNetwork, rng: random.Random) -> tuple[str, ...]:
    here = net.source
    route = [here]
    visited = {here}
    while here != net.receiver:
        options = [
            v for v in net.successors(here)
            if v not in visited and net._reaches(v, frozenset(visited))
        ]
        if not options:
            raise UnreachableReceiver(f"route stuck at {here!r}")
        here = rng.choice(options)
        visited.add(here)
        route.append(here)
    return tuple(route)


def route(parts: Sequence[LabelledPart], net: ServerNetwork, seed: int) -> list[Delivery]:
    """Deliveries in arrival order; every part arrives exactly once.

    Part i leaves at time i.  Each link gets a seeded latency for the run,
    and a part arrives after the summed latency of its route (ties by index).
    """
    rng = random.Random(seed)
    span = max(2, 2 * len(parts))
    latency = {link: rng.randint(1, span) for link in sorted(net.links)}
    routed = [Delivery(p, _walk(net, rng)) for p in parts]

    def arrival(d: Delivery) -> tuple[int, int]:
        hops = zip(d.route, d.route[1:])
        return d.part.index + sum(latency[h] for h in hops), d.part.index

    return sorted(routed, key=arrival)


def reassemble(delivered: Iterable[LabelledPart | Delivery]) -> Message:
    parts = [d.part if isinstance(d, Delivery) else d for d in delivered]
    if not parts:
        raise MissingPart("nothing was delivered")
    totals = {p.total for p in parts}
    if len(totals) != 1:
        raise InconsistentTotal(f"parts disagree on the total: {sorted(totals)}")
    total = totals.pop()
    by_index: dict[int, LabelledPart] = {}
    for p in parts:
        if not 0 <= p.index < total:
            raise InconsistentTotal(f"part index {p.index} outside 0..{total - 1}")
        if p.index in by_index:
            raise DuplicateIndex(f"part {p.index} delivered twice")
        by_index[p.index] = p
    missing = sorted(set(range(total)) - set(by_index))
    if missing:
        raise MissingPart(f"parts {missing} never arrived")
    payload: list[Atom] = []
    for i in range(total):
        payload.extend(by_index[i].payload)
    return Message(tuple(payload))


@dataclass(frozen=True)
class RelayRun:
    message: Message
    parts: tuple[LabelledPart, ...]
    routes: dict[int, tuple[str, ...]] = field(hash=False)
    delivered_order: tuple[int, ...]
    output: Message

    def as_dict(self) -> dict:
        return {
            "message": [_plain(a) for a in self.message.payload],
            "parts": [
                {"index": p.index, "total": p.total, "payload": [_plain(a) for a in p.payload]}
                for p in self.parts
            ],
            "routes": {str(i): list(r) for i, r in sorted(self.routes.items())},
            "delivered_order": list(self.delivered_order),
            "output": [_plain(a) for a in self.output.payload],
            "reassembled_equals_input": self.output == self.message,
        }


def _plain(atom):
    return atom if isinstance(atom, (int, str)) else str(atom)


def run_relay(m: Message, n: int, net: ServerNetwork, seed_split: int, seed_route: int) -> RelayRun:
    parts = split(m, n, seed_split)
    deliveries = route(parts, net, seed_route)
    output = reassemble(deliveries)
    return RelayRun(
        message=m,
        parts=tuple(parts),
        routes={d.part.index: d.route for d in deliveries},
        delivered_order=tuple(d.part.index for d in deliveries),
        output=output,
    )

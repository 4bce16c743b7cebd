"""Builders and verifiers for Hamming-weight relation gadgets.

For a difficult spec the constructions below attach a small graph to k
scope vertices so that exactly the scope selections of weight congruent to
1 mod m extend to solutions, and every surviving scope vertex sees zero
selected gadget neighbors.  Restricted to arity k <= 3 with m >= 3 this
pins the weight to exactly one.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations
from typing import Iterable, Optional

from .graphs import Graph, GraphWithPortals
from .oracle import realized_language
from .residues import Classification, ProblemSpec, State, classify
from .sparse import Language


@dataclass(frozen=True)
class HwRelation:
    """Accepts a scope selection iff its Hamming weight lies in `accepted`."""

    arity: int
    accepted: frozenset[int]

    def __post_init__(self):
        for t in self.accepted:
            if not 0 <= t <= self.arity:
                raise ValueError(f"weight {t} outside [0, {self.arity}]")

    @staticmethod
    def exactly_one(arity: int) -> "HwRelation":
        return HwRelation(arity, frozenset({1}))

    @staticmethod
    def weights_in(arity: int, accepted: Iterable[int]) -> "HwRelation":
        return HwRelation(arity, frozenset(accepted))


def realized_hw_relation(spec: ProblemSpec, arity: int) -> HwRelation:
    """The relation the gadget constructions realize: scope weights t with
    t + (min rho - 1) in rho, i.e. t congruent to 1 mod m, clipped to the
    arity."""
    m = spec.m
    return HwRelation(arity, frozenset(t for t in range(arity + 1) if t % m == 1))


def relation_language(rel: HwRelation, m: int) -> Language:
    """L_R: one string per accepted selection, sigma_0 at selected scope
    positions and rho_0 elsewhere."""
    strings = []
    for t in sorted(rel.accepted):
        for chosen in combinations(range(rel.arity), t):
            sel = set(chosen)
            strings.append(
                tuple(
                    State.sigma(0) if i in sel else State.rho(0)
                    for i in range(rel.arity)
                )
            )
    return Language.from_strings(m, tuple(range(rel.arity)), strings)


class _Builder:
    def __init__(self, arity: int):
        self.n = arity
        self.edges: list[tuple[int, int]] = []

    def add_vertex(self) -> int:
        self.n += 1
        return self.n - 1

    def add_clique(self, size: int) -> list[int]:
        vs = [self.add_vertex() for _ in range(size)]
        for i, u in enumerate(vs):
            for w in vs[i + 1 :]:
                self.edges.append((u, w))
        return vs

    def connect(self, u: int, v: int):
        self.edges.append((u, v))

    def finish(self, arity: int) -> GraphWithPortals:
        return GraphWithPortals(Graph(self.n, self.edges), tuple(range(arity)))


def build_hw_gadget(spec: ProblemSpec, arity: int) -> GraphWithPortals:
    """Construct the gadget forcing weight-in-(1 mod m) scope selections.

    Dispatch on (min rho, min sigma); the four cases partition the
    difficult pairs.  Scope vertices are the portals 0..arity-1; no edge
    joins two scope vertices.
    """
    if classify(spec) is not Classification.EASY and spec.m < 3:
        raise ValueError("difficult specs have modulus >= 3")
    if classify(spec) is Classification.EASY:
        raise ValueError(f"gadget constructions require a difficult spec, got {spec}")
    s_min = spec.sigma.min
    r_min = spec.rho.min
    b = _Builder(arity)
    scope = list(range(arity))
    v = b.add_vertex()
    for u in scope:
        b.connect(v, u)
    if r_min >= 2:
        # One clique per unit of min rho - 1; its first vertex feeds v.
        for _ in range(r_min - 1):
            clique = b.add_clique(s_min + 1)
            b.connect(v, clique[0])
    elif s_min >= 2:
        # r = min rho = 1: one clique, blocked off through z and p_1.
        z = b.add_vertex()
        b.connect(v, z)
        p1 = b.add_vertex()
        clique = b.add_clique(s_min + 1)
        u1, w1 = clique[0], clique[1]
        b.connect(z, u1)
        b.connect(w1, p1)
    elif s_min == 1:
        # r = s = 1: one path-and-pendants gadget hanging off shared p.
        p = b.add_vertex()
        b.connect(v, p)
        q = b.add_vertex()
        w = b.add_vertex()
        b.connect(p, q)
        b.connect(q, w)
        u1 = b.add_vertex()
        v1 = b.add_vertex()
        b.connect(q, u1)
        b.connect(u1, v1)
    else:
        # s_min == 0: star with three leaves, one leaf wired to v.
        center = b.add_vertex()
        leaves = [b.add_vertex() for _ in range(3)]
        for leaf in leaves:
            b.connect(center, leaf)
        b.connect(v, leaves[0])
    return b.finish(arity)


def verify_realization(
    gp: GraphWithPortals,
    rel: HwRelation,
    spec: ProblemSpec,
    cap: Optional[int] = None,
) -> bool:
    """True iff the gadget's realized language equals the relation's
    sigma_0/rho_0 pattern language (states reduced mod m)."""
    lang = realized_language(gp, spec, cap=cap)
    target = relation_language(rel, spec.m)
    return lang == target

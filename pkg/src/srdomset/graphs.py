"""Graphs, tree decompositions, and nice decompositions.

File formats follow the PACE 2017 conventions: `.gr` for graphs
(`p tw <n> <m>` header, one `u v` edge per line) and `.td` for tree
decompositions (`s td <bags> <max_bag_size> <n>` header, `b <id> <v...>`
bag lines, then bag-tree edges).  Vertices are 1-based in files and 0-based
everywhere else; the conversion lives entirely in the parsers/serializers.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np


class ParseError(ValueError):
    pass


class DecompositionError(ValueError):
    pass


class Graph:
    """An undirected simple graph on vertices 0..n-1."""

    __slots__ = ("n", "edges", "_adj", "_masks")

    def __init__(self, n: int, edges: Iterable[tuple[int, int]]):
        canon = set()
        for u, v in edges:
            if u == v:
                raise ValueError(f"self-loop at vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u},{v}) out of range for n={n}")
            canon.add((min(u, v), max(u, v)))
        self.n = n
        self.edges = frozenset(canon)
        adj: list[list[int]] = [[] for _ in range(n)]
        for u, v in canon:
            adj[u].append(v)
            adj[v].append(u)
        self._adj = tuple(tuple(sorted(a)) for a in adj)
        self._masks = None

    def neighbors(self, v: int) -> tuple[int, ...]:
        return self._adj[v]

    def degree(self, v: int) -> int:
        return len(self._adj[v])

    @property
    def m(self) -> int:
        return len(self.edges)

    def has_edge(self, u: int, v: int) -> bool:
        return (min(u, v), max(u, v)) in self.edges

    def neighbor_masks(self) -> list[int]:
        """Per-vertex neighborhood bitmasks (bit v set iff v is a neighbor)."""
        if self._masks is None:
            masks = []
            for v in range(self.n):
                m = 0
                for u in self._adj[v]:
                    m |= 1 << u
                masks.append(m)
            self._masks = masks
        return self._masks

    def adjacency_matrix(self) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=np.uint8)
        for u, v in self.edges:
            a[u, v] = 1
            a[v, u] = 1
        return a

    def induced(self, vertices: Sequence[int]) -> tuple["Graph", dict[int, int]]:
        """Induced subgraph on `vertices`; returns it plus old->new id map."""
        order = sorted(set(vertices))
        remap = {v: i for i, v in enumerate(order)}
        edges = [
            (remap[u], remap[v])
            for u, v in self.edges
            if u in remap and v in remap
        ]
        return Graph(len(order), edges), remap

    def __eq__(self, other):
        return (
            isinstance(other, Graph) and self.n == other.n and self.edges == other.edges
        )

    def __hash__(self):
        return hash((self.n, self.edges))

    def __repr__(self):
        return f"Graph(n={self.n}, m={self.m})"


@dataclass(frozen=True)
class GraphWithPortals:
    """A graph plus an ordered list of portal (boundary) vertices."""

    graph: Graph
    portals: tuple[int, ...]

    def __post_init__(self):
        if len(set(self.portals)) != len(self.portals):
            raise ValueError("portals must be distinct")
        for v in self.portals:
            if not 0 <= v < self.graph.n:
                raise ValueError(f"portal {v} out of range")


def parse_graph(text: str) -> Graph:
    """Parse a PACE `.gr` file body."""
    n = None
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "p":
            if n is not None:
                raise ParseError(f"line {lineno}: duplicate problem line")
            if len(parts) != 4 or parts[1] != "tw":
                raise ParseError(f"line {lineno}: malformed header {line!r}")
            try:
                n = int(parts[2])
                int(parts[3])
            except ValueError:
                raise ParseError(f"line {lineno}: non-integer header fields") from None
            if n < 0:
                raise ParseError(f"line {lineno}: negative vertex count")
            continue
        if n is None:
            raise ParseError(f"line {lineno}: edge before 'p tw' header")
        if len(parts) != 2:
            raise ParseError(f"line {lineno}: malformed edge line {line!r}")
        try:
            u, v = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"line {lineno}: non-integer edge {line!r}") from None
        if u == v:
            raise ParseError(f"line {lineno}: self-loop at vertex {u}")
        if not (1 <= u <= n and 1 <= v <= n):
            raise ParseError(f"line {lineno}: vertex out of range in {line!r}")
        edges.append((u - 1, v - 1))
    if n is None:
        raise ParseError("missing 'p tw' header line")
    return Graph(n, edges)


def graph_to_gr(g: Graph) -> str:
    lines = [f"p tw {g.n} {g.m}"]
    for u, v in sorted(g.edges):
        lines.append(f"{u + 1} {v + 1}")
    return "\n".join(lines) + "\n"


class TreeDecomposition:
    """A tree of bags covering a graph; validated against the three axioms."""

    def __init__(self, bags: Sequence[Iterable[int]], tree_edges: Iterable[tuple[int, int]]):
        self.bags = [frozenset(b) for b in bags]
        self.tree_edges = sorted(
            (min(i, j), max(i, j)) for i, j in tree_edges
        )
        k = len(self.bags)
        adj: list[list[int]] = [[] for _ in range(k)]
        for i, j in self.tree_edges:
            if not (0 <= i < k and 0 <= j < k):
                raise DecompositionError(f"tree edge ({i},{j}) out of range")
            if i == j:
                raise DecompositionError(f"tree self-loop at bag {i}")
            adj[i].append(j)
            adj[j].append(i)
        self.tree_adj = tuple(tuple(sorted(a)) for a in adj)

    @property
    def width(self) -> int:
        if not self.bags:
            return -1
        return max(len(b) for b in self.bags) - 1

    def validate(self, g: Graph) -> None:
        """Check the tree shape and the axioms T1 (cover), T2 (edges),
        T3 (connected per-vertex subtrees); raise naming a witness."""
        k = len(self.bags)
        if k == 0:
            if g.n > 0:
                raise DecompositionError(f"vertex {1} in no bag (T1)")
            return
        if len(self.tree_edges) != k - 1:
            raise DecompositionError(
                f"bag tree has {len(self.tree_edges)} edges for {k} bags; not a tree"
            )
        seen = {0}
        stack = [0]
        while stack:
            x = stack.pop()
            for y in self.tree_adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
        if len(seen) != k:
            raise DecompositionError("bag tree is disconnected")
        covered = set().union(*self.bags) if self.bags else set()
        for v in range(g.n):
            if v not in covered:
                raise DecompositionError(f"vertex {v + 1} in no bag (T1)")
        for u, v in sorted(g.edges):
            if not any(u in b and v in b for b in self.bags):
                raise DecompositionError(f"edge {u + 1}-{v + 1} in no bag (T2)")
        for v in range(g.n):
            nodes = [i for i, b in enumerate(self.bags) if v in b]
            reached = {nodes[0]}
            stack = [nodes[0]]
            node_set = set(nodes)
            while stack:
                x = stack.pop()
                for y in self.tree_adj[x]:
                    if y in node_set and y not in reached:
                        reached.add(y)
                        stack.append(y)
            if len(reached) != len(nodes):
                raise DecompositionError(
                    f"vertex {v + 1} bags do not induce a connected subtree (T3)"
                )

    def __repr__(self):
        return f"TreeDecomposition(bags={len(self.bags)}, width={self.width})"


def parse_decomposition(text: str, g: Graph) -> TreeDecomposition:
    """Parse and validate a PACE `.td` file body against graph `g`."""
    header = None
    bags: dict[int, frozenset[int]] = {}
    edges = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c"):
            continue
        parts = line.split()
        if parts[0] == "s":
            if header is not None:
                raise ParseError(f"line {lineno}: duplicate 's td' line")
            if len(parts) != 5 or parts[1] != "td":
                raise ParseError(f"line {lineno}: malformed 's td' line {line!r}")
            try:
                header = (int(parts[2]), int(parts[3]), int(parts[4]))
            except ValueError:
                raise ParseError(f"line {lineno}: non-integer 's td' fields") from None
            continue
        if header is None:
            raise ParseError(f"line {lineno}: content before 's td' header")
        if parts[0] == "b":
            if len(parts) < 2:
                raise ParseError(f"line {lineno}: malformed bag line {line!r}")
            try:
                bag_id = int(parts[1])
                verts = [int(p) for p in parts[2:]]
            except ValueError:
                raise ParseError(f"line {lineno}: non-integer bag entry") from None
            if bag_id in bags:
                raise ParseError(f"line {lineno}: duplicate bag id {bag_id}")
            for v in verts:
                if not 1 <= v <= g.n:
                    raise ParseError(f"line {lineno}: vertex {v} out of range")
            bags[bag_id] = frozenset(v - 1 for v in verts)
            continue
        if len(parts) != 2:
            raise ParseError(f"line {lineno}: malformed tree edge line {line!r}")
        try:
            i, j = int(parts[0]), int(parts[1])
        except ValueError:
            raise ParseError(f"line {lineno}: non-integer tree edge") from None
        edges.append((i, j))
    if header is None:
        raise ParseError("missing 's td' header line")
    n_bags = header[0]
    if set(bags) != set(range(1, n_bags + 1)):
        raise ParseError(f"expected bag ids 1..{n_bags}, got {sorted(bags)}")
    bag_list = [bags[i] for i in range(1, n_bags + 1)]
    for i, j in edges:
        if not (1 <= i <= n_bags and 1 <= j <= n_bags):
            raise ParseError(f"tree edge ({i},{j}) references unknown bag")
    td = TreeDecomposition(bag_list, [(i - 1, j - 1) for i, j in edges])
    td.validate(g)
    return td


def decomposition_to_td(td: TreeDecomposition, n_vertices: int) -> str:
    k = len(td.bags)
    width_plus = max((len(b) for b in td.bags), default=0)
    lines = [f"s td {k} {width_plus} {n_vertices}"]
    for i, b in enumerate(td.bags, start=1):
        lines.append("b " + " ".join([str(i)] + [str(v + 1) for v in sorted(b)]))
    for i, j in td.tree_edges:
        lines.append(f"{i + 1} {j + 1}")
    return "\n".join(lines) + "\n"


LEAF = "leaf"
INTRODUCE = "introduce"
FORGET = "forget"
JOIN = "join"


class NiceTreeDecomposition:
    """Rooted binary decomposition whose nodes are Leaf / Introduce(v) /
    Forget(v) / Join, with empty root and leaf bags.

    Nodes are stored in arrays indexed by node id; children always have
    smaller ids than their parent, so iterating 0..len-1 is a valid
    post-order (the root is the last node).
    """

    def __init__(self):
        self.kinds: list[str] = []
        self.vertex: list[Optional[int]] = []
        self.children: list[tuple[int, ...]] = []
        self.bags: list[tuple[int, ...]] = []

    def _add(self, kind, vertex, children, bag) -> int:
        self.kinds.append(kind)
        self.vertex.append(vertex)
        self.children.append(tuple(children))
        self.bags.append(tuple(sorted(bag)))
        return len(self.kinds) - 1

    def __len__(self):
        return len(self.kinds)

    @property
    def root(self) -> int:
        return len(self.kinds) - 1

    @property
    def width(self) -> int:
        if not self.bags:
            return -1
        return max(len(b) for b in self.bags) - 1

    def subtree_vertices(self) -> list[frozenset[int]]:
        """V_t per node: vertices introduced in the subtree rooted at t."""
        out: list[frozenset[int]] = []
        for t in range(len(self.kinds)):
            acc = set(self.bags[t])
            for c in self.children[t]:
                acc |= out[c]
            out.append(frozenset(acc))
        return out

    def validate(self, g: Optional[Graph] = None) -> None:
        n_nodes = len(self.kinds)
        if n_nodes == 0:
            raise DecompositionError("empty nice decomposition")
        if self.bags[self.root]:
            raise DecompositionError("root bag not empty")
        seen_child = set()
        for t in range(n_nodes):
            kind, bag, kids = self.kinds[t], self.bags[t], self.children[t]
            for c in kids:
                if c >= t:
                    raise DecompositionError("children must precede parents")
                if c in seen_child:
                    raise DecompositionError(f"node {c} has two parents")
                seen_child.add(c)
            if kind == LEAF:
                if kids or bag:
                    raise DecompositionError(f"leaf node {t} malformed")
            elif kind == INTRODUCE:
                if len(kids) != 1:
                    raise DecompositionError(f"introduce node {t} needs one child")
                v, cb = self.vertex[t], self.bags[kids[0]]
                if v is None or v in cb or tuple(sorted(set(cb) | {v})) != bag:
                    raise DecompositionError(f"introduce node {t} bag mismatch")
            elif kind == FORGET:
                if len(kids) != 1:
                    raise DecompositionError(f"forget node {t} needs one child")
                v, cb = self.vertex[t], self.bags[kids[0]]
                if v is None or v not in cb or tuple(sorted(set(cb) - {v})) != bag:
                    raise DecompositionError(f"forget node {t} bag mismatch")
            elif kind == JOIN:
                if len(kids) != 2:
                    raise DecompositionError(f"join node {t} needs two children")
                if self.bags[kids[0]] != bag or self.bags[kids[1]] != bag:
                    raise DecompositionError(f"join node {t} children bags differ")
            else:
                raise DecompositionError(f"unknown node kind {kind}")
        if g is not None:
            self._validate_axioms(g)

    def _validate_axioms(self, g: Graph) -> None:
        td = self.as_tree_decomposition()
        td.validate(g)
        vts = self.subtree_vertices()
        if g.n > 0 and len(vts[self.root]) != g.n:
            raise DecompositionError("root subtree misses vertices (T1)")

    def as_tree_decomposition(self) -> TreeDecomposition:
        edges = []
        for t in range(len(self.kinds)):
            for c in self.children[t]:
                edges.append((c, t))
        return TreeDecomposition([set(b) for b in self.bags], edges)

    def __repr__(self):
        return f"NiceTreeDecomposition(nodes={len(self)}, width={self.width})"


def make_nice(td: TreeDecomposition) -> NiceTreeDecomposition:
    """Normalize a decomposition: binary tree, empty root/leaf bags,
    one-vertex introduce/forget steps, equal-bag joins.  Width is preserved.

    The tree is rooted at bag 0; children are visited in (bag, id)
    lexicographic order so the output is reproducible.
    """
    nice = NiceTreeDecomposition()
    if not td.bags:
        nice._add(LEAF, None, (), ())
        return nice

    def chain(nid: int, src: frozenset[int], dst: frozenset[int]) -> int:
        """Append forget/introduce steps turning bag src into bag dst."""
        cur = set(src)
        for v in sorted(src - dst):
            cur.discard(v)
            nid = nice._add(FORGET, v, (nid,), cur)
        for v in sorted(dst - src):
            cur.add(v)
            nid = nice._add(INTRODUCE, v, (nid,), cur)
        return nid

    def leaf_chain(dst: frozenset[int]) -> int:
        nid = nice._add(LEAF, None, (), ())
        return chain(nid, frozenset(), dst)

    root_bag_node = 0
    # Iterative post-order over the rooted bag tree.
    order = []
    parent = {root_bag_node: -1}
    stack = [root_bag_node]
    while stack:
        x = stack.pop()
        order.append(x)
        kids = sorted(
            (y for y in td.tree_adj[x] if y != parent[x]),
            key=lambda y: (tuple(sorted(td.bags[y])), y),
        )
        for y in kids:
            parent[y] = x
            stack.append(y)
    done: dict[int, int] = {}
    for x in reversed(order):
        kids = sorted(
            (y for y in td.tree_adj[x] if y != parent[x]),
            key=lambda y: (tuple(sorted(td.bags[y])), y),
        )
        bag = td.bags[x]
        if not kids:
            done[x] = leaf_chain(bag)
            continue
        tops = [chain(done[y], td.bags[y], bag) for y in kids]
        cur = tops[0]
        for other in tops[1:]:
            cur = nice._add(JOIN, None, (cur, other), bag)
        done[x] = cur
    # Forget everything left in the root bag.
    chain(done[root_bag_node], td.bags[root_bag_node], frozenset())
    if nice.bags[nice.root]:
        raise AssertionError("root bag not empty after normalization")
    return nice


def heuristic_decomposition(g: Graph) -> TreeDecomposition:
    """Min-fill elimination-ordering decomposition.

    No optimality promise: the width is an upper bound on the true
    treewidth.  Ties break toward the smallest vertex id so runs are
    reproducible.
    """
    if g.n == 0:
        return TreeDecomposition([], [])
    adj: list[set[int]] = [set(g.neighbors(v)) for v in range(g.n)]
    alive = set(range(g.n))
    bags: list[frozenset[int]] = []
    elim_pos: dict[int, int] = {}
    bag_neighbors: list[set[int]] = []
    for step in range(g.n):
        best_v, best_fill = None, None
        for v in sorted(alive):
            nb = adj[v] & alive
            fill = 0
            nb_list = sorted(nb)
            for i, u in enumerate(nb_list):
                for w in nb_list[i + 1 :]:
                    if w not in adj[u]:
                        fill += 1
            if best_fill is None or fill < best_fill:
                best_v, best_fill = v, fill
        v = best_v
        nb = adj[v] & alive
        bags.append(frozenset(nb | {v}))
        bag_neighbors.append(set(nb))
        elim_pos[v] = step
        nb_list = sorted(nb)
        for i, u in enumerate(nb_list):
            for w in nb_list[i + 1 :]:
                adj[u].add(w)
                adj[w].add(u)
        alive.discard(v)
    edges = []
    for i, nb in enumerate(bag_neighbors):
        if nb:
            p = min(elim_pos[u] for u in nb)
            edges.append((i, p))
        elif i + 1 < len(bags):
            edges.append((i, i + 1))
    td = TreeDecomposition(bags, edges)
    td.validate(g)
    return td

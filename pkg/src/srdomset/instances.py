"""Instance generators: SAT reduction graphs, grids, random graphs, and the
comb family used for scaling benchmarks.

The two SAT reductions build, from a CNF formula, a graph whose
Reflexive-AllOff (resp. AllOff) instances have a solution within the target
size iff the formula is satisfiable, together with explicit path
decompositions meeting the analytic width bounds.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from itertools import combinations
from typing import Optional

from .graphs import Graph, ParseError, TreeDecomposition
from .residues import ProblemSpec, spec as make_spec


@dataclass(frozen=True)
class CnfFormula:
    """CNF with 1-based variables; a clause is a list of nonzero signed
    literals."""

    n_vars: int
    clauses: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        for ci, clause in enumerate(self.clauses):
            if not clause:
                raise ValueError(f"clause {ci + 1} is empty")
            for lit in clause:
                if lit == 0 or abs(lit) > self.n_vars:
                    raise ValueError(f"literal {lit} out of range in clause {ci + 1}")

    @property
    def n_clauses(self) -> int:
        return len(self.clauses)


def parse_dimacs(text: str) -> CnfFormula:
    """Parse DIMACS CNF: `p cnf <vars> <clauses>` header, clauses as
    0-terminated literal sequences (may span lines)."""
    n_vars = None
    declared = None
    clauses: list[tuple[int, ...]] = []
    current: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("c") or line.startswith("%"):
            continue
        if line.startswith("p"):
            parts = line.split()
            if len(parts) != 4 or parts[1] != "cnf":
                raise ParseError(f"line {lineno}: malformed problem line {line!r}")
            n_vars, declared = int(parts[2]), int(parts[3])
            continue
        if n_vars is None:
            raise ParseError(f"line {lineno}: clause before 'p cnf' header")
        for tok in line.split():
            lit = int(tok)
            if lit == 0:
                clauses.append(tuple(current))
                current = []
            else:
                current.append(lit)
    if n_vars is None:
        raise ParseError("missing 'p cnf' header")
    if current:
        clauses.append(tuple(current))
    if declared is not None and declared != len(clauses):
        raise ParseError(f"header declares {declared} clauses, found {len(clauses)}")
    return CnfFormula(n_vars, tuple(clauses))


def cnf_to_dimacs(formula: CnfFormula) -> str:
    lines = [f"p cnf {formula.n_vars} {formula.n_clauses}"]
    for clause in formula.clauses:
        lines.append(" ".join(str(l) for l in clause) + " 0")
    return "\n".join(lines) + "\n"


def sat_brute_force(formula: CnfFormula) -> bool:
    """Truth-table satisfiability check (the oracle side of the reduction
    equivalence tests)."""
    for assign in range(1 << formula.n_vars):
        ok = True
        for clause in formula.clauses:
            if not any(
                ((assign >> (abs(l) - 1)) & 1) == (1 if l > 0 else 0) for l in clause
            ):
                ok = False
                break
        if ok:
            return True
    return False


def random_cnf(
    n_vars: int, n_clauses: int, k: int, seed: int
) -> CnfFormula:
    rng = random.Random(seed)
    clauses = []
    for _ in range(n_clauses):
        vs = rng.sample(range(1, n_vars + 1), min(k, n_vars))
        clauses.append(tuple(v if rng.random() < 0.5 else -v for v in vs))
    return CnfFormula(n_vars, tuple(clauses))


@dataclass
class ReductionOutput:
    graph: Graph
    decomposition: TreeDecomposition  # tree is a path
    target_size: int
    roles: dict[int, str]
    k: int
    spec: ProblemSpec
    formula: CnfFormula


def _pad_clauses(formula: CnfFormula, k: Optional[int]) -> tuple[int, list[tuple[int, ...]]]:
    """Pad every clause to exactly k literals by duplicating its last
    literal; duplicated positions are distinct slots of the clause gadget."""
    if formula.n_clauses == 0:
        raise ValueError("empty formula")
    want = k if k is not None else max(len(c) for c in formula.clauses)
    padded = []
    for clause in formula.clauses:
        if len(clause) > want:
            raise ValueError(f"clause longer than k={want}")
        padded.append(clause + (clause[-1],) * (want - len(clause)))
    return want, padded


def _proper_subsets(k: int) -> list[tuple[int, ...]]:
    out = []
    for size in range(k):
        out.extend(combinations(range(1, k + 1), size))
    return out


def gen_reflexive_alloff(formula: CnfFormula, k: Optional[int] = None) -> ReductionOutput:
    """Reflexive-AllOff reduction: per-variable edge gadgets, per-clause
    literal vertices plus a clique of proper-subset vertices, one shared
    negation path q0-q1-q2; target n + m + 1, pathwidth <= 2^k + k + n."""
    k, clauses = _pad_clauses(formula, k)
    n, mcl = formula.n_vars, formula.n_clauses
    roles: dict[int, str] = {}
    nid = 0

    def new_vertex(role: str) -> int:
        nonlocal nid
        roles[nid] = role
        nid += 1
        return nid - 1

    v = {i: new_vertex(f"v_{i}") for i in range(1, n + 1)}
    vbar = {i: new_vertex(f"vbar_{i}") for i in range(1, n + 1)}
    edges = [(v[i], vbar[i]) for i in range(1, n + 1)]

    subsets = _proper_subsets(k)
    t: dict[tuple[int, int], int] = {}
    s: dict[tuple[int, tuple[int, ...]], int] = {}
    for j in range(1, mcl + 1):
        for ell in range(1, k + 1):
            t[(j, ell)] = new_vertex(f"t_{j}_{ell}")
        for L in subsets:
            s[(j, L)] = new_vertex("s_%d_{%s}" % (j, ",".join(map(str, L))))
        for L in subsets:
            for ell in L:
                edges.append((s[(j, L)], t[(j, ell)]))
        svs = [s[(j, L)] for L in subsets]
        for a in range(len(svs)):
            for b in range(a + 1, len(svs)):
                edges.append((svs[a], svs[b]))
    q0 = new_vertex("q0")
    q1 = new_vertex("q1")
    q2 = new_vertex("q2")
    edges.append((q0, q1))
    edges.append((q1, q2))
    for j, clause in enumerate(clauses, start=1):
        for ell, lit in enumerate(clause, start=1):
            edges.append((t[(j, ell)], v[abs(lit)]))
            if lit < 0:
                edges.append((t[(j, ell)], q1))
    graph = Graph(nid, edges)

    spine = set(v.values()) | {q1}
    bags = []
    for i in range(1, n + 1):
        bags.append({v[i], vbar[i]} | spine)
    for j in range(1, mcl + 1):
        gadget = {t[(j, ell)] for ell in range(1, k + 1)}
        gadget |= {s[(j, L)] for L in subsets}
        bags.append(gadget | spine)
    bags.append({q0, q1, q2} | spine)
    td = TreeDecomposition(bags, [(i, i + 1) for i in range(len(bags) - 1)])
    td.validate(graph)
    assert td.width <= 2**k + k + n
    return ReductionOutput(
        graph, td, n + mcl + 1, roles, k, make_spec(0, 1, 2), formula
    )


def gen_alloff(formula: CnfFormula, k: Optional[int] = None) -> ReductionOutput:
    """AllOff reduction: three-vertex variable paths, clause gadgets with a
    'happy' vertex adjacent to all subset vertices (no subset clique);
    target 2m + 2n, pathwidth <= n + k + 1."""
    k, clauses = _pad_clauses(formula, k)
    n, mcl = formula.n_vars, formula.n_clauses
    roles: dict[int, str] = {}
    nid = 0

    def new_vertex(role: str) -> int:
        nonlocal nid
        roles[nid] = role
        nid += 1
        return nid - 1

    v = {i: new_vertex(f"v_{i}") for i in range(1, n + 1)}
    w = {i: new_vertex(f"w_{i}") for i in range(1, n + 1)}
    vbar = {i: new_vertex(f"vbar_{i}") for i in range(1, n + 1)}
    edges = []
    for i in range(1, n + 1):
        edges.append((v[i], w[i]))
        edges.append((w[i], vbar[i]))

    subsets = _proper_subsets(k)
    t: dict[tuple[int, int], int] = {}
    s: dict[tuple[int, tuple[int, ...]], int] = {}
    h: dict[int, int] = {}
    for j in range(1, mcl + 1):
        for ell in range(1, k + 1):
            t[(j, ell)] = new_vertex(f"t_{j}_{ell}")
        for L in subsets:
            s[(j, L)] = new_vertex("s_%d_{%s}" % (j, ",".join(map(str, L))))
        h[j] = new_vertex(f"h_{j}")
        for L in subsets:
            for ell in L:
                edges.append((s[(j, L)], t[(j, ell)]))
            edges.append((h[j], s[(j, L)]))
    for j, clause in enumerate(clauses, start=1):
        for ell, lit in enumerate(clause, start=1):
            edges.append((t[(j, ell)], v[abs(lit)]))
            if lit < 0:
                edges.append((t[(j, ell)], h[j]))
    graph = Graph(nid, edges)

    spine = set(v.values())
    bags = []
    for i in range(1, n + 1):
        bags.append({v[i], w[i], vbar[i]} | spine)
    for j in range(1, mcl + 1):
        lits = {t[(j, ell)] for ell in range(1, k + 1)}
        for L in subsets:
            bags.append(lits | {h[j], s[(j, L)]} | spine)
    td = TreeDecomposition(bags, [(i, i + 1) for i in range(len(bags) - 1)])
    td.validate(graph)
    assert td.width <= n + k + 1
    return ReductionOutput(
        graph, td, 2 * mcl + 2 * n, roles, k, make_spec(1, 1, 2), formula
    )


def gen_grid(rows: int, cols: int) -> tuple[Graph, TreeDecomposition]:
    """Grid graph plus a column-sweep (staircase) path decomposition of
    width min(rows, cols)."""
    if rows < 1 or cols < 1:
        raise ValueError("grid dimensions must be >= 1")
    transpose = rows > cols
    r, c = (cols, rows) if transpose else (rows, cols)

    def vid(i: int, j: int) -> int:
        # Vertex ids always refer to the caller's (rows, cols) layout.
        return (j * cols + i) if transpose else (i * cols + j)

    edges = []
    for i in range(r):
        for j in range(c):
            if i + 1 < r:
                edges.append((vid(i, j), vid(i + 1, j)))
            if j + 1 < c:
                edges.append((vid(i, j), vid(i, j + 1)))
    graph = Graph(rows * cols, edges)
    bags = []
    if c == 1:
        bags.append({vid(i, 0) for i in range(r)})
    else:
        for j in range(c - 1):
            for i in range(r):
                bag = {vid(ii, j) for ii in range(i, r)}
                bag |= {vid(ii, j + 1) for ii in range(i + 1)}
                bags.append(bag)
    td = TreeDecomposition(bags, [(i, i + 1) for i in range(len(bags) - 1)])
    td.validate(graph)
    assert td.width == (min(rows, cols) if rows * cols > 1 else 0)
    return graph, td


def gen_random(n: int, edge_prob: float, seed: int) -> Graph:
    """Seeded Erdos-Renyi sample; identical graphs for identical seeds."""
    if not 0 <= edge_prob <= 1:
        raise ValueError("edge probability must lie in [0, 1]")
    rng = random.Random(seed)
    edges = [
        (u, v_)
        for u in range(n)
        for v_ in range(u + 1, n)
        if rng.random() < edge_prob
    ]
    return Graph(n, edges)


@dataclass
class CombInstance:
    """A comb scaling instance: graph, tree decomposition with one join,
    shift vector, and the m=3 spec it is built for."""

    graph: Graph
    decomposition: TreeDecomposition
    shifts: list[int]
    spec: ProblemSpec
    width: int


def gen_comb(width: int, m: int = 3) -> CombInstance:
    """Comb instance of emitted decomposition width `width` for modulus m.

    A spine of width-1 vertices carries gadget teeth split over two
    decomposition branches that meet in a single join at the spine bag.
    Mute teeth pin every spine vertex unselected (one sigma-vector), and
    exactly-one choice hubs spread the spine weight-vectors: branch one
    realizes all m^(width-1) count vectors at a single size index, branch
    two all 2^(width-1), so the join is one group, one size pair, and a
    full m^(width-1) convolution table.
    """
    if m < 3:
        # The mute chains force their host unselected only when two
        # selected neighbors cannot sum to 0 mod m.
        raise ValueError("comb family needs modulus >= 3")
    if width < 3:
        raise ValueError("comb width must be >= 3")
    w = width - 2
    sp = make_spec(0, 0, m)
    n = 0
    edges: list[tuple[int, int]] = []
    shifts: list[int] = []

    def new_vertex(shift: int = 0) -> int:
        nonlocal n
        shifts.append(shift)
        n += 1
        return n - 1

    spine = [new_vertex() for _ in range(w)]
    # A muted pad vertex sits in every bag purely to realize the requested
    # width; it never carries states beyond rho_0.
    pad = new_vertex()

    def mute(host: int) -> list[set[int]]:
        """Two-vertex chain forcing `host` (and itself) unselected."""
        g = new_vertex()
        t = new_vertex()
        edges.append((host, g))
        edges.append((g, t))
        return [{g, t}]

    def choice_hub(target: int) -> list[set[int]]:
        """Exactly one of two free vertices selected; one of them feeds
        `target`.  Contributes size exactly 1 and count 0 or 1."""
        u = new_vertex((-1) % m)  # hub must see exactly one selected neighbor
        bags = []
        g = new_vertex()
        t = new_vertex()
        edges.append((u, g))
        edges.append((g, t))
        bags.append({g, t})
        bags.append({u, g})
        a = new_vertex()
        b_ = new_vertex()
        edges.append((u, a))
        edges.append((u, b_))
        edges.append((a, target))
        bags.append({u, a})
        bags.append({u, b_})
        return bags

    spine_set = set(spine) | {pad}
    branch_bags: list[list[set[int]]] = [[], []]
    # Branch 1: per spine vertex a mute plus (m-1) choice hubs -> counts
    # 0..m-1 at one size; branch 2: one hub per spine vertex -> counts 0/1.
    for chunk in mute(pad):
        branch_bags[0].append(chunk | spine_set)
    for v in spine:
        for chunk in mute(v):
            branch_bags[0].append(chunk | spine_set)
        for _ in range(m - 1):
            for chunk in choice_hub(v):
                branch_bags[0].append(chunk | spine_set)
    for v in spine:
        for chunk in choice_hub(v):
            branch_bags[1].append(chunk | spine_set)

    bags = [set(spine_set)]
    tree_edges = []
    for chunks in branch_bags:
        prev = 0
        for chunk in chunks:
            bags.append(chunk)
            tree_edges.append((prev, len(bags) - 1))
            prev = len(bags) - 1
    graph = Graph(n, edges)
    td = TreeDecomposition(bags, tree_edges)
    td.validate(graph)
    assert td.width == width, (td.width, width)
    return CombInstance(graph, td, shifts, sp, width)

"""Dynamic program over a nice tree decomposition.

Per node t and size index i the table holds the language L[t,i]: every
portal-state string witnessed by a partial solution of (G[V_t], X_t) that
selects exactly i already-forgotten vertices.  Leaf, introduce, forget, and
join rules transform these tables bottom-up; the answer for size s is
whether the empty string survives at the root with index s.

Strings are packed base-(2m) codes; a node's whole table is two parallel
arrays (codes, sizes) so every rule is a handful of vectorized passes.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping, Optional, Sequence, Union

import numpy as np

from .combine import combine_codes
from .graphs import (
    FORGET,
    INTRODUCE,
    JOIN,
    LEAF,
    Graph,
    NiceTreeDecomposition,
    TreeDecomposition,
    make_nice,
)
from .residues import ALLOFF, REFLEXIVE_ALLOFF, ProblemSpec
from .sparse import Language

ShiftVector = Sequence[int]


@dataclass
class DPOptions:
    join: str = "fast"  # "fast" | "naive" pairwise baseline
    force_convolution: bool = False
    threads: int = 1
    debug: bool = False
    keep_tables: bool = False
    collect_state_bound: bool = True
    # When set, every join-node combination input pair (first child already
    # hat-corrected) is appended here as Language objects.
    capture_joins: Optional[list] = None


@dataclass
class SolveReport:
    feasible: list[bool]
    min_size: Optional[int]
    max_size: Optional[int]
    decision: bool
    stats: dict
    spec: ProblemSpec
    shifted: bool = False
    tables: Optional[list] = None

    def to_json(self) -> dict:
        out = {"schema": 1}
        out.update(self.spec.to_json())
        out["feasible"] = [bool(b) for b in self.feasible]
        out["min"] = self.min_size
        out["max"] = self.max_size
        out["decision"] = bool(self.decision)
        out["stats"] = self.stats
        return out


@lru_cache(maxsize=256)
def _powers(base: int, n: int) -> np.ndarray:
    return base ** np.arange(n + 1, dtype=np.int64)


_EMPTY = np.empty(0, dtype=np.int64)


def _dedupe(codes: np.ndarray, sizes: np.ndarray, code_bound: int):
    if len(codes) <= 1:
        return codes, sizes
    keys = np.unique(sizes * code_bound + codes)
    return keys % code_bound, keys // code_bound


def _introduce_codes(codes, sizes, m, child_n, p, nbr_pos):
    """Both extensions of every child string: the new vertex unselected with
    its bag-neighbor count, or selected with that count and each selected
    bag-neighbor's count bumped by one."""
    B = 2 * m
    P = _powers(B, child_n + 1)
    c = np.zeros(len(codes), dtype=np.int64)
    for q in nbr_pos:
        c += (codes // P[q]) % B >= m
    cmod = c % m
    lowmod = P[p]
    low = codes % lowmod
    high = codes // lowmod
    shifted = high * (lowmod * B) + low
    rho_codes = shifted + cmod * lowmod
    bumped = codes
    for q in nbr_pos:
        d = (bumped // P[q]) % B
        cnt = d % m
        bumped = bumped + ((d - cnt + (cnt + 1) % m) - d) * P[q]
    low2 = bumped % lowmod
    high2 = bumped // lowmod
    sig_codes = high2 * (lowmod * B) + low2 + (m + cmod) * lowmod
    # The two branches differ in the new digit's kind, and each branch is
    # injective, so the concatenation is duplicate-free.
    return np.concatenate((rho_codes, sig_codes)), np.concatenate((sizes, sizes))


def _forget_codes(codes, sizes, m, child_n, p, a_sig, a_rho, shift_v, code_bound):
    """Keep strings whose forgotten vertex has a lawful final count; a
    selected forget bumps the size index."""
    B = 2 * m
    P = _powers(B, child_n)
    d = (codes // P[p]) % B
    rho_mask = (d < m) & ((d + shift_v) % m == a_rho)
    sig_mask = (d >= m) & ((d - m + shift_v) % m == a_sig)
    lowmod = P[p]

    def strip(cs):
        return (cs // (lowmod * B)) * lowmod + cs % lowmod

    out_codes = np.concatenate((strip(codes[rho_mask]), strip(codes[sig_mask])))
    out_sizes = np.concatenate((sizes[rho_mask], sizes[sig_mask] + 1))
    return _dedupe(out_codes, out_sizes, code_bound)


def _hat_codes(codes, m, n, nbr_positions):
    """Join correction on the first child: subtract each vertex's selected
    bag-neighbor count so bag-internal adjacencies are not counted twice."""
    B = 2 * m
    P = _powers(B, n)
    out = codes.copy()
    for j, nbrs in enumerate(nbr_positions):
        if not len(nbrs):
            continue
        s = np.zeros(len(codes), dtype=np.int64)
        for q in nbrs:
            s += (codes // P[q]) % B >= m
        d = (out // P[j]) % B
        cnt = d % m
        out += ((d - cnt + (cnt - s) % m) - d) * P[j]
    return out


def _split_by_size(codes, sizes):
    if not len(codes):
        return {}
    order = np.argsort(sizes, kind="stable")
    sc, ss = codes[order], sizes[order]
    cuts = np.flatnonzero(np.diff(ss)) + 1
    starts = np.concatenate(([0], cuts))
    ends = np.concatenate((cuts, [len(ss)]))
    return {int(ss[s]): sc[s:e] for s, e in zip(starts, ends)}


class CompiledDecomposition:
    """Spec-independent per-node access plans for one (graph, nice td) pair."""

    def __init__(self, graph: Graph, ntd: NiceTreeDecomposition):
        self.graph = graph
        self.ntd = ntd
        self.plans = []
        for t in range(len(ntd)):
            kind = ntd.kinds[t]
            bag = ntd.bags[t]
            if kind == INTRODUCE:
                child_bag = ntd.bags[ntd.children[t][0]]
                v = ntd.vertex[t]
                cpos = {u: i for i, u in enumerate(child_bag)}
                nbr = np.array(
                    [cpos[u] for u in graph.neighbors(v) if u in cpos],
                    dtype=np.int64,
                )
                self.plans.append((kind, v, bag.index(v), nbr, len(child_bag)))
            elif kind == FORGET:
                child_bag = ntd.bags[ntd.children[t][0]]
                v = ntd.vertex[t]
                self.plans.append((kind, v, child_bag.index(v), None, len(child_bag)))
            elif kind == JOIN:
                pos = {u: i for i, u in enumerate(bag)}
                nbrs = [
                    np.array(
                        [pos[u] for u in graph.neighbors(v) if u in pos],
                        dtype=np.int64,
                    )
                    for v in bag
                ]
                self.plans.append((kind, None, None, nbrs, len(bag)))
            else:
                self.plans.append((kind, None, None, None, 0))


def compile_decomposition(graph: Graph, ntd: NiceTreeDecomposition) -> CompiledDecomposition:
    return CompiledDecomposition(graph, ntd)


def _check_encoding(m: int, width: int, n: int) -> int:
    """Crash early if packed codes cannot address the widest bag."""
    code_bound = (2 * m) ** (width + 1)
    if code_bound * (n + 2) >= 2**63:
        raise ValueError(
            f"bag size {width + 1} with modulus {m} exceeds the packed "
            f"64-bit encoding; this solver handles m**bag tables only"
        )
    return code_bound


def solve(
    graph: Graph,
    decomposition: Union[TreeDecomposition, NiceTreeDecomposition, CompiledDecomposition],
    spec: ProblemSpec,
    shifts: Optional[ShiftVector] = None,
    options: Optional[DPOptions] = None,
) -> SolveReport:
    """Decide feasibility simultaneously for every solution size.

    With a shift vector pi, lawfulness of a count c at vertex v becomes
    (c + pi(v)) in sigma/rho; all-zero shifts reproduce the plain problem.
    """
    options = options or DPOptions()
    n = graph.n
    m = spec.m
    if shifts is not None:
        shifts = list(shifts)
        if len(shifts) != n:
            raise ValueError("shift vector length must equal vertex count")
        if any(not 0 <= s < max(m, 1) for s in shifts):
            raise ValueError("shift entries must lie in [0, m)")
    if m == 1:
        # Both sets accept every count: any subset works.
        feasible = [True] * (n + 1)
        stats = {
            "nodes": 0,
            "width": None,
            "trivial": True,
            "max_language_size": 0,
            "state_bound_violations": 0,
            "time_us": {},
            "join_us": 0,
            "join_convolutions": 0,
            "join_pairwise": 0,
        }
        return SolveReport(
            feasible, 0, n, True, stats, spec, shifted=shifts is not None
        )

    if isinstance(decomposition, CompiledDecomposition):
        compiled = decomposition
    else:
        if isinstance(decomposition, NiceTreeDecomposition):
            ntd = decomposition
            if options.debug:
                ntd.validate(graph)
        else:
            decomposition.validate(graph)
            ntd = make_nice(decomposition)
        compiled = CompiledDecomposition(graph, ntd)
    ntd = compiled.ntd
    code_bound = _check_encoding(m, ntd.width, n)
    a_sig, a_rho = spec.sigma.a, spec.rho.a
    shift_arr = shifts if shifts is not None else [0] * n

    rows: list = [None] * len(ntd)
    tables: Optional[list] = [None] * len(ntd) if options.keep_tables else None
    time_by_kind = {LEAF: 0, INTRODUCE: 0, FORGET: 0, JOIN: 0}
    counters: dict = {}
    max_lang = 0
    bound_violations = 0
    join_ns = 0

    for t in range(len(ntd)):
        kind = ntd.kinds[t]
        plan = compiled.plans[t]
        t0 = time.perf_counter_ns()
        if kind == LEAF:
            codes, sizes = np.zeros(1, dtype=np.int64), np.zeros(1, dtype=np.int64)
        elif kind == INTRODUCE:
            c = ntd.children[t][0]
            ccodes, csizes = rows[c]
            _, v, p, nbr, child_n = plan
            if len(ccodes):
                codes, sizes = _introduce_codes(ccodes, csizes, m, child_n, p, nbr)
            else:
                codes, sizes = _EMPTY, _EMPTY
        elif kind == FORGET:
            c = ntd.children[t][0]
            ccodes, csizes = rows[c]
            _, v, p, _, child_n = plan
            if len(ccodes):
                codes, sizes = _forget_codes(
                    ccodes, csizes, m, child_n, p, a_sig, a_rho, shift_arr[v], code_bound
                )
            else:
                codes, sizes = _EMPTY, _EMPTY
        else:  # JOIN
            c1, c2 = ntd.children[t]
            codes1, sizes1 = rows[c1]
            codes2, sizes2 = rows[c2]
            _, _, _, nbrs, bag_n = plan
            if len(codes1) and len(codes2):
                hat1 = _hat_codes(codes1, m, bag_n, nbrs)
                parts_c, parts_s = [], []
                for j, cj in _split_by_size(hat1, sizes1).items():
                    for k, ck in _split_by_size(codes2, sizes2).items():
                        if options.capture_joins is not None:
                            options.capture_joins.append(
                                (
                                    Language(m, ntd.bags[t], cj),
                                    Language(m, ntd.bags[t], ck),
                                )
                            )
                        out = combine_codes(
                            cj,
                            ck,
                            bag_n,
                            m,
                            mode=options.join,
                            force_convolution=options.force_convolution,
                            threads=options.threads,
                            debug=options.debug,
                            counters=counters,
                        )
                        if len(out):
                            parts_c.append(out)
                            parts_s.append(np.full(len(out), j + k, dtype=np.int64))
                if parts_c:
                    codes, sizes = _dedupe(
                        np.concatenate(parts_c), np.concatenate(parts_s), code_bound
                    )
                else:
                    codes, sizes = _EMPTY, _EMPTY
            else:
                codes, sizes = _EMPTY, _EMPTY
        elapsed = time.perf_counter_ns() - t0
        time_by_kind[kind] += elapsed
        if kind == JOIN:
            join_ns += elapsed

        rows[t] = (codes, sizes)
        if len(codes):
            if options.collect_state_bound:
                counts = np.unique(sizes, return_counts=True)[1]
                biggest = int(counts.max())
                max_lang = max(max_lang, biggest)
                if biggest > m ** len(ntd.bags[t]):
                    bound_violations += 1
            else:
                max_lang = max(max_lang, len(codes))
        if tables is not None:
            bag = ntd.bags[t]
            tables[t] = {
                i: Language(m, bag, cs) for i, cs in _split_by_size(codes, sizes).items()
            }
        for c in ntd.children[t]:
            rows[c] = None

    root_codes, root_sizes = rows[ntd.root]
    feasible = [False] * (n + 1)
    for s in root_sizes[root_codes == 0]:
        feasible[int(s)] = True
    hits = [s for s, ok in enumerate(feasible) if ok]
    stats = {
        "nodes": len(ntd),
        "width": ntd.width,
        "max_language_size": max_lang,
        "state_bound_violations": bound_violations if options.collect_state_bound else None,
        "time_us": {k: v // 1000 for k, v in time_by_kind.items()},
        "join_us": join_ns // 1000,
        "join_convolutions": counters.get("convolutions", 0),
        "join_pairwise": counters.get("pairwise", 0),
    }
    return SolveReport(
        feasible,
        hits[0] if hits else None,
        hits[-1] if hits else None,
        bool(hits),
        stats,
        spec,
        shifted=shifts is not None,
        tables=tables,
    )


def solve_lights_out(
    graph: Graph,
    decomposition,
    variant: str,
    initial_pattern: Optional[Sequence[bool]] = None,
    options: Optional[DPOptions] = None,
) -> SolveReport:
    """Minimum number of presses turning every lamp off.

    Reflexive presses toggle the pressed lamp too (sigma = EVEN, rho = ODD);
    plain presses only toggle the neighbors (sigma = rho = ODD).  A lamp
    that starts off needs an even toggle count, encoded as shift 1 at that
    vertex; lamps starting on (the default) get shift 0.
    """
    if variant == "reflexive":
        spec = REFLEXIVE_ALLOFF
    elif variant == "plain":
        spec = ALLOFF
    else:
        raise ValueError(f"unknown variant {variant!r}")
    if initial_pattern is None:
        shifts = [0] * graph.n
    else:
        if len(initial_pattern) != graph.n:
            raise ValueError("pattern length must equal vertex count")
        shifts = [0 if on else 1 for on in initial_pattern]
    return solve(graph, decomposition, spec, shifts=shifts, options=options)


# ---------------------------------------------------------------------------
# Language-level views of the four node rules (test and inspection surface;
# the solve loop above uses the packed-array forms directly).
# ---------------------------------------------------------------------------

Row = Mapping[int, Language]


def _row_to_arrays(row: Row):
    parts_c, parts_s = [], []
    index = None
    m = None
    for i, lang in row.items():
        index, m = lang.index, lang.m
        parts_c.append(lang.codes)
        parts_s.append(np.full(len(lang.codes), i, dtype=np.int64))
    if not parts_c:
        return _EMPTY, _EMPTY, index, m
    return np.concatenate(parts_c), np.concatenate(parts_s), index, m


def _arrays_to_row(codes, sizes, index, m) -> dict[int, Language]:
    return {i: Language(m, index, cs) for i, cs in _split_by_size(codes, sizes).items()}


def leaf_rule(m: int) -> dict[int, Language]:
    """L[t,0] = {empty string}; all other sizes empty."""
    return {0: Language(m, (), np.zeros(1, dtype=np.int64))}


def introduce_rule(child_row: Row, v: int, graph: Graph) -> dict[int, Language]:
    codes, sizes, index, m = _row_to_arrays(child_row)
    if index is None:
        raise ValueError("child row must contain at least one language")
    if v in index:
        raise ValueError(f"vertex {v} already in the bag")
    new_index = tuple(sorted(set(index) | {v}))
    cpos = {u: i for i, u in enumerate(index)}
    nbr = np.array([cpos[u] for u in graph.neighbors(v) if u in cpos], dtype=np.int64)
    if not len(codes):
        return {}
    out_c, out_s = _introduce_codes(codes, sizes, m, len(index), new_index.index(v), nbr)
    return _arrays_to_row(out_c, out_s, new_index, m)


def forget_rule(
    child_row: Row,
    v: int,
    spec: ProblemSpec,
    shift: int = 0,
) -> dict[int, Language]:
    codes, sizes, index, m = _row_to_arrays(child_row)
    if index is None:
        raise ValueError("child row must contain at least one language")
    if v not in index:
        raise ValueError(f"vertex {v} not in the bag")
    new_index = tuple(u for u in index if u != v)
    if not len(codes):
        return {}
    out_c, out_s = _forget_codes(
        codes, sizes, m, len(index), index.index(v), spec.sigma.a, spec.rho.a, shift,
        (2 * m) ** len(index),
    )
    return _arrays_to_row(out_c, out_s, new_index, m)


def join_rule(
    row1: Row,
    row2: Row,
    graph: Graph,
    options: Optional[DPOptions] = None,
) -> dict[int, Language]:
    options = options or DPOptions()
    codes1, sizes1, index1, m1 = _row_to_arrays(row1)
    codes2, sizes2, index2, m2 = _row_to_arrays(row2)
    if index1 is None or index2 is None:
        raise ValueError("join rows must contain at least one language")
    if index1 != index2 or m1 != m2:
        raise ValueError("join children must share bag and modulus")
    if not len(codes1) or not len(codes2):
        return {}
    pos = {u: i for i, u in enumerate(index1)}
    nbrs = [
        np.array([pos[u] for u in graph.neighbors(v) if u in pos], dtype=np.int64)
        for v in index1
    ]
    hat1 = _hat_codes(codes1, m1, len(index1), nbrs)
    parts_c, parts_s = [], []
    for j, cj in _split_by_size(hat1, sizes1).items():
        for k, ck in _split_by_size(codes2, sizes2).items():
            out = combine_codes(
                cj, ck, len(index1), m1,
                mode=options.join,
                force_convolution=options.force_convolution,
                debug=options.debug,
            )
            if len(out):
                parts_c.append(out)
                parts_s.append(np.full(len(out), j + k, dtype=np.int64))
    if not parts_c:
        return {}
    out_c, out_s = _dedupe(
        np.concatenate(parts_c), np.concatenate(parts_s), (2 * m1) ** len(index1)
    )
    return _arrays_to_row(out_c, out_s, index1, m1)

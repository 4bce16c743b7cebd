"""Ground-truth engines: exhaustive enumeration and GF(2) elimination.

Everything here favors obviousness over speed; these are the references the
dynamic program is checked against.  Enumeration is vectorized over chunks
of subsets so the default cap of 22 vertices stays practical.
"""

from __future__ import annotations

import os
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np

from .graphs import Graph, GraphWithPortals
from .residues import ProblemSpec
from .sparse import Language

DEFAULT_CAP = 22
_CHUNK = 1 << 16


class OracleCapError(ValueError):
    pass


def _cap(cap: Optional[int]) -> int:
    if cap is not None:
        return cap
    env = os.environ.get("SRK_ORACLE_CAP")
    return int(env) if env else DEFAULT_CAP


def _check_cap(n: int, cap: Optional[int]) -> None:
    limit = _cap(cap)
    if n > limit:
        raise OracleCapError(
            f"graph has {n} > {limit} vertices; raise SRK_ORACLE_CAP to override"
        )


def _subset_chunks(n: int):
    """Yield (bits, start) with bits a (chunk, n) 0/1 uint8 matrix whose row
    r encodes subset start+r."""
    total = 1 << n
    cols = np.arange(max(n, 1), dtype=np.int64)
    for start in range(0, total, _CHUNK):
        stop = min(start + _CHUNK, total)
        ids = np.arange(start, stop, dtype=np.int64)
        bits = ((ids[:, None] >> cols[None, :n]) & 1).astype(np.uint8)
        yield bits, start


def brute_force_sizes(
    g: Graph,
    spec: ProblemSpec,
    shifts: Optional[Sequence[int]] = None,
    cap: Optional[int] = None,
) -> np.ndarray:
    """feasible[s] is True iff some size-s subset satisfies both membership
    conditions (with per-vertex shifts added to the counts if given)."""
    _check_cap(g.n, cap)
    n, m = g.n, spec.m
    a_sig, a_rho = spec.sigma.a, spec.rho.a
    feasible = np.zeros(n + 1, dtype=bool)
    if n == 0:
        feasible[0] = True
        return feasible
    adj = g.adjacency_matrix()
    shift = np.zeros(n, dtype=np.int16)
    if shifts is not None:
        shift = np.asarray(list(shifts), dtype=np.int16)
        if len(shift) != n:
            raise ValueError("shift vector length must equal vertex count")
    for bits, _ in _subset_chunks(n):
        counts = (bits @ adj).astype(np.int16)
        cmod = (counts + shift[None, :]) % m
        ok = np.where(bits == 1, cmod == a_sig, cmod == a_rho).all(axis=1)
        sizes = bits.sum(axis=1, dtype=np.int64)
        feasible[np.unique(sizes[ok])] = True
    return feasible


def realized_language(
    gp: GraphWithPortals,
    spec: ProblemSpec,
    size_stratified: bool = False,
    shifts: Optional[Sequence[int]] = None,
    cap: Optional[int] = None,
):
    """All portal state strings witnessed by a partial solution.

    A subset qualifies when every non-portal vertex meets its membership
    condition; portal vertices are unconstrained and only contribute their
    state (selection bit, count mod m).  With `size_stratified` the result
    is a dict keyed by the number of selected non-portal vertices.
    """
    g, spec_m = gp.graph, spec.m
    _check_cap(g.n, cap)
    n = g.n
    portals = list(gp.portals)
    others = sorted(set(range(n)) - set(portals))
    if n == 0:
        lang = Language(spec_m, (), np.array([0], dtype=np.int64))
        return {0: lang} if size_stratified else lang
    adj = g.adjacency_matrix()
    shift = np.zeros(n, dtype=np.int16)
    if shifts is not None:
        shift = np.asarray(list(shifts), dtype=np.int16)
    base = 2 * spec_m
    powers = base ** np.arange(len(portals), dtype=np.int64)
    per_size: dict[int, list[np.ndarray]] = {}
    for bits, _ in _subset_chunks(n):
        counts = (bits @ adj).astype(np.int16)
        cmod = (counts + shift[None, :]) % spec_m
        if others:
            sub = np.asarray(others)
            ok = np.where(
                bits[:, sub] == 1,
                cmod[:, sub] == spec.sigma.a,
                cmod[:, sub] == spec.rho.a,
            ).all(axis=1)
        else:
            ok = np.ones(len(bits), dtype=bool)
        if not ok.any():
            continue
        pcols = np.asarray(portals, dtype=np.int64) if portals else None
        if pcols is not None and len(pcols):
            digits = (
                bits[ok][:, pcols].astype(np.int64) * spec_m
                + cmod[ok][:, pcols].astype(np.int64)
            )
            codes = digits @ powers
        else:
            codes = np.zeros(int(ok.sum()), dtype=np.int64)
        if others:
            sizes = bits[ok][:, np.asarray(others)].sum(axis=1, dtype=np.int64)
        else:
            sizes = np.zeros(int(ok.sum()), dtype=np.int64)
        for i in np.unique(sizes):
            per_size.setdefault(int(i), []).append(codes[sizes == i])
    index = tuple(portals)
    if size_stratified:
        return {
            i: Language(spec_m, index, np.concatenate(parts))
            for i, parts in sorted(per_size.items())
        }
    if not per_size:
        return Language.empty(spec_m, index)
    return Language(spec_m, index, np.concatenate([c for parts in per_size.values() for c in parts]))


@dataclass(frozen=True)
class Gf2System:
    """A linear system over GF(2): rows[i] is a bitmask of the variables in
    equation i, rhs[i] its parity target."""

    rows: tuple[int, ...]
    rhs: tuple[int, ...]
    n: int
    variant: str = "reflexive"


def lights_out_system(
    g: Graph, variant: str, pattern: Optional[Sequence[bool]] = None
) -> Gf2System:
    """Equations for turning every lamp off: reflexive presses toggle the
    closed neighborhood, plain presses the open one.  `pattern[v]` True
    means lamp v starts on (the default)."""
    if variant not in ("reflexive", "plain"):
        raise ValueError(f"unknown variant {variant!r}")
    masks = g.neighbor_masks()
    rows = []
    for v in range(g.n):
        row = masks[v]
        if variant == "reflexive":
            row |= 1 << v
        rows.append(row)
    if pattern is None:
        rhs = tuple(1 for _ in range(g.n))
    else:
        if len(pattern) != g.n:
            raise ValueError("pattern length must equal vertex count")
        rhs = tuple(1 if on else 0 for on in pattern)
    return Gf2System(tuple(rows), rhs, g.n, variant)


def gf2_solve(sys: Gf2System):
    """Gaussian elimination over GF(2).

    Returns None if infeasible, else (particular solution bitmask, kernel
    basis list of bitmasks).
    """
    n = sys.n
    aug = [(row, b) for row, b in zip(sys.rows, sys.rhs)]
    pivots: list[tuple[int, int, int]] = []  # (column, row, rhs-bit)
    for col in range(n):
        bit = 1 << col
        pos = None
        for i, (row, _) in enumerate(aug):
            if row & bit:
                pos = i
                break
        if pos is None:
            continue
        prow, pb = aug.pop(pos)
        aug = [
            (row ^ prow, b ^ pb) if row & bit else (row, b) for row, b in aug
        ]
        pivots.append((col, prow, pb))
    if any(b for row, b in aug if row == 0):
        return None
    pivot_cols = {c for c, _, _ in pivots}
    free_cols = [c for c in range(n) if c not in pivot_cols]

    def back_substitute(assign: int, homogeneous: bool) -> int:
        x = assign
        for col, row, b in reversed(pivots):
            target = 0 if homogeneous else b
            val = bin(row & x & ~(1 << col)).count("1") & 1
            if val != target:
                x |= 1 << col
        return x

    x0 = back_substitute(0, homogeneous=False)
    basis = [back_substitute(1 << fc, homogeneous=True) for fc in free_cols]
    return x0, basis


def gf2_min_weight(
    solution: int, kernel_basis: Sequence[int], cap: int = 24
) -> Optional[int]:
    """Minimum Hamming weight over the affine coset solution + span(basis),
    by exhaustive kernel enumeration (Gray-code order).  Returns None when
    the kernel dimension exceeds `cap`."""
    dim = len(kernel_basis)
    if dim > cap:
        return None
    best = bin(solution).count("1")
    x = solution
    prev_gray = 0
    for i in range(1, 1 << dim):
        gray = i ^ (i >> 1)
        changed = gray ^ prev_gray
        x ^= kernel_basis[changed.bit_length() - 1]
        prev_gray = gray
        w = bin(x).count("1")
        if w < best:
            best = w
    return best

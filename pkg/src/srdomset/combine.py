"""Combination of state strings and languages.

Two strings over the same portals combine positionwise when their selection
patterns agree: counts add mod m, mixed selected/unselected positions make
the whole combination undefined.  Languages combine pairwise; the fast path
does it per sigma-vector group through weight-vector compression and a
prime-field convolution instead of the quadratic pairwise sweep.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from typing import Optional, Sequence

import numpy as np

from . import modconv
from .residues import State
from .sparse import (
    Language,
    SigmaDefiningSet,
    sigma_defining_set,
    sigma_keys,
    weight_matrix,
)

# Pairwise work per group is preferred while it is no larger than this many
# multiples of the convolution table; beyond that the transform wins.
_PAIRWISE_FACTOR = 1


def combine_strings(
    x: Sequence[State], y: Sequence[State], m: int
) -> Optional[tuple[State, ...]]:
    """x (+) y, or None when some position mixes a sigma- and a rho-state."""
    if len(x) != len(y):
        raise ValueError("cannot combine strings of different lengths")
    out = []
    for a, b in zip(x, y):
        if a.kind is not b.kind:
            return None
        out.append(State(a.kind, (a.count + b.count) % m))
    return tuple(out)


def _powers(base: int, n: int) -> np.ndarray:
    return base ** np.arange(n + 1, dtype=np.int64)


def _group_by_key(codes: np.ndarray, keys: np.ndarray) -> dict[int, np.ndarray]:
    if not len(codes):
        return {}
    order = np.argsort(keys, kind="stable")
    sk = keys[order]
    cuts = np.flatnonzero(np.diff(sk)) + 1
    starts = np.concatenate(([0], cuts))
    ends = np.concatenate((cuts, [len(sk)]))
    return {int(sk[s]): codes[order[s:e]] for s, e in zip(starts, ends)}


def _key_to_bits(key: int, n: int) -> tuple[int, ...]:
    return tuple((key >> j) & 1 for j in range(n))


def _codes_from_weights(
    weights: np.ndarray, svec: tuple[int, ...], m: int
) -> np.ndarray:
    n = len(svec)
    pw = _powers(2 * m, n)[:n]
    const = int(np.asarray(svec, dtype=np.int64) @ pw) * m
    return weights.astype(np.int64) @ pw + const


def _pairwise_group(
    w1: np.ndarray, w2: np.ndarray, svec: tuple[int, ...], m: int
) -> np.ndarray:
    """All pairwise sums of weight rows, mod m, repacked into codes."""
    n = len(svec)
    if n == 0:
        return np.zeros(1, dtype=np.int64)
    out = []
    step = max(1, 4_000_000 // max(len(w2) * n, 1))
    for i0 in range(0, len(w1), step):
        sums = (w1[i0 : i0 + step, None, :] + w2[None, :, :]) % m
        out.append(np.unique(_codes_from_weights(sums.reshape(-1, n), svec, m)))
    return np.unique(np.concatenate(out))


def _lex_min_row(w: np.ndarray) -> np.ndarray:
    if w.shape[1] == 0:
        return w[0]
    order = np.lexsort(w.T[::-1])
    return w[order[0]]


def _convolve_group(
    w1: np.ndarray,
    w2: np.ndarray,
    svec: tuple[int, ...],
    sds: SigmaDefiningSet,
    m: int,
    debug: bool = False,
) -> np.ndarray:
    """Compress both weight sets, convolve their 0/1 indicator tables over
    the compressed space, then decompress the positive entries relative to
    the combined origin."""
    comp = np.asarray(sds.complement, dtype=np.int64)
    kept = list(sds.positions)
    dims = (m,) * len(comp)
    table = m ** len(comp)
    mpow = m ** np.arange(len(comp), dtype=np.int64)
    idx1 = w1[:, comp].astype(np.int64) @ mpow
    idx2 = w2[:, comp].astype(np.int64) @ mpow
    if debug:
        assert len(np.unique(idx1)) == len(idx1), "compression not injective"
        assert len(np.unique(idx2)) == len(idx2), "compression not injective"
    f = np.zeros(table, dtype=np.int64)
    g = np.zeros(table, dtype=np.int64)
    f[idx1] = 1
    g[idx2] = 1
    pl = modconv.plan(dims, table + 1)
    h = modconv.convolve(f.reshape(dims), g.reshape(dims), pl).ravel()
    pos = np.flatnonzero(h)
    if not len(pos):
        return np.empty(0, dtype=np.int64)
    # Origin: combined weight-vector of the two lexicographically smallest
    # group members; itself realized by a combinable witness pair.
    origin = (_lex_min_row(w1).astype(np.int64) + _lex_min_row(w2)) % m
    a = np.empty((len(pos), len(comp)), dtype=np.int64)
    rem = pos.copy()
    for r in range(len(comp)):
        a[:, r] = rem % m
        rem //= m
    full = np.empty((len(pos), sds.n), dtype=np.int64)
    if len(comp):
        full[:, comp] = a
    if kept:
        w_diff = np.array(
            [
                [
                    sds.witnesses[ell][1][i] - sds.witnesses[ell][0][i]
                    for i in sds.complement
                ]
                for ell in kept
            ],
            dtype=np.int64,
        )
        diffs = a - origin[comp][None, :]
        rems = diffs @ w_diff.T
        full[:, kept] = (origin[kept][None, :] - rems) % m
    return _codes_from_weights(full, svec, m)


def combine_codes(
    codes1: np.ndarray,
    codes2: np.ndarray,
    n: int,
    m: int,
    mode: str = "fast",
    force_convolution: bool = False,
    threads: int = 1,
    debug: bool = False,
    counters: Optional[dict] = None,
) -> np.ndarray:
    """Combine two packed-code sets over a shared index of length n."""
    if len(codes1) == 0 or len(codes2) == 0:
        return np.empty(0, dtype=np.int64)
    keys1 = sigma_keys(codes1, n, m)
    keys2 = sigma_keys(codes2, n, m)
    groups1 = _group_by_key(codes1, keys1)
    groups2 = _group_by_key(codes2, keys2)
    shared = sorted(set(groups1) & set(groups2))
    if not shared:
        return np.empty(0, dtype=np.int64)
    sds = None
    if mode == "fast":
        sds = sigma_defining_set([_key_to_bits(k, n) for k in shared])

    def run_group(key: int) -> np.ndarray:
        w1 = weight_matrix(groups1[key], n, m)
        w2 = weight_matrix(groups2[key], n, m)
        svec = _key_to_bits(key, n)
        if mode == "naive":
            if counters is not None:
                counters["pairwise"] = counters.get("pairwise", 0) + 1
            return _pairwise_group(w1, w2, svec, m)
        table = m ** len(sds.complement)
        pairs = len(w1) * len(w2)
        if force_convolution or pairs > table * _PAIRWISE_FACTOR:
            if counters is not None:
                counters["convolutions"] = counters.get("convolutions", 0) + 1
            out = _convolve_group(w1, w2, svec, sds, m, debug=debug)
        else:
            if counters is not None:
                counters["pairwise"] = counters.get("pairwise", 0) + 1
            out = _pairwise_group(w1, w2, svec, m)
        if debug:
            expect = _pairwise_group(w1, w2, svec, m)
            if not np.array_equal(np.unique(out), expect):
                raise AssertionError("fast combination differs from pairwise oracle")
        return out

    if threads > 1 and len(shared) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            parts = list(pool.map(run_group, shared))
    else:
        parts = [run_group(k) for k in shared]
    # Distinct sigma-vectors cannot produce equal strings, so plain
    # concatenation would already be duplicate-free; unique also sorts.
    return np.unique(np.concatenate(parts))


def _check_compatible(l1: Language, l2: Language) -> None:
    if l1.m != l2.m:
        raise ValueError("cannot combine languages with different moduli")
    if len(l1.index) != len(l2.index):
        raise ValueError("cannot combine languages of different lengths")
    if l1.index != l2.index:
        raise ValueError("cannot combine languages over different indices")


def combine_naive(l1: Language, l2: Language) -> Language:
    """Exact pairwise combination; the oracle for the fast path."""
    _check_compatible(l1, l2)
    out = combine_codes(l1.codes, l2.codes, l1.n, l1.m, mode="naive")
    return Language(l1.m, l1.index, out)


def combine_fast(
    l1: Language,
    l2: Language,
    force_convolution: bool = False,
    threads: int = 1,
    debug: bool = False,
) -> Language:
    """Per-sigma-vector compressed-convolution combination.

    Requires l1, l2, and their combination to be sparse (the solver
    guarantees this structurally; enable `debug` to cross-check against the
    pairwise oracle).
    """
    _check_compatible(l1, l2)
    out = combine_codes(
        l1.codes,
        l2.codes,
        l1.n,
        l1.m,
        mode="fast",
        force_convolution=force_convolution,
        threads=threads,
        debug=debug,
    )
    return Language(l1.m, l1.index, out)

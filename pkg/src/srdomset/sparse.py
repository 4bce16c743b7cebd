"""Languages of state strings, sparsity, sigma-defining sets, compression.

A language is a set of equal-length state strings.  Strings are stored as
packed base-(2m) codes in a sorted numpy array; the tuple-of-State view is
reconstructed on demand.  Grouping by sigma-vector is the access pattern of
every downstream algorithm, so it is cached.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

import numpy as np

from .residues import State, StateString, pack_states, unpack_code


def code_digits(codes: np.ndarray, n: int, m: int) -> np.ndarray:
    """Decode packed codes into an (len, n) digit matrix in [0, 2m)."""
    base = 2 * m
    codes = np.asarray(codes, dtype=np.int64)
    out = np.empty((len(codes), n), dtype=np.int8)
    rem = codes.copy()
    for j in range(n):
        out[:, j] = rem % base
        rem //= base
    return out


def sigma_bits(codes: np.ndarray, n: int, m: int) -> np.ndarray:
    """(len, n) 0/1 matrix of selection bits."""
    return (code_digits(codes, n, m) >= m).astype(np.int8)


def weight_matrix(codes: np.ndarray, n: int, m: int) -> np.ndarray:
    """(len, n) matrix of counts in [0, m)."""
    return (code_digits(codes, n, m) % m).astype(np.int8)


def sigma_keys(codes: np.ndarray, n: int, m: int) -> np.ndarray:
    """Pack each string's sigma-vector into an integer key (bit j =
    selection bit of position j)."""
    bits = sigma_bits(codes, n, m).astype(np.int64)
    return bits @ (np.int64(1) << np.arange(n, dtype=np.int64))


class Language:
    """A set of state strings of one length over one modulus, indexed by an
    ordered vertex list."""

    __slots__ = ("m", "index", "codes", "_groups")

    def __init__(self, m: int, index: Sequence[int], codes=None):
        self.m = m
        self.index = tuple(index)
        if codes is None:
            codes = np.empty(0, dtype=np.int64)
        arr = np.unique(np.asarray(codes, dtype=np.int64))
        self.codes = arr
        self._groups = None

    @classmethod
    def from_strings(
        cls, m: int, index: Sequence[int], strings: Iterable[Sequence[State]]
    ) -> "Language":
        idx = tuple(index)
        packed = []
        for s in strings:
            if len(s) != len(idx):
                raise ValueError("string length does not match index")
            packed.append(pack_states(s, m))
        return cls(m, idx, np.array(packed, dtype=np.int64))

    @classmethod
    def empty(cls, m: int, index: Sequence[int]) -> "Language":
        return cls(m, index)

    @property
    def n(self) -> int:
        return len(self.index)

    def __len__(self) -> int:
        return len(self.codes)

    def __bool__(self) -> bool:
        return len(self.codes) > 0

    def strings(self) -> list[StateString]:
        return [unpack_code(int(c), self.n, self.m) for c in self.codes]

    def __iter__(self):
        return iter(self.strings())

    def __contains__(self, string: Sequence[State]) -> bool:
        code = pack_states(string, self.m)
        i = np.searchsorted(self.codes, code)
        return i < len(self.codes) and self.codes[i] == code

    def __eq__(self, other):
        return (
            isinstance(other, Language)
            and self.m == other.m
            and self.index == other.index
            and np.array_equal(self.codes, other.codes)
        )

    def __hash__(self):
        return hash((self.m, self.index, self.codes.tobytes()))

    def groups(self) -> Mapping[tuple[int, ...], list[tuple[int, ...]]]:
        """Weight-vectors grouped by sigma-vector (tuples, for inspection)."""
        if self._groups is None:
            n, m = self.n, self.m
            bits = sigma_bits(self.codes, n, m)
            weights = weight_matrix(self.codes, n, m)
            groups: dict[tuple[int, ...], list[tuple[int, ...]]] = {}
            for i in range(len(self.codes)):
                groups.setdefault(tuple(int(b) for b in bits[i]), []).append(
                    tuple(int(w) for w in weights[i])
                )
            self._groups = groups
        return self._groups

    def sigma_vectors(self) -> set[tuple[int, ...]]:
        return set(self.groups().keys())

    def to_debug_lines(self) -> list[str]:
        return [" ".join(str(s) for s in string) for string in self.strings()]

    def __repr__(self):
        return f"Language(m={self.m}, n={self.n}, size={len(self)})"


def is_sparse(lang: Language) -> bool:
    """Quadratic sparsity check: for all pairs x, y the cross dot products
    sigvec(x).degvec(y) and sigvec(y).degvec(x) agree mod m.  Test/debug
    utility; the solver relies on the structural guarantee instead."""
    n, m = lang.n, lang.m
    if len(lang) <= 1 or n == 0:
        return True
    bits = sigma_bits(lang.codes, n, m).astype(np.int32)
    weights = weight_matrix(lang.codes, n, m).astype(np.int32)
    cross = bits @ weights.T
    return bool((((cross - cross.T) % m) == 0).all())


@dataclass(frozen=True)
class SigmaDefiningSet:
    """An inclusion-minimal position set whose restriction identifies each
    vector of a 0/1 vector set, plus the witness pairs certifying minimality.

    Positions are 0-based indices into the string.  For each kept position
    l the witnesses (w0, w1) are source vectors agreeing on the rest of the
    set with w1[l] = 1 and w0[l] = 0.
    """

    n: int
    positions: tuple[int, ...]
    complement: tuple[int, ...]
    witnesses: Mapping[int, tuple[tuple[int, ...], tuple[int, ...]]]

    def validate(self, source: Iterable[tuple[int, ...]]) -> None:
        src = set(source)
        for ell in self.positions:
            w0, w1 = self.witnesses[ell]
            if w0 not in src or w1 not in src:
                raise AssertionError(f"witnesses at {ell} not in source set")
            if w1[ell] != 1 or w0[ell] != 0:
                raise AssertionError(f"witness bits wrong at {ell}")
            for other in self.positions:
                if other != ell and w0[other] != w1[other]:
                    raise AssertionError(
                        f"witnesses at {ell} disagree at kept position {other}"
                    )
        rest = {}
        for v in src:
            key = tuple(v[i] for i in self.positions)
            if key in rest and rest[key] != v:
                raise AssertionError("positions do not identify vectors")
            rest[key] = v


def sigma_defining_set(vectors: Iterable[tuple[int, ...]]) -> SigmaDefiningSet:
    """Compute a sigma-defining set with witnesses by the iterative map
    algorithm: start from all positions, drop position i when no two vectors
    collide on the remaining key, otherwise keep i and record the first
    colliding pair as witnesses.

    Vectors are visited in lexicographic order, so the result is
    deterministic.  Runs in O(|X| * n^3).
    """
    vecs = sorted(set(tuple(v) for v in vectors))
    if not vecs:
        raise ValueError("sigma-defining set of an empty vector set")
    n = len(vecs[0])
    for v in vecs:
        if len(v) != n:
            raise ValueError("vectors of unequal length")
    kept = list(range(n))
    witnesses: dict[int, tuple[tuple[int, ...], tuple[int, ...]]] = {}
    for i in range(n):
        probe = [p for p in kept if p != i]
        seen: dict[tuple[int, ...], tuple[int, ...]] = {}
        collision = None
        for v in vecs:
            key = tuple(v[p] for p in probe)
            if key in seen:
                collision = (seen[key], v)
                break
            seen[key] = v
        if collision is None:
            kept.remove(i)
        else:
            u, v = collision
            if u[i] == 1:
                witnesses[i] = (v, u)
            else:
                witnesses[i] = (u, v)
    positions = tuple(kept)
    complement = tuple(p for p in range(n) if p not in positions)
    return SigmaDefiningSet(n, positions, complement, witnesses)


def remainder(
    u: Sequence[int],
    o: Sequence[int],
    sds: SigmaDefiningSet,
    ell: int,
    m: int,
) -> int:
    """Correction term reconstructing position ell of a weight-vector from
    the complement positions: sum over i in the complement of
    (u[i]-o[i]) * (w1[i]-w0[i]), mod m."""
    if ell not in sds.witnesses:
        raise ValueError(f"position {ell} not in the sigma-defining set")
    w0, w1 = sds.witnesses[ell]
    total = 0
    for i in sds.complement:
        total += (u[i] - o[i]) * (w1[i] - w0[i])
    return total % m


def compress(u: Sequence[int], sds: SigmaDefiningSet) -> tuple[int, ...]:
    """Project a weight-vector onto the complement of the defining set."""
    return tuple(u[i] for i in sds.complement)


def decompress(
    a: Sequence[int],
    o: Sequence[int],
    sds: SigmaDefiningSet,
    m: int,
) -> tuple[int, ...]:
    """Rebuild a full weight-vector from its compression `a` and an origin
    vector `o` that is the weight-vector of a language member with the same
    sigma-vector (caller's obligation)."""
    if len(a) != len(sds.complement):
        raise ValueError(
            f"compressed vector has dimension {len(a)}, expected {len(sds.complement)}"
        )
    full = [0] * sds.n
    for val, i in zip(a, sds.complement):
        full[i] = val % m
    for ell in sds.positions:
        full[ell] = (o[ell] - remainder(full, o, sds, ell, m)) % m
    return tuple(full)

"""Prime-field cyclic convolution over Z_{d_1} x ... x Z_{d_n}.

The join step of the solver needs exact convolutions of small-valued integer
tables whose index group is a product of cyclic groups.  We work in F_p for
a prime p = 1 + D'*j exceeding the value bound M, where D' is the product of
the distinct dimension sizes; such a prime admits a d-th root of unity for
every dimension size d, and the transform is a per-dimension DFT.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from math import prod

import numpy as np

_MR_BASES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)  # deterministic for < 2^64
_P_LIMIT = 2**63 - 1
NAIVE_THRESHOLD = 64  # below this table size the quadratic sum is faster


class ConvolutionError(RuntimeError):
    pass


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin valid for all 64-bit inputs."""
    if n < 2:
        return False
    for p in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _MR_BASES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


@dataclass(frozen=True)
class ConvolutionPlan:
    """Prime field plus per-dimension roots of unity for one table shape."""

    dims: tuple[int, ...]
    M: int
    p: int
    roots: tuple[int, ...]

    @property
    def D(self) -> int:
        return prod(self.dims)


def _find_root(p: int, d: int, k: int) -> int:
    """Smallest x = 2, 3, ... such that x^k has exact order d in F_p."""
    if d == 1:
        return 1
    x = 2
    while x < p:
        r = pow(x, k, p)
        if r != 1:
            ok = True
            y = r
            for _ in range(1, d - 1):
                y = y * r % p
                if y == 1:
                    ok = False
                    break
            if ok and y * r % p == 1:
                return r
        x += 1
    raise ConvolutionError(f"no {d}-th root of unity found in F_{p}")


@lru_cache(maxsize=None)
def plan(dims: tuple[int, ...], M: int, search_cap: int = 10**7) -> ConvolutionPlan:
    """Find the smallest prime p = 1 + D'*j with p > M, then a d-th root of
    unity for every distinct dimension size d.

    The arithmetic progression contains a suitable prime, so the search
    terminates; `search_cap` bounds the number of candidates tried and turns
    a hypothetical runaway into a diagnostic.
    """
    dims = tuple(int(d) for d in dims)
    if any(d < 1 for d in dims):
        raise ValueError(f"dimensions must be >= 1, got {dims}")
    D = prod(dims)
    if M < D:
        raise ValueError(f"value bound M={M} below table size D={D}")
    distinct = sorted(set(dims))
    d_prime = prod(distinct)
    p = None
    j = 0
    for j in range(1, search_cap + 1):
        cand = 1 + d_prime * j
        if cand <= M:
            continue
        if cand > _P_LIMIT:
            raise ConvolutionError(f"prime search exceeded 64-bit range at j={j}")
        if is_prime(cand):
            p = cand
            break
    if p is None:
        raise ConvolutionError(
            f"no prime 1 + {d_prime}*j with j <= {search_cap} exceeding M={M}"
        )
    root_by_d = {d: _find_root(p, d, (p - 1) // d) for d in distinct}
    return ConvolutionPlan(dims, M, p, tuple(root_by_d[d] for d in dims))


def convolve_naive(f: np.ndarray, g: np.ndarray, dims: tuple[int, ...]) -> np.ndarray:
    """Direct O(D^2) cyclic convolution; oracle and small-size path."""
    f = np.asarray(f, dtype=np.int64).reshape(dims)
    g = np.asarray(g, dtype=np.int64).reshape(dims)
    h = np.zeros(dims, dtype=np.int64)
    for idx in np.ndindex(*dims):
        v = f[idx]
        if v == 0:
            continue
        shifted = g
        for ax, off in enumerate(idx):
            if off:
                shifted = np.roll(shifted, off, axis=ax)
        h += v * shifted
    return h


def _dft_matrix(d: int, root: int, p: int) -> np.ndarray:
    powers = np.empty(d, dtype=np.int64)
    acc = 1
    for i in range(d):
        powers[i] = acc
        acc = acc * root % p
    jk = (np.arange(d)[:, None] * np.arange(d)[None, :]) % d
    return powers[jk]


def _transform(a: np.ndarray, plan_: ConvolutionPlan, inverse: bool) -> np.ndarray:
    p = plan_.p
    if p * p * max(plan_.dims) >= 2**63:
        # Exceeds safe int64 accumulation; fall back to exact object math.
        a = a.astype(object)
    for ax, (d, w) in enumerate(zip(plan_.dims, plan_.roots)):
        if d == 1:
            continue
        root = pow(w, p - 2, p) if inverse else w
        V = _dft_matrix(d, root, p)
        if a.dtype == object:
            V = V.astype(object)
        a = np.moveaxis(np.tensordot(a, V, axes=([ax], [0])), -1, ax) % p
    return a


def convolve(
    f: np.ndarray,
    g: np.ndarray,
    plan_: ConvolutionPlan,
    naive_threshold: int = NAIVE_THRESHOLD,
    debug: bool = False,
) -> np.ndarray:
    """Exact cyclic convolution h(a) = sum_{a1+a2=a} f(a1) g(a2), index
    addition componentwise mod dims.

    All values of f, g, and the true h must lie in [0, M]; that is a caller
    contract (p > M makes the lift from F_p exact).
    """
    dims = plan_.dims
    f = np.asarray(f, dtype=np.int64).reshape(dims)
    g = np.asarray(g, dtype=np.int64).reshape(dims)
    if plan_.D <= naive_threshold:
        h = convolve_naive(f, g, dims)
    else:
        p = plan_.p
        F = _transform(f % p, plan_, inverse=False)
        G = _transform(g % p, plan_, inverse=False)
        H = _transform(F * G % p, plan_, inverse=True)
        d_inv = pow(plan_.D, p - 2, p)
        h = (H * d_inv % p).astype(np.int64)
    if debug:
        expect = convolve_naive(f, g, dims)
        if not np.array_equal(h, expect):
            raise AssertionError("convolution mismatch against naive oracle")
    return h

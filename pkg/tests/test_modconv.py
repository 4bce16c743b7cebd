import random

import numpy as np
import pytest

from srdomset.modconv import (
    ConvolutionError,
    convolve,
    convolve_naive,
    is_prime,
    plan,
)


def test_is_prime_small():
    primes = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31}
    for n in range(32):
        assert is_prime(n) == (n in primes)
    assert is_prime(2**31 - 1)
    assert not is_prime(2**32 + 1)


def test_plan_dims3():
    pl = plan((3,), 10)
    assert pl.p == 13  # 13 = 1 + 3*4, prime, > 10
    (w,) = pl.roots
    assert w == 3
    assert pow(3, 3, 13) == 1 and pow(3, 1, 13) != 1 and pow(3, 2, 13) != 1


def test_plan_dims2():
    pl = plan((2,), 2)
    assert pl.p == 3
    assert pl.roots == (2,)


def test_plan_dims1():
    pl = plan((1,), 5)
    assert pl.roots == (1,)
    assert pl.p > 5


def test_plan_root_orders():
    for dims, M in [((3, 2), 50), ((4, 4, 2), 200), ((5,), 7)]:
        pl = plan(dims, M)
        assert pl.p > M and pl.p % np.prod(sorted(set(dims))) == 1
        for d, w in zip(pl.dims, pl.roots):
            assert pow(w, d, pl.p) == 1
            for k in range(1, d):
                assert pow(w, k, pl.p) != 1


def test_plan_rejects_small_M():
    with pytest.raises(ValueError):
        plan((3, 3), 2)


def test_plan_search_cap():
    with pytest.raises(ConvolutionError):
        plan((2,), 10**6, search_cap=1)


def test_convolve_shift():
    pl = plan((2,), 4)
    f = np.array([1, 0])
    g = np.array([0, 1])
    assert list(convolve(f, g, pl)) == [0, 1]


def test_convolve_all_ones():
    pl = plan((2,), 4)
    h = convolve(np.array([1, 1]), np.array([1, 1]), pl)
    assert list(h) == [2, 2]


def test_convolve_indicator_sumset():
    pl = plan((3, 2), 10)
    f = np.zeros((3, 2), dtype=np.int64)
    g = np.zeros((3, 2), dtype=np.int64)
    f[1, 0] = 1
    g[2, 1] = 1
    h = convolve(f, g, pl)
    expect = np.zeros((3, 2), dtype=np.int64)
    expect[0, 1] = 1  # (1+2 mod 3, 0+1 mod 2)
    assert np.array_equal(h, expect)


def test_convolve_identity():
    rng = np.random.default_rng(5)
    dims = (3, 3, 2)
    f = rng.integers(0, 4, size=dims)
    delta = np.zeros(dims, dtype=np.int64)
    delta[0, 0, 0] = 1
    pl = plan(dims, int(f.sum()) + 20)
    assert np.array_equal(convolve(f, delta, pl, naive_threshold=1), f)


def test_convolve_commutative_and_matches_naive():
    rng = np.random.default_rng(11)
    for dims in [(3,) * 4, (3, 3, 2, 2), (2,) * 6, (5, 3)]:
        f = rng.integers(0, 3, size=dims).astype(np.int64)
        g = rng.integers(0, 3, size=dims).astype(np.int64)
        bound = int(f.sum() * g.sum()) + 1
        pl = plan(tuple(dims), max(bound, int(np.prod(dims))))
        # force the transform (threshold 1) and compare with the naive sum
        h = convolve(f, g, pl, naive_threshold=1)
        assert np.array_equal(h, convolve_naive(f, g, tuple(dims)))
        assert np.array_equal(h, convolve(g, f, pl, naive_threshold=1))


def test_convolve_debug_crosscheck():
    pl = plan((3, 3), 20)
    f = np.ones((3, 3), dtype=np.int64)
    convolve(f, f, pl, naive_threshold=1, debug=True)

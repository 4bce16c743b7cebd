import random

import pytest

from srdomset.combine import combine_fast, combine_naive, combine_strings
from srdomset.graphs import Graph, GraphWithPortals
from srdomset.oracle import realized_language
from srdomset.residues import State, spec
from srdomset.sparse import Language

S, R = State.sigma, State.rho


def lang(m, strings, n=None):
    n = n if n is not None else len(strings[0])
    return Language.from_strings(m, tuple(range(n)), strings)


def test_combine_strings_examples():
    assert combine_strings((S(1),), (S(2),), 3) == (S(0),)
    assert combine_strings((S(0),), (R(0),), 3) is None
    assert combine_strings((R(1), S(1)), (R(1), S(0)), 2) == (R(0), S(1))
    with pytest.raises(ValueError):
        combine_strings((S(0),), (S(0), S(0)), 2)


def test_combine_naive_trivial():
    empty = Language.empty(2, (0, 1))
    other = lang(2, [(R(0), R(0))])
    assert len(combine_naive(empty, other)) == 0
    assert combine_naive(other, other) == other  # 0+0


def test_combine_disjoint_sigma_vectors_empty():
    l1 = lang(2, [(S(0), R(0))])
    l2 = lang(2, [(R(0), S(0))])
    assert len(combine_fast(l1, l2)) == 0


def test_combine_singletons():
    l1 = lang(3, [(S(1), R(2))])
    l2 = lang(3, [(S(2), R(2))])
    out = combine_fast(l1, l2, force_convolution=True)
    assert set(out.strings()) == {(S(0), R(1))}


def test_combine_index_mismatch():
    l1 = Language.from_strings(2, (0, 1), [(S(0), R(0))])
    l2 = Language.from_strings(2, (0, 2), [(S(0), R(0))])
    with pytest.raises(ValueError):
        combine_fast(l1, l2)


def test_combine_empty_index_languages():
    l1 = Language(2, (), [0])
    out = combine_fast(l1, l1, force_convolution=True)
    assert len(out) == 1 and out.strings() == [()]


def _random_graph(rng, n, p=0.5):
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph(n, edges)


def test_fast_equals_naive_on_realized_languages():
    """Differential over realized languages of random graphs sharing a
    portal set; both the dispatching fast path and the forced-convolution
    path must match the pairwise oracle."""
    rng = random.Random(31)
    for trial in range(60):
        n = rng.randint(2, 5)
        k = rng.randint(1, min(4, n))
        m = rng.choice([2, 3, 4])
        sp = spec(rng.randrange(m), rng.randrange(m), m)
        portals = tuple(range(k))
        l1 = realized_language(GraphWithPortals(_random_graph(rng, n), portals), sp)
        l2 = realized_language(GraphWithPortals(_random_graph(rng, n), portals), sp)
        naive = combine_naive(l1, l2)
        assert combine_fast(l1, l2) == naive
        assert combine_fast(l1, l2, force_convolution=True) == naive
        assert combine_fast(l1, l2, force_convolution=True, threads=2) == naive
        # the combination's sigma-vectors stay inside the intersection
        assert naive.sigma_vectors() <= (l1.sigma_vectors() & l2.sigma_vectors())


def test_fast_debug_crosscheck_runs():
    rng = random.Random(5)
    sp = spec(0, 1, 3)
    portals = (0, 1)
    l1 = realized_language(GraphWithPortals(_random_graph(rng, 4), portals), sp)
    l2 = realized_language(GraphWithPortals(_random_graph(rng, 4), portals), sp)
    combine_fast(l1, l2, force_convolution=True, debug=True)

import random

import pytest

from srdomset.graphs import Graph, GraphWithPortals
from srdomset.oracle import realized_language
from srdomset.residues import State, decompose, spec
from srdomset.sparse import (
    Language,
    compress,
    decompress,
    is_sparse,
    remainder,
    sigma_defining_set,
)

S, R = State.sigma, State.rho


def lang(m, strings):
    n = len(strings[0]) if strings else 0
    return Language.from_strings(m, tuple(range(n)), strings)


def test_language_basics():
    l = lang(2, [(S(0), R(1)), (R(1), S(0))])
    assert len(l) == 2
    assert (S(0), R(1)) in l
    assert (S(1), R(1)) not in l
    assert l.to_debug_lines() == ["s0 r1", "r1 s0"]
    assert l.sigma_vectors() == {(1, 0), (0, 1)}


def test_is_sparse_examples():
    assert is_sparse(lang(3, [(S(1), R(0))]))  # singleton
    assert is_sparse(lang(2, [(S(0), R(1)), (R(1), S(0))]))
    assert is_sparse(lang(2, [(S(1), R(0)), (R(0), R(1))]))


def test_is_sparse_negative():
    # sigvec(x).degvec(y) = 1, sigvec(y).degvec(x) = 0 (mod 2)
    bad = lang(2, [(S(0), R(0)), (S(1), R(1))])
    assert not is_sparse(bad)


def test_sigma_defining_set_singleton():
    sds = sigma_defining_set([(0, 1, 1)])
    assert sds.positions == ()
    assert sds.complement == (0, 1, 2)


def test_sigma_defining_set_two_vectors():
    sds = sigma_defining_set([(0, 0), (1, 1)])
    # position 0 dropped (no collision on remaining key once both differ
    # there), position 1 kept with witnesses 00 / 11
    assert sds.positions == (1,)
    assert sds.witnesses[1] == ((0, 0), (1, 1))
    sds.validate([(0, 0), (1, 1)])


def test_sigma_defining_set_full_square():
    vs = [(0, 0), (0, 1), (1, 0), (1, 1)]
    sds = sigma_defining_set(vs)
    assert sds.positions == (0, 1)
    assert sds.witnesses[0] == ((0, 0), (1, 0))
    assert sds.witnesses[1] == ((0, 0), (0, 1))
    sds.validate(vs)


def test_remainder_examples():
    # n=2, S={1}, complement {0}
    sds = sigma_defining_set([(1, 0), (1, 1)])
    assert sds.positions == (1,)
    m = 3
    u, o = (2, 0), (0, 0)
    assert remainder(u, o, sds, 1, m) == (2 - 0) * (1 - 1) % m == 0
    sds2 = sigma_defining_set([(0, 0), (1, 1)])
    u, o = (2, 0), (1, 0)
    assert remainder(u, o, sds2, 1, m) == 1  # (2-1)*(1-0)
    assert remainder(o, o, sds2, 1, m) == 0
    with pytest.raises(ValueError):
        remainder(u, o, sds2, 0, m)


def test_compress_examples():
    sds_empty = sigma_defining_set([(0, 0, 0)])  # S = {}
    assert compress((1, 2, 0), sds_empty) == (1, 2, 0)
    sds_full = sigma_defining_set([(0, 0), (0, 1), (1, 0), (1, 1)])
    assert compress((1, 2), sds_full) == ()
    vs = [(0, 0, 0), (0, 1, 0), (1, 0, 0), (1, 1, 0)]
    sds = sigma_defining_set(vs)
    assert set(sds.positions) == {0, 1}
    assert compress((1, 2, 0), sds) == (0,)


def test_decompress_trivial_cases():
    m = 3
    sds_empty = sigma_defining_set([(0, 0, 0)])
    o = (1, 2, 0)
    assert decompress(compress(o, sds_empty), o, sds_empty, m) == o
    a = (2, 1, 1)
    assert decompress(a, o, sds_empty, m) == a


def _random_graph(rng, n, p=0.5):
    edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p]
    return Graph(n, edges)


def test_compression_roundtrip_on_realized_languages():
    """decompress(compress(degvec x), o) recovers degvec x for every string
    sharing o's sigma-vector, on realized languages of small random graphs."""
    rng = random.Random(20240)
    for trial in range(40):
        n = rng.randint(2, 6)
        k = rng.randint(1, min(4, n))
        m = rng.choice([2, 3, 4])
        sp = spec(rng.randrange(m), rng.randrange(m), m)
        gp = GraphWithPortals(_random_graph(rng, n), tuple(range(k)))
        strat = realized_language(gp, sp, size_stratified=True)
        for lang_i in strat.values():
            if not len(lang_i):
                continue
            assert is_sparse(lang_i)
            groups = lang_i.groups()
            sds = sigma_defining_set(list(groups.keys()))
            for svec, weights in groups.items():
                o = min(weights)
                for u in weights:
                    assert decompress(compress(u, sds), o, sds, m) == u


def test_sparse_language_invariants():
    """Size bound, three-string property, determination, witness validity,
    compression-space bound on stratified realized languages."""
    rng = random.Random(77)
    for trial in range(30):
        n = rng.randint(2, 6)
        k = rng.randint(1, min(4, n))
        m = rng.choice([2, 3])
        sp = spec(rng.randrange(m), rng.randrange(m), m)
        gp = GraphWithPortals(_random_graph(rng, n), tuple(range(k)))
        strat = realized_language(gp, sp, size_stratified=True)
        for lang_i in strat.values():
            if not len(lang_i):
                continue
            assert len(lang_i) <= m ** k  # size bound for sparse languages
            groups = lang_i.groups()
            sds = sigma_defining_set(list(groups.keys()))
            sds.validate(list(groups.keys()))
            assert m ** len(sds.complement) <= m ** k  # |Z_S| bound
            strings = lang_i.strings()
            for x in strings:
                sx, wx = decompose(x)
                for y in strings:
                    sy, wy = decompose(y)
                    if sx != sy:
                        continue
                    for z in strings:
                        sz, _ = decompose(z)
                        dot = sum((a - b) * c for a, b, c in zip(wx, wy, sz))
                        assert dot % m == 0
                    # determination: equal weights on the complement force equality
                    if all(wx[i] == wy[i] for i in sds.complement):
                        assert wx == wy


def test_from_strings_length_mismatch():
    with pytest.raises(ValueError):
        Language.from_strings(2, (0, 1), [(S(0),)])


def test_sigma_defining_set_rejects_empty():
    with pytest.raises(ValueError):
        sigma_defining_set([])

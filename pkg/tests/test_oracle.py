import pytest

from srdomset.graphs import Graph, GraphWithPortals
from srdomset.instances import gen_grid
from srdomset.oracle import (
    OracleCapError,
    brute_force_sizes,
    gf2_min_weight,
    gf2_solve,
    lights_out_system,
    realized_language,
)
from srdomset.residues import REFLEXIVE_ALLOFF, State, spec
from srdomset.sparse import is_sparse

S, R = State.sigma, State.rho


def feasible_set(v):
    return {i for i, b in enumerate(v) if b}


def test_brute_force_empty_graph():
    assert feasible_set(brute_force_sizes(Graph(0, []), REFLEXIVE_ALLOFF)) == {0}


def test_brute_force_k3_reflexive():
    g = Graph(3, [(0, 1), (1, 2), (0, 2)])
    assert feasible_set(brute_force_sizes(g, REFLEXIVE_ALLOFF)) == {1, 3}


def test_brute_force_p2_alloff():
    g = Graph(2, [(0, 1)])
    assert feasible_set(brute_force_sizes(g, spec(1, 1, 2))) == {2}


def test_brute_force_cap():
    g = Graph(30, [])
    with pytest.raises(OracleCapError, match="over|30"):
        brute_force_sizes(g, REFLEXIVE_ALLOFF)
    # explicit cap raise works
    brute_force_sizes(Graph(23, []), REFLEXIVE_ALLOFF, cap=23)


def test_brute_force_cap_env(monkeypatch):
    monkeypatch.setenv("SRK_ORACLE_CAP", "5")
    with pytest.raises(OracleCapError):
        brute_force_sizes(Graph(6, []), REFLEXIVE_ALLOFF)


def test_realized_language_single_vertex():
    gp = GraphWithPortals(Graph(1, []), (0,))
    lang = realized_language(gp, REFLEXIVE_ALLOFF)
    assert set(lang.strings()) == {(S(0),), (R(0),)}


def test_realized_language_edge():
    gp = GraphWithPortals(Graph(2, [(0, 1)]), (0,))
    lang = realized_language(gp, REFLEXIVE_ALLOFF)
    assert set(lang.strings()) == {(S(0),), (R(1),)}


def test_realized_language_stratified_sparse():
    import random

    rng = random.Random(9)
    for trial in range(25):
        n = rng.randint(2, 6)
        k = rng.randint(1, min(4, n))
        m = rng.choice([2, 3, 4])
        sp = spec(rng.randrange(m), rng.randrange(m), m)
        edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.5]
        gp = GraphWithPortals(Graph(n, edges), tuple(range(k)))
        strat = realized_language(gp, sp, size_stratified=True)
        union = set()
        for lang in strat.values():
            assert is_sparse(lang)
            union |= set(lang.strings())
        assert union == set(realized_language(gp, sp).strings())


def test_gf2_3x3_grid():
    g, _ = gen_grid(3, 3)
    x0, basis = gf2_solve(lights_out_system(g, "reflexive"))
    assert basis == []  # invertible system
    assert bin(x0).count("1") == 5
    assert gf2_min_weight(x0, basis) == 5


def test_gf2_5x5_grid():
    g, _ = gen_grid(5, 5)
    x0, basis = gf2_solve(lights_out_system(g, "reflexive"))
    assert len(basis) == 2
    assert gf2_min_weight(x0, basis) == 15


def test_gf2_single_vertex_plain_infeasible():
    g = Graph(1, [])
    assert gf2_solve(lights_out_system(g, "plain")) is None


def test_gf2_min_weight_trivial_kernel():
    assert gf2_min_weight(0b1011, []) == 3


def test_gf2_min_weight_prefers_lighter_coset_mate():
    assert gf2_min_weight(0b111, [0b110]) == 1


def test_gf2_min_weight_cap():
    assert gf2_min_weight(1, [1 << i for i in range(30)], cap=24) is None


def test_gf2_matches_brute_force_on_parity_specs():
    import random

    rng = random.Random(4)
    for trial in range(30):
        n = rng.randint(1, 9)
        edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.4]
        g = Graph(n, edges)
        for variant, sp in (("reflexive", spec(0, 1, 2)), ("plain", spec(1, 1, 2))):
            res = gf2_solve(lights_out_system(g, variant))
            bf = brute_force_sizes(g, sp)
            assert (res is not None) == bool(bf.any())
            if res is not None:
                x0, basis = res
                hits = feasible_set(bf)
                assert gf2_min_weight(x0, basis) == min(hits)


def test_gf2_respects_patterns():
    import random

    rng = random.Random(14)
    for trial in range(15):
        n = rng.randint(1, 8)
        edges = [(u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < 0.4]
        g = Graph(n, edges)
        pattern = [rng.random() < 0.5 for _ in range(n)]
        shifts = [0 if on else 1 for on in pattern]
        res = gf2_solve(lights_out_system(g, "reflexive", pattern))
        bf = brute_force_sizes(g, spec(0, 1, 2), shifts=shifts)
        assert (res is not None) == bool(bf.any())

import pytest

from srdomset.residues import (
    EVEN,
    ODD,
    Classification,
    ProblemSpec,
    ResidueClass,
    State,
    classify,
    cut_set,
    decompose,
    inverse,
    pack_states,
    parse_residue_class,
    recompose,
    spec,
    unpack_code,
)


def test_residue_class_canonical():
    rc = ResidueClass(2, 3)
    assert rc.min == 2
    assert 2 in rc and 5 in rc and 8 in rc
    assert 0 not in rc and 4 not in rc
    with pytest.raises(ValueError):
        ResidueClass(3, 3)
    with pytest.raises(ValueError):
        ResidueClass(0, 0)


def test_parse_residue_class():
    assert parse_residue_class("1/2") == ODD
    assert parse_residue_class("0/2") == EVEN
    with pytest.raises(ValueError):
        parse_residue_class("12")
    with pytest.raises(ValueError):
        parse_residue_class("x/2")


def test_mixed_moduli_rejected():
    with pytest.raises(ValueError):
        ProblemSpec(ResidueClass(0, 2), ResidueClass(0, 3))


def test_decompose_examples():
    x = (State.sigma(1), State.rho(0), State.rho(2))
    assert decompose(x) == ((1, 0, 0), (1, 0, 2))
    allrho = (State.rho(0),) * 3
    assert decompose(allrho) == ((0, 0, 0), (0, 0, 0))
    assert decompose(()) == ((), ())


def test_decompose_recompose_bijection():
    m = 3
    for code in range((2 * m) ** 2):
        x = unpack_code(code, 2, m)
        assert recompose(*decompose(x)) == x


def test_classify_examples():
    assert classify(spec(0, 1, 2)) is Classification.EASY  # EVEN, ODD
    assert classify(spec(0, 0, 3)) is Classification.EASY  # 0 in rho
    assert classify(spec(0, 1, 3)) is Classification.DIFFICULT
    with pytest.raises(ValueError):
        classify(spec(0, 0, 1))


def test_classify_exhaustive_table():
    # Easy iff 0 in rho, or one of the two m=2 parity pairs.
    for m in range(2, 5):
        for a_sig in range(m):
            for a_rho in range(m):
                got = classify(spec(a_sig, a_rho, m))
                easy = a_rho == 0 or (m == 2 and a_rho == 1)
                assert got is (Classification.EASY if easy else Classification.DIFFICULT)


def test_cut_set_examples():
    assert cut_set(ResidueClass(2, 3)) == {2, 5}
    assert cut_set(ResidueClass(0, 2)) == {0, 2}
    assert cut_set(ResidueClass(1, 5)) == {1, 6}


def test_inverse_examples():
    assert inverse(1, ResidueClass(1, 2)) == 0
    assert inverse(1, ResidueClass(2, 3)) == 1
    assert inverse(3, ResidueClass(0, 4)) == 1
    assert (3 + 1) in ResidueClass(0, 4)


@pytest.mark.parametrize("m", [2, 3, 4, 5, 6])
def test_inverse_involution_property(m):
    for a in range(m):
        rc = ResidueClass(a, m)
        for n in range(m):
            assert inverse(inverse(n, rc), rc) == n
            assert (n + inverse(n, rc)) % m == a


def test_state_rendering():
    assert str(State.sigma(1)) == "s1"
    assert str(State.rho(0)) == "r0"


def test_pack_unpack_roundtrip():
    m = 4
    xs = (State.rho(3), State.sigma(0), State.sigma(3), State.rho(1))
    assert unpack_code(pack_states(xs, m), 4, m) == xs

import pytest

from artifact import arith
from artifact import factorize as fz
from artifact.gammal1 import FoulserTriple, group_order, is_subgroup, parse_triple
from artifact.linpoly import IndexSet, SpaceParams, index_sets

SP32 = SpaceParams("sp", 3, 2)
SP24 = SpaceParams("sp", 2, 4)
OP42 = SpaceParams("oplus", 4, 2)
SU23 = SpaceParams("unitary", 2, 3)
DESK = [SP32, SP24, OP42, SU23]


def _T(P):
    return FoulserTriple(1, P.p**P.degree - 1, 1, P.p, P.degree)


def test_decide_examples():
    dec = fz.decide_HB(SP32, IndexSet(SP32, (0,)), parse_triple("1:7:3", 2, 3))
    assert dec.verdict is True and dec.branch == "sp(a)"
    singer = FoulserTriple(1, 80, 4, 3, 4)
    dec = fz.decide_HB(SU23, IndexSet(SU23, (1,)), singer)
    assert dec.verdict is True and dec.d == 1 and dec.witnesses["class_transitive"]
    dec = fz.decide_HB(OP42, IndexSet(OP42, (2,)), _T(OP42))
    assert dec.verdict is True and dec.branch == "oplus(b)" and dec.d == 2


def test_necessary_condition_examples():
    assert fz.necessary_d_condition(SU23, IndexSet(SU23, (1,)))[0]
    U33 = SpaceParams("unitary", 3, 3)
    assert not fz.necessary_d_condition(U33, IndexSet(U33, (2,)))[0]
    O43 = SpaceParams("oplus", 4, 3)
    assert not fz.necessary_d_condition(O43, IndexSet(O43, (2,)))[0]


def test_inconsistent_overgroup_rejected():
    G = fz.unitary_overgroup(2, 3, 4, 1, 1)
    with pytest.raises(ValueError):
        fz.decide_HB(SU23, IndexSet(SU23, (1,)), _T(SU23), G)
    with pytest.raises(ValueError):
        fz.unitary_overgroup(2, 3, 3, 1, 1)


def test_outside_hypotheses():
    P = SpaceParams("unitary", 3, 2)
    S = FoulserTriple(1, 63, 1, 2, 6)
    dec = fz.decide_HB(P, IndexSet(P, (1,)), S)
    assert dec.verdict is None and dec.branch == fz.OUTSIDE
    assert isinstance(fz.verify_by_orbits(P, IndexSet(P, (1,)), S), bool)


def test_existence_examples():
    assert fz.decide_existence_for_G(fz.sp_overgroup(3, 2, 1))
    assert fz.decide_existence_for_G(fz.unitary_overgroup(2, 3, 1, 1, 2))
    O = SpaceParams("oplus", 4, 5)
    assert not fz.decide_existence_for_G(fz.oplus_overgroup(4, 5, []))
    assert not fz.decide_existence_for_G(fz.oplus_overgroup(4, 5, [(0, 1, 0)]))
    assert fz.decide_existence_for_G(fz.oplus_overgroup(4, 5, [(1, 0, 0)]))
    assert O.q % 4 == 1


def test_printed_exponent_counterexample():
    # G cap T = <a^4><a phi>; no U(I):(G cap T) is transitive, though the
    # p^(me) reading of the existence conditions says otherwise
    G = fz.unitary_overgroup(2, 3, 4, 1, 1)
    assert fz.decide_existence_for_G(G, printed_exponent=True)
    assert not fz.decide_existence_for_G(G)
    assert not fz.existence_by_orbits(G)
    assert not fz.existence_by_theorem(G)


@pytest.mark.parametrize("P", DESK, ids=str)
def test_existence_consistency(P):
    for G in fz.overgroup_specs(P):
        ans = fz.decide_existence_for_G(G)
        assert ans == fz.existence_by_theorem(G) == fz.existence_by_orbits(G), G.label()


@pytest.mark.parametrize("P", DESK, ids=str)
def test_outer_images_are_homomorphic(P):
    # the image of a^e phi^t is multiplicative along the GammaL_1 product
    from artifact.gammal1 import compose, element
    p, deg = P.p, P.degree
    n = p**deg - 1
    samples = [element(e, t, p, deg) for e in (0, 1, 2, n // 2, n - 1) for t in range(deg)]
    for g in samples:
        for h in samples:
            lhs = fz.outer_image(P, compose(g, h))
            rhs = fz._out_mul(P, fz.outer_image(P, g), fz.outer_image(P, h))
            assert lhs == rhs


def test_intersection_with_T():
    G = fz.unitary_overgroup(2, 3, 4, 1, 1)
    GT = fz.intersection_with_T(G)
    assert fz.in_overgroup(G, GT)
    assert (GT.ell, GT.k) == (4, 1)
    assert all(is_subgroup(S, GT) for S in fz.subgroups_in(G))
    # the full group meets T in all of T
    assert fz.intersection_with_T(fz.full_overgroup(SU23)) == _T(SU23)


def test_theorem_matches_oracle_sp32():
    for G in fz.overgroup_specs(SP32):
        for S in fz.subgroups_in(G):
            for I in index_sets(SP32):
                assert fz.decide_HB(SP32, I, S, G).verdict == fz.verify_by_orbits(SP32, I, S)


@pytest.mark.parametrize("P", DESK, ids=str)
def test_necessary_condition_soundness(P):
    for I in index_sets(P):
        if fz.verify_by_orbits(P, I, _T(P)):
            assert fz.necessary_d_condition(P, I)[0]


@pytest.mark.parametrize("P,I,S", [
    (SP32, (0,), "1:7:3"),
    (SP32, (1,), "1:7:1"),
    (OP42, (1,), "1:15:4"),
    (OP42, (2,), "1:15:1"),
])
def test_stabilizer_order_product(P, I, S):
    S = parse_triple(S, P.p, P.degree)
    I = IndexSet(P, I)
    st = fz.stabilizer_structure(P, I, S)
    size = len(fz.harness(P).space.points)
    transitive = fz.verify_by_orbits(P, I, S)
    assert (fz.h_order(P, I, S) == st.order * size) == transitive
    assert fz.decide_HB(P, I, S).verdict == transitive


def test_stabilizer_examples():
    st = fz.stabilizer_structure(SP32, IndexSet(SP32, ()), None)
    assert st.order == 1
    st = fz.stabilizer_structure(SP32, IndexSet(SP32, (0,)), parse_triple("1:7:3", 2, 3))
    assert (st.order, st.unipotent_part_order, st.levi_part_order) == (2, 2, 1)
    st = fz.stabilizer_structure(OP42, IndexSet(OP42, (1, 2)), _T(OP42))
    assert fz.h_order(OP42, IndexSet(OP42, (1, 2)), None) // st.unipotent_part_order == OP42.q ** (OP42.m - 1)


def test_exactness_sp32():
    rep = fz.exactness_check(SP32, IndexSet(SP32, (0,)), parse_triple("1:7:3", 2, 3))
    assert rep.transitive and rep.exact
    assert rep.h_order == 56 and rep.stabilizer_order == 2
    assert rep.dickson_invariants == [1]
    assert rep.h_order * arith.order_omega_minus(6, 2) == arith.order_sp(6, 2)
    rep = fz.exactness_check(SP32, IndexSet(SP32, (0, 1)), parse_triple("1:7:3", 2, 3))
    assert rep.transitive and not rep.exact and not rep.order_identity


def test_exactness_sp24_regular():
    S = FoulserTriple(1, 15, 4, 2, 4)
    assert group_order(S) == 15
    rep = fz.exactness_check(SP24, IndexSet(SP24, (0,)), S)
    assert rep.transitive and not rep.exact
    assert rep.stabilizer_in_omega

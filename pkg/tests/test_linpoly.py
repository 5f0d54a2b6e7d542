import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from artifact import linpoly as lp
from artifact.gf import make_field
from artifact.linpoly import IndexSet, LinPoly, SpaceParams

DESK = [SpaceParams("sp", 3, 2), SpaceParams("sp", 2, 4), SpaceParams("oplus", 4, 2), SpaceParams("unitary", 2, 3)]


def _poly(F, rdeg, coeffs):
    return LinPoly(F, rdeg, tuple(coeffs))


def _random_poly(rng, F, rdeg):
    return _poly(F, rdeg, [rng.randrange(F.q) for _ in range(F.f // rdeg)])


def test_space_params():
    P = SpaceParams("unitary", 3, 2)
    assert (P.s, P.r, P.degree) == (2, 4, 6)
    assert SpaceParams("sp", 3, 2).indices == (0, 1)
    assert SpaceParams("oplus", 4, 2).indices == (1, 2)
    assert SpaceParams("unitary", 2, 3).indices == (1,)
    assert SpaceParams("unitary", 3, 3).indices == (1, 2)
    assert not SpaceParams("oplus", 4, 3).in_hypothesis()
    with pytest.raises(ValueError):
        SpaceParams("sp", 2, 6)
    with pytest.raises(ValueError):
        IndexSet(SpaceParams("oplus", 4, 2), (0,))


def test_eval_examples():
    F = make_field(3, 2)
    X = lp.identity_poly(F, 1)
    w = F.generator
    assert X(w) == w
    assert lp.zero_poly(F, 1)(w) == 0
    assert _poly(F, 1, [1, 1])(w) == F.add(w, F.w(3))


@settings(max_examples=50)
@given(st.integers(0, 2**32))
def test_compose_is_pointwise(seed):
    rng = random.Random(seed)
    F = SpaceParams("sp", 4, 2).field
    h1, h2 = _random_poly(rng, F, 1), _random_poly(rng, F, 1)
    c = lp.compose(h1, h2)
    assert all(c(x) == h1(h2(x)) for x in F.elements())


@settings(max_examples=50)
@given(st.integers(0, 2**32), st.sampled_from([(3, 3, 1), (2, 6, 1), (2, 6, 2), (3, 4, 2), (5, 2, 1)]))
def test_permutation_and_inverse(seed, case):
    p, deg, rdeg = case
    F = make_field(p, deg)
    h = _random_poly(random.Random(seed), F, rdeg)
    bijective = len({h(x) for x in F.elements()}) == F.q
    assert lp.is_permutation(h) == bijective
    if bijective:
        g = lp.inverse(h)
        assert all(g(h(x)) == x for x in F.elements())


def test_permutation_examples():
    F = make_field(3, 2)
    X = lp.identity_poly(F, 1)
    assert lp.is_permutation(X) and lp.inverse(X) == X
    assert not lp.is_permutation(_poly(F, 1, [F.neg(1), 1]))
    a = F.w(3)
    assert lp.inverse(_poly(F, 1, [a, 0])) == _poly(F, 1, [F.inv(a), 0])


# (p, f, m, s): q = p^f, r = q^s, field F_{r^m}
@pytest.mark.parametrize("p,f,m,s", [(2, 2, 2, 1), (2, 1, 4, 1), (2, 1, 2, 2), (3, 1, 2, 1), (3, 1, 2, 2)])
def test_adjoint_monomial_and_identity(p, f, m, s):
    F = make_field(p, f * s * m)
    q, r, rdeg = p**f, p ** (f * s), f * s
    X = lp.identity_poly(F, rdeg)
    assert lp.adjoint(X, s) == X
    for e in (1, 3, 7):
        a = F.w(e)
        hs = lp.adjoint(_poly(F, rdeg, [a] + [0] * (m - 1)), s)
        assert lp.adjoint_identity_holds(_poly(F, rdeg, [a] + [0] * (m - 1)), hs, s)
        assert hs == _poly(F, rdeg, [F.pow(F.inv(a), r ** (m - 1) * q)] + [0] * (m - 1))


@settings(max_examples=20)
@given(st.integers(0, 2**32))
def test_adjoint_trace_identity_random(seed):
    rng = random.Random(seed)
    P = SpaceParams("sp", 4, 2)
    F = P.field
    while True:
        h = _random_poly(rng, F, 1)
        if lp.is_permutation(h):
            break
    assert lp.adjoint_identity_holds(h, lp.adjoint(h, 1), 1)
    # a perturbed adjoint must fail
    wrong = lp.adjoint(h, 1) + _poly(F, 1, [1, 0, 0, 0])
    assert not lp.adjoint_identity_holds(h, wrong, 1)


def test_module_dimension_example():
    assert lp.module_dimension(1, SpaceParams("unitary", 2, 3)) == 4
    assert lp.module_dimension(2, SpaceParams("oplus", 4, 2)) == 2


@pytest.mark.parametrize("P", DESK, ids=str)
def test_module_elements_satisfy_relations(P):
    for I in lp.index_sets(P):
        seen = set()
        for _, h in lp.module_elements(I, P):
            assert lp.coefficient_relations_hold(h, P)
            seen.add(h.coeffs)
        assert len(seen) == lp.module_size(I, P)


def test_symplectic_radical_is_alternating():
    P = SpaceParams("sp", 3, 2)
    for _, h in lp.module_elements(IndexSet(P, (0, 1)), P):
        assert lp.symplectic_form_vanishes(h, P)


def test_d_invariant_examples():
    assert lp.d_invariant(IndexSet(SpaceParams("unitary", 3, 3), (2,))) == 3
    assert lp.d_invariant(IndexSet(SpaceParams("oplus", 4, 2), (1, 2))) == 1
    assert lp.d_invariant(IndexSet(SpaceParams("oplus", 4, 2), (2,))) == 2
    assert lp.d_invariant(IndexSet(SpaceParams("sp", 3, 2), (0,))) == 3


def test_character_examples():
    P = SpaceParams("sp", 3, 2)
    assert lp.character(0, 1, P) == 1
    U = SpaceParams("unitary", 2, 3)
    F = U.field
    for x in (1, F.generator, F.w(17)):
        assert lp.character(1, x, U) == F.trace(F.pow(x, 4), 4, 1)


@pytest.mark.parametrize("P", DESK + [SpaceParams("unitary", 3, 2)], ids=str)
def test_character_matches_action_trace(P):
    F = P.field
    for i in P.indices:
        for e in range(0, F.n, max(1, F.n // 13)):
            assert lp.character(i, F.w(e), P) == lp.character_by_action(i, F.w(e), P)


def test_kernel_count_examples():
    P = SpaceParams("sp", 3, 2)
    assert lp.kernel_count(IndexSet(P, (1,)), P.field.generator) == 2
    U = SpaceParams("unitary", 2, 3)
    assert lp.kernel_count(IndexSet(U, (1,)), U.field.w(5)) == 3
    # the half module of O+(4,2) has four elements and only 0 kills a given x
    O = SpaceParams("oplus", 4, 2)
    assert lp.module_size(IndexSet(O, (2,)), O) == 4
    assert lp.kernel_count(IndexSet(O, (2,)), 1) == 1
    assert lp.kernel_count_bruteforce(IndexSet(O, (2,)), 1) == 1


@pytest.mark.parametrize("P", [SpaceParams("unitary", 3, 2), SpaceParams("oplus", 5, 2), SpaceParams("sp", 4, 2)], ids=str)
def test_kernel_count_off_desk(P):
    F = P.field
    for I in lp.index_sets(P):
        if 0 in I:
            continue
        for x in (1, F.generator, F.w(F.n // 3 + 1)):
            assert lp.kernel_count(I, x) == lp.kernel_count_bruteforce(I, x)


def test_irreducibility():
    P = SpaceParams("oplus", 4, 2)
    assert lp.is_irreducible_under(1, 1, P)
    # every index divisor up to the bound, checked against the span oracle
    for P in [SpaceParams("unitary", 2, 3), SpaceParams("sp", 3, 2), SpaceParams("oplus", 4, 2), SpaceParams("unitary", 3, 3)]:
        bound = lp.irreducibility_index_bound(P)
        for i in P.indices:
            if i == 0:
                continue
            for d in range(1, bound + 1):
                if bound % d == 0:
                    assert lp.is_irreducible_under(i, d, P)


def test_irreducibility_exception_instances():
    # the exception list marks where irreducibility can fail; two of them do
    assert not lp.is_irreducible_under(1, lp.irreducibility_index_bound(SpaceParams("unitary", 3, 2)), SpaceParams("unitary", 3, 2))
    P = SpaceParams("oplus", 4, 3)
    assert not lp.is_irreducible_under(P.half_index, lp.irreducibility_index_bound(P), P)

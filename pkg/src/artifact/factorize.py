"""Decision procedures for G = HB with H = U(I):S solvable, B the stabilizer of
a nonsingular point (unitary, orthogonal) or of an elliptic quadric
(symplectic), together with the brute-force orbit harness that checks them.

Overgroups G = L.O are described by their outer part O, a subgroup of a small
explicit group Out:

* unitary: pairs (x, y) standing for delta^x phi^y, x mod q + 1, y mod 2f,
  with phi^-1 delta phi = delta^p; delta has determinant N(w)^(q-1);
* orthogonal plus: triples (x', x'', y) for delta'^x' delta''^x'' phi^y, where
  delta' is the spinor-norm class (the Dickson invariant for q even) and
  delta'' the determinant class (trivial for q even);
* symplectic: (y,) for phi^y, y mod f.

The image of T = GammaL_1(r^m) in Out is computed from explicit matrices, so
"S <= G cap T" is a finite membership test.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache

from . import arith
from .gammal1 import (
    FoulserTriple,
    GammaL1Element,
    element,
    elements as triple_elements,
    enumerate_subgroups,
    is_transitive,
    is_transitive_on_classes,
    triple_of_elements,
)
from .gf import rank
from .linpoly import (
    IndexSet,
    SpaceParams,
    d_invariant,
    index_sets,
    module_elements,
    module_size,
)
from .polarspace import (
    PolarSpace,
    SingerPower,
    Unipotent,
    Word,
    determinant,
    frobenius_linear_part,
    orbits_from_permutations,
    unipotent_generators,
)

OUTSIDE = "outside theorem hypotheses"


# -- outer automorphism groups ------------------------------------------------

def _out_mul(params: SpaceParams, g: tuple, h: tuple) -> tuple:
    q, p, f = params.q, params.p, params.f
    if params.kind == "unitary":
        pinv = pow(p, -g[1], q + 1)
        return ((g[0] + h[0] * pinv) % (q + 1), (g[1] + h[1]) % (2 * f))
    if params.kind == "oplus":
        return ((g[0] + h[0]) % 2, (g[1] + h[1]) % math.gcd(2, q - 1), (g[2] + h[2]) % f)
    return ((g[0] + h[0]) % f,)


def out_identity(params: SpaceParams) -> tuple:
    return {"unitary": (0, 0), "oplus": (0, 0, 0), "sp": (0,)}[params.kind]


def out_closure(params: SpaceParams, gens) -> frozenset:
    """The subgroup of Out generated by gens."""
    group = {out_identity(params)}
    frontier = list(group)
    gens = [tuple(g) for g in gens]
    while frontier:
        new = []
        for x in frontier:
            for g in gens:
                y = _out_mul(params, x, g)
                if y not in group:
                    group.add(y)
                    new.append(y)
        frontier = new
    return frozenset(group)


def out_elements(params: SpaceParams) -> list[tuple]:
    q, f = params.q, params.f
    if params.kind == "unitary":
        return [(x, y) for y in range(2 * f) for x in range(q + 1)]
    if params.kind == "oplus":
        return [(a, b, y) for y in range(f) for b in range(math.gcd(2, q - 1)) for a in range(2)]
    return [(y,) for y in range(f)]


@dataclass(frozen=True)
class OvergroupSpec:
    """G = L.O with O given by generators inside Out (see the module docstring).

    For the unitary family (ell, d, e) records O = <delta^ell, delta^d phi^e>.
    """

    kind: str
    m: int
    q: int
    gens: tuple
    ell: int | None = None
    d: int | None = None
    e: int | None = None

    @property
    def params(self) -> SpaceParams:
        return SpaceParams(self.kind, self.m, self.q)

    @property
    def outer(self) -> frozenset:
        return out_closure(self.params, self.gens)

    @property
    def outer_in_delta2_phi(self) -> bool:
        """Orthogonal plus: the outer part lies in <delta'', phi>."""
        return all(x[0] == 0 for x in self.outer)

    def label(self) -> str:
        if self.kind == "unitary":
            return f"U(l={self.ell},d={self.d},e={self.e})"
        if self.kind == "sp":
            return f"Sp.<phi^{self.e}>"
        return "O+.<" + ",".join("d'^%d d''^%d phi^%d" % g for g in self.gens) + ">"


def unitary_overgroup(m: int, q: int, ell: int, d: int, e: int) -> OvergroupSpec:
    p, f = SpaceParams("unitary", m, q).p, SpaceParams("unitary", m, q).f
    if (q + 1) % ell or not 1 <= d <= q + 1 or (2 * f) % e:
        raise ValueError("need ell | q+1, 1 <= d <= q+1 and e | 2f")
    if ((q * q - 1) * d) % ((p**e - 1) * ell):
        raise ValueError("closure condition (p^e - 1) ell | (q^2 - 1) d fails")
    return OvergroupSpec("unitary", m, q, ((ell % (q + 1), 0), (d % (q + 1), e % (2 * f))), ell, d, e)


def sp_overgroup(m: int, q: int, e: int) -> OvergroupSpec:
    f = SpaceParams("sp", m, q).f
    if f % e:
        raise ValueError("e must divide f")
    return OvergroupSpec("sp", m, q, ((e % f,),), e=e)


def oplus_overgroup(m: int, q: int, gens) -> OvergroupSpec:
    params = SpaceParams("oplus", m, q)
    allowed = set(out_elements(params))
    gens = tuple(sorted(tuple(g) for g in gens))
    if any(g not in allowed for g in gens):
        raise ValueError("generator outside Out")
    return OvergroupSpec("oplus", m, q, gens)


def full_overgroup(params: SpaceParams) -> OvergroupSpec:
    """The full semilinear isometry group (GammaU, GammaO+, GammaSp)."""
    if params.kind == "unitary":
        return unitary_overgroup(params.m, params.q, 1, 1, 1)
    if params.kind == "sp":
        return sp_overgroup(params.m, params.q, 1)
    return oplus_overgroup(params.m, params.q, out_elements(params))


def overgroup_specs(params: SpaceParams) -> list[OvergroupSpec]:
    """Every admissible OvergroupSpec (for the orthogonal family one per subgroup of Out)."""
    m, q = params.m, params.q
    if params.kind == "sp":
        return [sp_overgroup(m, q, e) for e in arith.divisors(params.f)]
    if params.kind == "unitary":
        out = []
        for ell in arith.divisors(q + 1):
            for d in range(1, q + 2):
                for e in arith.divisors(2 * params.f):
                    try:
                        out.append(unitary_overgroup(m, q, ell, d, e))
                    except ValueError:
                        pass
        return out
    seen, out = set(), []
    elems = out_elements(params)
    for size in range(0, 4):
        for gens in itertools.combinations(elems, size):
            grp = out_closure(params, gens)
            if grp not in seen:
                seen.add(grp)
                out.append(oplus_overgroup(m, q, gens))
    return out


# -- the image of T in Out ----------------------------------------------------

@lru_cache(maxsize=None)
def _space(params: SpaceParams) -> PolarSpace:
    return PolarSpace(params)


def _square_class(F, x: int, deg: int) -> int:
    """0 for a nonzero square of F_(p^deg), 1 otherwise (p odd)."""
    return 0 if F.pow(x, (F.p**deg - 1) // 2) == 1 else 1


@lru_cache(maxsize=None)
def frobenius_offset(params: SpaceParams) -> tuple:
    """Out-class of the linear isometry g with (x, y) -> (x^p, y^p) equal to the
    hyperbolic-basis Frobenius followed by g.

    Unitary: the exponent c with det g = zeta^c, zeta = N(w)^(q-1).  Orthogonal:
    (spinor or Dickson class, 0).  Symplectic: ().  This records how the
    field-model Frobenius, which is the phi used throughout, differs from a
    basis-standard one.
    """
    space = _space(params)
    F, m = space.F, params.m
    M = frobenius_linear_part(space)
    if params.kind == "sp":
        return ()
    if params.kind == "unitary":
        q = params.q
        zeta = F.pow(F.norm(F.generator, params.degree, params.rdeg), q - 1)
        logs = {F.pow(zeta, k): k for k in range(q + 1)}
        return (logs[determinant(F, M)],)
    return (_orth_class(params, M), 0)


def _orth_class(params: SpaceParams, M) -> int:
    F, m = params.field, params.m
    if params.q % 2 == 0:
        D = [row[:] for row in M]
        for i in range(len(D)):
            D[i][i] = F.sub(D[i][i], 1)
        return rank(F, D) % 2
    # M is block diagonal diag(A, A^-T); its spinor norm is det A modulo squares
    return _square_class(F, determinant(F, [row[:m] for row in M[:m]]), params.f)


@lru_cache(maxsize=None)
def outer_images(params: SpaceParams) -> tuple[tuple, tuple]:
    """Images in Out of the Singer generator a and of the p-Frobenius phi of T.

    phi is the Frobenius of the field model itself, so it maps to the
    generator phi of Out; the image of a is read off its matrix.
    """
    space = _space(params)
    F = space.F
    if params.kind == "sp":
        return (0,), (1 % params.f,)
    Ma = space.matrix_of(SingerPower(1, 0))
    if params.kind == "unitary":
        q = params.q
        # delta is the class of determinant N(w)^(1-q), the determinant of a
        zeta = F.pow(F.norm(F.generator, params.degree, params.rdeg), 1 - q)
        logs = {F.pow(zeta, k): k for k in range(q + 1)}
        return (logs[determinant(F, Ma)], 0), (0, 1)
    return (_orth_class(params, Ma), 0, 0), (0, 0, 1 % params.f)


def outer_image(params: SpaceParams, g: GammaL1Element) -> tuple:
    """Image of a^e phi^t in Out."""
    img_a, img_phi = outer_images(params)
    x = out_identity(params)
    # a^e first: a generates an abelian image so repeated squaring is unnecessary
    a_pow = out_identity(params)
    base, e = img_a, g.e
    while e:
        if e & 1:
            a_pow = _out_mul(params, a_pow, base)
        base = _out_mul(params, base, base)
        e >>= 1
    x = _out_mul(params, x, a_pow)
    for _ in range(g.t):
        x = _out_mul(params, x, img_phi)
    return x


def in_overgroup(G: OvergroupSpec, S: FoulserTriple) -> bool:
    """S <= G cap T, checked on the two generators of S."""
    params = G.params
    O = G.outer
    return all(outer_image(params, g) in O for g in (element(S.ell, 0, S.p, S.f), element(S.j, S.k, S.p, S.f)))


def intersection_with_T(G: OvergroupSpec) -> FoulserTriple:
    """The Foulser triple of G cap T."""
    params = G.params
    O = G.outer
    T = [element(e, t, params.p, params.degree) for t in range(params.degree) for e in range(params.p**params.degree - 1)]
    return triple_of_elements({g for g in T if outer_image(params, g) in O})


def subgroups_in(G: OvergroupSpec) -> list[FoulserTriple]:
    params = G.params
    return [S for S in enumerate_subgroups(params.p, params.degree) if in_overgroup(G, S)]


# -- theorem side ---------------------------------------------------------------

@dataclass
class FactorizationDecision:
    verdict: bool | None
    branch: str | None
    d: int
    witnesses: dict = field(default_factory=dict)
    reason: str = ""

    def to_dict(self) -> dict:
        return {"verdict": self.verdict, "branch": self.branch, "d": self.d, "witnesses": self.witnesses, "reason": self.reason}


def class_modulus(params: SpaceParams) -> int:
    """The i for which transitivity on W_(i) is the relevant condition, as a divisor of r^m - 1."""
    n = params.r**params.m - 1
    if params.kind == "unitary":
        return n // (params.q + 1)
    if params.kind == "oplus":
        return n // math.gcd(2, params.q - 1)
    return n


def necessary_d_condition(params: SpaceParams, I: IndexSet) -> tuple[bool, str]:
    d = d_invariant(I)
    q = params.q
    if params.kind == "unitary":
        return d == 1, f"d(I) = {d}; needs d(I) = 1"
    if params.kind == "oplus":
        ok = d == 1 or (d == 2 and q in (2, 4))
        return ok, f"d(I) = {d}; needs d(I) = 1, or d(I) = 2 with q in {{2, 4}}"
    ok = 0 in I or d in (1, 2)
    return ok, f"d(I) = {d}; needs 0 in I or d(I) in {{1, 2}}"


def _check_S(params: SpaceParams, S: FoulserTriple) -> None:
    if (S.p, S.f) != (params.p, params.degree):
        raise ValueError(f"S must be a subgroup of GammaL_1({params.p}^{params.degree})")


def decide_HB(params: SpaceParams, I: IndexSet, S: FoulserTriple, G: OvergroupSpec | None = None) -> FactorizationDecision:
    """Arithmetic verdict on G = HB for H = U(I):S."""
    _check_S(params, S)
    if I.params != params:
        raise ValueError("index set belongs to another space")
    if G is None:
        G = full_overgroup(params)
    elif (G.kind, G.m, G.q) != (params.kind, params.m, params.q):
        raise ValueError("overgroup for another space")
    if not in_overgroup(G, S):
        raise ValueError(f"S = {S.serialize()} is not contained in G cap T for {G.label()}")
    d = d_invariant(I)
    if not params.in_hypothesis():
        return FactorizationDecision(None, OUTSIDE, d, reason="use verify_by_orbits")
    q, kind = params.q, params.kind
    trans = is_transitive(S)
    k_odd = S.k % 2 == 1
    w = {"transitive": trans, "k": S.k, "k_odd": k_odd}
    if kind == "unitary":
        ct = is_transitive_on_classes(S, class_modulus(params))
        w["class_transitive"] = ct
        ok = d == 1 and ct
        return FactorizationDecision(ok, "unitary" if ok else None, d, w, "" if ok else "needs d(I) = 1 and S transitive on W_(q+1)")
    if kind == "oplus":
        ct = is_transitive_on_classes(S, class_modulus(params))
        w["class_transitive"] = ct
        if d == 1 and ct:
            return FactorizationDecision(True, "oplus(a)", d, w)
        if d == 2 and q == 2 and trans and k_odd:
            return FactorizationDecision(True, "oplus(b)", d, w)
        O = G.outer
        beyond_l = len(O) >= 2 and O != out_closure(params, [(1, 0, 0)])
        w["G_beyond_L_not_O"] = beyond_l
        if d == 2 and q == 4 and beyond_l and trans and k_odd:
            return FactorizationDecision(True, "oplus(c)", d, w)
        return FactorizationDecision(False, None, d, w, "no orthogonal clause applies")
    if not trans:
        return FactorizationDecision(False, None, d, w, "S is not transitive")
    if 0 in I:
        return FactorizationDecision(True, "sp(a)", d, w)
    if d == 1 and q == 2:
        return FactorizationDecision(True, "sp(b)", d, w)
    if d == 2 and q == 2 and k_odd:
        return FactorizationDecision(True, "sp(c)", d, w)
    full = G.outer == out_closure(params, [(1,)])
    w["G_full"] = full
    if d == 1 and q == 4 and full and k_odd:
        return FactorizationDecision(True, "sp(d)", d, w)
    return FactorizationDecision(False, None, d, w, "no symplectic clause applies")


def decide_existence_for_G(G: OvergroupSpec, printed_exponent: bool = False) -> bool:
    """Whether some solvable H = U(I):S inside G gives G = HB.

    Unitary case: with i = (q^(2m) - 1)/(q + 1) and t = p^e, require
    pi(ell) cap pi(i) inside pi(2mf) cap pi(t - 1) minus pi(d), and
    gcd(ell, i) = 2 mod 4 whenever it is even and t = 3 mod 4.  Here t = p^e
    because G cap T = <a^ell><a^d phi^e> has Frobenius exponent e.  With
    printed_exponent set, t = p^(me) is used instead; that variant disagrees
    with the orbit oracle when m is even and e is odd (e.g. m = 2, q = 3,
    ell = 4, d = 1, e = 1).
    """
    params = G.params
    if params.kind == "sp":
        return True
    if params.kind == "oplus":
        return params.q % 4 != 1 or not G.outer_in_delta2_phi
    p, q, m, f = params.p, params.q, params.m, params.f
    ell, d, e = G.ell, G.d, G.e
    t = p ** (m * e) if printed_exponent else p**e
    i = (q ** (2 * m) - 1) // (q + 1)
    lhs = set(arith.prime_divisors(ell)) & set(arith.prime_divisors(i))
    rhs = set(arith.prime_divisors(2 * m * f)) & set(arith.prime_divisors(t - 1))
    rhs -= set(arith.prime_divisors(d))
    if not lhs <= rhs:
        return False
    g = math.gcd(ell, i)
    if g % 2 == 0 and t % 4 == 3:
        return g % 4 == 2
    return True


# -- oracle side ------------------------------------------------------------------

class Harness:
    """Permutation representations on the point set, cached per space."""

    def __init__(self, params: SpaceParams):
        self.params = params
        self.space = _space(params)
        self.size = len(self.space.points)
        self._unip: dict[int, list] = {}
        self._singer: dict[tuple, list] = {}

    def unipotent_perms(self, I) -> list[list[int]]:
        out = []
        for i in I:
            if i not in self._unip:
                self._unip[i] = [self.space.permutation(g) for g in unipotent_generators(self.space, (i,))]
            out.extend(self._unip[i])
        return out

    def singer_perm(self, g: GammaL1Element) -> list[int]:
        key = (g.e, g.t)
        if key not in self._singer:
            self._singer[key] = self.space.permutation(SingerPower(g.e, g.t))
        return self._singer[key]

    def orbits(self, I, S: FoulserTriple | None) -> list[list[int]]:
        perms = self.unipotent_perms(I)
        if S is not None:
            perms += [self.singer_perm(element(S.ell, 0, S.p, S.f)), self.singer_perm(element(S.j, S.k, S.p, S.f))]
        return orbits_from_permutations(perms, self.size)


@lru_cache(maxsize=None)
def harness(params: SpaceParams) -> Harness:
    return Harness(params)


def verify_by_orbits(params: SpaceParams, I, S: FoulserTriple) -> bool:
    """Brute force: is U(I):S transitive on the point set?"""
    _check_S(params, S)
    return len(harness(params).orbits(tuple(I), S)) == 1


def existence_by_orbits(G: OvergroupSpec) -> bool:
    """Brute force: some I makes U(I):(G cap T) transitive (transitivity is inherited upwards)."""
    params = G.params
    GT = intersection_with_T(G)
    return any(verify_by_orbits(params, I, GT) for I in index_sets(params))


def existence_by_theorem(G: OvergroupSpec) -> bool:
    """OR of decide_HB over every I and every S <= G cap T."""
    params = G.params
    subs = subgroups_in(G)
    return any(decide_HB(params, I, S, G).verdict for I in index_sets(params) for S in subs)


# -- stabilizers and exactness ------------------------------------------------------

@dataclass
class StabilizerStructure:
    order: int
    unipotent_part_order: int
    levi_part_order: int
    elements: list = field(default_factory=list, repr=False)

    def to_dict(self) -> dict:
        return {"order": self.order, "unipotent_part_order": self.unipotent_part_order, "levi_part_order": self.levi_part_order}


def _h_elements(params: SpaceParams, I, S: FoulserTriple | None):
    """Every element u_h followed by s of H = U(I):S, as (h, s, word)."""
    unis = [h for _, h in module_elements(tuple(I), params)] if len(tuple(I)) else [None]
    ss = sorted(triple_elements(S), key=lambda g: (g.t, g.e)) if S is not None else [element(0, 0, params.p, params.degree)]
    for h in unis:
        for s in ss:
            parts = ((Unipotent(h),) if h is not None else ()) + ((SingerPower(s.e, s.t),) if (s.e or s.t) else ())
            yield h, s, Word(parts)


def stabilizer_structure(params: SpaceParams, I, S: FoulserTriple | None, pt_index: int = 0) -> StabilizerStructure:
    """Explicit stabilizer of a point in H = U(I):S with its split decomposition sizes."""
    space = _space(params)
    pt = space.points[pt_index]
    stab = [(h, s, w) for h, s, w in _h_elements(params, I, S) if space.apply(w, pt) == pt]
    unip = sum(1 for _, s, _ in stab if s.e == 0 and s.t == 0)
    levi = len({(s.e, s.t) for _, s, _ in stab})
    return StabilizerStructure(len(stab), unip, levi, stab)


def h_order(params: SpaceParams, I, S: FoulserTriple | None) -> int:
    from .gammal1 import group_order

    return module_size(tuple(I), params) * (group_order(S) if S is not None else 1)


@dataclass
class ExactnessReport:
    transitive: bool
    h_order: int
    stabilizer_order: int
    in_sp: bool
    stabilizer_in_omega: bool
    dickson_invariants: list
    order_identity: bool
    exact: bool

    def to_dict(self) -> dict:
        return dict(self.__dict__)


def exactness_check(params: SpaceParams, I, S: FoulserTriple) -> ExactnessReport:
    """Whether Sp_2m(q) = H Omega^-_2m(q) with H cap Omega^- = 1 for H = U(I):S.

    Omega^- is the Dickson-invariant-zero part of the stabilizer of the quadric
    with label at index 0; H is inside Sp exactly when S consists of F_q-linear maps.
    """
    if params.kind != "sp":
        raise ValueError("exactness is checked for the symplectic family")
    space = _space(params)
    transitive = verify_by_orbits(params, I, S)
    order = h_order(params, I, S)
    in_sp = S.k % params.f == 0
    st = stabilizer_structure(params, I, S, 0)
    dick = []
    meets = False
    for h, s, w in st.elements:
        if (h is None or h.is_zero()) and s.e == 0 and s.t == 0:
            continue
        if s.t % params.f:
            dick.append(None)
            continue
        dv = space.dickson_invariant(w)
        dick.append(dv)
        meets |= dv == 0
    two_m = 2 * params.m
    identity = order * arith.order_omega_minus(two_m, params.q) == arith.order_sp(two_m, params.q)
    exact = transitive and in_sp and not meets and identity
    return ExactnessReport(transitive, order, st.order, in_sp, meets, dick, identity, exact)

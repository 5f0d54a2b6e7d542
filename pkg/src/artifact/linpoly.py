"""Linearized polynomials over F_{r^m}, the adjoint h^(s), the Singer-irreducible
modules M(i) of the unipotent radical, their characters, the index-set
invariant d(I) and the kernel-count formula.

A space is fixed by (kind, m, q); then s = 2 for unitary and s = 1 otherwise,
r = q^s, and everything lives in the field F_{r^m} = F_{p^(f s m)}.  A linear
polynomial sum a_i X^(r^i) is stored as its m coefficients (raw field ints).
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import reduce

from .arith import factor_dict
from .gf import Coordinates, Field, FieldElement, make_field, rank, row_reduce

KINDS = ("unitary", "oplus", "sp")
_KIND_ALIASES = {
    "unitary": "unitary", "u": "unitary", "su": "unitary", "gu": "unitary",
    "oplus": "oplus", "o+": "oplus", "orthogonalplus": "oplus", "omega+": "oplus",
    "sp": "sp", "symplectic": "sp",
}
# (s, m, q) where the M(i) may fail to stay irreducible under an index-d subgroup
IRREDUCIBILITY_EXCEPTIONS = frozenset({(2, 3, 2), (1, 2, 8), (1, 4, 3), (1, 6, 2)})


def parse_kind(text: str) -> str:
    key = text.strip().lower().replace("_", "").replace("-", "")
    key = {"o": "oplus"}.get(key, key)
    if key not in _KIND_ALIASES:
        raise ValueError(f"unknown kind {text!r}; use one of {', '.join(KINDS)}")
    return _KIND_ALIASES[key]


def _prime_power(q: int) -> tuple[int, int]:
    fd = factor_dict(q) if q > 1 else {}
    if len(fd) != 1:
        raise ValueError(f"{q} is not a prime power")
    (p, f), = fd.items()
    return p, f


@dataclass(frozen=True)
class SpaceParams:
    """Parameters (kind, m, q) of one of the three polar-space families."""

    kind: str
    m: int
    q: int

    def __post_init__(self):
        object.__setattr__(self, "kind", parse_kind(self.kind))
        p, f = _prime_power(self.q)
        if self.m < 2:
            raise ValueError("need m >= 2")
        if self.kind == "unitary" and (self.m, self.q) == (2, 2):
            raise ValueError("unitary needs (m, q) != (2, 2)")
        if self.kind == "oplus" and self.m < 4:
            raise ValueError("orthogonal plus type needs m >= 4")
        if self.kind == "sp" and (p != 2 or (self.m, self.q) == (2, 2)):
            raise ValueError("symplectic needs q even and (m, q) != (2, 2)")

    @property
    def p(self) -> int:
        return _prime_power(self.q)[0]

    @property
    def f(self) -> int:
        return _prime_power(self.q)[1]

    @property
    def s(self) -> int:
        return 2 if self.kind == "unitary" else 1

    @property
    def eps(self) -> Fraction:
        return {"unitary": Fraction(-1, 2), "oplus": Fraction(-1), "sp": Fraction(0)}[self.kind]

    @property
    def r(self) -> int:
        return self.q**self.s

    @property
    def rdeg(self) -> int:
        """Degree of F_r over F_p."""
        return self.f * self.s

    @property
    def degree(self) -> int:
        """Degree of F_{r^m} over F_p."""
        return self.f * self.s * self.m

    @property
    def field(self) -> Field:
        return make_field(self.p, self.degree)

    @property
    def max_index(self) -> int:
        return (self.m + self.s - 1) // 2

    @property
    def half_index(self) -> int | None:
        """Index of the half-dimensional module, present when m + s is odd."""
        return (self.m + self.s - 1) // 2 if (self.m + self.s) % 2 else None

    @property
    def full_indices(self) -> tuple[int, ...]:
        return tuple(range(1, (self.m + self.s) // 2))

    @property
    def indices(self) -> tuple[int, ...]:
        """Indices i with M(i) inside the radical, in increasing order."""
        out = [0] if self.kind == "sp" else []
        out += list(self.full_indices)
        if self.half_index is not None:
            out.append(self.half_index)
        return tuple(out)

    def in_hypothesis(self) -> bool:
        """False for the small (m, q) the classification theorems set aside."""
        excluded = {"unitary": {(2, 2), (3, 2)}, "oplus": {(4, 3), (6, 2)}, "sp": {(2, 8), (6, 2)}}
        return (self.m, self.q) not in excluded[self.kind]

    def label(self) -> str:
        return f"{self.kind},{self.m},{self.q}"

    def __str__(self) -> str:
        return self.label()


@dataclass(frozen=True)
class IndexSet:
    params: SpaceParams
    indices: tuple[int, ...] = ()

    def __post_init__(self):
        idx = tuple(sorted(set(self.indices)))
        allowed = set(self.params.indices)
        for i in idx:
            if i not in allowed:
                if i == 0:
                    raise ValueError("0 is an index only for symplectic spaces")
                raise ValueError(f"index {i} out of range for {self.params}")
        object.__setattr__(self, "indices", idx)

    def __iter__(self):
        return iter(self.indices)

    def __contains__(self, i) -> bool:
        return i in self.indices

    def __len__(self) -> int:
        return len(self.indices)

    @property
    def nonzero(self) -> tuple[int, ...]:
        return tuple(i for i in self.indices if i)

    def serialize(self) -> str:
        return ",".join(map(str, self.indices))


def index_sets(params: SpaceParams, nonempty: bool = True) -> list[IndexSet]:
    """Every subset of the valid indices, smallest first."""
    idx = params.indices
    out = []
    for size in range(0 if not nonempty else 1, len(idx) + 1):
        out.extend(IndexSet(params, c) for c in itertools.combinations(idx, size))
    return out


def parse_index_set(text: str, params: SpaceParams) -> IndexSet:
    text = text.strip()
    if text in ("", "-", "{}"):
        return IndexSet(params, ())
    return IndexSet(params, tuple(int(t) for t in text.strip("{}").split(",")))


# -- linearized polynomials ------------------------------------------------

@dataclass(frozen=True)
class LinPoly:
    """sum_i coeffs[i] X^(r^i) over F_{r^m}, with r = p^rdeg."""

    F: Field = field(compare=False, repr=False)
    rdeg: int
    coeffs: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "coeffs", tuple(self.coeffs))
        if self.rdeg * len(self.coeffs) != self.F.f:
            raise ValueError("coefficient count must equal [F_{r^m} : F_r]")

    @property
    def m(self) -> int:
        return len(self.coeffs)

    @property
    def key(self) -> tuple:
        return (self.F.p, self.F.f, self.rdeg)

    def __call__(self, x: int) -> int:
        F = self.F
        acc = 0
        for i, a in enumerate(self.coeffs):
            if a:
                acc = F.add(acc, F.mul(a, F.frob(x, self.rdeg * i)))
        return acc

    def is_zero(self) -> bool:
        return not any(self.coeffs)

    def __add__(self, other: "LinPoly") -> "LinPoly":
        _check_same(self, other)
        return LinPoly(self.F, self.rdeg, tuple(self.F.add(a, b) for a, b in zip(self.coeffs, other.coeffs)))

    def __sub__(self, other: "LinPoly") -> "LinPoly":
        _check_same(self, other)
        return LinPoly(self.F, self.rdeg, tuple(self.F.sub(a, b) for a, b in zip(self.coeffs, other.coeffs)))

    def scale(self, c: int) -> "LinPoly":
        return LinPoly(self.F, self.rdeg, tuple(self.F.mul(c, a) for a in self.coeffs))

    def serialize(self) -> list[str]:
        return [self.F.format(a) for a in self.coeffs]

    def __repr__(self) -> str:
        terms = [f"{self.F.format(a)}*X^(r^{i})" for i, a in enumerate(self.coeffs) if a]
        return "LinPoly(" + (" + ".join(terms) or "0") + ")"


def _check_same(h1: LinPoly, h2: LinPoly) -> None:
    if h1.key != h2.key:
        raise ValueError("linearized polynomials over different fields")


def identity_poly(F: Field, rdeg: int) -> LinPoly:
    m = F.f // rdeg
    return LinPoly(F, rdeg, (1,) + (0,) * (m - 1))


def zero_poly(F: Field, rdeg: int) -> LinPoly:
    return LinPoly(F, rdeg, (0,) * (F.f // rdeg))


def monomial(F: Field, rdeg: int, a: int, i: int) -> LinPoly:
    m = F.f // rdeg
    cs = [0] * m
    cs[i % m] = a
    return LinPoly(F, rdeg, tuple(cs))


def eval(h: LinPoly, x) -> FieldElement | int:
    """h(x); accepts a FieldElement (returned wrapped) or a raw int."""
    if isinstance(x, FieldElement):
        if x.field is not h.F:
            raise ValueError("field mismatch")
        return h.F(h(x.value))
    return h(x)


def compose(h1: LinPoly, h2: LinPoly) -> LinPoly:
    """h1(h2(X)) reduced with X^(r^m) = X."""
    _check_same(h1, h2)
    F, m, rd = h1.F, h1.m, h1.rdeg
    out = [0] * m
    for i, a in enumerate(h1.coeffs):
        if not a:
            continue
        for j, b in enumerate(h2.coeffs):
            if b:
                k = (i + j) % m
                out[k] = F.add(out[k], F.mul(a, F.frob(b, rd * i)))
    return LinPoly(F, rd, tuple(out))


def _inverse_system(h: LinPoly) -> list[list[int]]:
    # row k of g o h = X reads sum_i b_i a_{k-i}^(r^i) = [k == 0]
    F, m, rd = h.F, h.m, h.rdeg
    return [[F.frob(h.coeffs[(k - i) % m], rd * i) for i in range(m)] for k in range(m)]


def is_permutation(h: LinPoly) -> bool:
    """h permutes F_{r^m} iff 0 is its only root iff its composition matrix is invertible."""
    return rank(h.F, _inverse_system(h)) == h.m


def inverse(h: LinPoly) -> LinPoly:
    F, m = h.F, h.m
    rows = _inverse_system(h)
    aug = [row + [1 if k == 0 else 0] for k, row in enumerate(rows)]
    red = row_reduce(F, aug)
    if len(red) < m or any(red[i][i] != 1 for i in range(m)):
        raise ValueError("linearized polynomial is not a permutation")
    return LinPoly(F, h.rdeg, tuple(red[i][m] for i in range(m)))


def adjoint(h: LinPoly, s: int) -> LinPoly:
    """The unique h^(s) with Tr_{r^m/r}(h(x) h^(s)(y)^(q^(s-1))) = Tr_{r^m/r}(x y^(q^(s-1))).

    Built from the coefficients b_i of h^{-1}: the coefficient of X^(r^j) is
    b_{m-j}^(r^(j-1) q), indices mod m.
    """
    if s not in (1, 2) or h.rdeg % s:
        raise ValueError("s must be 1 or 2 and divide the degree of r")
    b = inverse(h).coeffs
    F, m, rd = h.F, h.m, h.rdeg
    f = rd // s
    out = tuple(F.frob(b[(m - j) % m], rd * (j - 1) + f) for j in range(m))
    return LinPoly(F, rd, out)


def adjoint_identity_holds(h: LinPoly, hs: LinPoly, s: int) -> bool:
    """Check the defining trace identity of the adjoint on every pair (x, y)."""
    F, rd = h.F, h.rdeg
    twist = rd - rd // s  # exponent of q^(s-1) as a Frobenius shift
    ys = [F.frob(hs(y), twist) for y in range(F.q)]
    base = [F.frob(y, twist) for y in range(F.q)]
    for x in range(F.q):
        hx = h(x)
        for y in range(F.q):
            lhs = F.trace(F.mul(hx, ys[y]), F.f, rd)
            if lhs != F.trace(F.mul(x, base[y]), F.f, rd):
                return False
    return True


# -- the modules M(i) -------------------------------------------------------

def _check_index(i: int, params: SpaceParams) -> None:
    if i == 0:
        if params.kind != "sp":
            raise ValueError("M(0) lies in the radical only in the symplectic case")
        return
    if i not in params.indices:
        raise ValueError(f"index {i} out of range for {params}")


def half_twist(params: SpaceParams) -> int:
    """A nonzero theta with theta + theta^(r^(m/2)) = 0 (the half module is theta * F_{r^(m/2)})."""
    F = params.field
    if params.p == 2:
        return 1
    return F.w((params.p ** (params.degree // 2) + 1) // 2)


def module_poly(i: int, a: int, params: SpaceParams) -> LinPoly:
    """The element of M(i) with parameter a (for the half module a must satisfy the trace condition)."""
    _check_index(i, params)
    F, m, rd, f, s = params.field, params.m, params.rdeg, params.f, params.s
    cs = [0] * m
    if i == 0:
        cs[0] = a
    elif i == params.half_index:
        if F.add(a, F.frob(a, params.degree // 2)):
            raise ValueError("half-module parameter must satisfy a + a^(r^(m/2)) = 0")
        cs[i % m] = a
    else:
        # a X^(r^i) - a^(r^(m-i) q^(s-1)) X^(r^(m-i) q^(2s-2))
        second = (m - i) if s == 1 else (m - i + 1) % m
        cs[i] = a
        cs[second] = F.sub(cs[second], F.frob(a, rd * (m - i) + f * (s - 1)))
    return LinPoly(F, rd, tuple(cs))


def module_parameter(h: LinPoly, i: int, params: SpaceParams) -> int:
    """The parameter a of the M(i)-component of h (its coefficient at X^(r^i))."""
    return h.coeffs[i % params.m]


def module_parameters(i: int, params: SpaceParams) -> list[int]:
    """All parameters of M(i), zero first."""
    _check_index(i, params)
    F = params.field
    if i == params.half_index:
        theta = half_twist(params)
        return [F.mul(theta, c) for c in F.subfield(params.degree // 2)]
    return list(F.elements())


def module_parameter_basis(i: int, params: SpaceParams) -> list[int]:
    """An F_q-basis of the parameter space of M(i)."""
    _check_index(i, params)
    F = params.field
    if i == params.half_index:
        theta = half_twist(params)
        g = F.subfield_generator(params.degree // 2)
        return [F.mul(theta, F.pow(g, j)) for j in range(params.s * params.m // 2)]
    return [F.pow(F.generator, j) for j in range(params.s * params.m)]


def module_basis(i: int, params: SpaceParams) -> list[LinPoly]:
    return [module_poly(i, a, params) for a in module_parameter_basis(i, params)]


def module_dimension(i: int, params: SpaceParams) -> int:
    """Dimension of M(i) over F_q."""
    _check_index(i, params)
    return params.s * params.m // 2 if i == params.half_index else params.s * params.m


def module_member(h: LinPoly, i: int, params: SpaceParams) -> bool:
    _check_index(i, params)
    if h.key != (params.p, params.degree, params.rdeg):
        return False
    a = module_parameter(h, i, params)
    try:
        return module_poly(i, a, params) == h
    except ValueError:
        return False


def radical_poly(components: dict[int, int], params: SpaceParams) -> LinPoly:
    """sum over i of the M(i)-element with parameter components[i]."""
    F = params.field
    h = zero_poly(F, params.rdeg)
    for i, a in components.items():
        h = h + module_poly(i, a, params)
    return h


def module_elements(I, params: SpaceParams):
    """Iterate over every element of M(I) as (parameters, LinPoly)."""
    idx = tuple(I)
    for combo in itertools.product(*(module_parameters(i, params) for i in idx)):
        comps = dict(zip(idx, combo))
        yield comps, radical_poly(comps, params)


def module_size(I, params: SpaceParams) -> int:
    return params.q ** sum(module_dimension(i, params) for i in I)


def radical_indices(params: SpaceParams) -> tuple[int, ...]:
    """Indices of the full radical R = M(0) + ... (M(0) only when symplectic)."""
    return params.indices


def module_action(x: int, h: LinPoly, params: SpaceParams) -> LinPoly:
    """(x.h)(X) = x^(q^(s-1)) h(xX)."""
    F = params.field
    if x == 0:
        raise ValueError("the action is by nonzero scalars")
    lead = F.frob(x, params.f * (params.s - 1))
    cs = tuple(F.mul(lead, F.mul(a, F.frob(x, params.rdeg * k))) if a else 0 for k, a in enumerate(h.coeffs))
    return LinPoly(F, h.rdeg, cs)


def parameter_coordinates(i: int, a: int, params: SpaceParams, over: int | None = None) -> list[int]:
    """Coordinates of a parameter of M(i) over the subfield of degree `over` (default F_q)."""
    F = params.field
    over = params.f if over is None else over
    if i == params.half_index:
        theta = half_twist(params)
        return _coordinates(F, params.degree // 2, over)(F.div(a, theta))
    return _coordinates(F, params.degree, over)(a)


_COORD_CACHE: dict[tuple, Coordinates] = {}


def _coordinates(F: Field, src: int, dst: int) -> Coordinates:
    key = (F.p, F.f, src, dst)
    if key not in _COORD_CACHE:
        _COORD_CACHE[key] = Coordinates(F, src, dst)
    return _COORD_CACHE[key]


def action_matrix(i: int, x: int, params: SpaceParams) -> list[list[int]]:
    """Matrix over F_q (entries as elements of the big field) of h -> x.h on M(i)."""
    cols = []
    for b in module_basis(i, params):
        img = module_action(x, b, params)
        cols.append(parameter_coordinates(i, module_parameter(img, i, params), params))
    return [list(row) for row in zip(*cols)]


# -- invariants -------------------------------------------------------------

def d_invariant(I: IndexSet) -> int:
    """gcd invariant of an index set; the empty list of nonzero indices gives m."""
    params = I.params
    nz = I.nonzero
    m, s = params.m, params.s
    if s == 2:
        return reduce(math.gcd, [2 * i - 1 for i in nz], m)
    if m % 2 == 0 and m // 2 in nz:
        return reduce(math.gcd, nz)
    return reduce(math.gcd, nz, m)


def character(i: int, x, params: SpaceParams):
    """chi_i(x), the trace of x acting on M(i), as an element of F_q."""
    _check_index(i, params)
    wrap = isinstance(x, FieldElement)
    F = params.field
    xv = x.value if wrap else x
    if xv == 0:
        raise ValueError("characters are evaluated on nonzero elements")
    q, r, m, s, f = params.q, params.r, params.m, params.s, params.f
    if i == 0:
        val = F.trace(F.pow(xv, q ** (s - 1) + 1), params.degree, f)
    elif i == params.half_index:
        val = F.trace(F.pow(xv, params.p ** (params.degree // 2) + 1), params.degree // 2, f)
    else:
        val = F.trace(F.pow(xv, r ** (i - 1) * q + 1), params.degree, f)
    return F(val) if wrap else val


def character_by_action(i: int, x: int, params: SpaceParams) -> int:
    """Independent value of chi_i(x): the trace of the action matrix."""
    A = action_matrix(i, x, params)
    return params.field.sum(A[j][j] for j in range(len(A)))


def kernel_count(I: IndexSet, x: int) -> int:
    """Number of h in M(I) with h(x) = 0, from the closed formula (independent of x != 0)."""
    params = I.params
    if not x:
        raise ValueError("x must be nonzero")
    if 0 in I:
        raise ValueError("the kernel formula needs 0 not in I")
    if not I.nonzero:
        raise ValueError("I must be non-empty")
    s, m, f = params.s, params.m, params.f
    half = params.half_index
    full = [n for n in I.nonzero if n != half]
    k = len(full)
    shifts = [s * n - s + 1 for n in full]
    if half is not None and half in I:
        g = reduce(math.gcd, shifts, s * m // 2)
        exp = f * s * m * (2 * k - 1) // 2 + f * g
    else:
        g = reduce(math.gcd, shifts, m)
        exp = f * s * m * (k - 1) + f * g
    return params.p**exp


def kernel_count_bruteforce(I: IndexSet, x: int) -> int:
    return sum(1 for _, h in module_elements(I, I.params) if h(x) == 0)


def prop_mi_holds(I: IndexSet) -> bool:
    """Exhaustively check Tr_{r^m/q^d}(h(x) x^(q^(s-1))) = 0 over M(I) and all x,
    plus Tr_{r^m/q^d}(x h(x^(q^m/2))^2) = 0 in the symplectic case (0 not in I)."""
    params = I.params
    if 0 in I or not I.nonzero:
        raise ValueError("need a non-empty I without 0")
    F = params.field
    d = d_invariant(I)
    dst = params.f * d
    twist = params.f * (params.s - 1)
    sqrt_shift = params.degree - 1  # x^(q^m/2) is the square root in characteristic 2
    for _, h in module_elements(I, params):
        for x in F.elements():
            if F.trace(F.mul(h(x), F.frob(x, twist)), params.degree, dst):
                return False
            if params.kind == "sp":
                y = h(F.frob(x, sqrt_shift))
                if F.trace(F.mul(x, F.mul(y, y)), params.degree, dst):
                    return False
    return True


def coefficient_relations_hold(h: LinPoly, params: SpaceParams) -> bool:
    """a_{m-i+2(1-1/s)} + a_i^(r^(m-i) q^(s-1)) = 0 for 1 <= i <= max index,
    a_0 = 0 for orthogonal spaces."""
    F, m, s = params.field, params.m, params.s
    a = h.coeffs
    for i in range(1, params.max_index + 1):
        lhs = a[(m - i + (s - 1)) % m]
        rhs = F.frob(a[i], params.rdeg * (m - i) + params.f * (s - 1))
        if F.add(lhs, rhs):
            return False
    if params.kind == "oplus" and a[0]:
        return False
    return True


def symplectic_form_vanishes(h: LinPoly, params: SpaceParams) -> bool:
    """Tr_{q^m/q}(h(x) y + h(y) x) = 0 for all x, y (symplectic radical elements)."""
    F = params.field
    vals = [h(x) for x in F.elements()]
    for x in F.elements():
        for y in F.elements():
            if F.trace(F.add(F.mul(vals[x], y), F.mul(vals[y], x)), params.degree, params.f):
                return False
    return True


def _span_rank(vectors: list[list[int]], p: int) -> int:
    return rank(make_field(p, 1), vectors)


def generates_module(i: int, h: LinPoly, params: SpaceParams, subgroup_index: int = 1, over: str = "q") -> bool:
    """Does the orbit of h under <w^d> span M(i)?  `over` is "q" (F_q-span) or "p" (additive span)."""
    F = params.field
    a = module_parameter(h, i, params)
    if not a:
        return False
    dim = module_dimension(i, params)
    if over == "p":
        target = dim * params.f
        dst, sub = 1, make_field(params.p, 1)
    else:
        target = dim
        dst, sub = params.f, None
    vecs = []
    seen = set()
    g = F.w(subgroup_index)
    x = 1
    while True:
        img = module_parameter(module_action(x, h, params), i, params)
        if img not in seen:
            seen.add(img)
            vecs.append(parameter_coordinates(i, img, params, over=dst))
        x = F.mul(x, g)
        if x == 1:
            break
    if sub is not None:
        return rank(sub, vecs) == target
    return rank(F, vecs) == target


def is_irreducible_under(i: int, subgroup_index: int, params: SpaceParams) -> bool:
    """Is M(i) irreducible (over F_q) for the index-d subgroup N of F_{r^m}^x?

    Every nonzero element is tested, one per N-orbit.
    """
    F = params.field
    if (F.q - 1) % subgroup_index:
        raise ValueError("subgroup index must divide r^m - 1")
    g = F.w(subgroup_index)
    covered: set[int] = set()
    for a in module_parameters(i, params)[1:]:
        if a in covered:
            continue
        h = module_poly(i, a, params)
        if not generates_module(i, h, params, subgroup_index):
            return False
        x = 1
        while True:
            covered.add(module_parameter(module_action(x, h, params), i, params))
            x = F.mul(x, g)
            if x == 1:
                break
    return True


def irreducibility_index_bound(params: SpaceParams) -> int:
    """gcd(s m f, r^m - 1): the largest subgroup index the irreducibility lemma covers."""
    return math.gcd(params.s * params.m * params.f, params.r**params.m - 1)


def in_exception_list(params: SpaceParams) -> bool:
    return (params.s, params.m, params.q) in IRREDUCIBILITY_EXCEPTIONS


def module_descriptor(i: int, params: SpaceParams) -> str:
    return f"M({i})@{params.label()}"

"""The polar spaces (V, kappa) with V = F_{r^m} x F_{r^m}, the point sets that
model the coset space of the nonsingular-point (or elliptic-quadric) stabilizer,
explicit isometries, their linearization over F_r and orbit computations.

Points come in two flavours.  For unitary and orthogonal spaces a point is a
projective point <(x, y)> with nu(x, y) = Tr_{r^m/q}(x y^(q^(s-1))) = 1; for
symplectic spaces it is an elliptic quadric
kappa_{a,b}(x, y) = Tr_{q^m/q}(a x^2 + x y + b y^2) with Tr_{q^m/2}(ab) = 1.

Group elements act on vectors on the left.  On quadrics an element g with
Frobenius part p^t acts by pullback, kappa -> Frob^(-t) o kappa o g.  Orbits
do not depend on which of the two conventions is used.
"""

from __future__ import annotations

import math
from collections import deque
from dataclasses import dataclass
from functools import cached_property

from .gammal1 import FoulserTriple, generators as triple_generators
from .gf import Coordinates, Field, rank
from .linpoly import (
    IndexSet,
    LinPoly,
    SpaceParams,
    adjoint,
    d_invariant,
    half_twist,
    module_elements,
    module_poly,
    radical_poly,
)

Vector = tuple[int, int]
MAX_VECTORS = 1 << 22


def _key(F: Field, x: int) -> int:
    return -1 if x == 0 else F.dlog(x)


@dataclass(frozen=True, order=True)
class PolarPoint:
    """A projective point ("P") or a quadric label ("Q"), stored by raw field ints."""

    tag: str
    x: int
    y: int

    def serialize(self, F: Field) -> str:
        return f"{self.tag}({F.format(self.x)},{F.format(self.y)})"


# -- isometry elements ------------------------------------------------------

@dataclass(frozen=True)
class Unipotent:
    """u_h : (x, y) -> (x + h(y), y)."""

    h: LinPoly

    def vec(self, space: "PolarSpace", v: Vector) -> Vector:
        x, y = v
        return (space.F.add(x, self.h(y)), y)

    frob = 0


@dataclass(frozen=True)
class Levi:
    """l_h : (x, y) -> (h(x), h^(s)(y)); build with levi()."""

    h: LinPoly
    hs: LinPoly

    def vec(self, space: "PolarSpace", v: Vector) -> Vector:
        return (self.h(v[0]), self.hs(v[1]))

    frob = 0


@dataclass(frozen=True)
class Semilinear:
    """(x, y) -> (x^(p^t), y^(p^t))."""

    t: int

    def vec(self, space: "PolarSpace", v: Vector) -> Vector:
        F = space.F
        return (F.frob(v[0], self.t), F.frob(v[1], self.t))

    @property
    def frob(self) -> int:
        return self.t


@dataclass(frozen=True)
class SingerPower:
    """The element a^e phi^t of GammaL_1(r^m): the Singer map l_w^e followed by Frob^t."""

    e: int
    t: int = 0

    def vec(self, space: "PolarSpace", v: Vector) -> Vector:
        F = space.F
        x = F.mul(v[0], F.w(-self.e * space.params.q ** (space.params.s - 1)))
        y = F.mul(v[1], F.w(self.e))
        if self.t:
            x, y = F.frob(x, self.t), F.frob(y, self.t)
        return (x, y)

    @property
    def frob(self) -> int:
        return self.t


@dataclass(frozen=True)
class Transvection:
    """u -> u + c B(u, v) v for the symmetric bilinear form B of an even-characteristic space.

    With c = 1/Q(v) this is the reflection in the nonsingular vector v.
    """

    v: Vector
    c: int

    def vec(self, space: "PolarSpace", u: Vector) -> Vector:
        F = space.F
        coef = F.mul(self.c, space.bilinear(u, self.v))
        return (F.add(u[0], F.mul(coef, self.v[0])), F.add(u[1], F.mul(coef, self.v[1])))

    frob = 0


@dataclass(frozen=True)
class Word:
    """Product of elements, applied left to right."""

    parts: tuple

    def vec(self, space: "PolarSpace", v: Vector) -> Vector:
        for g in self.parts:
            v = g.vec(space, v)
        return v

    @property
    def frob(self) -> int:
        return sum(g.frob for g in self.parts)


IDENTITY = Word(())


def levi(space: "PolarSpace", h: LinPoly) -> Levi:
    return Levi(h, adjoint(h, space.params.s))


def unipotent(space: "PolarSpace", components: dict[int, int]) -> Unipotent:
    return Unipotent(radical_poly(components, space.params))


def singer_elements(t: FoulserTriple) -> list[SingerPower]:
    """Generators a^l and a^j phi^k of a subgroup of GammaL_1(r^m) as isometries."""
    return [SingerPower(g.e, g.t) for g in triple_generators(t)]


# -- the space --------------------------------------------------------------

class PolarSpace:
    def __init__(self, params: SpaceParams):
        self.params = params
        self.F = params.field
        self.q, self.r, self.m, self.s = params.q, params.r, params.m, params.s
        self.deg = params.degree

    def __repr__(self) -> str:
        return f"PolarSpace({self.params})"

    @cached_property
    def lam(self) -> int | None:
        """Least-dlog lambda in F_(q^2) with lambda + lambda^q = 1 (unitary basepoint)."""
        if self.params.kind != "unitary":
            return None
        F, f = self.F, self.params.f
        return next(x for x in F.subfield(2 * f)[1:] if F.add(x, F.frob(x, f)) == 1)

    @cached_property
    def mu(self) -> int | None:
        """Least-dlog mu in F_q with X^2 + X + mu irreducible over F_q (symplectic basepoint)."""
        if self.params.kind != "sp":
            return None
        F, f = self.F, self.params.f
        # X^2 + X + mu has no root in F_q exactly when Tr_{q/2}(mu) = 1
        return next(x for x in F.subfield(f)[1:] if F.trace(x, f, 1) == 1)

    # -- forms --
    def _tr_r(self, x: int) -> int:
        return self.F.trace(x, self.deg, self.params.rdeg)

    def _tr_q(self, x: int) -> int:
        return self.F.trace(x, self.deg, self.params.f)

    def nu(self, v: Vector) -> int:
        F = self.F
        return self._tr_q(F.mul(v[0], F.frob(v[1], self.params.f * (self.s - 1))))

    def bilinear(self, u: Vector, v: Vector) -> int:
        """Tr_{r^m/r}(u1 v2 + u2 v1): the symplectic form, or the polar form of the quadratic form."""
        F = self.F
        return self._tr_r(F.add(F.mul(u[0], v[1]), F.mul(u[1], v[0])))

    def hermitian(self, u: Vector, v: Vector) -> int:
        """Tr_{r^m/r}(a d^q + b^r c^q) for u = (a, b), v = (c, d)."""
        F, f = self.F, self.params.f
        a, b = u
        c, d = v
        return self._tr_r(F.add(F.mul(a, F.frob(d, f)), F.mul(F.frob(b, 2 * f), F.frob(c, f))))

    def form_value(self, v: Vector, w: Vector | None = None) -> int:
        """kappa_eps: Hermitian (unitary), quadratic (orthogonal, or its polar form when w
        is given) or alternating (symplectic)."""
        kind = self.params.kind
        if kind == "unitary":
            return self.hermitian(v, v if w is None else w)
        if kind == "oplus":
            if w is None:
                return self._tr_r(self.F.mul(v[0], v[1]))
            return self.bilinear(v, w)
        return self.bilinear(v, v if w is None else w)

    def quadric_value(self, label: tuple[int, int], v: Vector) -> int:
        a, b = label
        F = self.F
        x, y = v
        return self._tr_q(F.add(F.add(F.mul(a, F.mul(x, x)), F.mul(x, y)), F.mul(b, F.mul(y, y))))

    def vectors(self):
        for x in self.F.elements():
            for y in self.F.elements():
                yield (x, y)

    # -- points --
    @cached_property
    def norm_one_scalars(self) -> list[int]:
        """Scalars c in F_r with c^(q^(s-1) + 1) = 1: exactly those preserving nu."""
        F = self.F
        e = self.q ** (self.s - 1) + 1
        return [c for c in F.subfield(self.params.rdeg)[1:] if F.pow(c, e) == 1]

    @cached_property
    def _points(self) -> tuple[list[PolarPoint], dict]:
        F = self.F
        if (self.r**self.m) ** 2 > MAX_VECTORS:
            raise ValueError("space too large for explicit enumeration")
        pts: list[PolarPoint] = []
        lookup: dict = {}
        if self.params.kind == "sp":
            labels = []
            for a in F.elements():
                for b in F.elements():
                    if F.trace(F.mul(a, b), self.deg, 1) == 1:
                        labels.append((a, b))
            labels.sort(key=lambda ab: (_key(F, ab[0]), _key(F, ab[1])))
            for a, b in labels:
                lookup[(a, b)] = len(pts)
                pts.append(PolarPoint("Q", a, b))
            return pts, lookup
        scalars = self.norm_one_scalars
        classes = []
        seen = set()
        for v in self.vectors():
            if v in seen or self.nu(v) != 1:
                continue
            cls = [(F.mul(c, v[0]), F.mul(c, v[1])) for c in scalars]
            seen.update(cls)
            classes.append((min(cls, key=lambda u: (_key(F, u[0]), _key(F, u[1]))), cls))
        classes.sort(key=lambda rc: (_key(F, rc[0][0]), _key(F, rc[0][1])))
        for rep, cls in classes:
            for u in cls:
                lookup[u] = len(pts)
            pts.append(PolarPoint("P", *rep))
        return pts, lookup

    @property
    def points(self) -> list[PolarPoint]:
        return self._points[0]

    def lambda_points(self) -> list[PolarPoint]:
        return list(self.points)

    def point_index(self, pt: PolarPoint | Vector | tuple[int, int]) -> int:
        key = (pt.x, pt.y) if isinstance(pt, PolarPoint) else tuple(pt)
        return self._points[1][key]

    def expected_size(self) -> int:
        """|Lambda| from the index formulas: q^(2m-1)(q^(2m)-1)/(q+1), q^(m-1)(q^m-1)/gcd(2,q-1)
        and q^m(q^m-1)/2."""
        q, m = self.q, self.m
        if self.params.kind == "unitary":
            return q ** (2 * m - 1) * (q ** (2 * m) - 1) // (q + 1)
        if self.params.kind == "oplus":
            return q ** (m - 1) * (q**m - 1) // math.gcd(2, q - 1)
        return q**m * (q**m - 1) // 2

    # -- quadric label recovery --
    @cached_property
    def _label_basis(self):
        F = self.F
        C = Coordinates(F, self.deg, self.params.f)
        roots = [F.frob(b, self.deg - 1) for b in C.basis]
        return roots, C.dual

    def _label_from_values(self, values: list[int]) -> int:
        # values[j] = Tr(c * beta_j) recovers c through the trace-dual basis
        F = self.F
        _, dual = self._label_basis
        return F.sum(F.mul(v, d) for v, d in zip(values, dual))

    def quadric_image(self, g, label: tuple[int, int]) -> tuple[int, int]:
        """Label of the pullback Frob^(-t) o kappa_label o g."""
        F = self.F
        roots, _ = self._label_basis
        t = g.frob
        va = [F.frob(self.quadric_value(label, g.vec(self, (z, 0))), -t) for z in roots]
        vb = [F.frob(self.quadric_value(label, g.vec(self, (0, z))), -t) for z in roots]
        return (self._label_from_values(va), self._label_from_values(vb))

    # -- action --
    def apply(self, g, pt: PolarPoint) -> PolarPoint:
        if pt.tag == "Q":
            a, b = self.quadric_image(g, (pt.x, pt.y))
            idx = self._points[1].get((a, b))
        else:
            idx = self._points[1].get(g.vec(self, (pt.x, pt.y)))
        if idx is None:
            raise ValueError("element does not preserve the point set")
        return self.points[idx]

    def permutation(self, g) -> list[int]:
        """Image index of every point under g."""
        lookup = self._points[1]
        out = []
        for pt in self.points:
            if pt.tag == "Q":
                key = self.quadric_image(g, (pt.x, pt.y))
            else:
                key = g.vec(self, (pt.x, pt.y))
            if key not in lookup:
                raise ValueError("element does not preserve the point set")
            out.append(lookup[key])
        return out

    # -- linearization --
    @cached_property
    def _coords_r(self) -> Coordinates:
        return Coordinates(self.F, self.deg, self.params.rdeg)

    def basis(self) -> list[Vector]:
        """F_r-basis of V: (b_j, 0) then (0, b_j)."""
        B = self._coords_r.basis
        return [(b, 0) for b in B] + [(0, b) for b in B]

    def coordinates(self, v: Vector) -> list[int]:
        C = self._coords_r
        return C(v[0]) + C(v[1])

    def matrix_of(self, g) -> list[list[int]]:
        """2m x 2m matrix over F_r of an F_r-linear element (column j is the image of basis j)."""
        if g.frob % self.params.rdeg:
            raise ValueError("element is not F_r-linear")
        cols = [self.coordinates(g.vec(self, b)) for b in self.basis()]
        return [list(row) for row in zip(*cols)]

    def dickson_invariant(self, g) -> int:
        """rank(g - 1) mod 2 over F_q; q even and g an orthogonal isometry."""
        if self.q % 2 or self.s != 1:
            raise ValueError("the Dickson invariant is used for even q orthogonal geometry")
        if g.frob % self.params.rdeg:
            raise ValueError("element is not F_q-linear")
        F = self.F
        M = self.matrix_of(g)
        for i in range(len(M)):
            M[i][i] = F.sub(M[i][i], 1)
        return rank(F, M) % 2

    def is_isometry(self, g, quadric: tuple[int, int] | None = None) -> bool:
        """Exhaustive check that g preserves the form up to its Frobenius twist.

        Unitary and orthogonal forms are checked on every vector (the Hermitian
        norm and the quadratic form determine their polar forms); the
        symplectic form is checked on every pair; a quadric label on every vector.
        """
        F = self.F
        t = g.frob
        vecs = list(self.vectors())
        images = [g.vec(self, v) for v in vecs]
        if quadric is not None:
            return all(
                self.quadric_value(quadric, gv) == F.frob(self.quadric_value(quadric, v), t)
                for v, gv in zip(vecs, images)
            )
        if self.params.kind in ("unitary", "oplus"):
            return all(self.form_value(gv) == F.frob(self.form_value(v), t) for v, gv in zip(vecs, images))
        for i, u in enumerate(vecs):
            for j in range(i + 1, len(vecs)):
                if self.bilinear(images[i], images[j]) != F.frob(self.bilinear(u, vecs[j]), t):
                    return False
        return True

    def reflection(self, v: Vector, quadric: tuple[int, int] | None = None) -> Transvection:
        """Reflection in a nonsingular vector (orthogonal form, or a quadric label in the symplectic case)."""
        Q = self.form_value(v) if quadric is None else self.quadric_value(quadric, v)
        if Q == 0:
            raise ValueError("reflection needs a nonsingular vector")
        return Transvection(v, self.F.inv(Q))


# -- orbits -----------------------------------------------------------------

def orbits_from_permutations(perms: list[list[int]], size: int, subset=None) -> list[list[int]]:
    """Orbit partition of the group generated by perms; each orbit sorted, orbits by least element."""
    todo = sorted(range(size)) if subset is None else sorted(subset)
    seen = set()
    out = []
    for start in todo:
        if start in seen:
            continue
        orb = [start]
        seen.add(start)
        queue = deque([start])
        while queue:
            i = queue.popleft()
            for perm in perms:
                j = perm[i]
                if j not in seen:
                    seen.add(j)
                    orb.append(j)
                    queue.append(j)
        out.append(sorted(orb))
    out.sort(key=lambda o: o[0])
    return out


def orbits(space: PolarSpace, gens: list, pts=None) -> list[list[PolarPoint]]:
    """Exact orbit partition of <gens> on the point set (or on the closure of a subset)."""
    perms = [space.permutation(g) for g in gens]
    subset = None if pts is None else [space.point_index(p) for p in pts]
    return [[space.points[i] for i in orb] for orb in orbits_from_permutations(perms, len(space.points), subset)]


def orbit_report(space: PolarSpace, gens: list) -> dict:
    orbs = orbits(space, gens)
    return {
        "orbit_count": len(orbs),
        "lengths": [len(o) for o in orbs],
        "representatives": [o[0].serialize(space.F) for o in orbs],
    }


def predicted_orbit_length(space: PolarSpace, I: IndexSet) -> int:
    """r^m / q^d(I) when 0 is not in I, and q^m / 2 when it is."""
    params = space.params
    if 0 in I:
        return params.q**params.m // 2
    return params.r**params.m // params.q ** d_invariant(I)


def predicted_orbit(space: PolarSpace, I: IndexSet, pt: PolarPoint) -> set[int]:
    """Indices of the set N_{d,y,c} (projective) or E_{d,a,c} / E_{d,a} (quadrics) through pt."""
    F, params = space.F, space.params
    d = d_invariant(I)
    lookup = space._points[1]
    if pt.tag == "Q":
        a = pt.x
        if 0 in I:
            return {i for i, p in enumerate(space.points) if p.x == a}
        c = F.trace(F.mul(a, pt.y), space.deg, params.f * d)
        return {i for i, p in enumerate(space.points) if p.x == a and F.trace(F.mul(a, p.y), space.deg, params.f * d) == c}
    y = pt.y
    yt = F.frob(y, params.f * (params.s - 1))
    c = F.trace(F.mul(pt.x, yt), space.deg, params.f * d)
    out = set()
    for x in F.elements():
        if F.trace(F.mul(x, yt), space.deg, params.f * d) == c:
            out.add(lookup[(x, y)])
    return out


def unipotent_generators(space: PolarSpace, I) -> list[Unipotent]:
    """u_h for h running over an F_p-basis of M(I) (these generate U(I) as a group)."""
    params = space.params
    F = space.F
    gens = []
    for i in I:
        if i == params.half_index:
            theta = half_twist(params)
            g = F.subfield_generator(params.degree // 2)
            basis = [F.mul(theta, F.pow(g, j)) for j in range(params.degree // 2)]
        else:
            basis = [F.w(j) for j in range(params.degree)]
        gens.extend(Unipotent(module_poly(i, a, params)) for a in basis)
    return gens


def radical_elements(space: PolarSpace, I):
    """Every u_h with h in M(I)."""
    for _, h in module_elements(tuple(I), space.params):
        yield Unipotent(h)


def tau(space: PolarSpace, b: int, n1: int) -> "_Scale":
    """tau_b : (x, y) -> (b^(r^n1) x, b y), the F_{r^d}-scalar maps commuting with U(I):S_0."""
    F = space.F
    return _Scale(F.frob(b, space.params.rdeg * n1), b)


@dataclass(frozen=True)
class _Scale:
    cx: int
    cy: int

    def vec(self, space: PolarSpace, v: Vector) -> Vector:
        return (space.F.mul(self.cx, v[0]), space.F.mul(self.cy, v[1]))

    frob = 0


def commutes(space: PolarSpace, g, h) -> bool:
    return all(g.vec(space, h.vec(space, v)) == h.vec(space, g.vec(space, v)) for v in space.vectors())


def frobenius_linear_part(space: PolarSpace) -> list[list[int]]:
    """Matrix over F_r of the linear isometry g with (x, y) -> (x^p, y^p) equal to
    the standard Frobenius followed by g.

    The standard Frobenius raises coordinates to the p-th power in a basis
    e_j = (b_j, 0), f_j = (0, c_j) with form value [i = j] between e_i and f_j,
    so g sends each basis vector to its own p-th power.
    """
    F, params = space.F, space.params
    C = space._coords_r
    twist = params.f * (params.s - 1)
    cs = [F.frob(c, -twist) for c in C.dual]
    Cc = Coordinates(F, params.degree, params.rdeg, basis=cs)
    cols = [C(F.frob(b, 1)) + [0] * params.m for b in C.basis]
    cols += [[0] * params.m + Cc(F.frob(c, 1)) for c in cs]
    return [list(row) for row in zip(*cols)]


def determinant(F: Field, M: list[list[int]]) -> int:
    """Determinant by Gaussian elimination."""
    M = [list(r) for r in M]
    n = len(M)
    det = 1
    for c in range(n):
        piv = next((r for r in range(c, n) if M[r][c]), None)
        if piv is None:
            return 0
        if piv != c:
            M[c], M[piv] = M[piv], M[c]
            det = F.neg(det)
        det = F.mul(det, M[c][c])
        inv = F.inv(M[c][c])
        for r in range(c + 1, n):
            if M[r][c]:
                k = F.mul(M[r][c], inv)
                M[r] = [F.sub(x, F.mul(k, y)) for x, y in zip(M[r], M[c])]
    return det

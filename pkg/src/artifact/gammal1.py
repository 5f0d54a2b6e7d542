"""The semilinear group GammaL_1(p^f) = <a>:<phi> and its subgroups.

a is multiplication by the generator w, phi is the p-th power map, and groups
act on the right: x^(a^e phi^t) = (x w^e)^(p^t).  Products are read left to
right, so act(compose(g, h), x) == act(h, act(g, x)).

Every subgroup H is named by its canonical Foulser triple (ell, j, k):
H meets <a> in <a^ell>, <a>H = <a><phi^k>, and j is the least positive
multiple of the sigma'-part of p^f - 1 with a^j phi^k in H, where sigma is the
set of primes dividing ell.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from itertools import combinations
from typing import Iterable, Iterator

from .arith import divisors, prime_divisors, sigma_decompose
from .gf import Field, FieldElement, make_field

ENUMERATION_LIMIT = 1 << 16


def _geometric_mod(r: int, count: int, n: int) -> int:
    """(1 + r + ... + r^(count-1)) mod n, exactly."""
    if r == 1:
        return count % n
    big = n * (r - 1)
    return ((pow(r, count, big) - 1) % big) // (r - 1) % n


@dataclass(frozen=True)
class GammaL1Element:
    e: int
    t: int
    p: int
    f: int

    @property
    def n(self) -> int:
        return self.p**self.f - 1

    @property
    def field(self) -> Field:
        return make_field(self.p, self.f)

    def __repr__(self) -> str:
        return f"a^{self.e}phi^{self.t}@{self.p}^{self.f}"


def element(e: int, t: int, p: int, f: int) -> GammaL1Element:
    n = p**f - 1
    return GammaL1Element(e % n, t % f, p, f)


def identity(p: int, f: int) -> GammaL1Element:
    return GammaL1Element(0, 0, p, f)


def _check_same(g: GammaL1Element, h: GammaL1Element) -> None:
    if (g.p, g.f) != (h.p, h.f):
        raise ValueError("elements live in different groups")


def act(g: GammaL1Element, x: FieldElement) -> FieldElement:
    F = x.field
    if (F.p, F.f) != (g.p, g.f):
        raise ValueError("field mismatch")
    return FieldElement(F, act_raw(F, g.e, g.t, x.value))


def act_raw(F: Field, e: int, t: int, x: int) -> int:
    return F.frob(F.mul(x, F.w(e)), t)


def compose(g: GammaL1Element, h: GammaL1Element) -> GammaL1Element:
    """The product gh: first g, then h."""
    _check_same(g, h)
    p, f, n = g.p, g.f, g.n
    # phi^t a^e = a^(e p^(-t)) phi^t
    e = (g.e + h.e * pow(p, (f - g.t) % f, n)) % n if n > 1 else 0
    return GammaL1Element(e, (g.t + h.t) % f, p, f)


def inverse(g: GammaL1Element) -> GammaL1Element:
    p, f, n = g.p, g.f, g.n
    e = (-g.e * pow(p, g.t, n)) % n if n > 1 else 0
    return GammaL1Element(e, (-g.t) % f, p, f)


def power(g: GammaL1Element, i: int) -> GammaL1Element:
    """g^i via the closed form (c phi^k)^i = c^((1 - p^((f-k)i)) / (1 - p^(f-k))) phi^(ki)."""
    if i < 0:
        return power(inverse(g), -i)
    p, f, n = g.p, g.f, g.n
    if n == 1:
        return GammaL1Element(0, g.t * i % f, p, f)
    k = g.t if g.t else f
    exponent = g.e * _geometric_mod(pow(p, f - k), i, n) % n
    return GammaL1Element(exponent, (g.t * i) % f, p, f)


def element_order(g: GammaL1Element) -> int:
    f, n = g.f, g.n
    k = g.t if g.t else f
    phi_order = f // math.gcd(f, k)
    head = power(g, phi_order)
    return phi_order * (n // math.gcd(n, head.e)) if n > 1 else phi_order


# -- Foulser triples ------------------------------------------------------

@dataclass(frozen=True, order=True)
class FoulserTriple:
    ell: int
    j: int
    k: int
    p: int = field(compare=True)
    f: int = field(compare=True)

    def __post_init__(self):
        check_triple(self.ell, self.j, self.k, self.p, self.f)

    @property
    def n(self) -> int:
        return self.p**self.f - 1

    @property
    def sigma(self) -> tuple[int, ...]:
        return prime_divisors(self.ell)

    def sort_key(self) -> tuple[int, int, int]:
        return (self.ell, self.k, self.j)

    def serialize(self) -> str:
        return f"{self.ell}:{self.j}:{self.k}@{self.p}^{self.f}"

    def __repr__(self) -> str:
        return self.serialize()


def check_triple(ell: int, j: int, k: int, p: int, f: int) -> None:
    n = p**f - 1
    if ell < 1 or n % ell:
        raise ValueError(f"ell={ell} must divide {n}")
    if k < 1 or f % k:
        raise ValueError(f"k={k} must divide f={f}")
    if not 1 <= j <= n:
        raise ValueError(f"j={j} must lie in 1..{n}")
    dec = sigma_decompose(n, prime_divisors(ell))
    if j % dec.sigma_prime_part:
        raise ValueError(f"j={j} must be divisible by {dec.sigma_prime_part}")
    if (dec.sigma_part * j) % ((p**k - 1) * ell):
        raise ValueError(f"(p^k - 1) * ell must divide (p^f - 1)_sigma * j for {ell}:{j}:{k}")


def parse_triple(text: str, p: int | None = None, f: int | None = None) -> FoulserTriple:
    """Parse "l:j:k@p^f" or "l:j:k" (with p, f supplied)."""
    body, _, where = text.partition("@")
    if where:
        from .gf import parse_field_spec
        p, f = parse_field_spec(where)
    if p is None or f is None:
        raise ValueError("triple needs a field")
    parts = body.split(":")
    if len(parts) != 3:
        raise ValueError(f"triple must look like l:j:k, got {text!r}")
    ell, j, k = (int(x) for x in parts)
    return FoulserTriple(ell, j, k, p, f)


def canonical_j(ell: int, x: int, p: int, f: int) -> int:
    """Least j in 1..n, divisible by n_{sigma'}, with j = x mod ell."""
    n = p**f - 1
    m = sigma_decompose(n, prime_divisors(ell)).sigma_prime_part
    # m and ell are coprime, so the residue class of j modulo m*ell is fixed
    j = (x % ell) * m * pow(m, -1, ell) % (m * ell) if ell > 1 else 0
    return j if j else m * ell


def triple_from_pair(lam: int, x: int, k: int, p: int, f: int) -> FoulserTriple:
    """Canonical triple of <a^lam><a^x phi^k> with lam | n and k | f."""
    n = p**f - 1
    pk1 = p**k - 1
    # (a^x phi^k)^(f/k) = a^(x n p^k / (p^k - 1)) and p is a unit modulo lam
    ell = math.gcd(lam, x * (n // pk1), n)
    return FoulserTriple(ell, canonical_j(ell, x, p, f), k, p, f)


def triple_to_quadruple(t: FoulserTriple) -> "FoulserQuadruple":
    n = t.n
    dec = sigma_decompose(n, t.sigma)
    b = element(dec.sigma_prime_part * t.ell, 0, t.p, t.f)
    c = element(t.j, 0, t.p, t.f)
    return FoulserQuadruple(t.sigma, b, c, t.k)


@dataclass(frozen=True)
class FoulserQuadruple:
    sigma: tuple[int, ...]
    b: GammaL1Element
    c: GammaL1Element
    k: int

    def b_order(self) -> int:
        n = self.b.n
        return n // math.gcd(n, self.b.e) if n > 1 else 1

    def to_triple(self) -> FoulserTriple:
        p, f, n = self.b.p, self.b.f, self.b.n
        dec = sigma_decompose(n, self.sigma)
        ell = dec.sigma_part // self.b_order()
        j = self.c.e if self.c.e else n
        return FoulserTriple(ell, j, self.k, p, f)


def group_order(t: FoulserTriple) -> int:
    return t.n * t.f // (t.ell * t.k)


def generators(t: FoulserTriple) -> list[GammaL1Element]:
    return [element(t.ell, 0, t.p, t.f), element(t.j, t.k, t.p, t.f)]


def elements(t: FoulserTriple) -> set[GammaL1Element]:
    n, p, f = t.n, t.p, t.f
    g = element(t.j, t.k, p, f)
    out = set()
    cur = identity(p, f)
    for _ in range(f // t.k):
        for u in range(0, n if n > 1 else 1, t.ell):
            out.add(compose(element(u, 0, p, f), cur))
        cur = compose(cur, g)
    return out


def subgroup_from_generators(gens: Iterable[GammaL1Element]) -> FoulserTriple:
    gens = list(gens)
    if not gens:
        raise ValueError("need at least one generator")
    p, f = gens[0].p, gens[0].f
    for g in gens:
        if (g.p, g.f) != (p, f):
            raise ValueError("generators from different groups")
    return triple_of_elements(close(gens))


def close(gens: Iterable[GammaL1Element]) -> set[GammaL1Element]:
    """Closure of a finite generating set under composition."""
    gens = list(gens)
    p, f = gens[0].p, gens[0].f
    seen = {identity(p, f)}
    frontier = [identity(p, f)]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = compose(x, g)
                if y not in seen:
                    seen.add(y)
                    nxt.append(y)
        frontier = nxt
    return seen


def triple_of_elements(H: set[GammaL1Element]) -> FoulserTriple:
    """Canonical triple of a subgroup given as an element set."""
    any_el = next(iter(H))
    p, f, n = any_el.p, any_el.f, any_el.n
    a_parts = [h.e for h in H if h.t == 0]
    ell = math.gcd(n, *a_parts) if n > 1 else 1
    k = math.gcd(f, *(h.t for h in H))
    x = next(h.e for h in H if h.t == k % f)
    return FoulserTriple(ell, canonical_j(ell, x, p, f), k, p, f)


# -- arithmetic deciders -------------------------------------------------

def _mod4_clause(g: int, p: int, k: int) -> bool:
    if g % 2 == 0 and p**k % 4 == 3:
        return g % 4 == 2
    return True


def is_transitive(t: FoulserTriple) -> bool:
    """Transitivity on the nonzero field elements, decided arithmetically."""
    allowed = set(prime_divisors(t.f)) & set(prime_divisors(t.p**t.k - 1))
    allowed -= set(prime_divisors(t.j))
    return set(prime_divisors(t.ell)) <= allowed and _mod4_clause(t.ell, t.p, t.k)


def is_transitive_on_classes(t: FoulserTriple, i: int) -> bool:
    """Transitivity on the orbits of <a^i>, a subgroup of order (p^f - 1)/i."""
    if i < 1 or t.n % i:
        raise ValueError(f"class modulus {i} must divide {t.n}")
    allowed = set(prime_divisors(t.f)) & set(prime_divisors(t.p**t.k - 1))
    allowed -= set(prime_divisors(t.j))
    g = math.gcd(t.ell, i)
    return set(prime_divisors(g)) <= allowed and _mod4_clause(g, t.p, t.k)


def _subsets(items: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    for r in range(len(items) + 1):
        yield from combinations(items, r)


def _crt(residues: list[tuple[int, int]]) -> int:
    x, m = 0, 1
    for r, mod in residues:
        if mod == 1:
            continue
        # solve x + m*s = r (mod mod)
        s = (r - x) * pow(m, -1, mod) % mod
        x += m * s
        m *= mod
    return x


def minimal_shape(t: FoulserTriple) -> str | None:
    """Which minimal-transitive shape t matches: "a", "b" or None.

    Shape (a): <a>_{sigma'} : <c phi^k>, with 2 not in sigma or p^k = 1 mod 4.
    Shape (b): <a>_{sigma'} : (<a^2>_2 <c phi^k>), with 2 in sigma and
    p^k = 3 mod 4.  In both, sigma lies in pi(p^k - 1) and pi(f), c generates
    <a>_sigma and f_{sigma'} divides k.
    """
    p, f, k, n = t.p, t.f, t.k, t.n
    if n == 1:
        return "a" if t.k == 1 else None
    pk = p**k
    candidates = tuple(sorted(set(prime_divisors(pk - 1)) & set(prime_divisors(f))))
    ell_primes = set(prime_divisors(t.ell))
    for sigma in _subsets(candidates):
        if k % sigma_decompose(f, sigma).sigma_prime_part:
            continue
        if not ell_primes <= set(sigma):
            continue
        # c = a^x must lie in a^j <a^ell>, inside <a>_sigma, and generate it
        if any(t.j % r == 0 for r in ell_primes):
            continue
        dec = sigma_decompose(n, sigma)
        free = sigma_decompose(dec.sigma_part, ell_primes).sigma_prime_part
        x = _crt([(t.j % t.ell, t.ell), (0, dec.sigma_prime_part), (1, free)])
        if 2 not in sigma or pk % 4 == 1:
            shape, lam = "a", dec.sigma_part
        else:
            shape = "b"
            lam = math.gcd(dec.sigma_part, 2 * sigma_decompose(n, (2,)).sigma_prime_part)
        if triple_from_pair(lam, x, k, p, f) == t:
            return shape
    return None


def is_minimally_transitive(t: FoulserTriple) -> bool:
    return minimal_shape(t) is not None


def is_regular(t: FoulserTriple) -> bool:
    shape = minimal_shape(t)
    return shape == "a" or (shape == "b" and t.f % 4 == 2)


def psi_covers(t: FoulserTriple) -> bool:
    """Whether the a-parts of the elements of H exhaust <a>."""
    return len({h.e for h in elements(t)}) == t.n


# -- enumeration -----------------------------------------------------------

FILTERS = ("all", "transitive", "minimal", "regular")


def enumerate_subgroups(p: int, f: int, filter: str = "all", class_modulus: int | None = None) -> list[FoulserTriple]:
    """Every subgroup of GammaL_1(p^f) once, sorted by (ell, k, j).

    With class_modulus set, the "transitive" filter means transitive on the
    orbits of <a^class_modulus>.
    """
    if filter not in FILTERS:
        raise ValueError(f"unknown filter {filter!r}")
    n = p**f - 1
    if n + 1 > ENUMERATION_LIMIT:
        raise ValueError("full enumeration is limited to p^f <= 2^16")
    out = []
    for ell in divisors(n):
        dec = sigma_decompose(n, prime_divisors(ell))
        step = dec.sigma_prime_part
        for k in divisors(f):
            modulus = (p**k - 1) * ell
            for u in range(1, ell + 1):
                j = u * step
                if (dec.sigma_part * j) % modulus == 0:
                    out.append(FoulserTriple(ell, j, k, p, f))
    out.sort(key=FoulserTriple.sort_key)
    if filter == "transitive":
        if class_modulus is None:
            out = [t for t in out if is_transitive(t)]
        else:
            out = [t for t in out if is_transitive_on_classes(t, class_modulus)]
    elif filter == "minimal":
        out = [t for t in out if is_minimally_transitive(t)]
    elif filter == "regular":
        out = [t for t in out if is_regular(t)]
    return out


# -- brute-force oracle ------------------------------------------------------

def orbit_oracle(t: FoulserTriple, class_modulus: int | None = None) -> list[list[int]]:
    """Orbits of H on the nonzero field elements, or on the <a^i>-classes.

    Points are raw field integers; classes are labelled by the discrete log of
    a member reduced modulo class_modulus.  The closure uses field arithmetic
    only.
    """
    if t.n + 1 > ENUMERATION_LIMIT:
        raise ValueError("orbit oracle is limited to p^f <= 2^16")
    F = make_field(t.p, t.f)
    gens = [(g.e, g.t) for g in generators(t)]
    if class_modulus is None:
        points = list(range(1, F.q))
        label = lambda x: x  # noqa: E731
        rep = lambda c: c  # noqa: E731
    else:
        i = class_modulus
        if t.n % i:
            raise ValueError("class modulus must divide p^f - 1")
        points = list(range(i))
        label = lambda x: F.dlog(x) % i  # noqa: E731
        rep = lambda c: F.w(c)  # noqa: E731
    seen: set[int] = set()
    orbits = []
    for start in points:
        if start in seen:
            continue
        orbit = [start]
        seen.add(start)
        stack = [start]
        while stack:
            c = stack.pop()
            x = rep(c)
            for e, tt in gens:
                d = label(act_raw(F, e, tt, x))
                if d not in seen:
                    seen.add(d)
                    orbit.append(d)
                    stack.append(d)
        orbits.append(sorted(orbit))
    return orbits


# -- structure of small subgroups --------------------------------------------

def sylow_subgroup(H: set[GammaL1Element], r: int) -> set[GammaL1Element]:
    """A Sylow r-subgroup of H, grown greedily from r-elements."""
    size = len(H)
    target = 1
    while size % r == 0:
        size //= r
        target *= r
    any_el = next(iter(H))
    P = {identity(any_el.p, any_el.f)}
    for g in sorted(H, key=lambda h: (h.t, h.e)):
        if len(P) == target:
            break
        if g in P or not _is_power(element_order(g), r):
            continue
        Q = close(list(P) + [g])
        if _is_power(len(Q), r):
            P = Q
    return P


def _is_power(x: int, r: int) -> bool:
    while x % r == 0:
        x //= r
    return x == 1


def classify_p_group(P: set[GammaL1Element]) -> str:
    """"cyclic", "quaternion" (generalized quaternion) or "other"."""
    size = len(P)
    if size == 1 or any(element_order(g) == size for g in P):
        return "cyclic"
    if size >= 8 and size & (size - 1) == 0:
        # generalized quaternion: <x, y | x^(2^(n-1)), y^2 = x^(2^(n-2)), x^y = x^-1>
        half = size // 2
        for x in P:
            if element_order(x) != half:
                continue
            for y in P:
                if y in _cyclic(x):
                    continue
                if power(y, 2) == power(x, half // 2) and compose(compose(inverse(y), x), y) == inverse(x):
                    return "quaternion"
    return "other"


def _cyclic(x: GammaL1Element) -> set[GammaL1Element]:
    return {power(x, i) for i in range(element_order(x))}


def contains(t: FoulserTriple, g: GammaL1Element) -> bool:
    """Membership of g in the subgroup named by t, without listing elements."""
    if (g.p, g.f) != (t.p, t.f):
        raise ValueError("element from a different group")
    k = g.t if g.t else t.f
    if k % t.k:
        return False
    head = power(element(t.j, t.k, t.p, t.f), k // t.k)
    return (g.e - head.e) % t.ell == 0


def is_subgroup(small: FoulserTriple, big: FoulserTriple) -> bool:
    return all(contains(big, g) for g in generators(small))

"""Finite fields F_{p^f} over a reproducible primitive modulus.

Elements are stored as integers 0 <= x < p^f whose base-p digits are the
coefficients of the residue polynomial, constant term first.  Hence 0 is zero,
1 is one and p is the residue class of X, which is the generator w.

For p^f <= 2^20 multiplication goes through discrete-log tables and odd
characteristic addition through a Zech table; larger fields (up to 2^24) fall
back to coefficient arithmetic.
"""

from __future__ import annotations

import itertools
import math
import re
from functools import lru_cache

from .arith import divisors, is_prime, prime_divisors

TABLE_LIMIT = 1 << 20
SIZE_LIMIT = 1 << 24


class FieldSizeError(ValueError):
    pass


def _poly_mulmod(a: list[int], b: list[int], mod: tuple[int, ...], p: int) -> list[int]:
    f = len(mod) - 1
    prod = [0] * (2 * f - 1)
    for i, ai in enumerate(a):
        if ai:
            for j, bj in enumerate(b):
                prod[i + j] += ai * bj
    for k in range(len(prod) - 1, f - 1, -1):
        c = prod[k] % p
        if c:
            for t in range(f):
                prod[k - f + t] -= c * mod[t]
        prod[k] = 0
    return [c % p for c in prod[:f]]


def _poly_powmod(base: list[int], e: int, mod: tuple[int, ...], p: int) -> list[int]:
    f = len(mod) - 1
    result = [1] + [0] * (f - 1)
    while e:
        if e & 1:
            result = _poly_mulmod(result, base, mod, p)
        base = _poly_mulmod(base, base, mod, p)
        e >>= 1
    return result


def _x_is_primitive(mod: tuple[int, ...], p: int) -> bool:
    f = len(mod) - 1
    n = p**f - 1
    one = [1] + [0] * (f - 1)
    x = [0, 1] + [0] * (f - 2) if f > 1 else [(-mod[0]) % p]
    if _poly_powmod(list(x), n, mod, p) != one:
        return False
    return all(_poly_powmod(list(x), n // r, mod, p) != one for r in prime_divisors(n)) if n > 1 else True


def _is_primitive_root(g: int, p: int) -> bool:
    if p == 2:
        return g == 1
    return all(pow(g, (p - 1) // r, p) != 1 for r in prime_divisors(p - 1))


def primitive_modulus(p: int, f: int) -> tuple[int, ...]:
    """Lexicographically least monic primitive polynomial of degree f over F_p.

    Returned as (c_0, ..., c_{f-1}, 1); the order compares c_0 first.
    """
    # the norm of a primitive element, (-1)^f c_0, generates F_p^x
    good_c0 = {c for c in range(1, p) if _is_primitive_root((-1) ** f * c % p, p)}
    for low in itertools.product(range(p), repeat=f):
        if low[0] not in good_c0:
            continue
        mod = tuple(low) + (1,)
        if f > 1 and any(sum(c * pow(t, i, p) for i, c in enumerate(mod)) % p == 0 for t in range(p)):
            continue
        if _x_is_primitive(mod, p):
            return mod
    raise AssertionError("a primitive polynomial always exists")


class Field:
    """F_{p^f} with generator w = X (for f = 1, w is the root of the modulus)."""

    def __init__(self, p: int, f: int):
        if not is_prime(p) or f < 1:
            raise ValueError(f"bad field parameters p={p}, f={f}")
        if p**f > SIZE_LIMIT:
            raise FieldSizeError(f"{p}^{f} exceeds the supported size 2^24")
        self.p = p
        self.f = f
        self.q = p**f
        self.n = self.q - 1
        self.modulus = primitive_modulus(p, f)
        self.tabled = self.q <= TABLE_LIMIT
        self._pows = [p**i for i in range(f)]
        gen_coeffs = [0, 1] + [0] * (f - 2) if f > 1 else [(-self.modulus[0]) % p]
        self._gen = self.from_coeffs(gen_coeffs)
        self.exp: list[int] = []
        self.log: list[int] = []
        self.zech: list[int] = []
        if self.tabled:
            self._build_tables()

    def _build_tables(self) -> None:
        p, f, n = self.p, self.f, self.n
        exp = [0] * (2 * n + 1)
        log = [-1] * self.q
        v = [1] + [0] * (f - 1)
        gen = self.coeffs(self._gen)
        top_mod = self.modulus[:f]
        for k in range(n):
            x = sum(c * w for c, w in zip(v, self._pows))
            exp[k] = x
            log[x] = k
            if f == 1:
                v = [v[0] * gen[0] % p]
            else:
                carry = v[-1]
                v = [0] + v[:-1]
                if carry:
                    v = [(c - carry * m) % p for c, m in zip(v, top_mod)]
        for k in range(n, 2 * n + 1):
            exp[k] = exp[k - n]
        self.exp, self.log = exp, log
        if p != 2:
            # zech[k] = log(1 + w^k), or -1 when 1 + w^k = 0
            zech = [-1] * n
            for k in range(n):
                x = exp[k]
                c = x % p
                # adding 1 only touches the constant coefficient
                zech[k] = log[x - c + (c + 1) % p]
            self.zech = zech

    # -- coefficient view ------------------------------------------------
    def coeffs(self, x: int) -> list[int]:
        out = []
        for _ in range(self.f):
            x, c = divmod(x, self.p)
            out.append(c)
        return out

    def from_coeffs(self, cs) -> int:
        cs = list(cs)
        if len(cs) > self.f:
            raise ValueError("too many coefficients")
        return sum((c % self.p) * w for c, w in zip(cs, self._pows))

    def _add_slow(self, x: int, y: int) -> int:
        if self.p == 2:
            return x ^ y
        return self.from_coeffs(a + b for a, b in zip(self.coeffs(x), self.coeffs(y)))

    # -- arithmetic on raw integers --------------------------------------
    def add(self, x: int, y: int) -> int:
        if self.p == 2:
            return x ^ y
        if x == 0:
            return y
        if y == 0:
            return x
        if not self.tabled:
            return self._add_slow(x, y)
        lx = self.log[x]
        z = self.zech[(self.log[y] - lx) % self.n]
        if z < 0:
            return 0
        return self.exp[lx + z]

    def neg(self, x: int) -> int:
        if self.p == 2 or x == 0:
            return x
        if not self.tabled:
            return self.from_coeffs(-c for c in self.coeffs(x))
        return self.exp[self.log[x] + self.n // 2]

    def sub(self, x: int, y: int) -> int:
        return self.add(x, self.neg(y))

    def mul(self, x: int, y: int) -> int:
        if x == 0 or y == 0:
            return 0
        if not self.tabled:
            return self.from_coeffs(_poly_mulmod(self.coeffs(x), self.coeffs(y), self.modulus, self.p))
        return self.exp[self.log[x] + self.log[y]]

    def inv(self, x: int) -> int:
        if x == 0:
            raise ZeroDivisionError("inverse of zero")
        return self.pow(x, self.n - 1)

    def div(self, x: int, y: int) -> int:
        return self.mul(x, self.inv(y))

    def pow(self, x: int, e: int) -> int:
        if x == 0:
            if e == 0:
                return 1
            if e < 0:
                raise ZeroDivisionError("negative power of zero")
            return 0
        if self.tabled:
            return self.exp[self.log[x] * e % self.n]
        return self.from_coeffs(_poly_powmod(self.coeffs(x), e % self.n, self.modulus, self.p))

    def frob(self, x: int, k: int = 1) -> int:
        """x^(p^k); k may be negative."""
        return self.pow(x, pow(self.p, k % self.f, self.n) if self.n > 1 else 1)

    def w(self, k: int) -> int:
        """w^k."""
        if self.tabled:
            return self.exp[k % self.n]
        return self.pow(self._gen, k)

    @property
    def generator(self) -> int:
        return self._gen

    def dlog(self, x: int) -> int:
        if x == 0:
            raise ValueError("discrete log of zero")
        if self.tabled:
            return self.log[x]
        return self._bsgs(x)

    def _bsgs(self, x: int) -> int:
        m = math.isqrt(self.n) + 1
        baby = {}
        cur = 1
        for j in range(m):
            baby.setdefault(cur, j)
            cur = self.mul(cur, self._gen)
        step = self.pow(self._gen, self.n - m)
        cur = x
        for i in range(m):
            if cur in baby:
                return (i * m + baby[cur]) % self.n
            cur = self.mul(cur, step)
        raise AssertionError("generator does not reach x")

    def sum(self, xs) -> int:
        acc = 0
        for x in xs:
            acc = self.add(acc, x)
        return acc

    def scalar(self, c: int) -> int:
        """Image of the integer c in the prime field."""
        return c % self.p

    # -- subfields and traces --------------------------------------------
    def in_subfield(self, x: int, d: int) -> bool:
        return self.f % d == 0 and self.frob(x, d) == x

    def subfield(self, d: int) -> list[int]:
        """Elements of the subfield F_{p^d}, zero first then by discrete log."""
        if self.f % d:
            raise ValueError(f"{d} does not divide {self.f}")
        step = self.n // (self.p**d - 1)
        return [0] + [self.w(step * k) for k in range(self.p**d - 1)]

    def subfield_generator(self, d: int) -> int:
        """w^((p^f - 1)/(p^d - 1)), the distinguished generator of F_{p^d}^x."""
        if self.f % d:
            raise ValueError(f"{d} does not divide {self.f}")
        return self.w(self.n // (self.p**d - 1))

    def trace(self, x: int, src: int, dst: int) -> int:
        """Relative trace from F_{p^src} down to F_{p^dst} (degrees over F_p)."""
        if src % dst or self.f % src:
            raise ValueError(f"cannot take trace from degree {src} to degree {dst} inside degree {self.f}")
        acc = 0
        for t in range(src // dst):
            acc = self.add(acc, self.frob(x, dst * t))
        return acc

    def norm(self, x: int, src: int, dst: int) -> int:
        if src % dst or self.f % src:
            raise ValueError("bad norm degrees")
        return self.pow(x, (self.p**src - 1) // (self.p**dst - 1))

    # -- wrapping ----------------------------------------------------------
    def __call__(self, x: int) -> "FieldElement":
        return FieldElement(self, x)

    def elements(self) -> range:
        return range(self.q)

    def __repr__(self) -> str:
        return f"GF({self.p}^{self.f})"

    @property
    def spec(self) -> str:
        return f"{self.p}^{self.f}"

    def format(self, x: int) -> str:
        return "0" if x == 0 else f"w^{self.dlog(x)}"

    def parse(self, s: str) -> int:
        s = s.strip()
        if s == "0":
            return 0
        m = re.fullmatch(r"w\^(-?\d+)", s)
        if not m:
            raise ValueError(f"cannot parse field element {s!r}")
        return self.w(int(m.group(1)))


@lru_cache(maxsize=None)
def make_field(p: int, f: int) -> Field:
    return Field(p, f)


def parse_field_spec(spec: str) -> tuple[int, int]:
    m = re.fullmatch(r"\s*(\d+)\s*\^\s*(\d+)\s*", spec)
    if not m:
        raise ValueError(f"field spec must look like p^f, got {spec!r}")
    p, f = int(m.group(1)), int(m.group(2))
    if not is_prime(p) or f < 1:
        raise ValueError(f"bad field spec {spec!r}")
    return p, f


def embedding(small: Field, big: Field) -> dict[int, int]:
    """A field embedding F_{p^d} -> F_{p^f} as a lookup table.

    The generator of the small field goes to the root of its modulus in the big
    field with least discrete log; this root is a power of
    big.subfield_generator(d).
    """
    if small.p != big.p or big.f % small.f:
        raise ValueError("no embedding between these fields")
    step = big.n // small.n
    for k in range(small.n):
        if math.gcd(k, small.n) != 1:
            continue
        root = big.w(step * k)
        val = 0
        power = 1
        for c in small.modulus:
            if c:
                val = big.add(val, big.mul(c % big.p, power))
            power = big.mul(power, root)
        if val == 0:
            table = {0: 0}
            for e in range(small.n):
                table[small.w(e)] = big.w(step * k * e)
            return table
    raise AssertionError("the modulus must split in the larger field")


class FieldElement:
    """Value-semantics wrapper around a raw field integer."""

    __slots__ = ("field", "value")

    def __init__(self, field: Field, value: int):
        self.field = field
        self.value = value

    def _other(self, o) -> int:
        if isinstance(o, FieldElement):
            if o.field is not self.field:
                raise ValueError("field mismatch")
            return o.value
        if isinstance(o, int):
            return self.field.scalar(o)
        return NotImplemented

    def __add__(self, o):
        return FieldElement(self.field, self.field.add(self.value, self._other(o)))

    __radd__ = __add__

    def __sub__(self, o):
        return FieldElement(self.field, self.field.sub(self.value, self._other(o)))

    def __rsub__(self, o):
        return FieldElement(self.field, self.field.sub(self._other(o), self.value))

    def __neg__(self):
        return FieldElement(self.field, self.field.neg(self.value))

    def __mul__(self, o):
        return FieldElement(self.field, self.field.mul(self.value, self._other(o)))

    __rmul__ = __mul__

    def __truediv__(self, o):
        return FieldElement(self.field, self.field.div(self.value, self._other(o)))

    def __pow__(self, e: int):
        return FieldElement(self.field, self.field.pow(self.value, e))

    def __eq__(self, o):
        if isinstance(o, FieldElement):
            return self.field is o.field and self.value == o.value
        if isinstance(o, int):
            return self.value == self.field.scalar(o)
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.field.f, self.value))

    def __bool__(self):
        return self.value != 0

    def __repr__(self):
        return self.field.format(self.value)

    @property
    def coeffs(self) -> list[int]:
        return self.field.coeffs(self.value)

    def frobenius(self, k: int = 1) -> "FieldElement":
        return FieldElement(self.field, self.field.frob(self.value, k))

    def dlog(self) -> int:
        return self.field.dlog(self.value)


def rel_trace(x: FieldElement, target_degree: int, source_degree: int | None = None) -> FieldElement:
    """Tr from F_{p^source} to F_{p^target}; source defaults to the whole field."""
    F = x.field
    src = F.f if source_degree is None else source_degree
    if not F.in_subfield(x.value, src):
        raise ValueError("element is not in the source subfield")
    return FieldElement(F, F.trace(x.value, src, target_degree))


def dlog(x: FieldElement) -> int:
    return x.field.dlog(x.value)


def subfield_degrees(F: Field) -> list[int]:
    return divisors(F.f)


# -- linear algebra over a field (or over one of its subfields) -------------

def row_reduce(F: Field, rows: list[list[int]]) -> list[list[int]]:
    """Reduced row echelon form; zero rows are dropped."""
    rows = [list(r) for r in rows]
    out: list[list[int]] = []
    if not rows:
        return out
    width = len(rows[0])
    col = 0
    while rows and col < width:
        pivot = next((r for r in rows if r[col]), None)
        if pivot is None:
            col += 1
            continue
        rows.remove(pivot)
        inv = F.inv(pivot[col])
        pivot = [F.mul(inv, v) for v in pivot]
        for group in (rows, out):
            for idx, r in enumerate(group):
                c = r[col]
                if c:
                    group[idx] = [F.sub(v, F.mul(c, pv)) for v, pv in zip(r, pivot)]
        out.append(pivot)
        rows = [r for r in rows if any(r)]
        col += 1
    return out


def rank(F: Field, rows: list[list[int]]) -> int:
    return len(row_reduce(F, rows))


def mat_mul(F: Field, A: list[list[int]], B: list[list[int]]) -> list[list[int]]:
    cols = list(zip(*B))
    return [[F.sum(F.mul(a, b) for a, b in zip(row, col)) for col in cols] for row in A]


def mat_inverse(F: Field, A: list[list[int]]) -> list[list[int]]:
    size = len(A)
    aug = [list(row) + [1 if i == j else 0 for j in range(size)] for i, row in enumerate(A)]
    red = row_reduce(F, aug)
    if len(red) < size or any(red[i][i] != 1 for i in range(size)):
        raise ValueError("singular matrix")
    return [row[size:] for row in red]


def identity_matrix(size: int) -> list[list[int]]:
    return [[1 if i == j else 0 for j in range(size)] for i in range(size)]


def dual_basis(F: Field, basis: list[int], src: int, dst: int) -> list[int]:
    """Dual of an F_{p^dst}-basis of F_{p^src} under the trace form Tr_{src/dst}(xy)."""
    gram = [[F.trace(F.mul(b1, b2), src, dst) for b2 in basis] for b1 in basis]
    inv = mat_inverse(F, gram)
    return [F.sum(F.mul(inv[i][j], basis[i]) for i in range(len(basis))) for j in range(len(basis))]


class Coordinates:
    """Coordinates of elements of F_{p^src} over the subfield F_{p^dst}."""

    def __init__(self, F: Field, src: int, dst: int, basis: list[int] | None = None):
        if src % dst or F.f % src:
            raise ValueError("bad subfield degrees")
        self.F, self.src, self.dst = F, src, dst
        if basis is None:
            # 1, g, g^2, ... for g a generator of F_{p^src}^x
            g = F.subfield_generator(src)
            basis = [F.pow(g, i) for i in range(src // dst)]
        self.basis = basis
        self.dual = dual_basis(F, basis, src, dst)

    def __call__(self, x: int) -> list[int]:
        F = self.F
        return [F.trace(F.mul(x, d), self.src, self.dst) for d in self.dual]

    def combine(self, coords: list[int]) -> int:
        F = self.F
        return F.sum(F.mul(c, b) for c, b in zip(coords, self.basis))

"""Exact integer arithmetic: factorization, sigma-parts, primitive prime
divisors and the order formulas of the classical groups used for bookkeeping.
"""

from __future__ import annotations

import math
import random
from dataclasses import dataclass
from functools import lru_cache, reduce
from typing import Iterable

_TRIAL_LIMIT = 1 << 20
_SMALL_PRIMES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime(n: int) -> bool:
    """Deterministic Miller-Rabin, valid for all n < 3.3e24."""
    if n < 2:
        return False
    for p in _SMALL_PRIMES:
        if n % p == 0:
            return n == p
    d, s = n - 1, 0
    while d % 2 == 0:
        d //= 2
        s += 1
    for a in _SMALL_PRIMES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(s - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def _pollard_brent(n: int, rng: random.Random) -> int:
    if n % 2 == 0:
        return 2
    while True:
        y, c, m = rng.randrange(1, n), rng.randrange(1, n), 128
        g = r = q = 1
        x = ys = y
        while g == 1:
            x = y
            for _ in range(r):
                y = (y * y + c) % n
            k = 0
            while k < r and g == 1:
                ys = y
                for _ in range(min(m, r - k)):
                    y = (y * y + c) % n
                    q = q * abs(x - y) % n
                g = math.gcd(q, n)
                k += m
            r *= 2
        if g == n:
            g = 1
            while g == 1:
                ys = (ys * ys + c) % n
                g = math.gcd(abs(x - ys), n)
        if g != n:
            return g


def factorize_int(n: int) -> list[int]:
    """Prime factors of n with multiplicity, in ascending order."""
    if n < 1:
        raise ValueError("factorize_int needs n >= 1")
    return list(_factor_cached(n))


@lru_cache(maxsize=4096)
def _factor_cached(n: int) -> tuple[int, ...]:
    out: list[int] = []
    while n % 2 == 0:
        out.append(2)
        n //= 2
    p = 3
    while p * p <= n and p < _TRIAL_LIMIT:
        while n % p == 0:
            out.append(p)
            n //= p
        p += 2
    if n > 1:
        stack = [n]
        # fixed seed keeps the factor search reproducible
        rng = random.Random(n)
        while stack:
            v = stack.pop()
            if v == 1:
                continue
            if is_prime(v) or v < _TRIAL_LIMIT * _TRIAL_LIMIT:
                # below the trial bound squared every cofactor is prime
                out.append(v)
                continue
            d = _pollard_brent(v, rng)
            stack.extend((d, v // d))
    return tuple(sorted(out))


def factor_dict(n: int) -> dict[int, int]:
    res: dict[int, int] = {}
    for p in factorize_int(n):
        res[p] = res.get(p, 0) + 1
    return res


def prime_divisors(n: int) -> tuple[int, ...]:
    """pi(n): the sorted distinct primes dividing n."""
    return tuple(sorted(set(factorize_int(n))))


def prime_set(primes: Iterable[int]) -> tuple[int, ...]:
    """Validate and normalise a set of primes to a sorted tuple."""
    ps = tuple(sorted(set(primes)))
    for p in ps:
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
    return ps


def divisors(n: int) -> list[int]:
    divs = [1]
    for p, e in factor_dict(n).items():
        divs = [d * p**k for d in divs for k in range(e + 1)]
    return sorted(divs)


def p_part(n: int, p: int) -> int:
    """Largest power of p dividing n."""
    out = 1
    while n % p == 0:
        n //= p
        out *= p
    return out


@dataclass(frozen=True)
class SigmaDecomposition:
    n: int
    sigma_part: int
    sigma_prime_part: int


def sigma_decompose(n: int, sigma: Iterable[int]) -> SigmaDecomposition:
    if n < 1:
        raise ValueError("sigma_decompose needs n >= 1")
    part = 1
    for p in set(sigma):
        part *= p_part(n, p)
    return SigmaDecomposition(n, part, n // part)


def sigma_part(n: int, sigma: Iterable[int]) -> int:
    return sigma_decompose(n, sigma).sigma_part


def sigma_prime_part(n: int, sigma: Iterable[int]) -> int:
    return sigma_decompose(n, sigma).sigma_prime_part


def multiplicative_order(a: int, n: int) -> int:
    """Order of a modulo n; requires gcd(a, n) = 1."""
    if n == 1:
        return 1
    if math.gcd(a, n) != 1:
        raise ValueError("a must be a unit modulo n")
    phi = n
    for p in prime_divisors(n):
        phi = phi // p * (p - 1)
    order = phi
    for p in prime_divisors(phi):
        while order % p == 0 and pow(a, order // p, n) == 1:
            order //= p
    return order


def primitive_prime_divisor(a: int, n: int, count_seven_for_2_6: bool = False) -> int | None:
    """Least prime dividing a^n - 1 but no a^k - 1 with k < n, or None.

    With count_seven_for_2_6 set, (a, n) = (2, 6) returns 7, following the
    convenient convention that 7 plays that role for 2^6 - 1.
    """
    if a < 2 or n < 1:
        raise ValueError("need a >= 2 and n >= 1")
    if (a, n) == (2, 6):
        return 7 if count_seven_for_2_6 else None
    for p in prime_divisors(a**n - 1):
        if multiplicative_order(a % p, p) == n:
            return p
    return None


def zsigmondy_exception(a: int, n: int) -> bool:
    """True exactly when a^n - 1 has no primitive prime divisor."""
    if n == 1:
        return a == 2
    if n == 2:
        return (a + 1) & a == 0
    return (a, n) == (2, 6)


def lte_prediction(n: int, ell: int, r: int) -> int:
    """Predicted r-part of n^ell - 1 when r | n - 1 (r odd) or 4 | n - 1 (r = 2)."""
    if r == 2:
        if (n - 1) % 4:
            raise ValueError("the 2-adic case needs 4 | n - 1")
    elif (n - 1) % r:
        raise ValueError("need r | n - 1")
    return p_part(ell, r) * p_part(n - 1, r)


def gcd_powers_minus_one(a: int, exponents: Iterable[int]) -> int:
    """a^gcd(exponents) - 1, the closed form for gcd(a^n_1 - 1, ..., a^n_k - 1)."""
    return a ** reduce(math.gcd, exponents) - 1


# Orders of the classical groups, by the standard formulas.

def order_gl(n: int, q: int) -> int:
    return q ** (n * (n - 1) // 2) * math.prod(q**i - 1 for i in range(1, n + 1))


def order_sp(two_m: int, q: int) -> int:
    """|Sp_{2m}(q)|."""
    m = two_m // 2
    return q ** (m * m) * math.prod(q ** (2 * i) - 1 for i in range(1, m + 1))


def order_o_minus(two_m: int, q: int) -> int:
    """|O^-_{2m}(q)|, the full isometry group of an elliptic quadratic form."""
    m = two_m // 2
    return 2 * q ** (m * (m - 1)) * (q**m + 1) * math.prod(q ** (2 * i) - 1 for i in range(1, m))


def order_omega_minus(two_m: int, q: int) -> int:
    """|Omega^-_{2m}(q)|."""
    return order_o_minus(two_m, q) // (2 * math.gcd(2, q - 1))


def order_o_plus(two_m: int, q: int) -> int:
    m = two_m // 2
    return 2 * q ** (m * (m - 1)) * (q**m - 1) * math.prod(q ** (2 * i) - 1 for i in range(1, m))


def order_gu(n: int, q: int) -> int:
    return q ** (n * (n - 1) // 2) * math.prod(q**i - (-1) ** i for i in range(1, n + 1))


def order_su(n: int, q: int) -> int:
    return order_gu(n, q) // (q + 1)

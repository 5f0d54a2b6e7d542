import math

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from artifact import arith


def _trial_division(n):
    out, d = [], 2
    while d * d <= n:
        while n % d == 0:
            out.append(d)
            n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def test_factorize_examples():
    assert arith.factorize_int(1) == []
    assert arith.factorize_int(12) == [2, 2, 3]
    assert arith.factor_dict(1451520) == {2: 9, 3: 4, 5: 1, 7: 1}


@given(st.integers(min_value=1, max_value=10**7))
def test_factorize_matches_trial_division(n):
    assert arith.factorize_int(n) == _trial_division(n)


def test_factorize_large_semiprime():
    # both factors prime, so trial division would be slow
    n = 1000000007 * 998244353
    assert arith.factorize_int(n) == [998244353, 1000000007]


@given(st.integers(min_value=1, max_value=10**6))
def test_divisors_complete(n):
    ds = arith.divisors(n)
    assert ds == sorted(d for d in range(1, math.isqrt(n) + 1) if n % d == 0 for d in {d, n // d})


def test_sigma_examples():
    for n, sigma, expected in [(8, {2}, (8, 1)), (12, {2}, (4, 3)), (80, {2, 5}, (80, 1))]:
        d = arith.sigma_decompose(n, sigma)
        assert (d.sigma_part, d.sigma_prime_part) == expected


@given(st.integers(min_value=1, max_value=10**6), st.sets(st.sampled_from([2, 3, 5, 7, 11, 13])))
def test_sigma_split_is_coprime_product(n, sigma):
    d = arith.sigma_decompose(n, sigma)
    assert d.sigma_part * d.sigma_prime_part == n
    assert set(arith.prime_divisors(d.sigma_part)) <= sigma
    assert not set(arith.prime_divisors(d.sigma_prime_part)) & sigma


def test_ppd_examples():
    assert arith.primitive_prime_divisor(2, 6) is None
    assert arith.primitive_prime_divisor(2, 6, count_seven_for_2_6=True) == 7
    assert arith.primitive_prime_divisor(3, 4) == 5


@given(st.integers(min_value=2, max_value=30), st.integers(min_value=1, max_value=12))
def test_zsigmondy_exceptions(a, n):
    has_ppd = arith.primitive_prime_divisor(a, n) is not None
    assert has_ppd != arith.zsigmondy_exception(a, n)


@given(st.integers(min_value=2, max_value=50), st.integers(min_value=1, max_value=12))
def test_ppd_is_primitive(a, n):
    r = arith.primitive_prime_divisor(a, n)
    if r is not None:
        assert (a**n - 1) % r == 0
        assert all((a**k - 1) % r for k in range(1, n))


@given(st.integers(min_value=2, max_value=10**4), st.integers(min_value=2, max_value=10**4))
def test_multiplicative_order(a, n):
    if math.gcd(a, n) != 1:
        with pytest.raises(ValueError):
            arith.multiplicative_order(a, n)
        return
    k = arith.multiplicative_order(a, n)
    assert pow(a, k, n) == 1
    assert all(pow(a, k // p, n) != 1 for p in arith.prime_divisors(k))


def test_group_orders():
    # standard values
    assert arith.order_sp(6, 2) == 1451520
    assert arith.order_omega_minus(6, 2) == 25920
    assert arith.order_sp(4, 4) == 979200
    assert arith.order_su(2, 3) == 24
    assert arith.order_su(4, 3) == 4 * 3265920  # centre of order 4 over PSU_4(3)
    assert arith.order_o_plus(8, 2) == 348364800
    assert arith.order_gl(2, 3) == 48


@settings(max_examples=300)
@given(st.integers(min_value=2, max_value=10**6), st.integers(min_value=1, max_value=60),
       st.sampled_from([2, 3, 5, 7, 11, 13]))
def test_lte(n, ell, r):
    if r == 2 and (n - 1) % 4:
        n = 4 * n + 1
    elif r != 2 and (n - 1) % r:
        n = r * n + 1
    assert arith.p_part(n**ell - 1, r) == arith.lte_prediction(n, ell, r)


@given(st.integers(min_value=2, max_value=1000), st.lists(st.integers(min_value=1, max_value=40), min_size=1, max_size=5))
def test_gcd_powers(a, ns):
    assert math.gcd(*[a**k - 1 for k in ns]) == arith.gcd_powers_minus_one(a, ns)

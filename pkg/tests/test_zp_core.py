import math

import pytest
from hypothesis import given, strategies as st

from rholab.errors import PreconditionViolated
from rholab.zp_core import (
    PrimeModulus,
    ZpVector,
    canonical_product,
    is_prime_u64,
    next_prime,
    term_weight,
    weight_leq,
    weight_table,
    zp_vector,
)


def sieve_primes(limit):
    flags = bytearray([1]) * (limit + 1)
    flags[0:2] = b"\x00\x00"
    for i in range(2, int(limit**0.5) + 1):
        if flags[i]:
            flags[i * i :: i] = b"\x00" * len(flags[i * i :: i])
    return [i for i, f in enumerate(flags) if f]


def test_primality_against_sieve():
    primes = set(sieve_primes(5000))
    for n in range(5000):
        assert is_prime_u64(n) == (n in primes)


def test_next_prime_examples():
    assert next_prime(4).p == 5
    assert next_prime(7).p == 7  # prime fixed point
    # sieve oracle for 90 -> 97
    assert next_prime(90).p == min(q for q in sieve_primes(200) if q >= 90) == 97


def test_next_prime_rejects_small():
    with pytest.raises(PreconditionViolated):
        next_prime(3)


def test_prime_modulus_validation():
    with pytest.raises(PreconditionViolated):
        PrimeModulus(9)
    with pytest.raises(PreconditionViolated):
        PrimeModulus(3)  # structural requirement p > 3
    assert PrimeModulus(101).half_floor == 50


def test_canonical_product_examples():
    p = PrimeModulus(7)
    assert canonical_product(0, 4, p) == 0
    assert canonical_product(1, 4, p) == 4
    assert canonical_product(3, 4, p) == 5  # 12 mod 7


def test_term_weight_examples():
    assert term_weight(0, PrimeModulus(11)) == 0
    assert term_weight(1, PrimeModulus(5)) == 1
    assert term_weight(6, PrimeModulus(7)) == 1  # min(6, 1)^2


@given(st.integers(min_value=1, max_value=100))
def test_term_weight_symmetry(r):
    p = PrimeModulus(101)
    assert term_weight(r, p) == term_weight(101 - r, p)


@given(st.integers(min_value=0, max_value=100), st.integers(min_value=0, max_value=100))
def test_weight_of_product_bounded(k, x):
    p = PrimeModulus(101)
    assert term_weight(canonical_product(k, x, p), p) <= p.half_floor**2


def test_weight_leq_cross_multiplication():
    from fractions import Fraction

    p = PrimeModulus(5)
    # 2/25 <= 1/10 iff 20 <= 25
    assert weight_leq(2, Fraction(1, 10), p)
    assert not weight_leq(3, Fraction(1, 10), p)


def test_zp_vector_support_and_restrict():
    v = ZpVector((0, 3, 0, 2, 1))
    assert v.n == 5
    assert v.support == frozenset({1, 3, 4})
    assert v.support_size == 3
    assert v.restrict({1, 3}).entries == (3, 2)
    assert v.concat(v).n == 10
    with pytest.raises(PreconditionViolated):
        v.validate(PrimeModulus(2**31 - 1)) and ZpVector((5,)).validate(PrimeModulus(5))


def test_zp_vector_helper_canonicalises():
    p = PrimeModulus(7)
    assert zp_vector([-1, 9], p).entries == (6, 2)


def test_weight_table_matches_scalar():
    p = PrimeModulus(13)
    v = ZpVector((1, 5, 0, 12))
    table = weight_table(v, p)
    for k in range(13):
        expected = sum(term_weight(canonical_product(k, e, p), p) for e in v.entries)
        assert int(table[k]) == expected


# Scalar inequality scans backing the container-size argument.  The grid is
# x = 0, 1/1000, ..., 1.


def test_cos_exp_inequality_on_grid():
    for i in range(1001):
        x = i / 1000
        dist = min(x, 1 - x)
        assert abs(math.cos(math.pi * x)) <= math.exp(-(dist**2)) + 1e-15


def test_cos_quadratic_lower_bound_constant():
    # The 2^4 constant is too small: x = 0.1 is a counterexample.
    x = 0.1
    assert 1 - 16 * min(x, 1 - x) ** 2 > math.cos(2 * math.pi * x)
    # The sharp constant 2*pi^2 works on the whole grid.
    c = 2 * math.pi**2
    for i in range(1001):
        x = i / 1000
        dist = min(x, 1 - x)
        assert 1 - c * dist**2 <= math.cos(2 * math.pi * x) + 1e-12

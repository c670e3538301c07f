import math
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from rholab import anticoncentration as ac
from rholab.errors import PreconditionViolated, RangeTooLarge
from rholab.rng import substream
from rholab.zp_core import PrimeModulus, ZpVector

P5 = PrimeModulus(5)
P7 = PrimeModulus(7)
P101 = PrimeModulus(101)


def binom(n, k):
    return math.comb(n, k)


def test_distribution_empty_vector():
    d = ac.distribution_zp(ZpVector(()), P5)
    assert d.counts == {0: 1}
    assert d.log2_denominator == 0


def test_distribution_two_ones():
    d = ac.distribution_zp(ZpVector((1, 1)), P5)
    assert d.counts == {0: 2, 2: 1, 3: 1}  # -2 = 3 mod 5
    assert d.log2_denominator == 2


def test_distribution_matches_bruteforce():
    v = ZpVector((1, 2, 3))
    fast = ac.distribution_zp(v, P7)
    brute = ac.distribution_zp_bruteforce(v, P7)
    assert fast.counts == brute.counts


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(min_value=0, max_value=6), max_size=9))
def test_distribution_total_and_oracle(entries):
    v = ZpVector(tuple(entries))
    d = ac.distribution_zp(v, P7)
    assert d.total() == 2 ** len(entries)
    assert d.counts == ac.distribution_zp_bruteforce(v, P7).counts


def test_rho_zero_vector_is_one():
    r = ac.rho(ZpVector((0, 0, 0)), P5)
    assert r.value == 1 and r.atom == 0


def test_rho_pair():
    r = ac.rho(ZpVector((1, 1)), P101)
    assert r.value == Fraction(1, 2) and r.atom == 0


def test_rho_four_ones():
    r = ac.rho(ZpVector((1, 1, 1, 1)), P101)
    assert r.value == Fraction(6, 16) and r.atom == 0


def test_rho_dyadic_vector_attains_floor():
    # distinct subset sums: rho = 2^-n exactly
    v = ZpVector((1, 2, 4))
    assert ac.rho(v, PrimeModulus(17)).value == Fraction(1, 8)


@settings(max_examples=40, deadline=None)
@given(st.lists(st.integers(min_value=0, max_value=100), min_size=1, max_size=8))
def test_rho_bounds(entries):
    v = ZpVector(tuple(entries))
    r = ac.rho(v, P101).value
    assert Fraction(1, 2 ** len(entries)) <= r <= 1
    if any(entries):
        assert r < 1


def test_rho_int_single():
    assert ac.rho_int((1,)).value == Fraction(1, 2)


def test_rho_int_all_ones_binomial():
    r = ac.rho_int((1,) * 10)
    assert r.value == Fraction(binom(10, 5), 2**10)
    assert r.atom == 0


def test_rho_int_erdos_bound():
    for i in range(30):
        g = substream(11, "erdos", i)
        n = int(g.integers(1, 13))
        v = [int(x) for x in g.integers(1, 50, size=n)]
        assert ac.rho_int(v).value <= Fraction(binom(n, n // 2), 2**n)


def test_rho_int_guard():
    with pytest.raises(RangeTooLarge):
        ac.rho_int((10**7,))


def test_rho_half_zero_vector():
    assert ac.rho_half(ZpVector((0, 0)), P5).value == 1


def test_rho_half_single_step():
    r = ac.rho_half(ZpVector((1,)), P5)
    assert r.value == Fraction(1, 2) and r.atom == 0


def test_rho_half_equals_doubled_vector():
    for i in range(25):
        g = substream(12, "half", i)
        n = int(g.integers(1, 9))
        v = ZpVector(tuple(int(x) for x in g.integers(0, 7, size=n)))
        lazy = ac.rho_half(v, P7)
        doubled = ac.rho(v.concat(v), P7)
        assert lazy.value == doubled.value
        assert lazy.log2_denominator == 2 * n


def test_halasz_first_bound_zero_vector():
    assert ac.halasz_first_bound(ZpVector((0, 0, 0)), P5) == 1.0


def test_halasz_first_bound_single_entry():
    got = ac.halasz_first_bound(ZpVector((1,)), P5)
    want = (1 + 2 * math.exp(-1 / 25) + 2 * math.exp(-4 / 25)) / 5
    assert abs(got - want) < 1e-15


def test_halasz_first_bound_dominates_rho():
    for i in range(60):
        g = substream(13, "h1", i)
        n = int(g.integers(1, 12))
        v = ZpVector(tuple(int(x) for x in g.integers(0, 101, size=n)))
        assert float(ac.rho(v, P101).value) <= ac.halasz_first_bound(v, P101) + ac.FLOAT_SLACK


def test_halasz_second_bound_hand_expanded():
    v = ZpVector((1, 2))
    # T_1((1,2), 7) = Z_7: every weight sum is at most (9+9)/49 < 1
    want = 1 / 7 + math.e / 7 * math.exp(-1) * 7 + math.exp(-1)
    assert abs(ac.halasz_second_bound(v, 1, P7) - want) < 1e-15
    assert ac.halasz_second_bound(v, 1, P7) >= 1 / 7


def test_halasz_second_bound_rejects_zero():
    with pytest.raises(PreconditionViolated):
        ac.halasz_second_bound(ZpVector((0,)), 1, P7)


def test_halasz_bound_preconditions():
    v = ZpVector((1,) * 64)
    with pytest.raises(PreconditionViolated):
        ac.halasz_bound(v, 2, PrimeModulus(13))  # ell > |v|/64
    with pytest.raises(PreconditionViolated):
        ac.halasz_bound(v, Fraction(1, 2), PrimeModulus(13))  # ell < 1
    with pytest.raises(PreconditionViolated):
        ac.halasz_bound(ZpVector((0,) * 64), 1, PrimeModulus(13))


def test_halasz_bound_all_ones_64():
    p = PrimeModulus(13)
    v = ZpVector((1,) * 64)
    b = ac.halasz_bound(v, 1, p)
    assert b >= 3 / 13
    assert float(ac.rho(v, p).value) <= b + ac.FLOAT_SLACK


def test_sumset_level_check_trivial_and_example():
    p = PrimeModulus(11)
    v = ZpVector((1, 1))
    assert ac.sumset_level_check(v, 1, Fraction(1, 10), p)
    assert ac.sumset_level_check(v, 2, Fraction(1, 10), p)


def test_sumset_level_check_harness():
    for i in range(40):
        g = substream(14, "sumset", i)
        p = PrimeModulus([5, 7, 11, 13][int(g.integers(0, 4))])
        n = int(g.integers(1, 8))
        v = ZpVector(tuple(int(x) for x in g.integers(0, p.p, size=n)))
        m = int(g.integers(1, 5))
        t = Fraction(int(g.integers(0, 30)), 10)
        assert ac.sumset_level_check(v, m, t, p)


def test_cauchy_davenport_examples():
    assert ac.cauchy_davenport_check({0, 1}, 2, P5)  # |2A| = 3 = 2*2-1
    assert ac.cauchy_davenport_check(set(range(7)), 3, P7)  # m.A = Z_p


def test_cauchy_davenport_harness():
    for i in range(60):
        g = substream(15, "cd", i)
        p = PrimeModulus([5, 7, 11, 13, 17][int(g.integers(0, 5))])
        size = int(g.integers(1, p.p + 1))
        a = set(int(x) for x in g.choice(p.p, size=size, replace=False))
        m = int(g.integers(1, 4))
        assert ac.cauchy_davenport_check(a, m, p)


def test_cauchy_davenport_rejects_empty():
    with pytest.raises(PreconditionViolated):
        ac.cauchy_davenport_check(set(), 2, P5)

#!/usr/bin/env python3
"""Exact concentration probabilities of signed sums.

Walks through the exact law of u . v for uniform signs u: atom counts over
the implicit denominator 2^n, the largest atom rho(v), the lazy-walk variant,
and the integer-lattice case with the binomial benchmark.
"""

from fractions import Fraction

from rholab import (
    PrimeModulus,
    ZpVector,
    distribution_zp,
    rho,
    rho_half,
    rho_int,
)

print("=" * 72)
print("exact signed-sum distributions over Z_p")
print("=" * 72)

p = PrimeModulus(7)
v = ZpVector((1, 2, 3))
d = distribution_zp(v, p)
print(f"v = {v.entries} over Z_{p.p}")
print(f"atom counts (denominator 2^{d.log2_denominator}): {d.counts}")
r = rho(v, p)
print(f"rho(v) = {r.count}/2^{r.log2_denominator} = {float(r.value):.4f} at atom {r.atom}")
print()

# structure raises rho: compare a progression, a constant, and a dyadic vector
print("structure vs concentration, n = 8, p = 101:")
p101 = PrimeModulus(101)
for label, entries in [
    ("constant", (5,) * 8),
    ("progression {1..4}", (1, 2, 3, 4, 1, 2, 3, 4)),
    ("dyadic 1,2,4,...", (1, 2, 4, 8, 16, 32, 64, 27)),
]:
    val = rho(ZpVector(entries), p101).value
    print(f"  {label:22s} rho = {val} = {float(val):.5f}")
print("(the dyadic vector separates all 2^8 sums: rho hits the 2^-n floor)")
print()

print("lazy walk (step 0 w.p. 1/2): rho_half(v) equals rho(v (+) v)")
for entries in [(1, 1), (1, 2, 3), (2, 5, 5, 6)]:
    v = ZpVector(entries)
    lazy = rho_half(v, p)
    doubled = rho(v.concat(v), p)
    print(f"  v = {entries}: rho_half = {lazy.value}, rho(doubled) = {doubled.value}")
print()

print("integer lattice: all-ones vectors meet the central binomial value")
for n in (4, 10, 16):
    r = rho_int((1,) * n)
    from math import comb

    assert r.value == Fraction(comb(n, n // 2), 2**n)
    print(f"  n = {n:2d}: rho = {r.value} (= C(n, n/2) / 2^n)")

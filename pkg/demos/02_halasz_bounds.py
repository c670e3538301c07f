#!/usr/bin/env python3
"""The anticoncentration bound chain.

Three upper bounds on rho(v), all driven by exact level-set sizes:

  first:   (1/p) Sum_k exp(-W(k)/p^2)
  second:  1/p + (e/p) Sum_{t<=ceil(ell)} e^-t |T_t(v)| + e^-ell
  final:   3/p + 4 |T_ell(v)| / (p sqrt(ell)) + e^-ell,  1 <= ell <= |v|/64

The script compares them against exact rho for vectors of varying structure.
"""

from rholab import PrimeModulus, ZpVector, rho
from rholab.anticoncentration import (
    halasz_bound,
    halasz_first_bound,
    halasz_second_bound,
)
from rholab.rng import substream

p = PrimeModulus(101)
n = 128

vectors = {
    "constant": ZpVector((7,) * n),
    "two-valued": ZpVector((3, 97) * (n // 2)),
    "progression {1..8}": ZpVector(tuple((i % 8) + 1 for i in range(n))),
    "uniform random": ZpVector(
        tuple(int(x) for x in substream(0, "demo2", 0).integers(1, 101, size=n))
    ),
}

print(f"p = {p.p}, n = {n}; ell = 2 (valid range is 1 <= ell <= |v|/64)")
print(f"{'vector':22s} {'rho':>10s} {'first':>10s} {'second':>10s} {'final':>10s}")
for label, v in vectors.items():
    r = float(rho(v, p).value)
    b1 = halasz_first_bound(v, p)
    b2 = halasz_second_bound(v, 2, p)
    b3 = halasz_bound(v, 2, p)
    assert r <= b1 + 1e-12 and r <= b2 + 1e-12 and r <= b3 + 1e-12
    print(f"{label:22s} {r:10.5f} {b1:10.5f} {b2:10.5f} {b3:10.5f}")

print()
print("all bounds dominate exact rho; structured vectors sit closer to them")
print("(the final form is loose at desk scale: its 3/p + e^-ell floor is")
print("calibrated for ell ~ |v| / 2^16 >> 1, i.e. astronomically long vectors)")

"""Exact arithmetic over Z_p: prime moduli, residue vectors, integer weights.

The central quantity everywhere downstream is the distance-to-nearest-integer
weight ||r/p||^2 of a residue r.  To keep every comparison exact we never form
that rational: a single term is carried as the integer numerator

    term_weight(r, p) = min(r, p - r)^2        (denominator p^2 implicit),

and a sum of n terms is an integer over the same denominator.  A comparison
"sum <= t" against a rational threshold t = a/b is decided by cross
multiplication: N * b <= a * p^2.  Floating point enters only when a bound is
*evaluated* (exp/sqrt in the Halasz expressions), never when membership or an
inequality between exact quantities is decided.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .errors import PreconditionViolated

# Deterministic Miller-Rabin witness set, valid for all n < 3.3 * 10^24,
# which covers every 64-bit input.
_MR_WITNESSES = (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37)


def is_prime_u64(n: int) -> bool:
    """Deterministic primality test for 0 <= n < 2^64."""
    if n < 2:
        return False
    for small in (2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37):
        if n % small == 0:
            return n == small
    d = n - 1
    r = 0
    while d % 2 == 0:
        d //= 2
        r += 1
    for a in _MR_WITNESSES:
        x = pow(a, d, n)
        if x in (1, n - 1):
            continue
        for _ in range(r - 1):
            x = x * x % n
            if x == n - 1:
                break
        else:
            return False
    return True


def next_prime(x: int) -> "PrimeModulus":
    """Smallest prime >= x, as a PrimeModulus.

    Accepts 3 < x < 2^63 and raises OverflowError if the search would leave
    the 63-bit range (unreachable in practice: prime gaps are tiny).
    """
    if not 3 < x < 2**63:
        raise PreconditionViolated(f"need 3 < x < 2**63, got {x}")
    c = x
    while True:
        if c >= 2**63:
            raise OverflowError("no 63-bit prime at or above input")
        if is_prime_u64(c):
            return PrimeModulus(c)
        c += 1


@dataclass(frozen=True)
class PrimeModulus:
    """A prime p > 3 with residue/weight helpers."""

    p: int

    def __post_init__(self):
        if self.p <= 3:
            raise PreconditionViolated(f"modulus must exceed 3, got {self.p}")
        if not is_prime_u64(self.p):
            raise PreconditionViolated(f"{self.p} is not prime")

    def residue(self, x: int) -> int:
        """Canonical representative of x in {0, ..., p-1}."""
        return x % self.p

    def term_weight(self, r: int) -> int:
        return term_weight(r, self)

    @property
    def half_floor(self) -> int:
        return self.p // 2

    def __int__(self) -> int:
        return self.p


def canonical_product(k: int, x: int, p: PrimeModulus) -> int:
    """(k * x) mod p for canonical residues k, x.

    Products are always projected onto {0, ..., p-1} before a weight is
    taken; only the residue matters for || . ||.
    """
    if not (0 <= k < p.p and 0 <= x < p.p):
        raise PreconditionViolated("operands must be canonical residues")
    return k * x % p.p


def term_weight(r: int, p: PrimeModulus) -> int:
    """Numerator of ||r/p||^2 over the implicit denominator p^2.

    min(r, p-r)^2, an integer in [0, floor(p/2)^2].
    """
    if not 0 <= r < p.p:
        raise PreconditionViolated(f"residue {r} outside [0, {p.p - 1}]")
    return min(r, p.p - r) ** 2


def weight_leq(numerator: int, threshold: Fraction, p: PrimeModulus) -> bool:
    """Exact test  numerator / p^2 <= threshold  by cross multiplication."""
    t = Fraction(threshold)
    return numerator * t.denominator <= t.numerator * p.p * p.p


@dataclass(frozen=True)
class ZpVector:
    """A length-n vector of canonical residues with cached support.

    |v| (the support size) is the number of nonzero coordinates; it is the
    quantity written next to every level-set threshold downstream.
    """

    entries: tuple[int, ...]
    support: frozenset[int] = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        object.__setattr__(
            self, "support", frozenset(i for i, e in enumerate(self.entries) if e)
        )

    @property
    def n(self) -> int:
        return len(self.entries)

    @property
    def support_size(self) -> int:
        return len(self.support)

    def __len__(self) -> int:
        return len(self.entries)

    def validate(self, p: PrimeModulus) -> "ZpVector":
        for e in self.entries:
            if not 0 <= e < p.p:
                raise PreconditionViolated(f"entry {e} outside [0, {p.p - 1}]")
        return self

    def restrict(self, indices) -> "ZpVector":
        """Subvector on the given index set, in increasing index order."""
        return ZpVector(tuple(self.entries[i] for i in sorted(indices)))

    def concat(self, other: "ZpVector") -> "ZpVector":
        return ZpVector(self.entries + other.entries)

    def as_array(self) -> np.ndarray:
        return np.asarray(self.entries, dtype=np.int64)


def zp_vector(entries, p: PrimeModulus | None = None) -> ZpVector:
    """Build a ZpVector, canonicalising entries when a modulus is given."""
    if p is not None:
        return ZpVector(tuple(int(e) % p.p for e in entries))
    return ZpVector(tuple(int(e) for e in entries))


def weight_table(v: ZpVector, p: PrimeModulus) -> np.ndarray:
    """W[k] = sum_i min(k*v_i mod p, p - ...)^2 for every k in Z_p.

    Exact in int64: each term is at most (p/2)^2 and n * (p/2)^2 stays far
    below 2^63 for every feasible (n, p) here.
    """
    if len(v) == 0:
        return np.zeros(p.p, dtype=np.int64)
    arr = v.as_array()
    ks = np.arange(p.p, dtype=np.int64)
    r = ks[:, None] * arr[None, :] % p.p
    w = np.minimum(r, p.p - r)
    return (w * w).sum(axis=1)

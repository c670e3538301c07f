"""Random symmetric sign matrices: exact singularity, ranks over F_p, and
the algebraic identities behind the rank-reduction arguments.

Exactness contract: a matrix is declared singular over Z only when its
integer determinant is exactly zero.  The fast path computes ranks modulo
p1 = 2^31 - 1 in batched int64 elimination; for n <= 15 the Hadamard bound
n^{n/2} < p1 already makes that exact, and for larger n every matrix flagged
singular mod p1 is confirmed by an exact integer determinant (CRT over
word-size primes past the Hadamard bound, cross-checkable against
fraction-free elimination).  False nonsingulars are impossible, false
singulars are confirmed away, so Monte Carlo counts are exact counts.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from itertools import product as _iproduct

import numpy as np

from .anticoncentration import rho
from .errors import (
    DependentBasis,
    GuardExceeded,
    PreconditionViolated,
    SingularMatrix,
)
from .rng import substream
from .zp_core import PrimeModulus, ZpVector, is_prime_u64

_SCREEN_PRIME = 2**31 - 1  # Mersenne prime; elimination products fit int64
_DET_GUARD = 64
_EXACT_ENUM_GUARD = 6
_MATCH_GUARD = 4
_ODLYZKO_GUARD = 14
_DECOUPLE_SUPPORT_GUARD = 16
_Q_ENUM_GUARD = 10**8

WILSON_Z = 1.959963984540054  # two-sided 95%


@dataclass(frozen=True)
class SymMatrix:
    """Symmetric n x n sign matrix, packed as the row-major upper triangle."""

    n: int
    upper: tuple[int, ...]

    def __post_init__(self):
        if len(self.upper) != self.n * (self.n + 1) // 2:
            raise PreconditionViolated("packed length must be n(n+1)/2")
        if any(e not in (-1, 1) for e in self.upper):
            raise PreconditionViolated("entries must be +-1")

    def to_array(self) -> np.ndarray:
        m = np.zeros((self.n, self.n), dtype=np.int64)
        iu = np.triu_indices(self.n)
        m[iu] = self.upper
        m = m + m.T
        m[np.arange(self.n), np.arange(self.n)] //= 2
        return m

    def entry(self, i: int, j: int) -> int:
        if i > j:
            i, j = j, i
        # offset of row i in the packed upper triangle
        off = i * self.n - i * (i - 1) // 2
        return self.upper[off + (j - i)]


def sample_symmetric(n: int, rng: np.random.Generator) -> SymMatrix:
    if n < 1:
        raise PreconditionViolated("n must be >= 1")
    bits = rng.integers(0, 2, size=n * (n + 1) // 2, dtype=np.int64) * 2 - 1
    return SymMatrix(n, tuple(int(b) for b in bits))


# ---------------------------------------------------------------------------
# Exact determinants: Bareiss (big-int) and CRT (residues past Hadamard).
# ---------------------------------------------------------------------------


def det_bareiss(mat) -> int:
    """Fraction-free elimination; exact integer determinant."""
    a = [[int(x) for x in row] for row in np.asarray(mat)]
    n = len(a)
    sign = 1
    prev = 1
    for k in range(n - 1):
        if a[k][k] == 0:
            for r in range(k + 1, n):
                if a[r][k] != 0:
                    a[k], a[r] = a[r], a[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                a[i][j] = (a[i][j] * a[k][k] - a[i][k] * a[k][j]) // prev
        prev = a[k][k]
    return sign * a[n - 1][n - 1]


def _det_mod(mat, p: int) -> int:
    a = [[int(x) % p for x in row] for row in np.asarray(mat)]
    n = len(a)
    det = 1
    for k in range(n):
        piv = None
        for r in range(k, n):
            if a[r][k]:
                piv = r
                break
        if piv is None:
            return 0
        if piv != k:
            a[k], a[piv] = a[piv], a[k]
            det = -det % p
        det = det * a[k][k] % p
        inv = pow(a[k][k], p - 2, p)
        for i in range(k + 1, n):
            if a[i][k]:
                f = a[i][k] * inv % p
                a[i] = [(x - f * y) % p for x, y in zip(a[i], a[k])]
    return det % p


def _crt_primes(n: int) -> list[int]:
    """Descending word-size primes whose product exceeds 2 * n^{n/2}."""
    bound = 2 * int(math.isqrt(n**n)) + 2  # >= 2 n^{n/2}
    primes: list[int] = []
    prod = 1
    c = _SCREEN_PRIME
    while prod <= bound:
        while not is_prime_u64(c):
            c -= 2
        primes.append(c)
        prod *= c
        c -= 2
    return primes


def det_exact(mat) -> int:
    """Exact integer determinant via CRT residues with symmetric lift.

    Valid for +-1 matrices of dimension <= 64: the Hadamard bound n^{n/2}
    caps |det|, and the prime set's product exceeds twice that.
    """
    arr = np.asarray(mat)
    n = arr.shape[0]
    if n > _DET_GUARD:
        raise GuardExceeded(f"det_exact guard is n <= {_DET_GUARD}")
    if n == 0:
        return 1
    primes = _crt_primes(n)
    x = 0
    mod = 1
    for p in primes:
        r = _det_mod(arr, p)
        # incremental CRT
        t = (r - x) * pow(mod % p, p - 2, p) % p
        x = x + mod * t
        mod *= p
    if x > mod // 2:
        x -= mod
    return x


def rank_mod_p(mat, p: PrimeModulus | int) -> int:
    """Row-echelon rank over F_p by elimination with division."""
    pp = int(p)
    a = [[int(x) % pp for x in row] for row in np.asarray(mat)]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    rank = 0
    for c in range(cols):
        piv = None
        for r in range(rank, rows):
            if a[r][c]:
                piv = r
                break
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        inv = pow(a[rank][c], pp - 2, pp)
        a[rank] = [x * inv % pp for x in a[rank]]
        for r in range(rows):
            if r != rank and a[r][c]:
                f = a[r][c]
                a[r] = [(x - f * y) % pp for x, y in zip(a[r], a[rank])]
        rank += 1
        if rank == rows:
            break
    return rank


def rref_mod_p(mat, p: PrimeModulus | int) -> tuple[list[list[int]], list[int]]:
    """Reduced row-echelon form and pivot columns (independent oracle path)."""
    pp = int(p)
    a = [[int(x) % pp for x in row] for row in np.asarray(mat)]
    rows = len(a)
    cols = len(a[0]) if rows else 0
    pivots: list[int] = []
    r = 0
    for c in range(cols):
        piv = next((i for i in range(r, rows) if a[i][c]), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = pow(a[r][c], pp - 2, pp)
        a[r] = [x * inv % pp for x in a[r]]
        for i in range(rows):
            if i != r and a[i][c]:
                f = a[i][c]
                a[i] = [(x - f * y) % pp for x, y in zip(a[i], a[r])]
        pivots.append(c)
        r += 1
        if r == rows:
            break
    return a, pivots


# ---------------------------------------------------------------------------
# Batched kernels (int64, division-free) for Monte Carlo work.
# ---------------------------------------------------------------------------


def _bits_to_sym(bits: np.ndarray, n: int) -> np.ndarray:
    """[B, n(n+1)/2] in {0,1} -> [B, n, n] symmetric +-1 matrices."""
    b = bits.shape[0]
    iu = np.triu_indices(n)
    a = np.zeros((b, n, n), dtype=np.int64)
    a[:, iu[0], iu[1]] = bits * 2 - 1
    at = np.transpose(a, (0, 2, 1)).copy()
    a = a + at
    a[:, np.arange(n), np.arange(n)] //= 2
    return a


def batch_rank_mod_p(mats: np.ndarray, p: int) -> np.ndarray:
    """Ranks over F_p for a batch of square matrices, division-free.

    Row updates use a_pp * row - a_rp * pivot_row, which preserves rank as
    long as a_pp != 0 mod p; products stay below 2^63 for p < 2^31.5.
    """
    a = np.ascontiguousarray(np.asarray(mats, dtype=np.int64) % p)
    b, n, _ = a.shape
    rank = np.zeros(b, dtype=np.int64)
    row = np.zeros(b, dtype=np.int64)
    bidx = np.arange(b)
    idx = np.arange(n)[None, :]
    for col in range(n):
        nz = a[:, :, col] != 0
        cand = nz & (idx >= row[:, None])
        has = cand.any(axis=1)
        piv = np.where(has, cand.argmax(axis=1), 0)
        r0 = row
        rows_a = a[bidx, r0, :].copy()
        rows_p = a[bidx, piv, :].copy()
        a[bidx[has], r0[has], :] = rows_p[has]
        a[bidx[has], piv[has], :] = rows_a[has]
        app = a[bidx, r0, col]
        below = idx > r0[:, None]
        fac = a[:, :, col]
        em = below & has[:, None] & (fac != 0)
        pivot_rows = a[bidx, r0, :]
        upd = (app[:, None, None] * a - fac[:, :, None] * pivot_rows[:, None, :]) % p
        a = np.where(em[:, :, None], upd, a)
        row = row + has
        rank = rank + has
    return rank


# ---------------------------------------------------------------------------
# Singularity: exhaustive at tiny n, Monte Carlo with exact confirmation.
# ---------------------------------------------------------------------------


def singularity_exact(n: int) -> Fraction:
    """Exact Pr(det M_n = 0) by enumerating all 2^{n(n+1)/2} sign matrices."""
    if not 1 <= n <= _EXACT_ENUM_GUARD:
        raise GuardExceeded(f"exhaustive enumeration guard is n <= {_EXACT_ENUM_GUARD}")
    m = n * (n + 1) // 2
    total = 1 << m
    singular = 0
    chunk = 1 << 16
    # single residue is exact here: n <= 6 gives |det| <= 6^3 < screen prime
    for start in range(0, total, chunk):
        idx = np.arange(start, min(start + chunk, total), dtype=np.int64)
        bits = (idx[:, None] >> np.arange(m)[None, :]) & 1
        mats = _bits_to_sym(bits, n)
        ranks = batch_rank_mod_p(mats, _SCREEN_PRIME)
        singular += int((ranks < n).sum())
    return Fraction(singular, total)


def wilson_interval(successes: int, trials: int, z: float = WILSON_Z) -> tuple[float, float]:
    if trials <= 0:
        raise PreconditionViolated("trials must be positive")
    phat = successes / trials
    denom = 1.0 + z * z / trials
    center = (phat + z * z / (2 * trials)) / denom
    half = z * math.sqrt(phat * (1 - phat) / trials + z * z / (4 * trials * trials)) / denom
    return (max(0.0, center - half), min(1.0, center + half))


@dataclass(frozen=True)
class SingularityEstimate:
    n: int
    trials: int
    singular_count: int
    point_estimate: float
    wilson95: tuple[float, float]
    conjecture_value: float          # n^2 2^{1-n}
    context_bound_shape: float       # exp(-c sqrt(n)) with c = 2^-15, context only
    seed_label: str


def singular_count_block(n: int, bits: np.ndarray) -> int:
    """Exact count of singular matrices among the packed-bit batch."""
    mats = _bits_to_sym(bits, n)
    ranks = batch_rank_mod_p(mats, _SCREEN_PRIME)
    flagged = np.flatnonzero(ranks < n)
    if n <= 15:
        # Hadamard bound below the screening prime: mod-p1 zero is exact zero
        return int(flagged.size)
    return sum(1 for i in flagged if det_bareiss(mats[int(i)]) == 0)


def singularity_mc(
    n: int,
    trials: int,
    rng: np.random.Generator,
    seed_label: str = "",
    block: int = 20000,
) -> SingularityEstimate:
    """Monte Carlo singularity estimate with exact per-trial decisions."""
    if n > _DET_GUARD:
        raise GuardExceeded(f"guard is n <= {_DET_GUARD}")
    if trials <= 0:
        raise PreconditionViolated("trials must be positive")
    m = n * (n + 1) // 2
    singular = 0
    done = 0
    while done < trials:
        b = min(block, trials - done)
        bits = rng.integers(0, 2, size=(b, m), dtype=np.int64)
        singular += singular_count_block(n, bits)
        done += b
    return SingularityEstimate(
        n=n,
        trials=trials,
        singular_count=singular,
        point_estimate=singular / trials,
        wilson95=wilson_interval(singular, trials),
        conjecture_value=n * n * 2.0 ** (1 - n),
        context_bound_shape=math.exp(-(2.0**-15) * math.sqrt(n)),
        seed_label=seed_label,
    )


def _mc_block_task(args) -> int:
    n, master_seed, label, block_idx, block_size = args
    g = substream(master_seed, label, block_idx)
    bits = g.integers(0, 2, size=(block_size, n * (n + 1) // 2), dtype=np.int64)
    return singular_count_block(n, bits)


def singularity_mc_sharded(
    n: int,
    trials: int,
    master_seed: int,
    workers: int = 1,
    block: int = 20000,
    label: str = "singularity-mc",
) -> SingularityEstimate:
    """Monte Carlo estimate sharded into counter-keyed trial blocks.

    Block i always draws from substream (seed, label:n, i), so the result is
    byte-identical for every worker count; workers only change scheduling.
    """
    if n > _DET_GUARD:
        raise GuardExceeded(f"guard is n <= {_DET_GUARD}")
    if trials <= 0:
        raise PreconditionViolated("trials must be positive")
    stream_label = f"{label}:n={n}"
    tasks = []
    done = 0
    i = 0
    while done < trials:
        b = min(block, trials - done)
        tasks.append((n, master_seed, stream_label, i, b))
        done += b
        i += 1
    if workers <= 1:
        counts = [_mc_block_task(t) for t in tasks]
    else:
        import multiprocessing

        with multiprocessing.Pool(workers) as pool:
            counts = pool.map(_mc_block_task, tasks)
    singular = int(sum(counts))
    return SingularityEstimate(
        n=n,
        trials=trials,
        singular_count=singular,
        point_estimate=singular / trials,
        wilson95=wilson_interval(singular, trials),
        conjecture_value=n * n * 2.0 ** (1 - n),
        context_bound_shape=math.exp(-(2.0**-15) * math.sqrt(n)),
        seed_label=stream_label,
    )


# ---------------------------------------------------------------------------
# Exhaustive probability checks at tiny n.
# ---------------------------------------------------------------------------


def _enumerate_sym(n: int):
    m = n * (n + 1) // 2
    for idx in range(1 << m):
        bits = np.array([(idx >> j) & 1 for j in range(m)], dtype=np.int64)
        yield _bits_to_sym(bits[None, :], n)[0]


def match_probability_exact(v: ZpVector, w: ZpVector, p: PrimeModulus) -> Fraction:
    """Exact Pr(M_n v = w over F_p) by enumerating all symmetric sign matrices."""
    n = len(v)
    if n > _MATCH_GUARD:
        raise GuardExceeded(f"enumeration guard is n <= {_MATCH_GUARD}")
    if len(w) != n:
        raise PreconditionViolated("v and w must have equal length")
    va = v.as_array()
    wa = w.as_array()
    hits = 0
    total = 0
    for mat in _enumerate_sym(n):
        total += 1
        if ((mat @ va - wa) % p.p == 0).all():
            hits += 1
    return Fraction(hits, total)


@dataclass(frozen=True)
class BlockProbabilityResult:
    probability: Fraction
    bound: Fraction   # rho(v_Y)^{|X|}
    holds: bool


def block_probability_exact(
    v: ZpVector, w: ZpVector, x_rows, y_cols, p: PrimeModulus
) -> BlockProbabilityResult:
    """Exact Pr(M_{X x [n]} v = w_X) against the row-block bound rho(v_Y)^|X|.

    X and Y must be disjoint; the bound relies on the X x Y block of a
    symmetric matrix being made of |X| * |Y| independent entries.
    """
    n = len(v)
    if n > _MATCH_GUARD:
        raise GuardExceeded(f"enumeration guard is n <= {_MATCH_GUARD}")
    xs = sorted(set(int(i) for i in x_rows))
    ys = sorted(set(int(i) for i in y_cols))
    if set(xs) & set(ys):
        raise PreconditionViolated("X and Y must be disjoint")
    if any(not 0 <= i < n for i in xs + ys):
        raise PreconditionViolated("index out of range")
    va = v.as_array()
    wa = w.as_array()
    hits = 0
    total = 0
    for mat in _enumerate_sym(n):
        total += 1
        if all(int((mat[i] @ va - wa[i]) % p.p) == 0 for i in xs):
            hits += 1
    prob = Fraction(hits, total)
    bound = rho(v.restrict(ys), p).value ** len(xs)
    return BlockProbabilityResult(prob, bound, prob <= bound)


def odlyzko_check(basis, n: int, p: PrimeModulus) -> tuple[int, bool]:
    """Count sign vectors inside span(basis) over F_p; at most 2^|basis|.

    The basis must be independent (DependentBasis otherwise).  Membership is
    decided by reducing every x in {-1,1}^n against the basis RREF.
    """
    if n > _ODLYZKO_GUARD:
        raise GuardExceeded(f"guard is n <= {_ODLYZKO_GUARD}")
    rows = [list(b.entries) if isinstance(b, ZpVector) else [int(e) % p.p for e in b] for b in basis]
    k = len(rows)
    if k == 0:
        return 0, True
    rref, pivots = rref_mod_p(rows, p)
    if len(pivots) < k:
        raise DependentBasis("claimed basis is dependent over F_p")
    # reduce all sign vectors at once
    signs = ((np.arange(1 << n, dtype=np.int64)[:, None] >> np.arange(n)[None, :]) & 1) * 2 - 1
    x = signs % p.p
    r = np.array(rref[:k], dtype=np.int64)
    for row_i, col in enumerate(pivots):
        coef = x[:, col].copy()
        x = (x - coef[:, None] * r[row_i][None, :]) % p.p
    count = int((x == 0).all(axis=1).sum())
    return count, count <= (1 << k)


# ---------------------------------------------------------------------------
# Adjugate and decoupling identities.
# ---------------------------------------------------------------------------


def adjugate_mod_p(mat, p: PrimeModulus) -> list[list[int]]:
    """Transpose cofactor matrix over F_p, by minor determinants."""
    a = np.asarray(mat, dtype=np.int64) % p.p
    d = a.shape[0]
    adj = [[0] * d for _ in range(d)]
    for i in range(d):
        for j in range(d):
            minor = np.delete(np.delete(a, j, axis=0), i, axis=1)
            cof = _det_mod(minor, p.p) if d > 1 else 1
            adj[i][j] = (-1) ** (i + j) * cof % p.p
    return adj


@dataclass(frozen=True)
class AdjugateReport:
    checks: dict[str, bool]
    nontrivial_column: int
    scale: int

    @property
    def ok(self) -> bool:
        return all(self.checks.values())


def adjugate_rank1_check(mat, p: PrimeModulus) -> AdjugateReport:
    """For a symmetric corank-1 matrix: adj has rank 1 and factors as
    lambda * a a^T with a a kernel column.

    The input plays the role of the (n-1)-dimensional principal minor of an
    n-dimensional matrix of corank 2 ("rank n-2"); its own rank must be
    dim - 1 (PreconditionViolated otherwise).
    """
    a = np.asarray(mat, dtype=np.int64) % p.p
    d = a.shape[0]
    if not (a == a.T).all():
        raise PreconditionViolated("matrix must be symmetric")
    if rank_mod_p(a, p) != d - 1:
        raise PreconditionViolated("matrix rank must be dimension - 1")
    adj = adjugate_mod_p(a, p)
    adj_arr = np.array(adj, dtype=np.int64)
    checks: dict[str, bool] = {}
    checks["m_adj_zero"] = bool((a @ adj_arr % p.p == 0).all())
    checks["adj_rank_one"] = rank_mod_p(adj_arr, p) == 1
    col = next((j for j in range(d) if any(adj_arr[i][j] for i in range(d))), -1)
    checks["nontrivial_column_exists"] = col >= 0
    lam = 0
    factor_ok = False
    kernel_ok = False
    if col >= 0:
        avec = adj_arr[:, col] % p.p
        kernel_ok = bool((a @ avec % p.p == 0).all())
        # c_ij = lam a_i a_j; with a = column `col`, lam = inv(a_col)
        lam = pow(int(avec[col]), p.p - 2, p.p)
        factor_ok = all(
            int(adj_arr[i][j]) == lam * int(avec[i]) * int(avec[j]) % p.p
            for i in range(d)
            for j in range(d)
        )
    checks["kernel_column"] = kernel_ok
    checks["rank_one_factorization"] = factor_ok
    return AdjugateReport(checks, col, lam)


def inverse_mod_p(mat, p: PrimeModulus) -> np.ndarray:
    a = [[int(x) % p.p for x in row] for row in np.asarray(mat)]
    d = len(a)
    aug = [row + [int(i == j) for j in range(d)] for i, row in enumerate(a)]
    r = 0
    for c in range(d):
        piv = next((i for i in range(r, d) if aug[i][c]), None)
        if piv is None:
            raise SingularMatrix("matrix not invertible over F_p")
        aug[r], aug[piv] = aug[piv], aug[r]
        inv = pow(aug[r][c], p.p - 2, p.p)
        aug[r] = [x * inv % p.p for x in aug[r]]
        for i in range(d):
            if i != r and aug[i][c]:
                f = aug[i][c]
                aug[i] = [(x - f * y) % p.p for x, y in zip(aug[i], aug[r])]
        r += 1
    return np.array([row[d:] for row in aug], dtype=np.int64)


def decoupling_identity_check(
    mat, u, u_prime, i_set, j_set, p: PrimeModulus
) -> bool:
    """Verify the hybrid quadratic-form identity

        f(X,Y) - f(X',Y) - f(X,Y') + f(X',Y') = 2 z_I . w_I   (mod p)

    for f(X,Y) = h^T M^{-1} h with h the (I from u / J from u') hybrid,
    w = u - u', z = M^{-1} w*_J.  Must hold for every invertible symmetric M
    and every partition I, J.
    """
    a = inverse_mod_p(mat, p)
    d = a.shape[0]
    i_set = sorted(set(int(i) for i in i_set))
    j_set = sorted(set(int(j) for j in j_set))
    if set(i_set) & set(j_set) or set(i_set) | set(j_set) != set(range(d)):
        raise PreconditionViolated("I, J must partition the index set")
    uu = np.asarray(u, dtype=np.int64)
    vv = np.asarray(u_prime, dtype=np.int64)

    def hybrid(x_from, y_from):
        h = np.zeros(d, dtype=np.int64)
        for i in i_set:
            h[i] = x_from[i]
        for j in j_set:
            h[j] = y_from[j]
        return h % p.p

    def f(h):
        return int(h @ a @ h % p.p)

    lhs = (
        f(hybrid(uu, uu)) - f(hybrid(vv, uu)) - f(hybrid(uu, vv)) + f(hybrid(vv, vv))
    ) % p.p
    w = (uu - vv) % p.p
    w_star_j = np.zeros(d, dtype=np.int64)
    for j in j_set:
        w_star_j[j] = w[j]
    z = a @ w_star_j % p.p
    rhs = 2 * sum(int(z[i]) * int(w[i]) for i in i_set) % p.p
    return lhs == rhs


def decoupling_probability_check(px: dict, py: dict, event) -> bool:
    """Verify Pr(E)^4 <= Pr(E(X,Y) & E(X',Y) & E(X,Y') & E(X',Y')) exactly.

    px, py: value -> Fraction probability (independent X, Y with finite
    supports); event: predicate on (x, y).  Enumeration over the four
    independent copies, all arithmetic in Fractions.
    """
    if len(px) > _DECOUPLE_SUPPORT_GUARD or len(py) > _DECOUPLE_SUPPORT_GUARD:
        raise GuardExceeded("support guard exceeded")
    for d in (px, py):
        if sum(d.values()) != 1:
            raise PreconditionViolated("probabilities must sum to 1")
    pr_e = sum(
        pxv * pyv for x, pxv in px.items() for y, pyv in py.items() if event(x, y)
    )
    pr_four = Fraction(0)
    for x, pxv in px.items():
        for x2, pxv2 in px.items():
            for y, pyv in py.items():
                if not (event(x, y) and event(x2, y)):
                    continue
                for y2, pyv2 in py.items():
                    if event(x, y2) and event(x2, y2):
                        pr_four += pxv * pxv2 * pyv * pyv2
    return pr_e**4 <= pr_four


# ---------------------------------------------------------------------------
# Exhaustive q_n(beta) at tiny sizes.
# ---------------------------------------------------------------------------


def _structured_vectors(n: int, p: PrimeModulus, beta: Fraction) -> list[np.ndarray]:
    out = []
    for tup in _iproduct(range(p.p), repeat=n):
        if not any(tup):
            continue
        if rho(ZpVector(tup), p).value >= beta:
            out.append(np.array(tup, dtype=np.int64))
    return out


def q_exact(
    n: int, p: PrimeModulus, beta, w, strict: bool = True
) -> Fraction:
    """Exact Pr(exists v != 0 : M_n v = w and rho(v) >= beta), enumerated.

    strict mode enforces the beta >= 4/p floor below which "structured" loses
    meaning (4x the uniform atom); pass strict=False to probe smaller beta.
    """
    beta = Fraction(beta)
    if strict and beta < Fraction(4, p.p):
        raise PreconditionViolated(f"strict mode needs beta >= 4/p = 4/{p.p}")
    m = n * (n + 1) // 2
    if p.p**n * (1 << m) > _Q_ENUM_GUARD:
        raise GuardExceeded("joint enumeration beyond guard")
    wa = np.asarray(tuple(w), dtype=np.int64)
    if wa.shape != (n,):
        raise PreconditionViolated("w must have length n")
    vs = _structured_vectors(n, p, beta)
    hits = 0
    total = 0
    for mat in _enumerate_sym(n):
        total += 1
        if any(((mat @ v - wa) % p.p == 0).all() for v in vs):
            hits += 1
    return Fraction(hits, total)


def q_exact_max(
    n: int, p: PrimeModulus, beta, strict: bool = True
) -> tuple[Fraction, tuple[int, ...]]:
    """Max of q over all w in Z_p^n, with the lexicographically-first argmax."""
    beta = Fraction(beta)
    if strict and beta < Fraction(4, p.p):
        raise PreconditionViolated(f"strict mode needs beta >= 4/p = 4/{p.p}")
    m = n * (n + 1) // 2
    if p.p ** (2 * n) * (1 << m) > _Q_ENUM_GUARD:
        raise GuardExceeded("outer enumeration beyond guard")
    vs = _structured_vectors(n, p, beta)
    mats = list(_enumerate_sym(n))
    best = (Fraction(-1), None)
    for w in _iproduct(range(p.p), repeat=n):
        wa = np.asarray(w, dtype=np.int64)
        hits = sum(
            1
            for mat in mats
            if any(((mat @ v - wa) % p.p == 0).all() for v in vs)
        )
        f = Fraction(hits, len(mats))
        if f > best[0]:
            best = (f, tuple(w))
    return best


# ---------------------------------------------------------------------------
# Rank profiles under one-step minor removal.
# ---------------------------------------------------------------------------


def rank_profile_mc(n: int, trials: int, p: PrimeModulus, rng: np.random.Generator) -> dict:
    """Joint frequencies of (rk(M_n), rk(M_{n-1})) over F_p plus a rank-growth scan.

    M_{n-1} removes the first row and column.  Marginals for every dimension
    m <= n come from trailing principal blocks of the same samples (each is a
    uniform symmetric matrix in law).  The scan flags, beyond 4 sigma, any
    violation of  Pr(rk(M_m) = k) <= 2 Pr(rk(M_{2m-k-1}) = 2m-k-2)  for
    instances with both dimensions estimated (2m-k-1 <= n).
    """
    if n > _DET_GUARD:
        raise GuardExceeded(f"guard is n <= {_DET_GUARD}")
    if trials <= 0:
        raise PreconditionViolated("trials must be positive")
    m_pack = n * (n + 1) // 2
    joint: dict[tuple[int, int], int] = {}
    marg: dict[int, np.ndarray] = {m: np.zeros(m + 1, dtype=np.int64) for m in range(1, n + 1)}
    block = 20000
    done = 0
    while done < trials:
        b = min(block, trials - done)
        bits = rng.integers(0, 2, size=(b, m_pack), dtype=np.int64)
        mats = _bits_to_sym(bits, n)
        ranks_by_dim: dict[int, np.ndarray] = {}
        for m in range(1, n + 1):
            sub = mats[:, n - m :, n - m :]
            ranks_by_dim[m] = batch_rank_mod_p(sub, p.p)
            counts = np.bincount(ranks_by_dim[m], minlength=m + 1)
            marg[m] += counts.astype(np.int64)
        rn = ranks_by_dim[n]
        rn1 = ranks_by_dim[n - 1] if n >= 2 else ranks_by_dim[n]
        for a, c in zip(rn.tolist(), rn1.tolist()):
            joint[(a, c)] = joint.get((a, c), 0) + 1
        done += b
    flags = []
    for m in range(2, n + 1):
        for k in range(0, m):
            m2 = 2 * m - k - 1
            if m2 > n:
                continue
            lhs = marg[m][k] / trials
            rhs = marg[m2][m2 - 1] / trials
            s1 = math.sqrt(max(lhs * (1 - lhs), 1e-12) / trials)
            s2 = math.sqrt(max(rhs * (1 - rhs), 1e-12) / trials)
            if lhs > 2 * rhs + 4 * math.sqrt(s1 * s1 + 4 * s2 * s2):
                flags.append({"m": m, "k": k, "lhs": lhs, "rhs": rhs})
    return {
        "n": n,
        "p": p.p,
        "trials": trials,
        "joint": {f"{a},{c}": cnt for (a, c), cnt in sorted(joint.items())},
        "marginals": {m: marg[m].tolist() for m in sorted(marg)},
        "violations": flags,
    }

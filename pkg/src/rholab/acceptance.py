"""Acceptance checks, callable from both pytest and the verify-all command.

Each check_* function draws its instances from counter-keyed substreams of a
master seed, performs the stated number of cases, and returns a dict

    {"name": ..., "ok": bool, "cases": int, "violations": int, ...}

so the harness can render one pass/fail line per criterion and serialize the
whole suite as a canonical artifact.  Every inequality between exact
quantities is exact; float-valued bounds get the fixed 1e-12 slack.
"""

from __future__ import annotations

import math
from fractions import Fraction

from . import anticoncentration as ac
from . import matrix_lab as ml
from .containers import container, gen_gap_vector, lemma_contain_check, level_set
from .errors import PreconditionViolated, RetryExhausted
from .fibres import audit_trace, run_fibre, trace_fingerprint
from .inverse_lo import DESK_PROFILE, build_container, verify_certificate
from .rng import substream
from .zp_core import PrimeModulus, ZpVector

SMALL_PRIMES = [5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53, 59, 61, 67, 71, 73, 79, 83, 89, 97, 101]


def _prime(rng) -> PrimeModulus:
    return PrimeModulus(SMALL_PRIMES[int(rng.integers(0, len(SMALL_PRIMES)))])


def _random_vector(rng, n: int, p: PrimeModulus) -> ZpVector:
    return ZpVector(tuple(int(x) for x in rng.integers(0, p.p, size=n)))


def check_rho_oracle(seed: int, cases: int = 500) -> dict:
    """Criterion 1: convolution law == brute-force enumeration, atom for atom."""
    bad = 0
    for i in range(cases):
        g = substream(seed, "c1-rho-oracle", i)
        p = _prime(g)
        n = int(g.integers(0, 13))
        v = _random_vector(g, n, p)
        fast = ac.distribution_zp(v, p)
        brute = ac.distribution_zp_bruteforce(v, p)
        if fast.counts != brute.counts or fast.log2_denominator != brute.log2_denominator:
            bad += 1
    return {"name": "rho_oracle_equivalence", "ok": bad == 0, "cases": cases, "violations": bad}


def check_deterministic_lemmas(
    seed: int,
    container_cases: int = 200,
    contain_cases: int = 200,
    sumset_cases: int = 100,
    cd_cases: int = 100,
) -> dict:
    """Criterion 2: the four deterministic lemmas at paper constants."""
    bad = {"container_size": 0, "containment": 0, "sumset": 0, "cauchy_davenport": 0}
    for i in range(container_cases):
        g = substream(seed, "c2-container-size", i)
        p = _prime(g)
        size = int(g.integers(1, p.p))
        s = frozenset(int(x) for x in g.choice(p.p, size=size, replace=False))
        c = container(s, p)
        if c.size * len(s) > 4 * p.p:
            bad["container_size"] += 1
    for i in range(contain_cases):
        g = substream(seed, "c2-containment", i)
        p = _prime(g)
        n = int(g.integers(130, 400))
        v = _random_vector(g, n, p)
        t = Fraction(int(g.integers(0, n + 1)), 128)  # 0 <= t <= n/128
        members = sorted(level_set(v, t, p).members)
        keep = g.random(len(members)) < 0.6
        s = frozenset(m for m, k in zip(members, keep) if k)
        count, holds = lemma_contain_check(v, s, t, p)
        if not holds:
            bad["containment"] += 1
    for i in range(sumset_cases):
        g = substream(seed, "c2-sumset", i)
        p = _prime(g)
        n = int(g.integers(1, 10))
        v = _random_vector(g, n, p)
        m = int(g.integers(1, 5))
        t = Fraction(int(g.integers(0, 40)), 10)
        if not ac.sumset_level_check(v, m, t, p):
            bad["sumset"] += 1
    for i in range(cd_cases):
        g = substream(seed, "c2-cauchy-davenport", i)
        p = _prime(g)
        size = int(g.integers(1, p.p + 1))
        a = set(int(x) for x in g.choice(p.p, size=size, replace=False))
        m = int(g.integers(1, 4))
        if not ac.cauchy_davenport_check(a, m, p):
            bad["cauchy_davenport"] += 1
    total_bad = sum(bad.values())
    return {
        "name": "deterministic_lemmas",
        "ok": total_bad == 0,
        "cases": container_cases + contain_cases + sumset_cases + cd_cases,
        "violations": total_bad,
        "by_lemma": bad,
    }


def check_halasz_chain(seed: int, cases: int = 200) -> dict:
    """Criterion 3: rho(v) below each Halasz-form bound, every integer ell."""
    bad = 0
    checked = 0
    for i in range(cases):
        g = substream(seed, "c3-halasz", i)
        p = _prime(g)
        n = int(g.integers(66, 141))
        # guarantee |v| >= 64: first 64 entries nonzero
        head = g.integers(1, p.p, size=64)
        tail = g.integers(0, p.p, size=n - 64)
        v = ZpVector(tuple(int(x) for x in head) + tuple(int(x) for x in tail))
        r = float(ac.rho(v, p).value)
        if r > ac.halasz_first_bound(v, p) + ac.FLOAT_SLACK:
            bad += 1
        for ell in range(1, v.support_size // 64 + 1):
            checked += 1
            if r > ac.halasz_second_bound(v, ell, p) + ac.FLOAT_SLACK:
                bad += 1
            if r > ac.halasz_bound(v, ell, p) + ac.FLOAT_SLACK:
                bad += 1
    return {"name": "halasz_chain", "ok": bad == 0, "cases": cases, "ell_checks": checked, "violations": bad}


def check_container_construction(seed: int, cases: int = 100, n: int = 512, p_val: int = 101) -> dict:
    """Criterion 4: desk-profile builds certify on >= 99% of structured vectors."""
    p = PrimeModulus(p_val)
    successes = 0
    reverified = 0
    failures = []
    for i in range(cases):
        g = substream(seed, "c4-build", i)
        c = int(g.integers(1, p.p))
        v = gen_gap_vector(c, [0], [1], n, p, g)  # degenerate GAP: constant c
        try:
            cert = build_container(v, p, DESK_PROFILE, g)
        except (RetryExhausted, PreconditionViolated) as exc:
            failures.append(f"case {i}: {exc}")
            continue
        successes += 1
        ok, errs = verify_certificate(v, p, DESK_PROFILE, cert)
        if ok and 4 * cert.measured["outsideCount"] <= n:
            reverified += 1
        else:
            failures.append(f"case {i}: reverify {errs}")
    ok = successes >= math.ceil(0.99 * cases) and reverified == successes
    return {
        "name": "container_construction",
        "ok": ok,
        "cases": cases,
        "successes": successes,
        "reverified": reverified,
        "failures": failures[:5],
    }


def check_fibre_algorithm(seed: int, cases: int = 100, n: int = 1024, p_val: int = 101) -> dict:
    """Criterion 5: traces audit clean; a tampered trace is caught."""
    p = PrimeModulus(p_val)
    bad = 0
    k_stars = []
    mutation_caught = False
    for i in range(cases):
        g = substream(seed, "c5-fibre", i)
        c = int(g.integers(1, p.p))
        v = ZpVector((c,) * n)
        trace = run_fibre(v, p, DESK_PROFILE, g)
        report = audit_trace(v, trace, DESK_PROFILE)
        k_stars.append(trace.k_star)
        if not report.ok:
            bad += 1
        if i == 0 and trace.steps:
            # move one index from X_1 into Y_1 and re-audit
            from dataclasses import replace

            s0 = trace.steps[0]
            moved = next(iter(s0.x))
            tampered_step = replace(
                s0, x=s0.x - {moved}, y=s0.y | {moved}
            )
            tampered = replace(trace, steps=(tampered_step,) + trace.steps[1:])
            mutation_caught = not audit_trace(v, tampered, DESK_PROFILE).ok
    cap = math.ceil(math.log(n) / math.log(4 / 3)) + 1
    ok = bad == 0 and mutation_caught and all(k <= cap for k in k_stars)
    return {
        "name": "fibre_algorithm",
        "ok": ok,
        "cases": cases,
        "violations": bad,
        "mutation_caught": mutation_caught,
        "k_star_max": max(k_stars) if k_stars else 0,
        "k_star_cap": cap,
    }


def check_exhaustive_matrix(seed: int, match_cases: int = 50, block_cases: int = 50) -> dict:
    """Criterion 6: tiny exhaustive matrix probabilities."""
    p = PrimeModulus(5)
    ok_exact = ml.singularity_exact(2) == Fraction(1, 2)
    bad_match = 0
    for i in range(match_cases):
        g = substream(seed, "c6-match", i)
        n = 4
        ents = [int(x) for x in g.integers(0, 5, size=n)]
        if not any(ents):
            ents[int(g.integers(0, n))] = int(g.integers(1, 5))
        v = ZpVector(tuple(ents))
        w = _random_vector(g, n, p)
        if ml.match_probability_exact(v, w, p) > Fraction(1, 2**n):
            bad_match += 1
    bad_block = 0
    for i in range(block_cases):
        g = substream(seed, "c6-block", i)
        n = 4
        v = _random_vector(g, n, p)
        w = _random_vector(g, n, p)
        perm = [int(j) for j in g.permutation(n)]
        nx = int(g.integers(0, 3))
        ny = int(g.integers(1, n - nx + 1))
        res = ml.block_probability_exact(v, w, perm[:nx], perm[nx : nx + ny], p)
        if not res.holds:
            bad_block += 1
    ok = ok_exact and bad_match == 0 and bad_block == 0
    return {
        "name": "exhaustive_matrix",
        "ok": ok,
        "singularity2_is_half": ok_exact,
        "match_violations": bad_match,
        "block_violations": bad_block,
        "cases": 1 + match_cases + block_cases,
    }


def check_identities(
    seed: int,
    decouple_cases: int = 200,
    prob_cases: int = 100,
    odlyzko_cases: int = 100,
    adjugate_cases: int = 50,
) -> dict:
    """Criterion 7: the algebraic identity suite never reports a violation."""
    bad = {"decoupling_identity": 0, "decoupling_probability": 0, "odlyzko": 0, "adjugate": 0}
    for i in range(decouple_cases):
        g = substream(seed, "c7-decouple-id", i)
        p = PrimeModulus([5, 7, 13][int(g.integers(0, 3))])
        d = int(g.integers(1, 8))
        # rejection-sample an invertible symmetric matrix
        while True:
            m = g.integers(0, p.p, size=(d, d))
            m = (m + m.T) % p.p
            if ml.rank_mod_p(m, p) == d:
                break
        u = g.integers(0, 2, size=d) * 2 - 1
        u2 = g.integers(0, 2, size=d) * 2 - 1
        mask = g.random(d) < 0.5
        i_set = [j for j in range(d) if mask[j]]
        j_set = [j for j in range(d) if not mask[j]]
        if not ml.decoupling_identity_check(m, u, u2, i_set, j_set, p):
            bad["decoupling_identity"] += 1
    for i in range(prob_cases):
        g = substream(seed, "c7-decouple-prob", i)
        xs = list(range(4))
        ys = list(range(4))
        px = {x: Fraction(1, 4) for x in xs}
        py = {y: Fraction(1, 4) for y in ys}
        table = g.random((4, 4)) < 0.5
        if not ml.decoupling_probability_check(px, py, lambda x, y: bool(table[x][y])):
            bad["decoupling_probability"] += 1
    for i in range(odlyzko_cases):
        g = substream(seed, "c7-odlyzko", i)
        p = _prime(g)
        n = int(g.integers(2, 13))
        k = int(g.integers(0, min(n, 6) + 1))
        while True:
            rows = g.integers(0, p.p, size=(k, n))
            if k == 0 or ml.rank_mod_p(rows, p) == k:
                break
        basis = [tuple(int(x) for x in row) for row in rows]
        count, holds = ml.odlyzko_check(basis, n, p)
        if not holds:
            bad["odlyzko"] += 1
    for i in range(adjugate_cases):
        g = substream(seed, "c7-adjugate", i)
        p = PrimeModulus(7)
        d = int(g.integers(2, 6))
        while True:
            m = g.integers(0, p.p, size=(d, d))
            m = (m + m.T) % p.p
            if ml.rank_mod_p(m, p) == d - 1:
                break
        if not ml.adjugate_rank1_check(m, p).ok:
            bad["adjugate"] += 1
    total = sum(bad.values())
    return {
        "name": "identity_suite",
        "ok": total == 0,
        "violations": total,
        "by_check": bad,
        "cases": decouple_cases + prob_cases + odlyzko_cases + adjugate_cases,
    }


def check_rho_inequalities(seed: int, cases: int = 500) -> dict:
    """Criterion 8: restriction monotonicity, sandwich, lazy-walk equality."""
    bad = 0
    for i in range(cases):
        g = substream(seed, "c8-rho-ineq", i)
        p = _prime(g)
        n = int(g.integers(2, 11))
        v = _random_vector(g, n, p)
        rv = ac.rho(v, p).value
        mask = g.random(n) < 0.5
        y = [j for j in range(n) if mask[j]]
        if ac.rho(v.restrict(y), p).value < rv:
            bad += 1
        i_set = [j for j in range(n) if mask[j]]
        j_size = n - len(i_set)
        r_i = ac.rho(v.restrict(i_set), p).value
        if not (rv <= r_i <= 2**j_size * rv):
            bad += 1
        half = ac.rho_half(v, p).value
        if half != ac.rho(v.concat(v), p).value or half > rv:
            bad += 1
    return {"name": "rho_inequalities", "ok": bad == 0, "cases": cases, "violations": bad}


def check_monte_carlo(
    seed: int,
    exact_trials: int = 10**6,
    trend_trials: int = 10**5,
    trend_max_n: int = 16,
    workers: int = 1,
) -> dict:
    """Criterion 9: MC intervals contain exact values; point estimates decay."""
    misses = 0
    interval_rows = []
    for n in (2, 3, 4, 5):
        est = ml.singularity_mc_sharded(n, exact_trials, seed, workers=workers)
        exact = float(ml.singularity_exact(n))
        hit = est.wilson95[0] <= exact <= est.wilson95[1]
        misses += 0 if hit else 1
        interval_rows.append(
            {"n": n, "exact": exact, "estimate": est.point_estimate, "wilson": est.wilson95, "hit": hit}
        )
    trend = []
    for n in range(4, trend_max_n + 1):
        est = ml.singularity_mc_sharded(n, trend_trials, seed, workers=workers)
        trend.append({"n": n, "estimate": est.point_estimate, "conjecture": est.conjecture_value})
    monotone = all(
        trend[i]["estimate"] > trend[i + 1]["estimate"] for i in range(len(trend) - 1)
    )
    ok = misses <= 1 and monotone
    return {
        "name": "monte_carlo_consistency",
        "ok": ok,
        "interval_misses": misses,
        "monotone_decay": monotone,
        "intervals": interval_rows,
        "trend": trend,
    }


def check_fibre_count(seed: int, cases: int = 200, n: int = 128, p_val: int = 31) -> dict:
    """Side experiment: distinct observed fibres vs the counting bound."""
    p = PrimeModulus(p_val)
    prints = set()
    for i in range(cases):
        g = substream(seed, "fibre-count", i)
        c = int(g.integers(1, p.p))
        v = ZpVector((c,) * n)
        trace = run_fibre(v, p, DESK_PROFILE, g)
        prints.add(trace_fingerprint(trace))
    from .fibres import fibre_count_bound

    bound = fibre_count_bound(n, p, DESK_PROFILE)
    distinct = len(prints)
    ok = math.log(max(distinct, 1)) <= bound["log_bound"]
    return {
        "name": "fibre_count_experiment",
        "ok": ok,
        "distinct_fibres": distinct,
        "log_bound": bound["log_bound"],
        "cases": cases,
    }


ALL_CHECKS = [
    ("1", check_rho_oracle),
    ("2", check_deterministic_lemmas),
    ("3", check_halasz_chain),
    ("4", check_container_construction),
    ("5", check_fibre_algorithm),
    ("6", check_exhaustive_matrix),
    ("7", check_identities),
    ("8", check_rho_inequalities),
    ("9", check_monte_carlo),
]


def run_suite(seed: int, quick: bool = False, workers: int = 1) -> dict:
    """Run criteria 1..9 at full (or reduced) scale; returns the suite doc."""
    results = []
    if quick:
        results.append(("1", check_rho_oracle(seed, cases=50)))
        results.append(("2", check_deterministic_lemmas(seed, 20, 20, 10, 10)))
        results.append(("3", check_halasz_chain(seed, cases=20)))
        results.append(("4", check_container_construction(seed, cases=10)))
        results.append(("5", check_fibre_algorithm(seed, cases=5)))
        results.append(("6", check_exhaustive_matrix(seed, 10, 10)))
        results.append(("7", check_identities(seed, 20, 10, 10, 5)))
        results.append(("8", check_rho_inequalities(seed, cases=50)))
        results.append(
            ("9", check_monte_carlo(seed, exact_trials=20000, trend_trials=10000, trend_max_n=10, workers=workers))
        )
    else:
        for label, fn in ALL_CHECKS:
            if fn is check_monte_carlo:
                results.append((label, fn(seed, workers=workers)))
            else:
                results.append((label, fn(seed)))
    doc = {
        "seed": seed,
        "quick": quick,
        "criteria": {label: res for label, res in results},
        "all_ok": all(res["ok"] for _, res in results),
    }
    return doc

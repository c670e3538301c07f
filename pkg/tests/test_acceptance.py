"""Acceptance suite: one test per criterion, at the stated scales and
tolerances, printing one pass/fail line each.

Run with `pytest tests/test_acceptance.py -s` to see the per-criterion lines,
or `rholab verify-all --seed 42` for the CLI rendering of the same checks.
"""

import time

from rholab import acceptance as acc
from rholab.cli import cli_dispatch

SEED = 42


def _report(label, res, elapsed, budget=None):
    status = "PASS" if res["ok"] else "FAIL"
    extra = f" ({elapsed:.1f}s)" if budget is None else f" ({elapsed:.1f}s / budget {budget}s)"
    print(f"criterion {label}: {status} - {res['name']}{extra}")
    assert res["ok"], res
    if budget is not None:
        assert elapsed < budget, f"criterion {label} exceeded runtime budget"


def test_criterion_1_rho_oracle_equivalence():
    t0 = time.time()
    res = acc.check_rho_oracle(SEED, cases=500)
    _report("1", res, time.time() - t0, budget=60)


def test_criterion_2_deterministic_lemmas():
    t0 = time.time()
    res = acc.check_deterministic_lemmas(SEED, 200, 200, 100, 100)
    _report("2", res, time.time() - t0, budget=120)


def test_criterion_3_halasz_chain():
    t0 = time.time()
    res = acc.check_halasz_chain(SEED, cases=200)
    _report("3", res, time.time() - t0)


def test_criterion_4_container_construction():
    t0 = time.time()
    res = acc.check_container_construction(SEED, cases=100, n=512, p_val=101)
    _report("4", res, time.time() - t0)
    assert res["successes"] >= 99
    assert res["reverified"] == res["successes"]


def test_criterion_5_fibre_algorithm():
    t0 = time.time()
    res = acc.check_fibre_algorithm(SEED, cases=100, n=1024, p_val=101)
    _report("5", res, time.time() - t0)
    assert res["mutation_caught"]
    assert res["k_star_max"] <= 26  # ceil(log_{4/3} 1024) + 1


def test_criterion_6_exhaustive_matrix_checks():
    t0 = time.time()
    res = acc.check_exhaustive_matrix(SEED, match_cases=50, block_cases=50)
    _report("6", res, time.time() - t0, budget=300)


def test_criterion_7_identity_suite():
    t0 = time.time()
    res = acc.check_identities(SEED, 200, 100, 100, 50)
    _report("7", res, time.time() - t0)


def test_criterion_8_rho_inequalities():
    t0 = time.time()
    res = acc.check_rho_inequalities(SEED, cases=500)
    _report("8", res, time.time() - t0)


def test_criterion_9_monte_carlo_consistency():
    t0 = time.time()
    res = acc.check_monte_carlo(SEED, exact_trials=10**6, trend_trials=10**5, trend_max_n=16)
    _report("9", res, time.time() - t0, budget=600)
    assert res["interval_misses"] <= 1
    assert res["monotone_decay"]


def test_criterion_10_reproducibility(tmp_path):
    t0 = time.time()
    dirs = [tmp_path / f"run{i}" for i in range(3)]
    base = ["verify-all", "--seed", "42", "--quick"]
    assert cli_dispatch(base + ["--out", str(dirs[0])]) == 0
    assert cli_dispatch(base + ["--out", str(dirs[1])]) == 0
    assert cli_dispatch(base + ["--workers", "2", "--out", str(dirs[2])]) == 0
    artifacts = ["verify_all.json", "singularity.csv", "record.json"]
    refs = {a: (dirs[0] / a).read_bytes() for a in artifacts}
    ok = all((d / a).read_bytes() == refs[a] for d in dirs[1:] for a in artifacts)
    _report("10", {"ok": ok, "name": "reproducibility"}, time.time() - t0)

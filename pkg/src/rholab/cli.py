"""Command-line interface.

Subcommands: rho, halasz, container, fibre, singularity, identities,
verify-all.  Exit codes: 0 all invoked checks pass, 1 an invariant failed
(machine-readable JSON report on stderr), 2 usage error (argparse).
Identical configs (seed included) produce byte-identical artifacts,
regardless of --workers.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import acceptance
from . import anticoncentration as ac
from . import matrix_lab as ml
from .containers import gen_gap_vector
from .errors import (
    GuardExceeded,
    PreconditionViolated,
    RetryExhausted,
    VectorParseError,
)
from .fibres import audit_trace, run_fibre, trace_to_doc
from .harness import (
    ExperimentConfig,
    ExperimentRecord,
    failure_report,
    load_vectors,
    write_csv,
    write_json,
)
from .inverse_lo import (
    PROFILES,
    build_container,
    certificate_to_doc,
    profile_from_dict,
    verify_certificate,
)
from .rng import substream
from .zp_core import PrimeModulus, ZpVector


class _UsageError(Exception):
    pass


def _profile(spec: str):
    if spec in PROFILES:
        return PROFILES[spec]
    if spec.startswith("file:"):
        return profile_from_dict(json.loads(Path(spec[5:]).read_text()))
    raise _UsageError(f"unknown profile {spec!r} (use paper, desk, or file:<path>)")


def _add_common(sp):
    sp.add_argument("--seed", type=int, default=0)
    sp.add_argument("--profile", default="desk", help="paper | desk | file:<path>")
    sp.add_argument("--out", default=None, help="artifact path (or directory for verify-all)")
    sp.add_argument("--format", choices=("csv", "json"), default="csv")
    sp.add_argument("--workers", type=int, default=1)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="rholab", description=__doc__)
    sub = ap.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("rho", help="exact rho / rho-half for a vector file")
    _add_common(sp)
    sp.add_argument("--vectors", required=True)

    sp = sub.add_parser("halasz", help="bound-chain audit for a vector file")
    _add_common(sp)
    sp.add_argument("--vectors", required=True)

    sp = sub.add_parser("container", help="build and verify container certificates")
    _add_common(sp)
    sp.add_argument("--n", type=int, default=512)
    sp.add_argument("--p", type=int, default=101)
    sp.add_argument("--count", type=int, default=10)

    sp = sub.add_parser("fibre", help="run and audit fibre traces")
    _add_common(sp)
    sp.add_argument("--n", type=int, default=1024)
    sp.add_argument("--p", type=int, default=101)
    sp.add_argument("--count", type=int, default=10)
    sp.add_argument("--trace-out", default=None)

    sp = sub.add_parser("singularity", help="exact or Monte Carlo singularity")
    _add_common(sp)
    sp.add_argument("--exact", action="store_true")
    sp.add_argument("--mc", action="store_true")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--trials", type=int, default=100000)

    sp = sub.add_parser("identities", help="algebraic identity property suites")
    _add_common(sp)
    sp.add_argument("--cases", type=int, default=50)
    sp.add_argument("--beta", default=None,
                    help="also probe exhaustive q_n(beta), e.g. --beta 4/5 --n 2 --p 5")
    sp.add_argument("--n", type=int, default=2)
    sp.add_argument("--p", type=int, default=5)

    sp = sub.add_parser("verify-all", help="full acceptance suite")
    _add_common(sp)
    sp.add_argument("--quick", action="store_true", help="reduced case counts")
    return ap


def _emit(args, header, rows, doc):
    if args.format == "csv":
        text = write_csv(args.out, header, rows)
    else:
        text = write_json(args.out, doc)
    if args.out is None:
        sys.stdout.write(text)


def cmd_rho(args) -> int:
    vectors = load_vectors(args.vectors)
    header = [
        "idx", "p", "n", "support",
        "rho_atom", "rho_count", "rho_log2_den",
        "rho_half_atom", "rho_half_count", "rho_half_log2_den",
    ]
    rows = []
    docs = []
    for idx, (p, v) in enumerate(vectors):
        r = ac.rho(v, p)
        h = ac.rho_half(v, p)
        rows.append([idx, p.p, len(v), v.support_size, r.atom, r.count,
                     r.log2_denominator, h.atom, h.count, h.log2_denominator])
        docs.append({
            "idx": idx, "p": p.p, "n": len(v), "support": v.support_size,
            "rho": {"atom": r.atom, "count": r.count, "log2Denominator": r.log2_denominator},
            "rhoHalf": {"atom": h.atom, "count": h.count, "log2Denominator": h.log2_denominator},
        })
    _emit(args, header, rows, {"vectors": docs})
    return 0


def cmd_halasz(args) -> int:
    vectors = load_vectors(args.vectors)
    header = ["idx", "p", "support", "ell", "rho", "first", "second", "final", "ok"]
    rows = []
    bad = 0
    for idx, (p, v) in enumerate(vectors):
        if v.support_size == 0:
            continue
        r = float(ac.rho(v, p).value)
        first = ac.halasz_first_bound(v, p)
        ok1 = r <= first + ac.FLOAT_SLACK
        bad += 0 if ok1 else 1
        max_ell = v.support_size // 64
        for ell in range(1, max_ell + 1):
            second = ac.halasz_second_bound(v, ell, p)
            final = ac.halasz_bound(v, ell, p)
            ok = ok1 and r <= second + ac.FLOAT_SLACK and r <= final + ac.FLOAT_SLACK
            bad += 0 if (r <= second + ac.FLOAT_SLACK and r <= final + ac.FLOAT_SLACK) else 1
            rows.append([idx, p.p, v.support_size, ell,
                         repr(r), repr(first), repr(second), repr(final), ok])
        if max_ell < 1:
            rows.append([idx, p.p, v.support_size, "", repr(r), repr(first), "", "", ok1])
    _emit(args, header, rows, {"rows": [dict(zip(header, row)) for row in rows]})
    if bad:
        print(failure_report({"halasz_violations": bad}), file=sys.stderr)
        return 1
    return 0


def cmd_container(args) -> int:
    profile = _profile(args.profile)
    p = PrimeModulus(args.p)
    header = ["idx", "p", "n", "support", "size_y", "support_vy", "outside_count",
              "size_b", "rho_vy", "ok"]
    rows = []
    docs = []
    bad = 0
    for i in range(args.count):
        g = substream(args.seed, "cli-container", i)
        c = int(g.integers(1, p.p))
        v = gen_gap_vector(c, [0], [1], args.n, p, g)
        try:
            cert = build_container(v, p, profile, g)
        except (RetryExhausted, PreconditionViolated) as exc:
            bad += 1
            rows.append([i, p.p, args.n, v.support_size, "", "", "", "", "", False])
            docs.append({"idx": i, "error": str(exc)})
            continue
        ok, errs = verify_certificate(v, p, profile, cert)
        bad += 0 if ok else 1
        m = cert.measured
        rows.append([i, p.p, args.n, m["supportV"], m["sizeY"], m["supportVY"],
                     m["outsideCount"], m["sizeB"],
                     f"{m['rhoVY'].numerator}/{m['rhoVY'].denominator}", ok])
        docs.append({"idx": i, "certificate": certificate_to_doc(cert), "verified": ok})
    _emit(args, header, rows, {"certificates": docs})
    if bad:
        print(failure_report({"container_failures": bad}), file=sys.stderr)
        return 1
    return 0


def cmd_fibre(args) -> int:
    profile = _profile(args.profile)
    p = PrimeModulus(args.p)
    header = ["idx", "p", "n", "k_star", "terminal_support", "audit_ok"]
    rows = []
    traces = []
    bad = 0
    for i in range(args.count):
        g = substream(args.seed, "cli-fibre", i)
        c = int(g.integers(1, p.p))
        v = ZpVector((c,) * args.n)
        try:
            trace = run_fibre(v, p, profile, g)
        except (RetryExhausted, PreconditionViolated) as exc:
            bad += 1
            rows.append([i, p.p, args.n, "", "", False])
            traces.append({"idx": i, "error": str(exc)})
            continue
        report = audit_trace(v, trace, profile)
        bad += 0 if report.ok else 1
        rows.append([i, p.p, args.n, trace.k_star, trace.terminal_support, report.ok])
        traces.append({"idx": i, "trace": trace_to_doc(trace), "audit": report.checks})
    if args.trace_out:
        write_json(args.trace_out, {"traces": traces})
    _emit(args, header, rows, {"traces": traces})
    if bad:
        print(failure_report({"fibre_failures": bad}), file=sys.stderr)
        return 1
    return 0


def cmd_singularity(args) -> int:
    if args.exact == args.mc:
        print("choose exactly one of --exact / --mc", file=sys.stderr)
        return 2
    if args.exact:
        value = ml.singularity_exact(args.n)
        if args.out is not None:
            _emit(args, ["n", "exact"],
                  [[args.n, f"{value.numerator}/{value.denominator}"]],
                  {"n": args.n, "exact": value})
        print(f"{value.numerator}/{value.denominator}")
        return 0
    est = ml.singularity_mc_sharded(args.n, args.trials, args.seed, workers=args.workers)
    header = ["n", "trials", "singular_count", "p_hat", "wilson_lo", "wilson_hi",
              "conjecture", "seed"]
    row = [est.n, est.trials, est.singular_count, repr(est.point_estimate),
           repr(est.wilson95[0]), repr(est.wilson95[1]),
           repr(est.conjecture_value), args.seed]
    doc = {
        "n": est.n, "trials": est.trials, "singularCount": est.singular_count,
        "pointEstimate": est.point_estimate, "wilson95": list(est.wilson95),
        "conjecture": est.conjecture_value,
        "contextBoundShape": est.context_bound_shape, "seed": args.seed,
    }
    _emit(args, header, [row], doc)
    return 0


def cmd_identities(args) -> int:
    k = args.cases
    res = acceptance.check_identities(
        args.seed, decouple_cases=k, prob_cases=k, odlyzko_cases=k,
        adjugate_cases=max(1, k // 2),
    )
    lemmas = acceptance.check_deterministic_lemmas(
        args.seed, container_cases=k, contain_cases=k,
        sumset_cases=k, cd_cases=k,
    )
    doc = {"identities": res, "deterministic_lemmas": lemmas}
    rows = [["identities", res["ok"], res["violations"], res["cases"]],
            ["deterministic_lemmas", lemmas["ok"], lemmas["violations"], lemmas["cases"]]]
    if args.beta is not None:
        beta = Fraction(args.beta)
        p = PrimeModulus(args.p)
        q_max, w_max = ml.q_exact_max(args.n, p, beta, strict=False)
        doc["q_probe"] = {
            "n": args.n, "p": args.p, "beta": beta,
            "max_q": q_max, "argmax_w": list(w_max),
        }
        rows.append(["q_probe", True, 0, p.p**args.n])
    _emit(args, ["suite", "ok", "violations", "cases"], rows, doc)
    if not (res["ok"] and lemmas["ok"]):
        print(failure_report({"identities": res, "lemmas": lemmas}), file=sys.stderr)
        return 1
    return 0


def cmd_verify_all(args) -> int:
    doc = acceptance.run_suite(args.seed, quick=args.quick, workers=args.workers)
    for label, res in doc["criteria"].items():
        status = "PASS" if res["ok"] else "FAIL"
        print(f"criterion {label}: {status} ({res['name']})")
    out_dir = Path(args.out) if args.out else None
    if out_dir:
        out_dir.mkdir(parents=True, exist_ok=True)
        write_json(out_dir / "verify_all.json", doc)
        # worker count stays out of the logical config: artifacts must be
        # byte-identical for any parallelism (it is logged to stderr instead)
        record = ExperimentRecord(
            ExperimentConfig(
                "verify-all", args.seed, args.profile, {"quick": args.quick}
            ),
            outputs={k: v["name"] for k, v in doc["criteria"].items()},
            invariant_flags={k: v["ok"] for k, v in doc["criteria"].items()},
        )
        print(f"[verify-all] workers={args.workers}", file=sys.stderr)
        record.emit(out_dir / "record.json")
        mc = doc["criteria"]["9"]
        header = ["n", "trials", "singular_count", "p_hat", "wilson_lo", "wilson_hi",
                  "conjecture", "seed"]
        rows = []
        for rec in mc["intervals"]:
            rows.append([rec["n"], "", "", repr(rec["estimate"]),
                         repr(rec["wilson"][0]), repr(rec["wilson"][1]), "", args.seed])
        for rec in mc["trend"]:
            rows.append([rec["n"], "", "", repr(rec["estimate"]), "", "",
                         repr(rec["conjecture"]), args.seed])
        write_csv(out_dir / "singularity.csv", header, rows)
    if not doc["all_ok"]:
        failing = {k: v["name"] for k, v in doc["criteria"].items() if not v["ok"]}
        print(failure_report(failing), file=sys.stderr)
        return 1
    return 0


_COMMANDS = {
    "rho": cmd_rho,
    "halasz": cmd_halasz,
    "container": cmd_container,
    "fibre": cmd_fibre,
    "singularity": cmd_singularity,
    "identities": cmd_identities,
    "verify-all": cmd_verify_all,
}


def cli_dispatch(argv) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code not in (0, None) else 0
    try:
        return _COMMANDS[args.command](args)
    except (PreconditionViolated, RetryExhausted, GuardExceeded) as exc:
        print(failure_report({"error": str(exc)}), file=sys.stderr)
        return 1
    except (FileNotFoundError, VectorParseError, _UsageError) as exc:
        print(str(exc), file=sys.stderr)
        return 2


def main() -> None:
    sys.exit(cli_dispatch(sys.argv[1:]))


if __name__ == "__main__":
    main()

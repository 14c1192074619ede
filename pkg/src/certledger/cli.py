"""Command line entry point (``certledger`` / ``python -m certledger``)."""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import bounds, surfsing, verifier
from . import ledger as L
from .exact import DomainError, decimal_str, fmt, rat
from .expr import DEFAULT_EPS
from .volume import eta_prime, g_value


def _rational(text: str) -> Fraction:
    try:
        return rat(text)
    except (ValueError, ZeroDivisionError) as exc:
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}") from exc


def _positive_int(text: str) -> int:
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return value


def _enc(e) -> str:
    return f"[{fmt(e.lo)}, {fmt(e.hi)}] ~ [{decimal_str(e.lo, 12)}, {decimal_str(e.hi, 12)}]"


def _emit(report: verifier.Report, json_path, md_path) -> None:
    if json_path:
        Path(json_path).write_text(report.dumps(), encoding="utf-8")
    if md_path:
        Path(md_path).write_text(report.markdown(), encoding="utf-8")


def _summary(report: verifier.Report) -> None:
    for r in report.claims + report.controls:
        b = r.certificate.bound
        bound = "" if b is None else f"  [{decimal_str(b.lo, 6)}, {decimal_str(b.hi, 6)}]"
        print(f"{r.claim.id:34s} {r.verdict.value:12s}{bound}")
    if report.constants is not None:
        for name in report.constants.flagged:
            print(f"flagged constant: {name}")
    print(f"verdict: {'pass' if report.passed else 'fail'}")
    if report.failing:
        print("failing: " + ", ".join(report.failing))


def cmd_verify(args) -> int:
    if args.target == "all":
        config = verifier.Config(budget=args.budget, eps=args.eps, max_vertices=args.max_vertices,
                                 max_weight=args.max_weight, jobs=args.jobs)
    else:
        if not args.claim_id:
            print("verify claim needs a claim id", file=sys.stderr)
            return 2
        config = verifier.Config(budget=args.budget, eps=args.eps, claim_ids=(args.claim_id,), jobs=1)
    try:
        report = verifier.run_all(config)
    except KeyError as exc:
        print(exc.args[0], file=sys.stderr)
        return 2
    _summary(report)
    _emit(report, args.json, args.md)
    return 0 if report.passed else 1


def cmd_constants(args) -> int:
    rep = verifier.check_derived_constants(args.budget, args.eps)
    for c in rep.checks:
        mark = "ok  " if c.holds else "FLAG"
        print(f"{mark} {c.name}: printed {c.printed}; value {decimal_str(c.value.mid, 10)}" + (f"  ({c.note})" if c.note else ""))
    for r in rep.recertified:
        print(f"{r.claim.id}: {r.verdict.value}")
    if args.json:
        Path(args.json).write_text(json.dumps(rep.to_json(), indent=2, sort_keys=True, ensure_ascii=False) + "\n")
    return 0 if rep.ok else 1


def cmd_mld(args) -> int:
    try:
        g = surfsing.DualGraph.load(args.graph)
    except (ValueError, KeyError, OSError) as exc:
        print(f"invalid graph: {exc}", file=sys.stderr)
        return 2
    z = surfsing.fundamental_cycle(g)
    out = {"graph": g.to_json(), "fundamental_cycle": list(z), "rational": surfsing.is_rational(g)}
    if out["rational"]:
        m = surfsing.multiplicity(g)
        value = surfsing.mld(g)
        out.update({
            "multiplicity": m,
            "embedding_dimension": m + 1,
            "discrepancies": [fmt(x) for x in surfsing.discrepancies(g)],
            "mld": fmt(value),
            "mld_le_2_over_m": value <= Fraction(2, m),
        })
    print(json.dumps(out, indent=2))
    return 0


def cmd_mld_scan(args) -> int:
    report = surfsing.verify_mld_theorem(args.max_vertices, args.max_weight)
    minus_two = surfsing.verify_m3_minus2_claim(args.max_vertices, args.max_weight)
    out = {"mld_theorem": report.to_json(), "m3_with_minus2_curve": minus_two.to_json()}
    print(json.dumps(out, indent=2))
    return 0 if report.ok and minus_two.ok else 1


def cmd_mu(args) -> int:
    try:
        enc = bounds.mu_min(args.w, args.sigma, args.n, args.eps)
    except DomainError as exc:
        print(exc, file=sys.stderr)
        return 2
    print(f"mu({fmt(args.w)}) in {_enc(enc)}")
    return 0


def cmd_alpha(args) -> int:
    try:
        beta = bounds.beta_de(args.d, args.e, args.m)
        alpha = bounds.alpha_de(args.d, args.e, args.m)
    except DomainError as exc:
        print(exc, file=sys.stderr)
        return 2
    print(f"beta_{{{args.d},{args.e}}}({args.m}) in {_enc(beta)}")
    print(f"alpha_{{{args.d},{args.e}}}({args.m}) = {alpha}")
    return 0


def cmd_eta_prime(args) -> int:
    try:
        eta = eta_prime(args.s, args.deficit, args.eps)
        g, _ = g_value(args.deficit, args.s, args.eps)
    except DomainError as exc:
        print(exc, file=sys.stderr)
        return 2
    print(f"eta'(s={fmt(args.s)}, def={fmt(args.deficit)}) in {_enc(eta)}")
    print(f"f(eta', def) in {_enc(g)}")
    return 0


def cmd_ledger(args) -> int:
    try:
        text = verifier.ledger_markdown()
    except AssertionError as exc:
        print(exc, file=sys.stderr)
        return 1
    if args.md:
        Path(args.md).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="certledger", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def precision(p, budget=True):
        if budget:
            p.add_argument("--budget", type=_positive_int, default=verifier.DEFAULT_LEDGER_BUDGET,
                           help="leaf boxes per claim before escalation (default 100000)")
        p.add_argument("--eps", type=_rational, default=DEFAULT_EPS, help="root enclosure width (default 1/10^9)")

    v = sub.add_parser("verify", help="certify the claim ledger")
    v.add_argument("target", choices=["all", "claim"])
    v.add_argument("claim_id", nargs="?")
    precision(v)
    v.add_argument("--json", default="certledger-report.json", help="JSON report path ('' to skip)")
    v.add_argument("--md", default="certledger-report.md", help="Markdown report path ('' to skip)")
    v.add_argument("--max-vertices", type=_positive_int, default=6)
    v.add_argument("--max-weight", type=int, default=6)
    v.add_argument("--jobs", type=_positive_int, default=1, help="worker processes for claims")
    v.set_defaults(func=cmd_verify)

    c = sub.add_parser("constants", help="recompute the printed constants")
    precision(c)
    c.add_argument("--json")
    c.set_defaults(func=cmd_constants)

    m = sub.add_parser("mld", help="fundamental cycle, multiplicity and mld of one dual graph")
    m.add_argument("--graph", required=True, help='JSON file {"weights": [...], "edges": [[i, j], ...]} (1-based)')
    m.set_defaults(func=cmd_mld)

    s = sub.add_parser("mld-scan", help="check mld <= 2/m on every enumerated rational tree")
    s.add_argument("--max-vertices", type=_positive_int, default=6)
    s.add_argument("--max-weight", type=int, default=6)
    s.set_defaults(func=cmd_mld_scan)

    mu = sub.add_parser("mu", help="least mu with (w/sigma + mu)^n <= mu (1 + mu)^(n-1)")
    mu.add_argument("--w", type=_rational, required=True)
    mu.add_argument("--sigma", type=_rational, default=bounds.SIGMA)
    mu.add_argument("--n", type=_positive_int, default=bounds.N_DIM)
    precision(mu, budget=False)
    mu.set_defaults(func=cmd_mu)

    a = sub.add_parser("alpha", help="beta_{d,e}(m) and its floor")
    a.add_argument("--d", type=_positive_int, required=True)
    a.add_argument("--e", type=_positive_int, required=True)
    a.add_argument("--m", type=_positive_int, required=True)
    a.set_defaults(func=cmd_alpha)

    e = sub.add_parser("eta-prime", help="largest root of the volume lower bound")
    e.add_argument("--s", type=_rational, default=L.S_MAX)
    e.add_argument("--def", dest="deficit", type=_rational, required=True)
    precision(e, budget=False)
    e.set_defaults(func=cmd_eta_prime)

    led = sub.add_parser("ledger", help="print the claim transcription, failing on coverage gaps")
    led.add_argument("--md", help="write to this path instead of stdout")
    led.set_defaults(func=cmd_ledger)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)

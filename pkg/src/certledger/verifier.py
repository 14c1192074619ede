"""Certification driver: runs the ledger and the side checks and assembles a report."""

from __future__ import annotations

import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace
from fractions import Fraction
from typing import Optional, Sequence

from . import __version__
from . import ledger as L
from . import surfsing, volume
from .bounds import SIGMA, SLOPE_FAR, SLOPE_NEAR
from .certify import Certificate, Verdict, certify_inf_above, certify_sup_below
from .exact import DomainError, Enclosure, IntervalDivisionError, decimal_str, fmt, rat
from .expr import DEFAULT_EPS, evaluate, root

DEFAULT_LEDGER_BUDGET = 100_000


@dataclass(frozen=True)
class Config:
    budget: int = DEFAULT_LEDGER_BUDGET
    eps: Fraction = DEFAULT_EPS
    max_vertices: int = 6
    max_weight: int = 6
    claim_ids: Optional[tuple] = None
    jobs: int = 1
    side_checks: bool = True  # constants, volume chain, surfaces

    def __post_init__(self):
        object.__setattr__(self, "eps", rat(self.eps))
        if self.budget < 1:
            raise ValueError("budget must be positive")
        if self.eps <= 0:
            raise ValueError("eps must be positive")

    def to_json(self) -> dict:
        return {
            "budget": self.budget,
            "eps": fmt(self.eps),
            "max_vertices": self.max_vertices,
            "max_weight": self.max_weight,
            "claim_ids": None if self.claim_ids is None else list(self.claim_ids),
        }


# ---------------------------------------------------------------------------
# single claims


@dataclass(frozen=True)
class ClaimResult:
    claim: L.Claim
    certificate: Certificate
    escalated: bool = False

    @property
    def verdict(self) -> Verdict:
        return self.certificate.verdict

    def to_json(self) -> dict:
        c = self.claim
        cert = self.certificate.to_json()
        bound = self.certificate.bound
        return {
            "id": c.id,
            "group": c.group,
            "anchor": c.anchor,
            "statement": f"{c.kind} {c.expr} {c.relation} {fmt(c.threshold)}",
            "threshold": fmt(c.threshold),
            "threshold_decimal": decimal_str(c.threshold, 8),
            "relation": c.relation,
            "note": c.note,
            "box": c.box.to_json(),
            "escalated": self.escalated,
            "bound_decimal": None if bound is None else [decimal_str(bound.lo, 8), decimal_str(bound.hi, 8)],
            **{k: v for k, v in cert.items() if k not in ("threshold", "strict")},
        }


def _run(claim: L.Claim, budget: int, eps) -> Certificate:
    fn = certify_sup_below if claim.kind == "sup" else certify_inf_above
    try:
        cert = fn(claim.expr, claim.box, claim.threshold, claim.strict, budget=budget, eps=eps)
    except (DomainError, IntervalDivisionError, ValueError) as exc:
        return Certificate(Verdict.INCONCLUSIVE, claim.kind, claim.threshold, claim.strict, None, None, 0,
                           message=f"evaluation error: {exc}")
    if cert.verdict is Verdict.REFUTED and claim.uncertain:
        cert = _confirm_uniform_refutation(claim, cert, eps)
    return cert


def _confirm_uniform_refutation(claim: L.Claim, cert: Certificate, eps) -> Certificate:
    """For an enclosed unknown, a refutation must hold on the entire enclosure."""
    enc = evaluate(claim.expr, claim.box.env(), eps)
    if claim.kind == "sup":
        uniform = enc.lo >= claim.threshold if claim.strict else enc.lo > claim.threshold
        lower, upper = enc.lo, enc.hi
    else:
        uniform = enc.hi <= claim.threshold if claim.strict else enc.hi < claim.threshold
        lower, upper = enc.hi, enc.lo
    if uniform:
        return replace(cert, lower=lower, upper=upper, message="violated on the whole enclosure")
    return replace(cert, verdict=Verdict.INCONCLUSIVE, message="violation not uniform over the enclosure")


def certify_claim(claim: L.Claim, budget: int = DEFAULT_LEDGER_BUDGET, eps=DEFAULT_EPS) -> ClaimResult:
    """Certify one claim; an Inconclusive outcome is retried once with ten times the budget."""
    cert = _run(claim, budget, eps)
    if cert.verdict is Verdict.INCONCLUSIVE and not cert.message.startswith("evaluation error"):
        return ClaimResult(claim, _run(claim, budget * 10, eps), escalated=True)
    return ClaimResult(claim, cert)


def _certify_many(claims: Sequence[L.Claim], config: Config) -> list[ClaimResult]:
    if config.jobs > 1 and len(claims) > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            futures = [pool.submit(certify_claim, c, config.budget, config.eps) for c in claims]
            results = [f.result() for f in futures]
    else:
        results = [certify_claim(c, config.budget, config.eps) for c in claims]
    return sorted(results, key=lambda r: r.claim.id)


# ---------------------------------------------------------------------------
# printed constants


@dataclass(frozen=True)
class ConstantCheck:
    name: str
    printed: str
    value: Enclosure
    holds: bool
    kind: str  # "match": printed decimal equals the exact value; "inequality": printed chain step
    note: str = ""

    def to_json(self) -> dict:
        return {
            "name": self.name,
            "kind": self.kind,
            "printed": self.printed,
            "exact": fmt(self.value.lo) if self.value.is_point() else None,
            "enclosure": [fmt(self.value.lo), fmt(self.value.hi)],
            "decimal": decimal_str(self.value.mid, 10),
            "holds": self.holds,
            "flagged": not self.holds,
            "note": self.note,
        }


def _match(name: str, printed: str, value: Fraction, note: str = "") -> ConstantCheck:
    return ConstantCheck(name, printed, Enclosure.point(value), rat(printed) == value, "match", note)


def _below(name: str, printed: str, value: Enclosure, bound, strict: bool = True, note: str = "") -> ConstantCheck:
    bound = rat(bound)
    holds = value.hi < bound if strict else value.hi <= bound
    return ConstantCheck(name, printed, value, holds, "inequality", note)


def _between(name: str, printed: str, value: Fraction, lo, hi, note: str = "") -> ConstantCheck:
    return ConstantCheck(name, printed, Enclosure.point(value), rat(lo) < value < rat(hi), "inequality", note)


@dataclass
class ConstantsReport:
    checks: list
    recertified: list  # ClaimResults of the claims re-run under the printed alternatives

    @property
    def flagged(self) -> list[str]:
        return [c.name for c in self.checks if not c.holds]

    @property
    def ok(self) -> bool:
        return all(r.certificate.certified for r in self.recertified)

    def to_json(self) -> dict:
        return {
            "checks": [c.to_json() for c in self.checks],
            "flagged": self.flagged,
            "recertified": [r.to_json() for r in self.recertified],
        }


def printed_reading_claim() -> L.Claim:
    """Case 1(2) lower bound on r with the region cut using the alternative printed constant 3.2339961."""
    c1_printed = rat("3.2339961")
    region = L.lp_box(L.Q_GE_10, L.linear(L._lp(-c1_printed, 1 + SLOPE_FAR), "<=", 2), L.B2_GE_2)
    base = next(c for c in L.build_ledger() if c.id == "S6.2-L61-case1b-r")
    return replace(base, id="S6.2-L61-case1b-r@3.2339961", box=region,
                   note="region bound lam <= 2/(1.0391 q - 3.2339961) as printed")


def check_derived_constants(budget: int = DEFAULT_LEDGER_BUDGET, eps=DEFAULT_EPS) -> ConstantsReport:
    sigma = SIGMA
    c1, c2 = L.C1, L.C2
    k = evaluate(root(2, 4) / sigma, {}, eps)
    q_star = 3 * c2 / (1 + 3 * SLOPE_NEAR)
    phi_cross = sigma + rat("0.9999") / (SLOPE_NEAR - SLOPE_FAR)
    case1_cross = 3 * c1 / (3 * (1 + SLOPE_FAR) - 2)

    def const_enc(x) -> Enclosure:
        return Enclosure.point(rat(x))

    g_end, eta = volume.g_value(volume.DEF_HI, volume.S_MAX, eps)
    checks = [
        _match("3 + 0.0391 sigma", "3.23459609", c1),
        _match("3.9999 + 0.2884 sigma", "5.73027116", c2),
        _match("3 + 0.0391 sigma (alternative print)", "3.2339961", c1,
               note="differs from the exact value; the affected claim is re-certified with both readings"),
        _match("3.9999 + 0.288 sigma (slope printed as 0.288)", "5.7278712", c2,
               note="equals 3.9999 + 0.288 sigma, i.e. the slope truncated to 0.288"),
        _match("sigma - 5", "0.9999", sigma - 5),
        _match("5 - 3 * 1.63", "0.11", 5 - 3 * rat("1.63")),
        _match("4 (1 - 0.11)", "3.56", 4 * (1 - rat("0.11"))),
        _between("crossing of the two lambda bounds, q* = 3 C2 / 1.8652", "9.2 < q* < 9.22", q_star, "9.2", "9.22",
                 note=f"q* = {decimal_str(q_star, 8)}"),
        ConstantCheck("crossing of the two phi lines", "q = 10 split", Enclosure.point(phi_cross), phi_cross > 10,
                      "inequality", note=f"lines cross at q = {decimal_str(phi_cross, 8)}; the far line is the larger one only beyond it"),
        _between("case 1 lambda window 3/q vs 2/(1.0391q - C1) opens at", "q < 10", case1_cross, 0, 10,
                 note=f"crossing at q = {decimal_str(case1_cross, 8)}"),
        _below("2*9.2/(9.2-3)", "< 2.97", const_enc(2 * rat("9.2") / (rat("9.2") - 3)), "2.97"),
        _below("(5*C2-(1+5*0.2884)*9.2)/(4.73027116-0.2884*9.2)", "< 2.98",
               const_enc((5 * c2 - (1 + 5 * SLOPE_NEAR) * rat("9.2")) / (rat("4.73027116") - SLOPE_NEAR * rat("9.2"))),
               "2.98"),
        _below("2/(1-2/(1.2884*9.2-C2))", "< 2.98", const_enc(2 / (1 - 2 / (rat("1.2884") * rat("9.2") - c2))), "2.98"),
        _below("2/(1-1/(C2-0.2884*9.22))", "< 2.97", const_enc(2 / (1 - 1 / (c2 - SLOPE_NEAR * rat("9.22")))), "2.97"),
        _below("2/(1+1/(0.2884*9.22-C2))", "< 2.97", const_enc(2 / (1 + 1 / (SLOPE_NEAR * rat("9.22") - c2))), "2.97"),
        _below("2/(0.2834+2*2^(1/4)/sigma)", "< 2.86", 2 / (const_enc("0.2834") + 2 * k), "2.86",
               note="the printed chain step is false; 2.86 would need r > 0.3029"),
        _below("2/(0.2779+2*2^(1/4)/sigma)", "< 2.97", 2 / (const_enc("0.2779") + 2 * k), "2.97"),
        _below("g(5/3) = f(eta'(0.11, 5/3), 5/3)", "<= 2.98", g_end, "2.98", strict=False,
               note=f"eta' in [{decimal_str(eta.lo, 10)}, {decimal_str(eta.hi, 10)}]"),
    ]
    recert = [certify_claim(printed_reading_claim(), budget, eps)]
    return ConstantsReport(checks, recert)


# ---------------------------------------------------------------------------
# volume chain and surfaces


@dataclass
class VolumeReport:
    identities: list
    regimes: list
    breakpoints: list
    eta_endpoint: Enclosure
    g_endpoint: Enclosure
    monotone: volume.MonotoneReport

    @property
    def g_bound_holds(self) -> bool:
        return self.g_endpoint.hi <= rat("2.98")

    @property
    def ok(self) -> bool:
        return (
            all(i.holds for i in self.identities)
            and all(c.certified for _, c in self.regimes)
            and all(v.is_point() and v.lo == exact for _, v, exact in self.breakpoints)
            and self.monotone.ok
            and self.g_bound_holds
        )

    def to_json(self) -> dict:
        return {
            "identities": [i.to_json() for i in self.identities],
            "regimes": [{"name": n, **c.to_json()} for n, c in self.regimes],
            "breakpoints": [
                {"at": n, "value": [fmt(v.lo), fmt(v.hi)], "expected": fmt(e), "exact_match": v.is_point() and v.lo == e}
                for n, v, e in self.breakpoints
            ],
            "eta_prime_endpoint": [fmt(self.eta_endpoint.lo), fmt(self.eta_endpoint.hi)],
            "eta_prime_width": fmt(self.eta_endpoint.width),
            "g_endpoint": [decimal_str(self.g_endpoint.lo, 10), decimal_str(self.g_endpoint.hi, 10)],
            "g_endpoint_le_2.98": self.g_bound_holds,
            "g_increasing": self.monotone.to_json(),
            "ok": self.ok,
        }


def volume_checks(eps=DEFAULT_EPS) -> VolumeReport:
    g, eta = volume.g_value(volume.DEF_HI, volume.S_MAX, eps)
    return VolumeReport(
        volume.lengthdiv_identities(),
        volume.verify_lengthdiv_cases(),
        volume.h_breakpoint_checks(),
        eta,
        g,
        volume.g_increasing_certificate(eps=eps),
    )


@dataclass
class SurfaceReport:
    mld: surfsing.MldReport
    minus_two: surfsing.MinusTwoReport
    single_vertex_equality: bool

    @property
    def ok(self) -> bool:
        return self.mld.ok and self.minus_two.ok and self.single_vertex_equality

    def to_json(self) -> dict:
        return {
            "mld_theorem": self.mld.to_json(),
            "m3_with_minus2_curve": self.minus_two.to_json(),
            "single_vertex_equality": self.single_vertex_equality,
            "ok": self.ok,
        }


def surface_checks(max_vertices: int, max_weight: int) -> SurfaceReport:
    singles = [surfsing.DualGraph((b,)) for b in range(2, max_weight + 1)]
    equality = all(surfsing.mld(g) == Fraction(2, surfsing.multiplicity(g)) for g in singles)
    return SurfaceReport(
        surfsing.verify_mld_theorem(max_vertices, max_weight),
        surfsing.verify_m3_minus2_claim(max_vertices, max_weight),
        equality,
    )


# ---------------------------------------------------------------------------
# the full run


@dataclass
class Report:
    config: Config
    claims: list
    controls: list
    constants: Optional[ConstantsReport] = None
    volume: Optional[VolumeReport] = None
    surfaces: Optional[SurfaceReport] = None
    coverage_problems: list = field(default_factory=list)

    @property
    def failing(self) -> list[str]:
        bad = [r.claim.id for r in self.claims if not r.certificate.certified]
        bad += [r.claim.id for r in self.controls if r.verdict is not Verdict.REFUTED]
        if self.constants is not None and not self.constants.ok:
            bad += [r.claim.id for r in self.constants.recertified if not r.certificate.certified]
        if self.volume is not None and not self.volume.ok:
            bad.append("volume-chain")
        if self.surfaces is not None and not self.surfaces.ok:
            bad.append("surfaces")
        if self.coverage_problems:
            bad.append("coverage")
        return bad

    @property
    def passed(self) -> bool:
        return not self.failing

    def to_json(self) -> dict:
        counts: dict = {}
        for r in self.claims:
            counts[r.verdict.value] = counts.get(r.verdict.value, 0) + 1
        return {
            "toolkit": "certledger",
            "version": __version__,
            "config": self.config.to_json(),
            "summary": {
                "claims": len(self.claims),
                "verdicts": dict(sorted(counts.items())),
                "negative_controls_refuted": sum(r.verdict is Verdict.REFUTED for r in self.controls),
                "negative_controls": len(self.controls),
            },
            "claims": [r.to_json() for r in self.claims],
            "negative_controls": [r.to_json() for r in self.controls],
            "constants": None if self.constants is None else self.constants.to_json(),
            "volume_chain": None if self.volume is None else self.volume.to_json(),
            "surfaces": None if self.surfaces is None else self.surfaces.to_json(),
            "coverage_problems": self.coverage_problems,
            "failing": self.failing,
            "verdict": "pass" if self.passed else "fail",
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), indent=2, sort_keys=True, ensure_ascii=False) + "\n"

    def markdown(self) -> str:
        return render_markdown(self)


def run_all(config: Config = Config()) -> Report:
    claims = L.build_ledger(config.eps)
    controls = L.negative_controls(config.eps)
    if config.claim_ids is not None:
        wanted = set(config.claim_ids)
        known = {c.id for c in claims + controls}
        unknown = wanted - known
        if unknown:
            raise KeyError(f"unknown claim ids: {sorted(unknown)}")
        report = Report(config, _certify_many([c for c in claims if c.id in wanted], config),
                        _certify_many([c for c in controls if c.id in wanted], config))
        return report
    report = Report(config, _certify_many(claims, config), _certify_many(controls, config))
    report.coverage_problems = L.coverage_gaps(claims)
    if config.side_checks:
        report.constants = check_derived_constants(config.budget, config.eps)
        report.volume = volume_checks(config.eps)
        report.surfaces = surface_checks(config.max_vertices, config.max_weight)
    return report


# ---------------------------------------------------------------------------
# Markdown


def _cell(text: str) -> str:
    return str(text).replace("|", "\\|")


def _claim_rows(results) -> list[str]:
    rows = ["| id | claim | verdict | bound | anchor |", "|---|---|---|---|---|"]
    for r in results:
        b = r.certificate.bound
        bound = "" if b is None else f"[{decimal_str(b.lo, 6)}, {decimal_str(b.hi, 6)}]"
        stmt = f"{r.claim.kind} {r.claim.relation} {decimal_str(r.claim.threshold, 6)}"
        rows.append(f"| {r.claim.id} | {_cell(stmt)} | {r.verdict.value} | {bound} | {_cell(r.claim.anchor)} |")
    return rows


def render_markdown(report: Report) -> str:
    out = [f"# Certification report (certledger {__version__})", ""]
    out.append(f"Overall verdict: **{'PASS' if report.passed else 'FAIL'}**")
    if report.failing:
        out.append("")
        out.append("Failing: " + ", ".join(f"`{x}`" for x in report.failing))
    out += ["", "## Claims", ""] + _claim_rows(report.claims)
    out += ["", "## Negative controls (must be refuted)", ""] + _claim_rows(report.controls)
    if report.constants is not None:
        out += ["", "## Printed constants", "", "| check | printed | value | holds | note |", "|---|---|---|---|---|"]
        for c in report.constants.checks:
            out.append(f"| {_cell(c.name)} | {_cell(c.printed)} | {decimal_str(c.value.mid, 10)} | "
                       f"{'yes' if c.holds else '**no**'} | {_cell(c.note)} |")
        out += [""] + _claim_rows(report.constants.recertified)
    if report.volume is not None:
        v = report.volume
        out += ["", "## Volume chain", ""]
        out += [f"- identity `{i.name}`: {'holds' if i.holds else 'FAILS'}" for i in v.identities]
        out += [f"- regime `{n}`: {c.verdict.value}" for n, c in v.regimes]
        out += [f"- h at {n}: {fmt(val.lo)} (expected {fmt(e)})" for n, val, e in v.breakpoints]
        out.append(f"- eta'(0.11, 5/3) in [{decimal_str(v.eta_endpoint.lo, 10)}, {decimal_str(v.eta_endpoint.hi, 10)}]")
        out.append(f"- g(5/3) in [{decimal_str(v.g_endpoint.lo, 8)}, {decimal_str(v.g_endpoint.hi, 8)}]; "
                   f"<= 2.98: {'yes' if v.g_bound_holds else '**no**'}")
        out.append(f"- g increasing on [1.63, 5/3]: {v.monotone.certified}/{v.monotone.pieces} pieces certified")
    if report.surfaces is not None:
        s = report.surfaces
        out += ["", "## Surface singularities", ""]
        out.append(f"- graphs enumerated (<= {s.mld.max_vertices} vertices, weights <= {s.mld.max_weight}): {s.mld.graphs}")
        out.append(f"- violations of mld <= 2/m: {len(s.mld.violations)}; equality cases: {s.mld.equality_cases}")
        out.append(f"- single vertex graphs attain mld = 2/m: {'yes' if s.single_vertex_equality else 'no'}")
        out.append(f"- multiplicity 3 with a (-2)-curve: {s.minus_two.summary}")
        out += ["", "| m | graphs | min mld | max mld |", "|---|---|---|---|"]
        for m in sorted(s.mld.per_multiplicity):
            out.append(f"| {m} | {s.mld.per_multiplicity[m]} | {fmt(s.mld.min_mld[m])} | {fmt(s.mld.max_mld[m])} |")
    if report.coverage_problems:
        out += ["", "## Coverage problems", ""] + [f"- {p}" for p in report.coverage_problems]
    return "\n".join(out) + "\n"


def ledger_markdown(claims=None) -> str:
    """Human-readable transcription of the ledger grouped by case; fails on coverage gaps."""
    claims = claims if claims is not None else L.build_ledger()
    problems = L.coverage_gaps(claims)
    if problems:
        raise AssertionError("coverage gaps:\n" + "\n".join(problems))
    by_id = {c.id: c for c in claims}
    out = ["# Claim ledger", "",
           f"{len(claims)} claims transcribed from {len(L.COVERAGE)} displayed inequalities.", ""]
    section = None
    for d in L.COVERAGE:
        if d.section != section:
            section = d.section
            out += ["", f"## {section}", ""]
        out.append(f"- display `{d.text}`")
        for cid in d.claims:
            c = by_id[cid]
            line = f"  - `{cid}`: {c.kind} of `{c.expr}` {c.relation} {fmt(c.threshold)}"
            if c.note:
                line += f" ({c.note})"
            out.append(line)
    return "\n".join(out) + "\n"

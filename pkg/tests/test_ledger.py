import json
from fractions import Fraction

import pytest

from certledger import cli
from certledger import ledger as L
from certledger import verifier as V
from certledger.certify import Box, Verdict, linear
from certledger.exact import Enclosure, rat
from certledger.expr import Var, evaluate

CLAIMS = L.build_ledger()
FAST = [c for c in CLAIMS if not c.id.startswith("S6.3-g-region")]


def test_ledger_size_and_groups():
    assert len(CLAIMS) >= 40
    assert {c.group for c in CLAIMS} >= set(range(1, 10))


def test_ids_unique_and_anchored():
    ids = [c.id for c in CLAIMS + L.negative_controls()]
    assert len(ids) == len(set(ids))
    assert all(c.anchor for c in CLAIMS)


def test_claim_requires_anchor():
    with pytest.raises(ValueError):
        L.Claim("x", 1, Var("a"), L.POINT, 1)


def test_coverage_manifest_complete():
    assert L.coverage_gaps(CLAIMS) == []


def test_coverage_detects_missing_claim():
    assert any("S6.1-curve" in p for p in L.coverage_gaps(CLAIMS[1:]))


def test_constants_are_exact():
    assert L.C1 == rat("3.23459609")
    assert L.C2 == rat("5.73027116")


def test_curve_claim_bound():
    r = V.certify_claim(L.find_claim("S6.1-curve"))
    assert r.certificate.certified
    assert abs(r.certificate.bound.hi - rat("3.0001")) < Fraction(1, 1000)


def test_case2a_attains_threshold():
    r = V.certify_claim(L.find_claim("S6.2-L61-case2a"))
    assert r.certificate.certified and not r.claim.strict
    assert r.certificate.upper == Fraction(20, 7)


@pytest.mark.parametrize("claim", L.negative_controls(), ids=lambda c: c.id)
def test_negative_controls_refuted(claim):
    assert V.certify_claim(claim).verdict is Verdict.REFUTED


def test_fast_claims_outcomes():
    refuted = {"S6.2-L61-case1a", "S6.2-L61-case1b", "S6.3-g-endpoint"}
    for c in FAST:
        verdict = V.certify_claim(c).verdict
        assert verdict is (Verdict.REFUTED if c.id in refuted else Verdict.CERTIFIED), c.id


def test_printed_chain_step_is_false_but_below_three():
    # r > 0.2834 does not give 2/(r + 2K) < 2.86; the same region stays below 3
    cert = V.certify_claim(L.find_claim("S6.2-L61-case1a")).certificate
    assert cert.verdict is Verdict.REFUTED and cert.witness is not None
    assert V.certify_claim(L.find_claim("S6.2-L61-case1a-lt3")).certificate.certified


def test_uncertain_claim_needs_uniform_violation():
    mu = Var("mu")
    straddle = L.Claim("t", 0, mu, Box.make({"mu": (Fraction(1, 10), Fraction(3, 10))}), Fraction(2, 10),
                       anchor="test", uncertain=True)
    assert V.certify_claim(straddle, budget=50).verdict is Verdict.INCONCLUSIVE
    above = L.Claim("t", 0, mu, Box.make({"mu": (Fraction(3, 10), Fraction(4, 10))}), Fraction(2, 10),
                    anchor="test", uncertain=True)
    assert V.certify_claim(above, budget=50).verdict is Verdict.REFUTED


def test_vacuous_claim_flagged():
    box = Box.make({"a": (0, 1)}, [linear({"a": 1}, ">=", 2)])
    r = V.certify_claim(L.Claim("empty", 0, Var("a"), box, 0, anchor="test"))
    assert r.certificate.certified and r.certificate.vacuous


def test_budget_never_flips_decided_verdicts():
    for cid in ("S6.2-L61-case3a-r", "S6.2-L61-case1a", "S6.2-L61-case4-iv", "NEG-case3a-r-0.2782"):
        claim = L.find_claim(cid)
        decided = {V._run(claim, b, V.DEFAULT_EPS).verdict for b in (1, 10, 100, 1000, 100_000)}
        decided.discard(Verdict.INCONCLUSIVE)
        assert len(decided) == 1, cid


def test_g_region_coupled_and_free():
    coupled = V.certify_claim(L.find_claim("S6.3-g-region"))
    assert coupled.certificate.certified and coupled.certificate.upper <= rat("2.98")
    free = V.certify_claim(L.find_claim("S6.3-g-region-lt3"))
    assert free.certificate.certified and free.certificate.upper < 3


def test_eta_enclosure_is_narrow():
    enc = L.eta_enclosure(rat("0.11"), Fraction(5, 3), Fraction(1, 10**9))
    assert enc.width <= Fraction(1, 10**6)


def test_single_claim_selection():
    report = V.run_all(V.Config(claim_ids=("S6.1-curve",)))
    assert [r.claim.id for r in report.claims] == ["S6.1-curve"]
    assert report.controls == [] and report.passed


def test_unknown_claim_id():
    with pytest.raises(KeyError):
        V.run_all(V.Config(claim_ids=("nope",)))


def test_budget_one_is_inconclusive():
    report = V.run_all(V.Config(budget=1, side_checks=False))
    assert not report.passed
    assert any(r.verdict is Verdict.INCONCLUSIVE for r in report.claims)


def test_constants_report():
    rep = V.check_derived_constants()
    by_name = {c.name: c for c in rep.checks}
    assert by_name["3 + 0.0391 sigma"].holds and by_name["3.9999 + 0.2884 sigma"].holds
    assert "3 + 0.0391 sigma (alternative print)" in rep.flagged
    assert rep.ok  # the claim re-certified under the printed reading


def test_ledger_markdown_lists_every_claim():
    md = V.ledger_markdown(CLAIMS)
    assert all(c.id in md for c in CLAIMS)


def test_cli_single_claim(tmp_path, capsys):
    out = tmp_path / "r.json"
    code = cli.main(["verify", "claim", "S6.1-curve", "--json", str(out), "--md", str(tmp_path / "r.md")])
    assert code == 0
    data = json.loads(out.read_text())
    assert data["verdict"] == "pass" and data["claims"][0]["id"] == "S6.1-curve"
    assert "S6.1-curve" in capsys.readouterr().out


def test_cli_unknown_claim(tmp_path):
    assert cli.main(["verify", "claim", "nope", "--json", str(tmp_path / "x.json")]) == 2


def test_cli_small_commands(tmp_path, capsys):
    assert cli.main(["mu", "--w", "3"]) == 0
    assert cli.main(["alpha", "--d", "3", "--e", "5", "--m", "4"]) == 0
    assert "1" in capsys.readouterr().out
    g = tmp_path / "g.json"
    g.write_text(json.dumps({"weights": [3, 2], "edges": [[1, 2]]}))
    assert cli.main(["mld", "--graph", str(g)]) == 0
    assert "3/5" in capsys.readouterr().out
    assert cli.main(["eta-prime", "--s", "0.11", "--def", "5/3"]) == 0
    md = tmp_path / "ledger.md"
    assert cli.main(["ledger", "--md", str(md)]) == 0
    assert "S6.1-curve" in md.read_text()

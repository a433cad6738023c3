# Standard Library
from fractions import Fraction

# Third-Party Library
import pytest
from hypothesis import given, settings, strategies as st

# My Library
from model.theory import bind_theory, load_catalog
import model.nogo
from model.law import CandidateLaw, TableLaw, carrier, check_beck
from model.nogo import (SCHEMA, CASCADE, WitnessBundle, WitnessSlice, parse_witnesses, axiom_probe, candidate_terms,
                        is_essential, check, check_all, first_nolaw, recheck, render_verdict, derive_annihilation,
                        lemma_filter_check)
from utils.dsl import parse_theory
from utils.errors import PreconditionError, WitnessError
from utils.helper import Bounds
from utils.term import Var, app, const, term_vars
from strategies import derangements


x, y = Var("x"), Var("y")

TRIVIAL = bind_theory(parse_theory("""
theory Trivial {
  op * : 2;
  eq left: *(x,y) = x;
  eq right: *(x,y) = y;
}
"""))

ASSERTED_SEMILATTICE = bind_theory(parse_theory("""
theory AssertedSemilattice {
  op * : 2;
  eq assoc: *(*(x,y),z) = *(x,*(y,z));
  eq comm: *(x,y) = *(y,x);
  eq idem: *(x,x) = x;
  assert variable_faithful;
}
"""))


def test_cascade_covers_every_theorem():
    assert set(CASCADE) == set(SCHEMA)
    assert CASCADE[0] == "TooManyConstants" and CASCADE[-1] == "TimesOverPlusUnique"


@pytest.mark.parametrize("theorem, s_id, t_id", [
    ("LackingAbides", "UA", "UA"),
    ("IdemUnits", "UACI", "UACI"),
    ("TooManyConstants", "UA", "Exception{a,b}"),
    ("PlotkinIdemUnit", "UACI", "UAC"),
    ("Plotkin1", "Convex", "UACI"),
    ("InverseTrouble", "AbelianGroup", "UA"),
])
def test_no_law(theorem, s_id, t_id):
    verdict = check(theorem, load_catalog(s_id), load_catalog(t_id))
    assert verdict.kind == "NoLaw"
    assert verdict.soundness_tier == "sound"
    assert all(o.holds for o in verdict.obligations)
    assert {o.axiom for o in verdict.obligations} == set(SCHEMA[theorem]["S"]) | set(SCHEMA[theorem]["T"])


def test_lacking_abides_records_its_witnesses():
    verdict = check("LackingAbides", load_catalog("UA"), load_catalog("UA"))
    assert [(o.side, o.axiom) for o in verdict.obligations] == [
        ("S", 2), ("S", 19), ("S", 23), ("S", 24), ("T", 2), ("T", 5), ("T", 23), ("T", 24)]
    witnesses = verdict.witnesses.to_json()
    assert witnesses["s_op"] == "*(x,y)" and witnesses["t_op"] == "*(x,y)"
    assert witnesses["e_s"] == "1" and witnesses["e_t"] == "1"
    assert render_verdict(verdict).startswith("LackingAbides on UA∘UA ⇒ UA∘UA: NoLaw [sound]")
    assert recheck(verdict, load_catalog("UA"), load_catalog("UA"))


def test_given_witnesses_are_used():
    w = WitnessBundle(v=app("+", x, y, param=Fraction(1, 2)), p=app("+", x, y))
    verdict = check("Plotkin1", load_catalog("Convex"), load_catalog("UACI"), w)
    assert verdict.kind == "NoLaw"
    assert verdict.witnesses.to_json()["v"] == "+@{1/2}(x,y)"
    with pytest.raises(WitnessError):
        check("Plotkin1", load_catalog("Convex"), load_catalog("UACI"),
              WitnessBundle(v=app("+", x, x, param=Fraction(1, 2))))


@pytest.mark.parametrize("theorem, s_id, t_id, failing", [
    ("Plotkin1", "UACI", "Reader2", 4),
    ("Plotkin1", "UAC", "UACI", 1),
    ("TooManyConstants", "UA", "UA", 21),
    ("IdemUnits", "UA", "UA", 1),
])
def test_not_applicable(theorem, s_id, t_id, failing):
    verdict = check(theorem, load_catalog(s_id), load_catalog(t_id))
    assert verdict.kind == "NotApplicable"
    assert verdict.failed.axiom == failing
    assert verdict.note == f"Ax{failing} fails"


def test_inconsistent_theories_are_not_applicable():
    verdict = check("LackingAbides", TRIVIAL, load_catalog("UA"))
    assert verdict.kind == "NotApplicable"
    assert verdict.note == "Trivial is inconsistent"
    assert verdict.obligations == ()


def test_asserted_metaproperties_lower_the_tier():
    verdict = check("PlotkinIdemUnit", ASSERTED_SEMILATTICE, load_catalog("UAC"))
    assert verdict.kind == "NoLaw"
    assert verdict.soundness_tier == "trusted-assumptions"
    assert any(o.trusted for o in verdict.obligations if o.side == "S")


def test_times_over_plus_unique_candidate():
    verdict = check("TimesOverPlusUnique", load_catalog("UAC"), load_catalog("UAC"))
    assert verdict.kind == "UniqueCandidate"
    assert verdict.beck is not None and verdict.beck.verified


def test_unchecked_candidate_is_not_unique(monkeypatch):
    S, T = load_catalog("UAC"), load_catalog("UAC")

    def empty_report(law, bounds=None):
        return check_beck(CandidateLaw("empty", "table", S, T, table=TableLaw(S, T, carrier(S, T, 2), {})), bounds)

    monkeypatch.setattr(model.nogo, "check_beck", empty_report)
    verdict = check("TimesOverPlusUnique", S, T)
    assert verdict.kind == "Inconclusive"
    assert not verdict.beck.verified
    assert "not fully checked" in verdict.note


@pytest.mark.parametrize("s_id, t_id", [
    ("Reader2", "Reader2"),
    ("Exception{e}", "Exception{e}"),
    ("UAC", "UAC"),
])
def test_no_theorem_fires_on_pairs_with_a_law(s_id, t_id):
    verdicts = check_all(load_catalog(s_id), load_catalog(t_id), stop_at_first=False)
    assert len(verdicts) == len(CASCADE)
    assert first_nolaw(verdicts) is None
    assert all(v.kind in ("NotApplicable", "Inconclusive", "UniqueCandidate") for v in verdicts)


def test_cascade_stops_at_the_first_no_law():
    verdicts = check_all(load_catalog("UA"), load_catalog("UA"), stop_at_first=True)
    assert [v.theorem for v in verdicts] == ["TooManyConstants", "IdemUnits", "LackingAbides"]
    assert first_nolaw(verdicts).theorem == "LackingAbides"
    assert first_nolaw(verdicts[:2]) is None


def test_unknown_theorem():
    with pytest.raises(NotImplementedError):
        check("Beck", load_catalog("UA"), load_catalog("UA"))


def test_abides_probe():
    held = axiom_probe(load_catalog("UA"), 5, WitnessSlice(term=app("*", x, y)))
    assert held.holds and held.resolution == "counterexample-found"
    failed = axiom_probe(load_catalog("UAC"), 5, WitnessSlice(term=app("+", x, y)))
    assert failed.holds is False and failed.resolution == "proved"


def test_unit_probe_completes_the_slice():
    obligation = axiom_probe(load_catalog("UAC"), 2, WitnessSlice(term=app("+", x, y)))
    assert obligation.holds
    assert obligation.witness.constant == "0"
    with pytest.raises(WitnessError):
        axiom_probe(load_catalog("UAC"), 2, WitnessSlice(term=app("+", x, y), constant="1"))


def test_permutation_probe():
    obligation = axiom_probe(load_catalog("UAC"), 12, WitnessSlice(term=app("+", x, y)))
    assert obligation.holds and obligation.witness.sigma == (1, 0)
    assert axiom_probe(load_catalog("UA"), 12, WitnessSlice(term=app("*", x, y))).holds is False


def test_probe_errors():
    with pytest.raises(NotImplementedError):
        axiom_probe(load_catalog("UA"), 99, WitnessSlice(term=x))
    with pytest.raises(WitnessError):
        axiom_probe(load_catalog("UA"), 4, WitnessSlice(term=app("*", x, x)))
    with pytest.raises(WitnessError):
        axiom_probe(load_catalog("UA"), 1)


def test_parse_witnesses():
    bundle = parse_witnesses(load_catalog("UA"), load_catalog("UACI"),
                             ["s_op=*(x,y)", "e_t=0", "sigma=2,1", "f=x:1;y:1", "t_exclude=+"])
    assert bundle.s_op == app("*", x, y)
    assert bundle.e_t == "0"
    assert bundle.sigma == (1, 0)
    assert bundle.f == (("x", const("1")), ("y", const("1")))
    assert bundle.t_exclude == ("+",)


@pytest.mark.parametrize("items", [
    ["e_t=1"],
    ["bogus=x"],
    ["sigma=1,2"],
    ["sigma=a,b"],
    ["f=x"],
    ["s_op"],
])
def test_parse_witnesses_rejects(items):
    with pytest.raises(WitnessError):
        parse_witnesses(load_catalog("UA"), load_catalog("UACI"), items)


def test_candidates_and_essential_terms(bounds):
    group = load_catalog("AbelianGroup")
    assert not is_essential(group, app("+", x, app("-", x)))
    assert is_essential(load_catalog("UA"), app("*", x, y))
    candidates = candidate_terms(load_catalog("UA"), 2, bounds)
    assert candidates[0] == app("*", x, y)
    assert all(set(term_vars(t)) == {"x", "y"} for t in candidates)
    with pytest.raises(PreconditionError):
        candidate_terms(load_catalog("UA"), 0, bounds)


def test_annihilation_facts():
    facts = derive_annihilation(load_catalog("AbelianGroup"), load_catalog("UA"))
    assert sorted(f.to_json()["equation"] for f in facts) == ["+(1,x) = 1", "+(x,1) = 1"]
    assert derive_annihilation(load_catalog("UA"), load_catalog("A")) == ()


def test_filter_lemma_examples():
    assert lemma_filter_check(2, 2, (1, 0), (0, 0))
    assert lemma_filter_check(1, 3, (1, 2, 0), (2,))
    with pytest.raises(PreconditionError):
        lemma_filter_check(2, 2, (0, 1), (0, 0))
    with pytest.raises(PreconditionError):
        lemma_filter_check(0, 2, (1, 0), ())
    with pytest.raises(PreconditionError):
        lemma_filter_check(2, 2, (1, 0), (0, 2))


@settings(max_examples=1000)
@given(sigma=derangements(), data=st.data())
def test_filter_lemma_holds_for_every_derangement(sigma, data):
    m = len(sigma)
    n = data.draw(st.integers(1, 5))
    rows = data.draw(st.lists(st.integers(0, m - 1), min_size=n, max_size=n))
    assert lemma_filter_check(n, m, sigma, rows)

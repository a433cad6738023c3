# Third-Party Library
import pytest

# My Library
from model.theory import load_catalog
from model.free import element, unit
from model.law import (single_binary, times_over_plus_rules, get_law, apply_law, carrier, check_beck,
                       CandidateLaw, TableLaw, render_square, micro_search)
from utils.errors import PreconditionError
from utils.helper import Bounds
from utils.term import Var, OperationSymbol, app, const


x, y, z = Var("x"), Var("y"), Var("z")


def test_single_binary():
    op, constant = single_binary(load_catalog("UAC"))
    assert op == OperationSymbol("+", 2) and constant == const("0")
    assert single_binary(load_catalog("A"))[1] is None
    assert single_binary(load_catalog("Convex")) is None
    assert single_binary(load_catalog("AbelianGroup")) is None


def test_times_over_plus_rule_order():
    rules = times_over_plus_rules(load_catalog("UA"), load_catalog("UAC"))
    assert [rule.name for rule in rules] == ["distR", "distL", "zeroL", "zeroR"]
    assert [rule.name for rule in times_over_plus_rules(load_catalog("A"), load_catalog("AC"))] == ["distR", "distL"]


def test_times_over_plus_distributes():
    S, T = load_catalog("UA"), load_catalog("UAC")
    e = element(S, app("*", Var("[+(x,y)]"), Var("[z]")))
    expected = element(T, app("+", Var("[*(x,z)]"), Var("[*(y,z)]")))
    assert apply_law(get_law("times-over-plus", S, T), e) == expected
    assert get_law("times-over-plus-rules", S, T)(e) == expected


def test_times_over_plus_annihilates():
    S, T = load_catalog("UA"), load_catalog("UAC")
    e = element(S, app("*", Var("[0]"), Var("[x]")))
    assert get_law("times-over-plus", S, T)(e) == element(T, const("0"))


def test_exception_sweep_values():
    S, T = load_catalog("Exception{e}"), load_catalog("UAC")
    law = get_law("exception-sweep", S, T)
    assert law(element(S, const("e"))) == unit(T, element(S, const("e")))
    assert law(element(S, Var("[+(x,y)]"))) == element(T, app("+", Var("[x]"), Var("[y]")))


@pytest.mark.parametrize("name, s_id, t_id", [
    ("times-over-plus", "Convex", "UACI"),
    ("times-over-plus", "AbelianGroup", "UA"),
    ("exception-sweep", "UA", "UAC"),
    ("manes-mulry-faulty", "UAC", "Exception{a,b}"),
])
def test_law_preconditions(name, s_id, t_id):
    with pytest.raises(PreconditionError):
        get_law(name, load_catalog(s_id), load_catalog(t_id))


def test_unknown_and_generic_laws():
    with pytest.raises(NotImplementedError):
        get_law("swap", load_catalog("UA"), load_catalog("UAC"))
    with pytest.raises(PreconditionError):
        get_law("times-over-plus", load_catalog("UA").generic(), load_catalog("UAC"))


def test_carrier_avoids_symbols():
    assert carrier(load_catalog("UA"), load_catalog("Exception{a,b}"), 2) == ("c", "d")
    assert carrier(load_catalog("UA"), load_catalog("UAC"), 3) == ("a", "b", "c")


@pytest.mark.parametrize("law_name, s_id, t_id", [
    ("times-over-plus", "UAC", "UAC"),
    ("times-over-plus", "UA", "UAC"),
    ("exception-sweep", "Exception{e}", "UAC"),
])
def test_beck_axioms_hold(law_name, s_id, t_id):
    law = get_law(law_name, load_catalog(s_id), load_catalog(t_id))
    report = check_beck(law)
    assert report.passed and report.complete
    assert report.first_failure is None
    assert all(outcome.checked > 0 for outcome in report.outcomes)
    assert render_square(report).endswith("all squares commute")
    assert report.to_json()["passed"]
    assert report.verified


def test_undefined_law_is_never_verified():
    S, T = load_catalog("UA"), load_catalog("UAC")
    empty = CandidateLaw("empty", "table", S, T, table=TableLaw(S, T, carrier(S, T, 2), {}))
    report = check_beck(empty)
    assert report.first_failure is None
    assert not report.passed and not report.complete and not report.verified
    assert all(o.checked == 0 and o.skipped > 0 for o in report.outcomes)
    assert {o.status for o in report.outcomes} == {"unchecked"}
    assert report.to_json()["axioms"]["unit1"]["status"] == "unchecked"
    assert "unchecked" in render_square(report)


def test_beck_axioms_fail_for_lists_over_lists():
    S = load_catalog("UA")
    report = check_beck(get_law("times-over-plus", S, S))
    assert not report.passed
    failure = report.first_failure
    assert report.outcome(failure.axiom).failure == failure
    assert failure.path_a != failure.path_b
    square = render_square(report)
    assert square.startswith(f"{failure.axiom} fails for times-over-plus on UA∘UA")
    assert failure.instance in square
    assert report.to_json()["axioms"][failure.axiom]["status"] == "fail"


def test_micro_search_bounds():
    S, T = load_catalog("UA"), load_catalog("UAC")
    with pytest.raises(PreconditionError):
        micro_search(S, T, Bounds(max_carrier=3))
    with pytest.raises(PreconditionError):
        micro_search(S, T, Bounds(max_leaves=3))
    search = micro_search(S, T, Bounds(max_carrier=1, max_leaves=1))
    assert search.status != "aborted"
    assert search.to_json()["direction"] == "UA∘UAC ⇒ UAC∘UA"

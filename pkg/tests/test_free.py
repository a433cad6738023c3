# Standard Library
from fractions import Fraction

# Third-Party Library
import pytest

# My Library
from model.theory import load_catalog
from model.free import (FreeAlgebra, SeparatedTerm, RewriteRule, element, unbox, unit, mult, fmap, lift,
                        enumerate_elements, check_monad_laws, mixed_signature, separate, equal_modulo,
                        rewrite_innermost)
from model.law import times_over_plus_rules
from utils.errors import DomainError, PreconditionError, ResourceError, UnsupportedOperationError
from utils.helper import Bounds
from utils.term import Var, app, const, term_vars


x, y, z = Var("x"), Var("y"), Var("z")


def test_unit_and_mult():
    ua = load_catalog("UA")
    assert unit(ua, "x") == element(ua, x)
    nested = element(ua, app("*", Var("[*(x,y)]"), Var("[z]")))
    assert mult(ua, nested) == element(ua, app("*", x, app("*", y, z)))
    assert mult(ua, unit(ua, element(ua, app("*", x, y)))) == element(ua, app("*", x, y))


def test_unbox():
    uac = load_catalog("UAC")
    assert unbox(uac, "[+(y,x)]") == element(uac, app("+", x, y))
    with pytest.raises(DomainError):
        unbox(uac, "x")


def test_fmap_renames_then_renormalizes():
    uaci = load_catalog("UACI")
    e = element(uaci, app("+", x, y))
    assert fmap(uaci, {"x": "y", "y": "y"}, e) == element(uaci, y)
    assert set(fmap(uaci, str.upper, e).generators) == {"X", "Y"}
    with pytest.raises(DomainError):
        fmap(uaci, {"x": "z"}, e)
    boxed = lift(uaci, {"x": "y", "y": "y"})("[+(x,y)]")
    assert boxed == "[y]"


@pytest.mark.parametrize("catalog_id, generators, count", [
    ("UA", ("x",), 3),
    ("UAC", ("x", "y"), 6),
    ("UACI", ("x", "y"), 4),
    ("Exception{a,b}", ("x",), 3),
])
def test_enumeration_counts(catalog_id, generators, count):
    elements = enumerate_elements(load_catalog(catalog_id), generators, 2)
    assert len(elements) == count
    assert len(set(elements)) == count


def test_enumeration_preconditions():
    ua = load_catalog("UA")
    with pytest.raises(PreconditionError):
        enumerate_elements(ua, ["1"])
    with pytest.raises(ResourceError):
        enumerate_elements(ua, ["x", "y", "z"], 3, Bounds(enumeration_cap=10))
    assert len(enumerate_elements(ua, ["x", "y", "z"], 3, Bounds(enumeration_cap=10), strict=False)) == 10
    with pytest.raises(UnsupportedOperationError):
        enumerate_elements(load_catalog("Reader2").generic(), ["x"])


def test_free_algebra_container():
    algebra = FreeAlgebra(load_catalog("UAC"), ("x", "y"))
    assert len(algebra) == 6
    assert element(algebra.theory, app("+", y, x)) in algebra
    assert algebra.unit("x") == element(algebra.theory, x)
    with pytest.raises(DomainError):
        algebra.unit("z")


@pytest.mark.parametrize("catalog_id", ["UA", "UAC", "UACI", "Exception{a,b}"])
def test_monad_laws_hold(catalog_id):
    report = check_monad_laws(load_catalog(catalog_id), ["x"])
    assert report.passed and report.complete
    assert report.checked["assoc"] > 0


def test_monad_laws_catch_a_broken_multiplication():
    ua = load_catalog("UA")
    report = check_monad_laws(ua, ["x"], mult_fn=lambda th, e: element(th, e.term))
    assert not report.passed
    assert report.failure.law == "unit1"
    assert report.to_json()["failure"]["law"] == "unit1"


def test_mixed_signatures_prime_clashing_symbols():
    assert not mixed_signature(load_catalog("UA"), load_catalog("UAC")).primed
    mixed = mixed_signature(load_catalog("UAC"), load_catalog("UAC"))
    assert mixed.primed
    assert mixed.t_name("+") == "+'"
    assert mixed.to_t(mixed.from_t(app("+", x, const("0")))) == app("+", x, const("0"))


def test_separation_distributes_and_groups_members():
    S, T = load_catalog("UA"), load_catalog("UAC")
    rules = times_over_plus_rules(S, T)
    result = separate(S, T, rules, app("*", app("+", x, y), z))
    assert set(result.family_map.values()) == {app("*", x, z), app("*", y, z)}
    assert set(term_vars(result.outer)) == set(result.family_map)

    shared = separate(S, T, rules, app("*", app("+", app("*", x, const("1")), x), const("1")))
    assert shared.family_map == {"[x]": x}

    annihilated = separate(S, T, rules, app("*", const("0"), x))
    assert annihilated.outer == const("0") and annihilated.family == ()


def test_separated_terms_need_total_families():
    with pytest.raises(DomainError):
        SeparatedTerm(app("+", Var("[x]"), Var("[y]")), (("[x]", x),))


def test_rewriting_skips_rules_whose_parameter_leaves_the_range():
    a, b = Var("a"), Var("b")
    double = RewriteRule("double", app("+", x, y, param="p"), app("+", y, x, param="2*p"))
    stuck = app("+", a, b, param=Fraction(1, 2))
    assert rewrite_innermost(stuck, [double], 10) == (stuck, 0)
    assert rewrite_innermost(app("+", a, b, param=Fraction(1, 4)), [double], 10) == (
        app("+", b, a, param=Fraction(1, 2)), 1)


def test_equality_modulo():
    S, T = load_catalog("UA"), load_catalog("UAC")
    rules = times_over_plus_rules(S, T)
    u = separate(S, T, rules, app("*", app("+", x, y), z))
    v = separate(S, T, rules, app("+", app("*", y, z), app("*", x, z)))
    result = equal_modulo(S, T, u, v)
    assert result.equal
    assert len(result.classes) == 2

    w = separate(S, T, rules, app("+", app("*", x, z), app("*", x, z)))
    assert equal_modulo(S, T, u, w).status == "Distinct"

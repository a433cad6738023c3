# Standard Library
from fractions import Fraction

# Third-Party Library
import pytest
from hypothesis import given, strategies as st

# My Library
from model.oracles import get_oracle
from model.oracles.boom import band_key, band_word
from model.theory import load_catalog
from utils.dsl import parse_term, parse_theory
from utils.errors import DomainError
from utils.term import Var, term_vars
from strategies import terms


def same(catalog_id: str, lhs: str, rhs: str) -> bool:
    th = load_catalog(catalog_id)
    return th.oracle.equal(parse_term(lhs, th.signature), parse_term(rhs, th.signature))


@pytest.mark.parametrize("catalog_id, lhs, rhs", [
    ("UA", "*(*(x,1),y)", "*(x,y)"),
    ("UAC", "+(y,+(x,0))", "+(x,y)"),
    ("UACI", "+(x,+(y,x))", "+(y,x)"),
    ("UAI", "*(*(x,y),*(x,y))", "*(x,y)"),
    ("UC", "+(y,x)", "+(x,y)"),
    ("UI", "*(x,x)", "x"),
    ("AbelianGroup", "+(x,-(x))", "0"),
    ("AbelianGroup", "-(+(x,y))", "+(-(y),-(x))"),
    ("Ring", "*(+(x,y),z)", "+(*(x,z),*(y,z))"),
    ("Ring", "*(x,-(y))", "-(*(x,y))"),
    ("Convex", "+@{1/2}(x,y)", "+@{1/2}(y,x)"),
    ("Convex", "+@{1/2}(x,+@{1/2}(y,z))", "+@{3/4}(+@{2/3}(x,y),z)"),
    ("Reader2", "*(*(w,x),*(y,z))", "*(w,z)"),
    ("BoundedLattice", "∨(x,∧(x,y))", "x"),
    ("BoundedLattice", "∨(x,⊤)", "⊤"),
    ("MT", "*(x,+(y,z))", "+(*(x,y),*(x,z))"),
    ("ML", "*(0,x)", "0"),
    ("PM", "+(*(x,y),*(y,x))", "*(x,y)"),
])
def test_provable_equalities(catalog_id, lhs, rhs):
    assert same(catalog_id, lhs, rhs)


@pytest.mark.parametrize("catalog_id, lhs, rhs", [
    ("U", "*(x,*(y,z))", "*(*(x,y),z)"),
    ("UA", "*(x,y)", "*(y,x)"),
    ("UAC", "+(x,x)", "x"),
    ("UAI", "*(*(x,y),x)", "*(x,y)"),
    ("Ring", "*(x,y)", "*(y,x)"),
    ("Convex", "+@{1/3}(x,y)", "+@{1/2}(x,y)"),
    ("Reader2", "*(x,y)", "*(y,x)"),
    ("BoundedLattice", "∧(x,∨(y,z))", "∨(∧(x,y),∧(x,z))"),
    ("MT", "*(x,*(y,z))", "*(*(x,y),z)"),
    ("MM", "+(x,x)", "x"),
    ("Exception{a,b}", "a", "b"),
])
def test_distinct_terms(catalog_id, lhs, rhs):
    assert not same(catalog_id, lhs, rhs)


def test_free_band_words():
    assert band_key(("x", "y", "x", "y")) == band_key(("x", "y"))
    assert band_key(("x", "y", "x")) != band_key(("x", "y"))
    word = ("x", "y", "z", "x", "y", "z")
    assert band_key(band_word(band_key(word))) == band_key(word)
    assert band_key(()) == ()


def test_normal_forms_can_lose_variables():
    th = load_catalog("AbelianGroup")
    assert th.oracle.free_vars(parse_term("+(x,-(x))", th.signature)) == ()
    assert not th.oracle.variable_faithful
    assert load_catalog("UACI").oracle.variable_faithful


def test_convex_weights_are_exact():
    th = load_catalog("Convex")
    t = parse_term("+@{1/3}(x,+@{1/2}(y,x))", th.signature)
    assert th.oracle.weights(t) == {"x": Fraction(2, 3), "y": Fraction(1, 3)}


def test_closed_convex_drops_zero_weights():
    th = load_catalog("ConvexClosed")
    assert th.oracle.normalize(parse_term("+@{1}(x,y)", th.signature)) == Var("x")
    with pytest.raises(DomainError):
        load_catalog("Convex").oracle.canonical(parse_term("+@{1}(x,y)", th.signature))


def test_audit_rejects_a_wrong_binding():
    presentation = parse_theory("theory Bad { op * : 2; const 1; eq comm: *(x,y) = *(y,x); oracle builtin UA; }")
    with pytest.raises(DomainError, match="comm"):
        get_oracle(presentation.backend, presentation)


def test_binding_checks_the_signature():
    presentation = parse_theory("theory Bad { op * : 2; op + : 2; oracle builtin UAC; }")
    with pytest.raises(DomainError):
        get_oracle(presentation.backend, presentation)
    with pytest.raises(NotImplementedError):
        get_oracle("Heyting", presentation)


def test_closed_normal_forms():
    assert len(load_catalog("AbelianGroup").oracle.closed_normal_forms()) == 1
    assert len(load_catalog("Exception{a,b}").oracle.closed_normal_forms()) == 2
    assert len(load_catalog("MT").oracle.closed_normal_forms()) == 2


UNIQUE_FORMS = ["U", "UC", "UCI", "UA", "UAI", "UAC", "UACI", "AbelianGroup", "Ring", "Convex", "Reader2", "MT",
                "PL", "MM", "Exception{a,b}"]


@given(st.sampled_from(UNIQUE_FORMS).flatmap(lambda i: st.tuples(st.just(i), terms(load_catalog(i).signature))))
def test_normal_forms_are_fixed_points(case):
    catalog_id, t = case
    oracle = load_catalog(catalog_id).oracle
    normal = oracle.normalize(t)
    assert oracle.canonical(normal) == oracle.canonical(t)
    assert set(term_vars(normal)) <= set(term_vars(t))

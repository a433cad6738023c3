# Standard Library
from fractions import Fraction

# Third-Party Library
import pytest
from hypothesis import given

# My Library
from model.theory import load_catalog
from utils.dsl import parse_term
from utils.errors import MalformedTermError
from utils.term import (Var, App, OperationSymbol, Signature, app, const, check, validate, term_vars, substitute,
                        compose, rename, size, leaves, layers, positions, subterm, replace_at, term_key, sort_terms,
                        render, evaluate_param, parse_param, match, instantiate)
from strategies import terms


x, y, z = Var("x"), Var("y"), Var("z")

SIG = Signature((("+", 2), ("-", 1), ("0", 0), ("*", 2)), (("+", 2),))


def test_arity_is_checked_on_construction():
    with pytest.raises(MalformedTermError):
        App(OperationSymbol("+", 2), (x,))


def test_render_is_prefix_without_spaces():
    t = app("+", x, app("*", y, const("0")))
    assert render(t) == "+(x,*(y,0))"
    assert render(app("+", x, y, param=Fraction(1, 2))) == "+@{1/2}(x,y)"
    assert OperationSymbol("+", 2, Fraction(2, 3)).label == "+@{2/3}"


def test_measures():
    t = app("+", x, app("*", y, const("0")))
    assert size(t) == 5
    assert leaves(t) == 3
    assert layers(t) == 2
    assert layers(const("0")) == 0


def test_variables_in_order_of_first_occurrence():
    assert term_vars(app("+", y, app("+", x, y))) == ("y", "x")
    assert term_vars(const("0")) == ()


def test_positions_and_replacement():
    t = app("+", x, app("-", y))
    assert [path for path, _ in positions(t)] == [(), (0,), (1,), (1, 0)]
    assert subterm(t, (1, 0)) == y
    assert replace_at(t, (1, 0), const("0")) == app("+", x, app("-", const("0")))
    assert replace_at(t, (), z) == z


def test_substitution_and_renaming():
    t = app("+", x, y)
    assert substitute(t, {"x": app("-", y)}) == app("+", app("-", y), y)
    assert rename(t, {"x": "y", "y": "x"}) == app("+", y, x)
    assert substitute(t, {}) is t
    assert compose({"x": y}, {"y": z}) == {"x": z, "y": z}


def test_validate_reports_the_offending_path():
    sig = Signature((("+", 2),))
    diagnostic = validate(app("+", x, app("*", x, y)), sig)
    assert diagnostic is not None and diagnostic.path == (1,)
    assert validate(app("+", x, y), sig) is None
    with pytest.raises(MalformedTermError, match="arity mismatch"):
        check(app("+", x, y, z), sig)


def test_term_order_puts_variables_first():
    assert sort_terms([const("0"), y, x]) == [x, y, const("0")]
    assert term_key(x) < term_key(const("a"))


def test_parameter_expressions_are_exact():
    env = {"p": Fraction(1, 2), "r": Fraction(1, 2)}
    assert evaluate_param("1-p", env) == Fraction(1, 2)
    assert evaluate_param("p+(1-p)*r", env) == Fraction(3, 4)
    assert evaluate_param("p/(p+(1-p)*r)", env) == Fraction(2, 3)
    assert evaluate_param("q", env) is None
    assert evaluate_param("p/(p-p)", env) is None
    assert parse_param("1/3") == Fraction(1, 3)
    with pytest.raises(MalformedTermError):
        parse_param("p^2")


def test_match_binds_variables_and_parameters():
    pattern = app("+", x, y, param="p")
    found = match(pattern, app("+", Var("a"), Var("b"), param=Fraction(1, 3)))
    assert found == ({"x": Var("a"), "y": Var("b")}, {"p": Fraction(1, 3)})
    assert match(app("+", x, x), app("+", Var("a"), Var("b"))) is None


def test_match_checks_compound_parameters_once_bound():
    pattern = app("+", x, app("+", y, z, param="p"), param="1-p")
    a, b, c = Var("a"), Var("b"), Var("c")
    inner = app("+", b, c, param=Fraction(1, 3))
    assert match(pattern, app("+", a, inner, param=Fraction(2, 3))) is not None
    assert match(pattern, app("+", a, inner, param=Fraction(1, 2))) is None


def test_instantiate_drops_out_of_range_parameters():
    pattern = app("+", x, y, param="1-p")
    assert instantiate(pattern, {}, {"p": Fraction(1, 4)}) == app("+", x, y, param=Fraction(3, 4))
    assert instantiate(pattern, {}, {"p": Fraction(1)}) is None
    assert instantiate(pattern, {}, {"p": Fraction(1)}, closed=True) == app("+", x, y, param=Fraction(0))
    assert instantiate(pattern, {}, {}) is None


@given(terms(SIG))
def test_rendered_terms_parse_back(t):
    assert parse_term(render(t), SIG) == t


@given(terms(load_catalog("Ring").signature))
def test_renaming_twice_is_identity(t):
    swap = {"x": "y", "y": "x"}
    assert rename(rename(t, swap), swap) == t
    assert set(term_vars(rename(t, swap))) == {swap.get(v, v) for v in term_vars(t)}

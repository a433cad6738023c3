# Standard Library
import json
from fractions import Fraction

# Third-Party Library
import pytest

# My Library
from model.theory import load_catalog, build_catalog, resolve_theory, catalog_text
from utils.dsl import parse_term, parse_theory, render_theory, parse_symbol_label
from utils.errors import ParseError, PreconditionError
from utils.term import Var, app, const


x, y, z = Var("x"), Var("y"), Var("z")

SEMILATTICE = """
# a generic presentation, decided by proof and model search
theory Semilattice {
  op * : 2;   # the only operation
  eq assoc: (x * y) * z = x * (y * z);
  eq comm: x * y = y * x;
  eq idem: x * x = x;
  oracle generic;
  assert variable_faithful;
}
"""


def test_infix_precedence_and_associativity():
    sig = load_catalog("Ring").signature
    assert parse_term("x + y * z", sig) == app("+", x, app("*", y, z))
    assert parse_term("x + y + z", sig) == app("+", app("+", x, y), z)
    assert parse_term("-x + y", sig) == app("+", app("-", x), y)
    assert parse_term("(x + y) * 1", sig) == app("*", app("+", x, y), const("1"))


def test_declared_names_are_constants_and_boxes_are_variables():
    sig = load_catalog("UA").signature
    assert parse_term("*(1,x)", sig) == app("*", const("1"), x)
    assert parse_term("*([+(a,b)],x)", sig) == app("*", Var("[+(a,b)]"), x)


def test_family_instances_carry_their_parameter():
    sig = load_catalog("Convex").signature
    assert parse_term("+@{1/2}(x,y)", sig) == app("+", x, y, param=Fraction(1, 2))
    assert parse_symbol_label("+@{1/3}") == ("+", Fraction(1, 3))
    assert parse_symbol_label("*") == ("*", None)


@pytest.mark.parametrize("text", ["", "+(x)", "x +", "x $ y", "*(x,y", "[x"])
def test_malformed_terms_are_parse_errors(text):
    with pytest.raises(ParseError):
        parse_term(text, load_catalog("UAC").signature)


def test_generic_presentation():
    presentation = parse_theory(SEMILATTICE)
    assert presentation.name == "Semilattice"
    assert presentation.backend == "generic"
    assert presentation.asserts == ("variable_faithful",)
    assert presentation.equation("assoc").lhs == app("*", app("*", x, y), z)
    assert [eq.name for eq in presentation.equations] == ["assoc", "comm", "idem"]


def test_parse_errors_point_at_the_line():
    text = "theory Bad {\n  op * : 2;\n  eq e: *(x) = x;\n}\n"
    with pytest.raises(ParseError) as info:
        parse_theory(text)
    assert info.value.line == 3


@pytest.mark.parametrize("body", [
    "op * : 2; op * : 2;",
    "op * : 2; eq a: x = x; eq a: x = x;",
    "op * : 2; assert commutative;",
    "op * : 2; frobnicate x;",
    "op * : 2; exclude_ops +;",
    "op * : 2; oracle builtin;",
    "op * : 2",
])
def test_rejected_presentations(body):
    with pytest.raises(ParseError):
        parse_theory(f"theory Bad {{ {body} }}")


def test_missing_header_is_rejected():
    with pytest.raises(ParseError):
        parse_theory("op * : 2;")


@pytest.mark.parametrize("catalog_id", ["UA", "Convex", "ConvexClosed", "Ring", "PM", "Exception{a,b}"])
def test_rendered_presentations_parse_back(catalog_id):
    presentation = parse_theory(catalog_text(catalog_id))
    assert parse_theory(render_theory(presentation)) == presentation


def test_json_rendering():
    data = json.loads(render_theory(parse_theory(catalog_text("ConvexClosed")), "json"))
    assert data["name"] == "ConvexClosed"
    assert data["families"] == [{"name": "+", "arity": 2}]
    assert data["exclude_ops"] == ["+@{0}", "+@{1}"]
    assert data["oracle"] == "ConvexClosed"
    with pytest.raises(NotImplementedError):
        render_theory(parse_theory(SEMILATTICE), "yaml")


def test_catalog_symbols():
    assert load_catalog("UA").signature.ops == (("*", 2), ("1", 0))
    assert load_catalog("UACI").signature.ops == (("+", 2), ("0", 0))
    assert load_catalog("A").signature.constants == ()
    assert load_catalog("Exception{b,a}").signature.constants == ("a", "b")
    assert load_catalog("Maybe").signature.constants == ("nothing",)
    assert load_catalog("MT").signature.constants == ("0", "1")


def test_catalog_rejects_unknown_ids():
    with pytest.raises(NotImplementedError):
        load_catalog("Semiring")
    with pytest.raises(PreconditionError):
        load_catalog("Exception{}")


def test_build_catalog_binds_every_theory():
    catalog = build_catalog()
    assert len(catalog) == 29
    assert all(theory.oracle is not None for theory in catalog.values())
    assert catalog["Ring"].oracle.backend == "Ring"


def test_resolve_theory_reads_files(tmp_path):
    path = tmp_path / "semilattice.thy"
    path.write_text(SEMILATTICE, encoding="utf-8")
    theory = resolve_theory(str(path))
    assert theory.name == "Semilattice"
    assert not theory.decidable
    assert resolve_theory("UAC") is load_catalog("UAC")

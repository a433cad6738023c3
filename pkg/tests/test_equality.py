# Standard Library
from typing import get_args

# Third-Party Library
import pytest
import numpy as np

# My Library
from model.theory import CATALOG_EXTRAS, bind_theory, load_catalog
from model.equality import (FiniteModel, decide_equal, bounded_prove, replay_proof, find_countermodel,
                            certify_meta, consistency, cross_validate, normalize, reducing_evidence)
from utils.dsl import parse_term, parse_theory
from utils.errors import DomainError, MalformedTermError, UnsupportedOperationError
from utils.annotation import BoomId, CompositeId
from utils.helper import Bounds
from utils.term import Var, Equation, OperationSymbol, app, const


x, y, z, w = (Var(name) for name in "xyzw")

SEMILATTICE = bind_theory(parse_theory("""
theory Semilattice {
  op * : 2;
  eq assoc: *(*(x,y),z) = *(x,*(y,z));
  eq comm: *(x,y) = *(y,x);
  eq idem: *(x,x) = x;
  assert variable_faithful;
}
"""))

TRIVIAL = bind_theory(parse_theory("""
theory Trivial {
  op * : 2;
  eq left: *(x,y) = x;
  eq right: *(x,y) = y;
}
"""))


def test_oracle_verdicts_carry_canonical_forms():
    th = load_catalog("UA")
    verdict = decide_equal(th, app("*", app("*", x, const("1")), y), app("*", x, y))
    assert verdict.equal and verdict.evidence == "canonical-form"
    assert [str(form) for form in verdict.forms] == ["*(x,y)", "*(x,y)"]
    assert verdict.to_json()["canonical"] == ["*(x,y)", "*(x,y)"]


def test_abides_fails_on_four_distinct_variables():
    th = load_catalog("UA")
    verdict = decide_equal(th, app("*", app("*", x, y), app("*", z, w)), app("*", app("*", x, z), app("*", y, w)))
    assert verdict.distinct


def test_generic_equal_by_proof():
    verdict = decide_equal(SEMILATTICE, app("*", x, y), app("*", y, x))
    assert verdict.equal and verdict.evidence == "proof"
    assert [step.axiom for step in verdict.proof] == ["comm"]
    assert replay_proof(SEMILATTICE, app("*", x, y), verdict.proof) == app("*", y, x)


def test_generic_distinct_by_countermodel():
    verdict = decide_equal(SEMILATTICE, app("*", x, y), x)
    assert verdict.distinct and verdict.evidence == "countermodel"
    model = verdict.model
    assert model.size == 2
    assert model.evaluate(app("*", x, y)) != model.evaluate(x)


def test_generic_unknown_when_the_budget_is_too_small():
    verdict = decide_equal(SEMILATTICE, app("*", x, app("*", y, x)), app("*", x, y), Bounds(proof_max_size=4))
    assert verdict.status == "Unknown"
    assert not verdict.decisive
    assert verdict.evidence == "budget"


def test_proof_of_a_multi_step_equality_replays():
    t1, t2 = app("*", x, app("*", y, x)), app("*", x, y)
    verdict = bounded_prove(SEMILATTICE, t1, t2)
    assert verdict.equal
    assert replay_proof(SEMILATTICE, t1, verdict.proof) == t2


def test_extra_facts_are_axioms_for_one_query():
    th = load_catalog("AbelianGroup")
    one = const("1")
    fact = Equation("absorb", app("+", x, one), one)
    verdict = bounded_prove(th, app("+", y, one), one, facts=[fact])
    assert verdict.equal
    assert replay_proof(th, app("+", y, one), verdict.proof, [fact]) == one
    with pytest.raises(DomainError):
        replay_proof(th, app("+", y, one), verdict.proof)
    assert not bounded_prove(th, app("+", y, one), one, max_states=200).equal


def test_tampered_proofs_do_not_replay():
    verdict = bounded_prove(SEMILATTICE, app("*", x, y), app("*", y, x))
    with pytest.raises(DomainError):
        replay_proof(SEMILATTICE, app("*", y, y), verdict.proof)


def test_countermodels_respect_the_theory():
    reader = load_catalog("Reader2").generic()
    model = find_countermodel(reader, app("*", x, y), app("*", y, x))
    assert model is not None
    assert model.evaluate(app("*", x, y)) != model.evaluate(app("*", y, x))
    assert find_countermodel(reader, app("*", x, x), x) is None


def test_finite_models_are_validated():
    sig = SEMILATTICE.signature
    with pytest.raises(DomainError):
        FiniteModel(sig, SEMILATTICE.equations, 2, {"*": np.array([[0, 1], [0, 1]])})
    with pytest.raises(DomainError):
        FiniteModel(sig, SEMILATTICE.equations, 2, {"*": np.zeros((3, 3), dtype=int)})
    model = FiniteModel(sig, SEMILATTICE.equations, 2, {"*": np.array([[0, 0], [0, 1]])}, {"x": 0, "y": 1})
    assert model.evaluate(app("*", x, y)) == 0


def test_generic_theories_have_no_normal_forms():
    with pytest.raises(UnsupportedOperationError):
        normalize(SEMILATTICE, x)
    with pytest.raises(MalformedTermError):
        decide_equal(load_catalog("UA"), app("+", x, y), x)


def test_consistency():
    assert consistency(load_catalog("UA")).distinct
    assert consistency(TRIVIAL).equal


def test_certificates_of_builtin_theories():
    ua = certify_meta(load_catalog("UA"))
    assert ua.variable_faithful and ua.all_ops_unital_or_idempotent and ua.linear_presentation
    assert ua.constants_distinct and ua.closed_terms_are_constants
    assert ua.operation_evidence == {"*": "unit 1"}
    assert not ua.trusted

    group = certify_meta(load_catalog("AbelianGroup"))
    assert not group.variable_faithful
    assert group.operation_evidence == {"+": "unit 0", "-": "none"}
    assert not group.all_ops_unital_or_idempotent

    assert not certify_meta(load_catalog("Reader2")).linear_presentation
    assert certify_meta(load_catalog("Convex")).all_ops_unital_or_idempotent


def test_certificates_of_generic_theories_are_asserted():
    cert = SEMILATTICE.certificate
    assert cert.variable_faithful
    assert cert.provenance == {"variable_faithful": "user-asserted"}
    assert cert.trusted
    assert not cert.all_ops_unital_or_idempotent


def test_reducing_evidence():
    assert reducing_evidence(load_catalog("UACI"), OperationSymbol("+", 2)) == "idempotent"
    assert reducing_evidence(load_catalog("UAC"), OperationSymbol("+", 2)) == "unit 0"
    assert reducing_evidence(load_catalog("A"), OperationSymbol("*", 2)) is None


@pytest.mark.parametrize("catalog_id", ["UA", "UACI", "AbelianGroup"])
def test_generic_backend_agrees_with_the_oracle(catalog_id):
    report = cross_validate(load_catalog(catalog_id), n_pairs=20, seed=0)
    assert report.pairs == 20
    assert report.agreement_rate == 1.0
    assert report.to_json()["disagreements"] == []


CATALOG_IDS = list(get_args(BoomId)) + list(get_args(CompositeId)) + list(CATALOG_EXTRAS)


@pytest.mark.slow
@pytest.mark.parametrize("catalog_id", CATALOG_IDS)
def test_generic_backend_agrees_on_the_whole_catalog(catalog_id):
    report = cross_validate(load_catalog(catalog_id), n_pairs=1000, seed=1, max_size=6, n_vars=4)
    data = report.to_json()
    assert report.pairs == 1000
    assert report.disagreements == ()
    assert report.agreement_rate == 1.0
    assert 0.0 <= data["decisiveness_rate"] <= 1.0
    assert data["decisiveness_rate"] == report.decisive / 1000

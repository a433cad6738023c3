"""
Equality engine: exact decisions for catalog theories, three-valued decisions for user theories.

Catalog theories compare canonical values computed by their oracle. User theories (the generic backend) first look
for a small countermodel, then run a bounded bidirectional proof search, then look for a larger countermodel.
Equal and Distinct answers are always sound; Unknown reports the exhausted budget.
"""
# Standard Library
import itertools
from collections import deque
from fractions import Fraction
from functools import lru_cache
from dataclasses import dataclass, field
from typing import Hashable, Iterator, Optional, Sequence

# Third-Party Library
import numpy as np
from loguru import logger

# My Library
from utils.helper import Bounds
from utils.annotation import EqStatus, Direction, MetaProperty, Provenance, JsonDict
from utils.errors import UnsupportedOperationError, DomainError
from utils.dsl import VOCABULARY
from utils.term import (Term, Var, App, OperationSymbol, Equation, Signature,
                        check, term_vars, size, positions, replace_at, symbols,
                        term_key, sort_terms, render, match, instantiate)
from .theory import Theory
from .base import AUDIT_GRID


# ---------------------------------------------------------------- verdicts

@dataclass(frozen=True)
class CanonicalForm:
    value: Hashable
    term: Term

    @property
    def vars(self) -> tuple[str, ...]:
        return term_vars(self.term)

    @property
    def size(self) -> int:
        return size(self.term)

    def __str__(self) -> str:
        return render(self.term)


@dataclass(frozen=True)
class ProofStep:
    axiom: str
    path: tuple[int, ...]
    substitution: tuple[tuple[str, Term], ...]
    direction: Direction
    result: Term

    def flipped(self, result: Term) -> "ProofStep":
        return ProofStep(self.axiom, self.path, self.substitution,
                         "rl" if self.direction == "lr" else "lr", result)

    def to_json(self) -> JsonDict:
        return {
            "axiom": self.axiom,
            "path": list(self.path),
            "substitution": {name: render(t) for name, t in self.substitution},
            "direction": self.direction,
            "result": render(self.result),
        }


@dataclass(frozen=True, eq=False)
class FiniteModel:
    """a finite algebra satisfying every equation of a signature, with an assignment of variables"""

    signature: Signature
    equations: tuple[Equation, ...]
    size: int
    tables: dict[str, np.ndarray]
    assignment: dict[str, int] = field(default_factory=dict)

    def __post_init__(self):
        for name, arity in self.signature.ops:
            table = self.tables.get(name)
            if table is None or table.shape != (self.size,) * arity:
                raise DomainError(f"table of {name} must have shape {(self.size,) * arity}")
            if table.size and (table.min() < 0 or table.max() >= self.size):
                raise DomainError(f"table of {name} leaves the carrier")
        batched = {name: table[None] for name, table in self.tables.items()}
        for eq in self.equations:
            if not _holds(eq, batched, self.size, 1)[0]:
                raise DomainError(f"equation {eq.name} fails in the model")

    def evaluate(self, t: Term, assignment: Optional[dict[str, int]] = None) -> int:
        assignment = self.assignment if assignment is None else assignment
        env = {name: np.array([value]) for name, value in assignment.items()}
        batched = {name: table[None] for name, table in self.tables.items()}
        return int(_evaluate(t, batched, env, 1, 1)[0, 0])

    def to_json(self) -> JsonDict:
        return {
            "size": self.size,
            "tables": {name: np.asarray(table).tolist() for name, table in self.tables.items()},
            "assignment": dict(self.assignment),
        }


@dataclass(frozen=True)
class EqVerdict:
    status: EqStatus
    evidence: str
    forms: tuple[CanonicalForm, ...] = ()
    proof: tuple[ProofStep, ...] = ()
    model: Optional[FiniteModel] = None
    statistics: dict = field(default_factory=dict, compare=False)

    @property
    def equal(self) -> bool:
        return self.status == "Equal"

    @property
    def distinct(self) -> bool:
        return self.status == "Distinct"

    @property
    def decisive(self) -> bool:
        return self.status != "Unknown"

    def to_json(self) -> JsonDict:
        data: JsonDict = {"status": self.status, "evidence": self.evidence}
        if self.forms:
            data["canonical"] = [str(form) for form in self.forms]
        if self.evidence == "proof":
            data["proof"] = [step.to_json() for step in self.proof]
        if self.model is not None:
            data["model"] = self.model.to_json()
        if self.statistics:
            data["statistics"] = dict(self.statistics)
        return data


# ---------------------------------------------------------------- normal forms

def _require_oracle(th: Theory):
    if th.oracle is None:
        raise UnsupportedOperationError(f"{th.name} uses the generic backend and has no normal forms")
    return th.oracle


def normalize(th: Theory, t: Term) -> CanonicalForm:
    """
    Raises:
        UnsupportedOperationError: the theory has no builtin oracle
        MalformedTermError: the term is not over the theory's signature
    """
    oracle = _require_oracle(th)
    check(t, th.signature)
    value = oracle.canonical(t)
    return CanonicalForm(value, oracle.reify(value))


def decide_equal(th: Theory, t1: Term, t2: Term, bounds: Optional[Bounds] = None) -> EqVerdict:
    check(t1, th.signature)
    check(t2, th.signature)
    if th.oracle is not None:
        forms = (normalize(th, t1), normalize(th, t2))
        status: EqStatus = "Equal" if th.oracle.equal(t1, t2) else "Distinct"
        return EqVerdict(status, "canonical-form", forms)

    bounds = bounds or Bounds()
    if (model := find_countermodel(th, t1, t2, min(2, bounds.model_max_size))) is not None:
        return EqVerdict("Distinct", "countermodel", model=model)
    proved = bounded_prove(th, t1, t2, bounds.proof_max_size, bounds.proof_max_states)
    if proved.equal:
        return proved
    if bounds.model_max_size > 2:
        model = find_countermodel(th, t1, t2, bounds.model_max_size, min_size=3)
        if model is not None:
            return EqVerdict("Distinct", "countermodel", model=model)
    return EqVerdict("Unknown", "budget", statistics={**proved.statistics, "model_max_size": bounds.model_max_size})


# ---------------------------------------------------------------- rewriting

@dataclass(frozen=True)
class Rule:
    name: str
    lhs: Term
    rhs: Term
    direction: Direction


def rewrite_rules(equations: Sequence[Equation]) -> list[Rule]:
    rules: list[Rule] = []
    for eq in equations:
        rules.append(Rule(eq.name, eq.lhs, eq.rhs, "lr"))
        rules.append(Rule(eq.name, eq.rhs, eq.lhs, "rl"))
    return rules


def proof_pool(sig: Signature, goals: Sequence[Term]) -> list[Term]:
    """instances for variables a rule introduces: goal variables, constants, and unary symbols applied to those"""
    base: list[Term] = [Var(name) for name in dict.fromkeys(x for t in goals for x in term_vars(t))]
    base += [App(OperationSymbol(name, 0)) for name in sig.constants]
    unary = [OperationSymbol(name, 1) for name, arity in sig.ops if arity == 1]
    return sort_terms(dict.fromkeys(base + [App(u, (t,)) for u in unary for t in base]))


def uses_closed_interval(equations: Sequence[Equation]) -> bool:
    return any(isinstance(sym.param, Fraction) and sym.param in (0, 1)
               for eq in equations for sym in symbols(eq.lhs) | symbols(eq.rhs))


def rewrites(t: Term, rules: Sequence[Rule], pool: Sequence[Term], closed: bool = False) -> Iterator[ProofStep]:
    """every one-step rewrite of `t`: positions in preorder, rules in order, pool choices in canonical order"""
    for path, sub in positions(t):
        for rule in rules:
            found = match(rule.lhs, sub)
            if found is None:
                continue
            subst, penv = found
            free = [x for x in term_vars(rule.rhs) if x not in subst]
            for choice in itertools.product(pool, repeat=len(free)):
                full = {**subst, **dict(zip(free, choice))}
                new = instantiate(rule.rhs, full, penv, closed)
                if new is None:
                    continue
                yield ProofStep(rule.name, path, tuple(sorted(full.items(), key=lambda item: item[0])),
                                rule.direction, replace_at(t, path, new))


def bounded_prove(th: Theory, t1: Term, t2: Term, max_size: int = 12, max_states: int = 50_000,
                  facts: Sequence[Equation] = ()) -> EqVerdict:
    """
    bidirectional breadth-first search for an equational proof of t1 = t2

    Args:
        th (Theory): theory whose equations are the axioms
        t1, t2 (Term): the goal
        max_size (int): intermediate terms larger than this are discarded
        max_states (int): visited-term budget over both directions
        facts (Sequence[Equation]): extra equations used as axioms for this query only

    Returns:
        EqVerdict: Equal with a step-by-step proof, or Unknown with the exhausted budget; never Distinct
    """
    if t1 == t2:
        return EqVerdict("Equal", "proof", statistics={"states": 1})
    equations = tuple(th.equations) + tuple(facts)
    rules = rewrite_rules(equations)
    sig = th.signature
    for fact in facts:
        sig = sig.union(Signature(tuple((s.name, s.arity) for s in symbols(fact.lhs) | symbols(fact.rhs)
                                        if s.param is None)))
    pool = proof_pool(sig, [t1, t2])
    closed = uses_closed_interval(equations)

    parents: list[dict[Term, Optional[tuple[Term, ProofStep]]]] = [{t1: None}, {t2: None}]
    frontiers: list[deque] = [deque([t1]), deque([t2])]
    states = 2

    def chain(side: int, t: Term) -> list[tuple[Term, ProofStep]]:
        out = []
        while parents[side][t] is not None:
            prev, step = parents[side][t]
            out.append((prev, step))
            t = prev
        return out

    def stitch(meet: Term) -> tuple[ProofStep, ...]:
        forward = [step for _, step in reversed(chain(0, meet))]
        backward = [step.flipped(prev) for prev, step in chain(1, meet)]
        return tuple(forward + backward)

    while frontiers[0] or frontiers[1]:
        side = 0 if frontiers[0] and (not frontiers[1] or len(frontiers[0]) <= len(frontiers[1])) else 1
        level: deque = deque()
        for u in frontiers[side]:
            for step in rewrites(u, rules, pool, closed):
                v = step.result
                if v in parents[side] or size(v) > max_size:
                    continue
                parents[side][v] = (u, step)
                if v in parents[1 - side]:
                    proof = stitch(v)
                    logger.debug(f"proved {render(t1)} = {render(t2)} in {len(proof)} steps, {states} states")
                    return EqVerdict("Equal", "proof", proof=proof, statistics={"states": states})
                states += 1
                if states >= max_states:
                    logger.debug(f"proof search for {render(t1)} = {render(t2)} hit {max_states} states")
                    return EqVerdict("Unknown", "budget", statistics={
                        "states": states, "max_states": max_states, "max_size": max_size})
                level.append(v)
        frontiers[side] = level
    return EqVerdict("Unknown", "budget", statistics={
        "states": states, "max_states": max_states, "max_size": max_size, "frontier": "exhausted"})


def replay_proof(th: Theory, t1: Term, proof: Sequence[ProofStep], facts: Sequence[Equation] = ()) -> Term:
    """
    re-run a proof step by step from `t1`

    Raises:
        DomainError: a step does not rewrite the current term to its recorded result
    """
    equations = {eq.name: eq for eq in tuple(th.equations) + tuple(facts)}
    closed = uses_closed_interval(tuple(equations.values()))
    current = t1
    for step in proof:
        eq = equations.get(step.axiom)
        if eq is None:
            raise DomainError(f"unknown axiom {step.axiom}")
        lhs, rhs = (eq.lhs, eq.rhs) if step.direction == "lr" else (eq.rhs, eq.lhs)
        sub = current
        for i in step.path:
            sub = sub.args[i]
        found = match(lhs, sub, dict(step.substitution))
        new = None if found is None else instantiate(rhs, found[0], found[1], closed)
        if new is None or replace_at(current, step.path, new) != step.result:
            raise DomainError(f"step {step.axiom} ({step.direction}) does not apply to {render(current)}")
        current = step.result
    return current


# ---------------------------------------------------------------- finite models

CANDIDATE_LIMIT = 250_000

WORK_LIMIT = 50_000_000


def _evaluate(t: Term, tables: dict[str, np.ndarray], env: dict[str, np.ndarray], m: int, a: int) -> np.ndarray:
    """values of `t` for m models (rows) under a assignments (columns); tables carry a leading model axis of m or 1"""
    if isinstance(t, Var):
        return np.broadcast_to(env[t.name], (m, a))
    table = tables[t.symbol.name]
    args = tuple(_evaluate(arg, tables, env, m, a) for arg in t.args)
    rows = np.arange(m)[:, None] if table.shape[0] == m and m > 1 else np.zeros((1, 1), dtype=np.intp)
    return table[(np.broadcast_to(rows, (m, a)),) + args]


def _assignments(names: Sequence[str], n: int) -> tuple[dict[str, np.ndarray], int]:
    if not names:
        return {}, 1
    grid = np.indices((n,) * len(names)).reshape(len(names), -1)
    return {name: grid[i] for i, name in enumerate(names)}, grid.shape[1]


def _holds(eq: Equation, tables: dict[str, np.ndarray], n: int, m: int) -> np.ndarray:
    env, a = _assignments(eq.context, n)
    return (_evaluate(eq.lhs, tables, env, m, a) == _evaluate(eq.rhs, tables, env, m, a)).all(axis=1)


def _candidates(n: int, arity: int) -> Optional[np.ndarray]:
    cells = n ** arity
    if n ** cells > CANDIDATE_LIMIT:
        return None
    flat = np.array(list(itertools.product(range(n), repeat=cells)), dtype=np.intp)
    return flat.reshape((-1,) + (n,) * arity)


@dataclass(frozen=True, eq=False)
class ModelBatch:
    count: int
    tables: dict[str, np.ndarray]


@lru_cache(maxsize=128)
def enumerate_models(sig: Signature, equations: tuple[Equation, ...], n: int) -> Optional[ModelBatch]:
    """
    all models of size n, constants first, then operation tables by arity

    Each candidate table is filtered, in one batch per partial model, by the equations whose symbols are all
    assigned. Returns None when the candidate space exceeds the search limits.
    """
    if sig.families:
        return None
    for eq in equations:
        if not (symbols(eq.lhs) | symbols(eq.rhs)) and eq.lhs != eq.rhs and n > 1:
            return ModelBatch(0, {})
    needs = [(eq, {s.name for s in symbols(eq.lhs) | symbols(eq.rhs)}) for eq in equations]
    tables: dict[str, np.ndarray] = {}
    count = 1
    assigned: set[str] = set()
    for name, arity in sorted(sig.ops, key=lambda op: op[1]):
        candidates = _candidates(n, arity)
        if candidates is None or count * len(candidates) > WORK_LIMIT:
            logger.debug(f"model search at size {n} skipped: candidate space of {name} too large")
            return None
        assigned.add(name)
        checks = [eq for eq, needed in needs if name in needed and needed <= assigned]
        kept: dict[str, list[np.ndarray]] = {key: [] for key in list(tables) + [name]}
        for i in range(count):
            partial = {key: value[i:i + 1] for key, value in tables.items()}
            partial[name] = candidates
            mask = np.ones(len(candidates), dtype=bool)
            for eq in checks:
                mask &= _holds(eq, partial, n, len(candidates))
            keep = np.nonzero(mask)[0]
            if keep.size == 0:
                continue
            for key, value in tables.items():
                kept[key].append(np.repeat(value[i:i + 1], keep.size, axis=0))
            kept[name].append(candidates[keep])
        if not kept[name]:
            return ModelBatch(0, {})
        tables = {key: np.concatenate(value) for key, value in kept.items()}
        count = len(tables[name])
    logger.debug(f"{count} models of size {n}")
    return ModelBatch(count, tables)


def find_countermodel(th: Theory, t1: Term, t2: Term, max_size: int = 3, min_size: int = 2) -> Optional[FiniteModel]:
    """
    smallest finite model of the theory separating t1 and t2

    Returns:
        Optional[FiniteModel]: None when no model up to `max_size` separates them, or the search space is too large
    """
    check(t1, th.signature)
    check(t2, th.signature)
    names = list(dict.fromkeys(term_vars(t1) + term_vars(t2)))
    for n in range(max(2, min_size), max_size + 1):
        batch = enumerate_models(th.signature, tuple(th.equations), n)
        if batch is None:
            break
        if batch.count == 0:
            continue
        env, a = _assignments(names, n)
        differ = _evaluate(t1, batch.tables, env, batch.count, a) != _evaluate(t2, batch.tables, env, batch.count, a)
        hits = np.argwhere(differ)
        if hits.size:
            i, j = hits[0]
            model = FiniteModel(th.signature, tuple(th.equations), n,
                                {name: np.asarray(table[i]) for name, table in batch.tables.items()},
                                {name: int(env[name][j]) for name in names})
            logger.debug(f"countermodel of size {n} separates {render(t1)} and {render(t2)}")
            return model
    return None


# ---------------------------------------------------------------- metaproperties

@dataclass(frozen=True)
class MetaCertificate:
    theory: str
    variable_faithful: bool
    closed_normal_forms: tuple[str, ...]
    constant_count: int
    all_ops_unital_or_idempotent: bool
    linear_presentation: bool
    constants_distinct: bool
    closed_terms_are_constants: bool
    renaming_reflects_constants: bool
    provenance: dict[str, Provenance] = field(default_factory=dict, compare=False)
    operation_evidence: dict[str, str] = field(default_factory=dict, compare=False)

    def holds(self, prop: MetaProperty) -> bool:
        return bool(getattr(self, prop))

    @property
    def trusted(self) -> bool:
        return any(value == "user-asserted" for value in self.provenance.values())

    def to_json(self) -> JsonDict:
        return {
            "theory": self.theory,
            **{prop: self.holds(prop) for prop in VOCABULARY},
            "closed_normal_forms": list(self.closed_normal_forms),
            "constant_count": self.constant_count,
            "provenance": dict(self.provenance),
            "operation_evidence": dict(self.operation_evidence),
        }


def is_linear(equations: Sequence[Equation]) -> bool:
    def linear(t: Term) -> bool:
        names = [sub.name for _, sub in positions(t) if isinstance(sub, Var)]
        return len(names) == len(set(names))
    return all(linear(eq.lhs) and linear(eq.rhs) and set(term_vars(eq.lhs)) == set(term_vars(eq.rhs))
               for eq in equations)


def operation_instances(th: Theory) -> list[OperationSymbol]:
    ops = [OperationSymbol(name, arity) for name, arity in th.signature.operations]
    for name, arity in th.signature.families:
        ops += [OperationSymbol(name, arity, p) for p in AUDIT_GRID]
    return ops


def reducing_evidence(th: Theory, op: OperationSymbol) -> Optional[str]:
    """'idempotent' or 'unit e' when the operation reduces to a variable, else None"""
    x = Var("x")
    if decide_equal(th, App(op, (x,) * op.arity), x).equal:
        return "idempotent"
    for name in th.signature.constants:
        e = App(OperationSymbol(name, 0))
        if all(decide_equal(th, App(op, tuple(x if j == i else e for j in range(op.arity))), x).equal
               for i in range(op.arity)):
            return f"unit {name}"
    return None


def certify_meta(th: Theory) -> MetaCertificate:
    """
    metaproperty certificate of a theory

    Builtin oracles contribute audited structural facts plus finitely many decisions (constant classes, one unit or
    idempotence check per operation). Generic theories only carry what their `assert` lines claim.
    """
    constants = th.signature.constants
    if th.oracle is None:
        asserted = set(th.presentation.asserts)
        flags = {prop: prop in asserted for prop in VOCABULARY}
        certificate = MetaCertificate(
            th.name, closed_normal_forms=tuple(constants), constant_count=len(constants),
            provenance={prop: "user-asserted" for prop in asserted}, **flags)
        logger.debug(f"{th.name}: user-asserted {sorted(asserted)}")
        return certificate

    oracle = th.oracle
    evidence = {op.label: reducing_evidence(th, op) for op in operation_instances(th)}
    classes = oracle.closed_normal_forms()
    certificate = MetaCertificate(
        theory=th.name,
        variable_faithful=oracle.variable_faithful,
        closed_normal_forms=tuple(render(t) for t in classes),
        constant_count=len(constants),
        all_ops_unital_or_idempotent=all(value is not None for value in evidence.values()),
        linear_presentation=is_linear(th.equations),
        constants_distinct=len(classes) == len(constants),
        closed_terms_are_constants=oracle.closed_terms_are_constants,
        renaming_reflects_constants=oracle.renaming_reflects_constants,
        provenance={prop: "builtin-audited" for prop in VOCABULARY},
        operation_evidence={label: value or "none" for label, value in evidence.items()},
    )
    logger.debug(f"{th.name}: certificate {certificate.to_json()}")
    return certificate


def consistency(th: Theory, bounds: Optional[Bounds] = None) -> EqVerdict:
    """decide x = y; the theory is consistent iff the verdict is Distinct"""
    return decide_equal(th, Var("x"), Var("y"), bounds)


# ---------------------------------------------------------------- cross-validation

@dataclass(frozen=True)
class CrossValidation:
    theory: str
    pairs: int
    decisive: int
    agreed: int
    disagreements: tuple[tuple[str, str, str, str], ...] = ()

    @property
    def agreement_rate(self) -> float:
        return self.agreed / self.decisive if self.decisive else 1.0

    @property
    def decisiveness_rate(self) -> float:
        return self.decisive / self.pairs if self.pairs else 0.0

    def to_json(self) -> JsonDict:
        return {
            "theory": self.theory, "pairs": self.pairs, "decisive": self.decisive, "agreed": self.agreed,
            "agreement_rate": self.agreement_rate, "decisiveness_rate": self.decisiveness_rate,
            "disagreements": [list(item) for item in self.disagreements],
        }


def random_term(sig: Signature, rng: np.random.Generator, max_size: int, variables: Sequence[str],
                grid: Sequence[Fraction] = (Fraction(1, 2),), excluded: Sequence[str] = ()) -> Term:
    leaves: list[Term] = [Var(name) for name in variables] + [App(OperationSymbol(name, 0)) for name in sig.constants]
    ops = [OperationSymbol(name, arity) for name, arity in sig.operations]
    ops += [OperationSymbol(name, arity, p) for name, arity in sig.families for p in grid]
    ops = [op for op in ops if op.label not in excluded and op.name not in excluded]

    def go(budget: int) -> Term:
        usable = [op for op in ops if 1 + op.arity <= budget]
        if not usable or rng.random() < 0.3:
            return leaves[rng.integers(len(leaves))]
        op = usable[rng.integers(len(usable))]
        share = (budget - 1) // op.arity
        return App(op, tuple(go(share) for _ in range(op.arity)))

    return go(max_size)


def cross_validate(th: Theory, n_pairs: int = 1000, seed: int = 0, bounds: Optional[Bounds] = None,
                   max_size: int = 6, n_vars: int = 4) -> CrossValidation:
    """
    compare the generic backend with the theory's oracle on random pairs

    Half of the pairs are a random term and a random one-step rewrite of it, so both outcomes are exercised.
    """
    _require_oracle(th)
    bounds = bounds or Bounds(proof_max_size=max_size + 4, proof_max_states=500, model_max_size=3)
    generic = th.generic()
    rng = np.random.default_rng(seed)
    variables = [f"x{i}" for i in range(1, n_vars + 1)]
    rules = rewrite_rules(th.equations)
    closed = uses_closed_interval(th.equations)
    grid = (Fraction(1, 3), Fraction(1, 2)) if th.signature.families else ()

    decisive = agreed = 0
    disagreements: list[tuple[str, str, str, str]] = []
    for i in range(n_pairs):
        t1 = random_term(th.signature, rng, max_size, variables, grid)
        t2 = None
        if i % 2 == 1:
            steps = [step for step in rewrites(t1, rules, proof_pool(th.signature, [t1]), closed)
                     if size(step.result) <= max_size + 2]
            if steps:
                t2 = steps[rng.integers(len(steps))].result
        if t2 is None:
            t2 = random_term(th.signature, rng, max_size, variables, grid)
        expected = decide_equal(th, t1, t2)
        verdict = decide_equal(generic, t1, t2, bounds)
        if verdict.decisive:
            decisive += 1
            if verdict.status == expected.status:
                agreed += 1
            else:
                disagreements.append((render(t1), render(t2), expected.status, verdict.status))
    report = CrossValidation(th.name, n_pairs, decisive, agreed, tuple(disagreements))
    logger.info(f"{th.name}: {report.agreed}/{report.decisive} decisive answers agree, "
                f"decisiveness {report.decisiveness_rate:.2%}")
    return report

"""
Candidate distributive laws λ: S∘T ⇒ T∘S, applied to finite instances and checked against Beck's axioms.

An element of S(T(X)) is an S-term over boxed T-elements; λ returns a T-term over boxed S-elements. Every check
works on the extensional values, so a rewrite program cannot pass by returning unnormalized output.
"""
# Standard Library
import itertools
from dataclasses import dataclass, field
from typing import Callable, Iterator, Optional, Sequence

# Third-Party Library
from loguru import logger

# My Library
from utils.helper import Bounds
from utils.annotation import BeckAxiom, LawKind, SearchStatus, JsonDict
from utils.errors import DomainError, PreconditionError, ResourceError
from utils.term import (Term, Var, App, OperationSymbol, substitute, rename, term_vars, term_key,
                        positions, leaves, render)
from .theory import Theory
from .free import (FreeElement, RewriteRule, element, unit, mult, fmap, lift, unbox,
                   enumerate_elements, mixed_signature, separate)


# ---------------------------------------------------------------- laws

def single_binary(th: Theory) -> Optional[tuple[OperationSymbol, Optional[App]]]:
    """the binary operation and optional constant of a one-binary theory, None for any other signature"""
    sig = th.signature
    if sig.families or [arity for _, arity in sig.operations] != [2] or len(sig.constants) > 1:
        return None
    op = OperationSymbol(sig.operations[0][0], 2)
    constant = App(OperationSymbol(sig.constants[0], 0)) if sig.constants else None
    return op, constant


def times_over_plus_rules(S: Theory, T: Theory) -> tuple[RewriteRule, ...]:
    """distribute the S binary over the T binary (its left argument first) and let T's constant absorb"""
    s_parts, t_parts = single_binary(S), single_binary(T)
    if s_parts is None or t_parts is None:
        raise PreconditionError(f"times-over-plus needs one binary operation in {S.name} and in {T.name}")
    mixed_sig = mixed_signature(S, T)
    s_op, _ = s_parts
    t_op = OperationSymbol(mixed_sig.t_name(t_parts[0].name), 2)
    x, y, z = Var("x"), Var("y"), Var("z")
    rules = [
        RewriteRule("distR", App(s_op, (App(t_op, (x, y)), z)), App(t_op, (App(s_op, (x, z)), App(s_op, (y, z))))),
        RewriteRule("distL", App(s_op, (x, App(t_op, (y, z)))), App(t_op, (App(s_op, (x, y)), App(s_op, (x, z))))),
    ]
    if t_parts[1] is not None:
        zero = App(OperationSymbol(mixed_sig.t_name(t_parts[1].symbol.name), 0))
        rules.append(RewriteRule("zeroL", App(s_op, (zero, x)), zero))
        rules.append(RewriteRule("zeroR", App(s_op, (x, zero)), zero))
    return tuple(rules)


@dataclass(frozen=True, eq=False)
class TableLaw:
    """
    a law given by its values on S(T(X)) for one fixed carrier X

    Inputs over any other carrier are renamed onto X (their innermost generators in sorted order), looked up and
    renamed back, which is exactly how a natural transformation is determined by a finite carrier.
    """

    S: Theory
    T: Theory
    generators: tuple[str, ...]
    table: dict = field(default_factory=dict)

    def inner_generators(self, e: FreeElement) -> list[str]:
        return sorted(dict.fromkeys(x for n in e.generators for x in unbox(self.T, n).generators))

    def normalize_key(self, e: FreeElement) -> tuple[FreeElement, dict[str, str]]:
        names = self.inner_generators(e)
        if len(names) > len(self.generators):
            raise DomainError(f"{e} uses more than {len(self.generators)} generators")
        forward = dict(zip(names, self.generators))
        backward = {new: old for old, new in forward.items()}
        return fmap(self.S, lift(self.T, forward), e), backward

    def lookup(self, e: FreeElement, values: Optional[Callable[[FreeElement], FreeElement]] = None) -> FreeElement:
        key, backward = self.normalize_key(e)
        if values is not None:
            value = values(key)
        elif key in self.table:
            value = self.table[key]
        else:
            raise DomainError(f"the table is not defined on {key}")
        return fmap(self.T, lift(self.S, backward), value)


@dataclass(frozen=True, eq=False)
class CandidateLaw:
    name: str
    kind: LawKind
    S: Theory
    T: Theory
    rules: tuple[RewriteRule, ...] = ()
    table: Optional[TableLaw] = None

    def __call__(self, e: FreeElement) -> FreeElement:
        return apply_law(self, e)

    def __repr__(self) -> str:
        return f"CandidateLaw({self.name}: {self.S.name}∘{self.T.name} ⇒ {self.T.name}∘{self.S.name})"


def _times_over_plus(law: CandidateLaw, e: FreeElement) -> FreeElement:
    S, T = law.S, law.T
    s_op, _ = single_binary(S)

    def go(u: Term) -> Term:
        if isinstance(u, Var):
            t = unbox(T, u.name)
            return rename(t.term, {x: unit(S, x).box for x in t.generators})
        if not u.args:
            return Var(element(S, u).box)
        if u.symbol != s_op:
            raise DomainError(f"times-over-plus cannot interpret {render(u)}")
        left, right = go(u.args[0]), go(u.args[1])
        outer: dict[str, Term] = {}
        for a in term_vars(left):
            sa = unbox(S, a).term
            outer[a] = rename(right, {b: element(S, App(s_op, (sa, unbox(S, b).term))).box
                                      for b in term_vars(right)})
        return T.oracle.normalize(substitute(left, outer))

    return element(T, go(S.oracle.normalize(e.term)))


def _exception_sweep(law: CandidateLaw, e: FreeElement) -> FreeElement:
    S, T = law.S, law.T
    if isinstance(e.term, Var):
        t = unbox(T, e.term.name)
        return fmap(T, lambda x: unit(S, x).box, t)
    return unit(T, element(S, e.term))


def _manes_mulry_faulty(law: CandidateLaw, e: FreeElement) -> FreeElement:
    S, T = law.S, law.T
    entries = [unbox(T, name).term for name in S.oracle.word(e.term)]
    exceptions = [t for t in entries if isinstance(t, App)]
    if not entries:
        return unit(T, element(S, S.oracle.unit))
    if len(entries) == 1 and exceptions:
        return element(T, entries[0])
    if not exceptions:
        plain = rename(e.term, {name: unbox(T, name).term.name for name in e.generators})
        return unit(T, element(S, plain))
    return element(T, App(OperationSymbol(T.signature.constants[0], 0)))


def _rules(law: CandidateLaw, e: FreeElement) -> FreeElement:
    mixed_sig = mixed_signature(law.S, law.T)
    mixed = substitute(e.term, {name: mixed_sig.from_t(unbox(law.T, name).term) for name in e.generators})
    separated = separate(law.S, law.T, law.rules, mixed)
    return element(law.T, separated.outer)


def apply_law(law: CandidateLaw, e: FreeElement) -> FreeElement:
    """
    λ at the carrier of `e`

    Raises:
        DomainError: the law is undefined on `e` (partial tables, inputs outside the law's signature)
        NotImplementedError: unknown law kind
    """
    if law.kind == "times-over-plus":
        return _times_over_plus(law, e)
    elif law.kind == "exception-sweep":
        return _exception_sweep(law, e)
    elif law.kind == "manes-mulry-faulty":
        return _manes_mulry_faulty(law, e)
    elif law.kind == "rules":
        return _rules(law, e)
    elif law.kind == "table":
        return law.table.lookup(e)
    else:
        raise NotImplementedError(f"{law.kind} laws are not supported")


def get_law(name: str, S: Theory, T: Theory, rules: Sequence[RewriteRule] = ()) -> CandidateLaw:
    """
    build a named candidate law for S∘T ⇒ T∘S

    Raises:
        PreconditionError: the law does not apply to these theories
        NotImplementedError: unknown law name
    """
    if S.oracle is None or T.oracle is None:
        raise PreconditionError("candidate laws need builtin oracles on both sides")
    if name == "times-over-plus":
        times_over_plus_rules(S, T)
        return CandidateLaw(name, "times-over-plus", S, T)
    elif name == "times-over-plus-rules":
        return CandidateLaw(name, "rules", S, T, times_over_plus_rules(S, T))
    elif name == "exception-sweep":
        if S.oracle.backend != "Exception":
            raise PreconditionError(f"exception-sweep needs an exception theory as S, got {S.name}")
        return CandidateLaw(name, "exception-sweep", S, T)
    elif name == "manes-mulry-faulty":
        if S.oracle.backend != "UA" or T.oracle.backend != "Exception":
            raise PreconditionError("manes-mulry-faulty needs S = UA and an exception theory T")
        return CandidateLaw(name, "manes-mulry-faulty", S, T)
    elif name == "rules":
        return CandidateLaw(name, "rules", S, T, tuple(rules))
    else:
        raise NotImplementedError(f"{name} is not a builtin law")


# ---------------------------------------------------------------- Beck's axioms

def carrier(S: Theory, T: Theory, size: int) -> tuple[str, ...]:
    """the first `size` letters that are not symbols of S or T"""
    taken = S.signature.names | T.signature.names
    return tuple(letter for letter in "abcdefghijklmnopqrstuvw" if letter not in taken)[:size]


@dataclass(frozen=True)
class BeckFailure:
    axiom: BeckAxiom
    instance: str
    path_a: str
    path_b: str
    function: Optional[dict] = None

    def to_json(self) -> JsonDict:
        data = {"axiom": self.axiom, "instance": self.instance, "path_a": self.path_a, "path_b": self.path_b}
        if self.function is not None:
            data["function"] = dict(self.function)
        return data


@dataclass(frozen=True)
class AxiomOutcome:
    axiom: BeckAxiom
    checked: int
    skipped: int = 0
    failure: Optional[BeckFailure] = None

    @property
    def passed(self) -> bool:
        # an axiom never evaluated is not evidence
        return self.failure is None and self.checked > 0

    @property
    def status(self) -> str:
        if self.failure is not None:
            return "fail"
        return "pass" if self.checked > 0 else "unchecked"


@dataclass(frozen=True)
class BeckReport:
    law: str
    s: str
    t: str
    outcomes: tuple[AxiomOutcome, ...]
    complete: bool = True
    statistics: dict = field(default_factory=dict, compare=False)

    @property
    def passed(self) -> bool:
        return all(outcome.passed for outcome in self.outcomes)

    @property
    def verified(self) -> bool:
        """every square commutes on every instance up to the bounds"""
        return self.passed and self.complete

    @property
    def first_failure(self) -> Optional[BeckFailure]:
        return next((outcome.failure for outcome in self.outcomes if outcome.failure is not None), None)

    def outcome(self, axiom: BeckAxiom) -> AxiomOutcome:
        return next(outcome for outcome in self.outcomes if outcome.axiom == axiom)

    def to_json(self) -> JsonDict:
        return {
            "law": self.law, "direction": f"{self.s}∘{self.t} ⇒ {self.t}∘{self.s}",
            "passed": self.passed, "complete": self.complete,
            "axioms": {o.axiom: {"status": o.status, "checked": o.checked,
                                 "skipped": o.skipped,
                                 **({"failure": o.failure.to_json()} if o.failure else {})}
                       for o in self.outcomes},
            "statistics": dict(self.statistics),
        }


Check = Callable[[], tuple[FreeElement, FreeElement]]


def _run(axiom: BeckAxiom, instances: Iterator[tuple[str, Optional[dict], Check]]) -> AxiomOutcome:
    checked = skipped = 0
    for text, function, check in instances:
        try:
            a, b = check()
        except DomainError:
            skipped += 1
            continue
        checked += 1
        if a != b:
            logger.info(f"{axiom} fails at {text}: {a} ≠ {b}")
            return AxiomOutcome(axiom, checked, skipped, BeckFailure(axiom, text, a.text, b.text, function))
    return AxiomOutcome(axiom, checked, skipped)


def beck_instances(law: CandidateLaw, generators: Sequence[str], bound: int, bounds: Bounds,
                   lam: Optional[Callable[[FreeElement], FreeElement]] = None) -> dict[BeckAxiom, Iterator]:
    """lazy instance streams per axiom; each instance yields the values of both paths of its square"""
    S, T = law.S, law.T
    lam = lam or law

    def enum(th: Theory, gens) -> tuple[FreeElement, ...]:
        return enumerate_elements(th, gens, bound, bounds, strict=False)

    tx, sx = enum(T, generators), enum(S, generators)
    eta_s = lambda name: unit(S, name).box
    eta_t = lambda name: unit(T, name).box

    def unit1():
        for t in tx:
            yield t.text, None, lambda t=t: (lam(unit(S, t)), fmap(T, eta_s, t))

    def unit2():
        for s in sx:
            yield s.text, None, lambda s=s: (lam(fmap(S, eta_t, s)), unit(T, s))

    def mult1():
        for E in enum(S, enum(S, tx)):
            def check(E=E):
                step = fmap(S, lambda n: lam(unbox(S, n)).box, E)
                return lam(mult(S, E)), fmap(T, lambda n: mult(S, unbox(S, n)).box, lam(step))
            yield E.text, None, check

    def mult2():
        for E in enum(S, enum(T, tx)):
            def check(E=E):
                lhs = lam(fmap(S, lambda n: mult(T, unbox(T, n)).box, E))
                return lhs, mult(T, fmap(T, lambda n: lam(unbox(S, n)).box, lam(E)))
            yield E.text, None, check

    def naturality():
        for n in range(1, len(generators) + 1):
            xs = tuple(generators[:n])
            domain = enum(S, enum(T, xs))
            for m in range(1, len(generators) + 1):
                for images in itertools.product(generators[:m], repeat=n):
                    f = dict(zip(xs, images))
                    for e in domain:
                        yield e.text, f, lambda e=e, f=f: (lam(fmap(S, lift(T, f), e)), fmap(T, lift(S, f), lam(e)))

    return {"unit1": unit1(), "unit2": unit2(), "mult1": mult1(), "mult2": mult2(), "naturality": naturality()}


def check_beck(law: CandidateLaw, bounds: Optional[Bounds] = None) -> BeckReport:
    """
    check both unit axioms, both multiplication axioms and naturality on every instance up to the bounds

    The carrier has `max_carrier` generators, every layer `max_leaves` leaves; naturality ranges over all functions
    between carriers of at most `max_carrier` generators. The first failure per axiom is reported in canonical order.
    """
    bounds = bounds or Bounds()
    generators = carrier(law.S, law.T, bounds.max_carrier)
    outcomes = []
    complete = True
    for axiom, instances in beck_instances(law, generators, bounds.max_leaves, bounds).items():
        try:
            outcomes.append(_run(axiom, instances))
        except ResourceError as e:
            complete = False
            logger.warning(f"{axiom} check stopped: {e}")
            outcomes.append(AxiomOutcome(axiom, 0))
    skipped = sum(outcome.skipped for outcome in outcomes)
    if skipped:
        complete = False
        logger.warning(f"{law.name} is undefined on {skipped} instances, they were skipped")
    report = BeckReport(law.name, law.S.name, law.T.name, tuple(outcomes), complete,
                        {"generators": list(generators), "max_leaves": bounds.max_leaves})
    if report.verified:
        logger.success(f"{law.name} on {law.S.name}∘{law.T.name}: Beck's axioms hold at the bounds")
    return report


PATHS: dict[BeckAxiom, tuple[str, str]] = {
    "unit1": ("λ∘ηS_T", "Tη^S"),
    "unit2": ("λ∘Sη^T", "η^T_S"),
    "mult1": ("λ∘μ^S_T", "Tμ^S∘λ_S∘Sλ"),
    "mult2": ("λ∘Sμ^T", "μ^T_S∘Tλ∘λ_T"),
    "naturality": ("λ∘STf", "TSf∘λ"),
}


def render_square(report: BeckReport) -> str:
    """the first failing square as a two-path text diagram"""
    failure = report.first_failure
    if failure is None:
        verdict = "all squares commute" if report.verified else "no failing square, some instances unchecked"
        return f"{report.law} on {report.s}∘{report.t} ⇒ {report.t}∘{report.s}: {verdict}"
    a, b = PATHS[failure.axiom]
    width = max(len(a), len(b)) + 4
    lines = [f"{failure.axiom} fails for {report.law} on {report.s}∘{report.t} ⇒ {report.t}∘{report.s}"]
    if failure.function is not None:
        lines.append("f = " + ", ".join(f"{k}↦{v}" for k, v in failure.function.items()))
    lines += [
        f"  {failure.instance}",
        f"    ├─{a.center(width, '─')}▶ {failure.path_a}",
        f"    │{' ' * (width + 4)}≠",
        f"    └─{b.center(width, '─')}▶ {failure.path_b}",
    ]
    return "\n".join(lines)


# ---------------------------------------------------------------- micro search

@dataclass(frozen=True)
class MicroSearch:
    s: str
    t: str
    status: SearchStatus
    survivors: tuple[TableLaw, ...] = ()
    statistics: dict = field(default_factory=dict, compare=False)

    def to_json(self) -> JsonDict:
        return {
            "direction": f"{self.s}∘{self.t} ⇒ {self.t}∘{self.s}", "status": self.status,
            "survivors": [{key.text: value.text for key, value in law.table.items()} for law in self.survivors],
            "statistics": dict(self.statistics),
        }


class _Blocked(Exception):
    def __init__(self, key: FreeElement) -> None:
        self.key = key


class _Outside(Exception):
    pass


MAX_SURVIVORS = 64


def micro_search(S: Theory, T: Theory, bounds: Optional[Bounds] = None) -> MicroSearch:
    """
    search every law table on S(T(X)) at tiny bounds that passes the unit, naturality and multiplication instances

    The domain holds the S-terms of at most `max_leaves` leaves over T-elements whose leaf counts multiply to at
    most `max_leaves`; a value is a T(S(Y))-element over the generators Y of its input, with `max_leaves` leaves per
    layer. Survivors are candidates at these bounds, exhaustion is evidence, neither is a proof.

    Raises:
        PreconditionError: max_carrier or max_leaves above 2
    """
    bounds = bounds or Bounds()
    if bounds.max_carrier > 2 or bounds.max_leaves > 2:
        raise PreconditionError("micro_search runs at max_carrier ≤ 2 and max_leaves ≤ 2 only")
    k, B = bounds.max_carrier, bounds.max_leaves
    X = carrier(S, T, k)
    tx = enumerate_elements(T, X, B, bounds)
    weight = {t.box: max(1, leaves(t.term)) for t in tx}

    def in_domain(e: FreeElement) -> bool:
        total = 1
        for _, sub in positions(e.term):
            if isinstance(sub, Var):
                total *= weight.get(sub.name, B + 1)
        return total <= B

    domain = [e for e in enumerate_elements(S, tx, B, bounds) if in_domain(e)]
    table = TableLaw(S, T, X)
    fixed: dict[FreeElement, FreeElement] = {}
    for t in tx:
        fixed[unit(S, t)] = fmap(T, lambda name: unit(S, name).box, t)
    for s in enumerate_elements(S, X, B, bounds):
        key, value = fmap(S, lambda name: unit(T, name).box, s), unit(T, s)
        if fixed.setdefault(key, value) != value:
            return MicroSearch(S.name, T.name, "exhausted", (), {"conflict": key.text})
    free = [e for e in domain if e not in fixed]
    candidates = {e: enumerate_elements(T, enumerate_elements(S, table.inner_generators(e), B, bounds), B, bounds)
                  for e in free}
    free.sort(key=lambda e: (len(candidates[e]), term_key(e.term)))
    free_set = set(free)
    assignment: dict[FreeElement, FreeElement] = {}

    def values(key: FreeElement) -> FreeElement:
        if key in fixed:
            return fixed[key]
        if key in assignment:
            return assignment[key]
        if key in free_set:
            raise _Blocked(key)
        raise _Outside

    def lam(e: FreeElement) -> FreeElement:
        try:
            return table.lookup(e, values)
        except DomainError as err:
            raise _Outside from err

    law = CandidateLaw("table", "table", S, T, table=table)
    streams = beck_instances(law, X, B, bounds, lam)
    checks = [check for axiom in ("naturality", "mult1", "mult2") for _, _, check in streams[axiom]]

    watch: dict[Optional[FreeElement], list[int]] = {None: list(range(len(checks)))}
    nodes = 0
    survivors: list[TableLaw] = []
    statistics = {"domain": len(domain), "fixed": len(fixed), "free": len(free), "instances": len(checks)}

    def settle(key: Optional[FreeElement]) -> Optional[list[tuple[int, Optional[FreeElement]]]]:
        """re-run the instances waiting on `key`; None on a violated instance, else the moves to undo"""
        waiting = watch.pop(key, [])
        moves: list[tuple[int, Optional[FreeElement]]] = []
        for index in waiting:
            try:
                a, b = checks[index]()
            except _Blocked as blocked:
                watch.setdefault(blocked.key, []).append(index)
                moves.append((index, blocked.key))
                continue
            except _Outside:
                moves.append((index, None))
                continue
            moves.append((index, None))
            if a != b:
                undo(key, moves + [(i, None) for i in waiting[len(moves):]])
                return None
        return moves

    def undo(key: Optional[FreeElement], moves: list[tuple[int, Optional[FreeElement]]]) -> None:
        for index, moved in moves:
            if moved is not None:
                watch[moved].remove(index)
        watch[key] = [index for index, _ in moves]

    def search(depth: int) -> bool:
        nonlocal nodes
        if depth == len(free):
            survivors.append(TableLaw(S, T, X, {**fixed, **assignment}))
            return len(survivors) < MAX_SURVIVORS
        key = free[depth]
        for value in candidates[key]:
            nodes += 1
            if nodes > bounds.search_max_nodes:
                raise ResourceError("micro search node cap", budget={"search_max_nodes": bounds.search_max_nodes})
            assignment[key] = value
            moves = settle(key)
            if moves is not None:
                go_on = search(depth + 1)
                undo(key, moves)
                if not go_on:
                    del assignment[key]
                    return False
            del assignment[key]
        return True

    if settle(None) is None:
        return MicroSearch(S.name, T.name, "exhausted", (), {**statistics, "nodes": 0})
    try:
        search(0)
        status: SearchStatus = "survivors" if survivors else "exhausted"
    except ResourceError:
        status = "aborted"
    statistics["nodes"] = nodes
    logger.info(f"micro search {S.name}∘{T.name}: {status}, {len(survivors)} survivors, {nodes} nodes")
    return MicroSearch(S.name, T.name, status, tuple(survivors), statistics)


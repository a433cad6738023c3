"""
Free model monads of catalog theories at finite bounds.

An element of T(X) is the canonical form of a term over the generator names X. Nested carriers reuse the same
machinery: an element of S(T(X)) is an S-term whose variables are boxed T-elements, i.e. variables named
`[<canonical text>]`, which `unbox` parses back against the inner theory.
"""
# Standard Library
import itertools
from functools import lru_cache
from dataclasses import dataclass, field
from typing import Callable, Hashable, Iterator, Mapping, Optional, Sequence, Union

# Third-Party Library
from loguru import logger

# My Library
from utils.helper import Bounds
from utils.annotation import EqStatus, JsonDict
from utils.errors import DomainError, PreconditionError, ResourceError, UnsupportedOperationError
from utils.dsl import parse_term
from utils.term import (Term, Var, App, OperationSymbol, Signature,
                        term_vars, substitute, rename, render, term_key, match, instantiate)
from .theory import Theory
from .equality import decide_equal


@dataclass(frozen=True)
class FreeElement:
    value: Hashable
    term: Term = field(compare=False)

    @property
    def text(self) -> str:
        return render(self.term)

    @property
    def box(self) -> str:
        return f"[{self.text}]"

    @property
    def generators(self) -> tuple[str, ...]:
        return term_vars(self.term)

    def __str__(self) -> str:
        return self.text


Generator = Union[str, FreeElement]


def _oracle(th: Theory):
    if th.oracle is None:
        raise UnsupportedOperationError(f"{th.name} has no builtin oracle, free algebras need exact equality")
    return th.oracle


def element(th: Theory, t: Term) -> FreeElement:
    oracle = _oracle(th)
    value = oracle.canonical(t)
    return FreeElement(value, oracle.reify(value))


def generator_name(g: Generator) -> str:
    return g.box if isinstance(g, FreeElement) else g


@lru_cache(maxsize=1 << 16)
def unbox(th: Theory, name: str) -> FreeElement:
    """the element of `th` whose boxed name is `name`"""
    if not (name.startswith("[") and name.endswith("]")):
        raise DomainError(f"{name} is not a boxed element")
    return element(th, parse_term(name[1:-1], th.signature))


# ---------------------------------------------------------------- monad structure

def unit(th: Theory, g: Generator) -> FreeElement:
    return element(th, Var(generator_name(g)))


def mult(th: Theory, nested: FreeElement) -> FreeElement:
    """flatten an element whose generators are boxed elements of the same theory"""
    inner = {name: unbox(th, name).term for name in nested.generators}
    return element(th, substitute(nested.term, inner))


NameMap = Union[Mapping[str, str], Callable[[str], str]]


def _as_callable(f: NameMap) -> Callable[[str], str]:
    if callable(f):
        return f
    return lambda name: f[name] if name in f else _missing(name)


def _missing(name: str) -> str:
    raise DomainError(f"map is not defined on generator {name}")


def fmap(th: Theory, f: NameMap, e: FreeElement) -> FreeElement:
    """functor action: rename generators by `f`, then renormalize"""
    g = _as_callable(f)
    return element(th, rename(e.term, {name: g(name) for name in e.generators}))


def lift(th: Theory, f: NameMap) -> Callable[[str], str]:
    """the action of `th` on boxed names: [e] ↦ [fmap(f, e)]"""
    return lambda name: fmap(th, f, unbox(th, name)).box


# ---------------------------------------------------------------- enumeration

def _operations(th: Theory, grid: Sequence) -> list[OperationSymbol]:
    sig = th.signature
    ops = [OperationSymbol(name, arity) for name, arity in sig.operations]
    ops += [OperationSymbol(name, arity, p) for name, arity in sig.families for p in grid]
    excluded = set(th.exclude_ops)
    return [op for op in ops if op.label not in excluded]


def _compositions(total: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


@lru_cache(maxsize=256)
def _enumerate(th: Theory, names: tuple[str, ...], bound: int, grid: tuple, cap: int,
               strict: bool) -> tuple[FreeElement, ...]:
    ops = _operations(th, grid)
    unary = [op for op in ops if op.arity == 1]
    seen: set[FreeElement] = set()
    levels: dict[int, list[FreeElement]] = {}

    def admit(e: FreeElement, level: list[FreeElement]) -> bool:
        if e in seen:
            return True
        if len(seen) >= cap:
            if strict:
                raise ResourceError("enumeration cap exceeded", budget={"enumeration_cap": cap},
                                    statistics={"theory": th.name, "generators": len(names), "bound": bound})
            return False
        seen.add(e)
        level.append(e)
        return True

    for k in range(1, bound + 1):
        level: list[FreeElement] = []
        if k == 1:
            leaf_terms = [Var(name) for name in names] + [App(OperationSymbol(c, 0)) for c in th.signature.constants]
            candidates: Iterator[Term] = iter(leaf_terms)
        else:
            candidates = (App(op, tuple(a.term for a in args))
                          for op in ops if op.arity >= 2
                          for split in _compositions(k, op.arity)
                          for args in itertools.product(*(levels[part] for part in split)))
        for t in candidates:
            if not admit(element(th, t), level):
                break
        for e in list(level):
            for op in unary:
                if not admit(element(th, App(op, (e.term,))), level):
                    break
        levels[k] = level
    result = tuple(sorted(seen, key=lambda e: term_key(e.term)))
    logger.debug(f"{th.name}: {len(result)} elements over {len(names)} generators with ≤ {bound} leaves")
    return result


def enumerate_elements(th: Theory, generators: Sequence[Generator], bound: int = 2,
                       bounds: Optional[Bounds] = None, strict: bool = True) -> tuple[FreeElement, ...]:
    """
    all elements of the free algebra with a representative of at most `bound` leaves

    Args:
        th (Theory): a catalog theory
        generators (Sequence[Generator]): generator names, or elements of an inner free algebra
        bound (int): maximal number of leaves (variables and constants) of a representative
        bounds (Optional[Bounds]): supplies the enumeration cap and the parameter grid of families
        strict (bool): raise at the cap, otherwise return the truncated enumeration

    Raises:
        ResourceError: more elements than the enumeration cap (strict mode)
        PreconditionError: a generator name clashes with a constant of the theory

    Returns:
        tuple[FreeElement, ...]: duplicate-free, in canonical order
    """
    _oracle(th)
    bounds = bounds or Bounds()
    names = tuple(dict.fromkeys(generator_name(g) for g in generators))
    if clash := set(names) & set(th.signature.names):
        raise PreconditionError(f"generators {sorted(clash)} clash with symbols of {th.name}")
    return _enumerate(th, names, bound, tuple(bounds.convex_grid), bounds.enumeration_cap, strict)


@dataclass(frozen=True, eq=False)
class FreeAlgebra:
    theory: Theory
    generators: tuple[Generator, ...]
    bound: int = 2
    bounds: Optional[Bounds] = None

    @property
    def names(self) -> tuple[str, ...]:
        return tuple(generator_name(g) for g in self.generators)

    @property
    def elements(self) -> tuple[FreeElement, ...]:
        return enumerate_elements(self.theory, self.generators, self.bound, self.bounds)

    def unit(self, g: Generator) -> FreeElement:
        if generator_name(g) not in self.names:
            raise DomainError(f"{generator_name(g)} is not a generator of this free algebra")
        return unit(self.theory, g)

    def __iter__(self) -> Iterator[FreeElement]:
        return iter(self.elements)

    def __len__(self) -> int:
        return len(self.elements)

    def __contains__(self, e: FreeElement) -> bool:
        return e in set(self.elements)


# ---------------------------------------------------------------- monad laws

@dataclass(frozen=True)
class MonadLawFailure:
    law: str
    instance: str
    lhs: str
    rhs: str


@dataclass(frozen=True)
class MonadLawReport:
    theory: str
    checked: dict = field(default_factory=dict, compare=False)
    failure: Optional[MonadLawFailure] = None
    complete: bool = True

    @property
    def passed(self) -> bool:
        return self.failure is None

    def to_json(self) -> JsonDict:
        return {
            "theory": self.theory, "checked": dict(self.checked), "complete": self.complete,
            "failure": None if self.failure is None else vars(self.failure),
        }


Mult = Callable[[Theory, FreeElement], FreeElement]


def check_monad_laws(th: Theory, generators: Sequence[str], bound: int = 2, bounds: Optional[Bounds] = None,
                     mult_fn: Mult = mult) -> MonadLawReport:
    """
    check the two unit laws and associativity of (unit, mult) on every enumerated instance

    Associativity instances live in T(T(T(X))) with `bound` leaves per layer; the two outer layers are truncated at
    the enumeration cap, which marks the report incomplete.
    """
    bounds = bounds or Bounds()
    base = enumerate_elements(th, generators, bound, bounds)
    checked = {"unit1": 0, "unit2": 0, "assoc": 0}

    def fail(law: str, instance: FreeElement, lhs: FreeElement, rhs: FreeElement) -> MonadLawReport:
        logger.warning(f"{th.name}: {law} fails at {instance}: {lhs} ≠ {rhs}")
        return MonadLawReport(th.name, checked, MonadLawFailure(law, instance.text, lhs.text, rhs.text))

    for e in base:
        lhs = mult_fn(th, unit(th, e))
        checked["unit1"] += 1
        if lhs != e:
            return fail("unit1", e, lhs, e)
    for e in base:
        lhs = mult_fn(th, fmap(th, lambda name: unit(th, name).box, e))
        checked["unit2"] += 1
        if lhs != e:
            return fail("unit2", e, lhs, e)

    middle = enumerate_elements(th, base, bound, bounds, strict=False)
    outer = enumerate_elements(th, middle, bound, bounds, strict=False)
    complete = len(middle) < bounds.enumeration_cap and len(outer) < bounds.enumeration_cap
    flatten_inner = lambda name: mult_fn(th, unbox(th, name)).box
    for e in outer:
        lhs = mult_fn(th, mult_fn(th, e))
        rhs = mult_fn(th, fmap(th, flatten_inner, e))
        checked["assoc"] += 1
        if lhs != rhs:
            return fail("assoc", e, lhs, rhs)
    logger.info(f"{th.name}: monad laws hold on {checked}")
    return MonadLawReport(th.name, checked, None, complete)


# ---------------------------------------------------------------- mixed terms

@dataclass(frozen=True)
class MixedSignature:
    """the disjoint union of the S and T signatures; T symbols are primed when the names clash"""

    signature: Signature
    s_signature: Signature
    t_signature: Signature
    primed: bool

    def t_name(self, name: str) -> str:
        return name + "'" if self.primed else name

    def is_t(self, symbol: OperationSymbol) -> bool:
        return symbol.name in self.t_signature.names

    def to_t(self, t: Term) -> Term:
        """strip the primes of a term built from T symbols only"""
        if isinstance(t, Var) or not self.primed:
            return t
        symbol = OperationSymbol(t.symbol.name[:-1], t.symbol.arity, t.symbol.param)
        return App(symbol, tuple(self.to_t(arg) for arg in t.args))

    def from_t(self, t: Term) -> Term:
        if isinstance(t, Var) or not self.primed:
            return t
        symbol = OperationSymbol(self.t_name(t.symbol.name), t.symbol.arity, t.symbol.param)
        return App(symbol, tuple(self.from_t(arg) for arg in t.args))


def mixed_signature(S: Theory, T: Theory) -> MixedSignature:
    primed = bool(S.signature.names & T.signature.names)
    t_sig = T.signature.renamed("'") if primed else T.signature
    return MixedSignature(S.signature.union(t_sig), S.signature, t_sig, primed)


@dataclass(frozen=True)
class RewriteRule:
    name: str
    lhs: Term
    rhs: Term


@dataclass(frozen=True)
class SeparatedTerm:
    outer: Term
    family: tuple[tuple[str, Term], ...]

    def __post_init__(self):
        domain = {name for name, _ in self.family}
        if missing := [x for x in term_vars(self.outer) if x not in domain]:
            raise DomainError(f"outer variables {missing} have no family member")

    @property
    def family_map(self) -> dict[str, Term]:
        return dict(self.family)

    def mixed(self, mixed_sig: MixedSignature) -> Term:
        return substitute(mixed_sig.from_t(self.outer), self.family_map)

    def __str__(self) -> str:
        pairs = ", ".join(f"{name} ↦ {render(t)}" for name, t in self.family)
        return f"{render(self.outer)} where {{{pairs}}}"

    def to_json(self) -> JsonDict:
        return {"outer": render(self.outer), "family": {name: render(t) for name, t in self.family}}


def rewrite_innermost(t: Term, rules: Sequence[RewriteRule], budget: int) -> tuple[Term, int]:
    """innermost normalization; rules are tried in order at each position, children first"""
    steps = 0

    def go(u: Term) -> Term:
        nonlocal steps
        if isinstance(u, Var):
            return u
        u = App(u.symbol, tuple(go(arg) for arg in u.args))
        for rule in rules:
            found = match(rule.lhs, u)
            if found is None:
                continue
            # a parameter pushed out of its range means the rule does not apply here
            if (result := instantiate(rule.rhs, *found)) is None:
                continue
            steps += 1
            if steps > budget:
                raise ResourceError("separation did not terminate within the step budget",
                                    budget={"search_max_nodes": budget}, statistics={"rule": rule.name})
            return go(result)
        return u

    return go(t), steps


def separate(S: Theory, T: Theory, rules: Sequence[RewriteRule], mixed: Term,
             bounds: Optional[Bounds] = None) -> SeparatedTerm:
    """
    rewrite a mixed term into a T-term over S-terms, normalizing both layers

    The family is indexed by the boxed S normal forms, so S-equal members share one index.

    Raises:
        ResourceError: the rule program exceeds the step budget
        DomainError: an S symbol is left above a T symbol after rewriting
    """
    bounds = bounds or Bounds()
    mixed_sig = mixed_signature(S, T)
    normal, steps = rewrite_innermost(mixed, rules, bounds.search_max_nodes)

    family: dict[str, Term] = {}

    def split(u: Term) -> Term:
        if isinstance(u, App) and mixed_sig.is_t(u.symbol):
            return App(u.symbol, tuple(split(arg) for arg in u.args))
        s_term = _s_normal(S, u, mixed_sig)
        name = f"[{render(s_term)}]"
        family.setdefault(name, s_term)
        return Var(name)

    outer = mixed_sig.to_t(split(normal))
    if T.oracle is not None:
        outer = T.oracle.normalize(outer)
    used = set(term_vars(outer))
    result = SeparatedTerm(outer, tuple((name, t) for name, t in family.items() if name in used))
    logger.debug(f"separated {render(mixed)} in {steps} steps: {result}")
    return result


def _s_normal(S: Theory, u: Term, mixed_sig: MixedSignature) -> Term:
    for _, sub in _app_positions(u):
        if mixed_sig.is_t(sub.symbol):
            raise DomainError(f"{render(u)} is not separated: a T symbol remains below an S symbol")
    return S.oracle.normalize(u) if S.oracle is not None else u


def _app_positions(t: Term) -> Iterator[tuple[tuple[int, ...], App]]:
    if isinstance(t, App):
        yield (), t
        for i, arg in enumerate(t.args):
            for path, sub in _app_positions(arg):
                yield (i,) + path, sub


# ---------------------------------------------------------------- equality modulo (T, S)

@dataclass(frozen=True)
class ModuloResult:
    status: EqStatus
    g1: dict = field(default_factory=dict, compare=False)
    g2: dict = field(default_factory=dict, compare=False)
    classes: tuple[str, ...] = ()

    @property
    def equal(self) -> bool:
        return self.status == "Equal"


def equal_modulo(S: Theory, T: Theory, u: SeparatedTerm, v: SeparatedTerm,
                 bounds: Optional[Bounds] = None) -> ModuloResult:
    """
    decide whether two separated terms are equal modulo (T, S)

    Z is the set of S-equality classes of all family members of u and v; g1 and g2 send an index to the class of
    its member, which satisfies every class-membership condition by construction. The answer is then T-equality of
    the relabeled outer terms.
    """
    members = list(u.family) + list(v.family)
    reps: list[Term] = []
    labels: dict[int, str] = {}
    for i, (_, s) in enumerate(members):
        for j, rep in enumerate(reps):
            verdict = decide_equal(S, s, rep, bounds)
            if not verdict.decisive:
                return ModuloResult("Unknown")
            if verdict.equal:
                labels[i] = f"z{j + 1}"
                break
        else:
            reps.append(s)
            labels[i] = f"z{len(reps)}"
    g1 = {name: labels[i] for i, (name, _) in enumerate(u.family)}
    g2 = {name: labels[len(u.family) + i] for i, (name, _) in enumerate(v.family)}
    verdict = decide_equal(T, rename(u.outer, g1), rename(v.outer, g2), bounds)
    status: EqStatus = verdict.status
    return ModuloResult(status, g1, g2, tuple(render(rep) for rep in reps))

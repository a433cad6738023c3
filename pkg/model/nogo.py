"""
No-go checkers: certify the hypotheses of the impossibility theorems for a pair of theories.

A verdict always concerns a law S∘T ⇒ T∘S, i.e. a composite of T after S. The Plotkin theorems bind their
non-deterministic theory (p) to T and their probabilistic theory (v) to S. Every hypothesis becomes an obligation
tagged with its axiom number (Ax1 to Ax24): existential axioms are decided on concrete instances, universal axioms
are discharged by citing the metaproperty certificate of the theory.
"""
# Standard Library
import itertools
from functools import lru_cache
from dataclasses import dataclass, field, replace
from typing import Iterator, Optional, Sequence

# Third-Party Library
from loguru import logger

# My Library
from utils.helper import Bounds
from utils.annotation import (AxiomId, Side, Resolution, TheoremId, VerdictKind, SoundnessTier,
                              MetaProperty, EqStatus, JsonDict)
from utils.errors import PreconditionError, WitnessError
from utils.dsl import parse_term
from utils.term import (Term, Var, App, OperationSymbol, Equation, const, term_vars, substitute, rename, size,
                        positions, replace_at, term_key, match, render)
from .theory import Theory
from .equality import EqVerdict, decide_equal, proof_pool, consistency, operation_instances
from .free import mixed_signature
from .law import BeckReport, get_law, check_beck


SCHEMA: dict[TheoremId, dict[Side, tuple[AxiomId, ...]]] = {
    "Plotkin1": {"S": (1, 8, 24), "T": (1, 4, 6)},
    "PlotkinN": {"S": (1, 14, 24), "T": (9, 12, 13)},
    "PlotkinNoComm": {"S": (1, 8, 24), "T": (1, 6, 7, 24)},
    "PlotkinIdemUnit": {"S": (1, 8, 24), "T": (3, 4, 6)},
    "TooManyConstants": {"S": (11,), "T": (21, 22)},
    "TimesOverPlusUnique": {"S": (2, 19, 23, 24), "T": (2, 23, 24)},
    "LackingAbides": {"S": (2, 19, 23, 24), "T": (2, 5, 23, 24)},
    "IdemUnits": {"S": (1, 2, 19, 23, 24), "T": (2, 23, 24)},
    "InverseTrouble": {"S": (10, 16, 17), "T": (20, 22)},
    "AbsorptionTrouble": {"S": (15, 18), "T": (20, 22)},
}

# cheap metaproperty checks first
CASCADE: tuple[TheoremId, ...] = (
    "TooManyConstants", "IdemUnits", "LackingAbides", "PlotkinIdemUnit", "Plotkin1", "PlotkinNoComm",
    "PlotkinN", "InverseTrouble", "AbsorptionTrouble", "TimesOverPlusUnique",
)

THEORY_AXIOMS: frozenset[AxiomId] = frozenset(range(19, 25))

VARIABLES: tuple[str, ...] = ("x", "y", "z", "w")

FILTER_CAP = 8


# ---------------------------------------------------------------- witnesses

Pairs = tuple[tuple[str, Term], ...]


@dataclass(frozen=True)
class WitnessSlice:
    """the part of a witness bundle one axiom looks at; probes return it completed with what they found"""

    term: Optional[Term] = None
    constant: Optional[str] = None
    sigma: Optional[tuple[int, ...]] = None
    substitution: Optional[Pairs] = None
    other: Optional[Term] = None
    other_substitution: Optional[Pairs] = None


@dataclass(frozen=True)
class WitnessBundle:
    p: Optional[Term] = None
    v: Optional[Term] = None
    s_op: Optional[Term] = None
    t_op: Optional[Term] = None
    s: Optional[Term] = None
    s_prime: Optional[Term] = None
    s_double: Optional[Term] = None
    e_s: Optional[str] = None
    e_t: Optional[str] = None
    f_p: Optional[Pairs] = None
    f: Optional[Pairs] = None
    f_prime: Optional[Pairs] = None
    sigma: Optional[tuple[int, ...]] = None
    s_exclude: tuple[str, ...] = ()
    t_exclude: tuple[str, ...] = ()

    def __post_init__(self):
        if self.sigma is not None:
            _check_sigma(self.sigma, WitnessError)

    def to_json(self) -> JsonDict:
        data: JsonDict = {}
        for name in ("p", "v", "s_op", "t_op", "s", "s_prime", "s_double"):
            if (t := getattr(self, name)) is not None:
                data[name] = render(t)
        for name in ("e_s", "e_t"):
            if (e := getattr(self, name)) is not None:
                data[name] = e
        for name in ("f_p", "f", "f_prime"):
            if (pairs := getattr(self, name)) is not None:
                data[name] = {x: render(t) for x, t in pairs}
        if self.sigma is not None:
            data["sigma"] = [i + 1 for i in self.sigma]
        if self.s_exclude:
            data["s_exclude"] = list(self.s_exclude)
        if self.t_exclude:
            data["t_exclude"] = list(self.t_exclude)
        return data


def _check_sigma(sigma: Sequence[int], error: type) -> None:
    if sorted(sigma) != list(range(len(sigma))):
        raise error(f"{[i + 1 for i in sigma]} is not a permutation")
    if any(sigma[i] == i for i in range(len(sigma))):
        raise error(f"{[i + 1 for i in sigma]} has a fixed point")


S_TERMS = ("v", "s_op", "s", "s_prime", "s_double")

T_TERMS = ("p", "t_op")


def _parse_pairs(text: str, th: Theory) -> Pairs:
    pairs = []
    for item in text.split(";"):
        if not item.strip():
            continue
        name, sep, value = item.partition(":")
        if not sep:
            raise WitnessError(f"expected 'var:term' in substitution {text!r}")
        pairs.append((name.strip(), parse_term(value, th.signature)))
    return tuple(pairs)


def parse_witnesses(S: Theory, T: Theory, items: Sequence[str]) -> WitnessBundle:
    """
    build a bundle from `key=value` items, e.g. `v=+@{1/2}(x,y)`, `e_t=0`, `f=x:y;y:⊤`, `sigma=2,1`

    Raises:
        WitnessError: unknown key, unknown constant or malformed value
        ParseError: a witness term does not parse over its theory
    """
    values: dict = {}
    for item in items:
        key, sep, text = item.partition("=")
        key = key.strip()
        if not sep:
            raise WitnessError(f"expected key=value, got {item!r}")
        if key in S_TERMS:
            values[key] = parse_term(text, S.signature)
        elif key in T_TERMS:
            values[key] = parse_term(text, T.signature)
        elif key in ("e_s", "e_t"):
            th = S if key == "e_s" else T
            if text.strip() not in th.signature.constants:
                raise WitnessError(f"{text.strip()} is not a constant of {th.name}")
            values[key] = text.strip()
        elif key in ("f", "f_prime"):
            values[key] = _parse_pairs(text, S)
        elif key == "f_p":
            values[key] = _parse_pairs(text, T)
        elif key == "sigma":
            try:
                values[key] = tuple(int(i) - 1 for i in text.split(",") if i.strip())
            except ValueError as e:
                raise WitnessError(f"malformed permutation {text!r}") from e
        elif key in ("s_exclude", "t_exclude"):
            values[key] = tuple(label.strip() for label in text.split(",") if label.strip())
        else:
            raise WitnessError(f"unknown witness {key!r}")
    return WitnessBundle(**values)


# ---------------------------------------------------------------- obligations

@dataclass(frozen=True)
class Obligation:
    axiom: AxiomId
    side: Side
    target: str
    instance: str
    resolution: Resolution
    holds: Optional[bool]
    evidence: JsonDict = field(default_factory=dict, compare=False)
    witness: Optional[WitnessSlice] = field(default=None, compare=False)

    @property
    def trusted(self) -> bool:
        return "user-asserted" in self.evidence.get("metaproperties", {}).values()

    def to_json(self) -> JsonDict:
        return {
            "axiom": f"Ax{self.axiom}", "side": self.side, "target": self.target, "instance": self.instance,
            "resolution": self.resolution, "holds": self.holds, "evidence": self.evidence,
        }


def _outcome(verdict: EqVerdict, want: EqStatus) -> tuple[Optional[bool], Resolution]:
    if not verdict.decisive:
        return None, "unknown"
    return verdict.status == want, "proved" if verdict.equal else "counterexample-found"


def _conjunction(th: Theory, goals: Sequence[tuple[Term, Term]],
                 bounds: Bounds) -> tuple[Optional[bool], Resolution, list[JsonDict]]:
    """every goal Equal; stops at the first Distinct"""
    evidence: list[JsonDict] = []
    unknown = False
    for lhs, rhs in goals:
        verdict = decide_equal(th, lhs, rhs, bounds)
        evidence.append({"goal": f"{render(lhs)} = {render(rhs)}", **verdict.to_json()})
        if verdict.distinct:
            return False, "counterexample-found", evidence
        unknown |= not verdict.decisive
    return (None, "unknown", evidence) if unknown else (True, "proved", evidence)


def _cite(th: Theory, side: Side, axiom: AxiomId, instance: str, props: Sequence[MetaProperty],
          w: WitnessSlice, refutes: bool = False) -> Obligation:
    cert = th.certificate
    cited = {prop: cert.provenance.get(prop, "builtin-audited") for prop in props}
    if all(cert.holds(prop) for prop in props):
        return Obligation(axiom, side, th.name, instance, "metaproperty-cited", not refutes,
                          {"metaproperties": cited}, w)
    missing = [prop for prop in props if not cert.holds(prop)]
    return Obligation(axiom, side, th.name, instance, "unknown", None, {"not_certified": missing}, w)


def _require(w: WitnessSlice, axiom: AxiomId, low: int, high: Optional[int] = None) -> tuple[Term, tuple[str, ...]]:
    if w.term is None:
        raise WitnessError(f"Ax{axiom} needs a witness term")
    xs = term_vars(w.term)
    if len(xs) < low or (high is not None and len(xs) > high):
        wanted = str(low) if high == low else f"at least {low}"
        raise WitnessError(f"Ax{axiom} needs a term with {wanted} variables, {render(w.term)} has {len(xs)}")
    return w.term, xs


def _constants(th: Theory, w: WitnessSlice) -> tuple[str, ...]:
    if w.constant is None:
        return th.signature.constants
    if w.constant not in th.signature.constants:
        raise WitnessError(f"{w.constant} is not a constant of {th.name}")
    return (w.constant,)


def _pairs(f: Optional[dict[str, Term]]) -> Optional[Pairs]:
    return None if f is None else tuple(sorted(f.items()))


# ---------------------------------------------------------------- reducibility

def _combine(results: Sequence[Optional[bool]], strict: bool) -> Optional[bool]:
    if strict:
        return False if False in results else (None if None in results else True)
    return True if True in results else (None if None in results else False)


def _reducing(th: Theory, t: Term, given: Optional[Pairs], strict: bool,
              bounds: Bounds) -> tuple[Optional[bool], Optional[dict[str, Term]], JsonDict]:
    """
    a substitution f with t[f(y)/y≠x] = x; strict asks it for every variable x at once, loose for one x

    Values of f range over the variables of t, the constants, and unary symbols applied to those.
    """
    xs = term_vars(t)
    memo: dict[tuple[str, Term], Optional[bool]] = {}

    def kept(x: str, f: dict[str, Term]) -> Optional[bool]:
        goal = substitute(t, {y: f[y] for y in xs if y != x})
        key = (x, goal)
        if key not in memo:
            verdict = decide_equal(th, goal, Var(x), bounds)
            memo[key] = verdict.equal if verdict.decisive else None
        return memo[key]

    if given is not None:
        f = dict(given)
        if missing := [x for x in xs if x not in f]:
            raise WitnessError(f"substitution misses {missing} of {render(t)}")
        return _combine([kept(x, f) for x in xs], strict), f, {"checked": len(memo)}

    pool = proof_pool(th.signature, [t])
    unknown = False
    if strict:
        for tries, values in enumerate(itertools.product(pool, repeat=len(xs))):
            if tries >= bounds.search_max_nodes:
                return None, None, {"checked": len(memo), "aborted": True}
            f = dict(zip(xs, values))
            outcome: Optional[bool] = True
            for x in xs:
                if (outcome := kept(x, f)) is not True:
                    break
            if outcome:
                return True, f, {"checked": len(memo)}
            unknown |= outcome is None
    else:
        for x in xs:
            others = [y for y in xs if y != x]
            for values in itertools.product(pool, repeat=len(others)):
                f = {x: Var(x), **dict(zip(others, values))}
                result = kept(x, f)
                if result:
                    return True, f, {"checked": len(memo), "kept": x}
                unknown |= result is None
    return (None if unknown else False), None, {"checked": len(memo)}


def _abstractions(t: Term) -> Iterator[tuple[Term, dict[str, Term]]]:
    """t written as t''[t_i/z_i] for every set of disjoint proper subterm positions, smallest sets first"""
    paths = [path for path, _ in positions(t) if path]
    taken = set(term_vars(t))
    fresh = [f"z{i}" for i in range(1, len(paths) + 2) if f"z{i}" not in taken]
    for k in range(1, len(paths) + 1):
        for chosen in itertools.combinations(paths, k):
            if any(a != b and a == b[:len(a)] for a in chosen for b in chosen):
                continue
            result, parts = t, {}
            for name, path in zip(fresh, chosen):
                sub = t
                for i in path:
                    sub = sub.args[i]
                parts[name] = sub
                result = replace_at(result, path, Var(name))
            yield result, parts


# ---------------------------------------------------------------- axiom probes

def axiom_probe(th: Theory, axiom: AxiomId, w: WitnessSlice = WitnessSlice(), bounds: Optional[Bounds] = None,
                side: Side = "S") -> Obligation:
    """
    discharge one axiom for one theory and witness slice

    Args:
        th (Theory): the theory the axiom is about
        axiom (AxiomId): 1 to 24
        w (WitnessSlice): the witness term and whatever the axiom needs next to it; a missing constant,
            substitution or permutation is searched for and returned in the obligation's witness
        bounds (Optional[Bounds]): budget of the equality decisions and searches
        side (Side): which side of the law the theory sits on, recorded in the obligation

    Raises:
        WitnessError: the slice does not fit the axiom's schema
        NotImplementedError: unknown axiom number

    Returns:
        Obligation: holds is True, False, or None when the evidence is inconclusive
    """
    bounds = bounds or Bounds()
    name = th.name

    def ob(instance: str, resolution: Resolution, holds: Optional[bool], evidence: JsonDict,
           slice_: WitnessSlice = w) -> Obligation:
        return Obligation(axiom, side, name, instance, resolution, holds, evidence, slice_)

    if axiom in (1, 9):
        t, xs = _require(w, axiom, 2 if axiom == 9 else 1)
        collapsed = substitute(t, {y: Var(xs[0]) for y in xs})
        holds, resolution, steps = _conjunction(th, [(collapsed, Var(xs[0]))], bounds)
        return ob(f"{render(collapsed)} = {xs[0]}", resolution, holds, {"steps": steps})

    elif axiom in (2, 10):
        t, xs = _require(w, axiom, 2, 2 if axiom == 2 else None)
        tried, unknown = [], False
        for e in _constants(th, w):
            goals = [(substitute(t, {y: const(e) for y in xs if y != x}), Var(x)) for x in xs]
            holds, resolution, steps = _conjunction(th, goals, bounds)
            if holds:
                return ob(f"{e} is a unit of {render(t)}", resolution, True, {"constant": e, "steps": steps},
                          replace(w, constant=e))
            unknown |= holds is None
            tried.append(e)
        if not tried:
            return ob(f"{render(t)} has a unit", "proved", False, {"constants": []})
        return ob(f"{render(t)} has a unit", "unknown" if unknown else "counterexample-found",
                  None if unknown else False, {"tried": tried})

    elif axiom in (3, 11, 15):
        t, xs = _require(w, axiom, 2 if axiom == 11 else 1)
        holds, f, stats = _reducing(th, t, w.substitution, axiom != 3, bounds)
        instance = f"{render(t)}[f(y)/y≠x] = x"
        if holds:
            return ob(instance, "proved", True, {"f": {x: render(u) for x, u in f.items()}, **stats},
                      replace(w, substitution=_pairs(f)))
        return ob(instance, "unknown" if holds is None else "counterexample-found", holds, stats)

    elif axiom == 4:
        t, (a, b) = _require(w, axiom, 2, 2)
        swapped = rename(t, {a: b, b: a})
        holds, resolution, steps = _conjunction(th, [(t, swapped)], bounds)
        return ob(f"{render(t)} = {render(swapped)}", resolution, holds, {"steps": steps})

    elif axiom == 5:
        t, (a, b) = _require(w, axiom, 2, 2)
        op = lambda left, right: substitute(t, {a: left, b: right})
        x, y, z, u = (Var(n) for n in VARIABLES)
        lhs, rhs = op(op(x, y), op(z, u)), op(op(x, z), op(y, u))
        verdict = decide_equal(th, lhs, rhs, bounds)
        holds, resolution = _outcome(verdict, "Distinct")
        return ob(f"{render(lhs)} ≠ {render(rhs)}", resolution, holds, verdict.to_json())

    elif axiom in (6, 13):
        t, xs = _require(w, axiom, 1)
        return _cite(th, side, axiom, f"every term equal to {render(t)} uses only {{{','.join(xs)}}}",
                     ["variable_faithful"], w)

    elif axiom in (7, 8, 14):
        need = 1 if axiom == 7 else 2
        t, xs = _require(w, axiom, 1)
        instance = f"every term equal to {render(t)} has at least {need} variable{'s' if need > 1 else ''}"
        if len(xs) < need:
            return ob(instance, "counterexample-found", False, {"term": render(t)})
        if th.oracle is not None and len(term_vars(nf := th.oracle.normalize(t))) < need:
            return ob(instance, "counterexample-found", False, {"normal_form": render(nf)})
        return _cite(th, side, axiom, instance, ["variable_faithful"], w)

    elif axiom == 12:
        t, xs = _require(w, axiom, 2)
        if w.sigma is not None:
            if len(w.sigma) != len(xs):
                raise WitnessError(f"σ permutes {len(w.sigma)} positions, {render(t)} has {len(xs)} variables")
            _check_sigma(w.sigma, WitnessError)
            sigmas = [w.sigma]
        else:
            sigmas = [p for p in itertools.permutations(range(len(xs))) if all(p[i] != i for i in range(len(p)))]
        unknown = False
        for sigma in sigmas:
            permuted = rename(t, {xs[i]: xs[sigma[i]] for i in range(len(xs))})
            holds, resolution, steps = _conjunction(th, [(t, permuted)], bounds)
            if holds:
                return ob(f"{render(t)} = {render(permuted)}", resolution, True,
                          {"sigma": [i + 1 for i in sigma], "steps": steps}, replace(w, sigma=tuple(sigma)))
            unknown |= holds is None
        return ob(f"{render(t)} is stable under a fixed-point free permutation",
                  "unknown" if unknown else "counterexample-found", None if unknown else False,
                  {"permutations": len(sigmas)})

    elif axiom == 16:
        t, xs = _require(w, axiom, 1)
        if w.other is not None:
            found = match(w.other, t)
            if found is None:
                raise WitnessError(f"{render(t)} is not an instance of {render(w.other)}")
            decompositions: Iterator = iter([(w.other, found[0])])
        else:
            decompositions = _abstractions(t)
        unknown, tried = False, 0
        for outer, parts in decompositions:
            if not set(term_vars(outer)) & set(xs):
                continue
            tried += 1
            holds, f, stats = _reducing(th, outer, w.substitution, True, bounds)
            if holds:
                return ob(f"{render(t)} = {render(outer)}[{', '.join(f'{render(u)}/{z}' for z, u in parts.items())}]",
                          "proved", True, {"s_double": render(outer), "f": {x: render(u) for x, u in f.items()}},
                          replace(w, other=outer, substitution=_pairs(f)))
            unknown |= holds is None
        return ob(f"{render(t)} decomposes over a reducible term", "unknown" if unknown else "counterexample-found",
                  None if unknown else False, {"decompositions": tried})

    elif axiom == 17:
        t, xs = _require(w, axiom, 0)
        if not xs:
            return ob(f"{render(t)} has a variable", "proved", False, {})
        unknown = False
        for e in _constants(th, w):
            verdict = decide_equal(th, t, const(e), bounds)
            if verdict.equal:
                return ob(f"{render(t)} = {e}", "proved", True, verdict.to_json(), replace(w, constant=e))
            unknown |= not verdict.decisive
        return ob(f"{render(t)} equals a constant", "unknown" if unknown else "counterexample-found",
                  None if unknown else False, {"constants": list(_constants(th, w))})

    elif axiom == 18:
        t, xs = _require(w, axiom, 2)
        if w.other is not None:
            candidates: list[Term] = [w.other]
        else:
            candidates = []
            if th.oracle is not None and set(term_vars(nf := th.oracle.normalize(t))) < set(xs):
                candidates.append(nf)
            for k in range(1, len(xs)):
                for kept in itertools.combinations(xs, k):
                    names = dict(zip(VARIABLES, kept))
                    candidates += [rename(c, names) for c in candidate_terms(th, k, bounds)]
        unknown = False
        for other in candidates:
            if not set(xs) - set(term_vars(other)) or not term_vars(other):
                continue
            verdict = decide_equal(th, t, other, bounds)
            if not verdict.equal:
                unknown |= not verdict.decisive
                continue
            holds, f, stats = _reducing(th, other, w.other_substitution, True, bounds)
            if holds:
                return ob(f"{render(t)} = {render(other)}", "proved", True,
                          {"s_prime": render(other), "f_prime": {x: render(u) for x, u in f.items()},
                           **verdict.to_json()},
                          replace(w, other=other, other_substitution=_pairs(f)))
            unknown |= holds is None
        return ob(f"{render(t)} absorbs a variable", "unknown" if unknown else "counterexample-found",
                  None if unknown else False, {"candidates": len(candidates)})

    elif axiom == 19:
        return _cite(th, side, axiom, "every term of arity ≥ 1 reduces to a variable",
                     ["all_ops_unital_or_idempotent"], w)

    elif axiom == 20:
        constants = _constants(th, w)
        if not constants:
            return ob(f"{name} has a constant", "proved", False, {"constants": []})
        return ob(f"{name} has the constant {constants[0]}", "proved", True, {"constant": constants[0]},
                  replace(w, constant=constants[0]))

    elif axiom == 21:
        constants = th.signature.constants
        unknown = False
        for e1, e2 in itertools.combinations(constants, 2):
            verdict = decide_equal(th, const(e1), const(e2), bounds)
            if verdict.distinct:
                return ob(f"{e1} ≠ {e2}", "counterexample-found", True, verdict.to_json())
            unknown |= not verdict.decisive
        return ob(f"{name} has two distinct constants", "unknown" if unknown else "proved",
                  None if unknown else False, {"constants": list(constants)})

    elif axiom == 22:
        instance = "t[f] = e for a renaming f implies t = e"
        if th.certificate.renaming_reflects_constants:
            return _cite(th, side, axiom, instance, ["renaming_reflects_constants"], w)
        return _cite(th, side, axiom, instance, ["variable_faithful", "closed_terms_are_constants"], w)

    elif axiom == 23:
        return _cite(th, side, axiom, "a term equal to a constant has no variables", ["variable_faithful"], w)

    elif axiom == 24:
        return _cite(th, side, axiom, "a term equal to x uses only x", ["variable_faithful"], w)

    else:
        raise NotImplementedError(f"Ax{axiom} is not a supported axiom")


# ---------------------------------------------------------------- witness search

def _operations(th: Theory, bounds: Bounds, exclude: Sequence[str]) -> list[OperationSymbol]:
    excluded = set(th.exclude_ops) | set(exclude)
    ops = [OperationSymbol(name, arity) for name, arity in th.signature.operations]
    ops += [OperationSymbol(name, arity, p) for name, arity in th.signature.families for p in bounds.convex_grid]
    return [op for op in ops if op.label not in excluded and op.name not in excluded]


def _smallest(th: Theory, terms: Sequence[Term]) -> list[Term]:
    """the smallest term per provable-equality class and variable set, when the theory has an oracle"""
    ordered = sorted(dict.fromkeys(terms), key=lambda t: (size(t), term_key(t)))
    if th.oracle is None:
        return ordered
    seen: dict = {}
    for t in ordered:
        # x+(-x) and 0 share a class but not a variable set
        seen.setdefault((th.oracle.canonical(t), frozenset(term_vars(t))), t)
    return list(seen.values())


@lru_cache(maxsize=512)
def candidate_terms(th: Theory, arity: int, bounds: Bounds, exclude: tuple[str, ...] = ()) -> tuple[Term, ...]:
    """
    witness candidates: terms over the first `arity` of x, y, z, w and the constants, with at most
    `witness_layers` operation layers, using every variable, smallest first
    """
    if not 1 <= arity <= len(VARIABLES):
        raise PreconditionError(f"witness arity must lie in 1..{len(VARIABLES)}, got {arity}")
    excluded = set(th.exclude_ops) | set(exclude)
    ops = _operations(th, bounds, exclude)
    pool: list[Term] = [Var(name) for name in VARIABLES[:arity]]
    pool += [const(name) for name in th.signature.constants if name not in excluded]
    for _ in range(bounds.witness_layers):
        layer = [App(op, args) for op in ops for args in itertools.product(pool, repeat=op.arity)]
        pool = _smallest(th, pool + layer)
        if len(pool) > bounds.enumeration_cap:
            logger.debug(f"{th.name}: witness pool truncated at {bounds.enumeration_cap}")
            pool = pool[:bounds.enumeration_cap]
    wanted = set(VARIABLES[:arity])
    candidates = tuple(t for t in pool if set(term_vars(t)) == wanted)
    logger.debug(f"{th.name}: {len(candidates)} witness candidates of arity {arity}")
    return candidates


def is_essential(th: Theory, t: Term) -> bool:
    """every variable of t survives normalization"""
    if th.oracle is None:
        return True
    return set(term_vars(th.oracle.normalize(t))) == set(term_vars(t))


def _axiom_list(axioms: Sequence[AxiomId]) -> str:
    return "+".join(f"Ax{axiom}" for axiom in axioms)


def _probe_all(th: Theory, side: Side, axioms: Sequence[AxiomId], w: WitnessSlice,
               bounds: Bounds) -> tuple[list[Obligation], WitnessSlice]:
    obligations = []
    for axiom in axioms:
        obligation = axiom_probe(th, axiom, w, bounds, side)
        obligations.append(obligation)
        w = obligation.witness or w
        if obligation.holds is not True:
            break
    return obligations, w


@lru_cache(maxsize=1024)
def _search(th: Theory, side: Side, axioms: tuple[AxiomId, ...], arities: tuple[int, ...], bounds: Bounds,
            essential: bool, base: WitnessSlice, exclude: tuple[str, ...]) -> tuple[tuple[Obligation, ...], Optional[WitnessSlice]]:
    """first candidate passing every probe in order; otherwise the deepest probe any candidate reached"""
    closest: Optional[Obligation] = None
    depth, tried, unknown = -1, 0, False
    for arity in arities:
        for t in candidate_terms(th, arity, bounds, exclude):
            if essential and not is_essential(th, t):
                continue
            tried += 1
            obligations, w = _probe_all(th, side, axioms, replace(base, term=t), bounds)
            last = obligations[-1]
            if len(obligations) == len(axioms) and last.holds:
                logger.debug(f"{th.name}: witness {render(t)} for {_axiom_list(axioms)} after {tried} candidates")
                return tuple(obligations), w
            if last.holds is None and "not_certified" in last.evidence:
                # the same citation blocks every other candidate
                return tuple(obligations), None
            unknown |= last.holds is None
            if len(obligations) - 1 > depth:
                depth, closest = len(obligations) - 1, obligations[-1]
    logger.debug(f"{th.name}: no witness for {_axiom_list(axioms)} among {tried} candidates")
    axiom = axioms[max(depth, 0)]
    instance = f"no witness for {_axiom_list(axioms)} among {tried} candidates"
    evidence = {"candidates": tried, "searched": list(arities),
                "closest": closest.instance if closest else None}
    if unknown:
        return (Obligation(axiom, side, th.name, instance, "unknown", None, evidence),), None
    resolution = closest.resolution if closest is not None else "counterexample-found"
    return (Obligation(axiom, side, th.name, instance, resolution, False, evidence),), None


def _witness_arities(kind: str, bounds: Bounds) -> tuple[int, ...]:
    low = {"binary": 2, "nary": 2, "any": 1}[kind]
    high = 2 if kind == "binary" else bounds.witness_max_arity
    return tuple(range(low, high + 1))


def _role(th: Theory, side: Side, axioms: tuple[AxiomId, ...], given: Optional[Term], kind: str,
          bounds: Bounds, essential: bool = False, base: WitnessSlice = WitnessSlice(),
          exclude: tuple[str, ...] = ()) -> tuple[tuple[Obligation, ...], Optional[WitnessSlice]]:
    if not axioms:
        return (), None
    if given is None:
        return _search(th, side, axioms, _witness_arities(kind, bounds), bounds, essential, base, exclude)
    n = len(term_vars(given))
    if (kind == "binary" and n != 2) or (kind == "nary" and n < 2) or n < 1:
        raise WitnessError(f"{render(given)} has {n} variables, the theorem needs a {kind} witness")
    if essential and not is_essential(th, given):
        raise WitnessError(f"{render(given)} drops a variable when normalized in {th.name}")
    obligations, w = _probe_all(th, side, axioms, replace(base, term=given), bounds)
    done = len(obligations) == len(axioms) and obligations[-1].holds is True
    return tuple(obligations), w if done else None


def _refuted(th: Theory, side: Side, axiom: AxiomId, instance: str) -> Obligation:
    return _cite(th, side, axiom, instance, ["variable_faithful"], WitnessSlice(), refutes=True)


# ---------------------------------------------------------------- verdicts

@dataclass(frozen=True)
class Verdict:
    kind: VerdictKind
    theorem: TheoremId
    s: str
    t: str
    witnesses: WitnessBundle = WitnessBundle()
    obligations: tuple[Obligation, ...] = ()
    soundness_tier: SoundnessTier = "sound"
    consistency: dict = field(default_factory=dict, compare=False)
    beck: Optional[BeckReport] = field(default=None, compare=False)
    note: str = ""

    @property
    def direction(self) -> str:
        return f"{self.s}∘{self.t} ⇒ {self.t}∘{self.s}"

    @property
    def failed(self) -> Optional[Obligation]:
        return next((o for o in self.obligations if o.holds is False), None)

    @property
    def unresolved(self) -> tuple[Obligation, ...]:
        return tuple(o for o in self.obligations if o.holds is None)

    def to_json(self) -> JsonDict:
        data: JsonDict = {
            "theorem": self.theorem, "direction": self.direction, "kind": self.kind,
            "witnesses": self.witnesses.to_json(),
            "obligations": [o.to_json() for o in self.obligations],
            "soundness_tier": self.soundness_tier, "consistency": dict(self.consistency),
            "beck": None if self.beck is None else self.beck.to_json(),
        }
        if self.note:
            data["note"] = self.note
        return data


@lru_cache(maxsize=256)
def _consistency(th: Theory, bounds: Bounds) -> EqStatus:
    return consistency(th, bounds).status


def _order(obligations: Sequence[Obligation], theorem: TheoremId) -> tuple[Obligation, ...]:
    rank = {(side, axiom): i for side in ("S", "T") for i, axiom in enumerate(SCHEMA[theorem][side])}
    return tuple(sorted(obligations, key=lambda o: (o.side, rank.get((o.side, o.axiom), 99))))


ROLE_FIELDS: dict[TheoremId, dict[Side, tuple[str, str, bool]]] = {
    "Plotkin1": {"S": ("v", "binary", True), "T": ("p", "binary", True)},
    "PlotkinN": {"S": ("v", "nary", True), "T": ("p", "nary", True)},
    "PlotkinNoComm": {"S": ("v", "binary", True), "T": ("p", "binary", True)},
    "PlotkinIdemUnit": {"S": ("v", "binary", True), "T": ("p", "binary", True)},
    "TooManyConstants": {"S": ("s", "nary", False)},
    "TimesOverPlusUnique": {"S": ("s_op", "binary", False), "T": ("t_op", "binary", False)},
    "LackingAbides": {"S": ("s_op", "binary", False), "T": ("t_op", "binary", False)},
    "IdemUnits": {"S": ("s_op", "binary", False), "T": ("t_op", "binary", False)},
    "AbsorptionTrouble": {"S": ("s", "nary", False)},
}


def _collect(updates: dict, side: Side, field_name: str, w: Optional[WitnessSlice], axioms: Sequence[AxiomId]) -> None:
    """copy what a completed slice found into bundle fields"""
    if w is None:
        return
    if w.term is not None:
        updates[field_name] = w.term
    if w.constant is not None and ({2, 10, 20} & set(axioms)):
        updates["e_s" if side == "S" else "e_t"] = w.constant
    if w.sigma is not None:
        updates["sigma"] = w.sigma
    if w.substitution is not None:
        updates["f_p" if 3 in axioms else "f"] = w.substitution
    if w.other is not None and 16 in axioms:
        updates["s_double"] = w.other
    if w.other is not None and 18 in axioms:
        updates["s_prime"] = w.other
    if w.other_substitution is not None:
        updates["f_prime"] = w.other_substitution


def _theory_obligations(th: Theory, side: Side, axioms: Sequence[AxiomId], bounds: Bounds,
                        constant: Optional[str], updates: dict) -> list[Obligation]:
    obligations = []
    for axiom in axioms:
        if axiom not in THEORY_AXIOMS:
            continue
        w = WitnessSlice(constant=constant if axiom == 20 else None)
        obligation = axiom_probe(th, axiom, w, bounds, side)
        obligations.append(obligation)
        _collect(updates, side, "", obligation.witness if axiom == 20 else None, (axiom,))
        if obligation.holds is False:
            break
    return obligations


def _inverse_side(S: Theory, w: WitnessBundle, bounds: Bounds, updates: dict) -> list[Obligation]:
    if w.s_prime is None and S.certificate.variable_faithful:
        return [_refuted(S, "S", 17, "a term with a variable equals a constant")]
    attempts: list[list[Obligation]] = []
    # s' must collapse to the unit of s, so each constant is tried as that unit
    for e in (w.e_s,) if w.e_s else (S.signature.constants or (None,)):
        first, found = _role(S, "S", (10,), w.s, "nary", bounds, base=WitnessSlice(constant=e), exclude=w.s_exclude)
        if found is None:
            attempts.append(list(first))
            continue
        base = WitnessSlice(constant=found.constant, other=w.s_double, substitution=w.f)
        rest, prime = _role(S, "S", (17, 16), w.s_prime, "any", bounds, base=base, exclude=w.s_exclude)
        if prime is not None:
            _collect(updates, "S", "s", found, (10,))
            _collect(updates, "S", "s_prime", prime, (17, 16))
            return list(first) + list(rest)
        attempts.append(list(first) + list(rest))
    return max(attempts, key=lambda obligations: (any(o.holds is None for o in obligations), len(obligations)))


def _absorption_side(S: Theory, w: WitnessBundle, bounds: Bounds, updates: dict) -> list[Obligation]:
    if w.s_prime is None and S.certificate.variable_faithful:
        return [_refuted(S, "S", 18, "a term equals a term with fewer variables")]
    base = WitnessSlice(substitution=w.f, other=w.s_prime, other_substitution=w.f_prime)
    obligations, found = _role(S, "S", (15, 18), w.s, "nary", bounds, base=base, exclude=w.s_exclude)
    _collect(updates, "S", "s", found, (15, 18))
    return list(obligations)


def _times_over_plus(S: Theory, T: Theory, bounds: Bounds) -> tuple[VerdictKind, Optional[BeckReport], str]:
    try:
        law = get_law("times-over-plus", S, T)
    except PreconditionError as e:
        return "UniqueCandidate", None, f"times-over-plus is not defined here ({e}); Beck's axioms not checked"
    report = check_beck(law, bounds)
    if report.verified:
        return "UniqueCandidate", report, "the unique candidate is times-over-plus and it passes Beck's axioms"
    failure = report.first_failure
    if failure is None:
        unchecked = [o.axiom for o in report.outcomes if not o.passed]
        return "Inconclusive", report, \
            f"times-over-plus was not fully checked at these bounds (unchecked: {', '.join(unchecked) or 'none'})"
    return "NoLaw", report, f"the only candidate, times-over-plus, fails {failure.axiom} at {failure.instance}"


def check(theorem: TheoremId, S: Theory, T: Theory, w: Optional[WitnessBundle] = None,
          bounds: Optional[Bounds] = None) -> Verdict:
    """
    certify the hypotheses of one no-go theorem for the law S∘T ⇒ T∘S

    Args:
        theorem (TheoremId): one of the ten theorem ids, see SCHEMA for the axioms each one needs
        S (Theory): inner theory of the composite (𝕍 for the Plotkin theorems)
        T (Theory): outer theory of the composite (ℙ for the Plotkin theorems)
        w (Optional[WitnessBundle]): witnesses to use; anything missing is searched for
        bounds (Optional[Bounds]): budgets of the equality decisions and the witness search

    Raises:
        NotImplementedError: unknown theorem id
        WitnessError: a supplied witness does not fit the theorem's schema

    Returns:
        Verdict: NoLaw when every obligation holds, NotApplicable at the first refuted obligation,
            Inconclusive when some obligation stays unknown; TimesOverPlusUnique yields UniqueCandidate
    """
    if theorem not in SCHEMA:
        raise NotImplementedError(f"{theorem} is not a supported theorem")
    bounds = bounds or Bounds()
    w = w or WitnessBundle()
    schema = SCHEMA[theorem]
    statuses = {"S": _consistency(S, bounds), "T": _consistency(T, bounds)}
    record = {"S": {"theory": S.name, "x = y": statuses["S"]}, "T": {"theory": T.name, "x = y": statuses["T"]}}
    if "Equal" in statuses.values():
        trivial = S.name if statuses["S"] == "Equal" else T.name
        return Verdict("NotApplicable", theorem, S.name, T.name, w, (), consistency=record,
                       note=f"{trivial} is inconsistent")

    updates: dict = {}
    obligations: list[Obligation] = []
    obligations += _theory_obligations(S, "S", schema["S"], bounds, w.e_s, updates)
    if not any(o.holds is False for o in obligations):
        obligations += _theory_obligations(T, "T", schema["T"], bounds, w.e_t, updates)

    for side, th in (("S", S), ("T", T)):
        if any(o.holds is False for o in obligations):
            break
        term_axioms = tuple(a for a in schema[side] if a not in THEORY_AXIOMS)
        if theorem == "InverseTrouble" and side == "S":
            obligations += _inverse_side(S, w, bounds, updates)
        elif theorem == "AbsorptionTrouble" and side == "S":
            obligations += _absorption_side(S, w, bounds, updates)
        elif term_axioms:
            field_name, kind, essential = ROLE_FIELDS[theorem][side]
            base = WitnessSlice(constant=w.e_s if side == "S" else w.e_t, sigma=w.sigma,
                                substitution=w.f_p if side == "T" else w.f)
            exclude = w.s_exclude if side == "S" else w.t_exclude
            found_obligations, found = _role(th, side, term_axioms, getattr(w, field_name), kind, bounds,
                                             essential, base, exclude)
            obligations += found_obligations
            _collect(updates, side, field_name, found, term_axioms)

    bundle = replace(w, **updates)
    ordered = _order(obligations, theorem)
    tier: SoundnessTier = "trusted-assumptions" if any(o.trusted for o in ordered) else "sound"
    beck, note = None, ""
    if any(o.holds is False for o in ordered):
        kind: VerdictKind = "NotApplicable"
        note = f"Ax{next(o for o in obligations if o.holds is False).axiom} fails"
    elif any(o.holds is None for o in ordered):
        kind = "Inconclusive"
    elif theorem == "TimesOverPlusUnique":
        kind, beck, note = _times_over_plus(S, T, bounds)
    else:
        kind = "NoLaw"
    if kind == "NoLaw" and "Unknown" in statuses.values():
        kind, note = "Inconclusive", "consistency of a theory is undecided at these bounds"

    verdict = Verdict(kind, theorem, S.name, T.name, bundle, ordered, tier, record, beck, note)
    if kind == "NoLaw":
        logger.success(f"{theorem}: no distributive law {verdict.direction} ({tier})")
    else:
        logger.info(f"{theorem} on {verdict.direction}: {kind}{f' ({note})' if note else ''}")
    return verdict


def check_all(S: Theory, T: Theory, bounds: Optional[Bounds] = None, stop_at_first: bool = False,
              theorems: Sequence[TheoremId] = CASCADE) -> tuple[Verdict, ...]:
    verdicts = []
    for theorem in theorems:
        verdict = check(theorem, S, T, None, bounds)
        verdicts.append(verdict)
        if stop_at_first and verdict.kind == "NoLaw":
            break
    return tuple(verdicts)


def first_nolaw(verdicts: Sequence[Verdict]) -> Optional[Verdict]:
    return next((v for v in verdicts if v.kind == "NoLaw"), None)


def recheck(verdict: Verdict, S: Theory, T: Theory, bounds: Optional[Bounds] = None) -> bool:
    """re-run every obligation from its recorded witness slice and compare the outcomes"""
    bounds = bounds or Bounds()
    for obligation in verdict.obligations:
        if obligation.witness is None:
            continue
        th = S if obligation.side == "S" else T
        again = axiom_probe(th, obligation.axiom, obligation.witness, bounds, obligation.side)
        if again.holds != obligation.holds:
            logger.warning(f"Ax{obligation.axiom} on {th.name} does not replay: {obligation.instance}")
            return False
    return True


def render_verdict(verdict: Verdict) -> str:
    marks = {True: "✓", False: "✗", None: "?"}
    lines = [f"{verdict.theorem} on {verdict.direction}: {verdict.kind} [{verdict.soundness_tier}]"]
    if verdict.note:
        lines.append(f"  {verdict.note}")
    for key, value in verdict.witnesses.to_json().items():
        lines.append(f"  {key} = {value}")
    for o in verdict.obligations:
        lines.append(f"  {marks[o.holds]} Ax{o.axiom} ({o.side}: {o.target}) {o.instance} [{o.resolution}]")
    return "\n".join(lines)


# ---------------------------------------------------------------- derived facts

@dataclass(frozen=True)
class AnnihilationFact:
    equation: Equation
    justification: str

    def to_json(self) -> JsonDict:
        return {"name": self.equation.name, "equation": f"{render(self.equation.lhs)} = {render(self.equation.rhs)}",
                "justification": self.justification}


def derive_annihilation(S: Theory, T: Theory, bounds: Optional[Bounds] = None) -> tuple[AnnihilationFact, ...]:
    """
    the constant of T annihilates every reducing operation of S in a composite of T after S

    Each fact op(..., e_T, ...) = e_T is stated over the mixed signature (T symbols primed on a clash), one per
    operation of S with reducing evidence and per argument position, so `bounded_prove` can use them as axioms.
    Unmet hypotheses give no facts and a logged diagnostic.
    """
    bounds = bounds or Bounds()
    if not T.signature.constants:
        logger.warning(f"{T.name} has no constant, nothing to annihilate with")
        return ()
    reflects = axiom_probe(T, 22, WitnessSlice(), bounds, "T")
    if reflects.holds is not True:
        logger.warning(f"{T.name}: renamings are not known to reflect constants, no annihilation facts")
        return ()
    mixed = mixed_signature(S, T)
    e = T.signature.constants[0]
    zero = const(mixed.t_name(e))
    evidence = S.certificate.operation_evidence
    facts: list[AnnihilationFact] = []
    for op in operation_instances(S):
        reason = evidence.get(op.label, "none")
        if reason == "none":
            logger.info(f"{op.label} does not reduce in {S.name}, no fact")
            continue
        for i in range(op.arity):
            rest = iter(Var(name) for name in VARIABLES)
            args = tuple(zero if j == i else next(rest) for j in range(op.arity))
            equation = Equation(f"annihilate{i + 1}[{op.label}]", App(op, args), zero)
            facts.append(AnnihilationFact(equation, f"{op.label} reduces in {S.name} ({reason}) and "
                                                    f"{T.name} reflects {e} under renamings"))
    logger.debug(f"{len(facts)} annihilation facts for {T.name} after {S.name}")
    return tuple(facts)


# ---------------------------------------------------------------- combinatorics self-test

def lemma_filter_check(n: int, m: int, sigma: Sequence[int], rows: Sequence[int]) -> bool:
    """
    the row sets used by the n-ary Plotkin argument share at most one element

    Row 0 is {(j, rows[0]) : j < n}; row k ≥ 1 is {(j, rows[k]) : j ≠ k} ∪ {(k, σ(rows[k]))}. Indices are 0-based.

    Raises:
        PreconditionError: σ is not a fixed-point free permutation of range(m), n or m outside 1..FILTER_CAP,
            or a row index outside range(m)
    """
    if not (1 <= n <= FILTER_CAP and 1 <= m <= FILTER_CAP):
        raise PreconditionError(f"n and m must lie in 1..{FILTER_CAP}")
    if len(sigma) != m:
        raise PreconditionError(f"σ must permute {m} points")
    _check_sigma(tuple(sigma), PreconditionError)
    if len(rows) != n or any(not 0 <= i < m for i in rows):
        raise PreconditionError(f"need {n} row indices in range({m})")
    sets = [{(j, rows[0]) for j in range(n)}]
    for k in range(1, n):
        sets.append({(j, rows[k]) for j in range(n) if j != k} | {(k, sigma[rows[k]])})
    return len(set.intersection(*sets)) <= 1

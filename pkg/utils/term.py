"""
First-order terms over a signature: the syntactic currency of every other module.

Terms are immutable values. Ordering (`term_key`) is the lexicographic order on
(symbol name, parameter, children), variables sorting before applications.
"""
# Standard Library
import re
from fractions import Fraction
from functools import lru_cache
from dataclasses import dataclass
from typing import Iterator, Mapping, Optional, Union

# My Library
from .errors import MalformedTermError


Param = Union[Fraction, str, None]

_PARAM_NAME = re.compile(r"^[A-Za-z_][A-Za-z0-9_]*$")


def format_param(param: Param) -> str:
    if isinstance(param, Fraction):
        return str(param.numerator) if param.denominator == 1 else f"{param.numerator}/{param.denominator}"
    return str(param)


@dataclass(frozen=True)
class OperationSymbol:
    name: str
    arity: int
    param: Param = None

    @property
    def label(self) -> str:
        if self.param is None:
            return self.name
        return f"{self.name}@{{{format_param(self.param)}}}"

    @property
    def schematic(self) -> bool:
        return isinstance(self.param, str)


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class App:
    symbol: OperationSymbol
    args: tuple = ()

    def __post_init__(self):
        if len(self.args) != self.symbol.arity:
            raise MalformedTermError(
                f"{self.symbol.label} expects {self.symbol.arity} arguments, got {len(self.args)}")


Term = Union[Var, App]

Substitution = Mapping[str, Term]


@dataclass(frozen=True)
class Equation:
    name: str
    lhs: Term
    rhs: Term

    @property
    def context(self) -> tuple[str, ...]:
        return tuple(dict.fromkeys(term_vars(self.lhs) + term_vars(self.rhs)))


def const(name: str) -> App:
    return App(OperationSymbol(name, 0))


def app(name: str, *args: Term, param: Param = None) -> App:
    return App(OperationSymbol(name, len(args), param), tuple(args))


@dataclass(frozen=True)
class Signature:
    ops: tuple[tuple[str, int], ...] = ()
    families: tuple[tuple[str, int], ...] = ()

    def arity(self, name: str) -> Optional[int]:
        return dict(self.ops).get(name)

    def family_arity(self, name: str) -> Optional[int]:
        return dict(self.families).get(name)

    @property
    def constants(self) -> tuple[str, ...]:
        return tuple(name for name, arity in self.ops if arity == 0)

    @property
    def operations(self) -> tuple[tuple[str, int], ...]:
        return tuple((name, arity) for name, arity in self.ops if arity > 0)

    @property
    def names(self) -> set[str]:
        return {name for name, _ in self.ops} | {name for name, _ in self.families}

    def symbol(self, name: str, param: Param = None) -> OperationSymbol:
        arity = self.arity(name) if param is None else self.family_arity(name)
        if arity is None:
            raise MalformedTermError(f"unknown symbol {name!r}")
        return OperationSymbol(name, arity, param)

    def union(self, other: "Signature") -> "Signature":
        ops = dict(self.ops)
        for name, arity in other.ops:
            if ops.get(name, arity) != arity:
                raise MalformedTermError(
                    f"symbol {name!r} declared with arities {ops[name]} and {arity}")
            ops[name] = arity
        families = dict(self.families)
        for name, arity in other.families:
            if families.get(name, arity) != arity:
                raise MalformedTermError(
                    f"family {name!r} declared with arities {families[name]} and {arity}")
            families[name] = arity
        return Signature(tuple(ops.items()), tuple(families.items()))

    def renamed(self, suffix: str = "'") -> "Signature":
        return Signature(
            tuple((name + suffix, arity) for name, arity in self.ops),
            tuple((name + suffix, arity) for name, arity in self.families),
        )


@dataclass(frozen=True)
class Diagnostic:
    path: tuple[int, ...]
    message: str

    def __str__(self) -> str:
        where = "root" if not self.path else ".".join(map(str, self.path))
        return f"{self.message} at {where}"


def validate(t: Term, sig: Signature) -> Optional[Diagnostic]:
    """
    check that every symbol of `t` is declared in `sig` with matching arity

    Returns:
        Optional[Diagnostic]: None when the term is well formed, otherwise the first offending subterm
    """
    for path, sub in positions(t):
        if isinstance(sub, Var):
            continue
        symbol = sub.symbol
        declared = sig.arity(symbol.name) if symbol.param is None else sig.family_arity(symbol.name)
        if declared is None:
            kind = "symbol" if symbol.param is None else "family"
            return Diagnostic(path, f"unknown {kind} {symbol.name!r}")
        if declared != symbol.arity:
            return Diagnostic(path, f"arity mismatch: {symbol.label} declared {declared}, used with {symbol.arity}")
    return None


def check(t: Term, sig: Signature) -> Term:
    if (diagnostic := validate(t, sig)) is not None:
        raise MalformedTermError(diagnostic.message, diagnostic.path)
    return t


def term_vars(t: Term) -> tuple[str, ...]:
    seen: dict[str, None] = {}

    def walk(u: Term):
        if isinstance(u, Var):
            seen.setdefault(u.name)
        else:
            for arg in u.args:
                walk(arg)

    walk(t)
    return tuple(seen)


def substitute(t: Term, f: Substitution) -> Term:
    if not f:
        return t
    if isinstance(t, Var):
        return f.get(t.name, t)
    if not t.args:
        return t
    return App(t.symbol, tuple(substitute(arg, f) for arg in t.args))


def compose(f: Substitution, g: Substitution) -> dict[str, Term]:
    composed = {x: substitute(u, g) for x, u in f.items()}
    for y, u in g.items():
        composed.setdefault(y, u)
    return composed


def rename(t: Term, mapping: Mapping[str, str]) -> Term:
    return substitute(t, {old: Var(new) for old, new in mapping.items()})


def size(t: Term) -> int:
    if isinstance(t, Var):
        return 1
    return 1 + sum(size(arg) for arg in t.args)


def leaves(t: Term) -> int:
    if isinstance(t, Var) or not t.args:
        return 1
    return sum(leaves(arg) for arg in t.args)


def layers(t: Term) -> int:
    if isinstance(t, Var) or not t.args:
        return 0
    return 1 + max(layers(arg) for arg in t.args)


def positions(t: Term, prefix: tuple[int, ...] = ()) -> Iterator[tuple[tuple[int, ...], Term]]:
    yield prefix, t
    if isinstance(t, App):
        for i, arg in enumerate(t.args):
            yield from positions(arg, prefix + (i,))


def subterm(t: Term, path: tuple[int, ...]) -> Term:
    for i in path:
        t = t.args[i]
    return t


def replace_at(t: Term, path: tuple[int, ...], u: Term) -> Term:
    if not path:
        return u
    head, rest = path[0], path[1:]
    args = list(t.args)
    args[head] = replace_at(args[head], rest, u)
    return App(t.symbol, tuple(args))


def symbols(t: Term) -> set[OperationSymbol]:
    return {sub.symbol for _, sub in positions(t) if isinstance(sub, App)}


def _param_key(param: Param) -> tuple:
    if param is None:
        return (0,)
    if isinstance(param, Fraction):
        return (1, param)
    return (2, param)


@lru_cache(maxsize=1 << 16)
def term_key(t: Term) -> tuple:
    if isinstance(t, Var):
        return (0, t.name)
    return (1, t.symbol.name, _param_key(t.symbol.param), tuple(term_key(arg) for arg in t.args))


def sort_terms(terms) -> list[Term]:
    return sorted(terms, key=term_key)


def render(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    if not t.args:
        return t.symbol.label
    return f"{t.symbol.label}({','.join(render(arg) for arg in t.args)})"


# ---------------------------------------------------------------- parameters

def _tokenize_param(expr: str) -> list[str]:
    tokens = re.findall(r"\d+|[A-Za-z_][A-Za-z0-9_]*|[-+*/()]", expr)
    if "".join(tokens) != re.sub(r"\s+", "", expr):
        raise MalformedTermError(f"bad parameter expression {expr!r}")
    return tokens


def evaluate_param(expr: Param, env: Mapping[str, Fraction]) -> Optional[Fraction]:
    """
    evaluate a parameter expression such as `1-p` or `p/(p+(1-p)*r)` exactly

    Returns:
        Optional[Fraction]: None when a parameter name is unbound or a division by zero occurs
    """
    if expr is None or isinstance(expr, Fraction):
        return expr
    tokens = _tokenize_param(expr)
    pos = 0

    def peek():
        return tokens[pos] if pos < len(tokens) else None

    def take():
        nonlocal pos
        pos += 1
        return tokens[pos - 1]

    def atom():
        token = take()
        if token == "(":
            value = additive()
            take()
            return value
        if token == "-":
            value = atom()
            return None if value is None else -value
        if token.isdigit():
            return Fraction(int(token))
        return env.get(token)

    def multiplicative():
        value = atom()
        while peek() in ("*", "/"):
            op, rhs = take(), atom()
            if value is None or rhs is None:
                value = None
            elif op == "*":
                value = value * rhs
            else:
                value = None if rhs == 0 else value / rhs
        return value

    def additive():
        value = multiplicative()
        while peek() in ("+", "-"):
            op, rhs = take(), multiplicative()
            if value is None or rhs is None:
                value = None
            else:
                value = value + rhs if op == "+" else value - rhs
        return value

    return additive()


def parse_param(text: str) -> Param:
    text = text.strip()
    if re.fullmatch(r"\d+(/\d+)?", text):
        return Fraction(text)
    _tokenize_param(text)
    return text


# ---------------------------------------------------------------- matching

def match(pattern: Term, t: Term, subst: Optional[dict[str, Term]] = None, penv: Optional[dict[str, Fraction]] = None) -> Optional[tuple[dict[str, Term], dict[str, Fraction]]]:
    """
    first-order matching of `pattern` against `t`

    Schematic parameters that are bare names bind to the matched rational; compound
    parameter expressions are checked once every name they mention is bound.

    Returns:
        Optional[tuple[dict, dict]]: variable bindings and parameter bindings, None if no match
    """
    subst = dict(subst or {})
    penv = dict(penv or {})
    deferred: list[tuple[str, Fraction]] = []

    def go(p: Term, u: Term) -> bool:
        if isinstance(p, Var):
            bound = subst.get(p.name)
            if bound is None:
                subst[p.name] = u
                return True
            return bound == u
        if not isinstance(u, App) or p.symbol.name != u.symbol.name or p.symbol.arity != u.symbol.arity:
            return False
        pp, up = p.symbol.param, u.symbol.param
        if isinstance(pp, str):
            if not isinstance(up, Fraction):
                return False
            if _PARAM_NAME.match(pp):
                if penv.setdefault(pp, up) != up:
                    return False
            else:
                deferred.append((pp, up))
        elif pp != up:
            return False
        return all(go(a, b) for a, b in zip(p.args, u.args))

    if not go(pattern, t):
        return None
    for expr, value in deferred:
        if evaluate_param(expr, penv) != value:
            return None
    return subst, penv


def instantiate(pattern: Term, subst: Substitution, penv: Mapping[str, Fraction], closed: bool = False) -> Optional[Term]:
    """
    apply bindings to a pattern, evaluating schematic parameters

    Returns:
        Optional[Term]: None when a parameter is unbound or falls outside the family's range
    """
    def in_range(value: Fraction) -> bool:
        return 0 <= value <= 1 if closed else 0 < value < 1

    def go(p: Term) -> Optional[Term]:
        if isinstance(p, Var):
            return subst.get(p.name, p)
        symbol = p.symbol
        if symbol.schematic:
            value = evaluate_param(symbol.param, penv)
            if value is None or not in_range(value):
                return None
            symbol = OperationSymbol(symbol.name, symbol.arity, value)
        args = []
        for arg in p.args:
            if (new := go(arg)) is None:
                return None
            args.append(new)
        return App(symbol, tuple(args))

    return go(pattern)

# Standard Library
from functools import lru_cache
from typing import Hashable

# My Library
from utils.dsl import TheoryPresentation
from utils.term import Term, Var, App
from ..base import EqualityOracle, right_nested


# nodes: ("v", name), ("j", children) and ("m", children); the empty join is bottom, the empty meet is top
Node = tuple

TOP: Node = ("m", ())

BOTTOM: Node = ("j", ())


@lru_cache(maxsize=1 << 16)
def leq(s: Node, t: Node) -> bool:
    """Whitman's order on free bounded lattice terms"""
    if s[0] == "j":
        return all(leq(c, t) for c in s[1])
    if t[0] == "m":
        return all(leq(s, c) for c in t[1])
    if s[0] == "v" and t[0] == "v":
        return s == t
    if s[0] == "m" and any(leq(c, t) for c in s[1]):
        return True
    return t[0] == "j" and any(leq(s, c) for c in t[1])


def _dual(kind: str) -> str:
    return "m" if kind == "j" else "j"


def combine(kind: str, items: list[Node]) -> Node:
    """
    build the canonical join ("j") or meet ("m") of canonical nodes

    Absorbing bounds, flattening and Whitman's reductions are applied: the children form an antichain, and no
    child of the dual kind keeps a component that is already below (resp. above) the whole node.
    """
    absorbing, neutral = (TOP, BOTTOM) if kind == "j" else (BOTTOM, TOP)
    below = leq if kind == "j" else (lambda a, b: leq(b, a))

    children: list[Node] = []

    def push(node: Node) -> None:
        if node[0] == kind:
            children.extend(node[1])
        elif node != neutral:
            children.append(node)

    for item in items:
        if item == absorbing:
            return absorbing
        push(item)

    changed = True
    while changed:
        changed = False
        kept: list[Node] = []
        for i, c in enumerate(children):
            if any(below(c, d) and (not below(d, c) or j < i) for j, d in enumerate(children) if j != i):
                changed = True
                continue
            kept.append(c)
        children = kept
        whole = (kind, tuple(sorted(children)))
        for i, c in enumerate(children):
            if c[0] != _dual(kind):
                continue
            for d in c[1]:
                if below(d, whole):
                    children = children[:i] + children[i + 1:]
                    push(d)
                    changed = True
                    break
            if changed:
                break

    if not children:
        return neutral
    if len(children) == 1:
        return children[0]
    return (kind, tuple(sorted(children)))


class LatticeOracle(EqualityOracle):
    """
    free bounded lattices, decided by Whitman's procedure

    Binary symbols bind as (join, meet), constants as (top, bottom), in declaration order.
    """

    backend = "BoundedLattice"

    variable_faithful = False

    def __init__(self, presentation: TheoryPresentation) -> None:
        super().__init__(presentation)
        self.bind({2: 2, 0: 2})
        join, meet = self.names_of_arity(2)
        top, bottom = self.names_of_arity(0)
        self.join, self.meet = self.symbol(join), self.symbol(meet)
        self.top, self.bottom = App(self.symbol(top)), App(self.symbol(bottom))

    def canonical(self, t: Term) -> Hashable:
        if isinstance(t, Var):
            return ("v", t.name)
        if t == self.top:
            return TOP
        if t == self.bottom:
            return BOTTOM
        if t.symbol == self.join:
            return combine("j", [self.canonical(arg) for arg in t.args])
        if t.symbol == self.meet:
            return combine("m", [self.canonical(arg) for arg in t.args])
        raise self.unexpected(t)

    def equal(self, t1: Term, t2: Term) -> bool:
        a, b = self.canonical(t1), self.canonical(t2)
        return leq(a, b) and leq(b, a)

    def reify(self, value: Hashable) -> Term:
        kind, body = value
        if kind == "v":
            return Var(body)
        if kind == "j":
            return right_nested(self.join, [self.reify(c) for c in body], self.bottom)
        return right_nested(self.meet, [self.reify(c) for c in body], self.top)

# Standard Library
from fractions import Fraction
from typing import Hashable

# My Library
from utils.dsl import TheoryPresentation
from utils.errors import DomainError
from utils.term import Term, Var, App, OperationSymbol, render
from ..base import EqualityOracle


class ConvexOracle(EqualityOracle):
    """
    convex algebras: finitely supported distributions with exact rational weights

    x +@{p} y denotes p·x + (1-p)·y. The open presentation only admits 0 < p < 1; the closed one admits the end
    points as well, and zero weights are dropped from the support.
    """

    accepts_families = True

    def __init__(self, presentation: TheoryPresentation, closed: bool = False) -> None:
        super().__init__(presentation)
        self.backend = "ConvexClosed" if closed else "Convex"
        self.closed_interval = closed
        self.bind({})
        if len(self.signature.families) != 1 or self.signature.families[0][1] != 2:
            raise DomainError(f"convex oracle expects one binary family in {presentation.name}")
        self.family = self.signature.families[0][0]

    def distribution(self, t: Term) -> dict[str, Fraction]:
        if isinstance(t, Var):
            return {t.name: Fraction(1)}
        p = t.symbol.param
        if t.symbol.name != self.family or not isinstance(p, Fraction):
            raise self.unexpected(t)
        if not self.param_in_range(p):
            raise DomainError(f"parameter of {render(t)} lies outside the admitted interval")
        out: dict[str, Fraction] = {}
        for weight, arg in ((p, t.args[0]), (1 - p, t.args[1])):
            if weight == 0:
                continue
            for name, w in self.distribution(arg).items():
                out[name] = out.get(name, Fraction(0)) + weight * w
        return out

    def canonical(self, t: Term) -> Hashable:
        return tuple(sorted(self.distribution(t).items()))

    def reify(self, value: Hashable) -> Term:
        (name, weight), *rest = value
        if not rest:
            return Var(name)
        remaining = 1 - weight
        tail = tuple((other, w / remaining) for other, w in rest)
        return App(OperationSymbol(self.family, 2, weight), (Var(name), self.reify(tail)))

    def weights(self, t: Term) -> dict[str, Fraction]:
        return dict(self.canonical(t))

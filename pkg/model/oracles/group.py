# Standard Library
from collections import defaultdict
from typing import Hashable

# My Library
from utils.dsl import TheoryPresentation
from utils.term import Term, Var, App
from ..base import EqualityOracle, right_nested


def _add(a: dict, b: dict, sign: int = 1) -> dict:
    out = defaultdict(int, a)
    for key, value in b.items():
        out[key] += sign * value
    return {key: value for key, value in out.items() if value != 0}


class AbelianGroupOracle(EqualityOracle):
    """free Abelian groups: integer coefficient vectors over the variables"""

    backend = "AbelianGroup"

    variable_faithful = False

    renaming_reflects_constants = False

    def __init__(self, presentation: TheoryPresentation) -> None:
        super().__init__(presentation)
        self.bind({2: 1, 1: 1, 0: 1})
        self.plus = self.symbol(self.names_of_arity(2)[0])
        self.neg = self.symbol(self.names_of_arity(1)[0])
        self.zero = App(self.symbol(self.names_of_arity(0)[0]))

    def vector(self, t: Term) -> dict[str, int]:
        if isinstance(t, Var):
            return {t.name: 1}
        if t == self.zero:
            return {}
        if t.symbol == self.plus:
            return _add(self.vector(t.args[0]), self.vector(t.args[1]))
        if t.symbol == self.neg:
            return _add({}, self.vector(t.args[0]), -1)
        raise self.unexpected(t)

    def canonical(self, t: Term) -> Hashable:
        return tuple(sorted(self.vector(t).items()))

    def reify(self, value: Hashable) -> Term:
        items: list[Term] = []
        for name, coefficient in value:
            atom = Var(name) if coefficient > 0 else App(self.neg, (Var(name),))
            items.extend([atom] * abs(coefficient))
        return right_nested(self.plus, items, self.zero)


class RingOracle(EqualityOracle):
    """
    free unital rings: integer polynomials in non-commuting variables

    Binary symbols bind as (addition, multiplication), constants as (zero, one), in declaration order.
    """

    backend = "Ring"

    variable_faithful = False

    closed_terms_are_constants = False

    renaming_reflects_constants = False

    def __init__(self, presentation: TheoryPresentation) -> None:
        super().__init__(presentation)
        self.bind({2: 2, 1: 1, 0: 2})
        plus, times = self.names_of_arity(2)
        zero, one = self.names_of_arity(0)
        self.plus, self.times = self.symbol(plus), self.symbol(times)
        self.neg = self.symbol(self.names_of_arity(1)[0])
        self.zero, self.one = App(self.symbol(zero)), App(self.symbol(one))

    def polynomial(self, t: Term) -> dict[tuple[str, ...], int]:
        if isinstance(t, Var):
            return {(t.name,): 1}
        if t == self.zero:
            return {}
        if t == self.one:
            return {(): 1}
        if t.symbol == self.plus:
            return _add(self.polynomial(t.args[0]), self.polynomial(t.args[1]))
        if t.symbol == self.neg:
            return _add({}, self.polynomial(t.args[0]), -1)
        if t.symbol == self.times:
            left, right = self.polynomial(t.args[0]), self.polynomial(t.args[1])
            product: dict = {}
            for m1, c1 in left.items():
                for m2, c2 in right.items():
                    product = _add(product, {m1 + m2: c1 * c2})
            return product
        raise self.unexpected(t)

    def canonical(self, t: Term) -> Hashable:
        return tuple(sorted(self.polynomial(t).items(), key=lambda item: (len(item[0]), item[0])))

    def reify(self, value: Hashable) -> Term:
        items: list[Term] = []
        for monomial, coefficient in value:
            atom = right_nested(self.times, [Var(name) for name in monomial], self.one)
            if coefficient < 0:
                atom = App(self.neg, (atom,))
            items.extend([atom] * abs(coefficient))
        return right_nested(self.plus, items, self.zero)

# Standard Library
from typing import Hashable

# My Library
from utils.dsl import TheoryPresentation
from utils.term import Term, Var, App, term_key
from ..base import EqualityOracle, right_nested


class CompositeOracle(EqualityOracle):
    """
    composite theories built from an additive outer layer and a multiplicative inner layer

    The outer letter picks the additive structure (M: multiset, so natural coefficients; P: powerset, so sets of
    monomials). The inner letter picks the monomials (T: unital binary trees; L: words; M: sorted words). Zero is
    the empty sum and annihilates products, products distribute over sums on both sides.
    """

    variable_faithful = False

    def __init__(self, presentation: TheoryPresentation, composite_id: str) -> None:
        super().__init__(presentation)
        self.backend = composite_id
        self.outer, self.inner = composite_id
        self.closed_terms_are_constants = self.outer == "P"
        self.bind({2: 2, 0: 2})
        plus, times = self.names_of_arity(2)
        zero, one = self.names_of_arity(0)
        self.plus, self.times = self.symbol(plus), self.symbol(times)
        self.zero, self.one = App(self.symbol(zero)), App(self.symbol(one))

    # ------------------------------------------------------------ monomials

    def unit_monomial(self):
        return self.one if self.inner == "T" else ()

    def generator(self, name: str):
        return Var(name) if self.inner == "T" else (name,)

    def multiply(self, m1, m2):
        if self.inner == "T":
            if m1 == self.one:
                return m2
            if m2 == self.one:
                return m1
            return App(self.times, (m1, m2))
        if self.inner == "L":
            return m1 + m2
        return tuple(sorted(m1 + m2))

    def monomial_key(self, m) -> tuple:
        return term_key(m) if self.inner == "T" else (len(m), m)

    def monomial_term(self, m) -> Term:
        if self.inner == "T":
            return m
        return right_nested(self.times, [Var(name) for name in m], self.one)

    # ------------------------------------------------------------ sums

    def combine(self, a: dict, b: dict) -> dict:
        out = dict(a)
        for m, c in b.items():
            out[m] = 1 if self.outer == "P" else out.get(m, 0) + c
        return out

    def polynomial(self, t: Term) -> dict:
        if isinstance(t, Var):
            return {self.generator(t.name): 1}
        if t == self.zero:
            return {}
        if t == self.one:
            return {self.unit_monomial(): 1}
        if t.symbol == self.plus:
            return self.combine(self.polynomial(t.args[0]), self.polynomial(t.args[1]))
        if t.symbol == self.times:
            left, right = self.polynomial(t.args[0]), self.polynomial(t.args[1])
            product: dict = {}
            for m1, c1 in left.items():
                for m2, c2 in right.items():
                    product = self.combine(product, {self.multiply(m1, m2): c1 * c2})
            return product
        raise self.unexpected(t)

    def canonical(self, t: Term) -> Hashable:
        items = sorted(self.polynomial(t).items(), key=lambda item: self.monomial_key(item[0]))
        return tuple(items)

    def reify(self, value: Hashable) -> Term:
        summands: list[Term] = []
        for m, c in value:
            summands.extend([self.monomial_term(m)] * c)
        return right_nested(self.plus, summands, self.zero)

# Standard Library
from typing import Hashable

# My Library
from utils.dsl import TheoryPresentation
from utils.term import Term, Var, App
from ..base import EqualityOracle


class ReaderOracle(EqualityOracle):
    """
    the reader monad on two states: x*y reads x in the first state and y in the second

    A term is determined by the variable it returns in each state, so the canonical value is that pair.
    """

    backend = "Reader2"

    variable_faithful = False

    def __init__(self, presentation: TheoryPresentation) -> None:
        super().__init__(presentation)
        self.bind({2: 1})
        self.op = self.symbol(self.names_of_arity(2)[0])

    def canonical(self, t: Term) -> Hashable:
        if isinstance(t, Var):
            return (t.name, t.name)
        if t.symbol != self.op:
            raise self.unexpected(t)
        return (self.canonical(t.args[0])[0], self.canonical(t.args[1])[1])

    def reify(self, value: Hashable) -> Term:
        first, second = value
        if first == second:
            return Var(first)
        return App(self.op, (Var(first), Var(second)))

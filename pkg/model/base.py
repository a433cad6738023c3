# Standard Library
import re
import itertools
from fractions import Fraction
from typing import Hashable, Iterable, Optional

# Third-Party Library
from loguru import logger

# My Library
from utils.dsl import TheoryPresentation
from utils.errors import DomainError, UnsupportedOperationError
from utils.term import (Term, Var, App, OperationSymbol, Equation,
                        term_vars, instantiate, symbols, render)


# parameter values at which schematic equations are audited
AUDIT_GRID: tuple[Fraction, ...] = (Fraction(1, 3), Fraction(1, 2), Fraction(2, 3))


class EqualityOracle:
    """
    Abstract Base Class for all normal-form oracles.

    An oracle binds the symbols of a presentation to the roles of a known free algebra (by arity and declaration
    order) and computes a hashable canonical value for every term, such that two terms are provably equal iff their
    canonical values are equal. EqualityOracle defines several methods that must be overwritten by sub-class:
        - canonical
        - reify

    Sub-classes also declare the structural facts the metaproperty certificate cites:
        - variable_faithful: provable equality preserves the exact variable set
        - closed_terms_are_constants: every closed term equals a declared constant
        - renaming_reflects_constants: t[f] = e for a variable renaming f implies t = e

    Raises:
        NotImplementedError: if the required methods are not implemented by the sub-class
    """

    backend: str = "abstract"

    variable_faithful: bool = True

    closed_terms_are_constants: bool = True

    renaming_reflects_constants: bool = True

    closed_interval: bool = False

    accepts_families: bool = False

    def __init__(self, presentation: TheoryPresentation) -> None:
        self.presentation = presentation
        self.signature = presentation.signature

    # ------------------------------------------------------------ binding

    def names_of_arity(self, arity: int) -> list[str]:
        return [name for name, n in self.signature.ops if n == arity]

    def bind(self, counts: dict[int, int]) -> None:
        """check that the signature declares exactly `counts[arity]` symbols of each arity"""
        for arity in sorted(set(counts) | {n for _, n in self.signature.ops}):
            found = len(self.names_of_arity(arity))
            if found != counts.get(arity, 0):
                raise DomainError(
                    f"{self.backend} oracle expects {counts.get(arity, 0)} symbols of arity {arity} "
                    f"in {self.presentation.name}, found {found}")
        if self.signature.families and not self.accepts_families:
            raise DomainError(f"{self.backend} oracle does not support parameterized families")

    # ------------------------------------------------------------ interface

    def canonical(self, t: Term) -> Hashable:
        raise NotImplementedError

    def reify(self, value: Hashable) -> Term:
        raise NotImplementedError

    def normalize(self, t: Term) -> Term:
        return self.reify(self.canonical(t))

    def equal(self, t1: Term, t2: Term) -> bool:
        return self.canonical(t1) == self.canonical(t2)

    def free_vars(self, t: Term) -> tuple[str, ...]:
        return term_vars(self.normalize(t))

    def symbol(self, name: str) -> OperationSymbol:
        return self.signature.symbol(name)

    def unexpected(self, t: Term) -> DomainError:
        return DomainError(f"{self.backend} oracle cannot interpret {render(t)}")

    # ------------------------------------------------------------ audit

    def param_in_range(self, value: Fraction) -> bool:
        return 0 <= value <= 1 if self.closed_interval else 0 < value < 1

    def instances(self, eq: Equation) -> Iterable[tuple[Term, Term]]:
        names = sorted({name for sym in symbols(eq.lhs) | symbols(eq.rhs) if sym.schematic
                        for name in _param_names(sym.param)})
        if not names:
            yield eq.lhs, eq.rhs
            return
        for values in itertools.product(AUDIT_GRID, repeat=len(names)):
            penv = dict(zip(names, values))
            lhs = instantiate(eq.lhs, {}, penv, closed=self.closed_interval)
            rhs = instantiate(eq.rhs, {}, penv, closed=self.closed_interval)
            if lhs is not None and rhs is not None:
                yield lhs, rhs

    def audit(self) -> None:
        """
        check every presented equation under the oracle, so a presentation cannot be bound to the wrong free algebra

        Raises:
            DomainError: an equation of the presentation does not hold in the bound normal form
        """
        for eq in self.presentation.equations:
            for lhs, rhs in self.instances(eq):
                try:
                    holds = self.equal(lhs, rhs)
                except UnsupportedOperationError as e:
                    raise DomainError(str(e)) from e
                if not holds:
                    raise DomainError(
                        f"equation {eq.name} of {self.presentation.name} fails under the {self.backend} oracle: "
                        f"{render(lhs)} ≠ {render(rhs)}")
        logger.debug(f"{self.backend} oracle audited {len(self.presentation.equations)} equations of "
                     f"{self.presentation.name}")

    def closed_normal_forms(self) -> list[Term]:
        forms: list[Term] = []
        seen: set = set()
        for name in self.signature.constants:
            value = self.canonical(App(self.symbol(name)))
            if value not in seen:
                seen.add(value)
                forms.append(self.reify(value))
        return forms


def _param_names(expr: str) -> list[str]:
    return re.findall(r"[A-Za-z_][A-Za-z0-9_]*", expr)


def right_nested(symbol: OperationSymbol, items: list[Term], empty: Optional[Term]) -> Term:
    """fold `items` into op(t1, op(t2, ... tn)); `empty` for no items"""
    if not items:
        if empty is None:
            raise DomainError(f"no neutral element for {symbol.label}")
        return empty
    result = items[-1]
    for item in reversed(items[:-1]):
        result = App(symbol, (item, result))
    return result


def leaf_name(t: Term) -> str:
    if isinstance(t, Var):
        return t.name
    raise DomainError(f"expected a variable, got {render(t)}")

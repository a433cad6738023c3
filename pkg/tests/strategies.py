# Standard Library
from fractions import Fraction

# Third-Party Library
from hypothesis import strategies as st

# My Library
from utils.term import Term, Var, App, Signature, OperationSymbol


@st.composite
def terms(draw, sig: Signature, variables: tuple[str, ...] = ("x", "y", "z"), max_size: int = 7,
          grid: tuple[Fraction, ...] = (Fraction(1, 3), Fraction(1, 2))) -> Term:
    """random terms over `sig`; families are instantiated on `grid`"""
    ops = [OperationSymbol(name, arity) for name, arity in sig.operations]
    ops += [OperationSymbol(name, arity, p) for name, arity in sig.families for p in grid]
    leaves = [Var(name) for name in variables] + [App(OperationSymbol(name, 0)) for name in sig.constants]

    def go(budget: int) -> Term:
        usable = [op for op in ops if 1 + op.arity <= budget]
        if not usable or draw(st.integers(0, 9)) < 3:
            return draw(st.sampled_from(leaves))
        op = draw(st.sampled_from(usable))
        share = (budget - 1) // op.arity
        return App(op, tuple(go(share) for _ in range(op.arity)))

    return go(max_size)


@st.composite
def derangements(draw, max_points: int = 5) -> tuple[int, ...]:
    """a fixed-point free permutation of range(m), 2 ≤ m ≤ max_points"""
    m = draw(st.integers(2, max_points))
    perm = draw(st.permutations(range(m)))
    # swap each fixed point with its right neighbour
    perm = list(perm)
    for i in range(m):
        if perm[i] == i:
            j = (i + 1) % m
            perm[i], perm[j] = perm[j], perm[i]
    return tuple(perm)

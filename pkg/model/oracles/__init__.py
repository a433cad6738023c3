# Standard Library
from typing import get_args

# My Library
from utils.dsl import TheoryPresentation
from utils.annotation import BoomId, CompositeId
from ..base import EqualityOracle
from .boom import BoomOracle
from .group import AbelianGroupOracle, RingOracle
from .composite import CompositeOracle
from .convex import ConvexOracle
from .reader import ReaderOracle
from .lattice import LatticeOracle
from .exception import ExceptionOracle

Oracle = BoomOracle | AbelianGroupOracle | RingOracle | CompositeOracle | ConvexOracle | ReaderOracle | LatticeOracle | ExceptionOracle


def get_oracle(backend: str, presentation: TheoryPresentation) -> Oracle:
    """
    bind a presentation to a builtin normal-form oracle and audit the binding

    Args:
        backend (str): the id named by the `oracle builtin ID;` line
        presentation (TheoryPresentation): the presentation to bind

    Raises:
        NotImplementedError: no builtin oracle with this id
        DomainError: the signature does not fit the oracle, or an equation fails under it

    Returns:
        Oracle: the audited oracle
    """
    if backend in get_args(BoomId):
        oracle = BoomOracle(presentation, backend)
    elif backend in get_args(CompositeId):
        oracle = CompositeOracle(presentation, backend)
    elif backend == "AbelianGroup":
        oracle = AbelianGroupOracle(presentation)
    elif backend == "Ring":
        oracle = RingOracle(presentation)
    elif backend == "Convex":
        oracle = ConvexOracle(presentation)
    elif backend == "ConvexClosed":
        oracle = ConvexOracle(presentation, closed=True)
    elif backend == "Reader2":
        oracle = ReaderOracle(presentation)
    elif backend == "BoundedLattice":
        oracle = LatticeOracle(presentation)
    elif backend == "Exception":
        oracle = ExceptionOracle(presentation)
    else:
        raise NotImplementedError(f"{backend} oracle is not supported")
    oracle.audit()
    return oracle


__all__ = [
    # Typing
    "Oracle",
    "EqualityOracle",
    "get_oracle",
    "BoomOracle",
    "AbelianGroupOracle",
    "RingOracle",
    "CompositeOracle",
    "ConvexOracle",
    "ReaderOracle",
    "LatticeOracle",
    "ExceptionOracle",
]

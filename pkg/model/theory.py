# Standard Library
import re
from pathlib import Path
from functools import lru_cache, cached_property
from dataclasses import dataclass, replace
from typing import TYPE_CHECKING, Optional, get_args

# Third-Party Library
from loguru import logger

# My Library
from utils.term import Signature, Equation
from utils.errors import PreconditionError
from utils.annotation import BoomId, CompositeId, CatalogId
from utils.dsl import TheoryPresentation, parse_theory
from utils.data.catalog import (get_boom_text, get_composite_text, get_exception_text,
                                get_extra_text, EXTRA_FILES)
from .oracles import Oracle, get_oracle

if TYPE_CHECKING:
    from .equality import MetaCertificate


CATALOG_EXTRAS: tuple[str, ...] = ("AbelianGroup", "Ring", "BoundedLattice", "Convex", "Reader2",
                                   "Exception{e}", "Maybe")

_EXCEPTION_ID = re.compile(r"^Exception\{(.*)\}$")


@dataclass(frozen=True, eq=False)
class Theory:
    """a presentation bound to its equality backend: a builtin oracle, or None for the generic backend"""

    presentation: TheoryPresentation
    oracle: Optional[Oracle] = None

    @property
    def name(self) -> str:
        return self.presentation.name

    @property
    def signature(self) -> Signature:
        return self.presentation.signature

    @property
    def equations(self) -> tuple[Equation, ...]:
        return self.presentation.equations

    @property
    def exclude_ops(self) -> tuple[str, ...]:
        return self.presentation.exclude_ops

    @property
    def decidable(self) -> bool:
        return self.oracle is not None

    @cached_property
    def certificate(self) -> "MetaCertificate":
        from .equality import certify_meta
        return certify_meta(self)

    def generic(self) -> "Theory":
        """the same presentation, decided by proof search and model search only"""
        return Theory(replace(self.presentation, backend="generic"), None)

    def __repr__(self) -> str:
        return f"Theory({self.name}, {'generic' if self.oracle is None else self.oracle.backend})"


def bind_theory(presentation: TheoryPresentation) -> Theory:
    if presentation.backend == "generic":
        return Theory(presentation, None)
    return Theory(presentation, get_oracle(presentation.backend, presentation))


def catalog_text(catalog_id: CatalogId) -> str:
    if catalog_id in get_args(BoomId):
        return get_boom_text(catalog_id)
    elif catalog_id in get_args(CompositeId):
        return get_composite_text(catalog_id)
    elif catalog_id == "Maybe":
        return get_exception_text(["nothing"], name="Maybe")
    elif (m := _EXCEPTION_ID.match(catalog_id)) is not None:
        labels = [label.strip() for label in m.group(1).split(",") if label.strip()]
        if not labels:
            raise PreconditionError("an exception theory needs a non-empty label set")
        return get_exception_text(labels)
    elif catalog_id in EXTRA_FILES:
        return get_extra_text(catalog_id)
    else:
        raise NotImplementedError(f"{catalog_id} is not a catalog theory")


@lru_cache(maxsize=None)
def load_catalog(catalog_id: CatalogId) -> Theory:
    """
    load a catalog theory with its audited builtin oracle

    Args:
        catalog_id (CatalogId): a Boom id, a composite id, an extra (AbelianGroup, Ring, BoundedLattice, Convex,
            ConvexClosed, Reader2, Maybe) or Exception{label,...}

    Raises:
        NotImplementedError: unknown id
        PreconditionError: Exception{} with no labels

    Returns:
        Theory: the bound theory, cached per id
    """
    theory = bind_theory(parse_theory(catalog_text(catalog_id)))
    logger.debug(f"loaded {catalog_id} with the {theory.oracle.backend} oracle")
    return theory


def build_catalog() -> dict[str, Theory]:
    ids = list(get_args(BoomId)) + list(get_args(CompositeId)) + list(CATALOG_EXTRAS)
    catalog = {catalog_id: load_catalog(catalog_id) for catalog_id in ids}
    faithful = sum(theory.certificate.variable_faithful for theory in catalog.values())
    logger.info(f"catalog built: {len(catalog)} theories, {faithful} variable-faithful")
    return catalog


def resolve_theory(arg: str) -> Theory:
    """a catalog id or the path of a `.thy` file"""
    path = Path(arg)
    if arg.endswith(".thy") or (path.suffix and path.exists()):
        return bind_theory(parse_theory(path.read_text(encoding="utf-8")))
    return load_catalog(arg)

# Standard Library

# My Library
from .theory import Theory, load_catalog, build_catalog, resolve_theory, bind_theory
from .oracles import Oracle, get_oracle
from .equality import EqVerdict, decide_equal, bounded_prove, find_countermodel, certify_meta, consistency
from .free import FreeElement, FreeAlgebra, SeparatedTerm, check_monad_laws, separate, equal_modulo
from .law import CandidateLaw, BeckReport, MicroSearch, get_law, check_beck, micro_search
from .nogo import Obligation, Verdict, WitnessBundle, check, check_all, derive_annihilation
from .atlas import AtlasReport, ReplayReport, run_table, replay, export_report

Report = Verdict | BeckReport | MicroSearch | AtlasReport | ReplayReport

__all__ = [
    # Typing
    "Report",
    "Oracle",
    # theories
    "Theory",
    "load_catalog",
    "build_catalog",
    "resolve_theory",
    "bind_theory",
    "get_oracle",
    # equality
    "EqVerdict",
    "decide_equal",
    "bounded_prove",
    "find_countermodel",
    "certify_meta",
    "consistency",
    # free monads
    "FreeElement",
    "FreeAlgebra",
    "SeparatedTerm",
    "check_monad_laws",
    "separate",
    "equal_modulo",
    # laws
    "CandidateLaw",
    "BeckReport",
    "MicroSearch",
    "get_law",
    "check_beck",
    "micro_search",
    # no-go theorems
    "Obligation",
    "Verdict",
    "WitnessBundle",
    "check",
    "check_all",
    "derive_annihilation",
    # atlas
    "AtlasReport",
    "ReplayReport",
    "run_table",
    "replay",
    "export_report",
]

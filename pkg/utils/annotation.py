# Standard Library
from typing import Literal, Callable, Mapping, Any


AxiomId = int

Side = Literal["S", "T"]

Direction = Literal["lr", "rl"]

OutputFormat = Literal["text", "json"]

ReportFormat = Literal["json", "markdown"]

EqStatus = Literal["Equal", "Distinct", "Unknown"]

Resolution = Literal["proved", "metaproperty-cited",
                     "counterexample-found", "unknown"]

Provenance = Literal["builtin-audited", "user-asserted"]

SoundnessTier = Literal["sound", "trusted-assumptions"]

VerdictKind = Literal["NoLaw", "UniqueCandidate",
                      "NotApplicable", "Inconclusive"]

Label = Literal["yes", "no", "open"]

BeckAxiom = Literal["unit1", "unit2", "mult1", "mult2", "naturality"]

LawKind = Literal["times-over-plus", "exception-sweep",
                  "manes-mulry-faulty", "rules", "table"]

SearchStatus = Literal["survivors", "exhausted", "aborted"]

TableId = Literal["boom", "extended", "composites", "iterated", "inverse"]

ReplayId = Literal["plotkin", "list-list",
                   "manes-mulry", "beck", "lattice-powerset"]

TheoremId = Literal[
    "Plotkin1",
    "PlotkinN",
    "PlotkinNoComm",
    "PlotkinIdemUnit",
    "TooManyConstants",
    "TimesOverPlusUnique",
    "LackingAbides",
    "IdemUnits",
    "InverseTrouble",
    "AbsorptionTrouble",
]

# current supported catalog ids:
#   - the 16 theories of the extended Boom hierarchy
#   - composites MT, ML, MM, PT, PL, PM
#   - AbelianGroup, Ring, BoundedLattice, Convex, Reader2, Maybe
#   - Exception{label,...} for any non-empty label set
BoomId = Literal["∅", "I", "C", "CI", "A", "AI", "AC", "ACI",
                 "U", "UI", "UC", "UCI", "UA", "UAI", "UAC", "UACI"]

CompositeId = Literal["MT", "ML", "MM", "PT", "PL", "PM"]

ExtraId = Literal["AbelianGroup", "Ring", "BoundedLattice",
                  "Convex", "Reader2", "Maybe", "Exception{e}"]

CatalogId = BoomId | CompositeId | ExtraId | str

MetaProperty = Literal[
    "variable_faithful",
    "all_ops_unital_or_idempotent",
    "linear_presentation",
    "constants_distinct",
    "closed_terms_are_constants",
    "renaming_reflects_constants",
]

JsonDict = dict[str, Any]

# a generator label of a free algebra is either a plain name or a nested element
Relabel = Callable[[Any], Any]

ParamEnv = Mapping[str, Any]

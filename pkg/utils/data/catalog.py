# Standard Library
from pathlib import Path
from functools import lru_cache
from typing import Iterable, get_args

# My Library
from ..annotation import BoomId, CompositeId


THEORY_DIR = Path(__file__).resolve().parent / "theories"

BOOM_IDS: tuple[str, ...] = get_args(BoomId)

COMPOSITE_IDS: tuple[str, ...] = get_args(CompositeId)

EXTRA_FILES: dict[str, str] = {
    "AbelianGroup": "abelian_group.thy",
    "Ring": "ring.thy",
    "BoundedLattice": "bounded_lattice.thy",
    "Convex": "convex.thy",
    "ConvexClosed": "convex_closed.thy",
    "Reader2": "reader2.thy",
}

BOOM_NAMES: dict[str, str] = {
    "U": "tree",
    "UC": "mobile",
    "UA": "list",
    "UAI": "square-free list",
    "UAC": "multiset",
    "UACI": "powerset",
}


def boom_symbols(boom_id: str) -> tuple[str, str]:
    """commutative variants are written additively, the others multiplicatively"""
    return ("+", "0") if "C" in boom_id else ("*", "1")


def get_boom_text(boom_id: str) -> str:
    if boom_id not in BOOM_IDS:
        raise NotImplementedError(f"{boom_id} is not a Boom theory")
    op, unit = boom_symbols(boom_id)
    lines = [f"# {BOOM_NAMES.get(boom_id, 'extended Boom variant ' + boom_id)}",
             f"theory {boom_id} {{", f"  op {op} : 2;"]
    if "U" in boom_id:
        lines.append(f"  const {unit};")
        lines.append(f"  eq unitL: {op}({unit},x) = x;")
        lines.append(f"  eq unitR: {op}(x,{unit}) = x;")
    if "A" in boom_id:
        lines.append(f"  eq assoc: {op}({op}(x,y),z) = {op}(x,{op}(y,z));")
    if "C" in boom_id:
        lines.append(f"  eq comm: {op}(x,y) = {op}(y,x);")
    if "I" in boom_id:
        lines.append(f"  eq idem: {op}(x,x) = x;")
    lines.append(f"  oracle builtin {boom_id};")
    lines.append("}")
    return "\n".join(lines) + "\n"


def get_composite_text(composite_id: str) -> str:
    if composite_id not in COMPOSITE_IDS:
        raise NotImplementedError(f"{composite_id} is not a composite theory")
    outer, inner = composite_id
    lines = [f"# {'multiset' if outer == 'M' else 'powerset'} after "
             f"{ {'T': 'tree', 'L': 'list', 'M': 'multiset'}[inner] }",
             f"theory {composite_id} {{",
             "  op + : 2;", "  op * : 2;", "  const 0;", "  const 1;",
             "  eq plusUnitL: +(0,x) = x;",
             "  eq plusUnitR: +(x,0) = x;",
             "  eq plusAssoc: +(+(x,y),z) = +(x,+(y,z));",
             "  eq plusComm: +(x,y) = +(y,x);"]
    if outer == "P":
        lines.append("  eq plusIdem: +(x,x) = x;")
    lines += ["  eq timesUnitL: *(1,x) = x;",
              "  eq timesUnitR: *(x,1) = x;"]
    if inner in "LM":
        lines.append("  eq timesAssoc: *(*(x,y),z) = *(x,*(y,z));")
    if inner == "M":
        lines.append("  eq timesComm: *(x,y) = *(y,x);")
    lines += ["  eq zeroL: *(0,x) = 0;",
              "  eq zeroR: *(x,0) = 0;",
              "  eq distL: *(x,+(y,z)) = +(*(x,y),*(x,z));",
              "  eq distR: *(+(x,y),z) = +(*(x,z),*(y,z));",
              f"  oracle builtin {composite_id};",
              "}"]
    return "\n".join(lines) + "\n"


def exception_name(labels: Iterable[str]) -> str:
    return "Exception{" + ",".join(sorted(set(labels))) + "}"


def get_exception_text(labels: Iterable[str], name: str = "") -> str:
    labels = sorted(set(labels))
    if not labels:
        raise ValueError("an exception theory needs at least one label")
    lines = [f"theory {name or exception_name(labels)} {{"]
    lines += [f"  const {label};" for label in labels]
    lines += ["  oracle builtin Exception;", "}"]
    return "\n".join(lines) + "\n"


@lru_cache
def get_extra_text(name: str) -> str:
    if name not in EXTRA_FILES:
        raise NotImplementedError(f"{name} is not shipped with the catalog")
    return (THEORY_DIR / EXTRA_FILES[name]).read_text(encoding="utf-8")

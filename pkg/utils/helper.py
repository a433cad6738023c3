# Standard Library
import sys
import argparse
from pathlib import Path
from fractions import Fraction
from typing import TYPE_CHECKING, Optional
from dataclasses import dataclass, fields, replace, asdict

# Third-Party Library
import numpy as np
import seaborn as sns
from loguru import logger
import matplotlib.pyplot as plt
from matplotlib.axes import Axes
from matplotlib.figure import Figure

# My Library
from .errors import PreconditionError
from .annotation import Label

if TYPE_CHECKING:
    from model.atlas import AtlasReport


def get_logger(log_file: Optional[Path], with_time: bool = True, quiet: bool = False):
    global logger

    logger.remove()
    if log_file is not None:
        logger.add(log_file, level="DEBUG",
                   format=f"{'{time:YYYY-D-MMMM@HH:mm:ss}' if with_time else ''}│ {{message}}")
    logger.add(sys.stderr, level="WARNING" if quiet else "DEBUG",
               format=f"{'{time:YYYY-D-MMMM@HH:mm:ss}' if with_time else ''}│ <level>{{message}}</level>")

    return logger


def get_parser(add_help: bool = False) -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(add_help=add_help)
    parser.add_argument("-b", "--bounds", type=str, default=None,
                        help="override search bounds, e.g. max_carrier=2,max_leaves=2,convex_grid=1/3;1/2")
    parser.add_argument("-F", "--format", type=str, default="text",
                        choices=["text", "json"], help="output format")
    parser.add_argument("-r", "--require-decisive", default=False,
                        action="store_true", help="exit with 3 when the verdict is Inconclusive")
    parser.add_argument("-o", "--out", type=str, default=None,
                        help="also write the report to this file")
    parser.add_argument("-q", "--quiet", default=False,
                        action="store_true", help="only log warnings to stderr")
    parser.add_argument("--no-log", default=False,
                        action="store_true", help="do not write a run log under log/")
    return parser


@dataclass(frozen=True)
class Bounds:
    max_carrier: int = 2
    max_leaves: int = 2
    proof_max_size: int = 12
    proof_max_states: int = 50_000
    model_max_size: int = 3
    witness_layers: int = 2
    witness_max_arity: int = 4
    enumeration_cap: int = 20_000
    search_max_nodes: int = 200_000
    convex_grid: tuple[Fraction, ...] = (Fraction(1, 2),)

    def __post_init__(self):
        for f in fields(self):
            value = getattr(self, f.name)
            if f.name == "convex_grid":
                if not value or any(not 0 < p < 1 for p in value):
                    raise PreconditionError("convex_grid needs rationals strictly between 0 and 1")
            elif value < 1:
                raise PreconditionError(f"{f.name} must be positive, got {value}")
        for name, ceiling in CEILINGS.items():
            if getattr(self, name) > ceiling:
                raise PreconditionError(f"{name}={getattr(self, name)} exceeds the hard ceiling {ceiling}")

    def to_json(self) -> dict:
        data = asdict(self)
        data["convex_grid"] = [str(p) for p in self.convex_grid]
        return data


CEILINGS: dict[str, int] = {
    "max_carrier": 3,
    "max_leaves": 3,
    "model_max_size": 4,
    "witness_max_arity": 4,
}


def get_bounds(text: Optional[str] = None, log: bool = True) -> Bounds:
    """
    parse `key=value,...` overrides on top of the default bounds

    Raises:
        PreconditionError: unknown key, malformed value, non-positive value or a value above its hard ceiling

    Returns:
        Bounds: the validated bounds
    """
    overrides: dict = {}
    known = {f.name for f in fields(Bounds)}
    for item in (text or "").split(","):
        if not item.strip():
            continue
        key, sep, value = item.partition("=")
        key = key.strip().replace("-", "_")
        if not sep or key not in known:
            raise PreconditionError(f"unknown bound {item.strip()!r}")
        try:
            if key == "convex_grid":
                overrides[key] = tuple(Fraction(p) for p in value.replace("|", ";").split(";") if p.strip())
            else:
                overrides[key] = int(value)
        except ValueError as e:
            raise PreconditionError(f"malformed bound {item.strip()!r}") from e
    bounds = replace(Bounds(), **overrides)

    if log:
        for key, value in bounds.to_json().items():
            logger.info(f"{key}: {value}")
    return bounds


MARKS: dict[Label, str] = {"yes": "✓", "no": "✗", "open": "?"}


def plot_atlas(report: "AtlasReport") -> Figure:
    """heatmap of the computed labels, annotated with ✓/✗/? and a ! on every disagreement"""
    rows, columns = list(report.rows), list(report.columns)
    codes = {"no": 0.0, "open": 0.5, "yes": 1.0}
    grid = np.zeros((len(rows), len(columns)))
    annotation = [["" for _ in columns] for _ in rows]
    for cell in report.cells:
        i, j = rows.index(cell.s), columns.index(cell.t)
        grid[i, j] = codes[cell.computed_label]
        annotation[i][j] = MARKS[cell.computed_label] + ("" if cell.agreement else "!")

    fig: Figure
    ax: Axes
    size = max(4, 0.6 * max(len(rows), len(columns)))
    fig, ax = plt.subplots(figsize=(size, size))

    # color map
    cmap = sns.diverging_palette(10, 220, as_cmap=True)

    sns.heatmap(
        grid, annot=annotation, cmap=cmap, vmin=0, vmax=1, fmt="", ax=ax,
        square=True, linewidths=.5, cbar=False,
        annot_kws={"fontsize": 8},
        yticklabels=[f"S={s}" for s in rows],
        xticklabels=[f"T={t}" for t in columns],
    )
    ax.set_title(f"{report.table}: laws S∘T ⇒ T∘S")
    return fig


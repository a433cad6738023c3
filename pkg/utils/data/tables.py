# Standard Library
from typing import get_args
from dataclasses import dataclass

# My Library
from ..annotation import Label, TableId


CODES: dict[str, Label] = {"y": "yes", "n": "no", "?": "open"}

EXTENDED_IDS: tuple[str, ...] = ("∅", "I", "C", "CI", "A", "AI", "AC", "ACI",
                                 "U", "UI", "UC", "UCI", "UA", "UAI", "UAC", "UACI")

# one string per row (the S side), one character per column (the T side) in EXTENDED_IDS order
EXTENDED_ROWS: dict[str, str] = {
    "∅":    "y?????yy??????yy",
    "I":    "?n?n?n?n?nnn?nnn",
    "C":    "y?????yy??????yy",
    "CI":   "?n?n?n?n?nnn?nnn",
    "A":    "y???y?yy??????yy",
    "AI":   "?n?n?n?n?nnn?nnn",
    "AC":   "y?????yy??????yy",
    "ACI":  "?n?n?n?n?nnn?nnn",
    "U":    "y?????yynnnnnnyy",
    "UI":   "?n?n?n?nnnnnnnnn",
    "UC":   "y?????yynnnnnnyy",
    "UCI":  "?n?n?n?nnnnnnnnn",
    "UA":   "y?????yynnnnnnyy",
    "UAI":  "?n?n?n?nnnnnnnnn",
    "UAC":  "y?????yynnnnnnyy",
    "UACI": "?n?n?n?nnnnnnnnn",
}

BOOM_IDS: tuple[str, ...] = ("U", "UA", "UAC", "UACI")

COMPOSITE_TABLE_IDS: tuple[str, ...] = BOOM_IDS + ("MT", "ML", "MM", "PT", "PL", "PM")

ITERATED_ROWS: tuple[str, ...] = ("UA", "UAC", "UACI")

ITERATED_COLUMNS: tuple[str, ...] = ("ML", "MM", "PM")

INVERSE_ROWS: tuple[str, ...] = ("AbelianGroup", "Ring", "MM")

INVERSE_COLUMNS: tuple[str, ...] = ("UA", "UAC", "UACI", "Exception{e}")

PROVENANCE: dict[str, str] = {
    "boom": "possible compositions in the Boom hierarchy (4x4 grid)",
    "extended": "extended Boom hierarchy, laws of type row∘column ⇒ column∘row (16x16 grid)",
    "composites": "Boom hierarchy with the six composites appended (10x10 grid)",
    "iterated": "iterated compositions of lists, multisets and powersets (3x3 grid)",
    "inverse": "inverse-trouble examples: groups, rings and multisets of multisets",
}


@dataclass(frozen=True)
class ExpectedTable:
    table: TableId
    rows: tuple[str, ...]
    columns: tuple[str, ...]
    labels: tuple[tuple[Label, ...], ...]
    provenance: str

    def label(self, s_id: str, t_id: str) -> Label:
        return self.labels[self.rows.index(s_id)][self.columns.index(t_id)]

    def cells(self):
        for i, s_id in enumerate(self.rows):
            for j, t_id in enumerate(self.columns):
                yield s_id, t_id, self.labels[i][j]

    def counts(self) -> dict[Label, int]:
        counts = {label: 0 for label in get_args(Label)}
        for *_, label in self.cells():
            counts[label] += 1
        return counts


def _extended(s_id: str, t_id: str) -> Label:
    return CODES[EXTENDED_ROWS[s_id][EXTENDED_IDS.index(t_id)]]


def _grid(table: TableId, rows, columns, labeller) -> ExpectedTable:
    labels = tuple(tuple(labeller(s_id, t_id) for t_id in columns) for s_id in rows)
    return ExpectedTable(table, tuple(rows), tuple(columns), labels, PROVENANCE[table])


def get_expected(table: TableId) -> ExpectedTable:
    """
    expected labels of a published classification table

    Args:
        table (TableId): boom, extended, composites, iterated or inverse

    Raises:
        NotImplementedError: unknown table id

    Returns:
        ExpectedTable: read-only label grid, rows are S and columns are T of a law S∘T ⇒ T∘S
    """
    if table == "boom":
        return _grid(table, BOOM_IDS, BOOM_IDS, _extended)
    elif table == "extended":
        return _grid(table, EXTENDED_IDS, EXTENDED_IDS, _extended)
    elif table == "composites":
        # only the six Boom laws survive once the composites are added
        return _grid(table, COMPOSITE_TABLE_IDS, COMPOSITE_TABLE_IDS,
                     lambda s, t: _extended(s, t) if s in BOOM_IDS and t in BOOM_IDS else "no")
    elif table == "iterated":
        return _grid(table, ITERATED_ROWS, ITERATED_COLUMNS, lambda s, t: "no")
    elif table == "inverse":
        return _grid(table, INVERSE_ROWS, INVERSE_COLUMNS, lambda s, t: "no")
    else:
        raise NotImplementedError(f"{table} table is not supported")

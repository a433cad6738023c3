"""
Classification tables and replays of the published counterexamples.

A table run checks every cell with the no-go cascade and compares the computed label with the expected one. A replay
recomputes the intermediate values of one counterexample with the free-monad, law and proof machinery, and reports
one assertion per value.
"""
# Standard Library
import json
from fractions import Fraction
from dataclasses import dataclass, field
from typing import Callable, Optional

# Third-Party Library
from loguru import logger

# My Library
from utils.helper import Bounds, MARKS
from utils.annotation import Label, TableId, ReplayId, ReportFormat, JsonDict
from utils.errors import ResourceError
from utils.data.tables import get_expected
from utils.term import Var, app, const, term_vars, render
from .theory import Theory, load_catalog
from .equality import bounded_prove, decide_equal, replay_proof
from .free import FreeElement, element, unit, mult, fmap, lift, unbox, mixed_signature, separate
from .law import BeckReport, get_law, apply_law, check_beck, times_over_plus_rules
from .nogo import Verdict, WitnessBundle, check, check_all, first_nolaw, derive_annihilation


@dataclass(frozen=True)
class AtlasCell:
    s: str
    t: str
    expected: Label
    provenance: str
    verdicts: tuple[Verdict, ...] = ()
    beck: Optional[BeckReport] = None
    computed_label: Label = "open"
    status: str = "inconclusive"

    @property
    def agreement(self) -> bool:
        return self.computed_label == self.expected

    @property
    def certificate(self) -> Optional[Verdict]:
        return first_nolaw(self.verdicts)

    def to_json(self) -> JsonDict:
        def brief(v: Verdict) -> JsonDict:
            if v.kind in ("NoLaw", "UniqueCandidate"):
                return v.to_json()
            return {"theorem": v.theorem, "kind": v.kind, "note": v.note}

        return {
            "s": self.s, "t": self.t, "expected": self.expected, "label": self.computed_label,
            "status": self.status, "theorem": None if self.certificate is None else self.certificate.theorem,
            "computed": {"verdicts": [brief(v) for v in self.verdicts],
                         "beck": None if self.beck is None else self.beck.to_json()},
            "agreement": self.agreement,
        }


@dataclass(frozen=True)
class AtlasReport:
    table: TableId
    rows: tuple[str, ...]
    columns: tuple[str, ...]
    cells: tuple[AtlasCell, ...]
    bounds: Bounds
    complete: bool = True

    @property
    def summary(self) -> dict[str, int]:
        counts = {"yes": 0, "no": 0, "open": 0}
        for cell in self.cells:
            counts[cell.computed_label] += 1
        counts["mismatches"] = sum(not cell.agreement for cell in self.cells)
        return counts

    def cell(self, s: str, t: str) -> AtlasCell:
        return next(c for c in self.cells if c.s == s and c.t == t)

    def to_json(self) -> JsonDict:
        return {
            "table": self.table, "bounds": self.bounds.to_json(),
            "cells": [cell.to_json() for cell in self.cells],
            "summary": self.summary, "complete": self.complete,
        }


def _label(expected: Label, verdicts: tuple[Verdict, ...]) -> tuple[Label, str, Optional[BeckReport]]:
    if first_nolaw(verdicts) is not None:
        return "no", "certified-no", None
    unique = next((v for v in verdicts if v.kind == "UniqueCandidate"), None)
    if unique is not None and unique.beck is not None and unique.beck.verified:
        return "yes", "verified-yes", unique.beck
    if expected == "yes":
        return "yes", "literature-yes", None if unique is None else unique.beck
    return "open", "inconclusive", None


def run_cell(s_id: str, t_id: str, expected: Label, provenance: str, bounds: Bounds) -> AtlasCell:
    S, T = load_catalog(s_id), load_catalog(t_id)
    verdicts = check_all(S, T, bounds, stop_at_first=True)
    label, status, beck = _label(expected, verdicts)
    cell = AtlasCell(s_id, t_id, expected, provenance, verdicts, beck, label, status)
    logger.debug(f"{s_id}∘{t_id} ⇒ {t_id}∘{s_id}: {label} ({status}), expected {expected}")
    if not cell.agreement:
        logger.warning(f"{s_id}∘{t_id}: computed {label}, table says {expected}")
    return cell


def run_table(table: TableId, bounds: Optional[Bounds] = None) -> AtlasReport:
    """
    classify every cell of a table

    Args:
        table (TableId): boom, extended, composites, iterated or inverse
        bounds (Optional[Bounds]): bounds of every check

    Raises:
        NotImplementedError: unknown table id

    Returns:
        AtlasReport: cells in row-major order; complete is False when a cell ran out of a hard budget
    """
    bounds = bounds or Bounds()
    expected = get_expected(table)
    cells: list[AtlasCell] = []
    complete = True
    for s_id, t_id, label in expected.cells():
        try:
            cells.append(run_cell(s_id, t_id, label, expected.provenance, bounds))
        except ResourceError as e:
            logger.error(f"{s_id}∘{t_id}: {e}")
            cells.append(AtlasCell(s_id, t_id, label, expected.provenance, status="aborted"))
            complete = False
    report = AtlasReport(table, expected.rows, expected.columns, tuple(cells), bounds, complete)
    summary = report.summary
    logger.success(f"{table}: {summary['yes']} yes / {summary['no']} no / {summary['open']} open, "
                   f"{summary['mismatches']} mismatches")
    return report


def export_report(report: AtlasReport, format: ReportFormat = "json") -> str:
    """json is sorted and indented; markdown is the grid with ✓/✗/? marks, ! on disagreement"""
    if format == "json":
        return json.dumps(report.to_json(), ensure_ascii=False, indent=2, sort_keys=True)
    elif format == "markdown":
        lines = [f"## {report.table}: laws S∘T ⇒ T∘S (rows S, columns T)", "",
                 "| S \\ T | " + " | ".join(report.columns) + " |",
                 "|---|" + "---|" * len(report.columns)]
        for s_id in report.rows:
            marks = []
            for t_id in report.columns:
                cell = report.cell(s_id, t_id)
                marks.append(MARKS[cell.computed_label] + ("" if cell.agreement else "!"))
            lines.append(f"| {s_id} | " + " | ".join(marks) + " |")
        summary = report.summary
        lines += ["", f"{summary['yes']} yes, {summary['no']} no, {summary['open']} open, "
                      f"{summary['mismatches']} mismatches"]
        if not report.complete:
            lines.append("partial report: some cells exhausted their budget")
        return "\n".join(lines) + "\n"
    else:
        raise NotImplementedError(f"{format} reports are not supported")


# ---------------------------------------------------------------- replays

@dataclass(frozen=True)
class ReplayAssertion:
    name: str
    expected: str
    actual: str
    passed: bool
    detail: str = ""

    def to_json(self) -> JsonDict:
        data = {"name": self.name, "expected": self.expected, "actual": self.actual, "passed": self.passed}
        if self.detail:
            data["detail"] = self.detail
        return data


@dataclass(frozen=True)
class ReplayReport:
    replay: ReplayId
    assertions: tuple[ReplayAssertion, ...]
    verdict: Optional[Verdict] = field(default=None, compare=False)

    @property
    def passed(self) -> bool:
        return all(a.passed for a in self.assertions)

    def to_json(self) -> JsonDict:
        return {
            "replay": self.replay, "passed": self.passed,
            "assertions": [a.to_json() for a in self.assertions],
            "verdict": None if self.verdict is None else self.verdict.to_json(),
        }

    def render(self) -> str:
        lines = [f"replay {self.replay}: {'pass' if self.passed else 'FAIL'}"]
        for a in self.assertions:
            lines.append(f"  {'✓' if a.passed else '✗'} {a.name}: {a.actual}" +
                         ("" if a.passed else f" (expected {a.expected})"))
            if a.detail:
                lines.append(f"      {a.detail}")
        return "\n".join(lines)


def _same(name: str, actual, expected, detail: str = "") -> ReplayAssertion:
    return ReplayAssertion(name, str(expected), str(actual), actual == expected, detail)


def _plotkin() -> ReplayReport:
    S, T = load_catalog("Convex"), load_catalog("UACI")
    half = Fraction(1, 2)
    a, b, c, d = (Var(name) for name in "abcd")
    ab, cd = element(T, app("+", a, b)), element(T, app("+", c, d))
    xi = element(S, app("+", Var(ab.box), Var(cd.box), param=half))
    f1 = {"a": "a", "b": "b", "c": "a", "d": "b"}
    f2 = {"a": "a", "b": "b", "c": "b", "d": "a"}
    f3 = {"a": "a", "b": "a", "c": "c", "d": "c"}

    def dp(f: dict[str, str]) -> FreeElement:
        return fmap(S, lift(T, f), xi)

    eta_t = lambda name: unit(T, name).box
    eta_s = lambda name: unit(S, name).box
    a_half_c = element(S, app("+", Var(unit(T, "a").box), Var(unit(T, "c").box), param=half))
    assertions = [
        _same("DP(f1)(Ξ) = η{a,b}", dp(f1), unit(S, ab)),
        _same("DP(f2)(Ξ) = η{a,b}", dp(f2), unit(S, ab)),
        _same("DP(f3)(Ξ) = {a} +½ {c}", dp(f3), a_half_c),
        _same("P(η)({a,b}) = {[a],[b]}", fmap(T, eta_s, ab),
              element(T, app("+", Var(unit(S, "a").box), Var(unit(S, "b").box)))),
        _same("D(η)(a +½ c) = DP(f3)(Ξ)", fmap(S, eta_t, element(S, app("+", a, c, param=half))), dp(f3)),
    ]
    verdict = check("Plotkin1", S, T)
    assertions.append(_same("Plotkin1 on convex over powerset", verdict.kind, "NoLaw"))
    return ReplayReport("plotkin", tuple(assertions), verdict)


def _separated_order(S: Theory, T: Theory, rules, mixed) -> list[str]:
    separated = separate(S, T, rules, mixed)
    family = separated.family_map
    return [render(family[name]) for name in term_vars(separated.outer)]


def _list_list() -> ReplayReport:
    S = T = load_catalog("UA")
    mixed_sig = mixed_signature(S, T)
    star = mixed_sig.t_name("*")
    a, b, c, d = (Var(name) for name in "abcd")
    mixed = app("*", app(star, a, b), app(star, c, d))
    rules = times_over_plus_rules(S, T)
    swapped = tuple(sorted(rules, key=lambda r: r.name != "distL"))

    def word(x: Var, y: Var) -> str:
        return render(S.oracle.normalize(app("*", x, y)))

    assertions = [
        _same("right distribution first", _separated_order(S, T, rules, mixed),
              [word(a, c), word(a, d), word(b, c), word(b, d)]),
        _same("left distribution first", _separated_order(S, T, swapped, mixed),
              [word(a, c), word(b, c), word(a, d), word(b, d)]),
    ]
    for s_id in ("UA", "UACI"):
        th = load_catalog(s_id)
        report = check_beck(get_law("times-over-plus", th, th))
        failure = report.first_failure
        detail = "" if failure is None else f"{failure.axiom} fails at {failure.instance}"
        assertions.append(_same(f"times-over-plus on {s_id} over {s_id} fails Beck", failure is not None, True, detail))
    return ReplayReport("list-list", tuple(assertions))


def _manes_mulry() -> ReplayReport:
    S, T = load_catalog("UA"), load_catalog("Exception{a,b}")
    law = get_law("manes-mulry-faulty", S, T)
    lam = lambda e: apply_law(law, e)
    # [[b],[]]: a list of lists of exception values
    nested = element(S, app("*", Var(unit(S, element(T, const("b"))).box), Var(element(S, const("1")).box)))
    path_a = lam(mult(S, nested))
    inner = fmap(S, lambda name: lam(unbox(S, name)).box, nested)
    path_b = fmap(T, lambda name: mult(S, unbox(S, name)).box, lam(inner))
    assertions = [
        _same("λ after μ", path_a.text, "b"),
        _same("Eμ after λ after Lλ", path_b.text, "a"),
        _same("the square does not commute", path_a != path_b, True),
    ]
    return ReplayReport("manes-mulry", tuple(assertions))


def _beck() -> ReplayReport:
    S, T = load_catalog("AbelianGroup"), load_catalog("UA")
    facts = tuple(fact.equation for fact in derive_annihilation(S, T))
    x, zero, one = Var("x"), const("0"), const("1")
    chain = [
        x,
        app("+", x, zero),
        app("+", x, app("+", one, app("-", one))),
        app("+", app("+", x, one), app("-", one)),
        app("+", one, app("-", one)),
        zero,
    ]
    assertions = [_same("annihilation facts", sorted(render(f.lhs) + " = " + render(f.rhs) for f in facts),
                        sorted(["+(1,x) = 1", "+(x,1) = 1"]))]
    for before, after in zip(chain, chain[1:]):
        proved = bounded_prove(S, before, after, facts=facts)
        replayed = replay_proof(S, before, proved.proof, facts) if proved.equal else None
        steps = ", ".join(step.axiom for step in proved.proof)
        assertions.append(_same(f"{render(before)} = {render(after)}", replayed, after, steps))
    alone = decide_equal(S, x, zero)
    assertions.append(_same("x ≠ 0 in the group alone", alone.status, "Distinct"))
    collapsed = all(a.passed for a in assertions[1:-1])
    assertions.append(_same("x = 0 = y makes the composite inconsistent", collapsed, True,
                            "every variable equals 0 once the annihilation facts hold"))
    return ReplayReport("beck", tuple(assertions))


def _lattice_powerset() -> ReplayReport:
    S, T = load_catalog("BoundedLattice"), load_catalog("UACI")
    x, y = Var("x"), Var("y")
    w = WitnessBundle(s=app("∨", x, app("∧", x, y)), s_prime=x, f=(("x", y), ("y", const("⊤"))))
    verdict = check("AbsorptionTrouble", S, T, w)
    assertions = [
        _same("∨(x,∧(x,y)) = x", decide_equal(S, w.s, x).status, "Equal"),
        _same("AbsorptionTrouble on lattices over powerset", verdict.kind, "NoLaw"),
    ]
    return ReplayReport("lattice-powerset", tuple(assertions), verdict)


REPLAYS: dict[ReplayId, Callable[[], ReplayReport]] = {
    "plotkin": _plotkin,
    "list-list": _list_list,
    "manes-mulry": _manes_mulry,
    "beck": _beck,
    "lattice-powerset": _lattice_powerset,
}


def replay(replay_id: ReplayId) -> ReplayReport:
    if replay_id not in REPLAYS:
        raise NotImplementedError(f"{replay_id} is not a supported replay")
    report = REPLAYS[replay_id]()
    if report.passed:
        logger.success(f"replay {replay_id}: all {len(report.assertions)} assertions hold")
    else:
        logger.error(f"replay {replay_id}: {sum(not a.passed for a in report.assertions)} assertions fail")
    return report


__all__ = ["AtlasCell", "AtlasReport", "run_cell", "run_table", "export_report", "ReplayAssertion",
           "ReplayReport", "replay", "REPLAYS"]

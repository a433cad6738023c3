# Standard Library
import json
from typing import get_args

# Third-Party Library
import pytest
import matplotlib.pyplot as plt

# My Library
from model.atlas import AtlasCell, AtlasReport, run_cell, run_table, export_report, replay
from utils.annotation import ReplayId
from utils.data.tables import get_expected
from utils.helper import Bounds, plot_atlas


def small_report() -> AtlasReport:
    cells = (
        AtlasCell("UA", "UA", "no", "test", computed_label="no", status="certified-no"),
        AtlasCell("UA", "UAC", "yes", "test", computed_label="yes", status="literature-yes"),
        AtlasCell("UAC", "UA", "no", "test", computed_label="open"),
        AtlasCell("UAC", "UAC", "yes", "test", computed_label="yes", status="literature-yes"),
    )
    return AtlasReport("boom", ("UA", "UAC"), ("UA", "UAC"), cells, Bounds())


def test_expected_tables():
    assert get_expected("boom").counts() == {"yes": 6, "no": 10, "open": 0}
    assert get_expected("extended").counts() == {"yes": 41, "no": 112, "open": 103}
    assert get_expected("composites").counts()["yes"] == 6
    assert get_expected("iterated").label("UAC", "PM") == "no"
    with pytest.raises(NotImplementedError):
        get_expected("hexagon")


def test_single_cell(bounds):
    cell = run_cell("UA", "UA", "no", "test", bounds)
    assert cell.computed_label == "no" and cell.status == "certified-no"
    assert cell.agreement
    assert cell.certificate.theorem == "LackingAbides"
    assert cell.to_json()["theorem"] == "LackingAbides"


def test_summary_counts_disagreements():
    report = small_report()
    assert report.summary == {"yes": 2, "no": 1, "open": 1, "mismatches": 1}
    assert report.cell("UAC", "UA").computed_label == "open"


def test_markdown_export():
    text = export_report(small_report(), "markdown")
    assert "| UA | ✗ | ✓ |" in text
    assert "| UAC | ?! | ✓ |" in text
    assert "2 yes, 1 no, 1 open, 1 mismatches" in text
    with pytest.raises(NotImplementedError):
        export_report(small_report(), "html")


def test_json_export():
    data = json.loads(export_report(small_report(), "json"))
    assert data["table"] == "boom"
    assert data["summary"]["mismatches"] == 1
    assert [cell["label"] for cell in data["cells"]] == ["no", "yes", "open", "yes"]
    assert data["bounds"]["max_carrier"] == 2


def test_heatmap():
    fig = plot_atlas(small_report())
    assert fig.axes[0].get_title() == "boom: laws S∘T ⇒ T∘S"
    plt.close(fig)


@pytest.mark.parametrize("replay_id", get_args(ReplayId))
def test_replays_reproduce(replay_id):
    report = replay(replay_id)
    assert report.passed, report.render()
    assert report.to_json()["passed"]


def test_unknown_replay():
    with pytest.raises(NotImplementedError):
        replay("fibonacci")


@pytest.mark.slow
def test_boom_table():
    report = run_table("boom")
    assert report.complete
    assert report.summary == {"yes": 6, "no": 10, "open": 0, "mismatches": 0}
    assert report.cell("UACI", "UACI").certificate.theorem == "IdemUnits"


@pytest.mark.slow
def test_extended_table():
    report = run_table("extended")
    assert report.complete
    assert report.summary == {"yes": 41, "no": 112, "open": 103, "mismatches": 0}
    for cell in report.cells:
        if cell.expected == "no":
            assert cell.status == "certified-no" and cell.certificate is not None
        else:
            assert cell.computed_label != "no"


@pytest.mark.slow
def test_composites_table():
    report = run_table("composites")
    assert report.complete
    summary = report.summary
    assert (summary["yes"], summary["no"], summary["mismatches"]) == (6, 94, 0)
    assert all(cell.status == "certified-no" for cell in report.cells if cell.expected == "no")


@pytest.mark.slow
def test_iterated_table():
    report = run_table("iterated")
    assert report.summary == {"yes": 0, "no": 9, "open": 0, "mismatches": 0}
    assert {cell.certificate.theorem for cell in report.cells} == {"TooManyConstants"}

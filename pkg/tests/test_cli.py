# Standard Library
import json

# Third-Party Library
import pytest

# My Library
from src.distlaw import main, EXIT_OK, EXIT_USAGE, EXIT_INCONCLUSIVE


QUIET = ["--no-log", "-q"]

SEMILATTICE = """
theory Semilattice {
  op * : 2;
  eq assoc: *(*(x,y),z) = *(x,*(y,z));
  eq comm: *(x,y) = *(y,x);
  eq idem: *(x,x) = x;
}
"""


@pytest.fixture
def semilattice(tmp_path):
    path = tmp_path / "semilattice.thy"
    path.write_text(SEMILATTICE, encoding="utf-8")
    return str(path)


def test_nogo_text(capsys):
    assert main(["nogo", "--s", "UA", "--t", "UA", *QUIET]) == EXIT_OK
    out = capsys.readouterr().out
    assert "# law S∘T ⇒ T∘S with S = UA, T = UA" in out
    assert "LackingAbides on UA∘UA ⇒ UA∘UA: NoLaw" in out


def test_nogo_json(capsys):
    assert main(["nogo", "--s", "UA", "--t", "UA", "--theorem", "LackingAbides", "-F", "json", *QUIET]) == EXIT_OK
    data = json.loads(capsys.readouterr().out)
    assert data["result"] == "NoLaw"
    assert data["verdicts"][0]["witnesses"]["s_op"] == "*(x,y)"


def test_eq(capsys):
    assert main(["eq", "UA", "*(x,1)", "x", *QUIET]) == EXIT_OK
    assert "*(x,1) vs x in UA: Equal (canonical-form)" in capsys.readouterr().out


def test_parse(semilattice, capsys):
    assert main(["parse", semilattice, *QUIET]) == EXIT_OK
    assert "theory Semilattice" in capsys.readouterr().out


@pytest.mark.parametrize("argv", [
    ["eq", "Heyting", "x", "x"],
    ["eq", "UA", "*(x,", "x"],
    ["eq", "UA", "+(x,y)", "x"],
    ["nogo", "--s", "UA", "--t", "UA", "-b", "max_carrier=9"],
    ["nogo", "--s", "UA", "--t", "UA", "-b", "radius=3"],
    ["nogo", "--s", "UA", "--t", "UA", "--witness", "s_op=*(x,y)"],
    ["parse", "missing.thy"],
])
def test_usage_errors(argv):
    assert main([*argv, *QUIET]) == EXIT_USAGE


def test_argparse_errors():
    with pytest.raises(SystemExit) as e:
        main(["nogo"])
    assert e.value.code == 2


def test_require_decisive(semilattice):
    argv = ["eq", semilattice, "*(x,*(y,x))", "*(x,y)", "-b", "proof_max_size=4", *QUIET]
    assert main(argv) == EXIT_OK
    assert main([*argv, "-r"]) == EXIT_INCONCLUSIVE


def test_replay_writes_the_report(tmp_path, capsys):
    out = tmp_path / "plotkin.txt"
    assert main(["replay", "plotkin", "-o", str(out), *QUIET]) == EXIT_OK
    assert out.read_text(encoding="utf-8").startswith("replay plotkin: pass")
    assert "replay plotkin: pass" in capsys.readouterr().out


def test_verify_law(capsys):
    assert main(["verify-law", "--s", "UAC", "--t", "UAC", *QUIET]) == EXIT_OK
    assert "all squares commute" in capsys.readouterr().out


def test_separate(capsys):
    assert main(["separate", "--s", "UA", "--t", "UAC", "*(+(x,y),z)", *QUIET]) == EXIT_OK
    out = capsys.readouterr().out
    assert "*(+(x,y),z) ⇝" in out and "[*(x,z)] ↦ *(x,z)" in out

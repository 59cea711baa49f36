import pytest
from typer.testing import CliRunner

from src.cli.controller import app, run
from src.cli.service import mode_for_law, parse_word
from src.exceptions import ParseError
from src.flagbundle.model import FlagMode

runner = CliRunner()


# Tests for argument helpers
def test_parse_word():
    """Tests word parsing, the empty word included."""
    assert parse_word("1,2,1") == (1, 2, 1)
    assert parse_word("") == ()
    with pytest.raises(ParseError):
        parse_word("1,x")


def test_mode_for_law():
    """Tests that law names pick the flag mode."""
    assert mode_for_law("add") == FlagMode.CH
    assert mode_for_law("mult") == FlagMode.CK
    assert mode_for_law("laws/custom.json") == FlagMode.FGL


# Tests for text output
def test_poly_beta_text():
    """Tests the beta-polynomial of [2,1] in text mode."""
    result = runner.invoke(app, ["poly", "beta", "--perm", "[2,1]"])
    assert result.exit_code == 0
    assert "x1 + y1 + b*x1*y1" in result.stdout


def test_table_text():
    """Tests one line per permutation."""
    result = runner.invoke(app, ["table", "schubert", "--n", "2"])
    assert result.exit_code == 0
    assert "[1,2]: 1" in result.stdout
    assert "[2,1]: x1 - y1" in result.stdout


def test_bad_permutation_exits_2():
    """Tests that caller errors exit with status 2."""
    result = runner.invoke(app, ["poly", "schubert", "--perm", "[1,1]"])
    assert result.exit_code == 2
    assert "Error:" in result.output


def test_verify_pass():
    """Tests a passing suite."""
    result = runner.invoke(app, ["verify", "special", "--n", "2"])
    assert result.exit_code == 0
    assert "PASS special n=2" in result.stdout


# Tests for the envelope returned by run()
def test_run_poly_envelope():
    """Tests the JSON envelope of a poly command."""
    envelope = run(["--json", "poly", "beta", "--perm", "[2,1]"])
    assert envelope.status == 0
    assert envelope.command == "poly beta --perm [2,1]"
    assert envelope.result["text"] == "x1 + y1 + b*x1*y1"
    assert envelope.metadata == {"kind": "beta", "n": 2}


def test_run_usage_error():
    """Tests that an unknown command is a usage error."""
    assert run(["nonsense"]).status == 2


def test_run_cap_exceeded():
    """Tests that a suite above its cap is refused."""
    assert run(["verify", "braid", "--n", "9"]).status == 2


def test_run_fgl_chi():
    """Tests chi of the multiplicative law up to degree 3."""
    envelope = run(["fgl", "chi", "--law", "mult", "--degree", "3"])
    assert envelope.result["series"] == "-u - b*u^2 - b^2*u^3"


def test_run_fgl_axioms_law_files(law_file, broken_law_file):
    """Tests exit status 0 for a valid law and 1 for a broken one."""
    assert run(["fgl", "axioms", "--law", str(law_file)]).status == 0
    assert run(["fgl", "axioms", "--law", str(broken_law_file), "--cap", "4"]).status == 1


def test_run_fgl_lazard():
    """Tests that relations start in degree 4."""
    assert run(["fgl", "lazard", "--degree", "3"]).result["relations"] == []
    assert run(["fgl", "lazard", "--degree", "4"]).result["relations"]


def test_run_chern_base_class():
    """Tests the additive factors for n = 3."""
    envelope = run(["chern", "base-class", "--n", "3", "--expand"])
    assert envelope.result["factors"] == ["x1 - y1", "x1 - y2", "x2 - y1"]
    assert envelope.result["expanded"] is not None


def test_run_flag_class_and_eq():
    """Tests a Chow class and an equality modulo J."""
    envelope = run(["flag", "class", "--n", "2", "--word", "1"])
    assert envelope.result["representative"] == "1"
    assert envelope.result["status"] == "exact"
    envelope = run(["flag", "eq", "x1 + x2", "y1 + y2", "--n", "2"])
    assert envelope.result["equal"] is True


def test_run_flag_class_law_file(law_file):
    """Tests a truncated class under a user law."""
    envelope = run(
        ["flag", "class", "--n", "2", "--mode", "fgl", "--law", str(law_file), "--word", "1"]
    )
    assert envelope.status == 0
    assert envelope.result["status"] == "truncated"


def test_run_degeneracy_commands():
    """Tests the essential set, the sufficiency check and a rank check."""
    envelope = run(["degeneracy", "essential", "--perm", "[1,3,2]"])
    assert envelope.result["rank_conditions"] == {"2,2": 1}
    assert run(["degeneracy", "check", "--perm", "[3,2,1]", "--trials", "10"]).status == 0
    envelope = run(
        ["degeneracy", "rank", "--perm", "[1,3,2]", "--matrix", "[[1,0,0],[0,1,0],[0,0,1]]"]
    )
    assert envelope.result["satisfied"] is False


def test_run_perm_info():
    """Tests the permutation summary."""
    envelope = run(["perm", "info", "--perm", "[3,2,1]"])
    assert envelope.result["length"] == 3
    assert envelope.result["reduced_words"] == ["1,2,1", "2,1,2"]

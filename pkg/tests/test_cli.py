import subprocess
import sys

import pytest

from hopfhoch.cli import EXIT_ERROR, EXIT_FAIL, EXIT_OK, RunConfig, main, run
from hopfhoch.models import model_text


def structured(capsys, *argv):
    code = main([*argv, "--format", "structured"])
    out = capsys.readouterr().out
    return code, [line.split("\t") for line in out.splitlines()]


def rows(records, kind):
    return [r[1:] for r in records if r[0] == kind]


def test_validate_registry_model(capsys):
    code, recs = structured(capsys, "validate", "--model", "c2-sign")
    assert code == EXIT_OK
    assert recs[-1] == ["status", "pass"]
    assert all(r[-1] == "pass" for r in rows(recs, "axiom"))


def test_validate_trivial_wrapper(capsys):
    assert structured(capsys, "validate", "--model", "trivial-H(dual-numbers)")[0] == EXIT_OK


def test_validate_corrupted_file_names_the_axiom(capsys, tmp_path):
    p = tmp_path / "bad.model"
    p.write_text(model_text("c2-sign").replace("g: 1 | -x", "g: 1 | x + 1"))
    code, recs = structured(capsys, "validate", "--model", str(p))
    assert code == EXIT_FAIL
    failed = {r[0] for r in rows(recs, "axiom") if r[-1] == "fail"}
    assert "module-algebra axiom b(a1 a2) = sum (b1 a1)(b2 a2)" in failed
    assert rows(recs, "violation")


def test_other_commands_refuse_invalid_models(capsys, tmp_path):
    p = tmp_path / "bad.model"
    p.write_text(model_text("c2-sign").replace("g: 1 | -x", "g: 1 | 2*x"))
    code, recs = structured(capsys, "cohomology", "--model", str(p))
    assert code == EXIT_ERROR
    assert "axioms violated" in rows(recs, "error")[0][0]


def test_unreadable_model_is_an_error(capsys):
    code, recs = structured(capsys, "spaces", "--model", "/no/such/file")
    assert code == EXIT_ERROR and recs[-1] == ["status", "error"]


def test_malformed_model_reports_line_and_column(capsys, tmp_path):
    p = tmp_path / "bad.model"
    p.write_text(model_text("dual-numbers").replace("x: x | 0", "x: x | 1/0"))
    code, recs = structured(capsys, "validate", "--model", str(p))
    assert code == EXIT_ERROR
    assert rows(recs, "error")[0][0].startswith("line 10, column 12")


def test_axioms_with_max_degree_zero(capsys):
    code, recs = structured(capsys, "axioms", "--model", "dual-numbers", "--max-degree", "0")
    assert code == EXIT_OK
    assert rows(recs, "note") == [["no identities in range"]]
    assert not rows(recs, "identity")


def test_axioms_report_lists_every_identity(capsys):
    code, recs = structured(capsys, "axioms", "--model", "c2-sign", "--max-degree", "1")
    ids = rows(recs, "identity")
    assert len(ids) == 13
    assert all(len(r) == 5 for r in ids)
    # exit status follows the rows: 1 exactly when some identity fails
    assert code == (EXIT_FAIL if any(r[-1] == "fail" for r in ids) else EXIT_OK)


def test_axioms_cap(capsys):
    code, recs = structured(capsys, "axioms", "--model", "dual-numbers", "--max-degree", "4")
    assert code == EXIT_ERROR
    assert "degree 6" in rows(recs, "error")[0][0]


def test_spaces_over_the_cap_name_the_degree(capsys):
    code, recs = structured(capsys, "spaces", "--model", "dual-numbers", "--max-degree", "5")
    assert code == EXIT_ERROR
    assert len(rows(recs, "space")) == 5
    assert "degree 5" in rows(recs, "error")[0][0]


def test_cohomology_table_and_oracle(capsys):
    code, recs = structured(capsys, "cohomology", "--model", "dual-numbers", "--max-degree", "2", "--oracle")
    assert code == EXIT_OK
    assert [r[-1] for r in rows(recs, "degree")] == ["2", "1", "1"]
    assert all(r[-1] == "pass" for r in rows(recs, "oracle"))
    assert rows(recs, "check")[0][-1] == "pass"


def test_gerstenhaber_needs_degree_two(capsys):
    code, _ = structured(capsys, "gerstenhaber", "--model", "dual-numbers", "--max-degree", "1")
    assert code == EXIT_ERROR


def test_gerstenhaber_tables(capsys):
    code, recs = structured(capsys, "gerstenhaber", "--model", "dual-numbers", "--max-degree", "3")
    assert code == EXIT_OK
    assert rows(recs, "note")[0][0].startswith("HH^0 is computed but excluded")
    br = {(r[0], r[1]): r[2] for r in rows(recs, "bracket")}
    assert br[("HH^1[0]", "HH^1[0]")] == "0"
    assert br[("HH^1[0]", "HH^2[0]")] == "-2"
    cup = {(r[0], r[1]): r[2] for r in rows(recs, "cup")}
    assert cup[("HH^1[0]", "HH^2[0]")] == "1"


def test_text_and_structured_carry_the_same_numbers(capsys):
    argv = ["gerstenhaber", "--model", "c2-sign", "--max-degree", "2"]
    main(argv)
    text = capsys.readouterr().out
    _, recs = structured(capsys, *argv)
    for m, i, vals in rows(recs, "class"):
        assert f"HH^{m}[{i}] represented by the cochain with entries {vals}" in text
    for a, b, vals in rows(recs, "bracket"):
        assert f"bracket({a}, {b}) = ({vals})" in text


@pytest.mark.parametrize("command,extra", [
    ("axioms", ["--max-degree", "2"]),
    ("cohomology", ["--max-degree", "3"]),
    ("gerstenhaber", ["--max-degree", "3"]),
])
def test_structured_output_is_byte_identical(command, extra):
    cfg = RunConfig(command, "c2-sign", int(extra[1]), seed=3, samples=8, format="structured")
    assert run(cfg).structured() == run(cfg).structured()


def test_console_script_entry_point():
    out = subprocess.run([sys.executable, "-m", "hopfhoch.cli", "spaces", "--model", "c2-sign",
                          "--max-degree", "1", "--format", "structured"],
                         capture_output=True, text=True, check=False)
    assert out.returncode == 0
    assert "space\t1\t4\t2" in out.stdout


def test_config_validation():
    with pytest.raises(ValueError):
        RunConfig("axioms", "c2-sign", max_degree=-1)
    with pytest.raises(ValueError):
        RunConfig("axioms", "c2-sign", samples=0)
    assert main(["axioms", "--model", "c2-sign", "--samples", "0"]) == EXIT_ERROR

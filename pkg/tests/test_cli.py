"""Command-line driver: exit codes, diagnostics, traces, corpus table."""

import json

import pytest

from stagec.cli import Verdict, main, parse_verdict
from stagec.errors import ParseError

from conftest import CORPUS


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def test_check_rejects_c1_with_codec_hint(capsys):
    code, out, err = run(capsys, "check", CORPUS / "c1_reject.sth")
    assert code == 1 and out == ""
    assert "no evidence for Show a at level 1 (have it at level 0; consider CodeC)" in err


def test_check_json_diagnostic(capsys):
    code, out, _ = run(capsys, "check", CORPUS / "c1_reject.sth", "--json")
    diag = json.loads(out)
    assert code == 1
    assert diag["phase"] == "typecheck" and diag["code"] == "NoEvidence"
    assert set(diag["span"]) == {"line", "col"}


def test_stage_error_json_has_levels(capsys, tmp_path):
    f = tmp_path / "tardy.sth"
    f.write_text("main = \\x : Int -> [| x |]")
    code, out, _ = run(capsys, "check", f, "--json")
    diag = json.loads(out)
    assert code == 1
    assert (diag["code"], diag["boundLevel"], diag["useLevel"]) == ("StageError", 0, 1)


def test_check_accepts_silently(capsys):
    assert run(capsys, "check", CORPUS / "c2.sth") == (0, "", "")


def test_run_power(capsys):
    code, out, _ = run(capsys, "run", CORPUS / "power.sth")
    assert (code, out) == (0, "32\n")


def test_run_json_and_trace(capsys):
    code, out, _ = run(capsys, "run", CORPUS / "c1_prime.sth", "--trace", "--json")
    lines = [json.loads(line) for line in out.splitlines()]
    assert code == 0
    assert [x["step"] for x in lines[:-1]] == list(range(1, len(lines)))
    assert lines[0]["rule"] == "DP_DefBeta"
    assert lines[-1] == {"value": '"42"', "steps": len(lines) - 1}


def test_text_trace_format(capsys):
    code, out, _ = run(capsys, "run", CORPUS / "c2.sth", "--trace")
    lines = out.splitlines()
    assert lines[0] == "[1] DP_DefBeta"
    assert any(line.startswith("[2] ") for line in lines)
    assert lines[-1] == '"5"'


def test_runtime_budget_exit_code(capsys, monkeypatch):
    code, _, err = run(capsys, "run", CORPUS / "power.sth", "--max-steps", "5")
    assert code == 3 and "BudgetExceeded" in err
    monkeypatch.setenv("STAGEC_MAX_STEPS", "5")
    assert run(capsys, "run", CORPUS / "power.sth")[0] == 3


def test_parse_error_exit_code(capsys, tmp_path):
    f = tmp_path / "bad.sth"
    f.write_text("main =")
    code, out, _ = run(capsys, "check", f, "--json")
    assert code == 2 and json.loads(out)["phase"] == "parse"


def test_unknown_flag_exits_2(capsys):
    code, _, err = run(capsys, "run", CORPUS / "power.sth", "--bogus")
    assert code == 2 and "usage" in err


def test_missing_subcommand_exits_2(capsys):
    assert run(capsys)[0] == 2


def test_elaborate_then_lint(capsys, tmp_path):
    out_file = tmp_path / "power.core"
    assert run(capsys, "elaborate", CORPUS / "power.sth", "--out", out_file)[0] == 0
    assert run(capsys, "lint", out_file) == (0, "", "")
    code, out, _ = run(capsys, "run", out_file)
    assert (code, out) == (0, "32\n")


def test_lint_reports_bad_core(capsys, tmp_path):
    f = tmp_path / "bad.core"
    f.write_text("main : Int = true")
    code, out, _ = run(capsys, "lint", f, "--json")
    assert code == 1 and json.loads(out)["code"] == "LintTypeMismatch"


def test_elaboration_lint_failure_is_internal(capsys, monkeypatch):
    import stagec.cli as cli
    from stagec.errors import LintError

    def broken(_):
        raise LintError("LintTypeMismatch", "forced")
    monkeypatch.setattr(cli, "lint_program", broken)
    code, _, err = run(capsys, "check", CORPUS / "c2.sth")
    assert code == 4 and "ElaborationLintFailure" in err


def test_corpus_table(capsys):
    code, out, _ = run(capsys, "corpus", CORPUS)
    lines = out.splitlines()
    assert code == 0
    assert lines[-1] == "12/12 verdicts matched"
    names = [line.split()[0] for line in lines[1:-1]]
    assert names == sorted(names) and len(names) == 12


def test_corpus_json(capsys):
    code, out, _ = run(capsys, "corpus", CORPUS, "--json")
    rows = [json.loads(line) for line in out.splitlines()]
    assert rows[-1] == {"matched": 12, "total": 12}
    assert all(r["pass"] for r in rows[:-1])


def test_corpus_reports_mismatch(capsys, tmp_path):
    (tmp_path / "a.sth").write_text("-- EXPECT: runs-to 4\nmain = add 1 2")
    (tmp_path / "b.sth").write_text("-- EXPECT: reject NoEvidence\nmain = 1")
    code, out, _ = run(capsys, "corpus", tmp_path)
    assert code == 1
    assert "0/2 verdicts matched" in out and "runs-to 3" in out


@pytest.mark.parametrize("header,verdict", [
    ("-- EXPECT: accept", Verdict("accept")),
    ("-- EXPECT: reject NoEvidence", Verdict("reject", "NoEvidence")),
    ('-- EXPECT: runs-to "42"', Verdict("runs-to", '"42"')),
])
def test_verdict_headers(header, verdict):
    assert parse_verdict(header + "\nmain = 1") == verdict


def test_verdict_header_must_be_first_line():
    with pytest.raises(ParseError):
        parse_verdict("main = 1\n-- EXPECT: accept")

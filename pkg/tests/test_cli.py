import json
import os

import pytest
from typer.testing import CliRunner

from partita import app


DATA_DIR = os.path.join(os.path.dirname(os.path.dirname(os.path.abspath(__file__))), "data")
LEDGER = os.path.join(DATA_DIR, "pacioli.ledger")
JOURNAL = os.path.join(DATA_DIR, "pacioli.journal")
UNBALANCED = os.path.join(DATA_DIR, "unbalanced.journal")
SYSTEM = os.path.join(DATA_DIR, "shop.system.yaml")
EXPRESSIONS = os.path.join(DATA_DIR, "shop.expr")

runner = CliRunner()


def test_check_axioms_passes():
    result = runner.invoke(app, ["check-axioms", "--bound", "100", "--max-factors", "3"])
    assert result.exit_code == 0
    lines = [line for line in result.stdout.splitlines() if line.startswith("axiom_")]
    assert len(lines) == 5
    assert all(": PASS (checked" in line for line in lines)


def test_check_axioms_json():
    result = runner.invoke(app, ["check-axioms", "--bound", "5", "--max-factors", "1", "--format", "json"])
    assert result.exit_code == 0
    report = json.loads(result.stdout)
    assert report["bound"] == 5
    assert [entry["status"] for entry in report["results"]] == ["PASS"] * 5


@pytest.mark.parametrize(
    "args",
    [
        ["check-axioms", "--bound", "0"],
        ["check-axioms", "--max-factors", "-1"],
        ["check-axioms", "--format", "yaml"],
        ["check-laws", "--max-len", "-2"],
        ["replay", "missing.ledger", JOURNAL],
    ],
)
def test_bad_flags_exit_with_input_error(args):
    assert runner.invoke(app, args).exit_code == 2


def test_check_laws_small():
    result = runner.invoke(app, ["check-laws", "--seed", "0", "--bound", "2", "--max-len", "1"])
    assert result.exit_code == 0, result.output
    assert "pullback_oracle: PASS" in result.stdout
    assert "total_value_invariance: PASS" in result.stdout


def test_replay_worked_example():
    result = runner.invoke(app, ["replay", LEDGER, JOURNAL])
    assert result.exit_code == 0
    assert result.stdout.splitlines() == [
        "(cash, creditors, consumables, sales, capital)",
        "(1000,0,0,0,-1000)",
        "(1000,-2000,2000,0,-1000)",
        "(2500,-2000,2000,-1500,-1000)",
        "(1500,-1000,2000,-1500,-1000)",
        "(1500,-1000,0,-1500,1000)",
        "(1500,-1000,0,0,-500)",
        "Assets 1500 = Liabilities 1000 + Owner's Equity 500: holds",
    ]


def test_replay_output_is_stable():
    first = runner.invoke(app, ["replay", LEDGER, JOURNAL, "--format", "json"])
    second = runner.invoke(app, ["replay", LEDGER, JOURNAL, "--format", "json"])
    assert first.stdout == second.stdout
    assert json.loads(first.stdout)["states"][-1] == [1500, -1000, 0, 0, -500]


def test_unbalanced_journal_fails_the_check():
    result = runner.invoke(app, ["replay", LEDGER, UNBALANCED])
    assert result.exit_code == 1
    assert "UnbalancedTransaction at step 1" in result.output


def test_malformed_ledger_is_an_input_error(tmp_path):
    ledger = tmp_path / "broken.ledger"
    ledger.write_text("account cash kind Asset initial 1000\naccount bank kind Vault initial 0\n")
    result = runner.invoke(app, ["replay", str(ledger), JOURNAL])
    assert result.exit_code == 2
    assert "broken.ledger:2:19: unknown account kind 'Vault'" in result.output


def test_journal_naming_unknown_accounts_is_an_input_error(tmp_path):
    journal = tmp_path / "stray.journal"
    journal.write_text("1; debit bank:5; credit cash:5\n")
    assert runner.invoke(app, ["replay", LEDGER, str(journal)]).exit_code == 2


def test_report():
    result = runner.invoke(app, ["report", LEDGER, JOURNAL])
    assert result.exit_code == 0, result.output
    assert "Assets 1500 = Liabilities 1000 + Owner's Equity 500: holds" in result.stdout
    assert "Trial balance: debits 1500, credits 1500: balanced" in result.stdout
    assert "Closed system: total value 0 along the replay path (5 steps)" in result.stdout


def test_json_field_names():
    report = json.loads(runner.invoke(app, ["report", LEDGER, JOURNAL, "--format", "json"]).stdout)
    assert set(report) == {"balance_sheet", "trial_balance", "closed_system"}
    assert set(report["balance_sheet"]) == {"lines", "subtotals", "equation"}
    assert set(report["balance_sheet"]["equation"]) == {"assets", "liabilities", "owners_equity", "grand_total", "holds"}
    assert set(report["trial_balance"]) == {"debit_total", "credit_total"}
    assert report["closed_system"] == {"steps": 5, "total_value": 0, "holds": True, "witness": None}

    replayed = json.loads(runner.invoke(app, ["replay", LEDGER, JOURNAL, "--format", "json"]).stdout)
    assert set(replayed) == {"accounts", "states", "equation"}

    simulated = json.loads(runner.invoke(app, ["simulate", SYSTEM, "--max-len", "1", "--format", "json"]).stdout)
    (summary, _) = simulated["expressions"]
    assert set(summary) == {"name", "dom", "cod", "vertices", "edges", "closed", "total_value", "traces"}
    assert set(summary["total_value"]) == {"passed", "paths_checked", "max_len", "totals", "witness"}


def test_simulate():
    result = runner.invoke(app, ["simulate", SYSTEM, "--max-len", "2"])
    assert result.exit_code == 0, result.output
    assert "expression main: 0 -> 0, head 9 vertices" in result.stdout
    assert "behaviour from (w10,s0):" in result.stdout
    assert "step 1: (b1,c1) | 0 | 0" in result.stdout
    assert "expression idle_loop: 0 -> 0" in result.stdout


def test_simulate_reports_type_errors(tmp_path):
    with open(SYSTEM) as source:
        text = source.read()
    broken = tmp_path / "broken.yaml"
    broken.write_text(text.replace("expr main = wallet ; shop", "expr main = wallet ; wallet"))
    result = runner.invoke(app, ["simulate", str(broken)])
    assert result.exit_code == 2
    assert "main: cannot compose" in result.output


def test_simulate_an_expression_file():
    result = runner.invoke(app, ["simulate", SYSTEM, EXPRESSIONS, "--max-len", "1"])
    assert result.exit_code == 0, result.output
    assert "expression sale: 0 -> 0, head 9 vertices" in result.stdout
    assert "expression sale_with_loop: 0 -> 0" in result.stdout
    assert "expression main" not in result.stdout


def test_simulate_rejects_a_malformed_expression_file(tmp_path):
    bad = tmp_path / "bad.expr"
    bad.write_text("expr sale wallet ; shop\n")
    result = runner.invoke(app, ["simulate", SYSTEM, str(bad)])
    assert result.exit_code == 2
    assert "bad.expr:1:11: expected '='" in result.output

"""Command-line entry point: axiom and law checks, journal replay, system simulation and ledger reports."""

from collections.abc import Callable

import typer
from logging_utils import get_logger

import core.constants as cst
from core.accounts import check_total_value
from core.accounts import eval_expression
from core.accounts import is_closed
from core.accounts import total_value
from core.behaviour import format_trace
from core.behaviour import maximal_runs
from core.exceptions import BoundaryMismatch
from core.exceptions import ExpressionTypeError
from core.exceptions import FlowError
from core.exceptions import GraphError
from core.exceptions import InvariantBroken
from core.exceptions import JournalError
from core.exceptions import MeasurementViolation
from core.exceptions import MorphismError
from core.exceptions import NotClosed
from core.exceptions import ParseError
from core.exceptions import SignConstraintViolation
from core.exceptions import TwoCellError
from core.exceptions import UnbalancedTransaction
from core.exceptions import UnknownAccount
from core.laws import run_laws
from core.ledger import as_closed_system
from core.ledger import balance_sheet
from core.ledger import closed_system_replay_path
from core.ledger import replay
from core.ledger import replay_report
from core.ledger import trial_balance
from core.loaders import load_expressions
from core.loaders import load_journal
from core.loaders import load_ledger
from core.loaders import load_system
from core.models.config_models import LawCheckConfig
from core.models.report_models import ClosedSystemCheck
from core.models.report_models import ExpressionSummary
from core.models.report_models import LedgerReport
from core.models.report_models import SimulationReport
from core.rgraph import format_id
from core.stdaccount import verify_axioms
from core.validators import validate_bound
from core.validators import validate_count
from core.validators import validate_file
from core.validators import validate_format


logger = get_logger(__name__)

app = typer.Typer(add_completion=False, help=__doc__)

INPUT_ERRORS = (
    ParseError,
    JournalError,
    UnknownAccount,
    ExpressionTypeError,
    GraphError,
    MorphismError,
    TwoCellError,
    BoundaryMismatch,
    FlowError,
    NotClosed,
    OSError,
)
CHECK_FAILURES = (UnbalancedTransaction, SignConstraintViolation, MeasurementViolation, InvariantBroken)

FORMAT_OPTION = typer.Option("text", "--format", callback=validate_format, help="text or json")
SEED_OPTION = typer.Option(cst.DEFAULT_SEED, "--seed", help="Seed for every randomized check")
MAX_LEN_OPTION = typer.Option(cst.DEFAULT_MAX_LEN, "--max-len", callback=validate_count, help="Longest path explored")


def _run(action: Callable):
    """Run a command body and map failures to exit codes: 1 for broken checks, 2 for bad input."""
    try:
        report = action()
    except CHECK_FAILURES as error:
        logger.error(str(error))
        typer.echo(str(error), err=True)
        raise typer.Exit(cst.EXIT_CHECK_FAILED)
    except INPUT_ERRORS as error:
        logger.error(str(error))
        typer.echo(f"error: {error}", err=True)
        raise typer.Exit(cst.EXIT_INPUT_ERROR)
    return report


def _emit(report, output_format: str):
    if output_format == "json":
        typer.echo(report.model_dump_json(indent=2))
    else:
        typer.echo(report.to_text())
    raise typer.Exit(cst.EXIT_OK if report.passed else cst.EXIT_CHECK_FAILED)


@app.command("check-axioms")
def check_axioms(
    bound: int = typer.Option(cst.DEFAULT_AXIOM_BOUND, "--bound", callback=validate_bound, help="Vertex values range over [-bound, bound]"),
    max_factors: int = typer.Option(cst.DEFAULT_MAX_FACTORS, "--max-factors", callback=validate_count, help="Most channels per signature"),
    seed: int = SEED_OPTION,
    output_format: str = FORMAT_OPTION,
):
    """Check the five standard-account axioms on sampled vertex tuples."""
    _emit(verify_axioms(bound=bound, max_factors=max_factors, seed=seed), output_format)


@app.command("check-laws")
def check_laws(
    seed: int = SEED_OPTION,
    bound: int = typer.Option(cst.MAX_HEAD_VERTICES, "--bound", callback=validate_bound, help="Most vertices in a random graph"),
    max_len: int = MAX_LEN_OPTION,
    output_format: str = FORMAT_OPTION,
):
    """Run the span, behaviour, adjunction and total-value laws on seeded random instances."""
    config = LawCheckConfig(seed=seed, max_vertices=bound, max_len=max_len)
    _emit(run_laws(config), output_format)


@app.command("replay")
def replay_journal(
    ledger_path: str = typer.Argument(..., callback=validate_file, help="Ledger spec file"),
    journal_path: str = typer.Argument(..., callback=validate_file, help="Journal file"),
    output_format: str = FORMAT_OPTION,
):
    """Replay a journal and print the state vector after every step."""
    report = _run(lambda: replay_report(load_ledger(ledger_path), load_journal(journal_path)))
    _emit(report, output_format)


def _closed_system_check(ledger, journal) -> ClosedSystemCheck:
    system = eval_expression(as_closed_system(ledger, journal))
    path = closed_system_replay_path(system)
    try:
        value = total_value(system, path)
    except InvariantBroken as error:
        return ClosedSystemCheck(steps=len(path), total_value=None, holds=False, witness=str(error))
    return ClosedSystemCheck(steps=len(path), total_value=value, holds=True)


@app.command("report")
def ledger_report(
    ledger_path: str = typer.Argument(..., callback=validate_file, help="Ledger spec file"),
    journal_path: str = typer.Argument(..., callback=validate_file, help="Journal file"),
    output_format: str = FORMAT_OPTION,
):
    """Balance sheet and trial balance after the journal, plus the closed-system invariant."""

    def build() -> LedgerReport:
        ledger, journal = load_ledger(ledger_path), load_journal(journal_path)
        final = replay(ledger, journal)[-1]
        return LedgerReport(
            balance_sheet=balance_sheet(final),
            trial_balance=trial_balance(final),
            closed_system=_closed_system_check(ledger, journal),
        )

    _emit(_run(build), output_format)


@app.command("simulate")
def simulate(
    system_path: str = typer.Argument(..., callback=validate_file, help="YAML system file"),
    expressions_path: str | None = typer.Argument(
        None, callback=validate_file, help="Expression file of expr NAME = ... declarations; replaces the system's own"
    ),
    max_len: int = MAX_LEN_OPTION,
    output_format: str = FORMAT_OPTION,
):
    """Evaluate every expression of a system file, or of a separate expression file, and print its behaviours."""

    def build() -> SimulationReport:
        system = load_system(system_path)
        if expressions_path is not None:
            system.expressions = load_expressions(expressions_path, system)
        report = SimulationReport()
        for name, expression in system.expressions.items():
            account = eval_expression(expression)
            runs = maximal_runs(account.head, max_len)
            traces = []
            for run in runs:
                traces.append(f"behaviour from {format_id(run.start)}:")
                traces.append(format_trace(account.span, run))
            report.expressions.append(
                ExpressionSummary(
                    name=name,
                    dom=str(account.dom.boundary),
                    cod=str(account.cod.boundary),
                    vertices=len(account.head.vertices),
                    edges=len(account.head.edges),
                    closed=is_closed(account),
                    total_value=check_total_value(account, max_len) if is_closed(account) else None,
                    traces=traces,
                )
            )
        return report

    _emit(_run(build), output_format)


if __name__ == "__main__":
    app()

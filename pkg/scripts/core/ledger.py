"""Double-entry bookkeeping on top of general accounts.

Debiting an account adds to its value and crediting subtracts, whatever the kind;
kinds only restrict which values an account may hold. Zeroizing is an ordinary
balanced transaction into the first Equity account.
"""

from collections.abc import Sequence

from logging_utils import get_logger

from core.accounts import AccountObject
from core.accounts import Atom
from core.accounts import Compose
from core.accounts import Expression
from core.accounts import GeneralAccount
from core.accounts import make_general_account
from core.accounts import make_object
from core.accounts import trace_expression
from core.behaviour import Path
from core.exceptions import JournalError
from core.exceptions import SignConstraintViolation
from core.exceptions import UnbalancedTransaction
from core.exceptions import UnknownAccount
from core.models.ledger_models import AccountKind
from core.models.ledger_models import Journal
from core.models.ledger_models import Ledger
from core.models.ledger_models import LedgerAccount
from core.models.ledger_models import Posting
from core.models.ledger_models import Transaction
from core.models.ledger_models import ZeroizeDirective
from core.models.ledger_models import ZeroizeTarget
from core.models.report_models import BalanceSheet
from core.models.report_models import BalanceSheetLine
from core.models.report_models import EquationReport
from core.models.report_models import ReplayReport
from core.models.report_models import TrialBalance
from core.rgraph import RGraph
from core.rgraph import make_graph
from core.rgraph import make_morphism
from core.span import Span
from core.stdaccount import Signature


logger = get_logger(__name__)

DEBIT_KINDS = {AccountKind.ASSET, AccountKind.EXPENSE}
CREDIT_KINDS = {AccountKind.LIABILITY, AccountKind.INCOME}


def sign_allowed(kind: AccountKind, value: int) -> bool:
    if kind in DEBIT_KINDS:
        return value >= 0
    if kind in CREDIT_KINDS:
        return value <= 0
    # Equity holds either sign between zeroizing steps
    return True


def make_ledger(accounts: Sequence[LedgerAccount]) -> Ledger:
    names = [account.name for account in accounts]
    duplicates = sorted({name for name in names if names.count(name) > 1})
    if duplicates:
        raise JournalError(f"Accounts declared twice: {', '.join(duplicates)}")
    for account in accounts:
        if not sign_allowed(account.kind, account.value):
            raise SignConstraintViolation(account.name, account.kind.value, account.value)
    return Ledger(accounts=tuple(accounts))


def _require_known(ledger: Ledger, postings: Sequence[Posting]):
    for posting in postings:
        if ledger.account(posting.account) is None:
            raise UnknownAccount(f"Unknown account '{posting.account}'")


def post(ledger: Ledger, t: Transaction) -> Ledger:
    """Apply one balanced transaction and return the new snapshot."""
    _require_known(ledger, t.debits)
    _require_known(ledger, t.credits)
    if t.debit_total != t.credit_total:
        raise UnbalancedTransaction(t.step, t.debit_total, t.credit_total)

    changes: dict[str, int] = {}
    for posting in t.debits:
        changes[posting.account] = changes.get(posting.account, 0) + posting.amount
    for posting in t.credits:
        changes[posting.account] = changes.get(posting.account, 0) - posting.amount

    updated = []
    for account in ledger.accounts:
        value = account.value + changes.get(account.name, 0)
        if not sign_allowed(account.kind, value):
            raise SignConstraintViolation(account.name, account.kind.value, value, t.step)
        updated.append(account.model_copy(update={"value": value}))

    result = Ledger(accounts=updated)
    logger.info(f"Posted step {t.step}: debits {t.debit_total}, grand total {result.grand_total}")
    return result


def _equity_account(ledger: Ledger, step: int) -> LedgerAccount:
    equity = ledger.of_kind(AccountKind.EQUITY)
    if not equity:
        raise JournalError(f"Step {step}: zeroizing needs an Equity account")
    return equity[0]


def zeroize_transaction(ledger: Ledger, target: ZeroizeTarget, step: int = 0) -> Transaction:
    """The transfer that empties expense (or income) accounts into the first Equity account."""
    if target == ZeroizeTarget.EXPENSES:
        sources = [a for a in ledger.of_kind(AccountKind.EXPENSE) if a.value]
    else:
        sources = [a for a in ledger.of_kind(AccountKind.INCOME) if a.value]
    if not sources:
        return Transaction(step=step)

    equity = _equity_account(ledger, step).name
    debits, credits = [], []
    for account in sources:
        amount = abs(account.value)
        # a positive balance is emptied by a credit, a negative one by a debit
        if account.value > 0:
            debits.append(Posting(account=equity, amount=amount))
            credits.append(Posting(account=account.name, amount=amount))
        else:
            debits.append(Posting(account=account.name, amount=amount))
            credits.append(Posting(account=equity, amount=amount))
    return Transaction(step=step, debits=debits, credits=credits)


def zeroize_expenses(ledger: Ledger, step: int = 0) -> Ledger:
    return post(ledger, zeroize_transaction(ledger, ZeroizeTarget.EXPENSES, step))


def zeroize_income(ledger: Ledger, step: int = 0) -> Ledger:
    return post(ledger, zeroize_transaction(ledger, ZeroizeTarget.INCOME, step))


def apply_entry(ledger: Ledger, entry: Transaction | ZeroizeDirective) -> Ledger:
    if isinstance(entry, ZeroizeDirective):
        return post(ledger, zeroize_transaction(ledger, entry.target, entry.step))
    return post(ledger, entry)


def validate_journal(journal: Journal):
    previous = None
    for entry in journal.entries:
        if previous is not None and entry.step <= previous:
            raise JournalError(f"Step ids must increase: {entry.step} follows {previous}")
        previous = entry.step


def replay(ledger: Ledger, journal: Journal) -> list[Ledger]:
    """Every snapshot from the initial ledger to the one after the last entry."""
    validate_journal(journal)
    states = [ledger]
    for entry in journal.entries:
        states.append(apply_entry(states[-1], entry))
    return states


def accounting_equation(ledger: Ledger) -> EquationReport:
    """Assets = Liabilities + Owner's Equity, where the right-hand side is negated credit totals."""

    def total(*kinds: AccountKind) -> int:
        return sum(a.value for a in ledger.accounts if a.kind in kinds)

    assets = total(AccountKind.ASSET)
    liabilities = -total(AccountKind.LIABILITY)
    owners_equity = -total(AccountKind.EQUITY, AccountKind.INCOME, AccountKind.EXPENSE)
    return EquationReport(
        assets=assets,
        liabilities=liabilities,
        owners_equity=owners_equity,
        grand_total=ledger.grand_total,
        holds=assets == liabilities + owners_equity,
    )


def trial_balance(ledger: Ledger) -> TrialBalance:
    return TrialBalance(
        debit_total=sum(a.value for a in ledger.accounts if a.value > 0),
        credit_total=-sum(a.value for a in ledger.accounts if a.value < 0),
    )


def balance_sheet(ledger: Ledger) -> BalanceSheet:
    lines = [BalanceSheetLine(name=a.name, kind=a.kind.value, value=a.value) for a in ledger.accounts]
    subtotals = {
        kind.value: sum(a.value for a in ledger.of_kind(kind)) for kind in AccountKind if ledger.of_kind(kind)
    }
    return BalanceSheet(lines=lines, subtotals=subtotals, equation=accounting_equation(ledger))


def replay_report(ledger: Ledger, journal: Journal) -> ReplayReport:
    states = replay(ledger, journal)
    return ReplayReport(
        accounts=ledger.names,
        states=[state.values for state in states],
        equation=accounting_equation(states[-1]),
    )


def _clock(name: str, steps: int) -> RGraph:
    """Vertices 0..steps, one edge ``s_t: t-1 -> t`` per journal step."""
    return make_graph(range(steps + 1), [(f"s{t}", t - 1, t) for t in range(1, steps + 1)], name=name)


def _wire(k: int, flows: Sequence[int]) -> AccountObject:
    """A clock carrying net flow f at each step, split over a +1 and a -1 channel."""
    carrier = _clock(f"W{k}", len(flows))
    labels = {f"s{t}": (max(f, 0), max(-f, 0)) for t, f in enumerate(flows, start=1)}
    return make_object(carrier, Signature(((f"cw{k}", 1), (f"ccw{k}", -1))), labels, name=f"W{k}")


def as_closed_system(ledger: Ledger, journal: Journal) -> Expression:
    """Wire the accounts into a ring, one wire between neighbours, and feed the last wire back.

    Account k sees net inflow f_{k-1} on its left wire and outflow f_k on its right
    one, so f_k = f_{k-1} - change_k. Balanced steps make the feedback wire idle.
    Heads and wires share one clock, so the closed head is exactly the replayed states.
    """
    states = replay(ledger, journal)
    count, steps = len(ledger.accounts), len(states) - 1
    changes = [
        [after.values[k] - before.values[k] for k in range(count)] for before, after in zip(states, states[1:])
    ]

    net_flows = [[0] * steps]
    for k in range(count):
        net_flows.append([net_flows[-1][t] - changes[t][k] for t in range(steps)])
    if any(net_flows[-1]):
        raise JournalError("Journal steps do not net to zero, the ring cannot be closed")

    wires = [_wire(k, net_flows[k]) for k in range(count)]
    wires.append(wires[0])

    atoms: list[Expression] = []
    for k, account in enumerate(ledger.accounts):
        head = _clock(account.name, steps)
        step_edges = {f"s{t}": f"s{t}" for t in range(1, steps + 1)}
        at_wire = {t: t for t in range(steps + 1)}
        span = Span(
            head=head,
            left=make_morphism(head, wires[k].carrier, at_wire, step_edges),
            right=make_morphism(head, wires[k + 1].carrier, at_wire, step_edges),
            name=account.name,
        )
        valuation = {t: states[t].accounts[k].value for t in range(steps + 1)}
        atoms.append(Atom(make_general_account(wires[k], wires[k + 1], span, valuation, account.name), account.name))

    ring = atoms[0]
    for atom in atoms[1:]:
        ring = Compose(ring, atom)
    logger.info(f"Closed system of {count} accounts over {steps} steps")
    return trace_expression(ring)


def closed_system_replay_path(system: GeneralAccount) -> Path:
    """The chain of non-null head edges, which is the journal replay inside the closed system."""
    head = system.head
    moving = head.non_null_edges
    if not moving:
        return Path(head, head.vertices[0])
    targets = {edge.target for edge in moving}
    starts = [edge for edge in moving if edge.source not in targets]
    if len(starts) != 1:
        raise JournalError("Closed system does not contain a single replay chain")
    by_source = {edge.source: edge for edge in moving}
    steps, current = [], starts[0]
    while current is not None:
        steps.append(current.id)
        current = by_source.get(current.target)
    return Path(head, starts[0].source, tuple(steps))

from enum import Enum

from pydantic import BaseModel
from pydantic import ConfigDict
from pydantic import Field


class AccountKind(str, Enum):
    ASSET = "Asset"
    LIABILITY = "Liability"
    EQUITY = "Equity"
    INCOME = "Income"
    EXPENSE = "Expense"


class ZeroizeTarget(str, Enum):
    EXPENSES = "expenses"
    INCOME = "income"


class LedgerAccount(BaseModel):
    model_config = ConfigDict(frozen=True)

    name: str
    kind: AccountKind
    value: int = 0


class Posting(BaseModel):
    account: str
    amount: int = Field(..., ge=0)


class Transaction(BaseModel):
    step: int
    debits: list[Posting] = []
    credits: list[Posting] = []
    line: int | None = None

    @property
    def debit_total(self) -> int:
        return sum(posting.amount for posting in self.debits)

    @property
    def credit_total(self) -> int:
        return sum(posting.amount for posting in self.credits)


class ZeroizeDirective(BaseModel):
    step: int
    target: ZeroizeTarget
    line: int | None = None


class Journal(BaseModel):
    entries: list[Transaction | ZeroizeDirective] = []


class Ledger(BaseModel):
    """A snapshot of account values, in declaration order."""

    model_config = ConfigDict(frozen=True)

    accounts: tuple[LedgerAccount, ...]

    @property
    def names(self) -> list[str]:
        return [account.name for account in self.accounts]

    @property
    def values(self) -> list[int]:
        return [account.value for account in self.accounts]

    @property
    def grand_total(self) -> int:
        return sum(self.values)

    def account(self, name: str) -> LedgerAccount | None:
        return next((account for account in self.accounts if account.name == name), None)

    def of_kind(self, kind: AccountKind) -> list[LedgerAccount]:
        return [account for account in self.accounts if account.kind == kind]

from enum import Enum

from pydantic import BaseModel
from pydantic import Field


class CheckStatus(str, Enum):
    PASS = "PASS"
    FAIL = "FAIL"


class CheckResult(BaseModel):
    """Outcome of one executable law: how many instances were checked and the first counterexample."""

    name: str
    status: CheckStatus
    checked: int = Field(..., ge=0)
    unit: str = "instances"
    counterexample: str | None = None

    @property
    def passed(self) -> bool:
        return self.status == CheckStatus.PASS

    def to_line(self) -> str:
        if self.passed:
            return f"{self.name}: PASS (checked {self.checked} {self.unit})"
        return f"{self.name}: FAIL at {self.counterexample}"


class CheckReport(BaseModel):
    results: list[CheckResult] = []

    @property
    def passed(self) -> bool:
        return all(result.passed for result in self.results)

    def to_text(self) -> str:
        return "\n".join(result.to_line() for result in self.results)


class AxiomReport(CheckReport):
    bound: int
    max_factors: int
    seed: int


class LawReport(CheckReport):
    seed: int


class BehaviourReport(BaseModel):
    proposition: str
    passed: bool
    max_len: int
    span_paths: int
    matched_pairs: int
    witness: str | None = None


class TotalValueReport(BaseModel):
    passed: bool
    paths_checked: int
    max_len: int
    totals: list[int] = []
    witness: str | None = None


class EquationReport(BaseModel):
    """Assets = Liabilities + Owner's Equity, with the right-hand totals negated as in the books."""

    assets: int
    liabilities: int
    owners_equity: int
    grand_total: int
    holds: bool

    def to_line(self) -> str:
        verdict = "holds" if self.holds else "FAILS"
        return f"Assets {self.assets} = Liabilities {self.liabilities} + Owner's Equity {self.owners_equity}: {verdict}"


class TrialBalance(BaseModel):
    debit_total: int
    credit_total: int

    @property
    def balanced(self) -> bool:
        return self.debit_total == self.credit_total


class BalanceSheetLine(BaseModel):
    name: str
    kind: str
    value: int


class BalanceSheet(BaseModel):
    lines: list[BalanceSheetLine]
    subtotals: dict[str, int]
    equation: EquationReport

    def to_text(self) -> str:
        width = max([len(line.name) for line in self.lines] + [len(kind) for kind in self.subtotals] + [8])
        rows = [f"{line.kind:<9} {line.name:<{width}} {line.value:>12}" for line in self.lines]
        rows.append("-" * (width + 23))
        rows.extend(f"{'total':<9} {kind:<{width}} {value:>12}" for kind, value in self.subtotals.items())
        rows.append(self.equation.to_line())
        return "\n".join(rows)


class ReplayReport(BaseModel):
    accounts: list[str]
    states: list[list[int]]
    equation: EquationReport

    @property
    def passed(self) -> bool:
        return self.equation.holds and len({sum(state) for state in self.states}) <= 1

    def to_text(self) -> str:
        lines = ["(" + ", ".join(self.accounts) + ")"]
        lines.extend("(" + ",".join(str(value) for value in state) + ")" for state in self.states)
        lines.append(self.equation.to_line())
        return "\n".join(lines)


class ClosedSystemCheck(BaseModel):
    steps: int
    total_value: int | None
    holds: bool
    witness: str | None = None

    def to_line(self) -> str:
        if self.holds:
            return f"Closed system: total value {self.total_value} along the replay path ({self.steps} steps)"
        return f"Closed system: invariant FAILS: {self.witness}"


class LedgerReport(BaseModel):
    balance_sheet: BalanceSheet
    trial_balance: TrialBalance
    closed_system: ClosedSystemCheck

    @property
    def passed(self) -> bool:
        return self.balance_sheet.equation.holds and self.trial_balance.balanced and self.closed_system.holds

    def to_text(self) -> str:
        verdict = "balanced" if self.trial_balance.balanced else "NOT balanced"
        return "\n".join(
            [
                self.balance_sheet.to_text(),
                f"Trial balance: debits {self.trial_balance.debit_total}, "
                f"credits {self.trial_balance.credit_total}: {verdict}",
                self.closed_system.to_line(),
            ]
        )


class ExpressionSummary(BaseModel):
    name: str
    dom: str
    cod: str
    vertices: int
    edges: int
    closed: bool
    total_value: TotalValueReport | None = None
    traces: list[str] = []

    def to_text(self) -> str:
        lines = [f"expression {self.name}: {self.dom} -> {self.cod}, head {self.vertices} vertices, {self.edges} edges"]
        if self.total_value is not None:
            if self.total_value.passed:
                totals = ", ".join(str(total) for total in self.total_value.totals)
                lines.append(
                    f"total value constant on {self.total_value.paths_checked} paths of length <= "
                    f"{self.total_value.max_len} (totals: {totals})"
                )
            else:
                lines.append(f"total value NOT invariant: {self.total_value.witness}")
        lines.extend(self.traces)
        return "\n".join(lines)


class SimulationReport(BaseModel):
    expressions: list[ExpressionSummary] = []

    @property
    def passed(self) -> bool:
        return all(e.total_value is None or e.total_value.passed for e in self.expressions)

    def to_text(self) -> str:
        return "\n\n".join(summary.to_text() for summary in self.expressions)

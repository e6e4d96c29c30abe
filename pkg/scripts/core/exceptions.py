"""Errors raised by the graph, account and ledger layers.

All of them derive from ValueError so callers that only care about bad input
can catch that.
"""

from typing import Any


class PartitaError(ValueError):
    pass


class GraphError(PartitaError):
    pass


class MorphismError(PartitaError):
    pass


class BoundaryMismatch(PartitaError):
    def __init__(self, message: str, left: Any = None, right: Any = None):
        super().__init__(message)
        self.left = left
        self.right = right


class TwoCellError(PartitaError):
    pass


class TransposeShapeError(PartitaError):
    pass


class IsoSearchLimitExceeded(PartitaError):
    def __init__(self, size: int, bound: int):
        super().__init__(f"Head with {size} vertices exceeds the isomorphism search bound {bound}")
        self.size = size
        self.bound = bound


class FlowError(PartitaError):
    pass


class MeasurementViolation(PartitaError):
    def __init__(self, edge: Any, lhs: int, rhs: int):
        super().__init__(
            f"Measurement condition fails on edge {edge!r}: value change {lhs} != boundary flow {rhs}"
        )
        self.edge = edge
        self.lhs = lhs
        self.rhs = rhs


class ExpressionTypeError(PartitaError):
    def __init__(self, path: str, message: str):
        super().__init__(f"{path}: {message}")
        self.path = path


class NotClosed(PartitaError):
    pass


class InvariantBroken(PartitaError):
    def __init__(self, path_start: Any, step: int, before: int, after: int):
        super().__init__(
            f"Total value changed from {before} to {after} at step {step} of the path starting at {path_start!r}"
        )
        self.step = step
        self.before = before
        self.after = after


class UnbalancedTransaction(PartitaError):
    def __init__(self, step: int, debit_total: int, credit_total: int):
        super().__init__(
            f"UnbalancedTransaction at step {step}: debits {debit_total} != credits {credit_total}"
        )
        self.step = step
        self.debit_total = debit_total
        self.credit_total = credit_total


class SignConstraintViolation(PartitaError):
    def __init__(self, account: str, kind: str, value: int, step: int | None = None):
        where = f" at step {step}" if step is not None else ""
        super().__init__(f"SignConstraintViolation{where}: {kind} account '{account}' cannot hold {value}")
        self.account = account
        self.kind = kind
        self.value = value
        self.step = step


class UnknownAccount(PartitaError):
    pass


class JournalError(PartitaError):
    pass


class ParseError(PartitaError):
    def __init__(self, message: str, line: int | None, column: int | None, source: str = "<input>"):
        where = f"{source}:{line}:{column}" if line is not None else source
        super().__init__(f"{where}: {message}")
        self.source = source
        self.line = line
        self.column = column

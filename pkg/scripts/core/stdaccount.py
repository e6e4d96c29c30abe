"""Channels, signatures and standard accounts.

A standard account from X to Y has the integers as states and an edge for every
(from, to, left flows, right flows) satisfying the continuity equation

    to - from = sum(xi_i * x_i) - sum(zeta_j * y_j)

Standard accounts are infinite, so they only exist here as membership tests and
as targets of valuations. A valuation 2-cell into a standard account is fixed by
its values on vertices; its action on edges is rebuilt on demand.
"""

import itertools
import random
from collections.abc import Callable
from collections.abc import Sequence
from dataclasses import dataclass

from logging_utils import get_logger

import core.constants as cst
from core.exceptions import BoundaryMismatch
from core.exceptions import FlowError
from core.models.report_models import AxiomReport
from core.models.report_models import CheckResult
from core.models.report_models import CheckStatus


logger = get_logger(__name__)


@dataclass(frozen=True)
class Channel:
    name: str


@dataclass(frozen=True)
class Signature:
    """An ordered product of channels, each with polarity +1 or -1. The empty signature is I."""

    factors: tuple[tuple[Channel, int], ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "factors", tuple((Channel(c) if isinstance(c, str) else c, p) for c, p in self.factors))
        for channel, polarity in self.factors:
            if polarity not in (1, -1):
                raise FlowError(f"Channel {channel.name} has polarity {polarity}; expected +1 or -1")

    def __len__(self) -> int:
        return len(self.factors)

    @property
    def polarities(self) -> tuple[int, ...]:
        return tuple(polarity for _, polarity in self.factors)

    def tensor(self, other: "Signature") -> "Signature":
        return Signature(self.factors + other.factors)

    def reverse(self) -> "Signature":
        return Signature(tuple((channel, -polarity) for channel, polarity in reversed(self.factors)))

    def __str__(self) -> str:
        if not self.factors:
            return cst.TERMINAL_LABEL
        return " ⊗ ".join(f"{channel.name}{'+' if polarity > 0 else '-'}" for channel, polarity in self.factors)


def signature(*factors: tuple[str, int]) -> Signature:
    return Signature(tuple(factors))


@dataclass(frozen=True)
class AccountEdge:
    from_value: int
    to_value: int
    left_flows: tuple[int, ...] = ()
    right_flows: tuple[int, ...] = ()

    def __post_init__(self):
        object.__setattr__(self, "left_flows", tuple(self.left_flows))
        object.__setattr__(self, "right_flows", tuple(self.right_flows))


def flow_balance(polarities: Sequence[int], flows: Sequence[int]) -> int:
    """sum(polarity * flow), rejecting negative flows and length mismatches."""
    if len(polarities) != len(flows):
        raise FlowError(f"Expected {len(polarities)} flows, got {len(flows)}")
    for flow in flows:
        if flow < 0:
            raise FlowError(f"Flows are non-negative, got {flow}")
    return sum(polarity * flow for polarity, flow in zip(polarities, flows))


def continuity_holds(xi: Sequence[int], zeta: Sequence[int], e: AccountEdge) -> bool:
    return e.to_value - e.from_value == flow_balance(xi, e.left_flows) - flow_balance(zeta, e.right_flows)


@dataclass(frozen=True)
class StdAccount:
    dom: Signature
    cod: Signature

    def contains(self, edge: AccountEdge) -> bool:
        try:
            return continuity_holds(self.dom.polarities, self.cod.polarities, edge)
        except FlowError:
            return False

    def random_edge(
        self, rng: random.Random, bound: int, from_value: int | None = None, left_flows: Sequence[int] | None = None
    ) -> AccountEdge:
        """A random member edge; ``from_value`` and ``left_flows`` pin it to a predecessor or a shared boundary."""
        start = rng.randint(-bound, bound) if from_value is None else from_value
        left = tuple(rng.randint(0, bound) for _ in self.dom.factors) if left_flows is None else tuple(left_flows)
        right = tuple(rng.randint(0, bound) for _ in self.cod.factors)
        change = flow_balance(self.dom.polarities, left) - flow_balance(self.cod.polarities, right)
        return AccountEdge(start, start + change, left, right)


def sequence_edges(e1: AccountEdge, e2: AccountEdge) -> AccountEdge:
    """Run two transactions one after the other; flows add up factor by factor."""
    if e1.to_value != e2.from_value:
        raise FlowError(f"Transaction ending at {e1.to_value} cannot be followed by one starting at {e2.from_value}")
    if len(e1.left_flows) != len(e2.left_flows) or len(e1.right_flows) != len(e2.right_flows):
        raise FlowError("Sequenced transactions must live in the same standard account")
    return AccountEdge(
        e1.from_value,
        e2.to_value,
        tuple(a + b for a, b in zip(e1.left_flows, e2.left_flows)),
        tuple(a + b for a, b in zip(e1.right_flows, e2.right_flows)),
    )


@dataclass(frozen=True)
class Valuation2Cell:
    """A 2-cell into a standard account, given by its vertex function.

    ``edge_action`` rebuilds the image of an edge of the source span: for θ, δ and γ
    it takes the flow tuple of a channel-product edge, for α and τ a pair of account edges.
    """

    name: str
    arity: int
    vertex_action: Callable[..., int]
    edge_action: Callable[..., AccountEdge]

    def __call__(self, *values: int) -> int:
        if len(values) != self.arity:
            raise FlowError(f"{self.name} takes {self.arity} vertex values, got {len(values)}")
        return self.vertex_action(*values)

    def on_edges(self, *parts) -> AccountEdge:
        return self.edge_action(*parts)


def _reversed(flows: Sequence[int]) -> tuple[int, ...]:
    return tuple(reversed(flows))


def _checked_flows(x: Signature, flows: Sequence[int]) -> tuple[int, ...]:
    flow_balance(x.polarities, flows)
    return tuple(flows)


def theta(x: Signature) -> Valuation2Cell:
    """θ: 1_X -> A_{X,X}; the channel product has one vertex, sent to 0."""

    def on_edge(flows):
        flows = _checked_flows(x, flows)
        return AccountEdge(0, 0, flows, flows)

    return Valuation2Cell(f"θ[{x}]", 0, lambda: 0, on_edge)


def _add_composable(e1: AccountEdge, e2: AccountEdge) -> AccountEdge:
    if e1.right_flows != e2.left_flows:
        raise BoundaryMismatch("Edges do not synchronize on the shared boundary", e1.right_flows, e2.left_flows)
    return AccountEdge(e1.from_value + e2.from_value, e1.to_value + e2.to_value, e1.left_flows, e2.right_flows)


def _add_parallel(e1: AccountEdge, e2: AccountEdge) -> AccountEdge:
    return AccountEdge(
        e1.from_value + e2.from_value,
        e1.to_value + e2.to_value,
        e1.left_flows + e2.left_flows,
        e1.right_flows + e2.right_flows,
    )


def alpha() -> Valuation2Cell:
    """α: A_{X,Y} • A_{Y,Z} -> A_{X,Z}, (i, j) |-> i + j."""
    return Valuation2Cell("α", 2, lambda i, j: i + j, _add_composable)


def tau() -> Valuation2Cell:
    """τ: A_{W,X} ⊗ A_{Y,Z} -> A_{W⊗Y,X⊗Z}, (i, j) |-> i + j."""
    return Valuation2Cell("τ", 2, lambda i, j: i + j, _add_parallel)


def delta(x: Signature) -> Valuation2Cell:
    """δ: η_X -> A_{I, X^-1 ⊗ X}."""

    def on_edge(flows):
        flows = _checked_flows(x, flows)
        return AccountEdge(0, 0, (), _reversed(flows) + flows)

    return Valuation2Cell(f"δ[{x}]", 0, lambda: 0, on_edge)


def gamma(x: Signature) -> Valuation2Cell:
    """γ: ε_X -> A_{X ⊗ X^-1, I}."""

    def on_edge(flows):
        flows = _checked_flows(x, flows)
        return AccountEdge(0, 0, flows + _reversed(flows), ())

    return Valuation2Cell(f"γ[{x}]", 0, lambda: 0, on_edge)


def signature_shapes(max_factors: int) -> list[Signature]:
    """Every signature over channels c1..ck with k <= max_factors, k ascending."""
    shapes = []
    for k in range(max_factors + 1):
        for polarities in itertools.product((1, -1), repeat=k):
            shapes.append(Signature(tuple((f"c{i + 1}", p) for i, p in enumerate(polarities))))
    return shapes


class _AxiomFailure(Exception):
    def __init__(self, where: str):
        super().__init__(where)
        self.where = where


def _expect_member(account: StdAccount, edge: AccountEdge, where: str) -> AccountEdge:
    if not account.contains(edge):
        raise _AxiomFailure(f"{where}: {edge} violates continuity in A[{account.dom}, {account.cod}]")
    return edge


def _expect_equal(lhs, rhs, where: str):
    if lhs != rhs:
        raise _AxiomFailure(f"{where}: {lhs} != {rhs}")


def _vertex_tuples(rng: random.Random, arity: int, bound: int, samples: int):
    radius = min(cst.AXIOM_EXHAUSTIVE_RADIUS, bound)
    emitted = 0
    for values in itertools.product(range(-radius, radius + 1), repeat=arity):
        if emitted >= samples:
            return
        yield values
        emitted += 1
    while emitted < samples:
        yield tuple(rng.randint(-bound, bound) for _ in range(arity))
        emitted += 1


def _axiom_1(rng, shapes, values, bound):
    (i,) = values
    x, y = rng.choice(shapes), rng.choice(shapes)
    a = StdAccount(x, y)
    _expect_equal(alpha()(theta(x)(), i), i, f"left unit at {values}")
    _expect_equal(alpha()(i, theta(y)()), i, f"right unit at {values}")

    e = a.random_edge(rng, bound, from_value=i)
    _expect_equal(alpha().on_edges(theta(x).on_edges(e.left_flows), e), e, f"left unit on {e}")
    _expect_equal(alpha().on_edges(e, theta(y).on_edges(e.right_flows)), e, f"right unit on {e}")


def _axiom_2(rng, shapes, values, bound):
    i, j, k = values
    w, x, y, z = (rng.choice(shapes) for _ in range(4))
    _expect_equal(alpha()(alpha()(i, j), k), alpha()(i, alpha()(j, k)), f"associativity at {values}")

    e1 = StdAccount(w, x).random_edge(rng, bound, from_value=i)
    e2 = StdAccount(x, y).random_edge(rng, bound, from_value=j, left_flows=e1.right_flows)
    e3 = StdAccount(y, z).random_edge(rng, bound, from_value=k, left_flows=e2.right_flows)
    target = StdAccount(w, z)
    lhs = _expect_member(target, alpha().on_edges(alpha().on_edges(e1, e2), e3), "(α•A)·α")
    rhs = _expect_member(target, alpha().on_edges(e1, alpha().on_edges(e2, e3)), "(A•α)·α")
    _expect_equal(lhs, rhs, f"associativity on edges from {values}")


def _axiom_3(rng, shapes, values, bound):
    i, j, k, m = values
    x, y, z, x2, y2, z2 = (rng.choice(shapes) for _ in range(6))
    _expect_equal(
        tau()(alpha()(i, j), alpha()(k, m)), alpha()(tau()(i, k), tau()(j, m)), f"interchange at {values}"
    )

    e1 = StdAccount(x, y).random_edge(rng, bound, from_value=i)
    e2 = StdAccount(y, z).random_edge(rng, bound, from_value=j, left_flows=e1.right_flows)
    e3 = StdAccount(x2, y2).random_edge(rng, bound, from_value=k)
    e4 = StdAccount(y2, z2).random_edge(rng, bound, from_value=m, left_flows=e3.right_flows)
    target = StdAccount(x.tensor(x2), z.tensor(z2))
    lhs = _expect_member(target, tau().on_edges(alpha().on_edges(e1, e2), alpha().on_edges(e3, e4)), "(α⊗α)·τ")
    middle = StdAccount(y.tensor(y2), z.tensor(z2))
    first = _expect_member(StdAccount(x.tensor(x2), y.tensor(y2)), tau().on_edges(e1, e3), "τ left")
    second = _expect_member(middle, tau().on_edges(e2, e4), "τ right")
    rhs = _expect_member(target, alpha().on_edges(first, second), "(τ•τ)·α")
    _expect_equal(lhs, rhs, f"interchange on edges from {values}")


def _random_flows(rng: random.Random, x: Signature, bound: int) -> tuple[int, ...]:
    return tuple(rng.randint(0, bound) for _ in x.factors)


def _axiom_4(rng, shapes, values, bound):
    x = rng.choice(shapes)
    x_rev = x.reverse()
    flows = _random_flows(rng, x, bound)
    vertex = alpha()(tau()(theta(x)(), delta(x)()), tau()(gamma(x)(), theta(x)()))
    _expect_equal(vertex, theta(x)(), f"snake on {x} at the head vertex")

    left_half = _expect_member(
        StdAccount(x, x.tensor(x_rev).tensor(x)),
        tau().on_edges(theta(x).on_edges(flows), delta(x).on_edges(flows)),
        "θ⊗δ",
    )
    right_half = _expect_member(
        StdAccount(x.tensor(x_rev).tensor(x), x),
        tau().on_edges(gamma(x).on_edges(flows), theta(x).on_edges(flows)),
        "γ⊗θ",
    )
    composite = _expect_member(StdAccount(x, x), alpha().on_edges(left_half, right_half), "(τ•τ)·α")
    _expect_equal(composite, theta(x).on_edges(flows), f"snake on {x} along {flows}")


def _axiom_5(rng, shapes, values, bound):
    x = rng.choice(shapes)
    x_rev = x.reverse()
    flows = _random_flows(rng, x, bound)
    back = _reversed(flows)
    vertex = alpha()(tau()(delta(x)(), theta(x_rev)()), tau()(theta(x_rev)(), gamma(x)()))
    _expect_equal(vertex, theta(x_rev)(), f"snake on {x_rev} at the head vertex")

    left_half = _expect_member(
        StdAccount(x_rev, x_rev.tensor(x).tensor(x_rev)),
        tau().on_edges(delta(x).on_edges(flows), theta(x_rev).on_edges(back)),
        "δ⊗θ",
    )
    right_half = _expect_member(
        StdAccount(x_rev.tensor(x).tensor(x_rev), x_rev),
        tau().on_edges(theta(x_rev).on_edges(back), gamma(x).on_edges(flows)),
        "θ⊗γ",
    )
    composite = _expect_member(StdAccount(x_rev, x_rev), alpha().on_edges(left_half, right_half), "(τ•τ)·α")
    _expect_equal(composite, theta(x_rev).on_edges(back), f"snake on {x_rev} along {back}")


AXIOMS = [
    ("axiom_1", 1, _axiom_1),
    ("axiom_2", 3, _axiom_2),
    ("axiom_3", 4, _axiom_3),
    ("axiom_4", 0, _axiom_4),
    ("axiom_5", 0, _axiom_5),
]


def verify_axioms(
    bound: int = cst.DEFAULT_AXIOM_BOUND,
    max_factors: int = cst.DEFAULT_MAX_FACTORS,
    seed: int = cst.DEFAULT_SEED,
    samples: int = cst.AXIOM_SAMPLES,
) -> AxiomReport:
    """Check the five axioms on vertex formulas and rebuilt edge actions.

    Vertex values run over a small exhaustive cube first, then random values in
    [-bound, bound]; signatures are drawn from every shape with at most
    ``max_factors`` channels.
    """
    if bound < 1:
        raise ValueError("bound must be at least 1")
    if max_factors < 0:
        raise ValueError("max_factors must be non-negative")

    shapes = signature_shapes(max_factors)
    report = AxiomReport(bound=bound, max_factors=max_factors, seed=seed)
    for name, arity, check in AXIOMS:
        rng = random.Random(f"{seed}:{name}")
        checked = 0
        result = None
        for values in _vertex_tuples(rng, arity, bound, samples):
            try:
                check(rng, shapes, values, bound)
            except (_AxiomFailure, FlowError, BoundaryMismatch) as failure:
                where = failure.where if isinstance(failure, _AxiomFailure) else str(failure)
                logger.warning(f"{name} failed at {values}: {where}")
                result = CheckResult(name=name, status=CheckStatus.FAIL, checked=checked, counterexample=where)
                break
            checked += 1
        if result is None:
            result = CheckResult(name=name, status=CheckStatus.PASS, checked=checked, unit="tuples")
            logger.info(f"{name} passed on {checked} tuples")
        report.results.append(result)
    return report

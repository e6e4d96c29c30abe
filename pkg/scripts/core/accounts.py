"""General accounts: finite transition systems measured by standard accounts.

An object is a carrier graph labelled with flows on a signature of channels. A
general account is a span between carriers together with a valuation of its head
vertices; the valuation is the measurement 2-cell in transposed form and must
satisfy the continuity equation along every head edge.
"""

from collections.abc import Hashable
from collections.abc import Mapping
from dataclasses import dataclass
from dataclasses import field
from types import MappingProxyType

from logging_utils import get_logger

import core.constants as cst
from core.behaviour import Path
from core.behaviour import enumerate_paths
from core.exceptions import BoundaryMismatch
from core.exceptions import ExpressionTypeError
from core.exceptions import FlowError
from core.exceptions import InvariantBroken
from core.exceptions import MeasurementViolation
from core.exceptions import NotClosed
from core.exceptions import TwoCellError
from core.models.report_models import TotalValueReport
from core.rgraph import Edge
from core.rgraph import GraphMorphism
from core.rgraph import RGraph
from core.rgraph import format_id
from core.rgraph import product
from core.rgraph import reverse
from core.rgraph import split_id
from core.rgraph import terminal
from core.span import Span
from core.span import TwoCell
from core.span import compose_spans
from core.span import epsilon
from core.span import eta
from core.span import identity_span
from core.span import tensor_spans
from core.span import transpose
from core.span import untranspose
from core.stdaccount import AccountEdge
from core.stdaccount import Signature
from core.stdaccount import alpha
from core.stdaccount import flow_balance
from core.stdaccount import tau


logger = get_logger(__name__)


@dataclass(frozen=True)
class AccountObject:
    """A carrier graph U with its morphism into a product of channels, stored as flows per edge."""

    carrier: RGraph
    boundary: Signature
    labels: Mapping = field(hash=False)
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "labels", MappingProxyType({k: tuple(v) for k, v in self.labels.items()}))
        for edge in self.carrier.edges:
            if edge.id not in self.labels:
                raise FlowError(f"Edge {format_id(edge.id)} of {self.name or 'object'} carries no flow label")
            flows = self.labels[edge.id]
            flow_balance(self.boundary.polarities, flows)
            if edge.is_null and any(flows):
                raise FlowError(f"Null loop {format_id(edge.id)} must carry zero flows, got {flows}")

    def flows(self, edge_id: Hashable) -> tuple[int, ...]:
        return self.labels[edge_id]

    @property
    def is_unit(self) -> bool:
        return len(self.boundary) == 0


def make_object(carrier: RGraph, boundary: Signature, labels: Mapping | None = None, name: str = "") -> AccountObject:
    """Build an object; null loops and unlabelled edges default to zero flows."""
    zeros = (0,) * len(boundary)
    full = {edge.id: zeros for edge in carrier.edges}
    full.update(labels or {})
    return AccountObject(carrier=carrier, boundary=boundary, labels=full, name=name or carrier.name)


def unit_object() -> AccountObject:
    unit = terminal()
    return AccountObject(carrier=unit, boundary=Signature(), labels={unit.edges[0].id: ()}, name="I")


def tensor_objects(o: AccountObject, p: AccountObject) -> AccountObject:
    carrier = product(o.carrier, p.carrier)
    labels = {}
    for edge in carrier.edges:
        x, y = split_id(o.carrier, p.carrier, edge.id)
        labels[edge.id] = o.flows(x) + p.flows(y)
    return AccountObject(
        carrier=carrier, boundary=o.boundary.tensor(p.boundary), labels=labels, name=f"{o.name}⊗{p.name}"
    )


def reverse_object(o: AccountObject) -> AccountObject:
    name = o.name[:-3] if o.name.endswith("^-1") else f"{o.name}^-1"
    return AccountObject(
        carrier=reverse(o.carrier),
        boundary=o.boundary.reverse(),
        labels={k: tuple(reversed(v)) for k, v in o.labels.items()},
        name=name,
    )


@dataclass(frozen=True)
class GeneralAccount:
    dom: AccountObject
    cod: AccountObject
    span: Span
    valuation: Mapping = field(hash=False)
    name: str = field(default="", compare=False)

    def __post_init__(self):
        object.__setattr__(self, "valuation", MappingProxyType(dict(self.valuation)))
        if self.span.dom != self.dom.carrier:
            raise BoundaryMismatch(f"Left leg of {self.name or 'account'} does not land in the domain carrier")
        if self.span.cod != self.cod.carrier:
            raise BoundaryMismatch(f"Right leg of {self.name or 'account'} does not land in the codomain carrier")
        missing = [v for v in self.span.head.vertices if v not in self.valuation]
        if missing:
            raise TwoCellError(f"Valuation of {self.name or 'account'} misses {', '.join(map(format_id, missing))}")
        for edge in self.span.head.edges:
            self._check_edge(edge)

    def _check_edge(self, edge: Edge):
        measured = self.measured_edge(edge.id)
        lhs = measured.to_value - measured.from_value
        rhs = flow_balance(self.dom.boundary.polarities, measured.left_flows) - flow_balance(
            self.cod.boundary.polarities, measured.right_flows
        )
        if lhs != rhs:
            raise MeasurementViolation(format_id(edge.id), lhs, rhs)

    def measured_edge(self, edge_id: Hashable) -> AccountEdge:
        """The image of a head edge in the standard account A_{X,Y}."""
        edge = self.span.head.edge(edge_id)
        return AccountEdge(
            self.valuation[edge.source],
            self.valuation[edge.target],
            self.dom.flows(self.span.left.emap[edge_id]),
            self.cod.flows(self.span.right.emap[edge_id]),
        )

    @property
    def head(self) -> RGraph:
        return self.span.head


def make_general_account(
    dom: AccountObject, cod: AccountObject, span: Span, valuation: Mapping, name: str = ""
) -> GeneralAccount:
    account = GeneralAccount(dom=dom, cod=cod, span=span, valuation=valuation, name=name or span.name)
    logger.debug(f"Account {account.name!r} validated on {len(span.head.edges)} head edges")
    return account


def compose_accounts(a: GeneralAccount, b: GeneralAccount) -> GeneralAccount:
    if a.cod != b.dom:
        raise BoundaryMismatch(
            f"Cannot compose {a.name or 'account'} with {b.name or 'account'}: boundary objects differ", a.cod, b.dom
        )
    span = compose_spans(a.span, b.span)
    add = alpha()
    valuation = {v: add(a.valuation[v[0]], b.valuation[v[1]]) for v in span.head.vertices}
    return GeneralAccount(dom=a.dom, cod=b.cod, span=span, valuation=valuation, name=f"({a.name} ; {b.name})")


def tensor_accounts(a: GeneralAccount, b: GeneralAccount) -> GeneralAccount:
    span = tensor_spans(a.span, b.span)
    add = tau()
    valuation = {}
    for v in span.head.vertices:
        x, y = split_id(a.span.head, b.span.head, v)
        valuation[v] = add(a.valuation[x], b.valuation[y])
    return GeneralAccount(
        dom=tensor_objects(a.dom, b.dom),
        cod=tensor_objects(a.cod, b.cod),
        span=span,
        valuation=valuation,
        name=f"({a.name} (x) {b.name})",
    )


def _zero_valued(span: Span) -> dict:
    return {v: 0 for v in span.head.vertices}


def identity_account(o: AccountObject) -> GeneralAccount:
    span = identity_span(o.carrier)
    return GeneralAccount(dom=o, cod=o, span=span, valuation=_zero_valued(span), name=f"id[{o.name}]")


def unit_account(o: AccountObject) -> GeneralAccount:
    """η on an object: I -> O^-1 ⊗ O, valued 0."""
    span = eta(o.carrier)
    return GeneralAccount(
        dom=unit_object(),
        cod=tensor_objects(reverse_object(o), o),
        span=span,
        valuation=_zero_valued(span),
        name=f"eta[{o.name}]",
    )


def counit_account(o: AccountObject) -> GeneralAccount:
    """ε on an object: O ⊗ O^-1 -> I, valued 0."""
    span = epsilon(o.carrier)
    return GeneralAccount(
        dom=tensor_objects(o, reverse_object(o)),
        cod=unit_object(),
        span=span,
        valuation=_zero_valued(span),
        name=f"eps[{o.name}]",
    )


def standard_fragment(a: GeneralAccount) -> Span:
    """The finite part of A_{X,Y} that the head of ``a`` reaches, as a span of graphs.

    Channel products are cut down to one vertex carrying the flow tuples the boundary
    objects use; the standard account to the states and transactions the head reaches.
    """
    measured = [a.measured_edge(e.id) for e in a.head.edges]

    def channel_fragment(flow_tuples, width: int, name: str) -> RGraph:
        zero = (0,) * width
        edges = [Edge(zero, "*", "*", True)]
        edges.extend(Edge(flows, "*", "*", False) for flows in dict.fromkeys(flow_tuples) if flows != zero)
        return RGraph(vertices=("*",), edges=tuple(edges), name=name)

    x = channel_fragment(a.dom.labels.values(), len(a.dom.boundary), str(a.dom.boundary))
    y = channel_fragment(a.cod.labels.values(), len(a.cod.boundary), str(a.cod.boundary))

    values = tuple(dict.fromkeys(a.valuation[v] for v in a.head.vertices))
    zero_left, zero_right = (0,) * len(a.dom.boundary), (0,) * len(a.cod.boundary)
    nulls = {value: AccountEdge(value, value, zero_left, zero_right) for value in values}
    edges = [Edge(null, value, value, True) for value, null in nulls.items()]
    edges.extend(
        Edge(m, m.from_value, m.to_value, False) for m in dict.fromkeys(measured) if m not in nulls.values()
    )
    head = RGraph(vertices=values, edges=tuple(edges), name=f"A[{a.dom.boundary}, {a.cod.boundary}]")
    return Span(
        head=head,
        left=GraphMorphism(head, x, {v: "*" for v in values}, {e.id: e.id.left_flows for e in edges}),
        right=GraphMorphism(head, y, {v: "*" for v in values}, {e.id: e.id.right_flows for e in edges}),
        name=head.name,
    )


def _boundary_morphism(o: AccountObject, fragment: RGraph) -> GraphMorphism:
    return GraphMorphism(
        dom=o.carrier,
        cod=fragment,
        vmap={v: "*" for v in o.carrier.vertices},
        emap={e.id: o.flows(e.id) for e in o.carrier.edges},
    )


def measurement_morphism(a: GeneralAccount) -> GraphMorphism:
    """The valuation as a head morphism R -> A_{X,Y} (restricted to the fragment it reaches)."""
    fragment = standard_fragment(a)
    return GraphMorphism(
        dom=a.head,
        cod=fragment.head,
        vmap=dict(a.valuation),
        emap={e.id: a.measured_edge(e.id) for e in a.head.edges},
    )


def measurement_two_cell(a: GeneralAccount) -> TwoCell:
    """φ_R: R • g_* -> f_* • A_{X,Y}, recovered from the valuation by untransposing."""
    fragment = standard_fragment(a)
    f = _boundary_morphism(a.dom, fragment.dom)
    g = _boundary_morphism(a.cod, fragment.cod)
    return untranspose(measurement_morphism(a), a.span, fragment, f, g)


def valuation_of(cell: TwoCell, a: GeneralAccount) -> dict:
    """Read the valuation back off a measurement 2-cell."""
    fragment = standard_fragment(a)
    f = _boundary_morphism(a.dom, fragment.dom)
    g = _boundary_morphism(a.cod, fragment.cod)
    return dict(transpose(cell, a.span, fragment, f, g).vmap)


@dataclass(frozen=True)
class Expression:
    pass


@dataclass(frozen=True)
class Atom(Expression):
    account: GeneralAccount
    name: str = ""


@dataclass(frozen=True)
class Compose(Expression):
    first: Expression
    second: Expression


@dataclass(frozen=True)
class Tensor(Expression):
    left: Expression
    right: Expression


@dataclass(frozen=True)
class Identity(Expression):
    obj: AccountObject


@dataclass(frozen=True)
class Unit(Expression):
    obj: AccountObject


@dataclass(frozen=True)
class Counit(Expression):
    obj: AccountObject


def type_of(e: Expression, path: str = "root") -> tuple[AccountObject, AccountObject]:
    """Domain and codomain of an expression, without evaluating it."""
    match e:
        case Atom(account=account):
            return account.dom, account.cod
        case Identity(obj=o):
            return o, o
        case Unit(obj=o):
            return unit_object(), tensor_objects(reverse_object(o), o)
        case Counit(obj=o):
            return tensor_objects(o, reverse_object(o)), unit_object()
        case Compose(first=first, second=second):
            dom, middle = type_of(first, f"{path}.first")
            middle_again, cod = type_of(second, f"{path}.second")
            if middle != middle_again:
                raise ExpressionTypeError(
                    path, f"cannot compose: {middle.name or middle.boundary} is not {middle_again.name or middle_again.boundary}"
                )
            return dom, cod
        case Tensor(left=left, right=right):
            dom_l, cod_l = type_of(left, f"{path}.left")
            dom_r, cod_r = type_of(right, f"{path}.right")
            return tensor_objects(dom_l, dom_r), tensor_objects(cod_l, cod_r)
    raise ExpressionTypeError(path, f"unknown expression node {type(e).__name__}")


def eval_expression(e: Expression, path: str = "root") -> GeneralAccount:
    """Evaluate an expression bottom-up; every node is re-validated as it is built."""
    match e:
        case Atom(account=account):
            return account
        case Identity(obj=o):
            return identity_account(o)
        case Unit(obj=o):
            return unit_account(o)
        case Counit(obj=o):
            return counit_account(o)
        case Compose(first=first, second=second):
            a = eval_expression(first, f"{path}.first")
            b = eval_expression(second, f"{path}.second")
            try:
                return compose_accounts(a, b)
            except BoundaryMismatch as error:
                raise ExpressionTypeError(path, str(error)) from error
        case Tensor(left=left, right=right):
            return tensor_accounts(eval_expression(left, f"{path}.left"), eval_expression(right, f"{path}.right"))
    raise ExpressionTypeError(path, f"unknown expression node {type(e).__name__}")


def trace_expression(e: Expression) -> Expression:
    """Feed the codomain of e: W -> W back into its domain: η_W ; (1_{W^-1} ⊗ e) ; ε_{W^-1}."""
    dom, cod = type_of(e)
    if dom != cod:
        raise ExpressionTypeError("root", "only an endomorphism W -> W can be fed back")
    return Compose(Compose(Unit(dom), Tensor(Identity(reverse_object(dom)), e)), Counit(reverse_object(dom)))


def is_closed(a: GeneralAccount) -> bool:
    return a.dom.is_unit and a.cod.is_unit


def total_value(a: GeneralAccount, path: Path) -> int:
    """The value of a closed system along a behaviour; it never changes from step to step."""
    if not is_closed(a):
        raise NotClosed(f"{a.name or 'account'} has boundaries {a.dom.boundary} and {a.cod.boundary}")
    if path.graph != a.head:
        raise TwoCellError("Path does not live in the head of the account")
    states = path.states
    start = a.valuation[states[0]]
    for step, (before, after) in enumerate(zip(states, states[1:]), start=1):
        if a.valuation[after] != a.valuation[before]:
            raise InvariantBroken(format_id(path.start), step, a.valuation[before], a.valuation[after])
    return start


def check_total_value(a: GeneralAccount, max_len: int = cst.DEFAULT_MAX_LEN) -> TotalValueReport:
    paths = enumerate_paths(a.head, max_len)
    totals = set()
    for path in paths:
        try:
            totals.add(total_value(a, path))
        except InvariantBroken as error:
            logger.warning(f"Total value not invariant: {error}")
            return TotalValueReport(passed=False, paths_checked=len(paths), max_len=max_len, witness=str(error))
    return TotalValueReport(passed=True, paths_checked=len(paths), max_len=max_len, totals=sorted(totals))

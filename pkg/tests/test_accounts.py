import pytest

from core.accounts import AccountObject
from core.accounts import Atom
from core.accounts import Compose
from core.accounts import Identity
from core.accounts import Tensor
from core.accounts import Unit
from core.accounts import check_total_value
from core.accounts import compose_accounts
from core.accounts import counit_account
from core.accounts import eval_expression
from core.accounts import identity_account
from core.accounts import is_closed
from core.accounts import make_general_account
from core.accounts import make_object
from core.accounts import measurement_morphism
from core.accounts import measurement_two_cell
from core.accounts import reverse_object
from core.accounts import standard_fragment
from core.accounts import tensor_accounts
from core.accounts import tensor_objects
from core.accounts import total_value
from core.accounts import trace_expression
from core.accounts import type_of
from core.accounts import unit_account
from core.accounts import unit_object
from core.accounts import valuation_of
from core.behaviour import Path
from core.exceptions import BoundaryMismatch
from core.exceptions import ExpressionTypeError
from core.exceptions import FlowError
from core.exceptions import MeasurementViolation
from core.exceptions import NotClosed
from core.exceptions import TwoCellError
from core.rgraph import bang
from core.rgraph import make_graph
from core.rgraph import make_morphism
from core.span import Span
from core.span import identity_span
from core.span import iso_spans
from core.stdaccount import signature


def _wallet(pay):
    head = make_graph(["w10", "w7", "w4"], [("b1", "w10", "w7"), ("b2", "w7", "w4")], name="Wallet")
    span = Span(
        head=head,
        left=bang(head),
        right=make_morphism(head, pay.carrier, {v: "p" for v in head.vertices}, {"b1": "buy", "b2": "buy"}),
        name="wallet",
    )
    return make_general_account(unit_object(), pay, span, {"w10": 10, "w7": 7, "w4": 4}, "wallet")


def _shop(pay):
    head = make_graph(["s0", "s3", "s6"], [("c1", "s0", "s3"), ("c2", "s3", "s6")], name="Shop")
    span = Span(
        head=head,
        left=make_morphism(head, pay.carrier, {v: "p" for v in head.vertices}, {"c1": "buy", "c2": "buy"}),
        right=bang(head),
        name="shop",
    )
    return make_general_account(pay, unit_object(), span, {"s0": 0, "s3": 3, "s6": 6}, "shop")


def _constant(value: int, name: str = "still"):
    """A closed account with an idle loop, holding ``value`` throughout."""
    head = make_graph(["v"], [("idle", "v", "v")], name=name)
    span = Span(head=head, left=bang(head), right=bang(head), name=name)
    return make_general_account(unit_object(), unit_object(), span, {"v": value}, name)


def _sale_object():
    till = make_graph(["p"], [("sale", "p", "p")], name="Sales")
    return make_object(till, signature(("sale", 1)), {"sale": (1500,)}, name="Sale")


def _asset(jump: int):
    sale = _sale_object()
    head = make_graph([1000, jump], [("t", 1000, jump)], name="Cash")
    span = Span(
        head=head,
        left=make_morphism(head, sale.carrier, {1000: "p", jump: "p"}, {"t": "sale"}),
        right=bang(head),
        name="cash",
    )
    return make_general_account(sale, unit_object(), span, {1000: 1000, jump: jump}, "cash")


def test_objects_default_to_zero_flows(loop):
    o = make_object(loop, signature(("c", 1)))
    assert o.flows("l") == (0,)
    assert o.flows("~p") == (0,)


def test_null_loops_carry_no_flow(loop):
    with pytest.raises(FlowError, match="zero flows"):
        make_object(loop, signature(("c", 1)), {"~p": (1,)})


def test_every_edge_needs_a_label(loop):
    with pytest.raises(FlowError, match="no flow label"):
        AccountObject(carrier=loop, boundary=signature(("c", 1)), labels={"l": (1,)})


def test_reverse_object_is_an_involution(pay_object):
    flipped = reverse_object(pay_object)
    assert flipped.boundary == signature(("coin", -1))
    assert reverse_object(flipped) == pay_object


def test_trivial_account_is_valid():
    account = _constant(0)
    assert is_closed(account)
    assert account.valuation["v"] == 0


def test_asset_account_measures_its_inflow():
    account = _asset(2500)
    assert account.measured_edge("t").to_value == 2500


def test_measurement_violation_is_reported():
    with pytest.raises(MeasurementViolation) as error:
        _asset(2600)
    assert error.value.lhs == 1600
    assert error.value.rhs == 1500


def test_valuation_must_be_total():
    head = make_graph(["v"])
    span = Span(head=head, left=bang(head), right=bang(head))
    with pytest.raises(TwoCellError, match="misses"):
        make_general_account(unit_object(), unit_object(), span, {})


def test_legs_must_land_in_the_boundary_carriers(pay_object):
    head = make_graph(["v"])
    span = Span(head=head, left=bang(head), right=bang(head))
    with pytest.raises(BoundaryMismatch):
        make_general_account(pay_object, unit_object(), span, {"v": 0})


def test_compose_with_identity_keeps_the_valuation(pay_object):
    wallet = _wallet(pay_object)
    composite = compose_accounts(identity_account(wallet.dom), wallet)
    assert {v[1]: value for v, value in composite.valuation.items()} == dict(wallet.valuation)


def test_composite_synchronizes_and_adds(pay_object):
    main = compose_accounts(_wallet(pay_object), _shop(pay_object))
    assert is_closed(main)
    assert main.valuation[("w10", "s0")] == 10
    assert main.valuation[("w7", "s3")] == 10
    assert ("b1", "c1") in {e.id for e in main.head.non_null_edges}
    assert len(main.head.non_null_edges) == 4


def test_composition_checks_boundaries(pay_object):
    with pytest.raises(BoundaryMismatch):
        compose_accounts(_wallet(pay_object), _wallet(pay_object))


def test_tensor_adds_values():
    both = tensor_accounts(_constant(3, "three"), _constant(4, "four"))
    assert list(both.valuation.values()) == [7]
    assert both.dom == unit_object()


def test_tensor_with_the_empty_identity_is_strict(pay_object):
    wallet = _wallet(pay_object)
    assert tensor_accounts(wallet, identity_account(unit_object())) == wallet


def test_middle_four_interchange_on_valuations(pay_object):
    a, b = _wallet(pay_object), _shop(pay_object)
    c, d = _constant(3, "c"), _constant(4, "d")
    tensor_of_composites = tensor_accounts(compose_accounts(a, b), compose_accounts(c, d))
    composite_of_tensors = compose_accounts(tensor_accounts(a, c), tensor_accounts(b, d))
    regrouped = {((va, vc), (vb, vd)): value for ((va, vb), (vc, vd)), value in tensor_of_composites.valuation.items()}
    assert regrouped == dict(composite_of_tensors.valuation)


def test_unit_account_on_the_unit_object_is_the_identity():
    assert unit_account(unit_object()) == identity_account(unit_object())


def test_counit_is_valued_zero(pay_object):
    counit = counit_account(pay_object)
    assert set(counit.valuation.values()) == {0}
    assert counit.dom == tensor_objects(pay_object, reverse_object(pay_object))


def test_snake_of_accounts_is_the_identity(pay_object):
    first = tensor_accounts(identity_account(pay_object), unit_account(pay_object))
    second = tensor_accounts(counit_account(pay_object), identity_account(pay_object))
    snake = compose_accounts(first, second)
    assert snake.dom == pay_object
    assert snake.cod == pay_object
    assert set(snake.valuation.values()) == {0}
    assert iso_spans(snake.span, identity_span(pay_object.carrier)) is not None


def test_measurement_two_cell_round_trip(pay_object):
    wallet = _wallet(pay_object)
    fragment = standard_fragment(wallet)
    assert set(fragment.head.vertices) == {10, 7, 4}
    assert measurement_morphism(wallet).vmap["w7"] == 7
    cell = measurement_two_cell(wallet)
    assert valuation_of(cell, wallet) == dict(wallet.valuation)


def test_eval_expression(pay_object):
    wallet = _wallet(pay_object)
    assert eval_expression(Atom(wallet, "wallet")) is wallet
    with_identity = eval_expression(Compose(Identity(unit_object()), Atom(wallet, "wallet")))
    assert iso_spans(with_identity.span, wallet.span) is not None


def test_expressions_and_accounts_are_hashable(pay_object):
    wallet = _wallet(pay_object)
    assert hash(Atom(wallet, "wallet")) == hash(Atom(_wallet(pay_object), "wallet"))
    nodes = {Atom(wallet, "wallet"), Identity(pay_object), Unit(pay_object), Identity(pay_object)}
    assert len(nodes) == 3
    assert hash(reverse_object(reverse_object(pay_object))) == hash(pay_object)


def test_type_errors_carry_the_node_path(pay_object):
    wallet = Atom(_wallet(pay_object), "wallet")
    with pytest.raises(ExpressionTypeError) as error:
        type_of(Tensor(wallet, Compose(wallet, wallet)))
    assert error.value.path == "root.right"
    with pytest.raises(ExpressionTypeError) as error:
        eval_expression(Compose(wallet, wallet))
    assert error.value.path == "root"


def test_unit_expression_type(pay_object):
    dom, cod = type_of(Unit(pay_object))
    assert dom == unit_object()
    assert cod == tensor_objects(reverse_object(pay_object), pay_object)


def test_trace_needs_an_endomorphism(pay_object):
    with pytest.raises(ExpressionTypeError):
        trace_expression(Atom(_wallet(pay_object), "wallet"))


def test_trace_of_an_identity_is_closed(pay_object):
    traced = eval_expression(trace_expression(Identity(pay_object)))
    assert is_closed(traced)
    assert check_total_value(traced, 3).totals == [0]


def test_total_value_along_paths(pay_object):
    main = compose_accounts(_wallet(pay_object), _shop(pay_object))
    assert total_value(main, Path(main.head, ("w10", "s0"))) == 10
    assert total_value(main, Path(main.head, ("w10", "s0"), (("b1", "c1"), ("b2", "c2")))) == 10
    report = check_total_value(main, 3)
    assert report.passed
    assert report.totals == [4, 7, 10, 13, 16]


def test_total_value_of_a_constant_system():
    still = _constant(42)
    report = check_total_value(still, 4)
    assert report.passed
    assert report.totals == [42]


def test_total_value_needs_a_closed_system(pay_object):
    wallet = _wallet(pay_object)
    with pytest.raises(NotClosed):
        total_value(wallet, Path(wallet.head, "w10"))


def test_total_value_needs_a_path_in_the_head(pay_object):
    still = _constant(1)
    with pytest.raises(TwoCellError):
        total_value(still, Path(make_graph(["v"]), "v"))

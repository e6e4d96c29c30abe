import random

import pytest
from hypothesis import assume
from hypothesis import given
from hypothesis import strategies as st

from core.exceptions import BoundaryMismatch
from core.exceptions import FlowError
from core.models.report_models import CheckStatus
from core.stdaccount import AccountEdge
from core.stdaccount import Channel
from core.stdaccount import Signature
from core.stdaccount import StdAccount
from core.stdaccount import alpha
from core.stdaccount import continuity_holds
from core.stdaccount import delta
from core.stdaccount import flow_balance
from core.stdaccount import gamma
from core.stdaccount import sequence_edges
from core.stdaccount import signature
from core.stdaccount import signature_shapes
from core.stdaccount import tau
from core.stdaccount import theta
from core.stdaccount import verify_axioms


def test_continuity_fixes_the_target_value():
    xi, zeta = (1,), (1,)
    assert continuity_holds(xi, zeta, AccountEdge(0, 2, (5,), (3,)))
    assert not continuity_holds(xi, zeta, AccountEdge(0, 3, (5,), (3,)))


def test_null_transaction_keeps_the_value():
    assert continuity_holds((1, -1), (1,), AccountEdge(42, 42, (0, 0), (0,)))


def test_asset_increases_by_its_inflow():
    assert continuity_holds((1,), (), AccountEdge(1000, 2500, (1500,), ()))


def test_flow_balance_rejects_bad_flows():
    with pytest.raises(FlowError, match="Expected 2 flows"):
        flow_balance((1, -1), (3,))
    with pytest.raises(FlowError, match="non-negative"):
        flow_balance((1,), (-3,))


def test_membership_rejects_negative_flows():
    account = StdAccount(signature(("x", 1)), Signature())
    assert not account.contains(AccountEdge(0, -3, (-3,), ()))


def test_signature_basics():
    x = signature(("in", 1), ("out", -1))
    assert len(x) == 2
    assert x.polarities == (1, -1)
    assert x.factors[0][0] == Channel("in")
    assert str(x) == "in+ ⊗ out-"
    assert str(Signature()) == "0"
    assert x.reverse() == signature(("out", 1), ("in", -1))
    assert x.reverse().reverse() == x
    assert x.tensor(Signature()) == x


def test_signature_rejects_other_polarities():
    with pytest.raises(FlowError):
        signature(("x", 2))


def test_signature_shapes_cover_every_polarity_pattern():
    shapes = signature_shapes(2)
    assert len(shapes) == 1 + 2 + 4
    assert shapes[0] == Signature()


def test_valuation_vertex_formulas():
    x = signature(("c", 1))
    assert alpha()(3, 4) == 7
    assert alpha()(0, 0) == 0
    assert tau()(3, 4) == 7
    assert theta(x)() == 0
    assert delta(x)() == 0
    assert gamma(x)() == 0


def test_valuation_arity_is_checked():
    with pytest.raises(FlowError, match="takes 2"):
        alpha()(1)


def test_edge_actions_land_in_the_right_standard_accounts():
    x = signature(("a", 1), ("b", -1))
    flows = (4, 9)
    assert StdAccount(x, x).contains(theta(x).on_edges(flows))
    assert StdAccount(Signature(), x.reverse().tensor(x)).contains(delta(x).on_edges(flows))
    assert StdAccount(x.tensor(x.reverse()), Signature()).contains(gamma(x).on_edges(flows))


def test_alpha_needs_synchronized_edges():
    e1 = AccountEdge(0, 1, (1,), (0,))
    e2 = AccountEdge(0, 2, (2,), ())
    with pytest.raises(BoundaryMismatch):
        alpha().on_edges(e1, e2)


def test_sequencing_transactions():
    account = StdAccount(signature(("x", 1)), signature(("y", 1)))
    first = AccountEdge(0, 2, (5,), (3,))
    second = AccountEdge(2, 3, (1,), (0,))
    combined = sequence_edges(first, second)
    assert combined == AccountEdge(0, 3, (6,), (3,))
    assert account.contains(combined)
    with pytest.raises(FlowError):
        sequence_edges(second, first)


@given(st.integers(min_value=0, max_value=2**64))
def test_random_edges_are_members(seed):
    rng = random.Random(seed)
    account = StdAccount(signature(("x", 1), ("y", -1)), signature(("z", 1)))
    assert account.contains(account.random_edge(rng, 10**12))


boundary_pairs = st.lists(st.tuples(st.sampled_from([1, -1]), st.integers(min_value=0, max_value=1000)), max_size=5)


def _member_edge(start, left_pairs, right_pairs):
    xi, left = [p for p, _ in left_pairs], [f for _, f in left_pairs]
    zeta, right = [p for p, _ in right_pairs], [f for _, f in right_pairs]
    change = flow_balance(xi, left) - flow_balance(zeta, right)
    return xi, zeta, AccountEdge(start, start + change, left, right)


@given(st.integers(min_value=-1000, max_value=1000), boundary_pairs, boundary_pairs, st.data())
def test_continuity_ignores_the_order_of_channels(start, left_pairs, right_pairs, data):
    xi, zeta, edge = _member_edge(start, left_pairs, right_pairs)
    assert continuity_holds(xi, zeta, edge)
    order = data.draw(st.permutations(range(len(left_pairs))))
    shuffled = [left_pairs[i] for i in order]
    permuted = AccountEdge(edge.from_value, edge.to_value, [f for _, f in shuffled], edge.right_flows)
    assert continuity_holds([p for p, _ in shuffled], zeta, permuted)
    off_by_one = AccountEdge(edge.from_value, edge.to_value + 1, permuted.left_flows, edge.right_flows)
    assert not continuity_holds([p for p, _ in shuffled], zeta, off_by_one)


@given(st.integers(min_value=-1000, max_value=1000), boundary_pairs, boundary_pairs, st.data())
def test_flipping_a_used_polarity_breaks_continuity(start, left_pairs, right_pairs, data):
    xi, zeta, edge = _member_edge(start, left_pairs, right_pairs)
    used = [i for i, (_, flow) in enumerate(left_pairs) if flow > 0]
    assume(used)
    i = data.draw(st.sampled_from(used))
    flipped = xi[:i] + [-xi[i]] + xi[i + 1:]
    assert not continuity_holds(flipped, zeta, edge)
    assert not StdAccount(Signature(tuple(zip("abcde", flipped))), Signature(tuple(zip("vwxyz", zeta)))).contains(edge)


def test_all_axioms_pass():
    report = verify_axioms(bound=100, max_factors=3, seed=0, samples=500)
    assert report.passed
    assert [result.name for result in report.results] == [f"axiom_{k}" for k in range(1, 6)]
    assert all(result.status == CheckStatus.PASS for result in report.results)
    assert report.to_text().splitlines()[0] == "axiom_1: PASS (checked 500 tuples)"


def test_axiom_report_is_deterministic():
    first = verify_axioms(bound=10, max_factors=2, seed=3, samples=50)
    second = verify_axioms(bound=10, max_factors=2, seed=3, samples=50)
    assert first == second


def test_axiom_checks_validate_their_arguments():
    with pytest.raises(ValueError):
        verify_axioms(bound=0)

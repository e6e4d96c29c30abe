import random

import pytest
from hypothesis import strategies as st

from core.accounts import make_object
from core.ledger import make_ledger
from core.loaders import parse_journal
from core.models.ledger_models import AccountKind
from core.models.ledger_models import LedgerAccount
from core.rgraph import bang
from core.rgraph import make_graph
from core.rgraph import make_morphism
from core.span import Span
from core.stdaccount import signature


PACIOLI_JOURNAL = """\
1; debit consumables:2000; credit creditors:2000
2; debit cash:1500; credit sales:1500
3; debit creditors:1000; credit cash:1000
zeroize expenses
zeroize income
"""

PACIOLI_STATES = [
    [1000, 0, 0, 0, -1000],
    [1000, -2000, 2000, 0, -1000],
    [2500, -2000, 2000, -1500, -1000],
    [1500, -1000, 2000, -1500, -1000],
    [1500, -1000, 0, -1500, 1000],
    [1500, -1000, 0, 0, -500],
]


@st.composite
def graphs(draw, max_vertices: int = 3, max_edges: int = 3):
    """Small reflexive graphs with vertices v0.. and non-null edges e0.."""
    count = draw(st.integers(min_value=1, max_value=max_vertices))
    vertices = [f"v{i}" for i in range(count)]
    ends = st.sampled_from(vertices)
    pairs = draw(st.lists(st.tuples(ends, ends), max_size=max_edges))
    return make_graph(vertices, [(f"e{j}", s, t) for j, (s, t) in enumerate(pairs)], name="G")


@pytest.fixture
def rng():
    return random.Random(0)


@pytest.fixture
def arrow():
    """a -> b with one non-null edge."""
    return make_graph(["a", "b"], [("e", "a", "b")], name="Arrow")


@pytest.fixture
def loop():
    """One vertex carrying a non-null loop l."""
    return make_graph(["p"], [("l", "p", "p")], name="Loop")


@pytest.fixture
def chain():
    return make_graph(["a", "b", "c"], [("e1", "a", "b"), ("e2", "b", "c")], name="Chain")


@pytest.fixture
def arrow_onto_loop(arrow, loop):
    """Arrow -> Loop folding both vertices onto p and e onto l."""
    return make_morphism(arrow, loop, {"a": "p", "b": "p"}, {"e": "l"})


@pytest.fixture
def parallel_span_pair(loop):
    """r: I -> Loop and s: Loop -> I, each with two parallel edges over the loop l."""
    r_head = make_graph(["r0", "r1"], [("r_a", "r0", "r1"), ("r_b", "r0", "r1")], name="RH")
    s_head = make_graph(["s0", "s1"], [("s_a", "s0", "s1"), ("s_b", "s0", "s1")], name="SH")
    r = Span(
        head=r_head,
        left=bang(r_head),
        right=make_morphism(r_head, loop, {"r0": "p", "r1": "p"}, {"r_a": "l", "r_b": "l"}),
        name="r",
    )
    s = Span(
        head=s_head,
        left=make_morphism(s_head, loop, {"s0": "p", "s1": "p"}, {"s_a": "l", "s_b": "l"}),
        right=bang(s_head),
        name="s",
    )
    return r, s


@pytest.fixture
def pay_object():
    """One till vertex; each purchase moves 3 coins over a +1 channel."""
    till = make_graph(["p"], [("buy", "p", "p")], name="Till")
    return make_object(till, signature(("coin", 1)), {"buy": (3,)}, name="Pay")


@pytest.fixture
def pacioli_ledger():
    return make_ledger(
        [
            LedgerAccount(name="cash", kind=AccountKind.ASSET, value=1000),
            LedgerAccount(name="creditors", kind=AccountKind.LIABILITY, value=0),
            LedgerAccount(name="consumables", kind=AccountKind.EXPENSE, value=0),
            LedgerAccount(name="sales", kind=AccountKind.INCOME, value=0),
            LedgerAccount(name="capital", kind=AccountKind.EQUITY, value=-1000),
        ]
    )


@pytest.fixture
def pacioli_journal():
    return parse_journal(PACIOLI_JOURNAL, "pacioli.journal")


@pytest.fixture
def pacioli_states():
    return [list(state) for state in PACIOLI_STATES]

import pytest
from hypothesis import given

from conftest import graphs
from core.exceptions import GraphError
from core.exceptions import MorphismError
from core.rgraph import GraphMorphism
from core.rgraph import bang
from core.rgraph import compose_morphisms
from core.rgraph import diagonal
from core.rgraph import enumerate_morphisms
from core.rgraph import format_graph
from core.rgraph import format_id
from core.rgraph import identity_morphism
from core.rgraph import join_id
from core.rgraph import make_graph
from core.rgraph import make_morphism
from core.rgraph import null_edge_id
from core.rgraph import pair_morphisms
from core.rgraph import product
from core.rgraph import projections
from core.rgraph import reverse
from core.rgraph import split_id
from core.rgraph import terminal


def test_single_vertex_gets_its_null_loop():
    g = make_graph(["a"])
    assert len(g.vertices) == 1
    assert len(g.edges) == 1
    assert g.edges[0].is_null
    assert g.null_of["a"] == "~a"


def test_arrow_has_three_edges(arrow):
    assert len(arrow.vertices) == 2
    assert len(arrow.edges) == 3
    assert [e.id for e in arrow.non_null_edges] == ["e"]


def test_dangling_endpoint_is_rejected():
    with pytest.raises(GraphError, match="Dangling"):
        make_graph(["a"], [("e", "a", "c")])


def test_duplicate_vertex_is_rejected():
    with pytest.raises(GraphError, match="Duplicate vertex"):
        make_graph(["a", "a"])


def test_null_prefix_is_reserved():
    with pytest.raises(GraphError, match="reserved"):
        make_graph(["a"], [("~x", "a", "a")])


def test_terminal_graph():
    unit = terminal()
    assert unit.vertices == ((),)
    assert len(unit.edges) == 1
    assert format_id(unit.vertices[0]) == "0"


def test_product_counts(arrow):
    assert len(product(arrow, arrow).vertices) == 4
    assert len(product(arrow, arrow).edges) == 9


def test_product_with_terminal_is_strict(arrow):
    assert product(terminal(), arrow) == arrow
    assert product(arrow, terminal()) == arrow
    assert product(terminal(), terminal()) == terminal()


def test_product_is_associative_on_the_nose(arrow, loop, chain):
    left = product(product(arrow, loop), chain)
    right = product(arrow, product(loop, chain))
    assert left == right
    assert ("a", "p", "c") in left.vertices
    assert left.arity == 3


def test_product_ids_are_flat(arrow, loop, chain):
    ab = product(arrow, loop)
    assert join_id(ab, chain, ("a", "p"), "b") == ("a", "p", "b")
    assert split_id(ab, chain, ("a", "p", "b")) == (("a", "p"), "b")


def test_null_edges_of_a_product_are_pairs_of_nulls(arrow, loop):
    g = product(arrow, loop)
    nulls = [e for e in g.edges if e.is_null]
    assert len(nulls) == len(g.vertices)
    assert g.edge(("e", "~p")).is_null is False


def test_reverse_keeps_data_and_flips_polarity(arrow):
    flipped = reverse(arrow)
    assert flipped.edges == arrow.edges
    assert flipped.vertices == arrow.vertices
    assert flipped != arrow
    assert reverse(flipped) == arrow


def test_reverse_of_terminal_is_terminal():
    assert reverse(terminal()) == terminal()


@given(graphs())
def test_reverse_is_an_involution(g):
    assert reverse(reverse(g)) == g


def test_identity_is_a_unit_for_composition(arrow_onto_loop):
    f = arrow_onto_loop
    assert compose_morphisms(identity_morphism(f.dom), f) == f
    assert compose_morphisms(f, identity_morphism(f.cod)) == f


def test_morphisms_hash_consistently_with_equality(arrow_onto_loop):
    f = arrow_onto_loop
    again = compose_morphisms(identity_morphism(f.dom), f)
    assert hash(again) == hash(f)
    assert len({f, again, identity_morphism(f.dom)}) == 2


def test_make_morphism_fills_null_images(arrow_onto_loop):
    assert arrow_onto_loop.emap["~a"] == "~p"
    assert arrow_onto_loop.emap["~b"] == "~p"


def test_null_loop_must_map_to_null_loop(loop):
    with pytest.raises(MorphismError, match="Null loop"):
        GraphMorphism(dom=loop, cod=loop, vmap={"p": "p"}, emap={"~p": "l", "l": "l"})


def test_edge_map_must_respect_endpoints(arrow, chain):
    with pytest.raises(MorphismError, match="compatibly"):
        make_morphism(arrow, chain, {"a": "a", "b": "c"}, {"e": "e1"})


def test_composition_needs_matching_ends(arrow_onto_loop):
    with pytest.raises(MorphismError):
        compose_morphisms(arrow_onto_loop, arrow_onto_loop)


@given(graphs())
def test_bang_sends_every_edge_to_the_null_loop_of_the_unit(g):
    f = bang(g)
    assert set(f.vmap.values()) == {()}
    assert set(f.emap.values()) == {()}


def test_diagonal_duplicates_edges(arrow):
    assert diagonal(arrow).emap["e"] == ("e", "e")
    assert diagonal(arrow).vmap["a"] == ("a", "a")


def test_pairing_then_projecting_recovers_the_parts(arrow, loop, arrow_onto_loop):
    first, second = projections(arrow, loop)
    paired = pair_morphisms(identity_morphism(arrow), arrow_onto_loop)
    assert compose_morphisms(paired, first) == identity_morphism(arrow)
    assert compose_morphisms(paired, second) == arrow_onto_loop


def test_enumerate_morphisms(arrow, loop):
    assert len(enumerate_morphisms(arrow, loop)) == 2
    assert len(enumerate_morphisms(loop, arrow)) == 2
    assert len(enumerate_morphisms(arrow, loop, limit=1)) == 1


def test_format_helpers(arrow):
    assert format_id(("a", ("b", "c"))) == "(a,(b,c))"
    assert null_edge_id(("a", "b")) == "~(a,b)"
    assert format_graph(arrow) == "graph Arrow { vertices: a, b; edges: e: a -> b; }"

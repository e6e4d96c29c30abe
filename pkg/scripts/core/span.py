"""Spans of reflexive graphs and 2-cells between them.

Composition is the pullback over the shared boundary; tensor is the product of
heads and legs. Spans are compared structurally, and ``iso_spans`` finds an
isomorphism of heads commuting with both legs when structural equality is too
strict (the bicategory laws only hold up to such isomorphisms).
"""

from collections import Counter
from collections import defaultdict
from dataclasses import dataclass
from dataclasses import field

import networkx as nx
from networkx.algorithms import isomorphism
from logging_utils import get_logger

import core.constants as cst
from core.exceptions import BoundaryMismatch
from core.exceptions import IsoSearchLimitExceeded
from core.exceptions import MorphismError
from core.exceptions import TransposeShapeError
from core.exceptions import TwoCellError
from core.rgraph import Edge
from core.rgraph import GraphMorphism
from core.rgraph import RGraph
from core.rgraph import bang
from core.rgraph import compose_morphisms
from core.rgraph import identity_morphism
from core.rgraph import pair_morphisms
from core.rgraph import product
from core.rgraph import product_morphism
from core.rgraph import reversal_map
from core.rgraph import reverse


logger = get_logger(__name__)


@dataclass(frozen=True)
class Span:
    head: RGraph
    left: GraphMorphism
    right: GraphMorphism
    name: str = field(default="", compare=False)

    def __post_init__(self):
        if self.left.dom != self.head or self.right.dom != self.head:
            raise MorphismError(f"Both legs of span {self.name!r} must start at its head")

    @property
    def dom(self) -> RGraph:
        return self.left.cod

    @property
    def cod(self) -> RGraph:
        return self.right.cod


@dataclass(frozen=True)
class TwoCell:
    src: Span
    tgt: Span
    map: GraphMorphism

    def __post_init__(self):
        if self.src.dom != self.tgt.dom or self.src.cod != self.tgt.cod:
            raise BoundaryMismatch("A 2-cell needs spans with the same boundaries", self.src, self.tgt)
        if self.map.dom != self.src.head or self.map.cod != self.tgt.head:
            raise TwoCellError("A 2-cell must map the head of its source to the head of its target")
        if compose_morphisms(self.map, self.tgt.left) != self.src.left:
            raise TwoCellError("2-cell does not commute with the left legs")
        if compose_morphisms(self.map, self.tgt.right) != self.src.right:
            raise TwoCellError("2-cell does not commute with the right legs")


def _pair_morphism(dom: RGraph, cod: RGraph, pick_vertex, pick_edge) -> GraphMorphism:
    return GraphMorphism(
        dom=dom,
        cod=cod,
        vmap={v: pick_vertex(v) for v in dom.vertices},
        emap={e.id: pick_edge(e.id) for e in dom.edges},
    )


def compose_spans(r: Span, s: Span) -> Span:
    """R • S, the pullback of R's right leg against S's left leg."""
    if r.cod != s.dom:
        raise BoundaryMismatch(
            f"Cannot compose {r.name or 'span'} with {s.name or 'span'}: boundaries differ", r.cod, s.dom
        )

    vertex_fibres = defaultdict(list)
    for v in s.head.vertices:
        vertex_fibres[s.left.vmap[v]].append(v)
    edge_fibres = defaultdict(list)
    for e in s.head.edges:
        edge_fibres[s.left.emap[e.id]].append(e)

    vertices = tuple((vr, vs) for vr in r.head.vertices for vs in vertex_fibres.get(r.right.vmap[vr], ()))
    edges = tuple(
        Edge(
            id=(er.id, es.id),
            source=(er.source, es.source),
            target=(er.target, es.target),
            is_null=er.is_null and es.is_null,
        )
        for er in r.head.edges
        for es in edge_fibres.get(r.right.emap[er.id], ())
    )
    head = RGraph(vertices=vertices, edges=edges, name=f"{r.head.name}•{s.head.name}")
    logger.debug(f"Pullback head has {len(vertices)} vertices and {len(edges)} edges")

    left = _pair_morphism(head, r.dom, lambda v: r.left.vmap[v[0]], lambda e: r.left.emap[e[0]])
    right = _pair_morphism(head, s.cod, lambda v: s.right.vmap[v[1]], lambda e: s.right.emap[e[1]])
    return Span(head=head, left=left, right=right, name=f"({r.name}•{s.name})")


def tensor_spans(r: Span, s: Span) -> Span:
    return Span(
        head=product(r.head, s.head),
        left=product_morphism(r.left, s.left),
        right=product_morphism(r.right, s.right),
        name=f"({r.name}⊗{s.name})",
    )


def identity_span(x: RGraph) -> Span:
    identity = identity_morphism(x)
    return Span(head=x, left=identity, right=identity, name=f"1_{x.name}")


def eta(x: RGraph) -> Span:
    """η_X : I -> X^-1 × X, head X."""
    return Span(
        head=x,
        left=bang(x),
        right=pair_morphisms(reversal_map(x), identity_morphism(x)),
        name=f"η_{x.name}",
    )


def epsilon(x: RGraph) -> Span:
    """ε_X : X × X^-1 -> I, head X."""
    return Span(
        head=x,
        left=pair_morphisms(identity_morphism(x), reversal_map(x)),
        right=bang(x),
        name=f"ε_{x.name}",
    )


def snake_composites(x: RGraph) -> tuple[Span, Span]:
    """(1_X ⊗ η_X) • (ε_X ⊗ 1_X) on X, and (η_X ⊗ 1_X^-1) • (1_X^-1 ⊗ ε_X) on X^-1."""
    x_rev = reverse(x)
    first = compose_spans(tensor_spans(identity_span(x), eta(x)), tensor_spans(epsilon(x), identity_span(x)))
    second = compose_spans(
        tensor_spans(eta(x), identity_span(x_rev)), tensor_spans(identity_span(x_rev), epsilon(x))
    )
    return first, second


def lower_star(f: GraphMorphism) -> Span:
    """f_* = (1, f) : X -> Y."""
    return Span(head=f.dom, left=identity_morphism(f.dom), right=f, name="f_*")


def upper_star(f: GraphMorphism) -> Span:
    """f^* = (f, 1) : Y -> X."""
    return Span(head=f.dom, left=f, right=identity_morphism(f.dom), name="f^*")


def identity_two_cell(r: Span) -> TwoCell:
    return TwoCell(src=r, tgt=r, map=identity_morphism(r.head))


def vertical_compose(phi: TwoCell, psi: TwoCell) -> TwoCell:
    """phi · psi, phi first."""
    if phi.tgt != psi.src:
        raise BoundaryMismatch("Vertical composition needs the target of the first 2-cell to be the source of the second")
    return TwoCell(src=phi.src, tgt=psi.tgt, map=compose_morphisms(phi.map, psi.map))


def horizontal_compose(phi: TwoCell, psi: TwoCell) -> TwoCell:
    """phi • psi, induced on the pullback heads."""
    src = compose_spans(phi.src, psi.src)
    tgt = compose_spans(phi.tgt, psi.tgt)
    induced = _pair_morphism(
        src.head,
        tgt.head,
        lambda v: (phi.map.vmap[v[0]], psi.map.vmap[v[1]]),
        lambda e: (phi.map.emap[e[0]], psi.map.emap[e[1]]),
    )
    return TwoCell(src=src, tgt=tgt, map=induced)


def tensor_two_cells(phi: TwoCell, psi: TwoCell) -> TwoCell:
    return TwoCell(
        src=tensor_spans(phi.src, psi.src),
        tgt=tensor_spans(phi.tgt, psi.tgt),
        map=product_morphism(phi.map, psi.map),
    )


def left_unitor(r: Span) -> TwoCell:
    src = compose_spans(identity_span(r.dom), r)
    return TwoCell(src=src, tgt=r, map=_pair_morphism(src.head, r.head, lambda v: v[1], lambda e: e[1]))


def left_unitor_inverse(r: Span) -> TwoCell:
    tgt = compose_spans(identity_span(r.dom), r)
    return TwoCell(
        src=r,
        tgt=tgt,
        map=_pair_morphism(r.head, tgt.head, lambda v: (r.left.vmap[v], v), lambda e: (r.left.emap[e], e)),
    )


def right_unitor(r: Span) -> TwoCell:
    src = compose_spans(r, identity_span(r.cod))
    return TwoCell(src=src, tgt=r, map=_pair_morphism(src.head, r.head, lambda v: v[0], lambda e: e[0]))


def right_unitor_inverse(r: Span) -> TwoCell:
    tgt = compose_spans(r, identity_span(r.cod))
    return TwoCell(
        src=r,
        tgt=tgt,
        map=_pair_morphism(r.head, tgt.head, lambda v: (v, r.right.vmap[v]), lambda e: (e, r.right.emap[e])),
    )


def associator(r: Span, s: Span, t: Span) -> TwoCell:
    """(R•S)•T -> R•(S•T)."""
    src = compose_spans(compose_spans(r, s), t)
    tgt = compose_spans(r, compose_spans(s, t))
    def reassociate(x):
        return x[0][0], (x[0][1], x[1])

    return TwoCell(src=src, tgt=tgt, map=_pair_morphism(src.head, tgt.head, reassociate, reassociate))


def associator_inverse(r: Span, s: Span, t: Span) -> TwoCell:
    src = compose_spans(r, compose_spans(s, t))
    tgt = compose_spans(compose_spans(r, s), t)
    def reassociate(x):
        return (x[0], x[1][0]), x[1][1]

    return TwoCell(src=src, tgt=tgt, map=_pair_morphism(src.head, tgt.head, reassociate, reassociate))


def adjunction_unit(f: GraphMorphism) -> TwoCell:
    """1_X -> f_* • f^*, x |-> (x, x)."""
    src = identity_span(f.dom)
    tgt = compose_spans(lower_star(f), upper_star(f))
    return TwoCell(src=src, tgt=tgt, map=_pair_morphism(src.head, tgt.head, lambda v: (v, v), lambda e: (e, e)))


def adjunction_counit(f: GraphMorphism) -> TwoCell:
    """f^* • f_* -> 1_Y, (x, x) |-> f(x)."""
    src = compose_spans(upper_star(f), lower_star(f))
    tgt = identity_span(f.cod)
    return TwoCell(
        src=src,
        tgt=tgt,
        map=_pair_morphism(src.head, tgt.head, lambda v: f.vmap[v[0]], lambda e: f.emap[e[0]]),
    )


def triangle_identities(f: GraphMorphism) -> tuple[bool, bool]:
    """Both triangle identities of f_* ⊣ f^*, routed through the unitors and associator."""
    lower, upper = lower_star(f), upper_star(f)
    unit, counit = adjunction_unit(f), adjunction_counit(f)

    first = left_unitor_inverse(lower)
    for step in (
        horizontal_compose(unit, identity_two_cell(lower)),
        associator(lower, upper, lower),
        horizontal_compose(identity_two_cell(lower), counit),
        right_unitor(lower),
    ):
        first = vertical_compose(first, step)

    second = right_unitor_inverse(upper)
    for step in (
        horizontal_compose(identity_two_cell(upper), unit),
        associator_inverse(upper, lower, upper),
        horizontal_compose(counit, identity_two_cell(upper)),
        left_unitor(upper),
    ):
        second = vertical_compose(second, step)

    return first == identity_two_cell(lower), second == identity_two_cell(upper)


def transpose(phi: TwoCell, r: Span, s: Span, f: GraphMorphism, g: GraphMorphism) -> GraphMorphism:
    """Turn phi : R • g_* -> f_* • S into the head morphism R -> S it determines."""
    if r.dom != f.dom or r.cod != g.dom or s.dom != f.cod or s.cod != g.cod:
        raise TransposeShapeError("Spans and morphisms do not fit the square R, S, f, g")
    if phi.src != compose_spans(r, lower_star(g)) or phi.tgt != compose_spans(lower_star(f), s):
        raise TransposeShapeError("2-cell is not of the shape R • g_* -> f_* • S")

    return GraphMorphism(
        dom=r.head,
        cod=s.head,
        vmap={v: phi.map.vmap[(v, r.right.vmap[v])][1] for v in r.head.vertices},
        emap={e.id: phi.map.emap[(e.id, r.right.emap[e.id])][1] for e in r.head.edges},
    )


def untranspose(phi_prime: GraphMorphism, r: Span, s: Span, f: GraphMorphism, g: GraphMorphism) -> TwoCell:
    """Inverse of ``transpose``; phi_prime must satisfy ∂0 phi' = f ∂0 and ∂1 phi' = g ∂1."""
    if phi_prime.dom != r.head or phi_prime.cod != s.head:
        raise TransposeShapeError("Morphism must go from the head of R to the head of S")
    if compose_morphisms(phi_prime, s.left) != compose_morphisms(r.left, f):
        raise TwoCellError("Left boundary condition ∂0 φ' = f ∂0 fails")
    if compose_morphisms(phi_prime, s.right) != compose_morphisms(r.right, g):
        raise TwoCellError("Right boundary condition ∂1 φ' = g ∂1 fails")

    src = compose_spans(r, lower_star(g))
    tgt = compose_spans(lower_star(f), s)
    induced = _pair_morphism(
        src.head,
        tgt.head,
        lambda v: (r.left.vmap[v[0]], phi_prime.vmap[v[0]]),
        lambda e: (r.left.emap[e[0]], phi_prime.emap[e[0]]),
    )
    return TwoCell(src=src, tgt=tgt, map=induced)


def _labelled_multigraph(r: Span) -> nx.MultiDiGraph:
    graph = nx.MultiDiGraph()
    for v in r.head.vertices:
        graph.add_node(v, label=(r.left.vmap[v], r.right.vmap[v]))
    for e in r.head.edges:
        graph.add_edge(e.source, e.target, key=e.id, label=(r.left.emap[e.id], r.right.emap[e.id], e.is_null))
    return graph


def _multiedge_labels_match(edges1: dict, edges2: dict) -> bool:
    return Counter(data["label"] for data in edges1.values()) == Counter(data["label"] for data in edges2.values())


def iso_spans(r: Span, s: Span, bound: int = cst.ISO_SEARCH_BOUND) -> TwoCell | None:
    """Find an invertible 2-cell R -> S, or None when the spans are not isomorphic."""
    if r.dom != s.dom or r.cod != s.cod:
        return None
    size = max(len(r.head.vertices), len(s.head.vertices))
    if size > bound:
        raise IsoSearchLimitExceeded(size, bound)
    if len(r.head.vertices) != len(s.head.vertices) or len(r.head.edges) != len(s.head.edges):
        return None

    matcher = isomorphism.MultiDiGraphMatcher(
        _labelled_multigraph(r),
        _labelled_multigraph(s),
        node_match=isomorphism.categorical_node_match("label", None),
        edge_match=_multiedge_labels_match,
    )
    if not matcher.is_isomorphic():
        return None
    vmap = dict(matcher.mapping)

    buckets = defaultdict(list)
    for e in s.head.edges:
        buckets[(e.source, e.target, s.left.emap[e.id], s.right.emap[e.id], e.is_null)].append(e.id)
    emap = {}
    for e in r.head.edges:
        key = (vmap[e.source], vmap[e.target], r.left.emap[e.id], r.right.emap[e.id], e.is_null)
        emap[e.id] = buckets[key].pop(0)

    return TwoCell(src=r, tgt=s, map=GraphMorphism(dom=r.head, cod=s.head, vmap=vmap, emap=emap))

"""Finite reflexive graphs and their morphisms.

Products are kept strict: a product of k >= 2 plain graphs has k-tuples as ids,
the terminal graph is the empty product and a one-factor product is the factor
itself. With that convention ``product`` is associative and unital on the nose,
so spans over products compose without reassociation.
"""

import itertools
from collections.abc import Hashable
from collections.abc import Iterable
from collections.abc import Mapping
from dataclasses import dataclass
from dataclasses import field
from dataclasses import replace
from functools import cached_property
from types import MappingProxyType

from logging_utils import get_logger

import core.constants as cst
from core.exceptions import GraphError
from core.exceptions import MorphismError


logger = get_logger(__name__)


@dataclass(frozen=True)
class Edge:
    id: Hashable
    source: Hashable
    target: Hashable
    is_null: bool = False


@dataclass(frozen=True)
class RGraph:
    vertices: tuple
    edges: tuple[Edge, ...]
    name: str = field(default="", compare=False)
    polarity: int = 1
    # None for a plain graph, () for the terminal graph, the factors of a product otherwise
    components: tuple["RGraph", ...] | None = None

    def __post_init__(self):
        if len(set(self.vertices)) != len(self.vertices):
            raise GraphError(f"Duplicate vertex id in graph {self.name!r}")
        vertex_set = set(self.vertices)
        seen_edges = set()
        nulls: dict = {}
        for edge in self.edges:
            if edge.id in seen_edges:
                raise GraphError(f"Duplicate edge id {format_id(edge.id)} in graph {self.name!r}")
            seen_edges.add(edge.id)
            if edge.source not in vertex_set or edge.target not in vertex_set:
                raise GraphError(
                    f"Dangling endpoint on edge {format_id(edge.id)}: "
                    f"{format_id(edge.source)} -> {format_id(edge.target)}"
                )
            if edge.is_null:
                if edge.source != edge.target:
                    raise GraphError(f"Null loop {format_id(edge.id)} is not a loop")
                if edge.source in nulls:
                    raise GraphError(f"Vertex {format_id(edge.source)} has two null loops")
                nulls[edge.source] = edge.id
        missing = [v for v in self.vertices if v not in nulls]
        if missing:
            raise GraphError(f"Vertices without a null loop: {', '.join(format_id(v) for v in missing)}")
        if self.polarity not in (1, -1):
            raise GraphError(f"Polarity must be +1 or -1, got {self.polarity}")

    @cached_property
    def edge_index(self) -> dict[Hashable, Edge]:
        return {edge.id: edge for edge in self.edges}

    @cached_property
    def null_of(self) -> dict[Hashable, Hashable]:
        return {edge.source: edge.id for edge in self.edges if edge.is_null}

    @cached_property
    def out_edges(self) -> dict[Hashable, tuple[Edge, ...]]:
        outgoing: dict[Hashable, list[Edge]] = {v: [] for v in self.vertices}
        for edge in self.edges:
            outgoing[edge.source].append(edge)
        return {v: tuple(edges) for v, edges in outgoing.items()}

    def edge(self, edge_id: Hashable) -> Edge:
        try:
            return self.edge_index[edge_id]
        except KeyError:
            raise GraphError(f"Unknown edge {format_id(edge_id)} in graph {self.name!r}") from None

    @property
    def non_null_edges(self) -> tuple[Edge, ...]:
        return tuple(edge for edge in self.edges if not edge.is_null)

    @property
    def arity(self) -> int:
        if self.components is None:
            return 1
        return len(self.components)

    @property
    def factors(self) -> tuple["RGraph", ...]:
        if self.components is None:
            return (self,)
        return self.components


@dataclass(frozen=True)
class GraphMorphism:
    dom: RGraph
    cod: RGraph
    vmap: Mapping = field(hash=False)
    emap: Mapping = field(hash=False)

    def __post_init__(self):
        object.__setattr__(self, "vmap", MappingProxyType(dict(self.vmap)))
        object.__setattr__(self, "emap", MappingProxyType(dict(self.emap)))
        self._validate()

    def _validate(self):
        cod_vertices = set(self.cod.vertices)
        for v in self.dom.vertices:
            if v not in self.vmap:
                raise MorphismError(f"Vertex map is not total: {format_id(v)} has no image")
            if self.vmap[v] not in cod_vertices:
                raise MorphismError(f"Vertex {format_id(v)} maps outside the codomain")
        for edge in self.dom.edges:
            if edge.id not in self.emap:
                raise MorphismError(f"Edge map is not total: {format_id(edge.id)} has no image")
            image = self.cod.edge_index.get(self.emap[edge.id])
            if image is None:
                raise MorphismError(f"Edge {format_id(edge.id)} maps outside the codomain")
            if image.source != self.vmap[edge.source] or image.target != self.vmap[edge.target]:
                raise MorphismError(f"Edge {format_id(edge.id)} is not mapped compatibly with its endpoints")
            if edge.is_null and not image.is_null:
                raise MorphismError(f"Null loop {format_id(edge.id)} is not mapped to a null loop")

    def __call__(self, vertex: Hashable) -> Hashable:
        return self.vmap[vertex]

    def on_edge(self, edge_id: Hashable) -> Hashable:
        return self.emap[edge_id]


def format_id(x: Hashable) -> str:
    if x == ():
        return cst.TERMINAL_LABEL
    if isinstance(x, tuple):
        return "(" + ",".join(format_id(part) for part in x) + ")"
    return str(x)


def null_edge_id(vertex: Hashable) -> str:
    return f"{cst.NULL_PREFIX}{format_id(vertex)}"


def make_graph(vertices: Iterable[Hashable], non_null_edges: Iterable = (), name: str = "") -> RGraph:
    """Build a reflexive graph, synthesizing one null loop per vertex.

    ``non_null_edges`` holds ``(id, source, target)`` triples; null loops are never passed in.
    """
    vertices = tuple(vertices)
    vertex_set = set(vertices)
    if len(vertex_set) != len(vertices):
        raise GraphError(f"Duplicate vertex id in graph {name!r}")

    edges: list[Edge] = [Edge(null_edge_id(v), v, v, True) for v in vertices]
    for edge_id, source, target in non_null_edges:
        if isinstance(edge_id, str) and edge_id.startswith(cst.NULL_PREFIX):
            raise GraphError(f"Edge id {edge_id!r} uses the reserved null-loop prefix {cst.NULL_PREFIX!r}")
        for endpoint in (source, target):
            if endpoint not in vertex_set:
                raise GraphError(f"Dangling endpoint {format_id(endpoint)} on edge {format_id(edge_id)}")
        edges.append(Edge(edge_id, source, target, False))
    return RGraph(vertices=vertices, edges=tuple(edges), name=name)


def terminal() -> RGraph:
    return RGraph(vertices=((),), edges=(Edge((), (), (), True),), name="I", components=())


def _to_parts(g: RGraph, x: Hashable) -> tuple:
    return (x,) if g.arity == 1 else x


def _from_parts(parts: tuple) -> Hashable:
    return parts[0] if len(parts) == 1 else tuple(parts)


def join_id(g: RGraph, h: RGraph, x: Hashable, y: Hashable) -> Hashable:
    """The id of the pair (x, y) in ``product(g, h)``."""
    return _from_parts(_to_parts(g, x) + _to_parts(h, y))


def split_id(g: RGraph, h: RGraph, xy: Hashable) -> tuple[Hashable, Hashable]:
    """Inverse of ``join_id``."""
    k = g.arity
    parts = (xy,) if g.arity + h.arity == 1 else xy
    return _from_parts(parts[:k]), _from_parts(parts[k:])


def product(g: RGraph, h: RGraph) -> RGraph:
    factors = g.factors + h.factors
    if not factors:
        return terminal()
    if len(factors) == 1:
        return factors[0]

    vertices = tuple(join_id(g, h, u, v) for u in g.vertices for v in h.vertices)
    edges = tuple(
        Edge(
            id=join_id(g, h, e.id, f.id),
            source=join_id(g, h, e.source, f.source),
            target=join_id(g, h, e.target, f.target),
            is_null=e.is_null and f.is_null,
        )
        for e in g.edges
        for f in h.edges
    )
    return RGraph(vertices=vertices, edges=edges, name=f"{g.name}×{h.name}", components=factors)


def reverse(g: RGraph) -> RGraph:
    """X^-1: the same data, polarity flipped factor by factor."""
    if g.components is None:
        name = g.name[:-3] if g.name.endswith("^-1") else f"{g.name}^-1"
        return replace(g, polarity=-g.polarity, name=name)
    if not g.components:
        return g
    return replace(g, components=tuple(reverse(c) for c in g.components))


def make_morphism(dom: RGraph, cod: RGraph, vmap: Mapping, emap: Mapping | None = None) -> GraphMorphism:
    """Build a morphism, filling in images of null loops that ``emap`` leaves out."""
    full_emap = dict(emap or {})
    for edge in dom.edges:
        if edge.is_null and edge.id not in full_emap and edge.source in vmap:
            image = vmap[edge.source]
            if image in cod.null_of:
                full_emap[edge.id] = cod.null_of[image]
    return GraphMorphism(dom=dom, cod=cod, vmap=vmap, emap=full_emap)


def identity_morphism(g: RGraph) -> GraphMorphism:
    return GraphMorphism(
        dom=g,
        cod=g,
        vmap={v: v for v in g.vertices},
        emap={e.id: e.id for e in g.edges},
    )


def compose_morphisms(f: GraphMorphism, g: GraphMorphism) -> GraphMorphism:
    """f followed by g."""
    if f.cod != g.dom:
        raise MorphismError(f"Cannot compose: codomain {f.cod.name!r} differs from domain {g.dom.name!r}")
    return GraphMorphism(
        dom=f.dom,
        cod=g.cod,
        vmap={v: g.vmap[f.vmap[v]] for v in f.dom.vertices},
        emap={e.id: g.emap[f.emap[e.id]] for e in f.dom.edges},
    )


def bang(g: RGraph) -> GraphMorphism:
    unit = terminal()
    null = unit.edges[0].id
    return GraphMorphism(
        dom=g,
        cod=unit,
        vmap={v: () for v in g.vertices},
        emap={e.id: null for e in g.edges},
    )


def pair_morphisms(f: GraphMorphism, g: GraphMorphism) -> GraphMorphism:
    """The pairing <f, g> into ``product(f.cod, g.cod)``."""
    if f.dom != g.dom:
        raise MorphismError("Pairing needs morphisms with a common domain")
    return GraphMorphism(
        dom=f.dom,
        cod=product(f.cod, g.cod),
        vmap={v: join_id(f.cod, g.cod, f.vmap[v], g.vmap[v]) for v in f.dom.vertices},
        emap={e.id: join_id(f.cod, g.cod, f.emap[e.id], g.emap[e.id]) for e in f.dom.edges},
    )


def diagonal(g: RGraph) -> GraphMorphism:
    identity = identity_morphism(g)
    return pair_morphisms(identity, identity)


def projections(g: RGraph, h: RGraph) -> tuple[GraphMorphism, GraphMorphism]:
    gh = product(g, h)
    first = GraphMorphism(
        dom=gh,
        cod=g,
        vmap={v: split_id(g, h, v)[0] for v in gh.vertices},
        emap={e.id: split_id(g, h, e.id)[0] for e in gh.edges},
    )
    second = GraphMorphism(
        dom=gh,
        cod=h,
        vmap={v: split_id(g, h, v)[1] for v in gh.vertices},
        emap={e.id: split_id(g, h, e.id)[1] for e in gh.edges},
    )
    return first, second


def product_morphism(f: GraphMorphism, g: GraphMorphism) -> GraphMorphism:
    dom = product(f.dom, g.dom)

    def image(x, on_vertices: bool):
        a, b = split_id(f.dom, g.dom, x)
        if on_vertices:
            return join_id(f.cod, g.cod, f.vmap[a], g.vmap[b])
        return join_id(f.cod, g.cod, f.emap[a], g.emap[b])

    return GraphMorphism(
        dom=dom,
        cod=product(f.cod, g.cod),
        vmap={v: image(v, True) for v in dom.vertices},
        emap={e.id: image(e.id, False) for e in dom.edges},
    )


def reversal_map(g: RGraph) -> GraphMorphism:
    """The identity on data, viewed as a morphism g -> g^-1."""
    return GraphMorphism(
        dom=g,
        cod=reverse(g),
        vmap={v: v for v in g.vertices},
        emap={e.id: e.id for e in g.edges},
    )


def format_graph(g: RGraph) -> str:
    vertices = ", ".join(format_id(v) for v in g.vertices)
    edges = ", ".join(
        f"{format_id(e.id)}: {format_id(e.source)} -> {format_id(e.target)}" for e in g.non_null_edges
    )
    body = f"vertices: {vertices};"
    if edges:
        body += f" edges: {edges};"
    return f"graph {g.name or 'G'} {{ {body} }}"


def enumerate_morphisms(dom: RGraph, cod: RGraph, limit: int | None = None) -> list[GraphMorphism]:
    """Every reflexive graph morphism dom -> cod, vertex maps in lexicographic order."""
    found: list[GraphMorphism] = []
    edges_between: dict[tuple, list[Hashable]] = {}
    for edge in cod.edges:
        edges_between.setdefault((edge.source, edge.target), []).append(edge.id)

    for images in itertools.product(cod.vertices, repeat=len(dom.vertices)):
        vmap = dict(zip(dom.vertices, images))
        choices = [edges_between.get((vmap[e.source], vmap[e.target]), []) for e in dom.non_null_edges]
        for chosen in itertools.product(*choices):
            emap = {e.id: cod.null_of[vmap[e.source]] for e in dom.edges if e.is_null}
            emap.update({e.id: image for e, image in zip(dom.non_null_edges, chosen)})
            found.append(GraphMorphism(dom=dom, cod=cod, vmap=vmap, emap=emap))
            if limit is not None and len(found) >= limit:
                return found
    return found

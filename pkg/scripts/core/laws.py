"""Seeded random instances and the executable laws checked by ``check-laws``.

Every law draws its instances from its own ``random.Random`` seeded with the run
seed and the law name, so reports are reproducible and laws can be rerun one by one.
"""

import random
from collections import defaultdict
from collections.abc import Callable

from logging_utils import get_logger

from core.accounts import Atom
from core.accounts import Compose
from core.accounts import Expression
from core.accounts import GeneralAccount
from core.accounts import Identity
from core.accounts import Tensor
from core.accounts import Unit
from core.accounts import check_total_value
from core.accounts import eval_expression
from core.accounts import make_object
from core.accounts import reverse_object
from core.accounts import unit_object
from core.behaviour import check_composite_behaviours
from core.behaviour import check_epsilon_behaviours
from core.behaviour import check_eta_behaviours
from core.behaviour import check_tensor_behaviours
from core.exceptions import PartitaError
from core.models.config_models import LawCheckConfig
from core.models.report_models import CheckResult
from core.models.report_models import CheckStatus
from core.models.report_models import LawReport
from core.rgraph import GraphMorphism
from core.rgraph import RGraph
from core.rgraph import bang
from core.rgraph import compose_morphisms
from core.rgraph import enumerate_morphisms
from core.rgraph import format_id
from core.rgraph import identity_morphism
from core.rgraph import make_graph
from core.rgraph import make_morphism
from core.rgraph import product
from core.rgraph import projections
from core.rgraph import reverse
from core.span import Span
from core.span import compose_spans
from core.span import identity_span
from core.span import iso_spans
from core.span import snake_composites
from core.span import transpose
from core.span import triangle_identities
from core.span import untranspose
from core.stdaccount import Signature


logger = get_logger(__name__)


def random_graph(rng: random.Random, max_vertices: int, max_edges: int, name: str = "G") -> RGraph:
    vertices = [f"v{i}" for i in range(rng.randint(1, max_vertices))]
    edges = [(f"e{j}", rng.choice(vertices), rng.choice(vertices)) for j in range(rng.randint(0, max_edges))]
    return make_graph(vertices, edges, name)


def random_morphism_into(
    rng: random.Random, cod: RGraph, max_vertices: int, max_edges: int, name: str = "A"
) -> GraphMorphism:
    """A fresh random graph together with a random morphism from it into ``cod``."""
    vertices = [f"a{i}" for i in range(rng.randint(1, max_vertices))]
    vmap = {v: rng.choice(cod.vertices) for v in vertices}
    fibres = defaultdict(list)
    for v in vertices:
        fibres[vmap[v]].append(v)

    wanted = rng.randint(0, max_edges)
    edges, emap = [], {}
    for _ in range(4 * max_edges):
        if len(edges) >= wanted:
            break
        image = rng.choice(cod.edges)
        sources, targets = fibres.get(image.source), fibres.get(image.target)
        if not sources or not targets:
            continue
        edge_id = f"d{len(edges)}"
        edges.append((edge_id, rng.choice(sources), rng.choice(targets)))
        emap[edge_id] = image.id
    return make_morphism(make_graph(vertices, edges, name), cod, vmap, emap)


def random_span(rng: random.Random, dom: RGraph, cod: RGraph, max_vertices: int, max_edges: int) -> Span:
    joint = random_morphism_into(rng, product(dom, cod), max_vertices, max_edges, name="R")
    first, second = projections(dom, cod)
    return Span(
        head=joint.dom,
        left=compose_morphisms(joint, first),
        right=compose_morphisms(joint, second),
        name="R",
    )


def random_composable_pair(rng: random.Random, max_vertices: int, max_edges: int) -> tuple[Span, Span]:
    x, y, z = (random_graph(rng, max_vertices, max_edges, name) for name in "XYZ")
    return random_span(rng, x, y, max_vertices, max_edges), random_span(rng, y, z, max_vertices, max_edges)


def random_transpose_instance(rng: random.Random, max_vertices: int, max_edges: int):
    """(φ', R, S, f, g) with ∂0 φ' = f ∂0 and ∂1 φ' = g ∂1.

    Each side of R either is the head itself (with f the composite through S) or
    shares S's boundary (with f the identity).
    """
    x, y = random_graph(rng, max_vertices, max_edges, "X"), random_graph(rng, max_vertices, max_edges, "Y")
    s = random_span(rng, x, y, max_vertices, max_edges)
    phi_prime = random_morphism_into(rng, s.head, max_vertices, max_edges)
    head = phi_prime.dom

    def side(leg: GraphMorphism) -> tuple[GraphMorphism, GraphMorphism]:
        through = compose_morphisms(phi_prime, leg)
        if rng.random() < 0.5:
            return identity_morphism(head), through
        return through, identity_morphism(leg.cod)

    r_left, f = side(s.left)
    r_right, g = side(s.right)
    return phi_prime, Span(head=head, left=r_left, right=r_right, name="R"), s, f, g


def random_closed_system(rng: random.Random, max_vertices: int, max_edges: int, bound: int) -> Expression:
    """Two accounts exchanging value over one wire, closed by a feedback loop.

    The first account is measured on the wire directly; the second watches the
    reversed wire through a random morphism and mirrors the first's values.
    """
    r = random_graph(rng, max_vertices, max_edges, "R")
    values = {v: rng.randint(-bound, bound) for v in r.vertices}
    labels = {}
    for edge in r.non_null_edges:
        change = values[edge.target] - values[edge.source]
        labels[edge.id] = (max(change, 0), max(-change, 0))
    wire = make_object(r, Signature((("in", 1), ("out", -1))), labels, name="Wire")
    producer = GeneralAccount(
        dom=wire,
        cod=unit_object(),
        span=Span(head=r, left=identity_morphism(r), right=bang(r), name="producer"),
        valuation=values,
        name="producer",
    )

    watch = random_morphism_into(rng, reverse(r), max_vertices, max_edges, name="M")
    offset = rng.randint(-bound, bound)
    mirror = GeneralAccount(
        dom=reverse_object(wire),
        cod=unit_object(),
        span=Span(head=watch.dom, left=watch, right=bang(watch.dom), name="mirror"),
        valuation={v: offset - values[watch.vmap[v]] for v in watch.dom.vertices},
        name="mirror",
    )
    return Compose(
        Compose(Unit(wire), Tensor(Identity(reverse_object(wire)), Atom(producer, "producer"))),
        Atom(mirror, "mirror"),
    )


def _brute_force_pullback(r: Span, s: Span) -> tuple[set, set]:
    vertices = {
        (vr, vs)
        for vr in r.head.vertices
        for vs in s.head.vertices
        if r.right.vmap[vr] == s.left.vmap[vs]
    }
    edges = {
        ((er.id, es.id), (er.source, es.source), (er.target, es.target), er.is_null and es.is_null)
        for er in r.head.edges
        for es in s.head.edges
        if r.right.emap[er.id] == s.left.emap[es.id]
    }
    return vertices, edges


def _pullback_instance(rng: random.Random, config: LawCheckConfig) -> str | None:
    r, s = random_composable_pair(rng, config.max_vertices, config.max_edges)
    composite = compose_spans(r, s)
    vertices, edges = _brute_force_pullback(r, s)
    found_edges = {(e.id, e.source, e.target, e.is_null) for e in composite.head.edges}
    if set(composite.head.vertices) != vertices or found_edges != edges:
        return f"pullback of {len(r.head.vertices)}x{len(s.head.vertices)} heads differs from pair enumeration"
    for v in composite.head.vertices:
        if composite.left.vmap[v] != r.left.vmap[v[0]] or composite.right.vmap[v] != s.right.vmap[v[1]]:
            return f"legs of the composite disagree at {format_id(v)}"
    return None


def _snake_instance(rng: random.Random, config: LawCheckConfig) -> str | None:
    x = random_graph(rng, config.max_vertices, config.max_edges, "X")
    first, second = snake_composites(x)
    if iso_spans(first, identity_span(x)) is None:
        return f"(1⊗η)•(ε⊗1) is not the identity on {len(x.vertices)} vertices, {len(x.non_null_edges)} edges"
    if iso_spans(second, identity_span(reverse(x))) is None:
        return f"(η⊗1)•(1⊗ε) is not the identity on {len(x.vertices)} vertices, {len(x.non_null_edges)} edges"
    return None


def _transpose_instance(rng: random.Random, config: LawCheckConfig) -> str | None:
    phi_prime, r, s, f, g = random_transpose_instance(rng, config.max_vertices, config.max_edges)
    cell = untranspose(phi_prime, r, s, f, g)
    back = transpose(cell, r, s, f, g)
    if back != phi_prime:
        return "transpose(untranspose(φ')) != φ'"
    if untranspose(back, r, s, f, g) != cell:
        return "untranspose(transpose(φ)) != φ"
    return None


def _behaviour_instance(check: Callable) -> Callable:
    def run(rng: random.Random, config: LawCheckConfig) -> str | None:
        report = check(rng, config)
        return None if report.passed else report.witness

    return run


def _composite_behaviours(rng, config):
    r, s = random_composable_pair(rng, config.behaviour_max_vertices, config.behaviour_max_edges)
    return check_composite_behaviours(r, s, config.max_len)


def _tensor_behaviours(rng, config):
    r, s = random_composable_pair(rng, config.behaviour_max_vertices, config.behaviour_max_edges)
    return check_tensor_behaviours(r, s, config.max_len)


def _feedback_behaviours(rng, config):
    x = random_graph(rng, config.behaviour_max_vertices, config.behaviour_max_edges, "X")
    report = check_eta_behaviours(x, config.max_len)
    return check_epsilon_behaviours(x, config.max_len) if report.passed else report


def _triangle_instance(rng: random.Random, config: LawCheckConfig) -> str | None:
    g = random_graph(rng, config.triangle_max_vertices, config.triangle_max_edges, "X")
    h = random_graph(rng, config.triangle_max_vertices, config.triangle_max_edges, "Y")
    for f in enumerate_morphisms(g, h):
        first, second = triangle_identities(f)
        if not (first and second):
            which = "first" if not first else "second"
            return f"{which} triangle identity fails for vertex map {dict(f.vmap)}"
    return None


def _closed_system_instance(rng: random.Random, config: LawCheckConfig) -> str | None:
    expression = random_closed_system(
        rng, config.closed_system_max_vertices, config.max_edges, config.value_bound
    )
    report = check_total_value(eval_expression(expression), config.closed_system_max_len)
    return None if report.passed else report.witness


LAWS: list[tuple[str, str, Callable]] = [
    ("pullback_oracle", "pullback_instances", _pullback_instance),
    ("snake_equations", "snake_instances", _snake_instance),
    ("transpose_roundtrip", "transpose_instances", _transpose_instance),
    ("behaviour_composite", "behaviour_instances", _behaviour_instance(_composite_behaviours)),
    ("behaviour_tensor", "behaviour_instances", _behaviour_instance(_tensor_behaviours)),
    ("behaviour_feedback", "behaviour_instances", _behaviour_instance(_feedback_behaviours)),
    ("triangle_identities", "triangle_instances", _triangle_instance),
    ("total_value_invariance", "closed_system_instances", _closed_system_instance),
]


def check_law(name: str, config: LawCheckConfig) -> CheckResult:
    _, count_field, instance = next(law for law in LAWS if law[0] == name)
    rng = random.Random(f"{config.seed}:{name}")
    count = getattr(config, count_field)
    for index in range(count):
        try:
            witness = instance(rng, config)
        except PartitaError as error:
            witness = f"{type(error).__name__}: {error}"
        if witness is not None:
            logger.warning(f"{name} failed on instance {index}: {witness}")
            return CheckResult(
                name=name, status=CheckStatus.FAIL, checked=index, counterexample=f"instance {index}: {witness}"
            )
    logger.info(f"{name} passed on {count} instances")
    return CheckResult(name=name, status=CheckStatus.PASS, checked=count)


def run_laws(config: LawCheckConfig | None = None) -> LawReport:
    config = config or LawCheckConfig()
    report = LawReport(seed=config.seed)
    for name, _, _ in LAWS:
        report.results.append(check_law(name, config))
    return report

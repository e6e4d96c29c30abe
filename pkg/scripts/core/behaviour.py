"""Behaviours of spans: finite paths in the head and their images on the boundaries."""

from collections import defaultdict
from collections.abc import Hashable
from dataclasses import dataclass
from dataclasses import field

from logging_utils import get_logger

from core.exceptions import GraphError
from core.models.report_models import BehaviourReport
from core.rgraph import RGraph
from core.rgraph import format_id
from core.rgraph import reverse
from core.rgraph import split_id
from core.span import Span
from core.span import compose_spans
from core.span import epsilon
from core.span import eta
from core.span import tensor_spans


logger = get_logger(__name__)


@dataclass(frozen=True)
class Path:
    """A start vertex and a sequence of incident edge ids (null loops included).

    Paths are compared by start and steps only; the graph is carried for validation and projection.
    """

    graph: RGraph = field(compare=False, repr=False)
    start: Hashable
    steps: tuple = ()

    def __post_init__(self):
        if self.start not in self.graph.null_of:
            raise GraphError(f"Path starts at {format_id(self.start)}, which is not a vertex of {self.graph.name!r}")
        current = self.start
        for step in self.steps:
            edge = self.graph.edge(step)
            if edge.source != current:
                raise GraphError(f"Edge {format_id(step)} does not leave {format_id(current)}")
            current = edge.target

    def __len__(self) -> int:
        return len(self.steps)

    @property
    def end(self) -> Hashable:
        return self.graph.edge(self.steps[-1]).target if self.steps else self.start

    @property
    def states(self) -> tuple:
        return (self.start,) + tuple(self.graph.edge(step).target for step in self.steps)

    @property
    def key(self) -> tuple:
        return self.start, self.steps


def _breadth_first(g: RGraph, starts, max_len: int) -> list[Path]:
    if max_len < 0:
        raise ValueError("max_len must be non-negative")
    frontier = [(v, (), v) for v in starts]
    found = []
    for length in range(max_len + 1):
        found.extend(Path(g, first, steps) for first, steps, _ in frontier)
        if length == max_len:
            break
        frontier = [
            (first, steps + (edge.id,), edge.target) for first, steps, end in frontier for edge in g.out_edges[end]
        ]
    return found


def paths_from(g: RGraph, start: Hashable, max_len: int) -> tuple[Path, ...]:
    return tuple(_breadth_first(g, (start,), max_len))


def enumerate_paths(g: RGraph, max_len: int) -> tuple[Path, ...]:
    """All paths of length <= max_len, shortest first, then in vertex and edge declaration order."""
    found = _breadth_first(g, g.vertices, max_len)
    logger.debug(f"Enumerated {len(found)} paths of length <= {max_len} in {g.name!r}")
    return tuple(found)


def maximal_runs(g: RGraph, max_len: int) -> tuple[Path, ...]:
    """Paths of non-null steps that stop at max_len or where no non-null edge continues them."""
    if max_len < 1:
        return ()
    runs = []
    frontier = [(v, ()) for v in g.vertices if any(not e.is_null for e in g.out_edges[v])]
    while frontier:
        extended = []
        for start, steps in frontier:
            end = g.edge(steps[-1]).target if steps else start
            moves = [e for e in g.out_edges[end] if not e.is_null]
            if steps and (len(steps) == max_len or not moves):
                runs.append(Path(g, start, steps))
                continue
            extended.extend((start, steps + (e.id,)) for e in moves)
        frontier = extended
    return tuple(runs)


def project(s: Span, path: Path) -> tuple[Path, Path]:
    if path.graph != s.head:
        raise GraphError("Path does not live in the head of the span")
    left = Path(s.dom, s.left.vmap[path.start], tuple(s.left.emap[step] for step in path.steps))
    right = Path(s.cod, s.right.vmap[path.start], tuple(s.right.emap[step] for step in path.steps))
    return left, right


def _components(path: Path, first: RGraph, second: RGraph, split) -> tuple[Path, Path]:
    a_start, b_start = split(path.start)
    pairs = [split(step) for step in path.steps]
    return (
        Path(first, a_start, tuple(a for a, _ in pairs)),
        Path(second, b_start, tuple(b for _, b in pairs)),
    )


def check_composite_behaviours(r: Span, s: Span, max_len: int) -> BehaviourReport:
    """Paths of R • S are exactly the pairs of paths of R and S agreeing on the shared boundary."""
    composite = compose_spans(r, s)
    span_paths = enumerate_paths(composite.head, max_len)

    seen = set()
    for path in span_paths:
        rho, sigma = _components(path, r.head, s.head, lambda x: x)
        if project(r, rho)[1] != project(s, sigma)[0]:
            return _failed("composite", max_len, span_paths, seen, f"unsynchronized pair from {format_id(path.start)}")
        pair = (rho.key, sigma.key)
        if pair in seen:
            return _failed("composite", max_len, span_paths, seen, f"two composite paths give {pair!r}")
        seen.add(pair)

    by_boundary = defaultdict(list)
    for rho in enumerate_paths(r.head, max_len):
        by_boundary[project(r, rho)[1].key].append(rho)
    expected = {
        (rho.key, sigma.key)
        for sigma in enumerate_paths(s.head, max_len)
        for rho in by_boundary.get(project(s, sigma)[0].key, ())
    }
    if expected != seen:
        missing = next(iter(expected - seen), None)
        return _failed("composite", max_len, span_paths, seen, f"synchronized pair {missing!r} has no composite path")
    return BehaviourReport(
        proposition="composite", passed=True, max_len=max_len, span_paths=len(span_paths), matched_pairs=len(seen)
    )


def check_tensor_behaviours(r: Span, s: Span, max_len: int) -> BehaviourReport:
    """Paths of R ⊗ S are exactly the pairs of equally long paths of R and S."""
    tensor = tensor_spans(r, s)
    span_paths = enumerate_paths(tensor.head, max_len)

    def split(x):
        return split_id(r.head, s.head, x)

    seen = set()
    for path in span_paths:
        rho, sigma = _components(path, r.head, s.head, split)
        seen.add((rho.key, sigma.key))

    by_length = defaultdict(list)
    for sigma in enumerate_paths(s.head, max_len):
        by_length[len(sigma)].append(sigma)
    expected = {
        (rho.key, sigma.key) for rho in enumerate_paths(r.head, max_len) for sigma in by_length[len(rho)]
    }
    if expected != seen or len(seen) != len(span_paths):
        return _failed("tensor", max_len, span_paths, seen, "paths of the tensor differ from pairs of paths")
    return BehaviourReport(
        proposition="tensor", passed=True, max_len=max_len, span_paths=len(span_paths), matched_pairs=len(seen)
    )


def _check_feedback(span: Span, boundary: RGraph, other: RGraph, proposition: str, max_len: int) -> BehaviourReport:
    span_paths = enumerate_paths(span.head, max_len)
    for path in span_paths:
        left, right = project(span, path)
        trivial, doubled = (left, right) if proposition == "eta" else (right, left)
        if any(not trivial.graph.edge(step).is_null for step in trivial.steps):
            return _failed(proposition, max_len, span_paths, set(), "the unit boundary moved")
        first, second = _components(doubled, boundary, other, lambda x: split_id(boundary, other, x))
        if first.key != path.key or second.key != path.key:
            return _failed(proposition, max_len, span_paths, set(), f"path from {format_id(path.start)} not reflected equally")
    return BehaviourReport(
        proposition=proposition, passed=True, max_len=max_len, span_paths=len(span_paths), matched_pairs=len(span_paths)
    )


def check_eta_behaviours(x: RGraph, max_len: int) -> BehaviourReport:
    """Every path of η_X shows up, synchronously and equally, on both factors of X^-1 × X."""
    return _check_feedback(eta(x), reverse(x), x, "eta", max_len)


def check_epsilon_behaviours(x: RGraph, max_len: int) -> BehaviourReport:
    return _check_feedback(epsilon(x), x, reverse(x), "epsilon", max_len)


def _failed(proposition: str, max_len: int, span_paths, seen, witness: str) -> BehaviourReport:
    logger.warning(f"Behaviour check '{proposition}' failed: {witness}")
    return BehaviourReport(
        proposition=proposition,
        passed=False,
        max_len=max_len,
        span_paths=len(span_paths),
        matched_pairs=len(seen),
        witness=witness,
    )


def format_trace(s: Span, path: Path) -> str:
    """One line per step: ``step k: head_edge | left_boundary_edge | right_boundary_edge``."""
    left, right = project(s, path)
    return "\n".join(
        f"step {k}: {format_id(head)} | {format_id(l_edge)} | {format_id(r_edge)}"
        for k, (head, l_edge, r_edge) in enumerate(zip(path.steps, left.steps, right.steps), start=1)
    )

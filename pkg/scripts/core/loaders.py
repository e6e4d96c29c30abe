"""Text formats: graph literals, ledger specs, journals, expressions and system files.

Graph literal::

    graph G { vertices: a, b; edges: e: a -> b, f: b -> a; }

Expressions use ``;`` for composition and ``(x)`` for tensor (tensor binds tighter),
with ``id[O]``, ``eta[O]``, ``eps[O]`` and named accounts as atoms. Objects are
``I``, a name, ``~O`` for the reverse and ``O (x) P``. Expression files hold
declarations::

    expr main = (wallet (x) id[I]) ; shop
"""

import re
from collections.abc import Hashable
from collections.abc import Mapping
from dataclasses import dataclass
from dataclasses import field

import yaml
from logging_utils import get_logger
from pydantic import ValidationError

from core.accounts import AccountObject
from core.accounts import Atom
from core.accounts import Compose
from core.accounts import Counit
from core.accounts import Expression
from core.accounts import GeneralAccount
from core.accounts import Identity
from core.accounts import Tensor
from core.accounts import Unit
from core.accounts import make_general_account
from core.accounts import make_object
from core.accounts import reverse_object
from core.accounts import tensor_objects
from core.accounts import type_of
from core.accounts import unit_object
from core.exceptions import GraphError
from core.exceptions import MorphismError
from core.exceptions import ParseError
from core.ledger import make_ledger
from core.models.ledger_models import AccountKind
from core.models.ledger_models import Journal
from core.models.ledger_models import Ledger
from core.models.ledger_models import LedgerAccount
from core.models.ledger_models import Posting
from core.models.ledger_models import Transaction
from core.models.ledger_models import ZeroizeDirective
from core.models.ledger_models import ZeroizeTarget
from core.models.system_models import AccountSpec
from core.models.system_models import LegSpec
from core.models.system_models import SystemFile
from core.rgraph import GraphMorphism
from core.rgraph import RGraph
from core.rgraph import bang
from core.rgraph import make_graph
from core.rgraph import make_morphism
from core.span import Span
from core.stdaccount import Signature


logger = get_logger(__name__)


TOKEN_SPEC = [
    ("COMMENT", r"#[^\n]*"),
    ("NEWLINE", r"\n"),
    ("SKIP", r"[ \t\r]+"),
    ("TENSOR", r"\(x\)"),
    ("ARROW", r"->"),
    ("NAME", r"[A-Za-z0-9_][A-Za-z0-9_.']*"),
    ("PUNCT", r"[{}();:,\[\]~=]"),
    ("MISMATCH", r"."),
]
TOKEN_RE = re.compile("|".join(f"(?P<{kind}>{pattern})" for kind, pattern in TOKEN_SPEC))


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    line: int
    column: int


def tokenize(text: str, source: str = "<input>") -> list[Token]:
    tokens, line, line_start = [], 1, 0
    for match in TOKEN_RE.finditer(text):
        kind, value = match.lastgroup, match.group()
        column = match.start() - line_start + 1
        if kind == "NEWLINE":
            line, line_start = line + 1, match.end()
        elif kind == "MISMATCH":
            raise ParseError(f"unexpected character {value!r}", line, column, source)
        elif kind not in ("SKIP", "COMMENT"):
            tokens.append(Token(kind, value, line, column))
    tokens.append(Token("EOF", "", line, len(text) - line_start + 1))
    return tokens


class TokenStream:
    def __init__(self, text: str, source: str = "<input>"):
        self.tokens = tokenize(text, source)
        self.source = source
        self.position = 0

    def peek(self) -> Token:
        return self.tokens[self.position]

    def advance(self) -> Token:
        token = self.tokens[self.position]
        if token.kind != "EOF":
            self.position += 1
        return token

    def error(self, message: str, token: Token | None = None) -> ParseError:
        token = token or self.peek()
        return ParseError(message, token.line, token.column, self.source)

    def expect(self, text: str) -> Token:
        token = self.advance()
        if token.text != text:
            found = token.text or "end of input"
            raise self.error(f"expected '{text}', found '{found}'", token)
        return token

    def expect_name(self, what: str) -> Token:
        token = self.advance()
        if token.kind != "NAME":
            raise self.error(f"expected {what}, found '{token.text or 'end of input'}'", token)
        return token

    def accept(self, text: str) -> bool:
        if self.peek().text == text:
            self.advance()
            return True
        return False

    def expect_end(self):
        if self.peek().kind != "EOF":
            raise self.error(f"unexpected '{self.peek().text}'")


def _parse_graph_body(stream: TokenStream) -> RGraph:
    stream.expect("graph")
    name = stream.expect_name("a graph name").text
    stream.expect("{")
    stream.expect("vertices")
    stream.expect(":")

    vertices: list[str] = []
    while True:
        token = stream.expect_name("a vertex id")
        if token.text in vertices:
            raise stream.error(f"duplicate vertex id '{token.text}'", token)
        vertices.append(token.text)
        if not stream.accept(","):
            break
    stream.expect(";")

    edges: list[tuple[str, str, str]] = []
    if stream.accept("edges"):
        stream.expect(":")
        seen: set[str] = set()
        while stream.peek().kind == "NAME":
            edge_token = stream.advance()
            if edge_token.text in seen:
                raise stream.error(f"duplicate edge id '{edge_token.text}'", edge_token)
            seen.add(edge_token.text)
            stream.expect(":")
            ends = []
            for position, marker in enumerate(("source", "target")):
                if position:
                    stream.expect("->")
                end = stream.expect_name(f"a {marker} vertex")
                if end.text not in vertices:
                    raise stream.error(f"dangling endpoint '{end.text}' on edge '{edge_token.text}'", end)
                ends.append(end.text)
            edges.append((edge_token.text, ends[0], ends[1]))
            if not stream.accept(","):
                break
        stream.expect(";")
    stream.expect("}")
    try:
        return make_graph(vertices, edges, name)
    except GraphError as error:
        raise stream.error(str(error)) from error


def parse_graph(text: str, source: str = "<input>") -> RGraph:
    stream = TokenStream(text, source)
    graph = _parse_graph_body(stream)
    stream.expect_end()
    return graph


def parse_graphs(text: str, source: str = "<input>") -> list[RGraph]:
    stream = TokenStream(text, source)
    graphs = []
    while stream.peek().kind != "EOF":
        graphs.append(_parse_graph_body(stream))
    return graphs


def _fields(line: str) -> list[tuple[str, int]]:
    return [(match.group(), match.start() + 1) for match in re.finditer(r"\S+", line)]


def _content(raw: str) -> str:
    return raw.split("#", 1)[0].rstrip()


def parse_ledger_spec(text: str, source: str = "<input>") -> Ledger:
    """``account <name> kind <Kind> initial <integer>``, one per line, in declaration order."""
    kinds = {kind.value.lower(): kind for kind in AccountKind}
    accounts: list[LedgerAccount] = []
    for number, raw in enumerate(text.splitlines(), start=1):
        line = _content(raw)
        if not line.strip():
            continue
        fields = _fields(line)
        keywords = {0: "account", 2: "kind", 4: "initial"}
        for index, keyword in keywords.items():
            if index >= len(fields):
                raise ParseError(f"expected '{keyword}'", number, len(line) + 1, source)
            if fields[index][0] != keyword:
                raise ParseError(f"expected '{keyword}', found '{fields[index][0]}'", number, fields[index][1], source)
            if index + 1 >= len(fields):
                raise ParseError(f"missing value after '{keyword}'", number, len(line) + 1, source)
        if len(fields) > 6:
            raise ParseError(f"unexpected '{fields[6][0]}'", number, fields[6][1], source)

        name, (kind_text, kind_column), (initial, initial_column) = fields[1][0], fields[3], fields[5]
        if any(account.name == name for account in accounts):
            raise ParseError(f"account '{name}' declared twice", number, fields[1][1], source)
        if kind_text.lower() not in kinds:
            raise ParseError(f"unknown account kind '{kind_text}'", number, kind_column, source)
        if not re.fullmatch(r"-?\d+", initial):
            raise ParseError(f"initial value must be an integer, found '{initial}'", number, initial_column, source)
        accounts.append(LedgerAccount(name=name, kind=kinds[kind_text.lower()], value=int(initial)))
    return make_ledger(accounts)


def _parse_postings(part: str, offset: int, number: int, source: str) -> list[Posting]:
    postings = []
    position = offset
    for item in part.split(","):
        stripped = item.strip()
        column = position + (len(item) - len(item.lstrip())) + 1
        match = re.fullmatch(r"([^\s:]+)\s*:\s*(-?\d+)", stripped)
        if not match:
            raise ParseError(f"expected 'account:amount', found '{stripped}'", number, column, source)
        amount = int(match.group(2))
        if amount < 0:
            raise ParseError(f"amounts are non-negative, found {amount}", number, column, source)
        postings.append(Posting(account=match.group(1), amount=amount))
        position += len(item) + 1
    return postings


def parse_journal(text: str, source: str = "<input>") -> Journal:
    """``step; debit a:amt[,...]; credit b:amt[,...]`` lines and ``zeroize expenses|income`` directives."""
    entries: list[Transaction | ZeroizeDirective] = []
    previous = 0
    for number, raw in enumerate(text.splitlines(), start=1):
        line = _content(raw)
        if not line.strip():
            continue

        parts, offsets, position = [], [], 0
        for part in line.split(";"):
            parts.append(part)
            offsets.append(position)
            position += len(part) + 1

        step = previous + 1
        first = parts[0].strip()
        if re.fullmatch(r"\d+", first):
            step = int(first)
            if step <= previous:
                column = offsets[0] + len(parts[0]) - len(parts[0].lstrip()) + 1
                raise ParseError(f"step {step} does not follow step {previous}", number, column, source)
            parts, offsets = parts[1:], offsets[1:]
        elif not first.startswith("zeroize"):
            column = len(parts[0]) - len(parts[0].lstrip()) + 1
            raise ParseError(f"expected a step id, found '{first}'", number, column, source)

        if len(parts) == 1 and parts[0].strip().startswith("zeroize"):
            words = parts[0].split()
            column = offsets[0] + len(parts[0]) - len(parts[0].lstrip()) + 1
            if len(words) != 2 or words[1] not in {target.value for target in ZeroizeTarget}:
                raise ParseError("expected 'zeroize expenses' or 'zeroize income'", number, column, source)
            entries.append(ZeroizeDirective(step=step, target=ZeroizeTarget(words[1]), line=number))
            previous = step
            continue

        debits: list[Posting] = []
        credits: list[Posting] = []
        for part, offset in zip(parts, offsets):
            stripped = part.strip()
            column = offset + len(part) - len(part.lstrip()) + 1
            match = re.match(r"(debit|credit)\s+", stripped)
            if not match:
                raise ParseError(f"expected 'debit' or 'credit', found '{stripped}'", number, column, source)
            body_offset = column - 1 + match.end()
            postings = _parse_postings(stripped[match.end():], body_offset, number, source)
            (debits if match.group(1) == "debit" else credits).extend(postings)
        if not debits and not credits:
            raise ParseError("transaction has no postings", number, 1, source)
        entries.append(Transaction(step=step, debits=debits, credits=credits, line=number))
        previous = step
    return Journal(entries=entries)


class _ExpressionParser:
    def __init__(self, text: str, objects: Mapping[str, AccountObject], atoms: Mapping[str, GeneralAccount], source: str):
        self.stream = TokenStream(text, source)
        self.objects = objects
        self.atoms = atoms

    def expression(self) -> Expression:
        result = self.tensor()
        while self.stream.accept(";"):
            result = Compose(result, self.tensor())
        return result

    def tensor(self) -> Expression:
        result = self.atom()
        while self.stream.peek().kind == "TENSOR":
            self.stream.advance()
            result = Tensor(result, self.atom())
        return result

    def atom(self) -> Expression:
        stream = self.stream
        if stream.accept("("):
            inner = self.expression()
            stream.expect(")")
            return inner
        token = stream.expect_name("an account, 'id', 'eta' or 'eps'")
        if token.text in ("id", "eta", "eps") and stream.peek().text == "[":
            stream.advance()
            obj = self.object()
            stream.expect("]")
            return {"id": Identity, "eta": Unit, "eps": Counit}[token.text](obj)
        if token.text not in self.atoms:
            raise stream.error(f"unknown account '{token.text}'", token)
        return Atom(self.atoms[token.text], token.text)

    def object(self) -> AccountObject:
        result = self.object_atom()
        while self.stream.peek().kind == "TENSOR":
            self.stream.advance()
            result = tensor_objects(result, self.object_atom())
        return result

    def object_atom(self) -> AccountObject:
        stream = self.stream
        if stream.accept("~"):
            return reverse_object(self.object_atom())
        if stream.accept("("):
            inner = self.object()
            stream.expect(")")
            return inner
        token = stream.expect_name("an object")
        if token.text == "I":
            return unit_object()
        if token.text not in self.objects:
            raise stream.error(f"unknown object '{token.text}'", token)
        return self.objects[token.text]


def parse_expression(
    text: str,
    objects: Mapping[str, AccountObject],
    atoms: Mapping[str, GeneralAccount],
    source: str = "<input>",
) -> Expression:
    """Parse and type-check an expression; composition mismatches raise ExpressionTypeError."""
    parser = _ExpressionParser(text, objects, atoms, source)
    expression = parser.expression()
    parser.stream.expect_end()
    type_of(expression)
    return expression


def parse_declarations(
    text: str,
    objects: Mapping[str, AccountObject],
    atoms: Mapping[str, GeneralAccount],
    source: str = "<input>",
) -> dict[str, Expression]:
    """Parse ``expr NAME = <expression>`` declarations; type errors carry the declared name as their path."""
    parser = _ExpressionParser(text, objects, atoms, source)
    stream = parser.stream
    declared: dict[str, Expression] = {}
    while stream.peek().kind != "EOF":
        stream.expect("expr")
        name = stream.expect_name("an expression name")
        if name.text in declared:
            raise stream.error(f"expression '{name.text}' declared twice", name)
        stream.expect("=")
        expression = parser.expression()
        type_of(expression, name.text)
        declared[name.text] = expression
    return declared


def parse_object(text: str, objects: Mapping[str, AccountObject], source: str = "<input>") -> AccountObject:
    parser = _ExpressionParser(text, objects, {}, source)
    obj = parser.object()
    parser.stream.expect_end()
    return obj


@dataclass
class System:
    objects: dict[str, AccountObject] = field(default_factory=dict)
    accounts: dict[str, GeneralAccount] = field(default_factory=dict)
    expressions: dict[str, Expression] = field(default_factory=dict)


def _as_id(value) -> Hashable:
    if isinstance(value, list):
        return tuple(_as_id(part) for part in value)
    return value


def _build_leg(head: RGraph, carrier: RGraph, spec: LegSpec, where: str) -> GraphMorphism:
    if carrier.components == ():
        return bang(head)
    vmap = {}
    for v in head.vertices:
        if v not in spec.vertices:
            raise ParseError(f"vertex '{v}' has no image", None, None, where)
        vmap[v] = _as_id(spec.vertices[v])
    emap = {}
    for edge in head.non_null_edges:
        if edge.id in spec.edges:
            emap[edge.id] = _as_id(spec.edges[edge.id])
        elif vmap[edge.source] == vmap[edge.target] and vmap[edge.source] in carrier.null_of:
            emap[edge.id] = carrier.null_of[vmap[edge.source]]
        else:
            raise ParseError(f"edge '{edge.id}' has no image", None, None, where)
    try:
        return make_morphism(head, carrier, vmap, emap)
    except MorphismError as error:
        raise ParseError(str(error), None, None, where) from error


def _build_account(name: str, spec: AccountSpec, system: System, graphs: dict[str, RGraph], source: str):
    where = f"{source}:accounts.{name}"
    dom = parse_object(spec.dom, system.objects, f"{where}.dom")
    cod = parse_object(spec.cod, system.objects, f"{where}.cod")
    if spec.head.lstrip().startswith("graph"):
        head = parse_graph(spec.head, f"{where}.head")
    elif spec.head in graphs:
        head = graphs[spec.head]
    else:
        raise ParseError(f"unknown graph '{spec.head}'", None, None, f"{where}.head")
    span = Span(
        head=head,
        left=_build_leg(head, dom.carrier, spec.left, f"{where}.left"),
        right=_build_leg(head, cod.carrier, spec.right, f"{where}.right"),
        name=name,
    )
    return make_general_account(dom, cod, span, spec.valuation, name)


def load_system(path: str) -> System:
    """Read a YAML system file: graphs, objects, accounts and named expressions."""
    try:
        with open(path, "r") as file:
            data = yaml.safe_load(file) or {}
    except yaml.YAMLError as error:
        mark = getattr(error, "problem_mark", None)
        line, column = (mark.line + 1, mark.column + 1) if mark else (None, None)
        raise ParseError(f"invalid YAML: {getattr(error, 'problem', error)}", line, column, path) from error
    try:
        spec = SystemFile.model_validate(data)
    except ValidationError as error:
        raise ParseError(f"invalid system file: {error}", None, None, path) from error

    graphs = {name: parse_graph(text, f"{path}:graphs.{name}") for name, text in spec.graphs.items()}
    system = System()
    for name, object_spec in spec.objects.items():
        if object_spec.carrier not in graphs:
            raise ParseError(f"unknown graph '{object_spec.carrier}'", None, None, f"{path}:objects.{name}")
        boundary = Signature(tuple((channel.channel, channel.polarity) for channel in object_spec.boundary))
        labels = {edge: tuple(flows) for edge, flows in object_spec.labels.items()}
        unknown = [edge for edge in labels if edge not in graphs[object_spec.carrier].edge_index]
        if unknown:
            raise ParseError(f"unknown edge '{unknown[0]}' in labels", None, None, f"{path}:objects.{name}")
        system.objects[name] = make_object(graphs[object_spec.carrier], boundary, labels, name)

    for name, account_spec in spec.accounts.items():
        system.accounts[name] = _build_account(name, account_spec, system, graphs, path)
    if isinstance(spec.expressions, str):
        system.expressions.update(
            parse_declarations(spec.expressions, system.objects, system.accounts, f"{path}:expressions")
        )
    else:
        for name, text in spec.expressions.items():
            system.expressions[name] = parse_expression(
                text, system.objects, system.accounts, f"{path}:expressions.{name}"
            )

    logger.info(
        f"Loaded {len(system.objects)} objects, {len(system.accounts)} accounts and "
        f"{len(system.expressions)} expressions from {path}"
    )
    return system


def read_text(path: str) -> str:
    with open(path, "r") as file:
        return file.read()


def load_ledger(path: str) -> Ledger:
    return parse_ledger_spec(read_text(path), path)


def load_journal(path: str) -> Journal:
    return parse_journal(read_text(path), path)


def load_expressions(path: str, system: System) -> dict[str, Expression]:
    """Declarations from a plain-text expression file, over the objects and accounts of a system."""
    return parse_declarations(read_text(path), system.objects, system.accounts, path)


def load_graph(path: str) -> RGraph:
    return parse_graph(read_text(path), path)


"""
Scenario documents (`.svl`)

One statement per line, `#` starts a comment:

    b = arith(1, 3)
    f = assign(K=2, free=b, fix{0:1, 2:0}, tail=periodic("0"))
    F = majority{0..4; tie=0}
    run irrelevance(F, b, f)

Expressions combine coalitions with `~`, `&` and `|` (tightest first),
constructor calls `name(args)` and brace calls `name{items; kwargs}`.
Names must be bound on an earlier line. Parsing only builds the syntax
tree; `ScenarioDoc.value` turns bindings into library objects.
"""
import logging
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Callable, Dict, List, Optional, Sequence, Tuple, Union

from silverlab.coalitions import (
    Constant,
    DensityPlus,
    Dictator,
    FinPlus,
    IStar,
    Majority,
    OpenSetApprox,
    Parity,
    TruthTable,
)
from silverlab.constructions import oracles
from silverlab.exceptions import ScenarioError, SpecParseError
from silverlab.seqcore import (
    Arithmetic,
    CoalitionDescriptor,
    Cylinder,
    EventuallyPeriodicSeq,
    Finite,
    Geometric,
    PartialAssignment,
    Periodic,
    naturals,
    word_from_text,
)
from silverlab.swr.derivations import UtilityStream

log = logging.getLogger(__name__)

RESERVED = frozenset(
    {
        "abcd",
        "singletons",
        "fin",
        "identity",
        "inf",
        "nat",
        "finplus",
        "sefa",
        "pfa",
        "eo",
        "oe",
        "sim",
    }
)
_OPS = "(){},;:=~|&"
_RAW_KEYS = ("Y",)


# ---------------------------------------------------------------------------
# Syntax tree
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Num:
    text: str


@dataclass(frozen=True)
class Str:
    value: str


@dataclass(frozen=True)
class Symbol:
    name: str


@dataclass(frozen=True)
class Ref:
    name: str
    column: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Kwarg:
    key: str
    value: "Node"


@dataclass(frozen=True)
class Call:
    name: str
    args: Tuple[Union["Node", Kwarg], ...] = ()


@dataclass(frozen=True)
class RangeItem:
    lo: Num
    hi: Num


@dataclass(frozen=True)
class PairItem:
    key: Num
    value: "Node"


@dataclass(frozen=True)
class BraceCall:
    name: str
    items: Tuple[Union[Num, RangeItem, PairItem], ...] = ()
    kwargs: Tuple[Kwarg, ...] = ()


@dataclass(frozen=True)
class Unary:
    op: str
    operand: "Node"


@dataclass(frozen=True)
class Binary:
    op: str
    left: "Node"
    right: "Node"


Node = Union[Num, Str, Symbol, Ref, Call, BraceCall, Unary, Binary]


@dataclass(frozen=True)
class Binding:
    name: str
    expr: Node
    line: int = field(default=0, compare=False)


@dataclass(frozen=True)
class Directive:
    name: str
    args: Tuple[Union[Node, Kwarg], ...] = ()
    line: int = field(default=0, compare=False)


Statement = Union[Binding, Directive]


# ---------------------------------------------------------------------------
# Tokens
# ---------------------------------------------------------------------------


@dataclass(frozen=True)
class Token:
    kind: str  # num, str, ident, op, eol
    text: str
    column: int
    value: Optional[str] = None


def tokenize(line: str, lineno: int) -> List[Token]:
    tokens = []
    i, n = 0, len(line)
    while i < n:
        ch = line[i]
        if ch in " \t\r":
            i += 1
        elif ch == "#":
            break
        elif ch.isdigit():
            j = i
            while j < n and line[j].isdigit():
                j += 1
            if j + 1 < n and line[j] == "." and line[j + 1].isdigit():
                j += 1
                while j < n and line[j].isdigit():
                    j += 1
            elif j + 1 < n and line[j] == "/" and line[j + 1].isdigit():
                j += 1
                while j < n and line[j].isdigit():
                    j += 1
            tokens.append(Token("num", line[i:j], i))
            i = j
        elif ch.isalpha() or ch == "_":
            j = i
            while j < n and (line[j].isalnum() or line[j] == "_"):
                j += 1
            tokens.append(Token("ident", line[i:j], i))
            i = j
        elif ch in "'\"":
            j = line.find(ch, i + 1)
            if j < 0:
                raise SpecParseError(lineno, n, f"closing {ch}", start_column=i)
            tokens.append(Token("str", line[i : j + 1], i, line[i + 1 : j]))
            i = j + 1
        elif line.startswith("..", i):
            tokens.append(Token("op", "..", i))
            i += 2
        elif ch in _OPS:
            tokens.append(Token("op", ch, i))
            i += 1
        else:
            raise SpecParseError(lineno, i, "a token", start_column=i)
    tokens.append(Token("eol", "", len(line.rstrip()) if i >= n else i))
    return tokens


# ---------------------------------------------------------------------------
# Parser
# ---------------------------------------------------------------------------


class _LineParser:
    """
    Recursive descent over one line

    `starts` holds the columns of the constructs currently open, so errors
    can also report where the innermost one began. The statement itself
    opens at column 0.
    """

    def __init__(self, tokens: List[Token], lineno: int, scope: Dict[str, int]):
        self.tokens = tokens
        self.pos = 0
        self.lineno = lineno
        self.scope = scope
        self.starts: List[int] = []

    def peek(self, ahead: int = 0) -> Token:
        return self.tokens[min(self.pos + ahead, len(self.tokens) - 1)]

    def advance(self) -> Token:
        tok = self.peek()
        self.pos += 1
        return tok

    def at(self, text: str, ahead: int = 0) -> bool:
        tok = self.peek(ahead)
        return tok.kind == "op" and tok.text == text

    def error(self, expected: str) -> SpecParseError:
        tok = self.peek()
        start = self.starts[-1] if self.starts else tok.column
        return SpecParseError(self.lineno, tok.column, expected, start_column=start)

    def expect_op(self, text: str, expected: Optional[str] = None) -> Token:
        if not self.at(text):
            raise self.error(expected or f"'{text}'")
        return self.advance()

    def expect_kind(self, kind: str, expected: str) -> Token:
        if self.peek().kind != kind:
            raise self.error(expected)
        return self.advance()

    def statement(self) -> Statement:
        first = self.peek()
        self.starts.append(0)
        if first.kind == "ident" and first.text == "run" and self.peek(1).kind == "ident":
            self.advance()
            name = self.advance().text
            self.expect_op("(")
            args = self.arguments(")")
            self.expect_op(")", "',' or ')'")
            self.expect_kind("eol", "end of line")
            return Directive(name, args, self.lineno)
        if first.kind != "ident":
            raise self.error("a name or 'run'")
        name = self.advance().text
        if name in RESERVED:
            raise SpecParseError(
                self.lineno, first.column, f"a name that is not reserved ({name!r} is)", 0
            )
        if name in self.scope:
            raise SpecParseError(
                self.lineno,
                first.column,
                f"a new name ({name!r} is bound on line {self.scope[name]})",
                0,
            )
        self.expect_op("=")
        expr = self.expr()
        self.expect_kind("eol", "an operator or end of line")
        return Binding(name, expr, self.lineno)

    def expr(self) -> Node:
        left = self.term()
        while self.at("|"):
            self.advance()
            left = Binary("|", left, self.term())
        return left

    def term(self) -> Node:
        left = self.factor()
        while self.at("&"):
            self.advance()
            left = Binary("&", left, self.factor())
        return left

    def factor(self) -> Node:
        if self.at("~"):
            self.advance()
            return Unary("~", self.factor())
        return self.primary()

    def primary(self) -> Node:
        tok = self.peek()
        if self.at("("):
            self.starts.append(tok.column)
            self.advance()
            inner = self.expr()
            self.expect_op(")")
            self.starts.pop()
            return inner
        if tok.kind == "num":
            self.advance()
            return Num(tok.text)
        if tok.kind == "str":
            self.advance()
            return Str(tok.value)
        if tok.kind != "ident":
            raise self.error("an expression")
        self.advance()
        if self.at("("):
            self.starts.append(tok.column)
            self.advance()
            args = self.arguments(")")
            self.expect_op(")", "',' or ')'")
            self.starts.pop()
            return Call(tok.text, args)
        if self.at("{"):
            self.starts.append(tok.column)
            self.advance()
            items, kwargs = self.brace_body()
            self.expect_op("}", "',', ';' or '}'")
            self.starts.pop()
            return BraceCall(tok.text, items, kwargs)
        if tok.text in RESERVED:
            return Symbol(tok.text)
        if tok.text not in self.scope:
            raise SpecParseError(
                self.lineno, tok.column, f"a name bound earlier (got {tok.text!r})", tok.column
            )
        return Ref(tok.text, tok.column)

    def kwarg(self) -> Kwarg:
        key = self.advance()
        self.advance()
        if key.text in _RAW_KEYS:
            tok = self.peek()
            if tok.kind not in ("ident", "num"):
                raise self.error("a level alphabet such as abcd or 01")
            self.advance()
            return Kwarg(key.text, Symbol(tok.text))
        return Kwarg(key.text, self.expr())

    def arguments(self, close: str) -> Tuple[Union[Node, Kwarg], ...]:
        args: List[Union[Node, Kwarg]] = []
        if self.at(close):
            return ()
        while True:
            if self.peek().kind == "ident" and self.at("=", 1):
                args.append(self.kwarg())
            else:
                args.append(self.expr())
            if self.at(","):
                self.advance()
                continue
            if self.at(close):
                return tuple(args)
            raise self.error(f"',' or '{close}'")

    def item(self) -> Union[Num, RangeItem, PairItem]:
        lo = self.expect_kind("num", "a number")
        if self.at(".."):
            self.advance()
            hi = self.expect_kind("num", "a number")
            return RangeItem(Num(lo.text), Num(hi.text))
        if self.at(":"):
            self.advance()
            return PairItem(Num(lo.text), self.primary())
        return Num(lo.text)

    def brace_body(self):
        items: List[Union[Num, RangeItem, PairItem]] = []
        kwargs: List[Kwarg] = []
        if self.at("}"):
            return (), ()
        if not self.at(";"):
            while True:
                items.append(self.item())
                if self.at(","):
                    self.advance()
                    continue
                break
        if self.at(";"):
            self.advance()
            while True:
                if not (self.peek().kind == "ident" and self.at("=", 1)):
                    raise self.error("a keyword argument")
                kwargs.append(self.kwarg())
                if self.at(","):
                    self.advance()
                    continue
                break
        return tuple(items), tuple(kwargs)


def parse(text: str) -> "ScenarioDoc":
    statements: List[Statement] = []
    scope: Dict[str, int] = {}
    for lineno, line in enumerate(text.splitlines(), start=1):
        tokens = tokenize(line, lineno)
        if tokens[0].kind == "eol":
            continue
        stmt = _LineParser(tokens, lineno, scope).statement()
        if isinstance(stmt, Binding):
            scope[stmt.name] = lineno
        statements.append(stmt)
    log.debug("parsed %d statements", len(statements))
    return ScenarioDoc(tuple(statements))


def parse_file(path: str) -> "ScenarioDoc":
    with open(path, encoding="utf-8") as fh:
        return parse(fh.read())


# ---------------------------------------------------------------------------
# Canonical printer
# ---------------------------------------------------------------------------

_PREC = {"|": 1, "&": 2}


def _quote(value: str) -> str:
    return f"'{value}'" if '"' in value else f'"{value}"'


def _arg_text(arg) -> str:
    if isinstance(arg, Kwarg):
        return f"{arg.key}={node_text(arg.value)}"
    return node_text(arg)


def _item_text(item) -> str:
    if isinstance(item, RangeItem):
        return f"{item.lo.text}..{item.hi.text}"
    if isinstance(item, PairItem):
        return f"{item.key.text}:{node_text(item.value, 4)}"
    return item.text


def node_text(node: Node, context: int = 0) -> str:
    if isinstance(node, Num):
        return node.text
    if isinstance(node, Str):
        return _quote(node.value)
    if isinstance(node, (Symbol, Ref)):
        return node.name
    if isinstance(node, Call):
        return f"{node.name}(" + ", ".join(_arg_text(a) for a in node.args) + ")"
    if isinstance(node, BraceCall):
        body = ",".join(_item_text(i) for i in node.items)
        if node.kwargs:
            body += "; " + ", ".join(_arg_text(k) for k in node.kwargs)
        return f"{node.name}{{{body}}}"
    if isinstance(node, Unary):
        text = "~" + node_text(node.operand, 3)
        prec = 3
    else:
        prec = _PREC[node.op]
        text = f"{node_text(node.left, prec)} {node.op} {node_text(node.right, prec + 1)}"
    return f"({text})" if prec < context else text


def statement_text(stmt: Statement) -> str:
    if isinstance(stmt, Binding):
        return f"{stmt.name} = {node_text(stmt.expr)}"
    return f"run {stmt.name}(" + ", ".join(_arg_text(a) for a in stmt.args) + ")"


def print_doc(doc: "ScenarioDoc") -> str:
    return "".join(statement_text(s) + "\n" for s in doc.statements)


# ---------------------------------------------------------------------------
# Evaluation
# ---------------------------------------------------------------------------


def _number(text: str) -> Union[int, Fraction]:
    if "/" in text or "." in text:
        return Fraction(text)
    return int(text)


_SYMBOLS: Dict[str, Callable[[], object]] = {
    "inf": lambda: None,
    "nat": naturals,
    "finplus": FinPlus,
    "identity": oracles.IdentityOracle,
}


@dataclass(frozen=True)
class ScenarioDoc:
    statements: Tuple[Statement, ...]
    _values: Dict[str, object] = field(
        default_factory=dict, init=False, compare=False, hash=False, repr=False
    )

    @property
    def bindings(self) -> Dict[str, Node]:
        return {s.name: s.expr for s in self.statements if isinstance(s, Binding)}

    @property
    def directives(self) -> Tuple[Directive, ...]:
        return tuple(s for s in self.statements if isinstance(s, Directive))

    def to_text(self) -> str:
        return print_doc(self)

    def value(self, name: str) -> object:
        if name not in self._values:
            bindings = self.bindings
            if name not in bindings:
                raise ScenarioError(f"{name!r} is not bound in this document")
            try:
                self._values[name] = self.evaluate(bindings[name])
            except ScenarioError:
                raise
            except (TypeError, ValueError, IndexError) as e:
                raise ScenarioError(f"{name}: {e}")
        return self._values[name]

    def first(self, kind: type) -> Tuple[str, object]:
        """First binding whose value is an instance of `kind`"""
        for name in self.bindings:
            value = self.value(name)
            if isinstance(value, kind):
                return name, value
        raise ScenarioError(f"document binds no {kind.__name__}")

    def all_of(self, kind: type) -> List[Tuple[str, object]]:
        return [(n, self.value(n)) for n in self.bindings if isinstance(self.value(n), kind)]

    def arguments(self, args: Sequence[Union[Node, Kwarg]]) -> Tuple[list, dict]:
        positional, keywords = [], {}
        try:
            for a in args:
                if isinstance(a, Kwarg):
                    keywords[a.key] = self.evaluate(a.value)
                else:
                    positional.append(self.evaluate(a))
        except ScenarioError:
            raise
        except (TypeError, ValueError, IndexError) as e:
            raise ScenarioError(str(e))
        return positional, keywords

    def evaluate(self, node: Node) -> object:
        if isinstance(node, Num):
            return _number(node.text)
        if isinstance(node, Str):
            return node.value
        if isinstance(node, Symbol):
            return _SYMBOLS[node.name]() if node.name in _SYMBOLS else node.name
        if isinstance(node, Ref):
            return self.value(node.name)
        if isinstance(node, Unary):
            return ~self._coalition(self.evaluate(node.operand))
        if isinstance(node, Binary):
            left = self._coalition(self.evaluate(node.left))
            right = self._coalition(self.evaluate(node.right))
            return left | right if node.op == "|" else left & right
        if isinstance(node, BraceCall):
            return self._brace(node)
        builder = _CALLS.get(node.name)
        if builder is None:
            raise ScenarioError(f"unknown constructor {node.name!r}")
        return builder(self, node)

    @staticmethod
    def _coalition(value) -> CoalitionDescriptor:
        if not isinstance(value, CoalitionDescriptor):
            raise ScenarioError(f"expected a coalition, got {value!r}")
        return value

    def _brace(self, node: BraceCall) -> object:
        keys: List[int] = []
        pairs: Dict[int, object] = {}
        for item in node.items:
            if isinstance(item, RangeItem):
                lo, hi = int(item.lo.text), int(item.hi.text)
                if hi < lo:
                    raise ScenarioError(f"empty range {lo}..{hi}")
                keys.extend(range(lo, hi + 1))
            elif isinstance(item, PairItem):
                pairs[int(item.key.text)] = self.evaluate(item.value)
            else:
                keys.append(int(item.text))
        kw = {k.key: self.evaluate(k.value) for k in node.kwargs}
        K = kw.get("K", 2)
        if node.name == "finite":
            return Finite(frozenset(keys))
        if node.name == "parity":
            return Parity(tuple(keys))
        if node.name == "majority":
            return Majority(tuple(keys), int(kw.get("tie", 0)), K)
        if node.name in ("fix", "support"):
            return BraceValue(node.name, tuple(keys), tuple(pairs.items()))
        raise ScenarioError(f"unknown brace constructor {node.name!r}")


@dataclass(frozen=True)
class BraceValue:
    """Argument-only brace forms such as fix{0:1} and support{0,1}"""

    name: str
    keys: Tuple[int, ...]
    pairs: Tuple[Tuple[int, object], ...]


def _expect(values: list, count: Tuple[int, int], what: str) -> list:
    lo, hi = count
    if not lo <= len(values) <= hi:
        raise ScenarioError(f"{what} takes {lo}..{hi} positional arguments, got {len(values)}")
    return values


def _tail(doc: ScenarioDoc, node: Node, K) -> EventuallyPeriodicSeq:
    if isinstance(node, Call) and node.name == "const":
        pos, _ = doc.arguments(node.args)
        return EventuallyPeriodicSeq.constant(int(_expect(pos, (1, 1), "const")[0]), K)
    if isinstance(node, Call) and node.name in ("periodic", "seq"):
        pos, kw = doc.arguments(node.args)
        if not pos:
            pos = [kw.get("prefix", ""), kw.get("period", "")]
        _expect(pos, (1, 2), node.name)
        prefix, period = ("", pos[0]) if len(pos) == 1 else pos
        return EventuallyPeriodicSeq.from_text(prefix, period, K)
    value = doc.evaluate(node)
    if not isinstance(value, EventuallyPeriodicSeq):
        raise ScenarioError(f"tail must be a sequence, got {value!r}")
    return value


def _assign(doc: ScenarioDoc, node: Call) -> PartialAssignment:
    kw_nodes = {a.key: a.value for a in node.args if isinstance(a, Kwarg)}
    K = doc.evaluate(kw_nodes["K"]) if "K" in kw_nodes else 2
    free = doc.evaluate(kw_nodes["free"]) if "free" in kw_nodes else naturals()
    doc._coalition(free)
    fixed: Tuple[Tuple[int, int], ...] = ()
    for a in node.args:
        if isinstance(a, Kwarg):
            continue
        value = doc.evaluate(a)
        if not (isinstance(value, BraceValue) and value.name == "fix"):
            raise ScenarioError(f"assign takes fix{{...}} positionally, got {value!r}")
        fixed = tuple((k, int(v)) for k, v in value.pairs)
    tail = _tail(doc, kw_nodes["tail"], K) if "tail" in kw_nodes else None
    return PartialAssignment(K, free, fixed, tail)


def _table(doc: ScenarioDoc, node: Call) -> TruthTable:
    pos, kw = doc.arguments(node.args)
    support = [v for v in pos if isinstance(v, BraceValue) and v.name == "support"]
    tables = [v for v in pos if isinstance(v, str)]
    if len(support) != 1 or len(tables) != 1:
        raise ScenarioError('table needs support{...} and one "digits" string')
    return TruthTable(kw.get("K", 2), support[0].keys, tables[0])


def _simple(build: Callable, lo: int, hi: int) -> Callable[[ScenarioDoc, Call], object]:
    def builder(doc: ScenarioDoc, node: Call):
        pos, kw = doc.arguments(node.args)
        try:
            return build(*_expect(pos, (lo, hi), node.name), **kw)
        except TypeError as e:
            raise ScenarioError(f"{node.name}: {e}")

    return builder


def _periodic(period_or_prefix: str, period: Optional[str] = None) -> Periodic:
    if period is None:
        return Periodic(period_or_prefix)
    return Periodic(period, period_or_prefix)


def _seq(prefix: str = "", period: str = "", K=2) -> EventuallyPeriodicSeq:
    return EventuallyPeriodicSeq.from_text(prefix, period, K)


def _stream(Y: str = "abcd", prefix: str = "", period: str = "") -> UtilityStream:
    return UtilityStream.from_text(prefix, period, Y)


def _const(value: int, K=2) -> Constant:
    return Constant(int(value), K)


def _dictator(i: int, K=2) -> Dictator:
    return Dictator(int(i), K)


def _oracle(inner) -> oracles.DenseOracle:
    if not isinstance(inner, oracles.DenseOracle):
        raise ScenarioError(f"oracle(...) wraps identity, ones, pattern or append, got {inner!r}")
    return inner


def _cylinders(*assignments, depth: int = 1) -> OpenSetApprox:
    for a in assignments:
        if not isinstance(a, PartialAssignment):
            raise ScenarioError(f"cylinders(...) takes assignments, got {a!r}")
    return OpenSetApprox(tuple(Cylinder(a) for a in assignments), int(depth))


_CALLS: Dict[str, Callable[[ScenarioDoc, Call], object]] = {
    "arith": _simple(lambda s, d: Arithmetic(int(s), int(d)), 2, 2),
    "geom": _simple(lambda c, r: Geometric(int(c), int(r)), 2, 2),
    "periodic": _simple(_periodic, 1, 2),
    "assign": _assign,
    "dictator": _simple(_dictator, 1, 1),
    "const": _simple(_const, 1, 1),
    "table": _table,
    "stream": _simple(_stream, 0, 0),
    "seq": _simple(_seq, 0, 2),
    "oracle": _simple(_oracle, 1, 1),
    "ones": _simple(lambda k: oracles.ones(int(k)), 1, 1),
    "pattern": _simple(lambda w: oracles.PatternOracle(word_from_text(w)), 1, 1),
    "append": _simple(lambda w: oracles.AppendOracle(word_from_text(w)), 1, 1),
    "cylinders": _simple(_cylinders, 1, 64),
    "Dplus": _simple(lambda d: DensityPlus(Fraction(d)), 1, 1),
    "istar": _simple(lambda ideal: IStar(str(ideal)), 1, 1),
}

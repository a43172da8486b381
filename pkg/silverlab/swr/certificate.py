"""
Derivation certificates

    # o(z) < e(x)
    streams Y=abcd
    let s0 = "adbc" ("ad")
    let s1 = "bc" ("ad")
    let s2 = "bcadbc" ("ad")
    FA perm=(0 2)(1 3) s0 -> s1 ~
    SE i=4 j=5 s1 -> s2 <
    conclusion <

One declaration or step per line. Streams are declared once with `let`
as a quoted prefix and a parenthesised quoted period over the labels of
the `streams` line, and steps refer to them by name.
"""
import logging
from typing import Dict, List, TextIO, Tuple, Union

import pyparsing as pp

from silverlab.exceptions import DerivationError
from silverlab.swr.derivations import (
    Derivation,
    DerivationStep,
    FinitePermutation,
    UtilityStream,
)

log = logging.getLogger(__name__)

_ident = pp.Word(pp.alphas + "_", pp.alphanums + "_")
_integer = pp.Word(pp.nums).setParseAction(lambda t: int(t[0]))
_quoted = pp.QuotedString('"')
_relation = pp.oneOf("~ <")
_ends = _ident("source") + pp.Suppress("->") + _ident("target") + _relation("relation")
_cycle = pp.Group(pp.Suppress("(") + pp.ZeroOrMore(_integer) + pp.Suppress(")"))

STREAMS = pp.Keyword("streams")("kind") + pp.Suppress("Y") + pp.Suppress("=") + pp.Word(
    pp.alphanums
)("labels")
LET = (
    pp.Keyword("let")("kind")
    + _ident("name")
    + pp.Suppress("=")
    + _quoted("prefix")
    + pp.Suppress("(")
    + _quoted("period")
    + pp.Suppress(")")
)
FA = (
    pp.Keyword("FA")("kind")
    + pp.Suppress(pp.Keyword("perm"))
    + pp.Suppress("=")
    + pp.Group(pp.OneOrMore(_cycle))("perm")
    + _ends
)
SE = (
    pp.Keyword("SE")("kind")
    + pp.Suppress(pp.Keyword("i"))
    + pp.Suppress("=")
    + _integer("i")
    + pp.Suppress(pp.Keyword("j"))
    + pp.Suppress("=")
    + _integer("j")
    + _ends
)
P = pp.Keyword("P")("kind") + _ends
CONCLUSION = pp.Keyword("conclusion")("kind") + _relation("relation")
LINE = STREAMS | LET | FA | SE | P | CONCLUSION


def _stream_text(s: UtilityStream) -> str:
    prefix, period = s.text()
    return f'"{prefix}" ("{period}")'


def dumps(d: Derivation, title: str = "") -> str:
    names: List[Tuple[UtilityStream, str]] = []

    def name_of(s: UtilityStream) -> str:
        for known, name in names:
            if known.same_as(s):
                return name
        name = f"s{len(names)}"
        names.append((s, name))
        return name

    body = []
    for step in d.steps:
        src, dst = name_of(step.source), name_of(step.target)
        head = step.kind
        if step.kind == "FA":
            head += f" perm={step.perm}"
        elif step.kind == "SE":
            head += f" i={step.i} j={step.j}"
        body.append(f"{head} {src} -> {dst} {step.relation}")

    lines = [f"# {title}"] if title else []
    lines.append(f"streams Y={d.source.labels}")
    lines.extend(f"let {name} = {_stream_text(s)}" for s, name in names)
    lines.extend(body)
    lines.append(f"conclusion {d.conclusion or d.derived_relation()}")
    return "\n".join(lines) + "\n"


def dump(d: Derivation, out: Union[str, TextIO], title: str = "") -> None:
    text = dumps(d, title)
    if isinstance(out, str):
        with open(out, "w") as fh:
            fh.write(text)
    else:
        out.write(text)


def loads(text: str) -> Derivation:
    labels = None
    streams: Dict[str, UtilityStream] = {}
    steps: List[DerivationStep] = []
    conclusion = None

    def stream(name, lineno):
        if name not in streams:
            raise DerivationError(f"line {lineno}: stream {name!r} is not declared")
        return streams[name]

    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        try:
            t = LINE.parseString(line, parseAll=True)
        except pp.ParseException as e:
            msg = f"line {lineno}, column {e.col}: {e.msg}"
            raise DerivationError(msg)
        kind = t["kind"]
        if kind == "streams":
            labels = t["labels"]
        elif kind == "let":
            if labels is None:
                raise DerivationError(f"line {lineno}: 'streams' must come before 'let'")
            if t["name"] in streams:
                raise DerivationError(f"line {lineno}: stream {t['name']!r} declared twice")
            try:
                streams[t["name"]] = UtilityStream.from_text(t["prefix"], t["period"], labels)
            except ValueError as e:
                raise DerivationError(f"line {lineno}: {e}")
        elif kind == "conclusion":
            conclusion = t["relation"]
        else:
            src = stream(t["source"], lineno)
            dst = stream(t["target"], lineno)
            extra = {}
            if kind == "FA":
                extra["perm"] = FinitePermutation.from_cycles(
                    [list(c) for c in t["perm"] if len(c) > 1]
                )
            elif kind == "SE":
                extra["i"], extra["j"] = t["i"], t["j"]
            steps.append(DerivationStep(kind, src, dst, t["relation"], **extra))

    if not steps:
        raise DerivationError("certificate has no steps")
    log.debug("loaded certificate with %d steps", len(steps))
    return Derivation(tuple(steps), conclusion)


def load(source: Union[str, TextIO]) -> Derivation:
    if isinstance(source, str):
        with open(source) as fh:
            return loads(fh.read())
    return loads(source.read())

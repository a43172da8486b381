"""
Line-oriented text format for finite trees

    # tree K=2 height=2
    .
      0
        01
      1
        10

One node per line in depth-first lexicographic order, indented two spaces
per level. The root is written as "."; other nodes as their full word.
"""
import logging
import re
from typing import Iterable, List, TextIO, Union

from silverlab.seqcore import FiniteTree, SilverTree, Tree, Word, word_from_text, word_text

log = logging.getLogger(__name__)

_HEADER = re.compile(r"#\s*tree\s+K=(\d+)")
_INDENT = "  "


def _explicit(tree: Tree) -> FiniteTree:
    if isinstance(tree, SilverTree):
        return tree.materialize()
    return tree


def _walk(tree: FiniteTree, node: Word) -> Iterable[Word]:
    yield node
    for child in tree.children(node):
        yield from _walk(tree, child)


def dumps(tree: Tree) -> str:
    explicit = _explicit(tree)
    lines = [f"# tree K={explicit.alphabet} height={explicit.height}"]
    for node in _walk(explicit, ()):
        text = word_text(node, explicit.alphabet) if node else "."
        lines.append(_INDENT * len(node) + text)
    return "\n".join(lines) + "\n"


def dump(tree: Tree, out: Union[str, TextIO]) -> None:
    text = dumps(tree)
    if isinstance(out, str):
        with open(out, "w") as fh:
            fh.write(text)
    else:
        out.write(text)
    log.debug("wrote tree of height %d", tree.height)


def loads(text: str) -> FiniteTree:
    alphabet = 2
    words: List[Word] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        if not raw.strip():
            continue
        header = _HEADER.match(raw.strip())
        if header:
            alphabet = int(header.group(1))
            continue
        if raw.lstrip().startswith("#"):
            continue
        body = raw.lstrip(" ")
        word = () if body.strip() == "." else word_from_text(body)
        indent = len(raw) - len(body)
        if indent != len(_INDENT) * len(word):
            msg = f"line {lineno}: node {body.strip()!r} indented {indent}, expected {2 * len(word)}"
            raise ValueError(msg)
        words.append(word)
    if () not in words:
        raise ValueError("tree text has no root line '.'")
    nodes = frozenset(words)
    return FiniteTree(alphabet, nodes)


def load(source: Union[str, TextIO]) -> FiniteTree:
    if isinstance(source, str):
        with open(source) as fh:
            return loads(fh.read())
    return loads(source.read())

from pathlib import Path

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from silverlab.coalitions import Majority
from silverlab.exceptions import ScenarioError, SpecParseError
from silverlab.seqcore import Arithmetic, PartialAssignment
from silverlab.speclang import Binding, Directive, parse, parse_file, print_doc, tokenize

EXAMPLE = """\
# irrelevance of a coalition to majority
b = arith(1, 3)
f = assign(K=2, free=b, fix{0:1, 2:0}, tail=periodic("0"))

F = majority{0..4; tie=0}   # strict, ties go to 0
run irrelevance(F, b, f)
"""

CANONICAL = """\
b = arith(1, 3)
f = assign(K=2, free=b, fix{0:1,2:0}, tail=periodic("0"))
F = majority{0..4; tie=0}
run irrelevance(F, b, f)
"""

CORPUS_FILES = sorted((Path(__file__).parent / "corpus").glob("*.svl"))


def test_parses_statements():
    doc = parse(EXAMPLE)
    assert [type(s) for s in doc.statements] == [Binding, Binding, Binding, Directive]
    assert [s.line for s in doc.statements] == [2, 3, 5, 6]
    assert list(doc.bindings) == ["b", "f", "F"]
    assert doc.directives[0].name == "irrelevance"


def test_evaluates_bindings():
    doc = parse(EXAMPLE)
    assert doc.value("b") == Arithmetic(1, 3)
    f = doc.value("f")
    assert isinstance(f, PartialAssignment)
    assert dict(f.fixed) == {0: 1, 2: 0}
    assert doc.value("F") == Majority((0, 1, 2, 3, 4), 0, 2)
    assert doc.first(Majority)[0] == "F"
    with pytest.raises(ScenarioError):
        doc.value("g")


def test_canonical_printing():
    doc = parse(EXAMPLE)
    assert print_doc(doc) == CANONICAL
    assert doc.to_text() == CANONICAL


def test_printer_keeps_grouping():
    text = "a = (arith(0, 2) | arith(1, 3)) & ~arith(0, 5)\nb = a | a & a\n"
    assert print_doc(parse(text)) == text


def test_quotes_follow_the_value():
    assert print_doc(parse("D = pattern('0110')\n")) == 'D = pattern("0110")\n'
    assert print_doc(parse("s = 'say \"hi\"'\n")) == "s = 'say \"hi\"'\n"


def test_evaluation_errors_are_scenario_errors():
    with pytest.raises(ScenarioError):
        parse("a = arith(0)\n").value("a")
    with pytest.raises(ScenarioError):
        parse("a = ~dictator(0)\n").value("a")
    with pytest.raises(ScenarioError):
        parse("a = widget(1)\n").value("a")
    with pytest.raises(ScenarioError):
        parse("a = finite{3..1}\n").value("a")


@pytest.mark.parametrize(
    "text, line, column, expected",
    [
        ("x = \n", 1, 3, "an expression"),
        ("a = nat\nb = c & a\n", 2, 4, "a name bound earlier (got 'c')"),
        ("nat = arith(0, 1)\n", 1, 0, "a name that is not reserved ('nat' is)"),
        ("a = nat\na = nat\n", 2, 0, "a new name ('a' is bound on line 1)"),
        ("a = $\n", 1, 4, "a token"),
        ('a = pattern("01\n', 1, 15, 'closing "'),
        ("a = arith(0, 2\n", 1, 14, "',' or ')'"),
        ("= nat\n", 1, 0, "a name or 'run'"),
    ],
)
def test_parse_errors(text, line, column, expected):
    with pytest.raises(SpecParseError) as exc:
        parse(text)
    err = exc.value
    assert (err.line, err.column, err.expected) == (line, column, expected)
    assert str(err) == f"error:{line}:{column + 1}: expected {expected}"


def test_error_reports_construct_start():
    with pytest.raises(SpecParseError) as exc:
        parse("a = arith(0, 2\n")
    assert exc.value.start_column == 4
    with pytest.raises(SpecParseError) as exc:
        parse("a = nat\nb = c\n")
    assert exc.value.start_column == 4


@pytest.mark.parametrize("path", CORPUS_FILES, ids=lambda p: p.name)
def test_corpus_parses_and_prints_canonically(path):
    doc = parse_file(str(path))
    for name in doc.bindings:
        doc.value(name)
    text = print_doc(doc)
    again = parse(text)
    assert again.statements == doc.statements
    assert print_doc(again) == text


def test_corpus_is_large_enough():
    assert len(CORPUS_FILES) >= 30


@settings(max_examples=1000, deadline=None, derandomize=True)
@given(st.data())
def test_single_token_deletion_reports_at_or_before_it(data):
    path = data.draw(st.sampled_from(CORPUS_FILES))
    lines = path.read_text().splitlines()
    candidates = [
        (lineno, tok)
        for lineno, line in enumerate(lines, start=1)
        for tok in tokenize(line, lineno)
        if tok.kind != "eol"
    ]
    lineno, tok = data.draw(st.sampled_from(candidates))
    line = lines[lineno - 1]
    lines[lineno - 1] = line[: tok.column] + line[tok.column + len(tok.text) :]
    try:
        parse("\n".join(lines) + "\n")
    except SpecParseError as err:
        assert err.line < lineno or (err.line == lineno and err.start_column <= tok.column)

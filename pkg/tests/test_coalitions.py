import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

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
    canonical_witness,
    has_silver_property,
    h_almost_anti_democratic,
    h_almost_irrelevant,
    is_anti_democratic,
    is_irrelevant,
)
from silverlab.exceptions import (
    AlphabetMismatchError,
    CapExceededError,
    VacuousRestrictionError,
)
from silverlab.seqcore import (
    Arithmetic,
    Complement,
    Cylinder,
    EventuallyPeriodicSeq,
    Finite,
    PartialAssignment,
    Periodic,
    cylinder_member,
    naturals,
)


def test_choice_functions_evaluate():
    x = EventuallyPeriodicSeq.from_text("1101", "0")
    assert Dictator(2).eval(x) == 0
    assert Parity((0, 1, 2)).eval(x) == 0
    assert Majority((0, 1, 2, 3)).eval(x) == 1
    assert Majority((0, 2)).eval(x) == 0
    assert Constant(1).eval(x) == 1
    assert TruthTable(2, (0, 2), "0110").eval(x) == 1
    with pytest.raises(AlphabetMismatchError):
        Dictator(0, 3).eval(x)


def test_truth_table_reads_first_coordinate_as_high_digit():
    F = TruthTable(2, (0, 1), "0001")
    assert F.decide((1, 1)) == 1
    assert F.decide((1, 0)) == 0
    G = TruthTable(2, (0, 1), "0010")
    assert G.decide((1, 0)) == 1
    with pytest.raises(ValueError):
        TruthTable(2, (0, 1), "011")


def test_majority_tie_and_text():
    F = Majority((0, 1), tie=1)
    assert F.decide((0, 1)) == 1
    assert F.to_text() == "majority{0,1; tie=1}"
    assert Majority((0, 1, 2, 3)).to_text() == "majority{0..3; tie=0}"
    assert Parity((4, 5, 6)).to_text() == "parity{4..6}"


def test_complement_of_support_is_irrelevant():
    F = Majority((0, 1, 2))
    b, f = canonical_witness(F)
    verdict = is_irrelevant(F, b, f)
    assert verdict.irrelevant
    assert verdict.value == 0
    assert verdict.searched == 1
    assert str(verdict) == "irrelevant(0)"


def test_relevant_coalition_has_witness():
    F = Parity((0, 1, 2))
    b = Complement(Finite(frozenset({2})))
    f = PartialAssignment(2, b, ((2, 0),))
    verdict = is_irrelevant(F, b, f)
    assert not verdict.irrelevant
    y, z = verdict.witness
    assert F.eval(y) != F.eval(z)
    assert cylinder_member(y, Cylinder(f), 3).agrees
    assert cylinder_member(z, Cylinder(f), 3).agrees


def test_irrelevance_needs_matching_domain():
    F = Dictator(0)
    b = Complement(Finite(frozenset({0})))
    with pytest.raises(ValueError):
        is_irrelevant(F, b, PartialAssignment.empty(2))


def test_brute_force_cap(monkeypatch):
    monkeypatch.setenv("SILVERLAB_BRUTE_FORCE_CAP", "3")
    F = Parity(tuple(range(5)))
    f = PartialAssignment.empty(2)
    with pytest.raises(CapExceededError):
        is_irrelevant(F, naturals(), f)


def _brute_force_constant(F, f):
    """Evaluate F on every completion of f over its support"""
    free = [s for s in F.support if f.is_free(s)]
    values = set()
    for votes in itertools.product(range(F.alphabet), repeat=len(free)):
        fill = dict(zip(free, votes))
        values.add(F.decide(tuple(fill.get(s, f.value(s)) for s in F.support)))
    return len(values) == 1


@settings(max_examples=100)
@given(
    st.text(alphabet="01", min_size=8, max_size=8),
    st.lists(st.integers(0, 1), min_size=3, max_size=3),
    st.sets(st.integers(0, 2)),
)
def test_irrelevance_matches_brute_force(table, votes, fixed):
    F = TruthTable(2, (0, 1, 2), table)
    b = Complement(Finite(frozenset(fixed)))
    f = PartialAssignment(2, b, tuple((i, votes[i]) for i in sorted(fixed)))
    verdict = is_irrelevant(F, b, f)
    assert verdict.irrelevant == _brute_force_constant(F, f)


def test_open_set_restriction():
    F = Dictator(0)
    B = OpenSetApprox((Cylinder(PartialAssignment.from_word([1])),), 1)
    verdict = h_almost_irrelevant(F, naturals(), PartialAssignment.empty(2), B)
    assert verdict.irrelevant
    assert verdict.value == 1
    assert str(verdict) == "irrelevant-on-B(1)"


def test_open_set_restriction_can_be_vacuous():
    F = Dictator(0)
    f = PartialAssignment(2, Complement(Finite(frozenset({0}))), ((0, 0),))
    B = OpenSetApprox((Cylinder(PartialAssignment.from_word([1])),), 1)
    with pytest.raises(VacuousRestrictionError):
        h_almost_irrelevant(F, f.free, f, B)


def test_open_set_cylinders_must_fit_depth():
    with pytest.raises(ValueError):
        OpenSetApprox((Cylinder(PartialAssignment.from_word([1, 1])),), 1)
    with pytest.raises(ValueError):
        OpenSetApprox((), 3)
    assert OpenSetApprox.whole(2).contains(EventuallyPeriodicSeq.constant(1))


def test_families():
    cofinite = Complement(Finite(frozenset({0})))
    assert FinPlus().contains(Arithmetic(0, 5))
    assert not FinPlus().contains(Finite(frozenset({1, 2})))
    assert DensityPlus(Fraction(9, 10)).contains(cofinite)
    assert not DensityPlus(Fraction(9, 10)).contains(Periodic("1110"))
    assert DensityPlus(1).contains(cofinite)
    assert IStar("singletons").contains(cofinite)
    assert not IStar("singletons").contains(Complement(Finite(frozenset({0, 1}))))
    assert IStar("fin").contains(Complement(Finite(frozenset({0, 1}))))
    assert not IStar("fin").contains(Periodic("10"))
    with pytest.raises(ValueError):
        IStar("finite")


def test_dictator_is_anti_democratic():
    verdict = is_anti_democratic(Dictator(0), DensityPlus(Fraction(9, 10)))
    assert verdict.found
    assert verdict.coalition.to_text() == "~finite{0}"
    assert str(verdict) == "yes: b = ~finite{0} (value 0)"


def test_anti_democracy_over_singleton_filter():
    verdict = is_anti_democratic(Majority((0, 1, 2)), IStar("singletons"), canonical=False)
    assert not verdict.found
    assert verdict.tried == 4
    assert str(verdict).startswith("no-within-search-space")


def test_anti_democracy_on_open_set():
    F = Majority((0, 1, 2))
    B = OpenSetApprox((Cylinder(PartialAssignment.from_word([1])),), 1)
    verdict = h_almost_anti_democratic(F, FinPlus(), B)
    assert verdict.found
    assert verdict.assignment.fixed == ((0, 1), (1, 0), (2, 0))


def test_silver_property_fixes_only_support():
    F = Parity((1, 3))
    c = Cylinder(PartialAssignment(2, Arithmetic(1, 1), ((0, 1),)))
    sub, value = has_silver_property(F, c)
    assert value == 0
    assert sub.is_silver
    assert sub.is_subcylinder(c, 10)
    assert sub.assignment.pattern(5) == (1, 0, None, 0, None)


_supports = st.lists(st.integers(0, 40), min_size=1, max_size=6, unique=True)

finitely_supported = st.one_of(
    st.builds(Dictator, st.integers(0, 40)),
    st.builds(Parity, _supports),
    st.builds(Majority, _supports, st.integers(0, 1)),
    st.builds(Constant, st.integers(0, 1)),
    _supports.flatmap(
        lambda s: st.builds(
            TruthTable,
            st.just(2),
            st.just(tuple(s)),
            st.text(alphabet="01", min_size=2 ** len(s), max_size=2 ** len(s)),
        )
    ),
)


@settings(max_examples=200, deadline=None, derandomize=True)
@given(finitely_supported, st.sampled_from([Fraction(7, 10), Fraction(9, 10), Fraction(1)]))
def test_finitely_supported_functions_are_anti_democratic(F, delta):
    verdict = is_anti_democratic(F, DensityPlus(delta))
    assert verdict.found
    assert verdict.tried == 1
    assert verdict.coalition == Complement(Finite(frozenset(F.support)))
    assert verdict.verdict.irrelevant

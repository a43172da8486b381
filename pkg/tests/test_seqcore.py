from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from silverlab.exceptions import AlphabetMismatchError, CapExceededError
from silverlab.seqcore import (
    Arithmetic,
    Complement,
    Cylinder,
    EventuallyPeriodicSeq,
    Finite,
    FiniteTree,
    Geometric,
    PartialAssignment,
    Periodic,
    SilverTree,
    cylinder_member,
    naturals,
    silver_levels,
    splitting_report,
    tree_of,
    without,
    word_from_text,
    word_text,
)

words = st.text(alphabet="01", min_size=0, max_size=6)
periods = st.text(alphabet="01", min_size=1, max_size=6)


def periodic_descriptors():
    return st.builds(Periodic, periods, words)


def descriptors():
    base = st.one_of(
        st.builds(Arithmetic, st.integers(0, 6), st.integers(1, 5)),
        periodic_descriptors(),
        st.builds(lambda s: Finite(frozenset(s)), st.sets(st.integers(0, 20), max_size=5)),
    )
    return st.recursive(
        base,
        lambda inner: st.one_of(
            st.builds(Complement, inner),
            st.builds(lambda a, b: a | b, inner, inner),
            st.builds(lambda a, b: a & b, inner, inner),
        ),
        max_leaves=4,
    )


def test_sequence_indexing():
    x = EventuallyPeriodicSeq.from_text("10", "011")
    assert x.take(8) == (1, 0, 0, 1, 1, 0, 1, 1)
    assert list(x.values(3, 8)) == [1, 1, 0, 1, 1]
    with pytest.raises(IndexError):
        x[-1]


def test_sequence_rejects_values_outside_alphabet():
    with pytest.raises(ValueError):
        EventuallyPeriodicSeq((2,), (0,), 2)
    with pytest.raises(ValueError):
        EventuallyPeriodicSeq((), (), 2)


def test_canonical_form():
    x = EventuallyPeriodicSeq.from_text("0101", "0101")
    c = x.canonical()
    assert c.prefix == ()
    assert c.period == (0, 1)
    assert str(c) == "(01)^inf"


@given(words, periods)
def test_canonical_describes_the_same_sequence(prefix, period):
    x = EventuallyPeriodicSeq.from_text(prefix, period)
    c = x.canonical()
    n = x.window(c) + 5
    assert x.take(n) == c.take(n)
    assert c.canonical() == c


def test_with_values():
    x = EventuallyPeriodicSeq.constant(1)
    y = x.with_values({3: 0})
    assert y.take(6) == (1, 1, 1, 0, 1, 1)
    assert y.canonical().period == (1,)


def test_word_text():
    assert word_text((1, 0, 1)) == "101"
    assert word_text((12, 0), None) == "12,0"
    assert word_from_text("12,0") == (12, 0)
    assert word_from_text("") == ()


def test_arithmetic_membership():
    a = Arithmetic(1, 3)
    assert a.members_below(12) == [1, 4, 7, 10]
    assert a.density() == Fraction(1, 3)
    assert a.is_eventually_periodic()
    with pytest.raises(ValueError):
        Arithmetic(0, 0)


def test_geometric_has_density_zero():
    g = Geometric(3, 2)
    assert g.members_below(50) == [3, 6, 12, 24, 48]
    assert 96 in g and 97 not in g
    assert not g.is_eventually_periodic()
    assert g.density() == 0
    assert not g.is_finite()


def test_complement_of_geometric_is_cofinite_free():
    a = Complement(Geometric(1, 2))
    assert a.density() == 1
    assert not a.is_cofinite()


def test_finite_extent():
    assert Finite(frozenset({2, 5})).finite_extent() == 6
    assert Finite(frozenset()).is_finite()
    assert Arithmetic(0, 2).finite_extent() is None
    assert (Arithmetic(0, 2) & Arithmetic(1, 2)).is_finite()
    assert Complement(Finite(frozenset({0}))).is_cofinite()
    assert (Geometric(1, 2) & Arithmetic(1, 2)).is_finite()


def test_normalize_collapses_periodic_combinations():
    a = Complement(Arithmetic(0, 3))
    assert a.normalize() == Periodic("011")
    assert Complement(Complement(Arithmetic(0, 2))).normalize() == Periodic("10")
    b = Arithmetic(0, 2) | Arithmetic(1, 2)
    assert b.normalize() == naturals()


@settings(max_examples=60)
@given(descriptors())
def test_normalize_is_idempotent(a):
    once = a.normalize()
    assert once.normalize() == once
    assert once.members_below(64) == a.members_below(64)


@given(descriptors(), st.integers(0, 80))
def test_mask_agrees_with_membership(a, n):
    assert bool(a.mask(n + 1)[n]) == (n in a)


def test_descriptor_text():
    a = (Arithmetic(0, 3) | Finite(frozenset({1}))) & ~Periodic("10")
    assert a.to_text() == '(arith(0,3)|finite{1})&~periodic("10")'


def test_period_cap(monkeypatch):
    monkeypatch.setenv("SILVERLAB_PERIOD_CAP", "10")
    a = Arithmetic(0, 7) & Arithmetic(0, 11)
    with pytest.raises(CapExceededError):
        a.skeleton()


def test_without_merges_removals():
    a = without(without(Geometric(1, 2), [1]), [2])
    assert a.members_below(10) == [4, 8]
    assert without(naturals(), [0, 1]).members_below(4) == [2, 3]


def test_partial_assignment_basics():
    f = PartialAssignment(2, Arithmetic(2, 2), ((0, 1),))
    assert f.pattern(6) == (1, 0, None, 0, None, 0)
    assert f.first_free == 2
    assert f.stem == (1, 0)
    assert f.is_silver
    assert f.value(2) is None and f.value(3) == 0


def test_partial_assignment_validation():
    with pytest.raises(ValueError):
        PartialAssignment(2, Arithmetic(0, 2), ((0, 1),))
    with pytest.raises(ValueError):
        PartialAssignment(2, Arithmetic(1, 2), ((0, 2),))
    with pytest.raises(AlphabetMismatchError):
        PartialAssignment(3, naturals(), (), EventuallyPeriodicSeq.constant(0, 2))


def test_finite_free_set_is_not_silver():
    f = PartialAssignment(2, Finite(frozenset({1, 4})))
    assert not f.is_silver


def test_fix_shrinks_the_cylinder():
    f = PartialAssignment.empty(2)
    g = f.fix({0: 1, 3: 0})
    assert g.pattern(5) == (1, None, None, 0, None)
    assert Cylinder(g).is_subcylinder(Cylinder(f), 10)
    assert not Cylinder(f).is_subcylinder(Cylinder(g), 10)
    with pytest.raises(ValueError):
        g.fix({0: 0})


def test_completion_is_a_member():
    f = PartialAssignment(2, Periodic("1110"), (), EventuallyPeriodicSeq.constant(0))
    x = f.completion({}, default=1)
    assert x.same_as(EventuallyPeriodicSeq.from_text("", "1110"))
    assert cylinder_member(x, Cylinder(f), 40).agrees


def test_cylinder_member_reports_first_disagreement():
    f = PartialAssignment.from_word([1, None, 0])
    x = EventuallyPeriodicSeq.from_text("111", "0")
    result = cylinder_member(x, Cylinder(f), 10)
    assert not result
    assert result.position == 2
    assert str(result) == "disagrees-at 2"
    with pytest.raises(ValueError):
        cylinder_member(x, Cylinder(f), 0)
    with pytest.raises(AlphabetMismatchError):
        cylinder_member(EventuallyPeriodicSeq.constant(0, 3), Cylinder(f), 5)


def test_silver_tree_levels_match_free_coordinates():
    f = PartialAssignment(2, Arithmetic(1, 3), ((0, 1),))
    c = Cylinder(f)
    tree = tree_of(c, 8)
    assert tree.levels() == silver_levels(c, 8) == frozenset({2, 5, 8})
    report = splitting_report(tree)
    assert report.split_count == 1 + 2 + 4
    assert report.ratio == Fraction(3, 8)


def test_silver_tree_operations():
    t = SilverTree(2, (1, None))
    assert t.n_terminals() == 2
    assert (1, 0) in t and (0, 0) not in t
    assert t.graft_common((0,)).pattern == (1, None, 0)
    assert t.graft_cube(2).levels() == frozenset({2, 3, 4})
    assert t.spl_succ(()) == (1,)
    explicit = t.materialize()
    assert isinstance(explicit, FiniteTree)
    assert sorted(explicit.terminals()) == [(1, 0), (1, 1)]


def test_finite_tree_validation():
    with pytest.raises(ValueError):
        FiniteTree(2, frozenset({(0,)}))
    with pytest.raises(ValueError):
        FiniteTree(2, frozenset({(), (0, 1)}))
    cube = FiniteTree.cube(2)
    assert cube.split_depths() == (0, 1)
    assert cube.is_uniform()


def test_materialize_respects_enumeration_cap(monkeypatch):
    monkeypatch.setenv("SILVERLAB_ENUMERATION_CAP", "8")
    with pytest.raises(CapExceededError):
        SilverTree(2, (None,) * 4).materialize()

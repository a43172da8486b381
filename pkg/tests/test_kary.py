import pytest

from silverlab.coalitions import Constant, Dictator, Majority, TruthTable
from silverlab.constructions.kary import monochromatize, verify_monochrome
from silverlab.exceptions import AlphabetMismatchError
from silverlab.seqcore import Arithmetic, Cylinder, PartialAssignment


def test_ternary_majority():
    F = Majority((0, 1, 2), alphabet=3)
    result = monochromatize(F, Cylinder(PartialAssignment.empty(3)))
    assert result.value == 0
    assert result.fixed_coordinates == (0, 1)
    assert len(result.stages) == 1
    assert verify_monochrome(F, result)


def test_dictator_fixes_its_coordinate():
    result = monochromatize(Dictator(2), Cylinder(PartialAssignment.empty(2)))
    assert result.value == 0
    assert result.fixed_coordinates == (2,)
    assert result.cylinder.assignment.pattern(4) == (None, None, 0, None)


def test_constant_needs_no_fixing():
    result = monochromatize(Constant(1), Cylinder(PartialAssignment.empty(2)))
    assert result.value == 1
    assert result.fixed_coordinates == ()


def test_partition_choice_changes_the_stages():
    F = Majority((0, 1, 2), alphabet=3)
    result = monochromatize(F, Cylinder(PartialAssignment.empty(3)), [frozenset({2})])
    assert [s.kept for s in result.stages] == [(0, 1), (0,)]
    assert result.stages[1].fixed == ()
    assert verify_monochrome(F, result)


def test_only_free_support_is_fixed():
    F = TruthTable(3, (1, 4), "012120201")
    c = Cylinder(PartialAssignment(3, Arithmetic(2, 1), ((0, 2), (1, 1))))
    result = monochromatize(F, c)
    assert set(result.fixed_coordinates) <= {4}
    assert result.cylinder.is_subcylinder(c, 8)
    assert verify_monochrome(F, result)


def test_alphabets_must_agree():
    with pytest.raises(AlphabetMismatchError):
        monochromatize(Dictator(0), Cylinder(PartialAssignment.empty(3)))

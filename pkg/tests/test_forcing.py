from dataclasses import dataclass
from fractions import Fraction

import numpy as np
import pytest

from silverlab.constructions.forcing import (
    SpineMap,
    Sweep,
    UniformFiniteTree,
    build_delta_tree,
    check_terminals,
    densify,
    densify_audit,
    end_extends,
    generic_stage,
    meet_dense,
    root,
    thread_suffix,
)
from silverlab.constructions.oracles import (
    AppendOracle,
    DenseOracle,
    IdentityOracle,
    PatternOracle,
    ones,
    preset,
    random_family,
)
from silverlab.exceptions import CapExceededError, ConstructionError
from silverlab.seqcore import (
    Arithmetic,
    Finite,
    FiniteTree,
    PartialAssignment,
    SilverTree,
)


@dataclass(frozen=True)
class ForgetfulOracle(DenseOracle):
    alphabet: int = 2

    def extend(self, word):
        return (0,)

    def to_text(self):
        return "forgetful"


def test_meet_dense_from_the_root():
    q = meet_dense(root(), ones(2))
    assert q.pattern == (1, 1)
    assert end_extends(q, root())


def test_sweep_stops_once_the_suffix_absorbs():
    p = SilverTree(2, (None,))
    sweep = thread_suffix(p, ones(2))
    assert sweep.suffix == (1, 1)
    assert sweep.visited == 1
    assert sweep.method == "absorbed"
    q = meet_dense(p, ones(2))
    assert q.pattern == (None, 1, 1)
    assert check_terminals(q, ones(2)).ok


def test_append_oracle_decides_words_containing_its_suffix():
    p = SilverTree(2, (None,))
    oracle = AppendOracle((1, 0))
    assert oracle.contains((0, 1, 0, 0))
    assert oracle.contains((0, 1)) is None
    sweep = thread_suffix(p, oracle)
    assert sweep.suffix == (1, 0)
    assert sweep.visited == 1
    assert sweep.method == "absorbed"
    assert str(check_terminals(p.graft_common(sweep.suffix), oracle)) == "ok (enumerated)"


def test_undecided_terminals_fail_the_check(monkeypatch):
    assert str(check_terminals(SilverTree(2, (None,)), ForgetfulOracle())) == "FAILED (unverified)"
    assert str(check_terminals(SilverTree(2, (None,)), AppendOracle((1,)))) == "FAILED (unverified)"

    monkeypatch.setenv("SILVERLAB_ENUMERATION_CAP", "2")
    tree = root(2).graft_cube(3)
    check = check_terminals(tree, PatternOracle((0, 1, 0, 1, 0)))
    assert not check.ok
    assert check.method == "unverified"


def test_a_terminal_outside_D_fails_the_check():
    check = check_terminals(UniformFiniteTree.cube(1), PatternOracle((1,)))
    assert str(check) == "FAILED (enumerated)"


def test_meet_dense_on_explicit_trees():
    p = UniformFiniteTree.cube(1)
    q = meet_dense(p, ones(2))
    assert isinstance(q, UniformFiniteTree)
    assert sorted(q.terminals()) == [(0, 1, 1), (1, 1, 1)]
    assert end_extends(q, p)
    assert not end_extends(p, q)


def test_uniform_trees_reject_ragged_terminals():
    with pytest.raises(ValueError):
        UniformFiniteTree(2, frozenset({(), (0,), (1,), (1, 0)}))


def test_end_extension_compares_the_cut():
    assert end_extends(FiniteTree.cube(2), FiniteTree.cube(1))
    lopsided = FiniteTree.from_words([(0, 0), (0, 1)])
    assert not end_extends(lopsided, FiniteTree.cube(1))


def test_generic_stage_meets_each_set():
    q = generic_stage(root(), [ones(1), ones(2)])
    assert q.pattern == (1, 1, 1)
    assert check_terminals(q, ones(2)).ok


def test_oracle_contract_is_enforced():
    with pytest.raises(ConstructionError):
        meet_dense(SilverTree(2, (1,)), ForgetfulOracle())
    with pytest.raises(ConstructionError):
        meet_dense(SilverTree(3, ()), ones(1))


def test_large_sweeps_fall_back_to_absorbing_words(monkeypatch):
    monkeypatch.setenv("SILVERLAB_ENUMERATION_CAP", "1")
    p = SilverTree(2, (None, None))
    sweep = thread_suffix(p, ones(2))
    assert sweep == thread_suffix(p, PatternOracle((1, 1)))
    assert sweep.suffix == (1, 1)
    assert sweep.method == "absorbed"
    assert thread_suffix(p, AppendOracle((1,))) == Sweep((1,), 0, "absorbed")
    with pytest.raises(CapExceededError):
        thread_suffix(p, ForgetfulOracle())


def test_presets():
    assert preset("identity") == IdentityOracle()
    assert preset("ones", 2).to_text() == "ones(3)"
    assert preset("pattern:0110").to_text() == 'pattern("0110")'
    assert preset("append:11").to_text() == 'append("11")'
    with pytest.raises(ValueError):
        preset("zeros")


def test_random_family_is_reproducible():
    a = random_family(np.random.default_rng(7), 5)
    b = random_family(np.random.default_rng(7), 5)
    assert a == b
    assert all(1 <= len(o.pattern) <= 4 for o in a)


def test_delta_tree_rounds():
    result = build_delta_tree([ones(1), ones(2), ones(3)], Fraction(3, 4), 2)
    assert result.ok
    audit = result.audit()
    assert list(audit["round"]) == [0, 1, 2]
    assert list(audit["ratio"]) == ["1/2", "1/4", "4/7"]
    assert list(audit["bound"]) == ["", "0", "3/8"]
    assert audit["terminals_ok"].all()
    assert result.tree.height == 14
    assert len(result.tree.levels()) == 8
    for earlier, later in zip(result.stages, result.stages[1:]):
        assert end_extends(later, earlier)


def test_delta_tree_reuses_the_last_oracle():
    result = build_delta_tree([ones(2)], Fraction(1, 2), 3)
    assert [r.oracle for r in result.records] == ["ones(2)"] * 4
    assert result.ok


def test_delta_tree_arguments():
    with pytest.raises(ValueError):
        build_delta_tree([ones(1)], Fraction(1, 2), 0)
    with pytest.raises(ValueError):
        build_delta_tree([], Fraction(1, 2), 1)
    with pytest.raises(ValueError):
        build_delta_tree([ones(1)], Fraction(3, 2), 1)


def test_identity_oracle_starts_with_unit_cube():
    result = build_delta_tree([IdentityOracle()], Fraction(1, 2), 1)
    first = result.records[0]
    assert first.suffix == ()
    assert first.cube == 1
    assert result.stages[0].pattern == (None,)


@pytest.fixture
def sparse_spine():
    return SpineMap(PartialAssignment(2, Arithmetic(1, 2), ((0, 1),)))


@pytest.fixture
def dense_spine():
    return SpineMap(PartialAssignment(2, Arithmetic(1, 1), ((0, 1),)))


def test_spine_images(sparse_spine):
    assert [sparse_spine.free_coordinate(i) for i in range(3)] == [1, 3, 5]
    assert sparse_spine.image((1,)) == ()
    assert sparse_spine.lift((1,)) == (1, 1, 0)
    assert sparse_spine.image((1, 1, 0)) == (1,)
    assert sparse_spine.expand((1, 0, 0, 1)) == (0, 1)
    with pytest.raises(ValueError):
        sparse_spine.image((0,))
    with pytest.raises(ValueError):
        sparse_spine.image((1, 0))
    assert sparse_spine.check(8)


def test_spine_preimage_ratio(sparse_spine):
    q = SilverTree(2, (None, None))
    pre = sparse_spine.preimage(q)
    assert pre.pattern == (1, None, 0, None, 0)
    assert sparse_spine.ratio(q) == pre.ratio() == Fraction(2, 5)


def test_spine_needs_a_binary_silver_source():
    with pytest.raises(ValueError):
        SpineMap(PartialAssignment(3, Arithmetic(0, 1)))
    with pytest.raises(ValueError):
        SpineMap(PartialAssignment(2, Finite(frozenset({1, 2}))))


def test_densify_adds_the_fewest_levels(sparse_spine):
    q = densify(root(), Fraction(3, 4), 1, sparse_spine)
    assert q.pattern == (None, None)
    assert sparse_spine.ratio(q) >= Fraction(3, 8)
    assert densify(q, Fraction(3, 4), 1, sparse_spine) is q
    with pytest.raises(ValueError):
        densify(root(), Fraction(3, 4), -1, sparse_spine)


def test_densify_ratios_never_decrease(dense_spine):
    q, audit = densify_audit(root(), Fraction(3, 4), [1, 2, 3], dense_spine)
    assert list(audit["added"]) == [1, 1, 0]
    assert list(audit["ratio"]) == ["1/2", "2/3", "2/3"]
    assert list(audit["bound"]) == ["3/8", "9/16", "21/32"]
    assert audit["ok"].all()
    assert q.height == 2


@pytest.mark.parametrize("delta", [Fraction(1, 2), Fraction(3, 4)])
@pytest.mark.parametrize("seed", range(50))
def test_delta_trees_from_random_families(seed, delta):
    rng = np.random.default_rng(seed)
    oracles = random_family(rng, int(rng.integers(2, 6)))
    result = build_delta_tree(oracles, delta, len(oracles) - 1)
    for record in result.records:
        assert record.terminals.ok, record
        assert record.terminals.method in ("enumerated", "absorbed")
        assert record.ratio_ok, record
    assert result.ok

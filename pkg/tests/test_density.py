from fractions import Fraction

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from silverlab.density import (
    alpha,
    density_bounds,
    density_table,
    disjoint_triples,
    find_triples,
    in_D_delta,
    is_upper_dense,
    profile,
    triples_needed,
    upper_dense,
)
from silverlab.seqcore import (
    Arithmetic,
    Complement,
    Finite,
    Geometric,
    Intersection,
    PartialAssignment,
    Periodic,
    Union_,
    naturals,
)


def test_alpha_counts_the_closed_interval():
    assert alpha(naturals(), 10) == Fraction(11, 10)
    assert alpha(Arithmetic(0, 2), 10) == Fraction(6, 10)
    with pytest.raises(ValueError):
        alpha(naturals(), 0)


def test_complement_of_multiples_of_three():
    a = Complement(Arithmetic(0, 3))
    table = density_table(a, [10, 100, 1000, 10000])
    assert list(table["n"]) == [10, 100, 1000, 10000]
    assert table["within_bound"].all()
    assert (table["exact"] == "2/3").all()
    assert abs(table["alpha_float"].iloc[-1] - 2 / 3) < 1e-3


def test_geometric_density_tends_to_zero():
    prof = profile(Geometric(1, 2), [10, 100, 1000])
    assert prof.exact_density == 0
    values = [v for _, v in prof.samples]
    assert values == sorted(values, reverse=True)
    assert values[-1] == Fraction(10, 1000)


def test_density_bounds_window():
    b = density_bounds(Periodic("1110"), [10, 100, 1000, 10000])
    assert b.window == (1000, 10000)
    assert b.exact == Fraction(3, 4)
    assert b.lower <= b.upper
    assert "exact=3/4" in str(b)


def test_horizons_must_increase():
    with pytest.raises(ValueError):
        profile(naturals(), [100, 10])
    with pytest.raises(ValueError):
        profile(naturals(), [])


def test_no_triples_at_density_two_thirds():
    assert find_triples(Complement(Arithmetic(0, 3)), 10000) == []
    assert find_triples(Periodic("110"), 10000) == []


def test_triples_in_a_dense_periodic_set():
    triples = find_triples(Periodic("1110"), 20)
    assert triples == [0, 4, 8, 12, 16]
    assert find_triples(naturals(), 6) == [0, 1, 2, 3, 4]
    assert disjoint_triples([0, 1, 2, 3, 4]) == [0, 3]
    with pytest.raises(ValueError):
        find_triples(naturals(), 2)


def _brute_force_triples(a, horizon):
    return [h for h in range(horizon - 1) if h in a and h + 1 in a and h + 2 in a]


@settings(max_examples=50)
@given(st.text(alphabet="01", min_size=1, max_size=8), st.integers(3, 200))
def test_find_triples_matches_brute_force(period, horizon):
    a = Periodic(period)
    assert find_triples(a, horizon) == _brute_force_triples(a, horizon)


@settings(max_examples=200)
@given(st.text(alphabet="01", min_size=1, max_size=12))
def test_dense_periods_promise_enough_triples(period):
    a = Periodic(period)
    if a.density() < Fraction(3, 4):
        return
    horizon = 10000
    found = disjoint_triples(find_triples(a, horizon))
    assert len(found) >= triples_needed(len(period), horizon)


def test_ideal_membership():
    assert in_D_delta(Arithmetic(0, 2), Fraction(1, 2))
    assert not in_D_delta(Periodic("1110"), Fraction(1, 2))
    assert in_D_delta(Finite(frozenset({1, 2, 3})), Fraction(0))
    assert is_upper_dense(Periodic("1110"), Fraction(3, 4))


def test_upper_dense_condition():
    f = PartialAssignment(2, Periodic("1110"))
    assert upper_dense(f, Fraction(3, 4))
    assert not upper_dense(f, Fraction(4, 5))
    g = PartialAssignment(2, Finite(frozenset({0, 1})))
    assert not upper_dense(g, Fraction(0))


_atoms = st.one_of(
    st.builds(Finite, st.frozensets(st.integers(0, 10_000), max_size=20)),
    st.builds(Arithmetic, st.integers(0, 50), st.integers(1, 12)),
    st.builds(Geometric, st.integers(1, 20), st.integers(2, 5)),
    st.builds(
        Periodic,
        st.text(alphabet="01", min_size=1, max_size=10),
        st.text(alphabet="01", max_size=6),
    ),
)

descriptors = st.recursive(
    _atoms,
    lambda inner: st.one_of(
        st.builds(Complement, inner),
        st.builds(Union_, inner, inner),
        st.builds(Intersection, inner, inner),
    ),
    max_leaves=4,
)


@settings(max_examples=500, deadline=None, derandomize=True)
@given(descriptors, st.integers(1, 10_000))
def test_alpha_matches_membership_count(a, n):
    assert alpha(a, n) == Fraction(sum(1 for k in range(n + 1) if k in a), n)

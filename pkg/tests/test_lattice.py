import random

import pytest
from hypothesis import given, strategies as st

from latlang import (
    bound,
    build_lattice,
    cons,
    dual,
    identity_morphism,
    make_lattice_morphism,
    standard_lattice,
)
from latlang.errors import (
    NotALattice,
    NotAntisymmetric,
    NotOrderPreserving,
    SizeOutOfRange,
    TrivialLattice,
    UnknownElement,
)
from latlang.variety import random_lattice

POOL = [random_lattice(random.Random(seed), 8) for seed in range(12)]
POOL += [standard_lattice("powerset", 2), standard_lattice("powerset", 3), standard_lattice("chain", 5)]


def test_powerset_from_covers():
    lat = build_lattice(
        ["{}", "{1}", "{2}", "{1,2}"],
        [("{}", "{1}"), ("{}", "{2}"), ("{1}", "{1,2}"), ("{2}", "{1,2}")],
    )
    assert lat.elements[lat.top] == "{1,2}"
    assert lat.elements[lat.bottom] == "{}"
    assert lat.join("{1}", "{2}") == lat.index("{1,2}")
    assert lat.meet("{1}", "{2}") == lat.index("{}")


def test_three_chain_from_covers():
    lat = build_lattice(["0", "1/2", "1"], [("0", "1/2"), ("1/2", "1")])
    assert lat.le("0", "1") and not lat.le("1", "1/2")
    assert lat.elements[lat.top] == "1"


def test_two_minimal_upper_bounds_rejected():
    with pytest.raises(NotALattice) as err:
        build_lattice(
            ["a", "b", "c", "d"],
            [("c", "a"), ("c", "b"), ("d", "a"), ("d", "b")],
        )
    assert err.value.witness["pair"]


def test_cycle_rejected():
    with pytest.raises(NotAntisymmetric):
        build_lattice(["a", "b"], [("a", "b"), ("b", "a")])


def test_trivial_rejected():
    with pytest.raises(TrivialLattice):
        build_lattice(["a"], [])


def test_full_relation_input():
    lat = build_lattice(
        ["lo", "hi"], [("lo", "lo"), ("lo", "hi"), ("hi", "hi")], relation="full"
    )
    assert lat.le("lo", "hi")


def test_standard_powerset():
    lat = standard_lattice("powerset", 2)
    assert lat.elements == ("{}", "{1}", "{2}", "{1,2}")
    assert not lat.le("{1}", "{2}") and not lat.le("{2}", "{1}")
    assert lat.elements[lat.top] == "{1,2}"


def test_standard_chain_and_boolean():
    b = standard_lattice("boolean")
    c2 = standard_lattice("chain", 2)
    assert b.elements == c2.elements == ("0", "1")
    with pytest.raises(SizeOutOfRange):
        standard_lattice("chain", 1)
    with pytest.raises(SizeOutOfRange):
        standard_lattice("powerset", 0)


def test_bound():
    lat = standard_lattice("powerset", 2)
    assert bound(lat, "join", ["{1}", "{2}"]) == lat.index("{1,2}")
    assert bound(lat, "meet", list(lat.elements)) == lat.bottom
    assert bound(lat, "join", []) == lat.bottom
    assert bound(lat, "meet", []) == lat.top
    with pytest.raises(UnknownElement):
        bound(lat, "join", ["nope"])


def test_morphisms():
    lat = standard_lattice("powerset", 2)
    ident = make_lattice_morphism(lat, list(range(lat.size)))
    assert ident.mapping == identity_morphism(lat).mapping
    constant = cons(lat, "{1}")
    assert all(v == lat.index("{1}") for v in constant.mapping)
    chain3 = standard_lattice("chain", 3)
    with pytest.raises(NotOrderPreserving) as err:
        make_lattice_morphism(chain3, ["1", "0", "2"])
    assert err.value.witness["pair"] == ["0", "1"]


def test_dual_examples():
    chain3 = standard_lattice("chain", 3)
    d = dual(chain3)
    assert d.le("2", "0") and not d.le("0", "2")
    assert d.top == chain3.bottom and d.bottom == chain3.top
    p2 = standard_lattice("powerset", 2)
    dp = dual(p2)
    assert dp.join_table == p2.meet_table and dp.meet_table == p2.join_table


@given(st.sampled_from(POOL), st.data())
def test_lattice_laws(lat, data):
    n = lat.size
    a = data.draw(st.integers(0, n - 1))
    b = data.draw(st.integers(0, n - 1))
    c = data.draw(st.integers(0, n - 1))
    J, M = lat.join_table, lat.meet_table
    assert J[a][b] == J[b][a] and M[a][b] == M[b][a]
    assert J[a][J[b][c]] == J[J[a][b]][c]
    assert M[a][M[b][c]] == M[M[a][b]][c]
    assert J[a][a] == a and M[a][a] == a
    assert J[a][M[a][b]] == a and M[a][J[a][b]] == a
    assert lat.leq[a][b] == (J[a][b] == b) == (M[a][b] == a)


@given(st.sampled_from(POOL))
def test_dual_involution(lat):
    assert dual(dual(lat)) == lat


@given(st.sampled_from(POOL), st.data())
def test_bound_splits_over_union(lat, data):
    subset = st.lists(st.integers(0, lat.size - 1), max_size=4)
    s = data.draw(subset)
    t = data.draw(subset)
    joined = bound(lat, "join", s + t)
    assert joined == lat.join_table[bound(lat, "join", s)][bound(lat, "join", t)]


@given(st.sampled_from(POOL), st.data())
def test_morphism_composition_closed(lat, data):
    elements = st.integers(0, lat.size - 1)
    f = cons(lat, data.draw(elements))
    x = data.draw(elements)
    g = make_lattice_morphism(lat, [lat.join_table[v][x] for v in range(lat.size)])
    f.then(g)
    g.then(f)

"""Family bases and the differential: counts, worked examples, d-squared."""

import random

import pytest

from natops.complexes import (
    FAMILIES,
    d_squared_zero,
    delta_graph,
    differential,
    enumerate_basis,
    member,
    nabla_bigrade_split,
)
from natops.formal import FormalSum, combine
from natops.graphs import (
    CONNECTION,
    EMPTY,
    disjoint_union,
    is_connected,
)

from .helpers import chain_xy, chain_yx, unit


@pytest.mark.parametrize(
    "family,d,m,count",
    [
        ("bullet", 2, 0, 4),
        ("bullet", 1, 0, 1),
        ("bullet-nabla-1", 2, 0, 4),
        ("bullet-nabla-1", 2, 1, 1),
        ("bullet-connected", 2, 0, 2),
        ("bullet-wheel", 0, 0, 1),  # the empty graph, the scalar unit
    ],
)
def test_basis_counts(family, d, m, count):
    assert len(enumerate_basis(family, d, m).graphs) == count


def test_basis_is_deterministic_and_memberwise_valid():
    a = enumerate_basis("bullet-nabla-1", 3, 1)
    b = enumerate_basis("bullet-nabla-1", 3, 1)
    assert a.graphs == b.graphs
    fam = FAMILIES["bullet-nabla-1"]
    for g in a.graphs:
        assert member(fam, g, 3, 1)


def test_port_balance_holds_on_members():
    for g in enumerate_basis("bullet-nabla-1", 3, 1).graphs:
        sv = sum(v.order for v in g.vertices if v.kind == "vector")
        sw = sum(v.order for v in g.vertices if v.kind == CONNECTION)
        k = g.count(CONNECTION)
        su = sum(v.order - 1 for v in g.vertices if v.kind == "white")
        assert sv + sw + k + su == 3 - 1


def test_differential_of_chain_is_single_white_graph():
    d = differential(FormalSum.of(chain_xy()))
    assert len(d) == 1
    ((g, c),) = list(d)
    assert c == 1
    assert g.degree == 1
    w = [v for v in g.vertices if v.kind == "white"]
    assert len(w) == 1 and w[0].order == 2


def test_differential_of_unit_and_bracket_vanish():
    assert not differential(FormalSum.of(unit()))
    b = combine(FormalSum.of(chain_xy()), FormalSum.of(chain_yx()), 1, -1)
    assert not differential(b)


def test_differential_rejects_mixed_degree():
    x = FormalSum.of(chain_xy())
    y = differential(x)
    mixed = x + y
    with pytest.raises(ValueError):
        differential(mixed)


def test_degree_raises_by_one():
    for g in enumerate_basis("bullet-nabla-1", 2, 1).graphs:
        for t, _ in delta_graph(g):
            assert t.degree == 2


def test_connectivity_preserved_on_connected_families():
    for g in enumerate_basis("bullet-nabla-1", 3, 0).graphs:
        for t, _ in delta_graph(g):
            assert is_connected(t)


def _shift_labels(g, offset):
    from natops.graphs import relabel

    mapping = {}
    for v in g.vertices:
        if v.kind == "vector":
            mapping[v.label] = "X%d" % (int(v.label[1:]) + offset)
    return relabel(g, mapping)


def test_component_rule_on_disjoint_unions():
    """delta(G1 u G2) = delta(G1) u G2 + (-1)^{deg G1} G1 u delta(G2)."""
    rng = random.Random(2)
    anchored = list(enumerate_basis("bullet", 2, 0).graphs) + list(
        enumerate_basis("bullet", 2, 1).graphs
    )
    wheels = list(enumerate_basis("bullet-wheel", 2, 0).graphs) + list(
        enumerate_basis("bullet-wheel", 2, 1).graphs
    )
    for _ in range(25):
        g1 = rng.choice(anchored)
        g2 = _shift_labels(rng.choice(wheels), 2)
        both = disjoint_union(g1, g2)
        lhs = differential(FormalSum.of(both))
        rhs = FormalSum()
        for t, c in delta_graph(g1):
            rhs.add_graph(disjoint_union(t, g2), c)
        sign = (-1) ** g1.degree
        for t, c in delta_graph(g2):
            rhs.add_graph(disjoint_union(g1, t), sign * c)
        assert lhs == rhs


@pytest.mark.parametrize(
    "family,d",
    [
        ("bullet", 2),
        ("bullet", 3),
        ("bullet-wheel", 2),
        ("bullet-wheel", 3),
        ("bullet-nabla-1", 2),
        ("bullet-nabla-1", 3),
        ("bullet-nabla-wheel", 2),
        ("bullet-nabla-wheel", 3),
        ("bullet-nabla-trace", 1),
        ("bullet-nabla", 2),
        ("bullet-connected", 3),
    ],
)
def test_d_squared_zero_small(family, d):
    rep = d_squared_zero(family, d)
    assert rep.failures == []
    assert rep.checked > 0


def test_bigrade_split():
    for g in enumerate_basis("bullet-nabla-1", 3, 0).graphs:
        same, less = nabla_bigrade_split(g)  # raises on any other jump
        total = differential(FormalSum.of(g))
        assert same + less == total


def test_empty_graph_is_scalar_unit_slice():
    bs = enumerate_basis("bullet-wheel", 0, 0)
    assert bs.graphs == (EMPTY,)
    assert not differential(FormalSum.of(EMPTY))

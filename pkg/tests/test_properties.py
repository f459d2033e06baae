"""Hypothesis property tests over randomly drawn graphs and sums."""

import random
from fractions import Fraction

from hypothesis import given, settings, strategies as st

from natops.canonical import canonicalize
from natops.complexes import delta_graph, enumerate_basis
from natops.formal import FormalSum, combine
from natops.graphs import is_connected

from .helpers import shuffle_presentation

_POOL = []
for _fam, _dmax in [("bullet", 3), ("bullet-wheel", 3), ("bullet-nabla-1", 2)]:
    for _d in range(1, _dmax + 1):
        for _m in (0, 1, 2):
            _POOL.extend(enumerate_basis(_fam, _d, _m).graphs)

graphs = st.sampled_from(_POOL)
rationals = st.fractions(
    min_value=Fraction(-5), max_value=Fraction(5), max_denominator=4
)


@given(graphs, st.integers(0, 2**32))
@settings(max_examples=150, deadline=None)
def test_canonical_form_presentation_invariant(g, seed):
    rng = random.Random(seed)
    cg, sign = canonicalize(g)
    h, flip = shuffle_presentation(g, rng)
    ch, sh = canonicalize(h)
    assert ch == cg
    assert sh == sign * flip


@given(graphs, graphs, rationals, rationals)
@settings(max_examples=100, deadline=None)
def test_combine_is_bilinear(g1, g2, a, b):
    x, y = FormalSum.of(g1), FormalSum.of(g2)
    lhs = combine(x, y, a, b)
    rhs = combine(x.scale(a), y.scale(b), 1, 1)
    assert lhs == rhs
    assert combine(x, y, a, b) == combine(y, x, b, a)


@given(graphs)
@settings(max_examples=100, deadline=None)
def test_differential_raises_degree_and_keeps_components(g):
    for t, _ in delta_graph(g):
        assert t.degree == g.degree + 1
        if is_connected(g):
            assert is_connected(t)

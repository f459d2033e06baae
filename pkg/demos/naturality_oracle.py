#!/usr/bin/env python3
"""The analytic oracle: realize graphs on R^n and test invariance.

Graphs evaluate to exact tensor contractions of jet arrays.  A formal sum
is natural when its value commutes with every polynomial coordinate
change; the oracle draws seeded rational jets and changes and compares
both sides exactly.  The two textbook non-examples fail; the bracket and
the covariant derivative pass.  Below the stable dimension the
realization is not injective: the two trace-pair graphs collide at n = 1.
"""

import random

from natops import FormalSum, lie_expand, naturality_check, realize
from natops.jets import random_jet_data
from natops.graphs import SYM, Graph, anchor, vector

o2 = Graph(  # X^j Y^i_j d/dx^i: one chain, not invariant
    (vector("X1", 0), vector("X2", 1), anchor),
    ((1, SYM), (2, SYM), None),
)
divergence = Graph(  # X * tr(DY): value times a trace, not invariant
    (vector("X1", 0), vector("X2", 1), anchor),
    ((2, SYM), (1, SYM), None),
)

for name, x, n in [
    ("bracket", lie_expand("(b X1 X2)"), 3),
    ("covariant derivative", lie_expand("(c X1 X2)"), 3),
    ("chain O2", FormalSum.of(o2), 2),
    ("divergence graph", FormalSum.of(divergence), 2),
]:
    bad = naturality_check(x, n, trials=20, seed=7)
    print("%-22s n=%d: %s" % (name, n, "natural" if bad is None
                              else "counterexample at trial %d" % bad.trial))

print("\nstability boundary:")
for n in (1, 2):
    data = random_jet_data(random.Random(5), n, ["X1", "X2"], 1)
    same = realize(FormalSum.of(o2), data) == realize(
        FormalSum.of(divergence), data)
    print("  n=%d: realizations %s" % (n, "collide" if same else "differ"))

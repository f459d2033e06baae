#!/usr/bin/env python3
"""The bilinear worked example: why the Lie bracket is the only game.

The degree-0 slice of bilinear vector-field operators has four graphs:
the two chains (one field feeding the other's derivative slot) and the
two trace graphs (one field times the divergence of the other).  The
differential kills exactly the antisymmetrized chain, so the operator
space is one-dimensional, spanned by the bracket.
"""

from natops import (
    FormalSum,
    differential,
    enumerate_basis,
    h0_dimension,
    kernel_basis,
    key_bytes,
    naturality_check,
)

slice0 = enumerate_basis("bullet", 2, 0)
print("degree-0 graphs for bilinear operators on vector fields:")
for g in slice0.graphs:
    d = differential(FormalSum.of(g))
    print("  %-45s delta -> %d term(s)" % (key_bytes(g).decode(), len(d)))

print("\nkernel of the degree-0 differential:")
(bracket,) = kernel_basis("bullet", 2)
for g, c in bracket.sorted_terms():
    print("  %+d * %s" % (c, key_bytes(g).decode()))

print("\nh0 dimensions for d = 1..4 (should be (d-1)!):")
print(" ", [h0_dimension("bullet", d) for d in (1, 2, 3, 4)])

print("\nnaturality of the bracket at n = 3, 20 seeded trials:",
      "pass" if naturality_check(bracket, 3) is None else "FAIL")

# a single chain by itself is *not* a natural operator
chain = FormalSum.of(slice0.graphs[1])
bad = naturality_check(chain, 2, trials=20, seed=7)
print("a bare chain fails naturality at trial", bad.trial)

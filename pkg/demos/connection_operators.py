#!/usr/bin/env python3
"""Operators on a connection and d vector fields: dimensions 1, 3, 26.

The degree-0 kernel is generated by covariant derivatives and brackets;
the replacement rule for a connection vertex of derivative order >= 2 is
not written down anywhere — it is derived by matching candidate local
trees against the linearized coordinate-change action, and the order-0/1
cases of the derivation must reproduce the fixed tables exactly.
"""

from natops import (
    differential,
    h0_dimension,
    kernel_basis,
    lie_expand,
    replace_connection,
)
from natops.rules import derive_connection_rule, _template_key

print("h0(bullet-nabla-1, d) for d = 1..3:")
print(" ", [h0_dimension("bullet-nabla-1", d) for d in (1, 2, 3)])

print("\nthe d = 2 kernel has dimension", len(kernel_basis("bullet-nabla-1", 2)))
covar = lie_expand("(c X1 X2)")
print("covariant derivative is a cocycle:", not differential(covar))

print("\nderived connection rules:")
for w in (0, 1, 2):
    tpl = replace_connection(w)
    lone = [t for t in tpl.terms if len(t.internals) == 1]
    print("  order %d: %2d terms, closing white arity %d with coefficient %d"
          % (w, len(tpl.terms), lone[0].internals[0].order, lone[0].coeff))

print("\nregression: derivation reproduces the order-0/1 tables:",
      _template_key(derive_connection_rule(0, 4))
      == _template_key(replace_connection(0))
      and _template_key(derive_connection_rule(1, 6))
      == _template_key(replace_connection(1)))

word = "(c (b X1 X2) X3)"
x = lie_expand(word)
print("\n%s expands to %d monomials; cocycle: %s"
      % (word, len(x), not differential(x)))

"""Formal rational linear combinations of canonical graphs."""

from __future__ import annotations

from fractions import Fraction

from .canonical import ZERO, canonicalize, key_bytes


class FormalSum:
    """Finite map from canonical graphs to nonzero rational coefficients."""

    __slots__ = ("terms",)

    def __init__(self, terms=None):
        self.terms = {}
        if terms:
            for graph, coeff in dict(terms).items():
                if coeff:
                    self.terms[graph] = Fraction(coeff)

    @classmethod
    def of(cls, graph, coeff=1):
        """Sum with a single, not necessarily canonical, presentation."""
        s = cls()
        s.add_graph(graph, coeff)
        return s

    def add_graph(self, graph, coeff=1):
        """Accumulate ``coeff`` times a raw presentation (canonicalizing)."""
        cg, sign = canonicalize(graph)
        if cg is ZERO:
            return
        self.add_canonical(cg, Fraction(coeff) * sign)

    def add_canonical(self, cg, coeff):
        if not coeff:
            return
        c = self.terms.get(cg)
        if c is None:
            self.terms[cg] = coeff
        else:
            c = c + coeff
            if c:
                self.terms[cg] = c
            else:
                del self.terms[cg]

    def __iter__(self):
        return iter(self.terms.items())

    def __len__(self):
        return len(self.terms)

    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        return isinstance(other, FormalSum) and self.terms == other.terms

    def __hash__(self):
        raise TypeError("FormalSum is mutable during assembly; not hashable")

    def __add__(self, other):
        return combine(self, other, 1, 1)

    def __sub__(self, other):
        return combine(self, other, 1, -1)

    def __neg__(self):
        return self.scale(-1)

    def scale(self, a):
        a = Fraction(a)
        out = FormalSum()
        if a:
            out.terms = {g: c * a for g, c in self.terms.items()}
        return out

    def map_graphs(self, fn):
        """Apply a graph -> graph map to every term and re-canonicalize."""
        out = FormalSum()
        for g, c in self.terms.items():
            out.add_graph(fn(g), c)
        return out

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: key_bytes(t[0]))

    def __repr__(self):
        if not self.terms:
            return "FormalSum(0)"
        bits = []
        for g, c in self.sorted_terms():
            bits.append("%s * %s" % (c, key_bytes(g).decode()))
        return "FormalSum(" + " + ".join(bits) + ")"


def combine(a, b, alpha=1, beta=1):
    """Exact alpha*a + beta*b; zero coefficients are dropped."""
    alpha, beta = Fraction(alpha), Fraction(beta)
    out = FormalSum()
    if alpha:
        out.terms = {g: c * alpha for g, c in a.terms.items()}
    for g, c in b.terms.items():
        out.add_canonical(g, c * beta)
    return out


zero_sum = FormalSum

"""Generating-function arithmetic for operator-space dimensions.

Two independent routes to the dimension sequence of the connection-and-
vector-field operator spaces: a direct recursion (explicit double sum over
compositions) and a coefficient-by-coefficient solution of the functional
equation  exp(g) * (1 - t - g^2) = 1.  Both report plain integers; a
quadratic-dual identity q(-g(t)) = -t with q(t) = exp(t) - 1 + t^2 ties
the series to its dual, and the same machinery yields the factorial
dimensions (d-1)! of the bracket-only operators.
"""

from __future__ import annotations

from fractions import Fraction
from math import factorial

from .series import Series, solve_fixed_coefficients


def _compositions(total, parts):
    if parts == 1:
        if total >= 1:
            yield (total,)
        return
    for first in range(1, total - parts + 2):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def g_recursion(N):
    """g_1..g_N by the direct recursion (seeded with g_1 = 1).

    g_{n+1}/(n+1)! collects rooted-tree contributions: compositions of n
    weighted 1/s!, plus compositions of n+1 weighted (s(s-1)-1)/s! for
    s >= 2.  Asserts integrality of every term of the sequence.
    """
    if N < 1:
        raise ValueError("N must be >= 1")
    g = {1: Fraction(1)}
    for n in range(1, N):
        total = Fraction(0)
        for s in range(1, n + 1):
            c = Fraction(1, factorial(s))
            for comp in _compositions(n, s):
                prod = c
                for i in comp:
                    prod *= g[i] / factorial(i)
                total += prod
        for s in range(2, n + 2):
            c = Fraction(s * (s - 1) - 1, factorial(s))
            for comp in _compositions(n + 1, s):
                if any(i > n for i in comp):
                    continue
                prod = c
                for i in comp:
                    prod *= g[i] / factorial(i)
                total += prod
        g[n + 1] = total * factorial(n + 1)
    out = []
    for d in range(1, N + 1):
        if g[d].denominator != 1:
            raise ArithmeticError("non-integer dimension g_%d = %s" % (d, g[d]))
        out.append(int(g[d]))
    return out


def g_series(N):
    """EGF solution of exp(g) (1 - t - g^2) = 1 truncated at t^N."""
    t = Series.t(N)

    def residual(f):
        # exp(-g) + g^2 + t - 1 vanishes iff the functional equation holds
        return (-f).exp() + f * f + t - Series([1], N)

    return solve_fixed_coefficients(residual, N)


def g_functional(N):
    """g_1..g_N from the functional equation; exact, integer-checked."""
    f = g_series(N)
    out = []
    for d in range(1, N + 1):
        v = f[d] * factorial(d)
        if v.denominator != 1:
            raise ArithmeticError("non-integer dimension at d=%d" % d)
        out.append(int(v))
    return out


def q_series(N):
    """The quadratic-dual series exp(t) - 1 + t^2."""
    t = Series.t(N)
    return t.exp() - Series([1], N) + t * t


def dual_consistency(N):
    """Check q(-g(t)) + t = 0 through order N; returns True or raises."""
    g = g_series(N)
    t = Series.t(N)
    r = q_series(N).compose(-g) + t
    if not r.is_zero():
        raise ArithmeticError("quadratic-dual identity fails: %r" % r)
    return True


def lie_dimensions(N):
    """Dimensions of the bracket-only operator spaces via the dual of the
    one-commutative-product equation: exp(-l) - 1 + t = 0."""
    t = Series.t(N)

    def residual(f):
        return (-f).exp() - Series([1], N) + t

    l = solve_fixed_coefficients(residual, N)
    out = []
    for d in range(1, N + 1):
        v = l[d] * factorial(d)
        if v.denominator != 1:
            raise ArithmeticError("non-integer Lie dimension at d=%d" % d)
        out.append(int(v))
    return out


def table(N):
    """Rows (d, g_d, (d-1)!) for the CLI."""
    gs = g_functional(N)
    return [(d, gs[d - 1], factorial(d - 1)) for d in range(1, N + 1)]

"""Exact linear algebra helpers shared by homology and the rule derivation.

Everything is over the rationals; no floating point.  Rank uses Bareiss
fraction-free elimination on cleared-denominator integer matrices, kernels
come from reduced row echelon form.
"""

from __future__ import annotations

from fractions import Fraction
from math import gcd


def _clear_denominators(rows):
    out = []
    for row in rows:
        lcm = 1
        for x in row:
            d = Fraction(x).denominator
            lcm = lcm * d // gcd(lcm, d)
        out.append([int(Fraction(x) * lcm) for x in row])
    return out


def rank(rows):
    """Rank by Bareiss fraction-free elimination (exact, integer pivots)."""
    m = _clear_denominators(rows)
    if not m:
        return 0
    nrows, ncols = len(m), len(m[0])
    r = 0
    prev = 1
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        for i in range(r + 1, nrows):
            for j in range(c + 1, ncols):
                m[i][j] = (m[r][c] * m[i][j] - m[i][c] * m[r][j]) // prev
            m[i][c] = 0
        prev = m[r][c]
        r += 1
        if r == nrows:
            break
    return r


def rref(rows):
    """Reduced row echelon form; returns (rows, pivot_columns)."""
    m = [[Fraction(x) for x in row] for row in rows]
    if not m:
        return m, []
    nrows, ncols = len(m), len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, nrows):
            if m[i][c]:
                piv = i
                break
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = 1 / m[r][c]
        m[r] = [x * inv for x in m[r]]
        for i in range(nrows):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == nrows:
            break
    return m, pivots


def nullspace(rows, ncols=None):
    """Reduced basis of the right kernel, one vector per free column."""
    if ncols is None:
        if not rows:
            raise ValueError("need ncols for an empty matrix")
        ncols = len(rows[0])
    if not rows:
        basis = []
        for j in range(ncols):
            v = [Fraction(0)] * ncols
            v[j] = Fraction(1)
            basis.append(v)
        return basis
    m, pivots = rref(rows)
    pivot_of_col = {c: r for r, c in enumerate(pivots)}
    free = [c for c in range(ncols) if c not in pivot_of_col]
    basis = []
    for fc in free:
        v = [Fraction(0)] * ncols
        v[fc] = Fraction(1)
        for c, r in pivot_of_col.items():
            v[c] = -m[r][fc]
        basis.append(v)
    return basis


def solve_unique(rows, rhs):
    """Solve A x = b when the solution is unique; None if inconsistent,
    raises ValueError if underdetermined."""
    ncols = len(rows[0])
    aug = [list(map(Fraction, row)) + [Fraction(b)] for row, b in zip(rows, rhs)]
    m, pivots = rref(aug)
    if ncols in pivots:
        return None
    if len([c for c in pivots if c < ncols]) < ncols:
        raise ValueError("underdetermined system")
    x = [Fraction(0)] * ncols
    for r, c in enumerate(pivots):
        x[c] = m[r][ncols]
    return x


class IncrementalSolver:
    """Incrementally reduced augmented system A x = b over the rationals.

    Feed rows one at a time; ``rank`` grows until it reaches the number of
    unknowns, at which point ``solution()`` returns the unique solution.
    An inconsistent row raises ArithmeticError immediately.
    """

    def __init__(self, ncols):
        self.ncols = ncols
        self.pivot_rows = {}

    @property
    def rank(self):
        return len(self.pivot_rows)

    def add(self, row, rhs):
        r = [Fraction(x) for x in row] + [Fraction(rhs)]
        for c, pr in self.pivot_rows.items():
            if r[c]:
                f = r[c]
                r = [a - f * b for a, b in zip(r, pr)]
        lead = next((c for c in range(self.ncols) if r[c]), None)
        if lead is None:
            if r[self.ncols]:
                raise ArithmeticError("inconsistent linear system")
            return False
        inv = 1 / r[lead]
        r = [x * inv for x in r]
        for c, pr in self.pivot_rows.items():
            if pr[lead]:
                f = pr[lead]
                self.pivot_rows[c] = [a - f * b for a, b in zip(pr, r)]
        self.pivot_rows[lead] = r
        return True

    def solution(self):
        if self.rank != self.ncols:
            return None
        return [self.pivot_rows[c][self.ncols] for c in range(self.ncols)]


def mat_inv(rows, unit=lambda v: bool(v)):
    """Inverse of a square matrix over any field-like scalars.

    ``unit`` decides invertibility of a pivot (dual numbers need a custom
    predicate); raises ZeroDivisionError when the matrix is singular.
    """
    n = len(rows)
    m = [
        [Fraction(x) if isinstance(x, int) else x for x in row]
        + [Fraction(1 if i == j else 0) for j in range(n)]
        for i, row in enumerate(rows)
    ]
    for c in range(n):
        piv = None
        for i in range(c, n):
            if unit(m[i][c]):
                piv = i
                break
        if piv is None:
            raise ZeroDivisionError("singular matrix")
        m[c], m[piv] = m[piv], m[c]
        inv = m[c][c]
        m[c] = [x / inv for x in m[c]]
        for i in range(n):
            if i != c and not _is_zero(m[i][c]):
                f = m[i][c]
                m[i] = [a - f * b for a, b in zip(m[i], m[c])]
    return [row[n:] for row in m]


def _is_zero(x):
    return not x

"""Exact rational linear algebra on graded basis slices.

The differential matrix of a slice has one column per degree-m basis graph
holding the coordinates of its differential in the degree-(m+1) basis; a
differential term missing from the target basis is a fatal completeness
error.  Ranks use fraction-free elimination, kernels reduced row echelon
form; the kernel of the degree-0 differential is the space of natural
operators of the family.
"""

from __future__ import annotations

from fractions import Fraction

from . import linalg
from .canonical import key_bytes
from .complexes import (
    FAMILIES,
    delta_graph_cached,
    differential,
    enumerate_basis,
)
from .formal import FormalSum
from .graphs import wheel_length


class BasisIncompleteError(RuntimeError):
    """A differential term fell outside the enumerated target slice."""


class SparseMatrixQ:
    """Sparse rational matrix keyed by (row, col)."""

    def __init__(self, nrows, ncols, entries=None):
        self.nrows = nrows
        self.ncols = ncols
        self.entries = dict(entries or {})

    def set(self, r, c, v):
        if v:
            self.entries[(r, c)] = Fraction(v)
        else:
            self.entries.pop((r, c), None)

    def get(self, r, c):
        return self.entries.get((r, c), Fraction(0))

    def dense_rows(self):
        rows = [[Fraction(0)] * self.ncols for _ in range(self.nrows)]
        for (r, c), v in self.entries.items():
            rows[r][c] = v
        return rows

    def triplets(self):
        return sorted((r, c, v) for (r, c), v in self.entries.items())

    def rank(self):
        return linalg.rank(self.dense_rows()) if self.nrows else 0

    def __repr__(self):
        return "SparseMatrixQ(%dx%d, %d nonzero)" % (
            self.nrows, self.ncols, len(self.entries))


def delta_matrix(family, d, m, source=None, target=None):
    """Exact matrix of the differential from degree m to m+1."""
    if isinstance(family, str):
        family = FAMILIES[family]
    src = source if source is not None else enumerate_basis(family, d, m)
    tgt = target if target is not None else enumerate_basis(family, d, m + 1)
    index = {g: i for i, g in enumerate(tgt.graphs)}
    mat = SparseMatrixQ(len(tgt.graphs), len(src.graphs))
    for j, g in enumerate(src.graphs):
        for cg, coeff in delta_graph_cached(g):
            i = index.get(cg)
            if i is None:
                raise BasisIncompleteError(
                    "differential term %s outside the (%s, d=%d, m=%d) basis"
                    % (key_bytes(cg).decode(), family.name, d, m + 1))
            mat.set(i, j, coeff)
    return mat


def h0_dimension(family, d):
    """dim ker of the degree-0 differential."""
    mat = delta_matrix(family, d, 0)
    return mat.ncols - mat.rank()


def kernel_basis(family, d, m=0):
    """Reduced exact basis of ker(delta) on the degree-m slice.

    Every returned element is re-verified to have vanishing differential.
    """
    if isinstance(family, str):
        family = FAMILIES[family]
    src = enumerate_basis(family, d, m)
    mat = delta_matrix(family, d, m, source=src)
    vectors = linalg.nullspace(mat.dense_rows(), ncols=mat.ncols)
    out = []
    for vec in vectors:
        s = FormalSum()
        for j, c in enumerate(vec):
            if c:
                s.add_canonical(src.graphs[j], c)
        if differential(s):
            raise AssertionError("kernel element fails differential re-check")
        out.append(s)
    return out


def coordinates(x, basis_slice):
    """Coordinate vector of a formal sum in a basis slice."""
    index = {g: i for i, g in enumerate(basis_slice.graphs)}
    vec = [Fraction(0)] * len(basis_slice.graphs)
    for g, c in x:
        i = index.get(g)
        if i is None:
            raise BasisIncompleteError("term outside slice")
        vec[i] = c
    return vec


def spans(vectors, others):
    """Do ``vectors`` span every vector in ``others`` (exact ranks)?"""
    base = [list(v) for v in vectors]
    r0 = linalg.rank(base)
    for o in others:
        if linalg.rank(base + [list(o)]) != r0:
            return False
    return True


def wheel_block_injective(family, d):
    """Check the wheel-length-preserving degree-0 differential blockwise.

    For every wheel length the block of delta keeping that length must
    have full column rank; returns {wheel_length: (rank, ncols)}.
    """
    if isinstance(family, str):
        family = FAMILIES[family]
    if family.anchored:
        raise ValueError("wheel blocks exist in anchor-free families only")
    src = enumerate_basis(family, d, 0)
    tgt = enumerate_basis(family, d, 1)
    by_len_src = {}
    for g in src.graphs:
        by_len_src.setdefault(wheel_length(g), []).append(g)
    tgt_index = {}
    for i, g in enumerate(tgt.graphs):
        tgt_index[g] = (wheel_length(g), i)
    report = {}
    for wlen, graphs in sorted(by_len_src.items()):
        rows = {}
        cols = len(graphs)
        entries = {}
        for j, g in enumerate(graphs):
            for cg, coeff in delta_graph_cached(g):
                tlen, i = tgt_index[cg]
                if tlen == wlen:
                    r = rows.setdefault(i, len(rows))
                    entries[(r, j)] = coeff
        mat = SparseMatrixQ(len(rows), cols, entries)
        rank = mat.rank()
        report[wlen] = (rank, cols)
        if rank != cols:
            raise AssertionError(
                "wheel-length-%d block of (%s, d=%d) not injective"
                % (wlen, family.name, d))
    return report

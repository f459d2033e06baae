"""Analytic oracle: tensor realization of graphs and jet transformations.

Degree-0 graphs realize as concrete multilinear contractions of jet arrays
on R^n (anchored graphs produce a vector, wheel graphs a scalar).  Jet data
transforms under polynomial coordinate changes fixing the origin; a formal
sum is *natural* when realization commutes with every such change.  All
arithmetic is exact: rationals, or rationals with a nilpotent dual part
when linearizing along a flow.

Conventions (fixed by the integer-coefficient replacement rules and
verified by the rule-derivation regression):

* vector-field jets are plain partial-derivative arrays X^a_(s1..sv);
* connection jets are classical Christoffel arrays transforming as
  G' = Dphi . G(Dphi^-1, Dphi^-1) - D2phi(Dphi^-1, Dphi^-1), pulled back
  through phi^-1 (active transformation of jets at the origin);
* a white vertex of arity s realizes the generator array H of the flow
  phi_eps = id + (eps/s!) H(x, ..., x).
"""

from __future__ import annotations

import itertools
import random
from collections import namedtuple
from fractions import Fraction
from math import factorial

from .graphs import ANCHOR, CONNECTION, SYM, VECTOR, WHITE
from .linalg import IncrementalSolver, mat_inv


class Dual:
    """Rational dual numbers a + b*eps with eps^2 = 0."""

    __slots__ = ("a", "b")

    def __init__(self, a, b=0):
        self.a = a if isinstance(a, Fraction) else Fraction(a)
        self.b = b if isinstance(b, Fraction) else Fraction(b)

    def __add__(self, o):
        if type(o) is Dual:
            return Dual(self.a + o.a, self.b + o.b)
        return Dual(self.a + o, self.b)

    __radd__ = __add__

    def __sub__(self, o):
        if type(o) is Dual:
            return Dual(self.a - o.a, self.b - o.b)
        return Dual(self.a - o, self.b)

    def __rsub__(self, o):
        return _dual(o) - self

    def __mul__(self, o):
        if type(o) is Dual:
            a, b = o.a, o.b
            return Dual(self.a * a, self.a * b + self.b * a if (b or self.b) else 0)
        return Dual(self.a * o, self.b * o)

    __rmul__ = __mul__

    def __truediv__(self, o):
        o = _dual(o)
        if not o.a:
            raise ZeroDivisionError("dual number with zero real part")
        inv = 1 / o.a
        return Dual(self.a * inv, (self.b - self.a * o.b * inv) * inv)

    def __rtruediv__(self, o):
        return _dual(o) / self

    def __neg__(self):
        return Dual(-self.a, -self.b)

    def __eq__(self, o):
        o = _dual(o)
        return self.a == o.a and self.b == o.b

    def __bool__(self):
        return bool(self.a) or bool(self.b)

    def __repr__(self):
        return "Dual(%s, %s)" % (self.a, self.b)


def _dual(x):
    return x if isinstance(x, Dual) else Dual(x)


EPS = Dual(0, 1)


# ---------------------------------------------------------------------------
# Truncated multivariate polynomials: dict {exponent tuple: coefficient}
# ---------------------------------------------------------------------------


def p_zero():
    return {}

def p_const(n, c):
    return {(0,) * n: c} if c else {}

def p_var(n, j):
    e = [0] * n
    e[j] = 1
    return {tuple(e): Fraction(1)}


def p_add_into(acc, p, c=1):
    for e, v in p.items():
        w = acc.get(e, 0) + v * c
        if w:
            acc[e] = w
        else:
            acc.pop(e, None)
    return acc


def p_mul(a, b, trunc):
    out = {}
    bitems = [(eb, vb, sum(eb)) for eb, vb in b.items()]
    for ea, va in a.items():
        da = sum(ea)
        for eb, vb, db in bitems:
            if da + db > trunc:
                continue
            e = tuple(x + y for x, y in zip(ea, eb))
            w = out.get(e, 0) + va * vb
            if w:
                out[e] = w
            else:
                out.pop(e, None)
    return out


def p_diff(a, j):
    out = {}
    for e, v in a.items():
        if e[j]:
            e2 = list(e)
            e2[j] -= 1
            out[tuple(e2)] = v * e[j]
    return out


def p_compose(a, comps, n, trunc):
    """Substitute comps[j] for variable j of ``a``; comps fix the origin."""
    powers = [{0: p_const(n, 1)} for _ in range(n)]

    def power(j, k):
        cache = powers[j]
        if k not in cache:
            cache[k] = p_mul(power(j, k - 1), comps[j], trunc)
        return cache[k]

    out = {}
    for e, v in a.items():
        term = p_const(n, 1)
        for j, k in enumerate(e):
            if k:
                term = p_mul(term, power(j, k), trunc)
        p_add_into(out, term, v)
    return out


def map_compose(F, G, n, trunc):
    return [p_compose(f, G, n, trunc) for f in F]


def map_linear_part(F, n):
    A = []
    for a in range(n):
        row = []
        for j in range(n):
            e = [0] * n
            e[j] = 1
            row.append(F[a].get(tuple(e), 0))
        A.append(row)
    return A


def _unit(x):
    if isinstance(x, Dual):
        return bool(x.a)
    return bool(x)


def map_inverse(F, n, trunc):
    """Compositional inverse of a map with invertible linear part."""
    A = map_linear_part(F, n)
    Ainv = mat_inv(A, unit=_unit)
    lin = [p_zero() for _ in range(n)]
    for a in range(n):
        for j in range(n):
            if Ainv[a][j]:
                p_add_into(lin[a], p_var(n, j), Ainv[a][j])
    high = []
    for a in range(n):
        h = dict(F[a])
        for j in range(n):
            e = [0] * n
            e[j] = 1
            h.pop(tuple(e), None)
        high.append(h)
    psi = [dict(l) for l in lin]
    for _ in range(trunc - 1):
        corr = [p_compose(h, psi, n, trunc) for h in high]
        nxt = []
        for a in range(n):
            acc = dict(lin[a])
            for j in range(n):
                if Ainv[a][j] and corr[j]:
                    p_add_into(acc, corr[j], -Ainv[a][j])
            nxt.append(acc)
        psi = nxt
    return psi


# ---------------------------------------------------------------------------
# Jet arrays
# ---------------------------------------------------------------------------


class Tensor:
    """Array with some leading fixed indices and a trailing symmetric block.

    Entries are stored under sorted symmetric indices only.
    """

    __slots__ = ("n", "nfixed", "nsym", "data")

    def __init__(self, n, nfixed, nsym, data=None):
        self.n = n
        self.nfixed = nfixed
        self.nsym = nsym
        self.data = data if data is not None else {}

    def get(self, fixed, sym=()):
        key = tuple(fixed) + tuple(sorted(sym))
        return self.data.get(key, 0)

    def set(self, fixed, sym, value):
        key = tuple(fixed) + tuple(sorted(sym))
        if value:
            self.data[key] = value
        else:
            self.data.pop(key, None)

    def keys(self):
        return self.data.keys()

    def map_values(self, fn):
        return Tensor(self.n, self.nfixed, self.nsym,
                      {k: fn(v) for k, v in self.data.items()})

    def __eq__(self, other):
        if not isinstance(other, Tensor):
            return NotImplemented
        if (self.n, self.nfixed, self.nsym) != (other.n, other.nfixed, other.nsym):
            return False
        keys = set(self.data) | set(other.data)
        return all(self.data.get(k, 0) == other.data.get(k, 0) for k in keys)

    def __repr__(self):
        return "Tensor(n=%d, fixed=%d, sym=%d, %d entries)" % (
            self.n, self.nfixed, self.nsym, len(self.data))


def random_tensor(rng, n, nfixed, nsym):
    t = Tensor(n, nfixed, nsym)
    for fixed in itertools.product(range(n), repeat=nfixed):
        for sym in itertools.combinations_with_replacement(range(n), nsym):
            t.data[fixed + sym] = Fraction(rng.randint(-4, 4), rng.randint(1, 3))
    return t


JetData = namedtuple("JetData", ["n", "order", "fields", "conn", "conn_order"])
JetData.__doc__ = """Truncated jets at the origin.

fields: {label: [Tensor_order0, ..., Tensor_orderK]}; each order-v array has
one fixed (output) index and v symmetric derivative indices.  conn: list of
connection arrays, order-w entries with three fixed indices (out, base0,
base1) and w symmetric derivative indices; None when no connection is used.
"""


def random_jet_data(rng, n, labels, order, with_conn=False, conn_order=None):
    fields = {
        lab: [random_tensor(rng, n, 1, v) for v in range(order + 1)]
        for lab in labels
    }
    conn = None
    if with_conn:
        if conn_order is None:
            conn_order = order
        conn = [random_tensor(rng, n, 3, w) for w in range(conn_order + 1)]
    return JetData(n, order, fields, conn, conn_order if with_conn else None)


class CoordinateChange:
    """Polynomial coordinate change fixing the origin, with invertible
    linear part (checked exactly)."""

    def __init__(self, n, trunc, comps):
        self.n = n
        self.trunc = trunc
        self.comps = [dict(c) for c in comps]
        zero = (0,) * n
        for c in self.comps:
            if c.get(zero):
                raise ValueError("coordinate change must fix the origin")
        mat_inv(map_linear_part(self.comps, n), unit=_unit)  # singular -> raise

    @classmethod
    def identity(cls, n, trunc):
        return cls(n, trunc, [p_var(n, j) for j in range(n)])

    @classmethod
    def random(cls, rng, n, trunc):
        while True:
            comps = []
            for _ in range(n):
                p = {}
                for deg in range(1, trunc + 1):
                    for mono in itertools.combinations_with_replacement(
                            range(n), deg):
                        v = Fraction(rng.randint(-2, 2), rng.randint(1, 2))
                        if v:
                            p[_exps_of(mono, n)] = v
                comps.append(p)
            try:
                return cls(n, trunc, comps)
            except ZeroDivisionError:
                continue

    def compose(self, other):
        """self after other (self o other), truncated at min order."""
        trunc = min(self.trunc, other.trunc)
        return CoordinateChange(
            self.n, trunc, map_compose(self.comps, other.comps, self.n, trunc)
        )

    def linear_part(self):
        return map_linear_part(self.comps, self.n)


# --- conversion between jet arrays and Taylor polynomials ------------------


def _exps_of(idx, n):
    e = [0] * n
    for i in idx:
        e[i] += 1
    return tuple(e)


def _fact_of_exps(e):
    f = 1
    for k in e:
        f *= factorial(k)
    return f


def _field_polys(arrays, n, trunc):
    polys = [p_zero() for _ in range(n)]
    for v, arr in enumerate(arrays):
        if v > trunc:
            break
        for key, val in arr.data.items():
            a, sym = key[0], key[1:]
            e = _exps_of(sym, n)
            coeff = Fraction(val) / _fact_of_exps(e) if not isinstance(val, Dual) \
                else val / _fact_of_exps(e)
            p_add_into(polys[a], {e: coeff})
    return polys


def _polys_field(polys, n, order):
    arrays = [Tensor(n, 1, v) for v in range(order + 1)]
    for a in range(n):
        for e, c in polys[a].items():
            v = sum(e)
            if v > order:
                continue
            sym = tuple(sorted(sum(([i] * k for i, k in enumerate(e)), [])))
            arrays[v].set((a,), sym, c * _fact_of_exps(e))
    return arrays


def _conn_polys(arrays, n, trunc):
    polys = {}
    for w, arr in enumerate(arrays):
        if w > trunc:
            break
        for key, val in arr.data.items():
            a, b, c, sym = key[0], key[1], key[2], key[3:]
            e = _exps_of(sym, n)
            coeff = val / _fact_of_exps(e)
            p_add_into(polys.setdefault((a, b, c), p_zero()), {e: coeff})
    return polys


def _polys_conn(polys, n, order):
    arrays = [Tensor(n, 3, w) for w in range(order + 1)]
    for (a, b, c), p in polys.items():
        for e, coeff in p.items():
            w = sum(e)
            if w > order:
                continue
            sym = tuple(sorted(sum(([i] * k for i, k in enumerate(e)), [])))
            arrays[w].set((a, b, c), sym, coeff * _fact_of_exps(e))
    return arrays


def _poly_mat_inverse(M, n, trunc):
    """Inverse of a polynomial matrix whose constant part is invertible."""
    zero = (0,) * n
    C = [[M[i][j].get(zero, 0) for j in range(n)] for i in range(n)]
    Cinv = mat_inv(C, unit=_unit)
    N = [[{e: v for e, v in M[i][j].items() if e != zero} for j in range(n)]
         for i in range(n)]
    # Z = (sum_k (-Cinv N)^k) Cinv
    CN = [[p_zero() for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if Cinv[i][k] and N[k][j]:
                    p_add_into(CN[i][j], N[k][j], -Cinv[i][k])
    term = [[p_const(n, 1) if i == j else p_zero() for j in range(n)]
            for i in range(n)]
    acc = [[dict(term[i][j]) for j in range(n)] for i in range(n)]
    for _ in range(trunc):
        nxt = [[p_zero() for _ in range(n)] for _ in range(n)]
        for i in range(n):
            for j in range(n):
                for k in range(n):
                    if term[i][k] and CN[k][j]:
                        p_add_into(nxt[i][j], p_mul(term[i][k], CN[k][j], trunc))
        term = nxt
        if not any(any(t for t in row) for row in term):
            break
        for i in range(n):
            for j in range(n):
                p_add_into(acc[i][j], term[i][j])
    out = [[p_zero() for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                if Cinv[k][j] and acc[i][k]:
                    p_add_into(out[i][j], acc[i][k], Cinv[k][j])
    return out


def jet_transform(data, phi):
    """Transform jets through a coordinate change, exactly.

    Vector fields push forward: X'(y) = Dphi(x) X(x) at x = phi^{-1}(y);
    the connection follows the classical Christoffel law (see module
    docstring).  phi must carry enough orders: order+1 for the fields,
    conn_order+2 for the connection.
    """
    n = data.n
    need = data.order + 1
    if data.conn is not None:
        need = max(need, data.conn_order + 2)
    if phi.trunc < need:
        raise ValueError("coordinate change truncated below jet order + 1")
    F = phi.comps
    K = data.order
    psiK = map_inverse(F, n, K) if K else map_inverse(F, n, 1)
    J = [[p_diff(F[a], j) for j in range(n)] for a in range(n)]
    fields = {}
    for lab, arrays in data.fields.items():
        P = _field_polys(arrays, n, K)
        out = []
        for a in range(n):
            acc = p_zero()
            for j in range(n):
                Jaj = {e: v for e, v in J[a][j].items() if sum(e) <= K}
                if Jaj and P[j]:
                    p_add_into(acc, p_mul(Jaj, P[j], K))
            out.append(p_compose(acc, psiK, n, K))
        fields[lab] = _polys_field(out, n, K)
    conn = None
    if data.conn is not None:
        W = data.conn_order
        psiW = map_inverse(F, n, W) if W else map_inverse(F, n, 1)
        G = _conn_polys(data.conn, n, W)
        Jw = [[{e: v for e, v in J[a][j].items() if sum(e) <= W}
               for j in range(n)] for a in range(n)]
        Jinv = _poly_mat_inverse(Jw, n, W)
        hess = [[[{e: v for e, v in p_diff(J[a][j], k).items() if sum(e) <= W}
                  for k in range(n)] for j in range(n)] for a in range(n)]
        # B[a][j][k] = sum_i J[a][i] G[i][j][k]  -  hess[a][j][k]
        out = {}
        for a in range(n):
            B = [[p_zero() for _ in range(n)] for _ in range(n)]
            for j in range(n):
                for k in range(n):
                    acc = B[j][k]
                    for i in range(n):
                        g = G.get((i, j, k))
                        if g and Jw[a][i]:
                            p_add_into(acc, p_mul(Jw[a][i], g, W))
                    p_add_into(acc, hess[a][j][k], -1)
            # contract both lower slots with Jinv
            for b in range(n):
                Bb = [p_zero() for _ in range(n)]
                for k in range(n):
                    acc = Bb[k]
                    for j in range(n):
                        if B[j][k] and Jinv[j][b]:
                            p_add_into(acc, p_mul(Jinv[j][b], B[j][k], W))
                for c in range(n):
                    acc = p_zero()
                    for k in range(n):
                        if Bb[k] and Jinv[k][c]:
                            p_add_into(acc, p_mul(Jinv[k][c], Bb[k], W))
                    if acc:
                        out[(a, b, c)] = p_compose(acc, psiW, n, W)
        conn = _polys_conn(out, n, W)
    return JetData(n, K, fields, conn, data.conn_order)


# ---------------------------------------------------------------------------
# Realization (state sum)
# ---------------------------------------------------------------------------


def realize_graph(g, data, gens=None):
    """Contract one graph against jet data: a length-n list when anchored,
    a scalar otherwise.  With ``gens`` (a map arity -> generator array),
    white vertices contract against the generators; without it they are an
    error, realization being defined on degree-0 sums."""
    n = data.n
    verts = g.vertices
    edges = []          # edge id per source vertex
    edge_of_src = {}
    for src, e in enumerate(g.out):
        if e is not None:
            edge_of_src[src] = len(edges)
            edges.append((src, e[0], e[1]))
    anchored = g.has_anchor()
    anchor_edge = None
    plan = []
    for i, v in enumerate(verts):
        if v.kind == ANCHOR:
            for eid, (src, dst, slot) in enumerate(edges):
                if dst == i:
                    anchor_edge = eid
            continue
        ins_sym = [eid for eid, (src, dst, slot) in enumerate(edges)
                   if dst == i and slot == SYM]
        if v.kind == VECTOR:
            if v.order > data.order:
                raise ValueError("jet data truncated below graph order")
            arr = data.fields[v.label][v.order]
            plan.append((arr, (edge_of_src[i],), tuple(ins_sym)))
        elif v.kind == CONNECTION:
            if data.conn is None or v.order > data.conn_order:
                raise ValueError("connection jets missing or truncated")
            b0 = [eid for eid, (s, dd, sl) in enumerate(edges) if dd == i and sl == 0]
            b1 = [eid for eid, (s, dd, sl) in enumerate(edges) if dd == i and sl == 1]
            arr = data.conn[v.order]
            plan.append((arr, (edge_of_src[i], b0[0], b1[0]), tuple(ins_sym)))
        elif v.kind == WHITE:
            if gens is None or v.order not in gens:
                raise ValueError("realization is defined on degree-0 sums only")
            plan.append((gens[v.order], (edge_of_src[i],), tuple(ins_sym)))
    free = [eid for eid in range(len(edges)) if eid != anchor_edge]

    def state_sum(fix_anchor=None):
        total = Fraction(0)
        idx = [0] * len(edges)
        for assign in itertools.product(range(n), repeat=len(free)):
            for pos, eid in enumerate(free):
                idx[eid] = assign[pos]
            if fix_anchor is not None:
                idx[anchor_edge] = fix_anchor
            term = Fraction(1)
            for arr, fixed, syms in plan:
                v = arr.get(tuple(idx[e] for e in fixed), tuple(idx[e] for e in syms))
                if not v:
                    term = 0
                    break
                term = term * v
            if term:
                total += term
        return total

    if anchored:
        return [state_sum(a) for a in range(n)]
    return state_sum()


def realize(x, data):
    """Realize a degree-0 formal sum; exact and linear in the sum."""
    from .formal import FormalSum
    from .graphs import Graph

    if isinstance(x, Graph):
        x = FormalSum.of(x)
    anchored = None
    for g, _ in x:
        a = g.has_anchor()
        if anchored is None:
            anchored = a
        elif anchored != a:
            raise ValueError("mixed anchored/scalar sum")
    if anchored is None:
        anchored = False
    acc = [Fraction(0)] * data.n if anchored else Fraction(0)
    for g, c in x:
        val = realize_graph(g, data)
        if anchored:
            acc = [s + c * v for s, v in zip(acc, val)]
        else:
            acc = acc + c * val
    return acc


def realize_with_generators(x, gens, data):
    """Realize a degree-1 sum with its white vertices holding generators.

    Together with :func:`infinitesimal_action` this expresses the bottom
    chain-map identity: realizing the differential of a degree-0 sum
    against generators equals the flow derivative of its realization.
    """
    from .formal import FormalSum
    from .graphs import Graph

    if isinstance(x, Graph):
        x = FormalSum.of(x)
    anchored = any(g.has_anchor() for g, _ in x)
    acc = [Fraction(0)] * data.n if anchored else Fraction(0)
    for g, c in x:
        val = realize_graph(g, data, gens=gens)
        if anchored:
            acc = [s + c * v for s, v in zip(acc, val)]
        else:
            acc = acc + c * val
    return acc


def lift_with_variation(data, delta):
    """Dual-number jet data: value parts from ``data``, eps parts ``delta``."""
    def both(a, b):
        out = Tensor(a.n, a.nfixed, a.nsym)
        for k in set(a.data) | set(b.data):
            out.data[k] = Dual(a.data.get(k, 0), b.data.get(k, 0))
        return out

    fields = {
        lab: [both(t, delta.fields[lab][v]) for v, t in enumerate(arrs)]
        for lab, arrs in data.fields.items()
    }
    conn = None
    if data.conn is not None:
        conn = [both(t, delta.conn[w]) for w, t in enumerate(data.conn)]
    return JetData(data.n, data.order, fields, conn, data.conn_order)


def apply_linear(A, vec):
    return [sum((Fraction(A[a][j]) * vec[j] for j in range(len(vec))), Fraction(0))
            for a in range(len(vec))]


Counterexample = namedtuple("Counterexample", ["trial", "lhs", "rhs"])


def data_requirements(x):
    """Labels, max vector order, and connection order needed to realize x."""
    labels = set()
    order = 0
    conn_order = None
    for g, _ in x:
        for v in g.vertices:
            if v.kind == VECTOR:
                labels.add(v.label)
                order = max(order, v.order)
            elif v.kind == CONNECTION:
                conn_order = max(conn_order or 0, v.order)
    return sorted(labels), order, conn_order


def naturality_check(x, n, trials=20, seed=0):
    """Seeded exact test that realization commutes with coordinate changes.

    Returns None on pass, else the first counterexample.
    """
    from .formal import FormalSum
    from .graphs import Graph

    if isinstance(x, Graph):
        x = FormalSum.of(x)
    labels, order, conn_order = data_requirements(x)
    anchored = any(g.has_anchor() for g, _ in x)
    trunc = max(order + 1, (conn_order + 2) if conn_order is not None else 0, 2)
    for t in range(trials):
        rng = random.Random(repr(("natcheck", seed, t)))
        data = random_jet_data(rng, n, labels, order,
                               with_conn=conn_order is not None,
                               conn_order=conn_order)
        phi = CoordinateChange.random(rng, n, trunc)
        lhs = realize(x, jet_transform(data, phi))
        base = realize(x, data)
        rhs = apply_linear(phi.linear_part(), base) if anchored else base
        if lhs != rhs:
            return Counterexample(t, lhs, rhs)
    return None


# ---------------------------------------------------------------------------
# Infinitesimal action and connection-rule matching
# ---------------------------------------------------------------------------


def generator_flow(gens, n, trunc):
    """Coordinate change id + eps * sum_s H_s(x,..,x)/s! for generator
    arrays H_s; a single array is accepted too."""
    if isinstance(gens, Tensor):
        gens = [gens]
    comps = []
    for a in range(n):
        p = p_var(n, a)
        p = {e: Dual(v) for e, v in p.items()}
        for gen in gens:
            for key, val in gen.data.items():
                if key[0] != a:
                    continue
                e = _exps_of(key[1:], n)
                p_add_into(p, {e: Dual(0, Fraction(val) / _fact_of_exps(e))})
        comps.append(p)
    return CoordinateChange(n, trunc, comps)


def _lift_dual(data):
    fields = {lab: [t.map_values(lambda v: Dual(v)) for t in arrs]
              for lab, arrs in data.fields.items()}
    conn = None
    if data.conn is not None:
        conn = [t.map_values(lambda v: Dual(v)) for t in data.conn]
    return JetData(data.n, data.order, fields, conn, data.conn_order)


def _eps_part(data):
    def eps(t):
        out = Tensor(t.n, t.nfixed, t.nsym)
        for k, v in t.data.items():
            b = v.b if isinstance(v, Dual) else 0
            if b:
                out.data[k] = b
        return out

    fields = {lab: [eps(t) for t in arrs] for lab, arrs in data.fields.items()}
    conn = [eps(t) for t in data.conn] if data.conn is not None else None
    return JetData(data.n, data.order, fields, conn, data.conn_order)


def infinitesimal_action(gens, data):
    """Derivative of jet_transform along the flow of one or several
    generators at the identity, computed with first-order dual arithmetic.
    Returns jet data holding the variation of every coordinate; the
    variation is additive in the generators."""
    if isinstance(gens, Tensor):
        gens = [gens]
    n = data.n
    trunc = max([data.order + 1,
                 (data.conn_order + 2) if data.conn is not None else 0, 2]
                + [g.nsym for g in gens])
    phi = generator_flow(gens, n, trunc)
    moved = jet_transform(_lift_dual(data), phi)
    return _eps_part(moved)


def _candidate_entry(term, Hs, conn_arrays, n, idx):
    """Realize one local candidate term at boundary indices idx=(a,b,c,*ds)."""
    internals, ranks, iout, ports = term
    a = idx[0]
    bvals = idx[1:]
    total = Fraction(0)
    for i in range(n):
        prod = Fraction(1)
        for j, vert in enumerate(internals):
            syms = []
            base = {}
            for p, (tj, slot) in enumerate(ports):
                if tj != j:
                    continue
                if slot == SYM:
                    syms.append(bvals[p])
                else:
                    base[slot] = bvals[p]
            for jj, tgt in enumerate(iout):
                if tgt != ("out",) and tgt[0] == j and jj != j:
                    if tgt[1] == SYM:
                        syms.append(i)
                    else:
                        base[tgt[1]] = i
            out_idx = a if iout[j] == ("out",) else i
            if vert.kind == WHITE:
                v = Hs.get((out_idx,), syms)
            else:
                v = conn_arrays[vert.order].get((out_idx, base[0], base[1]), syms)
            if not v:
                prod = 0
                break
            prod = prod * v
        if prod:
            total += prod
        if len(internals) == 1:
            break  # no contraction index
    return total


def _sparse_tensor(rng, n, nfixed, nsym, entries):
    t = Tensor(n, nfixed, nsym)
    for _ in range(entries):
        fixed = tuple(rng.randrange(n) for _ in range(nfixed))
        sym = tuple(sorted(rng.randrange(n) for _ in range(nsym)))
        t.set(fixed, sym, Fraction(rng.randint(1, 4), rng.randint(1, 2)))
    return t


def match_connection_rule(w, n, orbits_by_s, max_samples=80):
    """Coefficients for the candidate orbits of the order-``w`` connection
    rule, matched exactly against the infinitesimal action.

    ``orbits_by_s`` maps generator arity s to its orbit list.  Each sample
    runs one flow carrying independent generators of every arity (the
    variation is additive); sparse samples at the stable dimension
    accumulate rank until the coefficients are pinned uniquely, then the
    identity is verified on every index at a small dimension with dense
    fresh data.  Returns {s: coefficient list}.
    """
    arities = sorted(s for s, orbs in orbits_by_s.items() if orbs)
    flat = [(s, orbit) for s in arities for orbit in orbits_by_s[s]]
    if not flat:
        return {s: [] for s in orbits_by_s}
    nun = len(flat)

    def build_side(dim, rng, sparse):
        if sparse:
            gens = {s: _sparse_tensor(rng, dim, 1, s, sparse) for s in arities}
            conn = [_sparse_tensor(rng, dim, 3, v, 3 * sparse)
                    for v in range(w + 1)]
            data = JetData(dim, w, {}, conn, w)
        else:
            gens = {s: random_tensor(rng, dim, 1, s) for s in arities}
            data = random_jet_data(rng, dim, [], w, with_conn=True,
                                   conn_order=w)
        delta = infinitesimal_action(list(gens.values()), data).conn[w]
        return gens, data.conn, delta

    rng = random.Random(repr(("connrule", w, n)))
    solver = IncrementalSolver(nun)
    sol = None
    for sample in range(max_samples):
        # progressively denser samples: rank stalls on very sparse draws
        gens, conn, delta = build_side(n, rng, sparse=2 + sample)
        picks = list(delta.data.keys())
        rng.shuffle(picks)
        picks = picks[: 6 * nun]
        for _ in range(nun + 5):
            picks.append((rng.randrange(n), rng.randrange(n), rng.randrange(n))
                         + tuple(sorted(rng.randrange(n) for _ in range(w))))
        for key in picks:
            idx = key[:3] + tuple(sorted(key[3:]))
            row = [sum(_candidate_entry(m, gens[s], conn, n, idx)
                       for m in orbit) for s, orbit in flat]
            solver.add(row, delta.get(idx[:3], idx[3:]))
            if solver.rank == nun:
                break
        sol = solver.solution()
        if sol is not None:
            break
    if sol is None:
        raise ArithmeticError(
            "singular rule-matching system for w=%d (rule-basis bug)" % w)
    # full verification at a small dimension with dense fresh data
    nv = min(n, w + 2, 5) if w else min(n, 3)
    rng2 = random.Random(repr(("connrule-verify", w, n)))
    gv, connv, deltav = build_side(nv, rng2, sparse=0)
    for a in range(nv):
        for b in range(nv):
            for c in range(nv):
                for ds in itertools.combinations_with_replacement(range(nv), w):
                    idx = (a, b, c) + ds
                    lhs = sum(
                        (coeff * sum(_candidate_entry(m, gv[s], connv, nv, idx)
                                     for m in orbit)
                         for coeff, (s, orbit) in zip(sol, flat)),
                        Fraction(0))
                    if lhs != deltav.get((a, b, c), ds):
                        raise ArithmeticError(
                            "derived rule fails verification at w=%d" % w)
    out = {}
    pos = 0
    for s in arities:
        k = len(orbits_by_s[s])
        out[s] = sol[pos:pos + k]
        pos += k
    for s in orbits_by_s:
        out.setdefault(s, [])
    return out

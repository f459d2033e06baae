"""Graph families, graded bases, and the differential.

The degree of a graph is its number of white vertices.  The differential
replaces one vertex at a time according to :mod:`natops.rules` and splices
the freshly created white vertices into the orientation order:

* replacing a field/connection/anchor-side vertex makes the new white the
  minimal element, with sign +1;
* replacing the white at position i (1-based) of the orientation order
  carries sign (-1)**(i+1), and the new whites take its place in rank
  order (the wider parent white first; see :func:`natops.rules.replace_white`).
"""

from __future__ import annotations

import itertools
from collections import namedtuple

from .canonical import key_bytes
from .formal import FormalSum
from .graphs import (
    ANCHOR,
    CONNECTION,
    EMPTY,
    SYM,
    VECTOR,
    WHITE,
    Graph,
    anchor,
    connection,
    is_connected,
    validate,
    vector,
    white,
)
from .rules import OUT, rule_for

Family = namedtuple("Family", ["name", "anchored", "nabla", "connected", "trace"])

BULLET = Family("bullet", True, False, False, False)
BULLET_CONNECTED = Family("bullet-connected", True, False, True, False)
BULLET_WHEEL = Family("bullet-wheel", False, False, True, False)
BULLET_NABLA1 = Family("bullet-nabla-1", True, True, True, False)
BULLET_NABLA = Family("bullet-nabla", True, True, False, False)
BULLET_NABLA_WHEEL = Family("bullet-nabla-wheel", False, True, True, False)
BULLET_NABLA_TRACE = Family("bullet-nabla-trace", True, True, True, True)

FAMILIES = {
    f.name: f
    for f in (
        BULLET,
        BULLET_CONNECTED,
        BULLET_WHEEL,
        BULLET_NABLA1,
        BULLET_NABLA,
        BULLET_NABLA_WHEEL,
        BULLET_NABLA_TRACE,
    )
}

BasisSlice = namedtuple("BasisSlice", ["family", "d", "m", "graphs"])


def expected_labels(family, d):
    labels = ["X%d" % i for i in range(1, d + 1)]
    if family.trace:
        labels.append("X0")
    return sorted(labels)


def member(family, g, d, m=None):
    """Does graph ``g`` lie in ``family`` at multilinearity ``d``?"""
    if len(g.vertices) == 0:
        return not family.anchored and d == 0 and (m in (None, 0))
    if validate(g):
        return False
    if g.labels() != expected_labels(family, d):
        return False
    if g.count(ANCHOR) != (1 if family.anchored else 0):
        return False
    if not family.nabla and g.count(CONNECTION):
        return False
    if family.connected and not is_connected(g):
        return False
    if family.trace:
        x0 = [v for v in g.vertices if v.kind == VECTOR and v.label == "X0"]
        if len(x0) != 1 or x0[0].order != 0:
            return False
    if m is not None and g.degree != m:
        return False
    return True


def _compositions(total, parts):
    """All tuples of ``parts`` nonnegative integers summing to ``total``."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(total + 1):
        for rest in _compositions(total - first, parts - 1):
            yield (first,) + rest


def _multisets(total, parts, minimum):
    """Weakly increasing tuples of ``parts`` ints >= minimum with given sum."""
    if parts == 0:
        if total == 0:
            yield ()
        return
    for first in range(minimum, total // parts + 1):
        for rest in _multisets(total - first * parts, parts - 1, 0):
            yield (first,) + tuple(first + c for c in rest)


def _assignments(groups, sources):
    """Fill slot groups with distinct sources, one source per slot.

    ``groups`` is a list of (owner, slotcode, size); symmetric groups take
    unordered source subsets.  Yields out-edge dicts source -> (owner, code).
    """
    if not groups:
        yield {}
        return
    (owner, code, size), rest = groups[0], groups[1:]
    for chosen in itertools.combinations(sources, size):
        remaining = tuple(s for s in sources if s not in chosen)
        for tail in _assignments(rest, remaining):
            head = {s: (owner, code) for s in chosen}
            head.update(tail)
            yield head


def enumerate_basis(family, d, m):
    """Complete deterministic basis of canonical graphs for (family, d, m).

    Generation runs over every vertex-arity multiset allowed by the port
    balance  sum(v) + sum(w) + #conn + sum(u-1) = #fields - [anchor],
    then over all wirings, deduplicated through canonical forms.
    """
    if isinstance(family, str):
        family = FAMILIES[family]
    if d < 0 or m < 0:
        raise ValueError("d and m must be nonnegative")
    nblack = d + (1 if family.trace else 0)
    budget = nblack - (1 if family.anchored else 0)
    found = {}
    if not family.anchored and d == 0 and m == 0:
        found[EMPTY] = True
    if budget >= 0:
        kmax = budget if family.nabla else 0
        for k in range(kmax + 1):
            for us in _multisets_white(budget - k, m):
                left = budget - k - sum(u - 1 for u in us)
                for total_w in range(left + 1):
                    for ws in _multisets(total_w, k, 0):
                        for vs in _compositions(left - total_w, d):
                            for g in _wirings(family, d, vs, ws, us):
                                found.setdefault(g, True)
    graphs = sorted(found, key=key_bytes)
    return BasisSlice(family, d, m, tuple(graphs))


def _multisets_white(budget, m):
    # white arities: m parts, each >= 2, sum(u-1) <= budget
    if budget < 0:
        return
    for total in range(2 * m, budget + m + 1):
        for us in _multisets(total, m, 2):
            yield us


def _wirings(family, d, vs, ws, us):
    verts = [vector("X%d" % (i + 1), vs[i]) for i in range(d)]
    if family.trace:
        verts.append(vector("X0", 0))
    verts += [connection(w) for w in ws]
    verts += [white(u) for u in us]
    if family.anchored:
        verts.append(anchor)
    n = len(verts)
    sources = tuple(i for i, v in enumerate(verts) if v.kind != ANCHOR)
    groups = []
    for i, v in enumerate(verts):
        if v.kind == CONNECTION:
            groups.append((i, 0, 1))
            groups.append((i, 1, 1))
            if v.order:
                groups.append((i, SYM, v.order))
        elif v.kind == ANCHOR:
            groups.append((i, SYM, 1))
        elif v.order:
            groups.append((i, SYM, v.order))
    total_slots = sum(g[2] for g in groups)
    if total_slots != len(sources):
        return
    from .canonical import ZERO, canonicalize

    for assign in _assignments(groups, sources):
        out = [None] * n
        for src, tgt in assign.items():
            out[src] = tgt
        g = Graph(tuple(verts), tuple(out))
        if family.connected and not is_connected(g):
            continue
        cg, _ = canonicalize(g)
        if cg is ZERO:
            continue
        yield cg


def _port_map(g, v):
    """Deterministic boundary-port order for the inputs of vertex ``v``."""
    ins = [(src, slot) for src, e in enumerate(g.out) if e is not None and e[0] == v for slot in (e[1],)]
    vv = g.vertices[v]
    if vv.kind == CONNECTION:
        b0 = sorted(e for e in ins if e[1] == 0)
        b1 = sorted(e for e in ins if e[1] == 1)
        syms = sorted(e for e in ins if e[1] == SYM)
        ordered = b0 + b1 + syms
    else:
        ordered = sorted(ins)
    return {e: p for p, e in enumerate(ordered)}


def _instantiate(g, v, term):
    """Substitute a rule term for vertex ``v``; returns (vertices, out, white_ids).

    ``white_ids`` lists the new ids of the term's internal whites by rank.
    The caller supplies the orientation order.
    """
    n = len(g.vertices)
    port_of = _port_map(g, v)

    def newidx(i):
        return i if i < v else i - 1

    def internal_idx(j):
        return n - 1 + j

    def resolve_out():
        dst, slot = g.out[v]
        if dst == v:
            p = port_of[(v, slot)]
            j, s2 = term.ports[p]
            return (internal_idx(j), s2)
        return (newidx(dst), slot)

    verts = tuple(g.vertices[i] for i in range(n) if i != v) + term.internals
    out = []
    for i in range(n):
        if i == v:
            continue
        e = g.out[i]
        if e is None:
            out.append(None)
        elif e[0] == v:
            j, s2 = term.ports[port_of[(i, e[1])]]
            out.append((internal_idx(j), s2))
        else:
            out.append((newidx(e[0]), e[1]))
    for j, tgt in enumerate(term.iout):
        if tgt == OUT:
            out.append(resolve_out())
        else:
            out.append((internal_idx(tgt[0]), tgt[1]))
    ranked = sorted(
        (term.ranks[j], internal_idx(j))
        for j in range(len(term.internals))
        if term.ranks[j] is not None
    )
    return verts, tuple(out), [w for _, w in ranked]


_DELTA_CACHE = {}


def delta_graph_cached(g):
    """Memoized differential of a canonical graph (treat as read-only)."""
    hit = _DELTA_CACHE.get(g)
    if hit is None:
        hit = _DELTA_CACHE[g] = delta_graph(g)
    return hit


def delta_graph(g):
    """Differential of a single graph presentation, as a formal sum."""
    out = FormalSum()
    order = list(g.white_order)
    for v, vv in enumerate(g.vertices):
        if vv.kind == ANCHOR:
            continue
        tpl = rule_for(vv)
        if not tpl.terms:
            continue
        if vv.kind == WHITE:
            i = order.index(v)
            eps = -1 if i & 1 else 1
            kept = order[:i] + order[i + 1:]
            at = i
        else:
            eps = 1
            kept = order
            at = 0
        for term in tpl.terms:
            verts, outmap, new_whites = _instantiate(g, v, term)

            def nid(x, v=v):
                return x if x < v else x - 1

            spliced = (
                [nid(w) for w in kept[:at]]
                + new_whites
                + [nid(w) for w in kept[at:]]
            )
            out.add_graph(Graph(verts, outmap, spliced), eps * term.coeff)
    return out


def differential(x, family=None, d=None):
    """Differential of a formal sum; input must be degree-homogeneous."""
    if isinstance(x, Graph):
        x = FormalSum.of(x)
    degrees = {g.degree for g, _ in x}
    if len(degrees) > 1:
        raise ValueError("mixed-degree input to differential")
    if family is not None and d is not None:
        fam = FAMILIES[family] if isinstance(family, str) else family
        for g, _ in x:
            if not member(fam, g, d):
                raise ValueError("graph outside family %s" % fam.name)
    out = FormalSum()
    for g, c in x:
        for cg, coeff in delta_graph_cached(g):
            out.add_canonical(cg, c * coeff)
    return out


D2Report = namedtuple("D2Report", ["family", "d", "checked", "failures"])


def d_squared_zero(family, d, degrees=(0, 1)):
    """Check delta(delta(G)) = 0 on basis graphs of the given degrees."""
    if isinstance(family, str):
        family = FAMILIES[family]
    failures = []
    checked = 0
    for m in degrees:
        for g in enumerate_basis(family, d, m).graphs:
            r = differential(differential(FormalSum.of(g)))
            checked += 1
            if r:
                failures.append((g, r))
    return D2Report(family.name, d, checked, failures)


def nabla_bigrade_split(g):
    """Split delta(G) by connection count: returns (same, minus_one).

    Raises if any term changes the connection count by another amount.
    """
    k = g.count(CONNECTION)
    same, less = FormalSum(), FormalSum()
    for cg, c in delta_graph(g):
        dk = cg.count(CONNECTION) - k
        if dk == 0:
            same.add_canonical(cg, c)
        elif dk == -1:
            less.add_canonical(cg, c)
        else:
            raise AssertionError("term changes connection count by %d" % dk)
    return same, less

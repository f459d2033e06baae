"""Operadic structure on degree-0 graph spaces.

Composition inserts one anchored graph into a field slot of another: cut
the inserted graph's anchor, graft its root where the replaced vertex's
output went, and redistribute the replaced vertex's derivative inputs over
the inserted graph's field vertices in all possible ways (each grafted
edge raises the receiving vertex's derivative order by one).  On the
vector-field family the receivers are the labelled field vertices; with
connections present the connection vertices receive as well, which is what
composition of differential operators dictates.

Bracket words expand through the operad morphism sending the binary
bracket to the antisymmetrized 2-chain and the star letter to the
covariant-derivative cocycle.
"""

from __future__ import annotations

import re

from .formal import FormalSum, combine
from .graphs import (
    ANCHOR,
    CONNECTION,
    SYM,
    VECTOR,
    Graph,
    Vertex,
    anchor,
    connection,
    vector,
)


def _as_sum(x):
    return FormalSum.of(x) if isinstance(x, Graph) else x


def arity(x):
    """Common multilinearity of a degree-0 operad element."""
    ds = set()
    for g, _ in _as_sum(x):
        labs = g.labels()
        d = len(labs)
        if labs != ["X%d" % i for i in range(1, d + 1)]:
            raise ValueError("operad elements carry labels X1..Xd")
        ds.add(d)
    if len(ds) != 1:
        raise ValueError("mixed arity")
    return ds.pop()


def unit_graph():
    return Graph((vector("X1"), anchor), ((1, SYM), None))


def p_graph():
    """The 2-chain: X2 feeding the derivative slot of X1, X1 anchored."""
    return Graph(
        (vector("X1", 1), vector("X2", 0), anchor),
        ((2, SYM), (0, SYM), None),
    )


def bracket_element():
    """Antisymmetrized 2-chain (the Lie bracket)."""
    tau = sigma_action(FormalSum.of(p_graph()), (2, 1))
    return combine(tau, FormalSum.of(p_graph()), 1, -1)


def nabla_graph():
    """Connection vertex on the ordered pair (X1, X2), anchored."""
    return Graph(
        (vector("X1"), vector("X2"), connection(0), anchor),
        ((2, 0), (2, 1), (3, SYM), None),
    )


def covariant_element():
    """The covariant-derivative cocycle: connection term plus 2-chain."""
    return combine(FormalSum.of(nabla_graph()), FormalSum.of(p_graph()), 1, 1)


def _monomial_compose(g1, i, g2):
    """All monomials of g1 composed with g2 in slot i (labels rewritten)."""
    u = arity(g1)
    v = arity(g2)
    slot_vertex = next(
        k for k, vv in enumerate(g1.vertices)
        if vv.kind == VECTOR and vv.label == "X%d" % i
    )
    root2 = next(
        k for k, e in enumerate(g2.out)
        if e is not None and g2.vertices[e[0]].kind == ANCHOR
    )
    anchor2 = g2.out[root2][0]
    receivers = [
        k for k, vv in enumerate(g2.vertices)
        if vv.kind in (VECTOR, CONNECTION)
    ]
    in_edges = [
        (src, e[1]) for src, e in enumerate(g1.out)
        if e is not None and e[0] == slot_vertex
    ]

    # index maps: g1 keeps all vertices but slot_vertex, then g2 minus anchor
    def idx1(k):
        return k if k < slot_vertex else k - 1

    off = len(g1.vertices) - 1

    def idx2(k):
        return off + (k if k < anchor2 else k - 1)

    relabel1 = {}
    for j in range(1, u + 1):
        if j < i:
            relabel1["X%d" % j] = "X%d" % j
        elif j > i:
            relabel1["X%d" % j] = "X%d" % (j + v - 1)
    relabel2 = {"X%d" % k: "X%d" % (i + k - 1) for k in range(1, v + 1)}

    out = []
    for choice in _functions(in_edges, receivers):
        counts = {}
        for e, tgt in choice.items():
            counts[tgt] = counts.get(tgt, 0) + 1
        verts = []
        for k, vv in enumerate(g1.vertices):
            if k == slot_vertex:
                continue
            verts.append(Vertex(vv.kind, relabel1.get(vv.label, vv.label), vv.order))
        for k, vv in enumerate(g2.vertices):
            if k == anchor2:
                continue
            order = vv.order + counts.get(k, 0)
            verts.append(Vertex(vv.kind, relabel2.get(vv.label, vv.label), order))
        outmap = []
        for k, e in enumerate(g1.out):
            if k == slot_vertex:
                continue
            if e is None:
                outmap.append(None)
            elif e[0] == slot_vertex:
                outmap.append((idx2(choice[(k, e[1])]), SYM))
            else:
                outmap.append((idx1(e[0]), e[1]))
        for k, e in enumerate(g2.out):
            if k == anchor2:
                continue
            if k == root2:
                dst, slot = g1.out[slot_vertex]
                if dst == slot_vertex:
                    outmap.append((idx2(choice[(slot_vertex, slot)]), SYM))
                else:
                    outmap.append((idx1(dst), slot))
            else:
                outmap.append((idx2(e[0]), e[1]))
        out.append(Graph(tuple(verts), tuple(outmap)))
    return out


def _functions(domain, codomain):
    if not domain:
        yield {}
        return
    head, rest = domain[0], domain[1:]
    for tail in _functions(rest, codomain):
        for tgt in codomain:
            d = dict(tail)
            d[head] = tgt
            yield d


def compose(a, i, b):
    """Operadic insertion a o_i b, extended bilinearly."""
    a, b = _as_sum(a), _as_sum(b)
    if not (1 <= i <= arity(a)):
        raise ValueError("slot index out of range")
    out = FormalSum()
    for g1, c1 in a:
        for g2, c2 in b:
            for g in _monomial_compose(g1, i, g2):
                out.add_graph(g, c1 * c2)
    return out


def sigma_action(x, sigma):
    """Right action relabelling X_k to X_{sigma(k)}: the result evaluates
    the original element at arguments pulled back through sigma."""
    x = _as_sum(x)
    d = arity(x)
    if sorted(sigma) != list(range(1, d + 1)):
        raise ValueError("permutation size mismatch")
    mapping = {"X%d" % k: "X%d" % sigma[k - 1] for k in range(1, d + 1)}

    from .graphs import relabel

    out = FormalSum()
    for g, c in x:
        out.add_graph(relabel(g, mapping), c)
    return out


# --- bracket-word expansion -------------------------------------------------

_TOKEN = re.compile(r"\(|\)|[^\s()]+")


def parse_word(text):
    """Parse a bracket/star word like ``(b (b X1 X2) X3)`` or ``(c X1 X2)``."""
    tokens = _TOKEN.findall(text)
    pos = 0

    def rec():
        nonlocal pos
        if pos >= len(tokens):
            raise ValueError("unexpected end of word")
        tok = tokens[pos]
        pos += 1
        if tok == "(":
            if pos >= len(tokens) or tokens[pos] not in ("b", "c"):
                raise ValueError("expected operator b or c")
            op = tokens[pos]
            pos += 1
            left = rec()
            right = rec()
            if pos >= len(tokens) or tokens[pos] != ")":
                raise ValueError("expected ')'")
            pos += 1
            return (op, left, right)
        if tok == ")":
            raise ValueError("unexpected ')'")
        m = re.fullmatch(r"X(\d+)", tok)
        if not m:
            raise ValueError("bad leaf %r" % tok)
        return int(m.group(1))

    tree = rec()
    if pos != len(tokens):
        raise ValueError("trailing tokens in word")
    return tree


def _leaves(tree):
    if isinstance(tree, int):
        return [tree]
    return _leaves(tree[1]) + _leaves(tree[2])


def lie_expand(word):
    """Image of a bracket/star word under the expansion morphism.

    ``b`` letters map to the Lie bracket element, ``c`` letters to the
    covariant-derivative cocycle; each variable must occur exactly once.
    """
    tree = parse_word(word) if isinstance(word, str) else word
    leaves = _leaves(tree)
    if sorted(leaves) != list(range(1, len(leaves) + 1)):
        raise ValueError("word must use X1..Xd exactly once")

    def rec(node):
        if isinstance(node, int):
            return FormalSum.of(unit_graph()), 1
        op, l, r = node
        el, al = rec(l)
        er, ar = rec(r)
        base = bracket_element() if op == "b" else covariant_element()
        out = compose(compose(base, 1, el), al + 1, er)
        return out, al + ar

    expr, d = rec(tree)
    mapping = {"X%d" % (k + 1): "X%d" % leaves[k] for k in range(d)}

    from .graphs import relabel

    out = FormalSum()
    for g, c in expr:
        out.add_graph(relabel(g, mapping), c)
    return out


# --- trace ------------------------------------------------------------------


def trace_map(g):
    """Splice out the anchor and the order-0 vertex labelled X0, closing
    the freed input and output into one edge (a wheel)."""
    x0 = None
    anc = None
    for k, vv in enumerate(g.vertices):
        if vv.kind == VECTOR and vv.label == "X0":
            if vv.order != 0:
                raise ValueError("X0 must have derivative order 0")
            x0 = k
        elif vv.kind == ANCHOR:
            anc = k
    if x0 is None or anc is None:
        raise ValueError("trace needs an anchored graph with an X0 vertex")
    feeder = next(k for k, e in enumerate(g.out) if e is not None and e[0] == anc)
    dst, slot = g.out[x0]
    removed = sorted((x0, anc))

    def idx(k):
        return k - sum(1 for r in removed if r < k)

    if feeder == x0:
        if dst != anc:
            raise ValueError("malformed trace graph")
        verts = tuple(v for k, v in enumerate(g.vertices) if k not in removed)
        outmap = tuple(
            (idx(e[0]), e[1]) if e is not None else None
            for k, e in enumerate(g.out) if k not in removed
        )
        return Graph(verts, outmap,
                     tuple(idx(w) for w in g.white_order))
    verts = tuple(v for k, v in enumerate(g.vertices) if k not in removed)
    outmap = []
    for k, e in enumerate(g.out):
        if k in removed:
            continue
        if k == feeder:
            outmap.append((idx(dst), slot))
        elif e is None:
            outmap.append(None)
        else:
            outmap.append((idx(e[0]), e[1]))
    return Graph(verts, tuple(outmap), tuple(idx(w) for w in g.white_order))


def trace_sum(x):
    return _as_sum(x).map_graphs(trace_map)

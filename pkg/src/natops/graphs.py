"""Typed directed graphs for natural-operator calculus.

A graph has four species of vertices:

* ``vector``      -- a vector-field jet coordinate; one output, ``order``
                     mutually symmetric derivative inputs, and a label
                     ("X1", "X2", ...) naming the field it belongs to.
* ``connection``  -- a connection jet coordinate; one output, an *ordered*
                     pair of base inputs and ``order`` symmetric derivative
                     inputs.
* ``white``       -- a jet-group generator; one output and ``order`` >= 2
                     mutually symmetric inputs.  The number of white
                     vertices is the cohomological degree.
* ``anchor``      -- the output marker of vector-valued graphs; a single
                     input, no output.  Scalar-valued graphs have none.

Every non-anchor vertex has exactly one outgoing edge, so a graph is stored
as an out-map: ``out[i]`` is ``(target, slot)`` where ``slot`` is ``0`` or
``1`` for the ordered base inputs of a connection and ``SYM`` for any
symmetric input group.  Loops (a vertex feeding its own input) are allowed.

White vertices carry an orientation: a representative linear order, stored
in ``white_order``.  Reorderings by odd permutations flip the sign of the
graph; this bookkeeping lives in :mod:`natops.canonical`.
"""

from __future__ import annotations

from collections import namedtuple

VECTOR = "vector"
CONNECTION = "connection"
WHITE = "white"
ANCHOR = "anchor"

#: slot codes: 0 and 1 are the ordered base inputs of a connection vertex,
#: SYM is membership in the symmetric input group of any vertex.
SYM = 2

Vertex = namedtuple("Vertex", ["kind", "label", "order"])


def vector(label, order=0):
    return Vertex(VECTOR, label, order)


def connection(order=0):
    return Vertex(CONNECTION, None, order)


def white(order):
    return Vertex(WHITE, None, order)


anchor = Vertex(ANCHOR, None, 0)


def sym_size(v):
    """Number of slots in the symmetric input group of vertex ``v``."""
    if v.kind == ANCHOR:
        return 1
    return v.order


class Graph:
    """Immutable directed multigraph with port-structured edges."""

    __slots__ = ("vertices", "out", "white_order", "_hash")

    def __init__(self, vertices, out, white_order=None):
        self.vertices = tuple(vertices)
        self.out = tuple(tuple(e) if e is not None else None for e in out)
        if white_order is None:
            white_order = tuple(
                i for i, v in enumerate(self.vertices) if v.kind == WHITE
            )
        self.white_order = tuple(white_order)
        self._hash = hash((self.vertices, self.out, self.white_order))

    def __hash__(self):
        return self._hash

    def __eq__(self, other):
        return (
            isinstance(other, Graph)
            and self.vertices == other.vertices
            and self.out == other.out
            and self.white_order == other.white_order
        )

    def __repr__(self):
        return "Graph(%r, %r, %r)" % (self.vertices, self.out, self.white_order)

    def __len__(self):
        return len(self.vertices)

    @property
    def degree(self):
        """Cohomological degree = number of white vertices."""
        return len(self.white_order)

    def in_edges(self):
        """Map vertex id -> list of (source, slot), sources ascending."""
        ins = {i: [] for i in range(len(self.vertices))}
        for src, e in enumerate(self.out):
            if e is not None:
                ins[e[0]].append((src, e[1]))
        for lst in ins.values():
            lst.sort()
        return ins

    def edge_count(self):
        return sum(1 for e in self.out if e is not None)

    def labels(self):
        return sorted(v.label for v in self.vertices if v.kind == VECTOR)

    def count(self, kind):
        return sum(1 for v in self.vertices if v.kind == kind)

    def has_anchor(self):
        return any(v.kind == ANCHOR for v in self.vertices)


#: The empty graph: the unit of scalar-valued families.
EMPTY = Graph((), (), ())


def validate(g):
    """Return a list of violated structural invariants; empty means legal."""
    bad = []
    n = len(g.vertices)
    for i, v in enumerate(g.vertices):
        if v.kind == WHITE and v.order < 2:
            bad.append("white arity < 2 at vertex %d" % i)
        if v.kind in (VECTOR, CONNECTION) and v.order < 0:
            bad.append("negative derivative order at vertex %d" % i)
        if v.kind == VECTOR and not v.label:
            bad.append("unlabelled vector vertex %d" % i)
        if v.kind not in (VECTOR, CONNECTION, WHITE, ANCHOR):
            bad.append("unknown vertex kind %r" % (v.kind,))
    if len(g.out) != n:
        bad.append("out-map length mismatch")
        return bad
    # out-edge discipline
    for i, v in enumerate(g.vertices):
        e = g.out[i]
        if v.kind == ANCHOR:
            if e is not None:
                bad.append("anchor %d has an outgoing edge" % i)
            continue
        if e is None:
            bad.append("vertex %d lacks an outgoing edge" % i)
            continue
        dst, slot = e
        if not (0 <= dst < n):
            bad.append("edge from %d to missing vertex %d" % (i, dst))
            continue
        t = g.vertices[dst]
        if slot in (0, 1):
            if t.kind != CONNECTION:
                bad.append("base slot on non-connection target %d" % dst)
        elif slot != SYM:
            bad.append("bad slot code %r on edge from %d" % (slot, i))
    if bad:
        return bad
    # every input slot filled exactly once
    ins = g.in_edges()
    for i, v in enumerate(g.vertices):
        got_sym = sum(1 for _, s in ins[i] if s == SYM)
        want_sym = sym_size(v)
        if got_sym != want_sym:
            bad.append(
                "open input slot: vertex %d has %d/%d symmetric inputs"
                % (i, got_sym, want_sym)
            )
        if v.kind == CONNECTION:
            for b in (0, 1):
                k = sum(1 for _, s in ins[i] if s == b)
                if k != 1:
                    bad.append(
                        "open input slot: vertex %d base %d filled %d times"
                        % (i, b, k)
                    )
    # orientation datum
    whites = tuple(i for i, v in enumerate(g.vertices) if v.kind == WHITE)
    if sorted(g.white_order) != sorted(whites):
        bad.append("whiteOrder is not a permutation of the white vertices")
    return bad


def component_ids(g):
    """Weak-connectivity component id per vertex (ids are 0,1,... by min vertex)."""
    n = len(g.vertices)
    parent = list(range(n))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    for src, e in enumerate(g.out):
        if e is not None:
            ra, rb = find(src), find(e[0])
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    roots = {}
    ids = []
    for i in range(n):
        r = find(i)
        if r not in roots:
            roots[r] = len(roots)
        ids.append(roots[r])
    return ids


def is_connected(g):
    if len(g.vertices) == 0:
        return True
    return max(component_ids(g)) == 0


def components(g):
    """Split into weakly connected components (relative white order kept)."""
    ids = component_ids(g)
    ncomp = max(ids) + 1 if ids else 0
    out = []
    for c in range(ncomp):
        old = [i for i in range(len(g.vertices)) if ids[i] == c]
        remap = {o: k for k, o in enumerate(old)}
        verts = tuple(g.vertices[o] for o in old)
        outs = tuple(
            (remap[g.out[o][0]], g.out[o][1]) if g.out[o] is not None else None
            for o in old
        )
        order = tuple(remap[w] for w in g.white_order if w in remap)
        out.append(Graph(verts, outs, order))
    return out


def disjoint_union(a, b):
    """Disjoint union; b's whites come after a's in the orientation order."""
    off = len(a.vertices)
    verts = a.vertices + b.vertices
    outs = a.out + tuple(
        (e[0] + off, e[1]) if e is not None else None for e in b.out
    )
    order = a.white_order + tuple(w + off for w in b.white_order)
    return Graph(verts, outs, order)


def wheel_vertices(g):
    """Vertices on directed cycles.

    A connected anchor-free graph has exactly one directed cycle (its
    wheel); this returns the wheel vertices for such graphs and, in
    general, every vertex lying on some directed cycle.
    """
    n = len(g.vertices)
    on = set()
    for start in range(n):
        seen = {}
        i = start
        steps = 0
        while i is not None and i not in seen and steps <= n:
            seen[i] = steps
            e = g.out[i]
            i = e[0] if e is not None else None
            steps += 1
        if i is not None and i in seen:
            # walk the cycle once
            j = i
            while True:
                on.add(j)
                j = g.out[j][0]
                if j == i:
                    break
    return on


def wheel_length(g):
    """Number of vertices on the unique wheel of an anchor-free graph."""
    return len(wheel_vertices(g))


def relabel(g, mapping):
    """Return g with vector labels replaced through ``mapping`` (a dict)."""
    verts = tuple(
        Vertex(v.kind, mapping.get(v.label, v.label), v.order)
        if v.kind == VECTOR
        else v
        for v in g.vertices
    )
    return Graph(verts, g.out, g.white_order)

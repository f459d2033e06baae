"""JSON graph schema and DOT export.

The graph schema::

    {"vertices": [{"id": int, "kind": "vector"|"connection"|"white"|"anchor",
                   "label": str?, "derivOrder": int?, "arity": int?}],
     "edges":    [{"from": int, "to": int,
                   "slot": {"group": "base"|"sym", "index": int}}],
     "whiteOrder": [int]}

Rule templates reuse the schema with boundary ports as extra vertices
carrying a ``boundary`` index.  Formal sums are coefficient/graph pairs
with rational coefficients rendered as strings.  JSON is the only machine
format; DOT is write-only, for eyes.
"""

from __future__ import annotations

import json
from fractions import Fraction

from .canonical import key_bytes
from .formal import FormalSum
from .graphs import (
    ANCHOR,
    CONNECTION,
    SYM,
    VECTOR,
    WHITE,
    Graph,
    Vertex,
    validate,
)
from .rules import OUT

SCHEMA = "natops-v1"


class SchemaError(ValueError):
    pass


def graph_to_obj(g):
    verts = []
    for i, v in enumerate(g.vertices):
        o = {"id": i, "kind": v.kind}
        if v.kind == VECTOR:
            o["label"] = v.label
            o["derivOrder"] = v.order
        elif v.kind == CONNECTION:
            o["derivOrder"] = v.order
        elif v.kind == WHITE:
            o["arity"] = v.order
        verts.append(o)
    edges = []
    for src, e in enumerate(g.out):
        if e is None:
            continue
        dst, slot = e
        edges.append({
            "from": src,
            "to": dst,
            "slot": {"group": "sym" if slot == SYM else "base",
                     "index": 0 if slot == SYM else slot},
        })
    return {"vertices": verts, "edges": edges, "whiteOrder": list(g.white_order)}


def obj_to_graph(obj):
    try:
        vs = obj["vertices"]
        ids = [v["id"] for v in vs]
    except (KeyError, TypeError) as e:
        raise SchemaError("malformed graph object: %s" % e)
    if sorted(ids) != list(range(len(ids))):
        raise SchemaError("vertex ids must be 0..n-1")
    verts = [None] * len(vs)
    for v in vs:
        kind = v.get("kind")
        if kind == VECTOR:
            verts[v["id"]] = Vertex(VECTOR, v.get("label"), int(v.get("derivOrder", 0)))
        elif kind == CONNECTION:
            verts[v["id"]] = Vertex(CONNECTION, None, int(v.get("derivOrder", 0)))
        elif kind == WHITE:
            verts[v["id"]] = Vertex(WHITE, None, int(v.get("arity", 0)))
        elif kind == ANCHOR:
            verts[v["id"]] = Vertex(ANCHOR, None, 0)
        else:
            raise SchemaError("unknown vertex kind %r" % kind)
    out = [None] * len(vs)
    for e in obj.get("edges", ()):
        slot = e.get("slot", {})
        group = slot.get("group")
        if group == "sym":
            code = SYM
        elif group == "base":
            code = int(slot.get("index", 0))
            if code not in (0, 1):
                raise SchemaError("base slot index must be 0 or 1")
        else:
            raise SchemaError("slot group must be 'base' or 'sym'")
        src = int(e["from"])
        if out[src] is not None:
            raise SchemaError("vertex %d has several outgoing edges" % src)
        out[src] = (int(e["to"]), code)
    order = tuple(int(w) for w in obj.get("whiteOrder", ()))
    if not order:
        order = None
    g = Graph(tuple(verts), tuple(out), order)
    bad = validate(g)
    if bad:
        raise SchemaError("; ".join(bad))
    return g


def _frac_to_str(c):
    c = Fraction(c)
    return str(c.numerator) if c.denominator == 1 else "%d/%d" % (
        c.numerator, c.denominator)


def _str_to_frac(s):
    return Fraction(s)


def sum_to_obj(x):
    return {
        "schema": SCHEMA,
        "terms": [
            {"coeff": _frac_to_str(c), "graph": graph_to_obj(g)}
            for g, c in x.sorted_terms()
        ],
    }


def obj_to_sum(obj):
    out = FormalSum()
    terms = obj.get("terms")
    if terms is None:
        # a bare graph object is accepted as a single +1 term
        out.add_graph(obj_to_graph(obj), 1)
        return out
    for t in terms:
        out.add_graph(obj_to_graph(t["graph"]), _str_to_frac(t["coeff"]))
    return out


def template_to_obj(tpl):
    """A rule template in the graph schema, boundary ports marked."""
    terms = []
    for term in tpl.terms:
        nint = len(term.internals)
        verts = []
        for j, v in enumerate(term.internals):
            o = {"id": j, "kind": v.kind}
            if v.kind == VECTOR:
                o["label"] = v.label
                o["derivOrder"] = v.order
            elif v.kind == CONNECTION:
                o["derivOrder"] = v.order
            else:
                o["arity"] = v.order
            if term.ranks[j] is not None:
                o["rank"] = term.ranks[j]
            verts.append(o)
        for p in range(len(term.ports)):
            verts.append({"id": nint + p, "kind": "boundary", "boundary": p})
        verts.append({"id": nint + len(term.ports), "kind": "boundary",
                      "boundary": -1})
        edges = []

        def slotobj(code):
            return {"group": "sym" if code == SYM else "base",
                    "index": 0 if code == SYM else code}

        for j, tgt in enumerate(term.iout):
            if tgt == OUT:
                edges.append({"from": j, "to": nint + len(term.ports),
                              "slot": {"group": "sym", "index": 0}})
            else:
                edges.append({"from": j, "to": tgt[0], "slot": slotobj(tgt[1])})
        for p, (j, code) in enumerate(term.ports):
            edges.append({"from": nint + p, "to": j, "slot": slotobj(code)})
        terms.append({"coeff": term.coeff,
                      "graph": {"vertices": verts, "edges": edges}})
    return {"schema": SCHEMA, "kind": tpl.kind, "order": tpl.order,
            "terms": terms}


def slice_to_obj(bs):
    return {
        "schema": SCHEMA,
        "family": bs.family.name,
        "d": bs.d,
        "degree": bs.m,
        "graphs": [graph_to_obj(g) for g in bs.graphs],
        "keys": [key_bytes(g).decode() for g in bs.graphs],
    }


def dumps(obj):
    return json.dumps(obj, indent=1, sort_keys=True)


def to_dot(g, name="G"):
    """Graphviz rendering; labels encode kind and arity."""
    lines = ["digraph %s {" % name]
    for i, v in enumerate(g.vertices):
        if v.kind == VECTOR:
            label, shape = "%s(v=%d)" % (v.label, v.order), "circle"
        elif v.kind == CONNECTION:
            label, shape = "nabla(w=%d)" % v.order, "triangle"
        elif v.kind == WHITE:
            label, shape = "o(u=%d)" % v.order, "doublecircle"
        else:
            label, shape = "out", "square"
        lines.append('  v%d [label="%s", shape=%s];' % (i, label, shape))
    for src, e in enumerate(g.out):
        if e is None:
            continue
        dst, slot = e
        attr = "" if slot == SYM else ' [label="b%d"]' % slot
        lines.append("  v%d -> v%d%s;" % (src, dst, attr))
    lines.append("}")
    return "\n".join(lines) + "\n"

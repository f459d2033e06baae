"""Command-line surface.

All machine output is schema-versioned JSON on stdout; diagnostics go to
stderr.  Exit codes: 0 success, 1 a verification command found a violation
(d2check residue, naturality counterexample), 2 malformed input.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from . import genfun, io, jets
from .complexes import FAMILIES, d_squared_zero, differential, enumerate_basis
from .homology import delta_matrix, h0_dimension, kernel_basis
from .operad import compose, lie_expand, trace_sum


def _read_json(path):
    try:
        with (sys.stdin if path == "-" else open(path)) as fh:
            return json.load(fh)
    except (OSError, json.JSONDecodeError) as e:
        raise io.SchemaError(str(e))


def _write(obj, out):
    text = io.dumps(obj) + "\n"
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w") as fh:
            fh.write(text)


def _family(name):
    if name not in FAMILIES:
        raise io.SchemaError("unknown family %r" % name)
    return FAMILIES[name]


def cmd_basis(args):
    bs = enumerate_basis(_family(args.family), args.d, args.degree)
    _write(io.slice_to_obj(bs), args.out)
    return 0


def cmd_diff(args):
    x = io.obj_to_sum(_read_json(args.infile))
    fam = args.family if args.family is None else _family(args.family)
    if fam is not None and args.d is None:
        raise io.SchemaError("--family requires --d")
    y = differential(x, family=fam, d=args.d)
    _write(io.sum_to_obj(y), args.out)
    return 0


def cmd_d2check(args):
    rep = d_squared_zero(_family(args.family), args.d)
    obj = {
        "schema": io.SCHEMA,
        "family": rep.family,
        "d": rep.d,
        "checked": rep.checked,
        "failures": [
            {"graph": io.graph_to_obj(g), "residual": io.sum_to_obj(r)}
            for g, r in rep.failures
        ],
    }
    _write(obj, args.out)
    return 1 if rep.failures else 0


def cmd_h0(args):
    n = h0_dimension(_family(args.family), args.d)
    _write({"schema": io.SCHEMA, "family": args.family, "d": args.d, "h0": n},
           args.out)
    return 0


def cmd_kerbasis(args):
    basis = kernel_basis(_family(args.family), args.d)
    obj = {
        "schema": io.SCHEMA,
        "family": args.family,
        "d": args.d,
        "dimension": len(basis),
        "basis": [io.sum_to_obj(x) for x in basis],
    }
    _write(obj, args.out)
    return 0


def cmd_matrix(args):
    mat = delta_matrix(_family(args.family), args.d, args.degree)
    obj = {
        "schema": io.SCHEMA,
        "family": args.family,
        "d": args.d,
        "degree": args.degree,
        "rows": mat.nrows,
        "cols": mat.ncols,
        "triplets": [[r, c, io._frac_to_str(v)] for r, c, v in mat.triplets()],
    }
    _write(obj, args.out)
    return 0


def cmd_compose(args):
    a = io.obj_to_sum(_read_json(args.infile))
    b = io.obj_to_sum(_read_json(args.withfile))
    _write(io.sum_to_obj(compose(a, args.slot, b)), args.out)
    return 0


def cmd_lie_expand(args):
    _write(io.sum_to_obj(lie_expand(args.expr)), args.out)
    return 0


def cmd_trace(args):
    x = io.obj_to_sum(_read_json(args.infile))
    _write(io.sum_to_obj(trace_sum(x)), args.out)
    return 0


def _jetdata_from_obj(obj, need):
    labels, order, conn_order = need
    n = int(obj["n"])

    def tensor(nested, nfixed, nsym):
        t = jets.Tensor(n, nfixed, nsym)

        def walk(node, idx):
            if len(idx) == nfixed + nsym:
                v = Fraction(node) if not isinstance(node, str) else Fraction(node)
                if v:
                    t.set(idx[:nfixed], idx[nfixed:], v)
                return
            if len(node) != n:
                raise io.SchemaError("jet array has wrong extent")
            for i, sub in enumerate(node):
                walk(sub, idx + (i,))

        walk(nested, ())
        return t

    fields = {}
    for lab in labels:
        arrs = obj.get("fields", {}).get(lab)
        if arrs is None or len(arrs) < order + 1:
            raise io.SchemaError("jet data missing field %s to order %d"
                                 % (lab, order))
        fields[lab] = [tensor(arrs[v], 1, v) for v in range(order + 1)]
    conn = None
    if conn_order is not None:
        arrs = obj.get("connection")
        if arrs is None or len(arrs) < conn_order + 1:
            raise io.SchemaError("jet data missing connection jets")
        conn = [tensor(arrs[w], 3, w) for w in range(conn_order + 1)]
    return jets.JetData(n, order, fields, conn, conn_order)


def cmd_eval(args):
    x = io.obj_to_sum(_read_json(args.infile))
    need = jets.data_requirements(x)
    if args.data:
        data = _jetdata_from_obj(_read_json(args.data), need)
    else:
        import random

        labels, order, conn_order = need
        rng = random.Random(repr(("eval", args.seed)))
        data = jets.random_jet_data(rng, args.dim, labels, order,
                                    with_conn=conn_order is not None,
                                    conn_order=conn_order)
    val = jets.realize(x, data)
    if isinstance(val, list):
        out = {"schema": io.SCHEMA, "vector": [io._frac_to_str(v) for v in val]}
    else:
        out = {"schema": io.SCHEMA, "scalar": io._frac_to_str(val)}
    _write(out, args.out)
    return 0


def cmd_natcheck(args):
    x = io.obj_to_sum(_read_json(args.infile))
    bad = jets.naturality_check(x, args.dim, trials=args.trials, seed=args.seed)
    if bad is None:
        _write({"schema": io.SCHEMA, "result": "pass", "trials": args.trials,
                "dim": args.dim, "seed": args.seed}, args.out)
        return 0
    def render(v):
        if isinstance(v, list):
            return [io._frac_to_str(c) for c in v]
        return io._frac_to_str(v)
    _write({"schema": io.SCHEMA, "result": "counterexample",
            "trial": bad.trial, "dim": args.dim, "seed": args.seed,
            "transformed": render(bad.lhs), "expected": render(bad.rhs)},
           args.out)
    return 1


def cmd_genfun(args):
    rows = genfun.table(args.upto)
    rec = genfun.g_recursion(args.upto)
    if [r[1] for r in rows] != rec:
        sys.stderr.write("recursion/functional-equation mismatch\n")
        return 1
    genfun.dual_consistency(args.upto)
    _write({"schema": io.SCHEMA,
            "rows": [{"d": d, "g": g, "lie": lie} for d, g, lie in rows]},
           args.out)
    return 0


def cmd_export_dot(args):
    x = io.obj_to_sum(_read_json(args.infile))
    chunks = []
    for k, (g, c) in enumerate(x.sorted_terms()):
        chunks.append("// coeff %s\n%s" % (c, io.to_dot(g, "G%d" % k)))
    text = "".join(chunks)
    if args.out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(args.out, "w") as fh:
            fh.write(text)
    return 0


def cmd_rule(args):
    from . import rules

    if args.kind == "white":
        tpl = rules.replace_white(args.order)
    elif args.kind == "vector":
        tpl = rules.replace_vectorfield(args.order)
    else:
        tpl = rules.replace_connection(args.order)
    _write(io.template_to_obj(tpl), args.out)
    return 0


def build_parser():
    ap = argparse.ArgumentParser(
        prog="natops",
        description="graph-complex calculator for natural differential operators",
    )
    sub = ap.add_subparsers(dest="command", required=True)
    families = sorted(FAMILIES)

    def add(name, fn, **kw):
        p = sub.add_parser(name, **kw)
        p.set_defaults(fn=fn)
        p.add_argument("--out", default=None, help="output file (default stdout)")
        return p

    p = add("basis", cmd_basis, help="enumerate a basis slice")
    p.add_argument("--family", required=True, choices=families)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--degree", type=int, default=0)

    p = add("diff", cmd_diff, help="differential of a formal sum")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--family", choices=families)
    p.add_argument("--d", type=int)

    p = add("d2check", cmd_d2check, help="check delta^2 = 0 on a family")
    p.add_argument("--family", required=True, choices=families)
    p.add_argument("--d", type=int, required=True)

    p = add("h0", cmd_h0, help="dimension of the degree-0 kernel")
    p.add_argument("--family", required=True, choices=families)
    p.add_argument("--d", type=int, required=True)

    p = add("kerbasis", cmd_kerbasis, help="explicit kernel basis")
    p.add_argument("--family", required=True, choices=families)
    p.add_argument("--d", type=int, required=True)

    p = add("matrix", cmd_matrix, help="differential matrix as triplets")
    p.add_argument("--family", required=True, choices=families)
    p.add_argument("--d", type=int, required=True)
    p.add_argument("--degree", type=int, default=0)

    p = add("compose", cmd_compose, help="operadic insertion")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--slot", type=int, required=True)
    p.add_argument("--with", dest="withfile", required=True)

    p = add("lie-expand", cmd_lie_expand, help="expand a bracket/star word")
    p.add_argument("--expr", required=True,
                   help="s-expression, e.g. '(b (b X1 X2) X3)' or '(c X1 X2)'")

    p = add("trace", cmd_trace, help="trace map on an X0-linear sum")
    p.add_argument("--in", dest="infile", required=True)

    p = add("eval", cmd_eval, help="realize a degree-0 sum on jet data")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--data", default=None, help="JetData JSON (else random)")
    p.add_argument("--dim", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)

    p = add("natcheck", cmd_natcheck, help="seeded naturality trials")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--trials", type=int, default=20)
    p.add_argument("--seed", type=int, default=0)

    p = add("genfun", cmd_genfun, help="dimension table from generating functions")
    p.add_argument("--upto", type=int, required=True)

    p = add("export-dot", cmd_export_dot, help="DOT rendering of a sum")
    p.add_argument("--in", dest="infile", required=True)

    p = add("rule", cmd_rule, help="export a replacement rule template")
    p.add_argument("--kind", required=True, choices=["white", "vector", "connection"])
    p.add_argument("--order", type=int, required=True)

    return ap


def run(argv=None):
    ap = build_parser()
    args = ap.parse_args(argv)
    try:
        return args.fn(args)
    except io.SchemaError as e:
        sys.stderr.write("input error: %s\n" % e)
        return 2
    except (KeyError, ValueError) as e:
        sys.stderr.write("error: %s\n" % e)
        return 2


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()

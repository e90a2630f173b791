"""Command line front end.

Every run prints one JSON object on stdout carrying the tool version, the
seed (if any), the bounds used and the result.  Exit status: 0 on success,
2 when a precondition is violated, 1 on internal errors.
"""

from __future__ import annotations

import argparse
import json
import os
import random
import sys

from . import __version__
from . import bounded as bd
from . import coxeter as cx
from . import diagram as dg
from . import thinb as tb
from .errors import PreconditionError
from .twintree import building as tt
from .twintree import groups as tg
from .twintree.laurent import LaurentMat


class UsageError(Exception):
    pass


def _load_json(value: str):
    if os.path.exists(value):
        with open(value) as fh:
            return json.load(fh)
    return json.loads(value)


def _matrix(args) -> cx.CoxeterMatrix:
    if getattr(args, "type", None):
        return cx.matrix_from_name(args.type)
    if not getattr(args, "matrix", None):
        raise UsageError("one of --matrix or --type is required")
    return cx.CoxeterMatrix.from_json(_load_json(args.matrix))


def _subset(text: str | None, cm) -> frozenset:
    if not text:
        return frozenset()
    J = frozenset(int(x) for x in text.replace(",", " ").replace("{", " ").replace("}", " ").split())
    for j in J:
        cx._check_index(j, cm)
    return J


def _word(text: str | None, cm) -> cx.Element:
    return cx.reduce(cx.parse_word(text or "e"), cm)


def _place(text: str, cm):
    """A chamber ``w:sign`` or a residue ``w:J{..}:sign``."""
    if text.count(":") >= 2:
        return tb.parse_residue(text, cm)
    return tb.parse_chamber(text, cm)


def _as_residue(obj):
    return obj if isinstance(obj, tb.Residue) else tb.residue_of(obj, ())


def _laurent(q: int, value: str) -> LaurentMat:
    return LaurentMat.from_json(q, _load_json(value))


# --- coxeter ------------------------------------------------------------------


def cmd_coxeter(args):
    cm = _matrix(args)
    op = args.op
    if op == "reduce":
        w = _word(args.word, cm)
        return str(w), {}
    if op == "spherical":
        return cx.is_spherical(_subset(args.J, cm), cm), {}
    if op == "w0":
        return str(cx.longest_element(_subset(args.J, cm), cm)), {}
    if op in ("dcmin", "dcmax"):
        J, K, w = _subset(args.J, cm), _subset(args.K, cm), _word(args.word, cm)
        f = cx.double_coset_min if op == "dcmin" else cx.double_coset_max
        return str(f(J, w, K)), {}
    if op == "reflections":
        L = args.length
        if L < 1:
            raise UsageError("--length must be >= 1")
        return [str(t) for t in cx.reflections_up_to(cm, L)], {"length": L}
    raise UsageError(op)


# --- thinb --------------------------------------------------------------------


def cmd_thinb(args):
    cm = _matrix(args)
    op = args.op
    if op == "dist":
        x, y = tb.parse_chamber(args.x, cm), tb.parse_chamber(args.y, cm)
        w = tb.wdist(x, y)
        kind = "distance" if x.sign == y.sign else "codistance"
        return {"value": str(w), "kind": kind, "length": w.length}, {}
    if op == "proj":
        R = _as_residue(_place(args.R, cm))
        Q = _place(args.Q, cm)
        if isinstance(Q, tb.Chamber):
            return str(tb.project_chamber(R, Q)), {}
        return str(tb.project_residue(R, Q)), {}
    if op == "parallel":
        R, Q = _as_residue(_place(args.R, cm)), _as_residue(_place(args.Q, cm))
        return tb.is_parallel(R, Q), {}
    if op == "chain":
        R, Q = _as_residue(_place(args.R, cm)), _as_residue(_place(args.Q, cm))
        ch = tb.parallelism_chain(R, Q)
        return {"residues": [str(r) for r in ch.residues], "envelopes": [str(t) for t in ch.envelopes], "verified": ch.verify()}, {}
    if op == "root":
        x, y = tb.parse_chamber(args.x, cm), tb.parse_chamber(args.y, cm)
        return str(tb.twin_root_from(x, y)), {}
    if op == "interval":
        phi, psi = tb.parse_root(args.phi, cm), tb.parse_root(args.psi, cm)
        roots = tb.interval(phi, psi, args.bound, args.radius)
        return [str(r) for r in sorted(roots, key=tb.TwinRoot.sortkey)], {"bound": args.bound, "radius": args.radius}
    raise UsageError(op)


# --- diagram ------------------------------------------------------------------


def _fmt_sets(sets):
    return [sorted(J) for J in sorted(sets, key=lambda J: (len(J), sorted(J)))]


def cmd_diagram(args):
    op = args.op
    if op == "audit" and args.random:
        if args.seed is None:
            raise UsageError("--random requires --seed")
        rng = random.Random(args.seed)
        reports = []
        for _ in range(args.random):
            cm = dg.random_matrix(rng.randint(2, args.max_rank), rng)
            reports.append({"matrix": cm.to_json(), **dg.equivalence_audit(cm).to_json()})
        return {"reports": reports, "pass": all(r["pass"] for r in reports)}, {"count": args.random, "max_rank": args.max_rank}
    if op == "audit" and args.files:
        out = []
        for f in args.files:
            cm = cx.CoxeterMatrix.from_json(_load_json(f))
            out.append({"file": f, **dg.equivalence_audit(cm).to_json()})
        return out, {}
    cm = _matrix(args)
    if op == "spherical":
        lat = dg.spherical_subsets(cm)
        return {"spherical": _fmt_sets(lat.spherical), "maximal": _fmt_sets(lat.maximal)}, {}
    if op == "check":
        return dg.check_condition(cm, args.condition), {}
    if op == "audit":
        return dg.equivalence_audit(cm).to_json(), {}
    raise UsageError(op)


# --- bounded ------------------------------------------------------------------


def cmd_bounded(args):
    cm = _matrix(args)
    op = args.op
    if op == "classify":
        Rp = _as_residue(_place(args.plus, cm))
        Rm = _as_residue(_place(args.minus, cm))
        return bd.classify_pair(Rp, Rm).to_json(), {}
    if op == "enumerate":
        en = bd.enumerate_types(cm, args.bound)
        return {"verdicts": [v.to_json() for v in en.verdicts], "pairs_examined": en.pairs_examined, **en.metadata}, {"bound": args.bound}
    if op == "case2":
        return bd.case_ii_search(cm, args.bound), {"bound": args.bound}
    if op == "levi":
        Rp = _as_residue(_place(args.plus, cm))
        Rm = _as_residue(_place(args.minus, cm))
        return bd.levi_root_partition(Rp, Rm, args.bound).to_json(), {"bound": args.bound}
    raise UsageError(op)


# --- twintree -----------------------------------------------------------------


def _chamber(q, value, sign):
    if value is None:
        return tt.base_chamber(q, sign)
    return tt.ThickChamber(_laurent(q, value), sign)


def cmd_twintree(args):
    op = args.op
    q = args.q
    if op == "bruhat":
        g = _laurent(q, args.g)
        b1, w, b2 = tt.bruhat(g, args.sign)
        return {"b1": b1.to_json(), "w": tt.weyl_name(w), "b2": b2.to_json()}, {}
    if op == "birkhoff":
        g = _laurent(q, args.g)
        bp, w, bm = tt.birkhoff(g)
        return {"bp": bp.to_json(), "w": tt.weyl_name(w), "bm": bm.to_json()}, {}
    if op == "codist":
        x = _chamber(q, args.x, args.xsign)
        y = _chamber(q, args.y, "-" if args.xsign == "+" else "+")
        return tt.weyl_name(tt.codist(x, y)), {}
    if op == "ugroup":
        x = _chamber(q, args.x, "+")
        y = _chamber(q, args.y, "-")
        U = tg.unipotent_group(x, y)
        res = {"size": len(U), "closed": tg.is_closed(U, tg.closure_generators(x, y))}
        if args.list:
            res["elements"] = sorted((u.to_json() for u in U), key=json.dumps)
        return res, {"max_gallery": tg.MAX_GALLERY}
    if op == "torusfix":
        chs = tg.torus_fixed_chambers(q, args.radius, args.sign, allow_small=args.allow_small)
        return {
            "count": len(chs),
            "chambers": sorted(str(c) for c in chs),
            "all_standard": all(tg.in_standard_apartment(c) for c in chs),
        }, {"radius": args.radius}
    if op == "pcheck":
        return tg.check_P_conditions(q).to_json(), {}
    if op == "axioms":
        rep = tg.check_twin_axioms(q, args.samples, args.seed, args.radius)
        return rep.to_json(), {"radius": args.radius, "samples": args.samples}
    if op == "stabsearch":
        data = _load_json(args.gens) if args.gens else []
        gens = [LaurentMat.from_json(q, m) for m in data]
        if gens:
            res = tg.finite_subgroup_residues(gens, args.radius, args.cutoff)
        else:
            res = tg.base_chamber_residues(q)
        return [str(r) for r in res], {"radius": args.radius, "cutoff": args.cutoff}
    raise UsageError(op)


# --- parser -------------------------------------------------------------------


def _matrix_opts(p):
    g = p.add_mutually_exclusive_group()
    g.add_argument("--matrix", help="Coxeter matrix JSON file (or inline JSON); 0 encodes infinity")
    g.add_argument("--type", help="named Coxeter type, e.g. A2, B3, ~A2")


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="twinbuild", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"twinbuild {__version__}")
    sub = p.add_subparsers(dest="module", required=True)

    c = sub.add_parser("coxeter", help="Coxeter group computations")
    cs = c.add_subparsers(dest="op", required=True)
    for name in ("reduce", "spherical", "w0", "dcmin", "dcmax", "reflections"):
        sp = cs.add_parser(name)
        _matrix_opts(sp)
        if name in ("reduce", "dcmin", "dcmax"):
            sp.add_argument("--word", default="e")
        if name in ("spherical", "w0", "dcmin", "dcmax"):
            sp.add_argument("--J", default="")
        if name in ("dcmin", "dcmax"):
            sp.add_argument("--K", default="")
        if name == "reflections":
            sp.add_argument("--length", type=int, required=True)

    t = sub.add_parser("thinb", help="thin twin building")
    ts = t.add_subparsers(dest="op", required=True)
    for name in ("dist", "proj", "parallel", "chain", "root", "interval"):
        sp = ts.add_parser(name)
        _matrix_opts(sp)
        if name in ("dist", "root"):
            sp.add_argument("--x", required=True, help='chamber such as "1 2:+"')
            sp.add_argument("--y", required=True)
        if name in ("proj", "parallel", "chain"):
            sp.add_argument("--R", required=True, help='residue such as "e:J{1}:+" or a chamber')
            sp.add_argument("--Q", required=True)
        if name == "interval":
            sp.add_argument("--phi", required=True, help='twin root such as "1|+"')
            sp.add_argument("--psi", required=True)
            sp.add_argument("--bound", type=int, required=True)
            sp.add_argument("--radius", type=int, default=tb.DEFAULT_RADIUS)

    d = sub.add_parser("diagram", help="Coxeter diagram conditions")
    ds = d.add_subparsers(dest="op", required=True)
    for name in ("spherical", "check", "audit"):
        sp = ds.add_parser(name)
        _matrix_opts(sp)
        if name == "check":
            sp.add_argument("--condition", required=True, choices=list(dg.CONDITIONS) + ["R2′", "R3′", "R3″"])
        if name == "audit":
            sp.add_argument("files", nargs="*", help="batch mode: one matrix per file")
            sp.add_argument("--random", type=int, default=0, help="audit this many random matrices")
            sp.add_argument("--max-rank", type=int, default=6)
            sp.add_argument("--seed", type=int)

    b = sub.add_parser("bounded", help="maximal bounded subgroup types")
    bs = b.add_subparsers(dest="op", required=True)
    for name in ("classify", "enumerate", "case2", "levi"):
        sp = bs.add_parser(name)
        _matrix_opts(sp)
        if name in ("classify", "levi"):
            sp.add_argument("--plus", required=True)
            sp.add_argument("--minus", required=True)
        if name in ("enumerate", "case2", "levi"):
            sp.add_argument("--bound", type=int, required=True)

    w = sub.add_parser("twintree", help="twin tree of SL2 over GF(q)[t,t^-1]")
    wsub = w.add_subparsers(dest="op", required=True)
    for name in ("bruhat", "birkhoff", "codist", "ugroup", "torusfix", "pcheck", "axioms", "stabsearch"):
        sp = wsub.add_parser(name)
        sp.add_argument("--q", type=int, required=True)
        if name in ("bruhat", "birkhoff"):
            sp.add_argument("--g", required=True, help="Laurent matrix JSON (file or inline)")
        if name == "bruhat":
            sp.add_argument("--sign", choices=["+", "-"], default="+")
        if name in ("codist", "ugroup"):
            sp.add_argument("--x", help="matrix g of the chamber gB (default: identity)")
            sp.add_argument("--y", help="matrix h of the chamber hB (default: identity)")
        if name == "codist":
            sp.add_argument("--xsign", choices=["+", "-"], default="+")
        if name == "ugroup":
            sp.add_argument("--list", action="store_true")
        if name == "torusfix":
            sp.add_argument("--radius", type=int, required=True)
            sp.add_argument("--sign", choices=["+", "-"], default="+")
            sp.add_argument("--allow-small", action="store_true")
        if name == "axioms":
            sp.add_argument("--samples", type=int, default=100)
            sp.add_argument("--seed", type=int, required=True)
            sp.add_argument("--radius", type=int, default=5)
        if name == "stabsearch":
            sp.add_argument("--gens", help="JSON list of Laurent matrices")
            sp.add_argument("--radius", type=int, default=4)
            sp.add_argument("--cutoff", type=int, default=10000)
    return p


HANDLERS = {
    "coxeter": cmd_coxeter,
    "thinb": cmd_thinb,
    "diagram": cmd_diagram,
    "bounded": cmd_bounded,
    "twintree": cmd_twintree,
}


def run(argv=None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        result, bounds = HANDLERS[args.module](args)
    except (PreconditionError, UsageError, ValueError, KeyError, json.JSONDecodeError, FileNotFoundError) as exc:
        print(f"twinbuild: {type(exc).__name__}: {exc}", file=err)
        return 2
    except Exception as exc:  # internal failure
        print(f"twinbuild: internal error: {type(exc).__name__}: {exc}", file=err)
        return 1
    body = {
        "tool": "twinbuild",
        "version": __version__,
        "command": f"{args.module} {args.op}",
        "seed": getattr(args, "seed", None),
        "bounds": bounds,
        "result": result,
    }
    print(json.dumps(body, sort_keys=True, ensure_ascii=False), file=out)
    return 0


def main():
    sys.exit(run())


if __name__ == "__main__":
    main()

"""Command-line front end.

Reports go to standard output as JSON (or plain text with ``--format text``)
with a fixed field order, so identical inputs give byte-identical output.
Timing and a one-line summary go to standard error.

Exit status: 0 ok, 1 violations found, 2 input error.
"""
import argparse
import json
import sys
import time

from sievekit import cat2, documents, fincat, gabriel, sieves
from sievekit.errors import GuardExceeded, MalformedError

EXIT = {"ok": 0, "violations": 1, "error": 2}


class Report:
    def __init__(self, command):
        self.command = command
        self.status = "ok"
        self.items = []

    def add(self, item):
        self.items.append(item)

    def flag(self, items=()):
        self.status = "violations"
        self.items.extend(items)

    def as_dict(self):
        return {"command": self.command, "status": self.status, "count": len(self.items), "items": self.items}


def _violations(vs):
    return [v.to_dict() for v in vs]


def _load(path, kinds):
    doc = documents.load(path)
    kind = documents.detect_kind(doc)
    if kind not in kinds:
        raise documents.DocumentError(f"expected a {' or '.join(kinds)} document, got {kind}", path)
    return doc, kind


def _build(doc, kind):
    if kind == "category":
        return documents.category_from_doc(doc)
    if kind == "topology":
        return documents.topology_from_doc(doc)
    if kind == "ring":
        return documents.ring_from_doc(doc)
    if kind == "filter":
        return documents.filter_from_doc(doc)
    if kind == "cat2":
        return documents.cat2_from_doc(doc)
    if kind == "cat2-topology":
        return documents.cat_topology_from_doc(doc)
    if kind == "functor":
        return documents.functor_from_doc(doc)
    if kind == "presheaf":
        if "category" not in doc:
            raise documents.DocumentError("a standalone presheaf needs a 'category' field", "category")
        C = documents.category_from_doc(doc["category"], "category")
        return documents.presheaf_from_doc(doc, C)
    raise documents.DocumentError(f"unsupported kind {kind}")


def _summary(obj, kind):
    if kind in ("category", "presheaf", "functor"):
        if kind == "category":
            return {"objects": len(obj.objects), "morphisms": len(obj.morphisms)}
        if kind == "presheaf":
            return {"sizes": {x: len(obj.values[x]) for x in obj.base.objects}}
        return {"source_objects": len(obj.source.objects), "target_objects": len(obj.target.objects)}
    if kind == "topology":
        return {"covering_sieves": {x: len(v) for x, v in obj.cov.items()}}
    if kind == "ring":
        return {"elements": len(obj)}
    if kind == "filter":
        return {"elements": len(obj.ring), "ideals": len(obj)}
    if kind == "cat2":
        return {"objects": len(obj.objects), "arrows": len(obj.arrows)}
    return {"covering_sieves": {x: len(v) for x, v in obj.cov.items()}}


# -- subcommands ------------------------------------------------------------------

def cmd_validate(args, rep):
    doc, kind = _load(args.doc, documents.KINDS)
    obj = _build(doc, kind)
    rep.add({"kind": kind, **_summary(obj, kind)})


def cmd_topology(args, rep):
    if args.action == "check":
        doc, _ = _load(args.doc, ("topology",))
        bad = sieves.check_topology(documents.topology_from_doc(doc))
        if bad:
            rep.flag(_violations(bad))
        return
    doc, _ = _load(args.doc, ("category", "topology"))
    C = documents.category_from_doc(doc)
    for i, T in enumerate(sieves.enumerate_topologies(C, max_sieves=args.max_sieves)):
        rep.add({"index": i, "document": documents.topology_to_doc(T)})


def cmd_sheaf(args, rep):
    tdoc, _ = _load(args.doc, ("topology",))
    T = documents.topology_from_doc(tdoc)
    pdoc, _ = _load(args.presheaf, ("presheaf",))
    F = documents.presheaf_from_doc(pdoc, T.base, args.presheaf)
    if args.action == "check":
        res = sieves.sheaf_check(F, T)
        if not res:
            rep.flag(res.failures)
        return
    bad = sieves.check_topology(T)
    if bad:
        rep.flag(_violations(bad))
        return
    F2, unit = sieves.sheafify(F, T)
    rep.add({
        "sizes": {x: len(F2.values[x]) for x in T.base.objects},
        "unit": {x: {str(a): str(b) for a, b in unit.components[x].items()} for x in T.base.objects},
        "document": documents.presheaf_to_doc(F2),
    })


def _ideals(args, R):
    return gabriel.enumerate_right_ideals(R, max_ring=args.max_ring)


def cmd_gabriel(args, rep):
    if args.action == "check":
        doc, _ = _load(args.doc, ("filter",))
        F = documents.filter_from_doc(doc)
        bad = gabriel.check_gabriel_filter(F, _ideals(args, F.ring))
        if bad:
            rep.flag(_violations(bad))
        return
    doc, _ = _load(args.doc, ("ring", "filter"))
    R = documents.ring_from_doc(doc)
    ideals = _ideals(args, R)
    if args.action == "ideals":
        for i, I in enumerate(ideals):
            rep.add({"index": i, "ideal": I.names()})
    elif args.action == "filters":
        ring_doc = documents.ring_to_doc(R)
        for i, F in enumerate(gabriel.enumerate_gabriel_filters(R, max_ideals=args.max_ideals, ideals=ideals)):
            fam = [I.names() for I in F]
            rep.add({"index": i, "filter": fam, "document": {**ring_doc, "filter": fam}})
    else:
        if len(ideals) > args.max_ideals:
            raise GuardExceeded("max-ideals", args.max_ideals, len(ideals))
        counts = {"families": 0, "gabriel_filters": 0, "enriched_topologies": 0}
        disagree = []
        for F in gabriel.ideal_families(ideals):
            g = not gabriel.check_gabriel_filter(F, ideals)
            e = not gabriel.check_ab_enriched_topology(F, ideals)
            counts["families"] += 1
            counts["gabriel_filters"] += g
            counts["enriched_topologies"] += e
            if g != e:
                disagree.append({"family": [I.names() for I in F], "gabriel": g, "enriched": e})
        rep.add({"ideals": len(ideals), **counts, "agree": not disagree})
        if disagree:
            rep.flag(disagree)


def cmd_cat2(args, rep):
    if args.action == "homotopy-mono":
        doc, _ = _load(args.doc, ("functor",))
        res = cat2.is_homotopy_mono_functor(documents.functor_from_doc(doc))
        if res:
            rep.add({"homotopy_mono": True})
        else:
            rep.flag([{"homotopy_mono": False, "witness": res.witness}])
        return
    if args.action == "lift":
        doc, _ = _load(args.doc, ("topology",))
        T = documents.topology_from_doc(doc)
        bad = sieves.check_topology(T)
        if bad:
            rep.flag(_violations(bad))
            return
        rep.add({"document": documents.cat_topology_to_doc(cat2.lift_topology(T))})
        return
    doc, _ = _load(args.doc, ("cat2-topology",))
    T = documents.cat_topology_from_doc(doc)
    bad = cat2.check_cat_topology(T)
    if bad:
        rep.flag(_violations(bad))
        return
    if args.action == "induce":
        ind = cat2.induced_topology(T)
        again = sieves.check_topology(ind)
        rep.add({"document": documents.topology_to_doc(ind), "valid": not again})
        if again:
            rep.flag(_violations(again))


# -- plumbing -----------------------------------------------------------------------

def _error_item(exc):
    if isinstance(exc, GuardExceeded):
        return {"error": "guard", "guard": exc.guard, "limit": exc.limit, "actual": exc.actual, "message": str(exc)}
    if isinstance(exc, documents.DocumentError):
        return {"error": "document", "location": exc.location, "message": str(exc)}
    law = getattr(exc, "law", None)
    if law is not None:
        return {"error": law, "witness": list(exc.witness), "message": str(exc)}
    return {"error": type(exc).__name__, "message": str(exc)}


def render_text(report):
    lines = [f"command: {' '.join(report['command'])}", f"status: {report['status']}", f"count: {report['count']}"]
    for item in report["items"]:
        fields = ", ".join(f"{k}={json.dumps(v, ensure_ascii=False, sort_keys=False)}" for k, v in item.items())
        lines.append(f"- {fields}")
    return "\n".join(lines)


def build_parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("json", "text"), default="json")
    common.add_argument("--max-sieves", type=int, default=sieves.DEFAULT_MAX_SIEVES)
    common.add_argument("--max-ring", type=int, default=gabriel.DEFAULT_MAX_RING)
    common.add_argument("--max-ideals", type=int, default=gabriel.DEFAULT_MAX_IDEALS)

    p = argparse.ArgumentParser(prog="sievekit", description="Finite sites, Gabriel filters and enriched homotopy topologies.")
    sub = p.add_subparsers(dest="cmd", required=True)

    v = sub.add_parser("validate", parents=[common], help="parse a document and check its structural laws")
    v.add_argument("doc")
    v.set_defaults(func=cmd_validate)

    t = sub.add_parser("topology", parents=[common], help="check or enumerate Grothendieck topologies")
    t.add_argument("action", choices=("check", "enumerate"))
    t.add_argument("doc")
    t.set_defaults(func=cmd_topology)

    s = sub.add_parser("sheaf", parents=[common], help="sheaf condition and sheafification")
    s.add_argument("action", choices=("check", "sheafify"))
    s.add_argument("doc", help="topology document")
    s.add_argument("presheaf", help="presheaf document")
    s.set_defaults(func=cmd_sheaf)

    g = sub.add_parser("gabriel", parents=[common], help="right ideals and Gabriel filters of a finite ring")
    g.add_argument("action", choices=("ideals", "filters", "check", "correspond"))
    g.add_argument("doc")
    g.set_defaults(func=cmd_gabriel)

    c = sub.add_parser("cat2", parents=[common], help="enriched homotopy layer")
    c.add_argument("action", choices=("homotopy-mono", "check", "induce", "lift"))
    c.add_argument("doc")
    c.set_defaults(func=cmd_cat2)
    return p


def run(argv=None, out=None, err=None):
    """Run one command; returns ``(report dict, exit status)``."""
    out = out or sys.stdout
    err = err or sys.stderr
    argv = list(sys.argv[1:] if argv is None else argv)
    args = build_parser().parse_args(argv)
    rep = Report(argv)
    start = time.perf_counter()
    try:
        args.func(args, rep)
    except (
        documents.DocumentError,
        GuardExceeded,
        MalformedError,
        fincat.CategoryError,
        fincat.FunctorError,
        fincat.PresheafError,
        gabriel.RingError,
        cat2.Cat2Error,
    ) as exc:
        rep.status = "error"
        rep.items = [_error_item(exc)]
    report = rep.as_dict()
    text = render_text(report) if args.format == "text" else json.dumps(report, indent=2, ensure_ascii=False, default=str)
    out.write(text + "\n")
    elapsed = time.perf_counter() - start
    err.write(f"sievekit {args.cmd}: {report['status']}, {report['count']} item(s) in {elapsed:.3f}s\n")
    return report, EXIT[report["status"]]


def main(argv=None):
    _, status = run(argv)
    return status


if __name__ == "__main__":
    sys.exit(main())

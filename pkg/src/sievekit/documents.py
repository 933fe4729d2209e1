"""Reading and writing site documents (YAML or JSON).

Every name read from a document is converted to ``str`` so that YAML scalars
such as ``0`` and ``"0"`` mean the same object.
"""
import json
import sys

import yaml

from sievekit import cat2, fincat, gabriel, sieves

KINDS = ("category", "topology", "ring", "filter", "cat2", "cat2-topology", "presheaf", "functor")


class DocumentError(ValueError):
    """Malformed document; ``location`` points at the offending field."""

    def __init__(self, message, location=""):
        super().__init__(f"{location}: {message}" if location else message)
        self.location = location


def load(path):
    """Parse a YAML/JSON document from a path, or from standard input for ``-``."""
    try:
        if path == "-":
            text = sys.stdin.read()
        else:
            with open(path, encoding="utf-8") as fh:
                text = fh.read()
    except OSError as exc:
        raise DocumentError(f"cannot read input: {exc.strerror}", path) from None
    try:
        doc = yaml.safe_load(text)
    except yaml.YAMLError as exc:
        mark = getattr(exc, "problem_mark", None)
        where = f"{path}:{mark.line + 1}:{mark.column + 1}" if mark else path
        raise DocumentError(f"parse error: {getattr(exc, 'problem', exc)}", where) from None
    if not isinstance(doc, dict):
        raise DocumentError("document must be a mapping", path)
    return doc


def dump(doc):
    return json.dumps(doc, indent=2, ensure_ascii=False, default=str)


def detect_kind(doc):
    kind = doc.get("kind")
    if kind is not None:
        if kind not in KINDS:
            raise DocumentError(f"unknown kind {kind!r}", "kind")
        return kind
    if "hom" in doc:
        return "cat2-topology" if "cov" in doc else "cat2"
    if any(k in doc for k in ("elements", "zmod", "prime_field", "product", "upper_triangular")):
        return "filter" if "filter" in doc else "ring"
    if "source" in doc and "target" in doc:
        return "functor"
    if "values" in doc:
        return "presheaf"
    if "objects" in doc:
        return "topology" if "cov" in doc else "category"
    raise DocumentError("cannot tell what kind of document this is")


def _field(doc, key, loc, kind=None):
    if key not in doc:
        raise DocumentError(f"missing field {key!r}", loc)
    value = doc[key]
    if kind is not None and not isinstance(value, kind):
        raise DocumentError(f"field {key!r} has the wrong type", f"{loc}.{key}" if loc else key)
    return value


def _names(seq, loc):
    if not isinstance(seq, list):
        raise DocumentError("expected a list", loc)
    return [str(v) for v in seq]


# -- categories -------------------------------------------------------------------

def category_from_doc(doc, loc=""):
    """Build and validate a FinCategory. Law failures raise ``CategoryError``."""
    objects = _names(_field(doc, "objects", loc, list), f"{loc}.objects")
    morphisms = []
    for i, m in enumerate(_field(doc, "morphisms", loc, list)):
        where = f"{loc}.morphisms[{i}]"
        if not isinstance(m, dict):
            raise DocumentError("expected {name, src, tgt}", where)
        morphisms.append(tuple(str(_field(m, k, where)) for k in ("name", "src", "tgt")))
    identities = {str(k): str(v) for k, v in (doc.get("identities") or {}).items()}
    compose = {}
    for i, c in enumerate(doc.get("compose") or []):
        where = f"{loc}.compose[{i}]"
        if not isinstance(c, dict):
            raise DocumentError("expected {g, f, result}", where)
        g, f, h = (str(_field(c, k, where)) for k in ("g", "f", "result"))
        if (g, f) in compose:
            raise DocumentError(f"composite {g} . {f} listed twice", where)
        compose[g, f] = h
    return fincat.FinCategory(objects, morphisms, identities, compose)


def category_to_doc(C):
    idents = set(C.identity.values())
    compose = [
        {"g": g, "f": f, "result": h}
        for (g, f), h in C.composition_items()
        if g not in idents and f not in idents
    ]
    return {
        "objects": list(C.objects),
        "morphisms": [{"name": f, "src": C.src[f], "tgt": C.tgt[f]} for f in C.morphisms],
        "identities": {x: C.identity[x] for x in C.objects},
        "compose": compose,
    }


def functor_from_doc(doc, loc=""):
    A = category_from_doc(_field(doc, "source", loc, dict), f"{loc}.source")
    B = category_from_doc(_field(doc, "target", loc, dict), f"{loc}.target")
    return _functor_tables(doc, A, B, loc)


# -- topologies and presheaves ----------------------------------------------------------

def topology_from_doc(doc, C=None, loc=""):
    C = C or category_from_doc(doc, loc)
    cov = _field(doc, "cov", loc, dict)
    out = {}
    for x, sieve_list in cov.items():
        x = str(x)
        where = f"{loc}.cov.{x}"
        if x not in C.obj_index:
            raise DocumentError(f"unknown object {x!r}", where)
        out[x] = [sieves.Sieve(C, x, _names(s, f"{where}[{i}]")) for i, s in enumerate(sieve_list or [])]
    return sieves.GrothendieckTopology(C, out)


def topology_to_doc(T):
    doc = category_to_doc(T.base)
    doc["cov"] = {x: [S.sorted_members() for S in ss] for x, ss in T.cov.items()}
    return doc


def presheaf_from_doc(doc, C, loc=""):
    values = {str(x): _names(v, f"{loc}.values.{x}") for x, v in _field(doc, "values", loc, dict).items()}
    for x in values:
        if x not in C.obj_index:
            raise DocumentError(f"unknown object {x!r}", f"{loc}.values")
    restrictions = {}
    for f, table in (doc.get("restrictions") or {}).items():
        f = str(f)
        if f not in C.mor_index:
            raise DocumentError(f"unknown morphism {f!r}", f"{loc}.restrictions")
        restrictions[f] = {str(a): str(b) for a, b in (table or {}).items()}
    return fincat.SetPresheaf(C, values, restrictions)


def presheaf_to_doc(F):
    C = F.base
    return {
        "values": {x: [str(a) for a in F.values[x]] for x in C.objects},
        "restrictions": {
            f: {str(a): str(F.restrictions[f][a]) for a in F.values[C.tgt[f]]}
            for f in C.morphisms
            if f != C.identity[C.src[f]]
        },
    }


# -- rings -------------------------------------------------------------------------

def ring_from_doc(doc, loc=""):
    if "zmod" in doc:
        return gabriel.zmod(int(doc["zmod"]))
    if "prime_field" in doc:
        return gabriel.prime_field(int(doc["prime_field"]))
    if "upper_triangular" in doc:
        ut = doc["upper_triangular"]
        if not isinstance(ut, dict) or int(ut.get("size", 2)) != 2:
            raise DocumentError("only size 2 is supported", f"{loc}.upper_triangular")
        return gabriel.upper_triangular(int(_field(ut, "p", f"{loc}.upper_triangular")))
    if "product" in doc:
        parts = _field(doc, "product", loc, list)
        if len(parts) != 2:
            raise DocumentError("product takes exactly two rings", f"{loc}.product")
        return gabriel.product_ring(ring_from_doc(parts[0], f"{loc}.product[0]"), ring_from_doc(parts[1], f"{loc}.product[1]"))
    elements = _names(_field(doc, "elements", loc, list), f"{loc}.elements")
    add = [_names(r, f"{loc}.add") for r in _field(doc, "add", loc, list)]
    mul = [_names(r, f"{loc}.mul") for r in _field(doc, "mul", loc, list)]
    return gabriel.FinRing(elements, add, mul, str(_field(doc, "zero", loc)), str(_field(doc, "one", loc)))


def ring_to_doc(R):
    e = R.elements
    return {
        "elements": list(e),
        "add": [[e[v] for v in row] for row in R.add],
        "mul": [[e[v] for v in row] for row in R.mul],
        "zero": e[R.zero],
        "one": e[R.one],
    }


def filter_from_doc(doc, R=None, loc=""):
    R = R or ring_from_doc(doc, loc)
    fam = _field(doc, "filter", loc, list)
    return gabriel.IdealFilter(R, [_names(i, f"{loc}.filter[{n}]") for n, i in enumerate(fam)])


# -- 2-categories --------------------------------------------------------------------

def _pair(key, loc):
    parts = str(key).split("->")
    if len(parts) != 2:
        raise DocumentError(f"hom key {key!r} must look like 'y->x'", loc)
    return parts[0].strip(), parts[1].strip()


def _table(entries, loc):
    out = {}
    for i, c in enumerate(entries or []):
        where = f"{loc}[{i}]"
        out[str(_field(c, "g", where)), str(_field(c, "f", where))] = str(_field(c, "result", where))
    return out


def cat2_from_doc(doc, loc=""):
    objects = _names(_field(doc, "objects", loc, list), f"{loc}.objects")
    homs = {}
    for key, sub in _field(doc, "hom", loc, dict).items():
        homs[_pair(key, f"{loc}.hom")] = category_from_doc(sub, f"{loc}.hom.{key}")
    identities = {str(k): str(v) for k, v in _field(doc, "identities", loc, dict).items()}
    tables = doc.get("compose2") or {}
    arrows = _table(tables.get("arrows"), f"{loc}.compose2.arrows")
    cells = _table(tables.get("cells"), f"{loc}.compose2.cells")
    order = doc.get("arrows")
    return cat2.FinCat2(objects, homs, identities, arrows, cells, arrow_order=None if order is None else _names(order, f"{loc}.arrows"))


def cat2_to_doc(C2):
    homs = {f"{y}->{x}": category_to_doc(H) for (y, x), H in C2.homs.items() if H.objects}
    unit_arrows = set(C2.identity.values())
    unit_cells = {C2.id_cell(a) for a in unit_arrows}
    return {
        "objects": list(C2.objects),
        "arrows": list(C2.arrows),
        "identities": {x: C2.identity[x] for x in C2.objects},
        "hom": homs,
        "compose2": {
            "arrows": [{"g": g, "f": f, "result": h} for (g, f), h in C2.arrow_items() if g not in unit_arrows and f not in unit_arrows],
            "cells": [{"g": g, "f": f, "result": h} for (g, f), h in C2.cell_items() if g not in unit_cells and f not in unit_cells],
        },
    }


def _functor_tables(doc, A, B, loc):
    omap = {str(k): str(v) for k, v in _field(doc, "objects", loc, dict).items()}
    mmap = {str(k): str(v) for k, v in (doc.get("morphisms") or {}).items()}
    for x in A.objects:
        if x in omap and omap[x] in B.obj_index:
            mmap.setdefault(A.identity[x], B.identity[omap[x]])
    return fincat.FunctorData(A, B, omap, mmap)


def cat_sieve_from_doc(doc, C2, x, loc=""):
    """Either ``{sub: {y: {arrows, cells}}}`` or an explicit presheaf with
    ``values``, ``act0``, ``act1`` and ``map``."""
    if "sub" in doc:
        parts = {}
        for y, part in (doc["sub"] or {}).items():
            part = part or {}
            parts[str(y)] = (_names(part.get("arrows", []), f"{loc}.sub.{y}"), _names(part.get("cells", []), f"{loc}.sub.{y}"))
        return cat2.sub_cat_sieve(C2, x, parts)
    values = {str(y): category_from_doc(v, f"{loc}.values.{y}") for y, v in _field(doc, "values", loc, dict).items()}
    act0 = {}
    for f, tables in _field(doc, "act0", loc, dict).items():
        f = str(f)
        y, z = C2.arrow_hom[f][1], C2.arrow_hom[f][0]
        act0[f] = _functor_tables(tables, values[y], values[z], f"{loc}.act0.{f}")
    act1 = {str(c): {str(a): str(m) for a, m in comp.items()} for c, comp in (doc.get("act1") or {}).items()}
    R = cat2.CatPresheaf(C2, values, act0, act1)
    h = cat2.representable(C2, x)
    comps = {str(y): _functor_tables(t, values[str(y)], h.values[str(y)], f"{loc}.map.{y}") for y, t in _field(doc, "map", loc, dict).items()}
    return cat2.CatSieve(x, R, cat2.CatPresheafMap(R, h, comps))


def cat_sieve_to_doc(S):
    return {"sub": S.describe()}


def cat_topology_from_doc(doc, loc=""):
    C2 = cat2_from_doc(doc, loc)
    cov = {}
    for x, entries in _field(doc, "cov", loc, dict).items():
        x = str(x)
        if x not in C2.objects:
            raise DocumentError(f"unknown object {x!r}", f"{loc}.cov")
        cov[x] = [cat_sieve_from_doc(e, C2, x, f"{loc}.cov.{x}[{i}]") for i, e in enumerate(entries or [])]
    return cat2.CatTopology(C2, cov)


def cat_topology_to_doc(T):
    doc = cat2_to_doc(T.base)
    doc["cov"] = {x: [cat_sieve_to_doc(S) for S in ss] for x, ss in T.cov.items()}
    return doc

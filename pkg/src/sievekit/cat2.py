"""The Cat-enriched layer: homotopy monomorphisms of finite categories,
iso-comma pullbacks, and sieves and topologies on finite strict 2-categories.

Terminology: in a :class:`FinCat2` the objects of a hom-category ``hom(y, x)``
are called *arrows* (the 1-morphisms ``y -> x``) and its morphisms are called
*cells* (2-morphisms between parallel arrows). Arrow names are unique across
the whole 2-category, and so are cell names.

Homotopy notions are computed on finite data:

* a functor is a homotopy monomorphism iff it is faithful and bijective on
  isomorphisms between any two objects;
* the homotopy pullback is the iso-comma category;
* two sieves over ``h_x`` are equivalent iff their replete images agree at
  every object, and the replete image is used as the canonical form of a sieve;
* arrows of the homotopy category are isomorphism classes of arrows.
"""
import itertools

import numpy as np

from sievekit import kernels
from sievekit.errors import GuardExceeded, MalformedError, Violation
from sievekit.fincat import (
    CategoryError,
    FinCategory,
    FunctorData,
    codiscrete,
    compose_functors,
    discrete,
    identity_functor,
    inclusion_functor,
    subcategory,
)
from sievekit.sieves import GrothendieckTopology, Sieve

DEFAULT_MAX_CAT_SIEVES = 4096


class Cat2Error(ValueError):
    def __init__(self, law, message, witness=()):
        super().__init__(f"{law}: {message}")
        self.law = law
        self.witness = tuple(witness)


# -- homotopy monomorphisms ---------------------------------------------------

class HomotopyMonoCheck:
    """Result of :func:`is_homotopy_mono_functor`; truthy on success."""

    def __init__(self, witness=None):
        self.witness = witness

    @property
    def ok(self):
        return self.witness is None

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return f"HomotopyMonoCheck(ok={self.ok}, witness={self.witness!r})"


def is_homotopy_mono_functor(F):
    """Faithful, and ``Iso(a, a') -> Iso(Fa, Fa')`` bijective for all ``a, a'``.

    Faithfulness already makes the iso map injective, so only surjectivity is
    left to test. Witnesses: ``{"kind": "not-faithful", "morphisms": [m1, m2], ...}``
    or ``{"kind": "iso-not-hit", "objects": [a, a2], "iso": psi}``.
    """
    A, B = F.source, F.target
    for a in A.objects:
        for a2 in A.objects:
            seen = {}
            for m in A.hom(a, a2):
                img = F.mor_map[m]
                if img in seen:
                    return HomotopyMonoCheck({"kind": "not-faithful", "objects": [a, a2], "morphisms": [seen[img], m], "image": img})
                seen[img] = m
    for a in A.objects:
        for a2 in A.objects:
            hit = {F.mor_map[m] for m in A.isos(a, a2)}
            for psi in B.isos(F.obj_map[a], F.obj_map[a2]):
                if psi not in hit:
                    return HomotopyMonoCheck({"kind": "iso-not-hit", "objects": [a, a2], "iso": psi})
    return HomotopyMonoCheck()


# -- iso-comma categories ------------------------------------------------------

class IsoComma:
    """``category`` with projections ``proj_a``, ``proj_b`` and the
    tautological isomorphism ``iso[o]: F(proj_a o) -> G(proj_b o)``."""

    def __init__(self, category, proj_a, proj_b, iso):
        self.category = category
        self.proj_a = proj_a
        self.proj_b = proj_b
        self.iso = iso


def iso_comma(F, G):
    """The iso-comma category of ``F: A -> C`` and ``G: B -> C``.

    Objects are triples ``(a, b, phi)`` with ``phi: F a -> G b`` invertible;
    a morphism ``(a, b, phi) -> (a2, b2, phi2)`` is a pair ``(u, v)`` with
    ``G(v) . phi == phi2 . F(u)``, named ``(source, target, u, v)``.
    """
    if F.target != G.target:
        raise ValueError("iso_comma needs functors with a common target")
    A, B, C = F.source, G.source, F.target
    objects = [
        (a, b, phi)
        for a in A.objects
        for b in B.objects
        for phi in C.isos(F.obj_map[a], G.obj_map[b])
    ]
    morphisms = []
    by_pair = {}
    for o1 in objects:
        for o2 in objects:
            (a, b, phi), (a2, b2, phi2) = o1, o2
            found = []
            for u in A.hom(a, a2):
                lhs_u = C.compose(phi2, F.mor_map[u])
                for v in B.hom(b, b2):
                    if C.compose(G.mor_map[v], phi) == lhs_u:
                        found.append((o1, o2, u, v))
            by_pair[o1, o2] = found
            morphisms.extend(found)
    identity = {o: (o, o, A.identity[o[0]], B.identity[o[1]]) for o in objects}
    comp = {}
    for o1 in objects:
        for o2 in objects:
            for f in by_pair[o1, o2]:
                for o3 in objects:
                    for g in by_pair[o2, o3]:
                        comp[g, f] = (o1, o3, A.compose(g[2], f[2]), B.compose(g[3], f[3]))
    cat = FinCategory(objects, [(m, m[0], m[1]) for m in morphisms], identity, comp)
    proj_a = FunctorData(cat, A, {o: o[0] for o in objects}, {m: m[2] for m in morphisms}, check=False)
    proj_b = FunctorData(cat, B, {o: o[1] for o in objects}, {m: m[3] for m in morphisms}, check=False)
    return IsoComma(cat, proj_a, proj_b, {o: o[2] for o in objects})


# -- finite strict 2-categories -------------------------------------------------

class FinCat2:
    """A finite strict 2-category.

    ``homs[(y, x)]`` is the hom-category of arrows ``y -> x`` (pairs that are
    missing are empty). ``identities[x]`` is the identity arrow of ``x``.
    ``compose_arrows[(g, f)]`` and ``compose_cells[(beta, alpha)]`` give
    horizontal composites (``f``/``alpha`` applied first). Composites with
    identity arrows and their identity cells may be omitted. ``arrow_order``
    fixes the canonical order of arrows (default: hom-category by
    hom-category).
    """

    def __init__(self, objects, homs, identities, compose_arrows, compose_cells, arrow_order=None):
        self.objects = tuple(objects)
        empty = FinCategory([], [], {}, {})
        self.homs = {(y, x): homs.get((y, x), empty) for y in self.objects for x in self.objects}
        for key in homs:
            if key not in self.homs:
                raise Cat2Error("unknown-object", f"hom-category declared for unknown pair {key!r}", key)
        self.identity = dict(identities)
        self.arrow_hom = {}
        self.cell_hom = {}
        for key, H in self.homs.items():
            for a in H.objects:
                if a in self.arrow_hom:
                    raise Cat2Error("duplicate-arrow", f"arrow {a!r} appears in two hom-categories", (a,))
                self.arrow_hom[a] = key
            for c in H.morphisms:
                if c in self.cell_hom:
                    raise Cat2Error("duplicate-cell", f"cell {c!r} appears in two hom-categories", (c,))
                self.cell_hom[c] = key
        for x in self.objects:
            if self.arrow_hom.get(self.identity.get(x)) != (x, x):
                raise Cat2Error("missing-identity", f"object {x!r} has no identity arrow", (x,))
        if arrow_order is None:
            self.arrows = tuple(self.arrow_hom)
        else:
            self.arrows = tuple(arrow_order)
            if sorted(map(repr, self.arrows)) != sorted(map(repr, self.arrow_hom)):
                raise Cat2Error("arrow-order", "arrow_order must list every arrow exactly once")
        self._arrows = self._table(dict(compose_arrows), self.arrow_hom, "arrow", self._arrow_unit)
        self._cells = self._table(dict(compose_cells), self.cell_hom, "cell", self._cell_unit)
        self._validate()

    # -- table construction

    def _arrow_unit(self, key):
        return self.identity[key[1]], self.identity[key[0]]

    def _cell_unit(self, key):
        y, x = key
        return self.homs[x, x].identity[self.identity[x]], self.homs[y, y].identity[self.identity[y]]

    def _table(self, given, where, label, unit):
        table = {}
        for (g, f), h in given.items():
            for c in (g, f, h):
                if c not in where:
                    raise Cat2Error(f"unknown-{label}", f"composition uses unknown {label} {c!r}", (g, f, h))
            (y, x), (z, y2) = where[g], where[f]
            if y != y2:
                raise Cat2Error("non-composable", f"{label}s {g!r} and {f!r} are not composable", (g, f))
            if where[h] != (z, x):
                raise Cat2Error("wrong-hom", f"{g!r} . {f!r} = {h!r} lands in the wrong hom-category", (g, f, h))
            table[g, f] = h
        for f, key in where.items():
            left, right = unit(key)
            for pair in ((left, f), (f, right)):
                if table.setdefault(pair, f) != f:
                    raise Cat2Error("unit-law", f"{pair[0]!r} . {pair[1]!r} should be {f!r}", (*pair, table[pair]))
        for g, (y, x) in where.items():
            for f, (z, y2) in where.items():
                if y == y2 and (g, f) not in table:
                    raise Cat2Error("missing-composite", f"no composite given for {label}s {g!r} . {f!r}", (g, f))
        return table

    def _validate(self):
        for label, table, where in (("arrow", self._arrows, self.arrow_hom), ("cell", self._cells, self.cell_hom)):
            names = list(where)
            idx = {c: i for i, c in enumerate(names)}
            comp = np.full((len(names), len(names)), -1, dtype=np.int64)
            for (g, f), h in table.items():
                comp[idx[g], idx[f]] = idx[h]
            h, g, f = (int(v) for v in kernels.first_nonassociative(comp))
            if h >= 0:
                raise Cat2Error(f"{label}-associativity", "horizontal composition is not associative", (names[h], names[g], names[f]))
        # horizontal composition is a functor hom(y,x) x hom(z,y) -> hom(z,x)
        for (y, x), Hg in self.homs.items():
            for z in self.objects:
                Hf, Hout = self.homs[z, y], self.homs[z, x]
                for beta in Hg.morphisms:
                    for alpha in Hf.morphisms:
                        gamma = self._cells[beta, alpha]
                        src = self._arrows[Hg.src[beta], Hf.src[alpha]]
                        tgt = self._arrows[Hg.tgt[beta], Hf.tgt[alpha]]
                        if Hout.src[gamma] != src or Hout.tgt[gamma] != tgt:
                            raise Cat2Error("cell-boundary", f"{beta!r} . {alpha!r} has the wrong source or target", (beta, alpha, gamma))
                for g in Hg.objects:
                    for f in Hf.objects:
                        if self._cells[Hg.identity[g], Hf.identity[f]] != Hout.identity[self._arrows[g, f]]:
                            raise Cat2Error("interchange", f"identity cells of {g!r} and {f!r} do not compose to an identity", (g, f))
                for (b2, b1), b21 in Hg.composition_items():
                    for (a2, a1), a21 in Hf.composition_items():
                        lhs = self._cells[b21, a21]
                        rhs = Hout.compose(self._cells[b2, a2], self._cells[b1, a1])
                        if lhs != rhs:
                            raise Cat2Error("interchange", "interchange law fails", (b2, b1, a2, a1))

    # -- queries

    def hom(self, y, x):
        return self.homs[y, x]

    def arrows_into(self, x):
        """All arrows with target ``x`` in canonical order."""
        return tuple(a for a in self.arrows if self.arrow_hom[a][1] == x)

    def src(self, arrow):
        return self.arrow_hom[arrow][0]

    def tgt(self, arrow):
        return self.arrow_hom[arrow][1]

    def compose_arrows(self, g, f):
        return self._arrows[g, f]

    def compose_cells(self, beta, alpha):
        return self._cells[beta, alpha]

    def id_cell(self, arrow):
        return self.homs[self.arrow_hom[arrow]].identity[arrow]

    def arrow_items(self):
        return list(self._arrows.items())

    def cell_items(self):
        return list(self._cells.items())

    def _key(self):
        return (
            self.objects,
            tuple(sorted(((k, v._key()) for k, v in self.homs.items()), key=repr)),
            tuple(self.identity[x] for x in self.objects),
            tuple(sorted(self._arrows.items(), key=repr)),
            tuple(sorted(self._cells.items(), key=repr)),
        )

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, FinCat2) and self._key() == other._key()

    def __hash__(self):
        return hash(self.objects)

    def __repr__(self):
        return f"FinCat2({len(self.objects)} objects, {len(self.arrow_hom)} arrows, {len(self.cell_hom)} cells)"


def _unit_cell_name(f):
    return f"1_{f}" if isinstance(f, str) else ("1", f)


def lift_trivial_enrichment(C):
    """The 2-category with discrete hom-categories ``C(y, x)``.

    Arrows keep the morphism names of ``C``; the only cells are identities,
    named ``1_f``.
    """
    homs = {}
    for y in C.objects:
        for x in C.objects:
            homs[y, x] = discrete(C.hom(y, x), identity_name=_unit_cell_name)
    arrows = {(g, f): h for (g, f), h in C.composition_items()}
    cells = {(_unit_cell_name(g), _unit_cell_name(f)): _unit_cell_name(h) for (g, f), h in arrows.items()}
    return FinCat2(C.objects, homs, dict(C.identity), arrows, cells, arrow_order=C.morphisms)


def one_object(hom, mul_arrows, mul_cells, obj="*"):
    """One-object 2-category from a strict monoidal structure on ``hom``.

    ``hom.objects[0]`` is the identity arrow; ``mul_arrows(g, f)`` and
    ``mul_cells(beta, alpha)`` give horizontal composites.
    """
    arrows = {(g, f): mul_arrows(g, f) for g in hom.objects for f in hom.objects}
    cells = {(b, a): mul_cells(b, a) for b in hom.morphisms for a in hom.morphisms}
    return FinCat2([obj], {(obj, obj): hom}, {obj: hom.objects[0]}, arrows, cells)


def codiscrete_monoid(elements, mul, obj="*"):
    """One object, arrows a finite monoid, and exactly one cell between any two
    arrows. Every arrow is then isomorphic to every other."""
    hom = codiscrete(elements)
    cell_of = {(hom.src[c], hom.tgt[c]): c for c in hom.morphisms}

    def mul_cells(b, a):
        return cell_of[mul(hom.src[b], hom.src[a]), mul(hom.tgt[b], hom.tgt[a])]

    return one_object(hom, mul, mul_cells, obj)


# -- Cat-valued presheaves --------------------------------------------------------

class CatPresheaf:
    """A strict 2-functor ``C^op -> Cat`` on a :class:`FinCat2`.

    ``values[x]`` is a FinCategory, ``act0[f]`` the functor
    ``values[x] -> values[y]`` for an arrow ``f: y -> x``, and ``act1[alpha]``
    the components ``{object of values[x]: morphism of values[y]}`` of the
    natural transformation ``act0[f] => act0[f2]`` for a cell
    ``alpha: f => f2``.
    """

    def __init__(self, base, values, act0, act1, check=True):
        self.base = base
        self.values = {x: values[x] for x in base.objects}
        self.act0 = dict(act0)
        self.act1 = {c: dict(v) for c, v in act1.items()}
        if check:
            self.validate()

    def validate(self):
        C2 = self.base
        V = self.values
        for f, (y, x) in C2.arrow_hom.items():
            F = self.act0.get(f)
            if F is None or F.source != V[x] or F.target != V[y]:
                raise Cat2Error("action", f"no functor values[{x!r}] -> values[{y!r}] for arrow {f!r}", (f,))
            F.validate()
        for c, (y, x) in C2.cell_hom.items():
            H = C2.homs[y, x]
            F, F2 = self.act0[H.src[c]], self.act0[H.tgt[c]]
            comp = self.act1.get(c)
            if comp is None or set(comp) != set(V[x].objects):
                raise Cat2Error("action", f"cell {c!r} has no components", (c,))
            for a in V[x].objects:
                m = comp[a]
                if m not in V[y].mor_index or V[y].src[m] != F.obj_map[a] or V[y].tgt[m] != F2.obj_map[a]:
                    raise Cat2Error("action", f"component of {c!r} at {a!r} has the wrong boundary", (c, a))
            for m in V[x].morphisms:
                a, b = V[x].src[m], V[x].tgt[m]
                if V[y].compose(F2.mor_map[m], comp[a]) != V[y].compose(comp[b], F.mor_map[m]):
                    raise Cat2Error("naturality", f"action of {c!r} is not natural at {m!r}", (c, m))
        for x in C2.objects:
            if self.act0[C2.identity[x]] != identity_functor(V[x]):
                raise Cat2Error("functoriality", f"identity arrow of {x!r} does not act as the identity", (x,))
        for (g, f), h in C2.arrow_items():
            if self.act0[h] != compose_functors(self.act0[f], self.act0[g]):
                raise Cat2Error("functoriality", f"action of {g!r} . {f!r} is not the composite action", (g, f))
        for c, (y, x) in C2.cell_hom.items():
            H = C2.homs[y, x]
            if c == H.identity[H.src[c]]:
                if any(self.act1[c][a] != V[y].identity[self.act0[H.src[c]].obj_map[a]] for a in V[x].objects):
                    raise Cat2Error("functoriality", f"identity cell {c!r} does not act as an identity", (c,))
        for (y, x), H in C2.homs.items():
            for (b, a), ba in H.composition_items():
                for o in V[x].objects:
                    if self.act1[ba][o] != V[y].compose(self.act1[b][o], self.act1[a][o]):
                        raise Cat2Error("functoriality", f"vertical composite {b!r} . {a!r} not preserved", (b, a))
        for (beta, alpha), gamma in C2.cell_items():
            (y, x), (z, _) = C2.cell_hom[beta], C2.cell_hom[alpha]
            Hg, Hf = C2.homs[y, x], C2.homs[z, y]
            g2, f = Hg.tgt[beta], Hf.src[alpha]
            for o in V[x].objects:
                expect = V[z].compose(
                    self.act1[alpha][self.act0[g2].obj_map[o]],
                    self.act0[f].mor_map[self.act1[beta][o]],
                )
                if self.act1[gamma][o] != expect:
                    raise Cat2Error("functoriality", f"horizontal composite {beta!r} . {alpha!r} not preserved", (beta, alpha))


class CatPresheafMap:
    """Componentwise functors ``source.values[y] -> target.values[y]``,
    strictly natural for the arrow and cell actions."""

    def __init__(self, source, target, components, check=True):
        self.source = source
        self.target = target
        self.components = dict(components)
        if check:
            self.validate()

    def validate(self):
        C2 = self.source.base
        S, T = self.source, self.target
        for y in C2.objects:
            u = self.components[y]
            if u.source != S.values[y] or u.target != T.values[y]:
                raise Cat2Error("map", f"component at {y!r} has the wrong source or target", (y,))
        for f, (y, x) in C2.arrow_hom.items():
            lhs = compose_functors(self.components[y], S.act0[f])
            rhs = compose_functors(T.act0[f], self.components[x])
            if lhs.obj_map != rhs.obj_map or lhs.mor_map != rhs.mor_map:
                raise Cat2Error("naturality", f"map is not natural for arrow {f!r}", (f,))
        for c, (y, x) in C2.cell_hom.items():
            for a in S.values[x].objects:
                if self.components[y].mor_map[S.act1[c][a]] != T.act1[c][self.components[x].obj_map[a]]:
                    raise Cat2Error("naturality", f"map is not natural for cell {c!r} at {a!r}", (c, a))


def representable(C2, x):
    """``h_x``: values ``hom(y, x)``; arrows act by precomposition and cells by
    whiskering."""
    values = {y: C2.homs[y, x] for y in C2.objects}
    act0 = {}
    for f, (z, y) in C2.arrow_hom.items():
        Hy, Hz = values[y], values[z]
        one_f = C2.id_cell(f)
        act0[f] = FunctorData(
            Hy,
            Hz,
            {g: C2.compose_arrows(g, f) for g in Hy.objects},
            {b: C2.compose_cells(b, one_f) for b in Hy.morphisms},
            check=False,
        )
    act1 = {}
    for alpha, (z, y) in C2.cell_hom.items():
        act1[alpha] = {g: C2.compose_cells(C2.id_cell(g), alpha) for g in values[y].objects}
    return CatPresheaf(C2, values, act0, act1, check=False)


# -- sieves -------------------------------------------------------------------------

def _replete_image(u):
    """Objects and morphisms of the smallest replete subcategory containing the
    image of a homotopy-mono functor ``u``."""
    H = u.target
    hit = set(u.obj_map.values())
    objs = {b for b in H.objects if any(H.isos(a, b) for a in hit)}
    mors = set()
    for m in u.mor_map.values():
        a, b = H.src[m], H.tgt[m]
        for a2 in objs:
            for psi in H.isos(a2, a):
                for b2 in objs:
                    for psi2 in H.isos(b, b2):
                        mors.add(H.compose_many(psi2, m, psi))
    return frozenset(objs), frozenset(mors)


class CatSieve:
    """A homotopy sieve: a CatPresheaf with a map into ``h_apex`` whose
    components are homotopy monomorphisms."""

    def __init__(self, apex, presheaf, map, check=True):
        self.apex = apex
        self.presheaf = presheaf
        self.map = map
        self.base = presheaf.base
        self._canonical = None
        if check:
            self.validate()

    def validate(self):
        C2 = self.base
        if self.apex not in C2.objects:
            raise MalformedError(f"unknown apex {self.apex!r}")
        h = representable(C2, self.apex)
        for y in C2.objects:
            if self.map.components[y].target != h.values[y]:
                raise MalformedError(f"component at {y!r} does not land in hom({y!r}, {self.apex!r})")
        self.presheaf.validate()
        CatPresheafMap(self.presheaf, h, self.map.components, check=True)
        for y in C2.objects:
            res = is_homotopy_mono_functor(self.map.components[y])
            if not res:
                raise MalformedError(f"component at {y!r} is not a homotopy monomorphism: {res.witness}")

    def canonical(self):
        """Per-object replete images as sorted index tuples; equal canonical
        forms mean equivalent sieves."""
        if self._canonical is None:
            C2 = self.base
            parts = []
            for y in C2.objects:
                H = C2.homs[y, self.apex]
                objs, mors = _replete_image(self.map.components[y])
                parts.append((
                    tuple(sorted(H.obj_index[a] for a in objs)),
                    tuple(sorted(H.mor_index[m] for m in mors)),
                ))
            self._canonical = (self.apex, tuple(parts))
        return self._canonical

    def describe(self):
        """Replete image per source object, by name."""
        C2 = self.base
        out = {}
        for y, (objs, mors) in zip(C2.objects, self.canonical()[1]):
            H = C2.homs[y, self.apex]
            out[y] = {"arrows": [H.objects[i] for i in objs], "cells": [H.morphisms[i] for i in mors]}
        return out

    def __repr__(self):
        return f"CatSieve({self.apex!r}, {self.describe()!r})"


def sub_cat_sieve(C2, x, parts):
    """The sieve given by subcategories ``parts[y] = (arrows, cells)`` of
    ``hom(y, x)``, with inclusion maps. Identity cells of listed arrows are
    added automatically."""
    h = representable(C2, x)
    values = {}
    for y in C2.objects:
        arrows, cells = parts.get(y, ((), ()))
        try:
            values[y] = subcategory(C2.homs[y, x], arrows, cells)
        except CategoryError as exc:
            raise MalformedError(f"component at {y!r}: {exc}") from None
    act0 = {}
    for f, (z, y) in C2.arrow_hom.items():
        F = h.act0[f]
        Vy, Vz = values[y], values[z]
        omap = {a: F.obj_map[a] for a in Vy.objects}
        mmap = {m: F.mor_map[m] for m in Vy.morphisms}
        if not set(omap.values()) <= set(Vz.objects) or not set(mmap.values()) <= set(Vz.morphisms):
            raise MalformedError(f"subcategories are not closed under the action of arrow {f!r}")
        act0[f] = FunctorData(Vy, Vz, omap, mmap, check=False)
    act1 = {}
    for c, (z, y) in C2.cell_hom.items():
        comp = {a: h.act1[c][a] for a in values[y].objects}
        if not set(comp.values()) <= set(values[z].morphisms):
            raise MalformedError(f"subcategories are not closed under the action of cell {c!r}")
        act1[c] = comp
    R = CatPresheaf(C2, values, act0, act1, check=False)
    incl = CatPresheafMap(R, h, {y: inclusion_functor(values[y], C2.homs[y, x]) for y in C2.objects}, check=False)
    return CatSieve(x, R, incl)


def identity_sieve(C2, x):
    h = representable(C2, x)
    ident = CatPresheafMap(h, h, {y: identity_functor(h.values[y]) for y in C2.objects}, check=False)
    return CatSieve(x, h, ident, check=False)


def sieves_equivalent(S1, S2):
    """Equivalence over ``h_x`` (componentwise replete images agree)."""
    return S1.canonical() == S2.canonical()


def _postcompose(C2, f, z):
    """``f . -`` as a functor ``hom(z, y) -> hom(z, x)``."""
    y, x = C2.arrow_hom[f]
    src, tgt = C2.homs[z, y], C2.homs[z, x]
    one_f = C2.id_cell(f)
    return FunctorData(
        src,
        tgt,
        {b: C2.compose_arrows(f, b) for b in src.objects},
        {beta: C2.compose_cells(one_f, beta) for beta in src.morphisms},
        check=False,
    )


def pullback_cat_sieve(S, f):
    """``f^-1 S`` for an arrow ``f: y -> apex``, computed objectwise as the
    iso-comma of ``S(z) -> hom(z, x)`` and ``f . -: hom(z, y) -> hom(z, x)``.

    Components of the result are checked to be homotopy monomorphisms.
    """
    C2 = S.base
    y, x = C2.arrow_hom[f]
    if x != S.apex:
        raise ValueError(f"arrow {f!r} does not have target {S.apex!r}")
    R = S.presheaf
    u = S.map.components
    commas = {z: iso_comma(u[z], _postcompose(C2, f, z)) for z in C2.objects}
    values = {z: commas[z].category for z in C2.objects}
    act0 = {}
    for g, (w, z) in C2.arrow_hom.items():
        Rg = R.act0[g]
        one_g = C2.id_cell(g)
        Pz, Pw = values[z], values[w]

        def move(o, Rg=Rg, g=g, one_g=one_g):
            a, b, phi = o
            return (Rg.obj_map[a], C2.compose_arrows(b, g), C2.compose_cells(phi, one_g))

        omap = {o: move(o) for o in Pz.objects}
        mmap = {
            m: (omap[m[0]], omap[m[1]], Rg.mor_map[m[2]], C2.compose_cells(m[3], one_g))
            for m in Pz.morphisms
        }
        act0[g] = FunctorData(Pz, Pw, omap, mmap, check=False)
    act1 = {}
    for gamma, (w, z) in C2.cell_hom.items():
        H = C2.homs[w, z]
        g, g2 = H.src[gamma], H.tgt[gamma]
        comps = {}
        for o in values[z].objects:
            a, b, phi = o
            comps[o] = (
                act0[g].obj_map[o],
                act0[g2].obj_map[o],
                R.act1[gamma][a],
                C2.compose_cells(C2.id_cell(b), gamma),
            )
        act1[gamma] = comps
    P = CatPresheaf(C2, values, act0, act1, check=True)
    h_y = representable(C2, y)
    proj = CatPresheafMap(P, h_y, {z: commas[z].proj_b for z in C2.objects}, check=True)
    out = CatSieve(y, P, proj, check=False)
    for z in C2.objects:
        res = is_homotopy_mono_functor(proj.components[z])
        if not res:
            raise AssertionError(f"pullback component at {z!r} is not a homotopy monomorphism: {res.witness}")
    return out


def belongs(f, S):
    """True iff some object of ``S(y)`` maps to an arrow isomorphic to ``f``."""
    C2 = S.base
    y, x = C2.arrow_hom[f]
    if x != S.apex:
        raise ValueError(f"arrow {f!r} does not have target {S.apex!r}")
    H = C2.homs[y, x]
    return any(H.isos(b, f) for b in S.map.components[y].obj_map.values())


def _replete_subcategories(H, max_count):
    """All replete subcategories of ``H`` as ``(objects, morphisms)`` frozensets."""
    classes = []
    seen = set()
    for a in H.objects:
        if a in seen:
            continue
        cls = [b for b in H.objects if H.isos(a, b)]
        seen.update(cls)
        classes.append(cls)
    out = []
    for pick in itertools.product((False, True), repeat=len(classes)):
        objs = frozenset(a for cls, p in zip(classes, pick) if p for a in cls)
        base = frozenset(m for m in H.morphisms if H.is_iso(m) and H.src[m] in objs and H.tgt[m] in objs)
        extra = [m for m in H.morphisms if not H.is_iso(m) and H.src[m] in objs and H.tgt[m] in objs]

        def close(ms):
            ms = set(ms)
            grew = True
            while grew:
                grew = False
                for g in list(ms):
                    for f in list(ms):
                        if H.tgt[f] == H.src[g]:
                            h = H.compose(g, f)
                            if h not in ms:
                                ms.add(h)
                                grew = True
            return frozenset(ms)

        found = {base}
        for m in extra:
            found |= {close(s | {m}) for s in found}
        for mors in sorted(found, key=lambda s: sorted(H.mor_index[m] for m in s)):
            out.append((objs, mors))
            if len(out) > max_count:
                raise GuardExceeded("max-cat-sieves", max_count, len(out))
    return out


def all_cat_sieves(C2, x, max_count=DEFAULT_MAX_CAT_SIEVES):
    """Every sieve on ``x`` up to equivalence, as replete sub-presheaves of
    ``h_x`` in canonical order."""
    h = representable(C2, x)
    options = [_replete_subcategories(C2.homs[y, x], max_count) for y in C2.objects]
    total = 1
    for o in options:
        total *= len(o)
    if total > max_count:
        raise GuardExceeded("max-cat-sieves", max_count, total)
    out = []
    for choice in itertools.product(*options):
        part = dict(zip(C2.objects, choice))
        if _closed_under_action(C2, h, part):
            out.append(sub_cat_sieve(C2, x, {y: (sorted(o, key=repr), sorted(m, key=repr)) for y, (o, m) in part.items()}))
    return sorted(out, key=CatSieve.canonical)


def _closed_under_action(C2, h, part):
    for f, (z, y) in C2.arrow_hom.items():
        objs, mors = part[y]
        objs_z, mors_z = part[z]
        F = h.act0[f]
        if any(F.obj_map[a] not in objs_z for a in objs) or any(F.mor_map[m] not in mors_z for m in mors):
            return False
    for c, (z, y) in C2.cell_hom.items():
        if any(h.act1[c][a] not in part[z][1] for a in part[y][0]):
            return False
    return True


class CatTopology:
    """Covering sieves per object of a FinCat2. Membership is up to sieve
    equivalence, so closure under equivalence holds by construction."""

    def __init__(self, base, cov):
        self.base = base
        self.cov = {}
        for x in base.objects:
            sieves = []
            seen = set()
            for S in cov.get(x, ()):
                if S.apex != x:
                    raise MalformedError(f"sieve on {S.apex!r} listed as covering {x!r}")
                if S.canonical() not in seen:
                    seen.add(S.canonical())
                    sieves.append(S)
            self.cov[x] = tuple(sorted(sieves, key=CatSieve.canonical))
        self.keys = {x: frozenset(S.canonical() for S in ss) for x, ss in self.cov.items()}

    def covers(self, S):
        return S.canonical() in self.keys[S.apex]

    def __repr__(self):
        return f"CatTopology({ {x: len(v) for x, v in self.cov.items()} })"


class _PullbackCache:
    def __init__(self):
        self.data = {}

    def get(self, S, f):
        key = (S.canonical(), f)
        if key not in self.data:
            self.data[key] = pullback_cat_sieve(S, f).canonical()
        return self.data[key]


def check_cat_topology(T, max_count=DEFAULT_MAX_CAT_SIEVES):
    """Violations of the enriched topology axioms; empty means valid.

    Axiom 1 is structural here (covering is tested up to equivalence). Axiom 3
    compares pullbacks up to equivalence; axiom 4 quantifies over every sieve
    on the object, up to equivalence, and over arrows that belong to the
    covering sieve.
    """
    C2 = T.base
    cache = _PullbackCache()
    out = []
    for x in C2.objects:
        top = identity_sieve(C2, x)
        if not T.covers(top):
            out.append(Violation("2", object=x, sieve=top.describe(), witness=[C2.identity[x]]))
    for x in C2.objects:
        for S in T.cov[x]:
            for f in C2.arrows_into(x):
                pulled = cache.get(S, f)
                if pulled not in T.keys[C2.src(f)]:
                    out.append(Violation("3", object=x, sieve=S.describe(), witness=[f]))
    for x in C2.objects:
        candidates = all_cat_sieves(C2, x, max_count)
        arrows = C2.arrows_into(x)
        for R in T.cov[x]:
            members = [f for f in arrows if belongs(f, R)]
            for S in candidates:
                if T.covers(S):
                    continue
                if all(cache.get(S, f) in T.keys[C2.src(f)] for f in members):
                    out.append(Violation("4", object=x, sieve=S.describe(), witness=R.describe()))
    return out


def enumerate_cat_topologies(C2, max_sieves=24, max_count=DEFAULT_MAX_CAT_SIEVES):
    """Every enriched topology on ``C2`` up to sieve equivalence, by the same
    Horn-clause search used for ordinary topologies."""
    per_object = {x: all_cat_sieves(C2, x, max_count) for x in C2.objects}
    candidates = [S for x in C2.objects for S in per_object[x]]
    if len(candidates) > max_sieves:
        raise GuardExceeded("max-sieves", max_sieves, len(candidates))
    index = {S.canonical(): i for i, S in enumerate(candidates)}
    cache = _PullbackCache()
    clauses = [((), index[identity_sieve(C2, x).canonical()]) for x in C2.objects]
    for S in candidates:
        for f in C2.arrows_into(S.apex):
            clauses.append(((index[S.canonical()],), index[cache.get(S, f)]))
    for x in C2.objects:
        arrows = C2.arrows_into(x)
        for R in per_object[x]:
            members = [f for f in arrows if belongs(f, R)]
            for S in per_object[x]:
                if S.canonical() == R.canonical():
                    continue
                body = {index[R.canonical()]} | {index[cache.get(S, f)] for f in members}
                clauses.append((body, index[S.canonical()]))
    out = []
    for mask in kernels.horn_models(len(candidates), clauses):
        chosen = [candidates[i] for i in kernels.mask_members(mask)]
        out.append(CatTopology(C2, {x: [S for S in chosen if S.apex == x] for x in C2.objects}))
    return out


# -- homotopy category and the induced topology ------------------------------------

def iso_class_rep(H, a):
    """First arrow in declaration order isomorphic to ``a``."""
    return next(b for b in H.objects if H.isos(b, a))


def ho_category(C2):
    """Objects of ``C2``; arrows ``y -> x`` are isomorphism classes in
    ``hom(y, x)``, named by their first member."""
    reps = {}
    for (y, x), H in C2.homs.items():
        for a in H.objects:
            reps[a] = iso_class_rep(H, a)
    morphisms = [(a, *C2.arrow_hom[a]) for a in C2.arrows if reps[a] == a]
    comp = {}
    for (g, f), h in C2.arrow_items():
        key = (reps[g], reps[f])
        if comp.setdefault(key, reps[h]) != reps[h]:
            raise Cat2Error("ill-defined", f"composition of classes [{key[0]!r}] . [{key[1]!r}] is not well defined", key)
    return FinCategory(C2.objects, morphisms, {x: reps[C2.identity[x]] for x in C2.objects}, comp)


def ho_sieve(S, ho=None):
    """Classes of arrows that belong to ``S``, as a sieve on the homotopy category."""
    C2 = S.base
    ho = ho or ho_category(C2)
    members = set()
    for f in C2.arrows_into(S.apex):
        if belongs(f, S):
            members.add(iso_class_rep(C2.homs[C2.arrow_hom[f]], f))
    return Sieve(ho, S.apex, members)


def induced_topology(T):
    """The ordinary topology on :func:`ho_category` made of the sieves of
    classes belonging to each covering sieve. Raises ValueError if ``T`` is
    not an enriched topology."""
    bad = check_cat_topology(T)
    if bad:
        raise ValueError(f"not an enriched topology: {bad[0]!r}")
    ho = ho_category(T.base)
    return GrothendieckTopology(ho, {x: [ho_sieve(S, ho) for S in T.cov[x]] for x in T.base.objects})


def lift_topology(T, C2=None):
    """The enriched topology of discrete sieves on ``lift_trivial_enrichment(T.base)``."""
    C2 = C2 or lift_trivial_enrichment(T.base)
    cov = {}
    for x, sieves in T.cov.items():
        cov[x] = [
            sub_cat_sieve(C2, x, {y: ([f for f in S.members if T.base.src[f] == y], ()) for y in C2.objects})
            for S in sieves
        ]
    return CatTopology(C2, cov)

"""Finite categories, functors, presheaves of finite sets and the Yoneda embedding.

Identifiers for objects, morphisms and presheaf elements can be any hashable
value; documents use strings, internal constructions use tuples. All
enumeration follows declaration order.
"""
import itertools

import numpy as np

from sievekit import kernels


class CategoryError(ValueError):
    """A failed law. ``law`` names it, ``witness`` holds the offending data."""

    def __init__(self, law, message, witness=()):
        super().__init__(f"{law}: {message}")
        self.law = law
        self.witness = tuple(witness)


class FunctorError(ValueError):
    pass


class PresheafError(ValueError):
    pass


class FinCategory:
    """A finite category given by a total composition table.

    ``morphisms`` is a sequence of ``(name, source, target)``. ``compose`` maps
    ``(g, f)`` to the name of ``g . f``; composites with an identity may be
    omitted. Construction checks every law and raises :class:`CategoryError`.
    """

    def __init__(self, objects, morphisms, identities, compose):
        self.objects = tuple(objects)
        morphisms = [tuple(m) for m in morphisms]
        self.morphisms = tuple(m[0] for m in morphisms)
        self.src = {m[0]: m[1] for m in morphisms}
        self.tgt = {m[0]: m[2] for m in morphisms}
        self.identity = dict(identities)
        self._check_names()
        self._comp = self._build_table(dict(compose))
        self.obj_index = {x: i for i, x in enumerate(self.objects)}
        self.mor_index = {f: i for i, f in enumerate(self.morphisms)}
        self._check_associativity()
        homs = {}
        for f in self.morphisms:
            homs.setdefault((self.src[f], self.tgt[f]), []).append(f)
        self._homs = {k: tuple(v) for k, v in homs.items()}
        self._inverse = self._find_inverses()

    # -- construction checks

    def _check_names(self):
        if len(set(self.objects)) != len(self.objects):
            dup = next(x for x in self.objects if self.objects.count(x) > 1)
            raise CategoryError("duplicate-object", f"object {dup!r} declared twice", (dup,))
        if len(set(self.morphisms)) != len(self.morphisms):
            dup = next(f for f in self.morphisms if self.morphisms.count(f) > 1)
            raise CategoryError("duplicate-morphism", f"morphism {dup!r} declared twice", (dup,))
        objs = set(self.objects)
        for f in self.morphisms:
            for end in (self.src[f], self.tgt[f]):
                if end not in objs:
                    raise CategoryError("unknown-object", f"morphism {f!r} uses unknown object {end!r}", (f, end))
        for x in self.objects:
            if x not in self.identity:
                raise CategoryError("missing-identity", f"object {x!r} has no identity", (x,))
            i = self.identity[x]
            if i not in self.src or self.src[i] != x or self.tgt[i] != x:
                raise CategoryError("missing-identity", f"identity {i!r} of {x!r} is not an endomorphism of {x!r}", (x, i))
        for x in self.identity:
            if x not in objs:
                raise CategoryError("unknown-object", f"identity declared for unknown object {x!r}", (x,))

    def _build_table(self, compose):
        table = {}
        for (g, f), h in compose.items():
            for m in (g, f, h):
                if m not in self.src:
                    raise CategoryError("unknown-morphism", f"composition uses unknown morphism {m!r}", (g, f, h))
            if self.tgt[f] != self.src[g]:
                raise CategoryError("non-composable", f"composite of {g!r} after {f!r} declared but they are not composable", (g, f))
            if self.src[h] != self.src[f] or self.tgt[h] != self.tgt[g]:
                raise CategoryError("wrong-hom", f"{g!r} . {f!r} = {h!r} lands outside the hom-set", (g, f, h))
            table[g, f] = h
        for f in self.morphisms:
            for key in ((self.identity[self.tgt[f]], f), (f, self.identity[self.src[f]])):
                if table.setdefault(key, f) != f:
                    raise CategoryError("identity-law", f"{key[0]!r} . {key[1]!r} should be {f!r}", (*key, table[key]))
        for g in self.morphisms:
            for f in self.morphisms:
                if self.tgt[f] == self.src[g] and (g, f) not in table:
                    raise CategoryError("missing-composite", f"no composite given for {g!r} . {f!r}", (g, f))
        return table

    def _check_associativity(self):
        m = len(self.morphisms)
        comp = np.full((m, m), -1, dtype=np.int64)
        for (g, f), h in self._comp.items():
            comp[self.mor_index[g], self.mor_index[f]] = self.mor_index[h]
        h, g, f = (int(v) for v in kernels.first_nonassociative(comp))
        if h >= 0:
            h, g, f = self.morphisms[h], self.morphisms[g], self.morphisms[f]
            raise CategoryError("associativity", f"({h!r} . {g!r}) . {f!r} != {h!r} . ({g!r} . {f!r})", (h, g, f))

    def _find_inverses(self):
        inv = {}
        for f in self.morphisms:
            for g in self.hom(self.tgt[f], self.src[f]):
                if self._comp[g, f] == self.identity[self.src[f]] and self._comp[f, g] == self.identity[self.tgt[f]]:
                    inv[f] = g
                    break
        return inv

    # -- queries

    def compose(self, g, f):
        """``g . f`` (apply ``f`` first)."""
        try:
            return self._comp[g, f]
        except KeyError:
            raise ValueError(f"{g!r} and {f!r} are not composable") from None

    def compose_many(self, *fs):
        """``fs[0] . fs[1] . ... . fs[-1]``."""
        out = fs[-1]
        for g in reversed(fs[:-1]):
            out = self.compose(g, out)
        return out

    def hom(self, y, x):
        """Morphisms ``y -> x`` in declaration order."""
        return self._homs.get((y, x), ())

    def into(self, x):
        """All morphisms with target ``x``."""
        return tuple(f for f in self.morphisms if self.tgt[f] == x)

    def is_iso(self, f):
        return f in self._inverse

    def inverse(self, f):
        return self._inverse[f]

    def isos(self, y, x):
        return tuple(f for f in self.hom(y, x) if f in self._inverse)

    def composition_items(self):
        return sorted(self._comp.items(), key=lambda kv: (self.mor_index[kv[0][0]], self.mor_index[kv[0][1]]))

    def _key(self):
        try:
            return self._cached_key
        except AttributeError:
            self._cached_key = (
                self.objects,
                tuple((f, self.src[f], self.tgt[f]) for f in self.morphisms),
                tuple(self.identity[x] for x in self.objects),
                tuple(self.composition_items()),
            )
            return self._cached_key

    def __eq__(self, other):
        if self is other:
            return True
        return isinstance(other, FinCategory) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"FinCategory({len(self.objects)} objects, {len(self.morphisms)} morphisms)"


def opposite(C):
    """The opposite category: sources and targets swapped, composition transposed."""
    return FinCategory(
        C.objects,
        [(f, C.tgt[f], C.src[f]) for f in C.morphisms],
        C.identity,
        {(f, g): h for (g, f), h in C.composition_items()},
    )


# -- small constructors ----------------------------------------------------

def discrete(objects, identity_name=None):
    """Discrete category; identities are named ``identity_name(x)`` (default ``"id_x"``)."""
    name = identity_name or (lambda x: f"id_{x}")
    objects = list(objects)
    return FinCategory(objects, [(name(x), x, x) for x in objects], {x: name(x) for x in objects}, {})


def poset(objects, leq):
    """Thin category of a finite preorder; ``leq(a, b)`` means an arrow ``a -> b``."""
    objects = list(objects)
    mor = {}
    for a in objects:
        for b in objects:
            if leq(a, b):
                mor[a, b] = f"{a}<={b}" if a != b else f"id_{a}"
    comp = {}
    for (a, b), f in mor.items():
        for (b2, c), g in mor.items():
            if b2 == b:
                comp[g, f] = mor[a, c]
    return FinCategory(objects, [(f, a, b) for (a, b), f in mor.items()], {x: mor[x, x] for x in objects}, comp)


def monoid_category(elements, mul, obj="*"):
    """One-object category of a finite monoid; ``elements[0]`` is the unit and
    ``mul(a, b)`` the product ``a.b`` (``b`` applied first)."""
    elements = list(elements)
    return FinCategory(
        [obj],
        [(e, obj, obj) for e in elements],
        {obj: elements[0]},
        {(a, b): mul(a, b) for a in elements for b in elements},
    )


def codiscrete(objects, name=None):
    """Exactly one morphism between any two objects (all of them invertible)."""
    name = name or (lambda a, b: f"id_{a}" if a == b else f"{a}>{b}")
    objects = list(objects)
    mor = {(a, b): name(a, b) for a in objects for b in objects}
    comp = {(mor[b, c], mor[a, b]): mor[a, c] for a in objects for b in objects for c in objects}
    return FinCategory(objects, [(f, a, b) for (a, b), f in mor.items()], {x: mor[x, x] for x in objects}, comp)


# -- functors ----------------------------------------------------------------

class FunctorData:
    """A functor between finite categories, checked exhaustively on construction."""

    def __init__(self, source, target, obj_map, mor_map, check=True):
        self.source = source
        self.target = target
        self.obj_map = dict(obj_map)
        self.mor_map = dict(mor_map)
        if check:
            self.validate()

    def validate(self):
        S, T = self.source, self.target
        for x in S.objects:
            if self.obj_map.get(x) not in T.obj_index:
                raise FunctorError(f"object {x!r} has no image in the target")
        for f in S.morphisms:
            Ff = self.mor_map.get(f)
            if Ff not in T.mor_index:
                raise FunctorError(f"morphism {f!r} has no image in the target")
            if T.src[Ff] != self.obj_map[S.src[f]] or T.tgt[Ff] != self.obj_map[S.tgt[f]]:
                raise FunctorError(f"image of {f!r} has the wrong source or target")
        for x in S.objects:
            if self.mor_map[S.identity[x]] != T.identity[self.obj_map[x]]:
                raise FunctorError(f"identity of {x!r} not preserved")
        for (g, f), h in S.composition_items():
            if T.compose(self.mor_map[g], self.mor_map[f]) != self.mor_map[h]:
                raise FunctorError(f"composite {g!r} . {f!r} not preserved")

    def __call__(self, item):
        """Image of an object or a morphism (morphisms take precedence on name clashes)."""
        if item in self.mor_map:
            return self.mor_map[item]
        return self.obj_map[item]

    def __eq__(self, other):
        return (
            isinstance(other, FunctorData)
            and self.source == other.source
            and self.target == other.target
            and self.obj_map == other.obj_map
            and self.mor_map == other.mor_map
        )

    def __hash__(self):
        return hash((tuple(self.obj_map.items()), tuple(self.mor_map.items())))

    def __repr__(self):
        return f"FunctorData({self.source!r} -> {self.target!r})"


def identity_functor(C):
    return FunctorData(C, C, {x: x for x in C.objects}, {f: f for f in C.morphisms}, check=False)


def compose_functors(G, F):
    """``G . F``."""
    if F.target != G.source:
        raise FunctorError("functors are not composable")
    return FunctorData(
        F.source,
        G.target,
        {x: G.obj_map[y] for x, y in F.obj_map.items()},
        {f: G.mor_map[g] for f, g in F.mor_map.items()},
        check=False,
    )


def enumerate_functors(A, B):
    """Every functor ``A -> B``, by backtracking over morphism images."""
    objs, mors = A.objects, A.morphisms
    out = []
    for images in itertools.product(B.objects, repeat=len(objs)):
        omap = dict(zip(objs, images))
        choices = []
        for f in mors:
            if f == A.identity[A.src[f]]:
                choices.append((B.identity[omap[A.src[f]]],))
            else:
                choices.append(B.hom(omap[A.src[f]], omap[A.tgt[f]]))
        if any(not c for c in choices):
            continue
        for imgs in itertools.product(*choices):
            mmap = dict(zip(mors, imgs))
            if all(B.compose(mmap[g], mmap[f]) == mmap[h] for (g, f), h in A.composition_items()):
                out.append(FunctorData(A, B, omap, mmap, check=False))
    return out


def is_full(F):
    S, T = F.source, F.target
    for a in S.objects:
        for b in S.objects:
            hit = {F.mor_map[m] for m in S.hom(a, b)}
            if len(hit) != len(T.hom(F.obj_map[a], F.obj_map[b])):
                return False
    return True


def is_faithful(F):
    S = F.source
    for a in S.objects:
        for b in S.objects:
            hom = S.hom(a, b)
            if len({F.mor_map[m] for m in hom}) != len(hom):
                return False
    return True


def is_essentially_surjective(F):
    T = F.target
    hit = set(F.obj_map.values())
    return all(any(T.isos(c, y) for c in hit) for y in T.objects)


def is_equivalence(F):
    return is_full(F) and is_faithful(F) and is_essentially_surjective(F)


# -- presheaves ------------------------------------------------------------

class SetPresheaf:
    """A presheaf of finite sets on ``base``.

    ``values[x]`` is a sequence of hashable elements; ``restrictions[f]`` for
    ``f: y -> x`` maps ``values[x]`` to ``values[y]``. Restrictions along
    identities may be omitted.
    """

    def __init__(self, base, values, restrictions, check=True):
        self.base = base
        self.values = {x: tuple(values.get(x, ())) for x in base.objects}
        self.restrictions = {}
        for f in base.morphisms:
            if f in restrictions:
                self.restrictions[f] = dict(restrictions[f])
            elif f == base.identity[base.src[f]]:
                self.restrictions[f] = {a: a for a in self.values[base.src[f]]}
            else:
                raise PresheafError(f"no restriction given along {f!r}")
        if check:
            self.validate()

    def validate(self):
        C = self.base
        for x, vals in self.values.items():
            if len(set(vals)) != len(vals):
                raise PresheafError(f"repeated element in value at {x!r}")
        sets = {x: set(v) for x, v in self.values.items()}
        for f, r in self.restrictions.items():
            if set(r) != sets[C.tgt[f]] or not set(r.values()) <= sets[C.src[f]]:
                raise PresheafError(f"restriction along {f!r} is not a function F({C.tgt[f]!r}) -> F({C.src[f]!r})")
        for x in C.objects:
            if any(a != b for a, b in self.restrictions[C.identity[x]].items()):
                raise PresheafError(f"restriction along the identity of {x!r} is not the identity")
        for (g, f), h in C.composition_items():
            rf, rg, rh = self.restrictions[f], self.restrictions[g], self.restrictions[h]
            for a in self.values[C.tgt[g]]:
                if rh[a] != rf[rg[a]]:
                    raise PresheafError(f"restriction along {g!r} . {f!r} is not the composite of restrictions")

    def restrict(self, f, a):
        return self.restrictions[f][a]

    def size(self):
        return sum(len(v) for v in self.values.values())

    def __eq__(self, other):
        return (
            isinstance(other, SetPresheaf)
            and self.base == other.base
            and self.values == other.values
            and self.restrictions == other.restrictions
        )

    def __repr__(self):
        sizes = ", ".join(f"{x}:{len(v)}" for x, v in self.values.items())
        return f"SetPresheaf({sizes})"


class PresheafMap:
    """A natural transformation ``source -> target`` given by per-object dicts."""

    def __init__(self, source, target, components, check=True):
        self.source = source
        self.target = target
        self.components = {x: dict(components[x]) for x in source.base.objects}
        if check:
            self.validate()

    def validate(self):
        F, G = self.source, self.target
        if F.base != G.base:
            raise PresheafError("presheaf map between different bases")
        C = F.base
        for x in C.objects:
            comp = self.components[x]
            if set(comp) != set(F.values[x]) or not set(comp.values()) <= set(G.values[x]):
                raise PresheafError(f"component at {x!r} is not a function F({x!r}) -> G({x!r})")
        for f in C.morphisms:
            x, y = C.tgt[f], C.src[f]
            for a in F.values[x]:
                if G.restrictions[f][self.components[x][a]] != self.components[y][F.restrictions[f][a]]:
                    raise PresheafError(f"naturality fails along {f!r} at {a!r}")

    def _key(self):
        return tuple(tuple(self.components[x][a] for a in self.source.values[x]) for x in self.source.base.objects)

    def __eq__(self, other):
        return isinstance(other, PresheafMap) and self._key() == other._key()

    def __hash__(self):
        return hash(self._key())

    def __repr__(self):
        return f"PresheafMap({self.components!r})"


def identity_map(F):
    return PresheafMap(F, F, {x: {a: a for a in F.values[x]} for x in F.base.objects}, check=False)


def compose_maps(beta, alpha):
    """``beta . alpha``."""
    return PresheafMap(
        alpha.source,
        beta.target,
        {x: {a: beta.components[x][b] for a, b in alpha.components[x].items()} for x in alpha.source.base.objects},
        check=False,
    )


def is_mono_presheaf(alpha):
    """True iff every component is injective."""
    return all(len(set(c.values())) == len(c) for c in alpha.components.values())


def is_iso_presheaf(alpha):
    return is_mono_presheaf(alpha) and all(
        len(alpha.components[x]) == len(alpha.target.values[x]) for x in alpha.source.base.objects
    )


def yoneda(C, x):
    """The representable ``h_x = C(-, x)``; restriction is precomposition."""
    if x not in C.obj_index:
        raise ValueError(f"unknown object {x!r}")
    values = {y: C.hom(y, x) for y in C.objects}
    restrictions = {f: {g: C.compose(g, f) for g in values[C.tgt[f]]} for f in C.morphisms}
    return SetPresheaf(C, values, restrictions, check=False)


def yoneda_map(C, f):
    """``h_y -> h_x`` induced by ``f: y -> x`` (postcomposition)."""
    hy, hx = yoneda(C, C.src[f]), yoneda(C, C.tgt[f])
    return PresheafMap(hy, hx, {z: {g: C.compose(f, g) for g in hy.values[z]} for z in C.objects}, check=False)


def subpresheaf(F, subsets):
    """The subpresheaf with ``values[x] = subsets[x]`` (kept in F's order) and its inclusion."""
    C = F.base
    chosen = {x: set(subsets.get(x, ())) for x in C.objects}
    values = {x: tuple(a for a in F.values[x] if a in chosen[x]) for x in C.objects}
    restrictions = {}
    for f in C.morphisms:
        r = {a: F.restrictions[f][a] for a in values[C.tgt[f]]}
        if not set(r.values()) <= chosen[C.src[f]]:
            raise PresheafError(f"subset is not closed under restriction along {f!r}")
        restrictions[f] = r
    S = SetPresheaf(C, values, restrictions, check=False)
    return S, PresheafMap(S, F, {x: {a: a for a in values[x]} for x in C.objects}, check=False)


def presheaf_hom(F, G):
    """All natural transformations ``F -> G`` in canonical order.

    Objects are assigned in declaration order; at each object the component
    functions are enumerated lexicographically in G's element order, and any
    naturality square between already-assigned objects is checked immediately.
    """
    if F.base != G.base:
        raise PresheafError("presheaves over different bases")
    C = F.base
    objs = C.objects
    checks = [[] for _ in objs]
    for f in C.morphisms:
        i, j = C.obj_index[C.tgt[f]], C.obj_index[C.src[f]]
        checks[max(i, j)].append(f)
    out = []
    comps = {}

    def consistent(k):
        for f in checks[k]:
            x, y = C.tgt[f], C.src[f]
            Ff, Gf, ax, ay = F.restrictions[f], G.restrictions[f], comps[x], comps[y]
            for a in F.values[x]:
                if Gf[ax[a]] != ay[Ff[a]]:
                    return False
        return True

    def search(k):
        if k == len(objs):
            out.append(PresheafMap(F, G, {x: dict(comps[x]) for x in objs}, check=False))
            return
        x = objs[k]
        dom = F.values[x]
        for img in itertools.product(G.values[x], repeat=len(dom)):
            comps[x] = dict(zip(dom, img))
            if consistent(k):
                search(k + 1)
        comps.pop(x, None)

    search(0)
    return out


def subcategory(C, objects, morphisms):
    """The subcategory on the given objects and morphisms (kept in C's order).

    Identities of the chosen objects are added; closure under composition is
    checked by the constructor.
    """
    objs = set(objects)
    mors = set(morphisms) | {C.identity[x] for x in objs}
    keep = [f for f in C.morphisms if f in mors]
    for f in keep:
        if C.src[f] not in objs or C.tgt[f] not in objs:
            raise CategoryError("not-a-subcategory", f"{f!r} leaves the chosen objects", (f,))
    comp = {}
    for g in keep:
        for f in keep:
            if C.tgt[f] == C.src[g]:
                h = C.compose(g, f)
                if h not in mors:
                    raise CategoryError("not-a-subcategory", f"{g!r} . {f!r} leaves the chosen morphisms", (g, f))
                comp[g, f] = h
    return FinCategory(
        [x for x in C.objects if x in objs],
        [(f, C.src[f], C.tgt[f]) for f in keep],
        {x: C.identity[x] for x in C.objects if x in objs},
        comp,
    )


def inclusion_functor(sub, C):
    return FunctorData(sub, C, {x: x for x in sub.objects}, {f: f for f in sub.morphisms}, check=False)

"""Sieves, Grothendieck topologies and the sheaf layer on finite categories."""
from sievekit import kernels
from sievekit.errors import GuardExceeded, MalformedError, Violation
from sievekit.fincat import (
    PresheafMap,
    SetPresheaf,
    compose_maps,
    presheaf_hom,
    subpresheaf,
    yoneda,
)

DEFAULT_MAX_SIEVES = 24


class Sieve:
    """A set of morphisms into ``apex`` closed under precomposition."""

    __slots__ = ("base", "apex", "members")

    def __init__(self, base, apex, members, check=True):
        self.base = base
        self.apex = apex
        self.members = frozenset(members)
        if check:
            self.validate()

    def validate(self):
        C = self.base
        if self.apex not in C.obj_index:
            raise MalformedError(f"unknown apex {self.apex!r}")
        for f in self.members:
            if f not in C.mor_index:
                raise MalformedError(f"unknown morphism {f!r} in sieve")
            if C.tgt[f] != self.apex:
                raise MalformedError(f"{f!r} does not have target {self.apex!r}")
        for f in self.members:
            for g in C.into(C.src[f]):
                if C.compose(f, g) not in self.members:
                    raise MalformedError(f"sieve on {self.apex!r} contains {f!r} but not {f!r} . {g!r}")

    def key(self):
        """Canonical sort key: member indices in ascending order."""
        return tuple(sorted(self.base.mor_index[f] for f in self.members))

    def sorted_members(self):
        return [self.base.morphisms[i] for i in self.key()]

    def as_presheaf(self):
        """The sieve as a subpresheaf of ``h_apex``, with its inclusion."""
        C = self.base
        subsets = {y: [f for f in self.members if C.src[f] == y] for y in C.objects}
        return subpresheaf(yoneda(C, self.apex), subsets)

    def __contains__(self, f):
        return f in self.members

    def __le__(self, other):
        return self.apex == other.apex and self.members <= other.members

    def __eq__(self, other):
        return isinstance(other, Sieve) and self.apex == other.apex and self.members == other.members

    def __hash__(self):
        return hash((self.apex, self.members))

    def __repr__(self):
        return f"Sieve({self.apex!r}, {self.sorted_members()!r})"


def maximal_sieve(C, x):
    return Sieve(C, x, C.into(x), check=False)


def principal_sieve(C, f):
    """The sieve generated by ``f``: all ``f . g``."""
    return Sieve(C, C.tgt[f], {C.compose(f, g) for g in C.into(C.src[f])}, check=False)


def all_sieves(C, x):
    """Every sieve on ``x`` in canonical order (as unions of principal sieves)."""
    found = {frozenset()}
    for f in C.into(x):
        gen = principal_sieve(C, f).members
        found |= {s | gen for s in found}
    return sorted((Sieve(C, x, s, check=False) for s in found), key=Sieve.key)


def pullback_sieve(S, f):
    """``f^-1 S = {g : f . g in S}`` for ``f: y -> apex(S)``."""
    C = S.base
    if C.tgt[f] != S.apex:
        raise ValueError(f"{f!r} does not have target {S.apex!r}")
    return Sieve(C, C.src[f], (g for g in C.into(C.src[f]) if C.compose(f, g) in S.members), check=False)


class GrothendieckTopology:
    """Covering sieves per object. Axioms are checked by :func:`check_topology`."""

    def __init__(self, base, cov):
        self.base = base
        self.cov = {}
        for x in base.objects:
            sieves = []
            for s in cov.get(x, ()):
                if not isinstance(s, Sieve):
                    s = Sieve(base, x, s)
                else:
                    s.validate()
                if s.apex != x:
                    raise MalformedError(f"sieve on {s.apex!r} listed as covering {x!r}")
                sieves.append(s)
            self.cov[x] = tuple(sorted(set(sieves), key=Sieve.key))
        for x in cov:
            if x not in base.obj_index:
                raise MalformedError(f"unknown object {x!r} in covering data")

    def covers(self, S):
        return S in self.cov[S.apex]

    def __eq__(self, other):
        return isinstance(other, GrothendieckTopology) and self.base == other.base and self.cov == other.cov

    def __hash__(self):
        return hash(tuple(self.cov.items()))

    def __repr__(self):
        body = "; ".join(f"{x}: {[s.sorted_members() for s in ss]}" for x, ss in self.cov.items())
        return f"GrothendieckTopology({body})"


def trivial_topology(C):
    return GrothendieckTopology(C, {x: [maximal_sieve(C, x)] for x in C.objects})


def all_sieves_topology(C):
    return GrothendieckTopology(C, {x: all_sieves(C, x) for x in C.objects})


def check_topology(T):
    """Violations of the topology axioms, in canonical order; empty means valid.

    Axiom 1 (stability under equivalence) is extensional for sieves stored as
    morphism sets and is enforced when ``T`` is constructed.
    """
    C = T.base
    out = []
    for x in C.objects:
        top = maximal_sieve(C, x)
        if top not in T.cov[x]:
            out.append(Violation("2", object=x, sieve=top.sorted_members(), witness=[C.identity[x]]))
    for x in C.objects:
        for S in T.cov[x]:
            for f in C.into(x):
                P = pullback_sieve(S, f)
                if P not in T.cov[P.apex]:
                    out.append(Violation("3", object=x, sieve=S.sorted_members(), witness=[f], pullback=P.sorted_members()))
    for x in C.objects:
        candidates = all_sieves(C, x)
        for R in T.cov[x]:
            for S in candidates:
                if S in T.cov[x]:
                    continue
                if all(pullback_sieve(S, f) in T.cov[C.src[f]] for f in R.members):
                    out.append(Violation("4", object=x, sieve=S.sorted_members(), witness=R.sorted_members()))
    return out


def enumerate_topologies(C, max_sieves=DEFAULT_MAX_SIEVES):
    """Every Grothendieck topology on ``C`` in canonical order.

    Candidates are all (object, sieve) pairs; the axioms become Horn clauses
    over them and the models are found by exhaustive bitmask search.
    """
    per_object = {x: all_sieves(C, x) for x in C.objects}
    candidates = [s for x in C.objects for s in per_object[x]]
    if len(candidates) > max_sieves:
        raise GuardExceeded("max-sieves", max_sieves, len(candidates))
    index = {s: i for i, s in enumerate(candidates)}
    clauses = []
    for x in C.objects:
        clauses.append(((), index[maximal_sieve(C, x)]))
    for s in candidates:
        for f in C.into(s.apex):
            clauses.append(((index[s],), index[pullback_sieve(s, f)]))
    for x in C.objects:
        for R in per_object[x]:
            for S in per_object[x]:
                if S == R:
                    continue
                body = {index[R]} | {index[pullback_sieve(S, f)] for f in R.members}
                clauses.append((body, index[S]))
    out = []
    for mask in kernels.horn_models(len(candidates), clauses):
        chosen = [candidates[i] for i in kernels.mask_members(mask)]
        out.append(GrothendieckTopology(C, {x: [s for s in chosen if s.apex == x] for x in C.objects}))
    return out


# -- sheaf layer -------------------------------------------------------------

class SheafCheck:
    """Outcome of :func:`sheaf_check`. Truthy iff the presheaf is a sheaf."""

    def __init__(self, failures):
        self.failures = list(failures)

    @property
    def ok(self):
        return not self.failures

    @property
    def witness(self):
        return self.failures[0] if self.failures else None

    def __bool__(self):
        return self.ok

    def __repr__(self):
        return f"SheafCheck(ok={self.ok}, failures={self.failures!r})"


def _require_same_base(F, T):
    if F.base != T.base:
        raise ValueError("presheaf and topology live on different categories")


def sheaf_check(F, T):
    """Check that restriction ``Hom(h_x, F) -> Hom(S, F)`` is bijective for
    every covering sieve ``S`` on every ``x``.

    Failures are records ``{object, sieve, failure}`` with failure
    ``"injectivity"`` or ``"surjectivity"``.
    """
    _require_same_base(F, T)
    C = F.base
    failures = []
    for x in C.objects:
        whole = presheaf_hom(yoneda(C, x), F)
        for S in T.cov[x]:
            sub, incl = S.as_presheaf()
            restricted = [compose_maps(a, incl) for a in whole]
            targets = presheaf_hom(sub, F)
            if len(set(restricted)) != len(restricted):
                failures.append({"object": x, "sieve": S.sorted_members(), "failure": "injectivity"})
            if set(restricted) != set(targets):
                failures.append({"object": x, "sieve": S.sorted_members(), "failure": "surjectivity"})
    return SheafCheck(failures)


def matching_families(F, S):
    """Compatible families ``(s_f)_{f in S}`` as tuples aligned with
    ``S.sorted_members()``, in lexicographic order of F's element order."""
    C = S.base
    members = S.sorted_members()
    pos = {f: i for i, f in enumerate(members)}
    # constraint: F(g)(s_f) == s_{f.g}; check once both positions are assigned
    constraints = [[] for _ in members]
    for f in members:
        for g in C.into(C.src[f]):
            fg = C.compose(f, g)
            i, j = pos[f], pos[fg]
            constraints[max(i, j)].append((i, g, j))
    out = []
    current = []

    def search(k):
        if k == len(members):
            out.append(tuple(current))
            return
        for a in F.values[C.src[members[k]]]:
            current.append(a)
            if all(F.restrictions[g][current[i]] == current[j] for i, g, j in constraints[k]):
                search(k + 1)
            current.pop()

    search(0)
    return out


class _UnionFind:
    def __init__(self):
        self.parent = {}

    def find(self, a):
        self.parent.setdefault(a, a)
        root = a
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[a] != root:
            self.parent[a], a = root, self.parent[a]
        return root

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            # keep the earlier-seen representative so class order is stable
            self.parent[rb] = ra


def plus_construction(F, T):
    """One plus construction: ``F+(x)`` is the colimit over covering sieves of
    matching families. Returns ``(F+, unit)``; elements of ``F+`` are ints."""
    _require_same_base(F, T)
    C = F.base
    classes = {}
    label = {}
    for x in C.objects:
        uf = _UnionFind()
        order = []
        fams = {S: matching_families(F, S) for S in T.cov[x]}
        for S in T.cov[x]:
            for fam in fams[S]:
                order.append((S, fam))
                uf.find((S, fam))
        for S in T.cov[x]:
            members = S.sorted_members()
            for S2 in T.cov[x]:
                if S2 == S or not S2 <= S:
                    continue
                keep = [members.index(f) for f in S2.sorted_members()]
                for fam in fams[S]:
                    uf.union((S, fam), (S2, tuple(fam[i] for i in keep)))
        ids = {}
        for item in order:
            ids.setdefault(uf.find(item), len(ids))
        label[x] = {item: ids[uf.find(item)] for item in order}
        classes[x] = tuple(range(len(ids)))
    restrictions = {}
    for g in C.morphisms:
        x, y = C.tgt[g], C.src[g]
        r = {}
        for (S, fam), cls in label[x].items():
            if cls in r:
                continue
            P = pullback_sieve(S, g)
            members = S.sorted_members()
            val = dict(zip(members, fam))
            pulled = tuple(val[C.compose(g, h)] for h in P.sorted_members())
            r[cls] = label[y][P, pulled]
        restrictions[g] = r
    plus = SetPresheaf(C, classes, restrictions, check=False)
    unit = {}
    for x in C.objects:
        top = next(S for S in T.cov[x] if S.members == frozenset(C.into(x)))
        members = top.sorted_members()
        unit[x] = {a: label[x][top, tuple(F.restrictions[f][a] for f in members)] for a in F.values[x]}
    return plus, PresheafMap(F, plus, unit, check=False)


def sheafify(F, T):
    """Associated sheaf ``a F`` (plus construction applied twice) and the unit ``F -> a F``.

    Raises ``ValueError`` when ``T`` is not a topology.
    """
    _require_same_base(F, T)
    bad = check_topology(T)
    if bad:
        raise ValueError(f"not a Grothendieck topology: {bad[0]!r}")
    F1, u1 = plus_construction(F, T)
    F2, u2 = plus_construction(F1, T)
    return F2, compose_maps(u2, u1)


"""Finite rings, right ideals and Gabriel filters.

A right ideal of R is the same thing as an Ab-enriched sieve on the
one-object category BR, and pulling a sieve back along ``r`` is the
transporter ``(I : r)``. Two deliberately separate checkers live here: the
filter axioms T1-T4 and the enriched-topology axioms on BR. They must agree on
every family of right ideals.
"""
import itertools
import math

import numpy as np

from sievekit import kernels
from sievekit.errors import GuardExceeded, MalformedError, Violation

DEFAULT_MAX_RING = 64
DEFAULT_MAX_IDEALS = 16


class RingError(ValueError):
    def __init__(self, law, message, witness=()):
        super().__init__(f"{law}: {message}")
        self.law = law
        self.witness = tuple(witness)


class FinRing:
    """A finite unital ring given by addition and multiplication tables.

    Tables are square nested sequences of element names, indexed in the order
    of ``elements``: ``add[a][b]`` is ``a + b`` and ``mul[a][b]`` is ``a * b``.
    """

    def __init__(self, elements, add, mul, zero, one, name=None):
        self.elements = tuple(elements)
        self.name = name
        n = len(self.elements)
        if n == 0:
            raise RingError("empty", "a ring needs at least one element")
        self.index = {e: i for i, e in enumerate(self.elements)}
        if len(self.index) != n:
            raise RingError("duplicate-element", "element names must be distinct")
        self.add = self._table(add, "add")
        self.mul = self._table(mul, "mul")
        for label, e in (("zero", zero), ("one", one)):
            if e not in self.index:
                raise RingError("unknown-element", f"{label} {e!r} is not an element", (e,))
        self.zero = self.index[zero]
        self.one = self.index[one]
        self._validate()
        self.neg = np.argmax(self.add == self.zero, axis=1)

    def _table(self, rows, label):
        n = len(self.elements)
        if len(rows) != n or any(len(r) != n for r in rows):
            raise RingError("table-shape", f"{label} table must be {n}x{n}")
        try:
            return np.array([[self.index[v] for v in r] for r in rows], dtype=np.int64)
        except KeyError as exc:
            raise RingError("unknown-element", f"{label} table mentions {exc.args[0]!r}", exc.args) from None

    def _fail(self, law, message, *idx):
        raise RingError(law, message, tuple(self.elements[i] for i in idx))

    def _validate(self):
        n = len(self.elements)
        A, M = self.add, self.mul
        for table, label in ((A, "additive"), (M, "multiplicative")):
            h, g, f = (int(v) for v in kernels.first_nonassociative(table))
            if h >= 0:
                self._fail(f"{label}-associativity", "table is not associative", h, g, f)
        bad = np.argwhere(A != A.T)
        if len(bad):
            self._fail("additive-commutativity", "addition is not commutative", *bad[0])
        r = np.arange(n)
        for a in r:
            if A[self.zero, a] != a:
                self._fail("additive-identity", "zero is not neutral", a)
            if M[self.one, a] != a or M[a, self.one] != a:
                self._fail("multiplicative-identity", "one is not a unit", a)
            if not (A[a] == self.zero).any():
                self._fail("additive-inverse", "element has no negative", a)
        # a(b+c) = ab+ac and (a+b)c = ac+bc over all triples
        left = M[:, A][:, :, :] != A[M[:, :, None], M[:, None, :]]
        if left.any():
            self._fail("left-distributivity", "a(b+c) != ab+ac", *np.argwhere(left)[0])
        right = M[A][:, :, :] != A[M[:, None, :], M[None, :, :]]
        if right.any():
            self._fail("right-distributivity", "(a+b)c != ac+bc", *np.argwhere(right)[0])

    def __len__(self):
        return len(self.elements)

    def __repr__(self):
        return f"FinRing({self.name or len(self.elements)})"


# -- constructors ------------------------------------------------------------

def zmod(n):
    elems = [str(i) for i in range(n)]
    return FinRing(
        elems,
        [[str((a + b) % n) for b in range(n)] for a in range(n)],
        [[str((a * b) % n) for b in range(n)] for a in range(n)],
        "0",
        str(1 % n),
        name=f"Z/{n}",
    )


def prime_field(p):
    if p < 2 or any(p % d == 0 for d in range(2, math.isqrt(p) + 1)):
        raise ValueError(f"{p} is not prime")
    R = zmod(p)
    R.name = f"F{p}"
    return R


def product_ring(R, S):
    pairs = list(itertools.product(range(len(R)), range(len(S))))
    name = {(a, b): f"({R.elements[a]},{S.elements[b]})" for a, b in pairs}

    def table(tr, ts):
        return [[name[tr[a, c], ts[b, d]] for c, d in pairs] for a, b in pairs]

    return FinRing(
        [name[p] for p in pairs],
        table(R.add, S.add),
        table(R.mul, S.mul),
        name[R.zero, S.zero],
        name[R.one, S.one],
        name=f"{R.name}x{S.name}",
    )


def upper_triangular(p):
    """2x2 upper-triangular matrices ``[[a, b], [0, d]]`` over Z/p."""
    triples = list(itertools.product(range(p), repeat=3))
    name = {t: f"[[{t[0]},{t[1]}],[0,{t[2]}]]" for t in triples}

    def add(s, t):
        return tuple((u + v) % p for u, v in zip(s, t))

    def mul(s, t):
        a, b, d = s
        a2, b2, d2 = t
        return (a * a2 % p, (a * b2 + b * d2) % p, d * d2 % p)

    return FinRing(
        [name[t] for t in triples],
        [[name[add(s, t)] for t in triples] for s in triples],
        [[name[mul(s, t)] for t in triples] for s in triples],
        name[0, 0, 0],
        name[1, 0, 1],
        name=f"UT2(F{p})",
    )


# -- right ideals --------------------------------------------------------------

class RightIdeal:
    """A right ideal, stored as a frozenset of element indices."""

    __slots__ = ("ring", "members")

    def __init__(self, ring, members, check=True):
        self.ring = ring
        self.members = frozenset(members)
        if check:
            self.validate()

    @classmethod
    def from_names(cls, ring, names):
        try:
            return cls(ring, (ring.index[e] for e in names))
        except KeyError as exc:
            raise MalformedError(f"unknown ring element {exc.args[0]!r}") from None

    def validate(self):
        R = self.ring
        m = self.members
        if R.zero not in m:
            raise MalformedError(f"{self.names()} does not contain zero")
        for a in m:
            if int(R.neg[a]) not in m:
                raise MalformedError(f"{self.names()} is not closed under negation")
            for b in m:
                if int(R.add[a, b]) not in m:
                    raise MalformedError(f"{self.names()} is not closed under addition")
            for r in range(len(R)):
                if int(R.mul[a, r]) not in m:
                    raise MalformedError(f"{self.names()} is not closed under right multiplication")

    def key(self):
        return (len(self.members), tuple(sorted(self.members)))

    def names(self):
        return [self.ring.elements[i] for i in sorted(self.members)]

    def __le__(self, other):
        return self.members <= other.members

    def __and__(self, other):
        return RightIdeal(self.ring, self.members & other.members, check=False)

    def __eq__(self, other):
        return isinstance(other, RightIdeal) and self.members == other.members

    def __hash__(self):
        return hash(self.members)

    def __repr__(self):
        return f"RightIdeal({self.names()})"


def whole_ring(R):
    return RightIdeal(R, range(len(R)), check=False)


def zero_ideal(R):
    return RightIdeal(R, (R.zero,), check=False)


def enumerate_right_ideals(R, max_ring=DEFAULT_MAX_RING):
    """All right ideals, ordered by size then by member indices.

    Every right ideal is a finite sum of principal ones ``aR``, so the search
    closes ``{0}`` under ``I -> I + aR``.
    """
    if len(R) > max_ring:
        raise GuardExceeded("max-ring", max_ring, len(R))
    n = len(R)
    principal = [frozenset(int(v) for v in R.mul[a]) for a in range(n)]

    def plus(I, J):
        return frozenset(int(R.add[i, j]) for i in I for j in J)

    start = frozenset((R.zero,))
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for I in frontier:
            for a in range(n):
                if a in I:
                    continue
                J = plus(I, principal[a])
                if J not in seen:
                    seen.add(J)
                    nxt.append(J)
        frontier = nxt
    return sorted((RightIdeal(R, s, check=False) for s in seen), key=RightIdeal.key)


def ideal_transporter(I, r):
    """``(I : r) = {s : r s in I}``; ``r`` is an element name or index."""
    R = I.ring
    if not isinstance(r, (int, np.integer)):
        r = R.index[r]
    return RightIdeal(R, (s for s in range(len(R)) if int(R.mul[r, s]) in I.members), check=False)


class IdealFilter:
    """A family of right ideals of one ring; no axioms assumed."""

    def __init__(self, ring, members):
        self.ring = ring
        ideals = []
        for m in members:
            if not isinstance(m, RightIdeal):
                m = RightIdeal.from_names(ring, m)
            elif m.ring is not ring:
                raise MalformedError("ideal belongs to a different ring")
            else:
                m.validate()
            ideals.append(m)
        self.members = tuple(sorted(set(ideals), key=RightIdeal.key))
        self._set = frozenset(self.members)

    def __contains__(self, ideal):
        return ideal in self._set

    def __iter__(self):
        return iter(self.members)

    def __len__(self):
        return len(self.members)

    def __eq__(self, other):
        return isinstance(other, IdealFilter) and self._set == other._set

    def __hash__(self):
        return hash(self._set)

    def __repr__(self):
        return f"IdealFilter({[i.names() for i in self.members]})"


def check_gabriel_filter(F, ideals=None):
    """Violations of T1-T4, in axiom order; empty means ``F`` is a Gabriel filter.

    T1: R in F, and F is upward closed. T2: closed under intersection.
    T3: closed under transporters. T4: if J in F and (I : r) in F for every r
    in J, then I in F.
    """
    R = F.ring
    ideals = ideals if ideals is not None else enumerate_right_ideals(R, max_ring=len(R))
    top = whole_ring(R)
    out = []
    if top not in F:
        out.append(Violation("T1", ideal=top.names(), witness=[]))
    for I in F:
        for J in ideals:
            if I <= J and J not in F:
                out.append(Violation("T1", ideal=J.names(), witness=I.names()))
    for I, J in itertools.combinations(F.members, 2):
        if (I & J) not in F:
            out.append(Violation("T2", ideal=(I & J).names(), witness=[I.names(), J.names()]))
    for I in F:
        for r in range(len(R)):
            Ir = ideal_transporter(I, r)
            if Ir not in F:
                out.append(Violation("T3", ideal=Ir.names(), witness=[I.names(), R.elements[r]]))
    for J in F:
        for I in ideals:
            if I in F:
                continue
            if all(ideal_transporter(I, r) in F for r in sorted(J.members)):
                out.append(Violation("T4", ideal=I.names(), witness=J.names()))
    return out


def check_ab_enriched_topology(F, sieves=None):
    """Violations of the enriched-topology axioms read on BR.

    A sieve on the single object is a right ideal, an arrow ``r`` belongs to a
    sieve when it is a member, and pulling back along ``r`` is ``(I : r)``.
    Axiom 1 is extensional equality of ideals and holds by construction.
    """
    R = F.ring
    sieves = sieves if sieves is not None else enumerate_right_ideals(R, max_ring=len(R))
    covering = {I.members for I in F}
    out = []
    everything = frozenset(range(len(R)))
    if everything not in covering:
        out.append(Violation("2", sieve=[R.elements[i] for i in sorted(everything)], witness=[R.elements[R.one]]))
    for I in F:
        for r in range(len(R)):
            pulled = ideal_transporter(I, r)
            if pulled.members not in covering:
                out.append(Violation("3", sieve=I.names(), witness=[R.elements[r]], pullback=pulled.names()))
    for cover in F:
        arrows = sorted(cover.members)
        for S in sieves:
            if S.members in covering:
                continue
            if all(ideal_transporter(S, r).members in covering for r in arrows):
                out.append(Violation("4", sieve=S.names(), witness=cover.names()))
    return out


def enumerate_gabriel_filters(R, max_ideals=DEFAULT_MAX_IDEALS, ideals=None):
    """Every Gabriel filter on ``R``, found as the models of T1-T4 read as Horn
    clauses over the list of right ideals; canonical (bitmask) order."""
    ideals = ideals if ideals is not None else enumerate_right_ideals(R, max_ring=len(R))
    if len(ideals) > max_ideals:
        raise GuardExceeded("max-ideals", max_ideals, len(ideals))
    index = {I: i for i, I in enumerate(ideals)}
    clauses = [((), index[whole_ring(R)])]
    for I in ideals:
        for J in ideals:
            if I != J and I <= J:
                clauses.append(((index[I],), index[J]))
    for I, J in itertools.combinations(ideals, 2):
        clauses.append(((index[I], index[J]), index[I & J]))
    for I in ideals:
        for r in range(len(R)):
            clauses.append(((index[I],), index[ideal_transporter(I, r)]))
    for J in ideals:
        for I in ideals:
            if I != J:
                body = {index[J]} | {index[ideal_transporter(I, r)] for r in J.members}
                clauses.append((body, index[I]))
    return [
        IdealFilter(R, [ideals[i] for i in kernels.mask_members(mask)])
        for mask in kernels.horn_models(len(ideals), clauses)
    ]


def ideal_families(ideals):
    """All ``2**len(ideals)`` families, as IdealFilters, in bitmask order."""
    R = ideals[0].ring
    for mask in range(1 << len(ideals)):
        yield IdealFilter(R, [I for i, I in enumerate(ideals) if (mask >> i) & 1])

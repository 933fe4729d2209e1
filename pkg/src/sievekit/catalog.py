"""Named small categories, rings and 2-categories used as fixtures and in benchmarks."""
from sievekit import cat2, fincat, gabriel


def point():
    return fincat.discrete(["*"])


def walking_arrow():
    return fincat.FinCategory(
        ["a", "b"],
        [("id_a", "a", "a"), ("id_b", "b", "b"), ("u", "a", "b")],
        {"a": "id_a", "b": "id_b"},
        {},
    )


def discrete2():
    return fincat.discrete(["a", "b"])


def chain(n):
    """The poset ``0 < 1 < ... < n-1``."""
    return fincat.poset([str(i) for i in range(n)], lambda a, b: int(a) <= int(b))


def commutative_square():
    """The poset ``0 < 1, 0 < 2, 1 < 3, 2 < 3``."""
    up = {("0", "1"), ("0", "2"), ("1", "3"), ("2", "3"), ("0", "3")}
    return fincat.poset(["0", "1", "2", "3"], lambda a, b: a == b or (a, b) in up)


def cospan():
    """The poset ``a < c > b``."""
    return fincat.poset(["a", "b", "c"], lambda x, y: x == y or y == "c")


def walking_iso():
    return fincat.codiscrete(["0", "1"])


def cyclic_group(n):
    names = [f"g{i}" for i in range(n)]
    return fincat.monoid_category(names, lambda a, b: names[(int(a[1:]) + int(b[1:])) % n])


def idempotent_monoid():
    """``{e, t}`` with ``t t = t``."""
    return fincat.monoid_category(["e", "t"], lambda a, b: "e" if a == b == "e" else "t")


def parallel_pair():
    return fincat.FinCategory(
        ["a", "b"],
        [("id_a", "a", "a"), ("id_b", "b", "b"), ("f", "a", "b"), ("g", "a", "b")],
        {"a": "id_a", "b": "id_b"},
        {},
    )


CATEGORIES = {
    "point": point,
    "walking-arrow": walking_arrow,
    "discrete2": discrete2,
    "chain3": lambda: chain(3),
    "square": commutative_square,
    "cospan": cospan,
    "walking-iso": walking_iso,
    "z2": lambda: cyclic_group(2),
    "idempotent": idempotent_monoid,
    "parallel-pair": parallel_pair,
}


# -- rings ----------------------------------------------------------------------

RINGS = {
    "F2": lambda: gabriel.prime_field(2),
    "F3": lambda: gabriel.prime_field(3),
    "Z4": lambda: gabriel.zmod(4),
    "Z6": lambda: gabriel.zmod(6),
    "F2xF2": lambda: gabriel.product_ring(gabriel.prime_field(2), gabriel.prime_field(2)),
    "UT2F2": lambda: gabriel.upper_triangular(2),
}


# -- 2-categories -------------------------------------------------------------------

def _idempotent_mul(a, b):
    return "e" if a == b == "e" else "t"


def codiscrete_idempotent():
    """One object; arrows ``{e, t}`` with ``t t = t``; hom-category the walking isomorphism."""
    return cat2.codiscrete_monoid(["e", "t"], _idempotent_mul)


def codiscrete_z2():
    return cat2.codiscrete_monoid(["e", "t"], lambda a, b: "e" if a == b else "t")


def locally_thin_monoid(elements, mul, leq):
    """One object; arrows a monoid ordered by ``leq`` (``mul`` must be
    monotone); one cell ``a => b`` whenever ``leq(a, b)``."""
    hom = fincat.poset(elements, leq)
    cell = {(hom.src[c], hom.tgt[c]): c for c in hom.morphisms}

    def mul_cells(b, a):
        return cell[mul(hom.src[b], hom.src[a]), mul(hom.tgt[b], hom.tgt[a])]

    return cat2.one_object(hom, mul, mul_cells)


def max_monoid(n=2):
    """Arrows ``0..n-1`` under max, ordered by ``<=``."""
    return locally_thin_monoid([str(i) for i in range(n)], lambda a, b: max(a, b), lambda a, b: a <= b)


def min_monoid():
    """Arrows ``{1, 0}`` under min (unit ``1``), ordered by ``<=``."""
    return locally_thin_monoid(["1", "0"], lambda a, b: min(a, b), lambda a, b: a <= b)


def two_cell_arrow(hom_kind="poset"):
    """Objects ``a, b`` and two arrows ``u, v: a -> b`` joined by a cell
    ``u => v`` (``poset``) or an isomorphism (``iso``)."""
    if hom_kind == "poset":
        H = fincat.poset(["u", "v"], lambda p, q: p == q or (p, q) == ("u", "v"))
    else:
        H = fincat.codiscrete(["u", "v"])
    ida = fincat.discrete(["id_a"], identity_name=lambda x: f"1_{x}")
    idb = fincat.discrete(["id_b"], identity_name=lambda x: f"1_{x}")
    return cat2.FinCat2(
        ["a", "b"],
        {("a", "a"): ida, ("b", "b"): idb, ("a", "b"): H},
        {"a": "id_a", "b": "id_b"},
        {},
        {},
    )


CAT2 = {
    "codiscrete-idempotent": codiscrete_idempotent,
    "codiscrete-z2": codiscrete_z2,
    "max-monoid": max_monoid,
    "max-monoid3": lambda: max_monoid(3),
    "min-monoid": min_monoid,
    "two-cell-arrow": two_cell_arrow,
    "iso-cell-arrow": lambda: two_cell_arrow("iso"),
}

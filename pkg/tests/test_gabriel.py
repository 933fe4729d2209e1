import itertools

import pytest
from hypothesis import given, settings, strategies as st

import oracles

from sievekit import catalog, documents, gabriel
from sievekit.errors import GuardExceeded, MalformedError
from sievekit.gabriel import IdealFilter, RightIdeal, RingError

RINGS = sorted(catalog.RINGS)


@pytest.mark.parametrize("name", RINGS)
def test_right_ideals_match_oracle(name):
    R = catalog.RINGS[name]()
    got = gabriel.enumerate_right_ideals(R)
    assert [I.members for I in got] == sorted(oracles.right_ideals(R), key=lambda s: (len(s), sorted(s)))


@pytest.mark.parametrize("name", RINGS)
def test_filters_match_oracle(name):
    R = catalog.RINGS[name]()
    got = gabriel.enumerate_gabriel_filters(R)
    want = oracles.gabriel_filters(R)
    assert {frozenset(I.members for I in F) for F in got} == {frozenset(f) for f in want}
    assert len(got) == len(want)
    for F in got:
        assert gabriel.check_gabriel_filter(F) == []
        assert gabriel.check_ab_enriched_topology(F) == []


@pytest.mark.parametrize("name", RINGS)
def test_checkers_agree_with_oracle_on_every_family(name):
    R = catalog.RINGS[name]()
    ideals = gabriel.enumerate_right_ideals(R)
    raw = [I.members for I in ideals]
    for F in gabriel.ideal_families(ideals):
        want = oracles.is_gabriel(R, {I.members for I in F}, raw)
        assert (not gabriel.check_gabriel_filter(F, ideals)) == want
        assert (not gabriel.check_ab_enriched_topology(F, ideals)) == want


def test_fields_have_exactly_two_filters():
    for p in (2, 3, 5, 7):
        R = gabriel.prime_field(p)
        fs = gabriel.enumerate_gabriel_filters(R)
        assert [len(F) for F in fs] == [1, 2]


def test_z4_zero_is_forced():
    # {R, (2)} is upward closed and closed under meets and transporters, but
    # (0 : r) lies in it for every r in (2), so T4 forces {0}
    R = gabriel.zmod(4)
    F = IdealFilter(R, [["0", "1", "2", "3"], ["0", "2"]])
    bad = gabriel.check_gabriel_filter(F)
    assert [v.axiom for v in bad] == ["T4"]
    assert bad[0]["ideal"] == ["0"] and bad[0]["witness"] == ["0", "2"]
    enriched = gabriel.check_ab_enriched_topology(F)
    assert [v.axiom for v in enriched] == ["4"]


def test_z4_filters_are_trivial_and_total():
    R = gabriel.zmod(4)
    fs = [[I.names() for I in F] for F in gabriel.enumerate_gabriel_filters(R)]
    assert fs == [[["0", "1", "2", "3"]], [["0"], ["0", "2"], ["0", "1", "2", "3"]]]


@pytest.mark.parametrize("name", RINGS)
def test_transporter_laws(name):
    R = catalog.RINGS[name]()
    for I in gabriel.enumerate_right_ideals(R):
        assert gabriel.ideal_transporter(I, R.one) == I
        for r, s in itertools.product(range(len(R)), repeat=2):
            rs = int(R.mul[r, s])
            assert gabriel.ideal_transporter(I, rs) == gabriel.ideal_transporter(gabriel.ideal_transporter(I, r), s)
        for r in range(len(R)):
            T = gabriel.ideal_transporter(I, r)
            T.validate()
            assert T.members == oracles.transporter(R, I.members, r)
            # r in I exactly when (I : r) is everything
            assert (r in I.members) == (len(T.members) == len(R))


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 30))
def test_zmod_ideals_are_divisors(n):
    R = gabriel.zmod(n)
    ideals = gabriel.enumerate_right_ideals(R)
    divisors = [d for d in range(1, n + 1) if n % d == 0]
    assert len(ideals) == len(divisors)
    assert sorted(len(I.members) for I in ideals) == sorted(n // d for d in divisors)


@pytest.mark.parametrize("name", RINGS)
def test_ring_document_round_trip(name):
    R = catalog.RINGS[name]()
    again = documents.ring_from_doc(documents.ring_to_doc(R))
    assert again.elements == R.elements
    assert (again.add == R.add).all() and (again.mul == R.mul).all()


def test_upper_triangular_is_noncommutative():
    R = gabriel.upper_triangular(2)
    assert len(R) == 8
    assert (R.mul != R.mul.T).any()
    # right ideals differ from left ideals, so the count is not symmetric under transpose
    assert len(gabriel.enumerate_right_ideals(R)) == len(oracles.right_ideals(R))


@pytest.mark.parametrize(
    "mutate,law",
    [
        (lambda a, m: (a, [r[:1] + ["0", "0"] for r in m]), "multiplicative-identity"),
        # a + b = a is associative but not commutative
        (lambda a, m: ([[x, x, x] for x in ("0", "1", "2")], m), "additive-commutativity"),
        # Z/3 with 2 * 2 = 2: a monoid, but 2(1 + 1) = 2 while 2 + 2 = 1
        (lambda a, m: (a, m[:2] + [["0", "2", "2"]]), "left-distributivity"),
    ],
)
def test_bad_ring_tables(mutate, law):
    add = [[str((i + j) % 3) for j in range(3)] for i in range(3)]
    mul = [[str((i * j) % 3) for j in range(3)] for i in range(3)]
    a, m = mutate(add, mul)
    with pytest.raises(RingError) as info:
        gabriel.FinRing(["0", "1", "2"], a, m, "0", "1")
    assert info.value.law == law


def test_ideal_validation():
    R = gabriel.zmod(4)
    with pytest.raises(MalformedError):
        RightIdeal.from_names(R, ["0", "1"])
    with pytest.raises(MalformedError):
        RightIdeal.from_names(R, ["1", "2"])
    with pytest.raises(MalformedError):
        RightIdeal.from_names(R, ["7"])
    assert RightIdeal.from_names(R, ["0", "2"]).names() == ["0", "2"]


def test_guards():
    with pytest.raises(GuardExceeded) as info:
        gabriel.enumerate_right_ideals(gabriel.zmod(6), max_ring=5)
    assert info.value.guard == "max-ring"
    with pytest.raises(GuardExceeded) as info:
        gabriel.enumerate_gabriel_filters(gabriel.upper_triangular(2), max_ideals=6)
    assert (info.value.guard, info.value.limit, info.value.actual) == ("max-ideals", 6, 7)


def test_filter_family_is_deduplicated_and_sorted():
    R = gabriel.zmod(6)
    F = IdealFilter(R, [["0", "1", "2", "3", "4", "5"], ["0", "3"], ["0", "3"]])
    assert [I.names() for I in F] == [["0", "3"], ["0", "1", "2", "3", "4", "5"]]


def test_z4_zero_without_two_is_not_upward_closed():
    R = gabriel.zmod(4)
    F = IdealFilter(R, [["0", "1", "2", "3"], ["0"]])
    bad = gabriel.check_gabriel_filter(F)
    t1 = [v for v in bad if v.axiom == "T1"]
    assert t1 and t1[0]["ideal"] == ["0", "2"] and t1[0]["witness"] == ["0"]
    four = [v for v in gabriel.check_ab_enriched_topology(F) if v.axiom == "4"]
    assert four and four[0]["sieve"] == ["0", "2"]


def test_z4_transporter_of_two():
    R = gabriel.zmod(4)
    I = RightIdeal.from_names(R, ["0", "2"])
    assert gabriel.ideal_transporter(I, R.elements.index("2")) == gabriel.whole_ring(R)


def test_small_ideal_counts():
    F2 = gabriel.prime_field(2)
    assert [I.names() for I in gabriel.enumerate_right_ideals(F2)] == [["0"], ["0", "1"]]
    assert len(gabriel.enumerate_right_ideals(gabriel.product_ring(F2, F2))) == 4
    assert [I.names() for I in gabriel.enumerate_right_ideals(gabriel.zmod(4))] == [["0"], ["0", "2"], ["0", "1", "2", "3"]]

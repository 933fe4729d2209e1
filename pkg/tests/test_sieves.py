import itertools

import pytest

import oracles
from builders import constant, presheaf_corpus

from sievekit import catalog, fincat, sieves
from sievekit.errors import GuardExceeded, MalformedError
from sievekit.sieves import GrothendieckTopology, Sieve

SMALL = ["point", "walking-arrow", "discrete2", "chain3", "cospan", "walking-iso", "z2", "idempotent", "parallel-pair"]


@pytest.mark.parametrize("name", sorted(catalog.CATEGORIES))
def test_all_sieves_match_oracle(name):
    C = catalog.CATEGORIES[name]()
    for x in C.objects:
        assert {S.members for S in sieves.all_sieves(C, x)} == set(oracles.sieves_on(C, x))


def test_sieve_rejects_non_closed_sets():
    C = catalog.chain(3)
    with pytest.raises(MalformedError):
        Sieve(C, "2", ["1<=2"])
    with pytest.raises(MalformedError):
        Sieve(C, "2", ["0<=1"])
    assert Sieve(C, "2", ["1<=2", "0<=2"]).sorted_members() == ["0<=2", "1<=2"]


@pytest.mark.parametrize("name", SMALL)
def test_enumerated_topologies_match_oracle(name):
    C = catalog.CATEGORIES[name]()
    got = sieves.enumerate_topologies(C)
    want = oracles.topologies(C)
    as_sets = {frozenset((x, S.members) for x in C.objects for S in T.cov[x]) for T in got}
    assert as_sets == {frozenset((x, S) for x in C.objects for S in cov[x]) for cov in want}
    assert len(got) == len(as_sets)
    for T in got:
        assert sieves.check_topology(T) == []


def test_square_topologies_match_oracle():
    C = catalog.commutative_square()
    got = sieves.enumerate_topologies(C)
    want = oracles.topologies(C)
    assert len(got) == len(want)
    assert {frozenset((x, S.members) for x in C.objects for S in T.cov[x]) for T in got} == {
        frozenset((x, S) for x in C.objects for S in cov[x]) for cov in want
    }


def test_enumeration_guard():
    with pytest.raises(GuardExceeded) as info:
        sieves.enumerate_topologies(catalog.chain(3), max_sieves=5)
    assert (info.value.guard, info.value.limit, info.value.actual) == ("max-sieves", 5, 9)


@pytest.mark.parametrize("name", SMALL)
def test_trivial_and_discrete_topologies(name):
    C = catalog.CATEGORIES[name]()
    assert not sieves.check_topology(sieves.trivial_topology(C))
    assert not sieves.check_topology(sieves.all_sieves_topology(C))


@pytest.mark.parametrize("name", SMALL)
def test_checker_agrees_with_oracle_on_every_family(name):
    C = catalog.CATEGORIES[name]()
    per = [sieves.all_sieves(C, x) for x in C.objects]
    for choice in itertools.product(*[list(oracles.powerset(p)) for p in per]):
        T = GrothendieckTopology(C, {x: list(c) for x, c in zip(C.objects, choice)})
        cov = {x: {S.members for S in T.cov[x]} for x in C.objects}
        assert (not sieves.check_topology(T)) == oracles.is_topology(C, cov)


def test_violation_witnesses():
    C = catalog.walking_arrow()
    T = GrothendieckTopology(C, {"a": [], "b": [["u"], ["id_b", "u"]]})
    bad = sieves.check_topology(T)
    assert bad[0].axiom == "2" and bad[0]["object"] == "a"
    three = [v for v in bad if v.axiom == "3"]
    assert {tuple(v["sieve"]) for v in three} == {("u",), ("id_b", "u")}
    assert all(v["witness"] == ["u"] and v["pullback"] == ["id_a"] for v in three)
    # local character: the empty sieve on b is covered by {u} since u^-1 of it is empty on a
    T = GrothendieckTopology(C, {"a": [[], ["id_a"]], "b": [["u"], ["id_b", "u"]]})
    four = [v for v in sieves.check_topology(T) if v.axiom == "4"]
    assert four and four[0]["sieve"] == [] and four[0]["object"] == "b"


@pytest.mark.parametrize("name", SMALL)
def test_pullback_laws(name):
    C = catalog.CATEGORIES[name]()
    for x in C.objects:
        for S in sieves.all_sieves(C, x):
            assert sieves.pullback_sieve(S, C.identity[x]) == S
            for f in C.into(x):
                # f in S iff f^-1 S is maximal
                assert (f in S) == (sieves.pullback_sieve(S, f) == sieves.maximal_sieve(C, C.src[f]))
                for g in C.into(C.src[f]):
                    lhs = sieves.pullback_sieve(S, C.compose(f, g))
                    rhs = sieves.pullback_sieve(sieves.pullback_sieve(S, f), g)
                    assert lhs == rhs


def test_principal_sieve_is_image_of_yoneda():
    C = catalog.commutative_square()
    for f in C.morphisms:
        S = sieves.principal_sieve(C, f)
        assert S.members == {C.compose(f, g) for g in C.into(C.src[f])}


def test_topology_rejects_unknown_objects_and_wrong_apex():
    C = catalog.walking_arrow()
    with pytest.raises(MalformedError):
        GrothendieckTopology(C, {"z": []})
    with pytest.raises(MalformedError):
        GrothendieckTopology(C, {"a": [Sieve(C, "b", ["u"])]})


# -- sheaves ---------------------------------------------------------------------------

def _corpus_with_topologies():
    tops = {}
    for name, C, F in presheaf_corpus(seed=7):
        if name not in tops:
            tops[name] = sieves.enumerate_topologies(C)
        for T in tops[name]:
            yield name, F, T


def test_sheaf_check_matches_matching_family_oracle():
    n = 0
    for _, F, T in _corpus_with_topologies():
        cov = {x: [S.members for S in T.cov[x]] for x in F.base.objects}
        assert bool(sieves.sheaf_check(F, T)) == oracles.sheaf_by_matching(F, cov)
        n += 1
    assert n > 100


def test_matching_families_count_maps_out_of_the_sieve():
    for _, F, T in _corpus_with_topologies():
        for x in F.base.objects:
            for S in T.cov[x]:
                sub, _ = S.as_presheaf()
                assert len(sieves.matching_families(F, S)) == len(fincat.presheaf_hom(sub, F))


def test_every_presheaf_is_a_sheaf_for_the_trivial_topology():
    for _, C, F in presheaf_corpus():
        T = sieves.trivial_topology(C)
        assert sieves.sheaf_check(F, T)
        F2, unit = sieves.sheafify(F, T)
        assert fincat.is_iso_presheaf(unit)


def test_sheaves_for_the_all_sieves_topology_are_singletons():
    # the empty sieve covers, so sections over every object are unique
    for name in SMALL:
        C = catalog.CATEGORIES[name]()
        T = sieves.all_sieves_topology(C)
        F = constant(C, ["p", "q"])
        res = sieves.sheaf_check(F, T)
        assert not res and res.witness["failure"] == "injectivity"
        F2, _ = sieves.sheafify(F, T)
        assert all(len(F2.values[x]) == 1 for x in C.objects)


def test_sheafify_universal_property():
    # maps F -> G into a sheaf G correspond to maps aF -> G
    for _, F, T in itertools.islice(_corpus_with_topologies(), 0, None, 5):
        aF, unit = sieves.sheafify(F, T)
        for G in (aF, sieves.sheafify(constant(F.base, ["p", "q"]), T)[0]):
            through_unit = [fincat.compose_maps(m, unit) for m in fincat.presheaf_hom(aF, G)]
            assert len(set(through_unit)) == len(through_unit)
            assert set(through_unit) == set(fincat.presheaf_hom(F, G))


def test_sheafify_rejects_invalid_topology():
    C = catalog.walking_arrow()
    T = GrothendieckTopology(C, {"a": [], "b": [["u"]]})
    with pytest.raises(ValueError):
        sieves.sheafify(constant(C, ["p"]), T)


def test_presheaf_and_topology_must_share_a_base():
    with pytest.raises(ValueError):
        sieves.sheaf_check(constant(catalog.point(), ["p"]), sieves.trivial_topology(catalog.walking_arrow()))


def test_separated_but_not_sheaf_on_cospan():
    # the cover {a->c, b->c} of c with F(c) a point and F(a), F(b) of size two
    C = catalog.cospan()
    T = None
    for cand in sieves.enumerate_topologies(C):
        if any(S.members == {"a<=c", "b<=c"} for S in cand.cov["c"]):
            T = cand
            break
    assert T is not None
    F = fincat.SetPresheaf(
        C, {"a": [0, 1], "b": [0, 1], "c": [0]}, {"a<=c": {0: 0}, "b<=c": {0: 0}}
    )
    res = sieves.sheaf_check(F, T)
    assert not res
    assert {r["failure"] for r in res.failures} == {"surjectivity"}
    F2, _ = sieves.sheafify(F, T)
    assert len(F2.values["c"]) == 4

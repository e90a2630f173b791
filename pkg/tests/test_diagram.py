import random

import pytest

from twinbuild import coxeter as cx
from twinbuild import diagram as dg
from twinbuild.errors import RankTooLarge

from oracles import geometric_order

A2 = cx.matrix_from_name("A2")
A1T = cx.matrix_from_name("~A1")
A2T = cx.matrix_from_name("~A2")


def sets(*xs):
    return frozenset(frozenset(x) for x in xs)


def test_spherical_subsets_examples():
    lat = dg.spherical_subsets(A1T)
    assert lat.spherical == sets((), (1,), (2,))
    assert lat.maximal == sets((1,), (2,))
    lat = dg.spherical_subsets(A2T)
    assert lat.maximal == sets((1, 2), (1, 3), (2, 3))
    assert len(lat.spherical) == 7
    assert dg.spherical_subsets(A2).maximal == sets((1, 2))


def test_rank_too_large():
    cm = cx.matrix_from_name("A8")
    big = cx.CoxeterMatrix.from_bonds(13, {(i, i + 1): 3 for i in range(1, 13)})
    dg.spherical_subsets(cm)
    with pytest.raises(RankTooLarge):
        dg.spherical_subsets(big)


@pytest.mark.parametrize("seed", range(12))
def test_lattice_matches_bfs(seed):
    rng = random.Random(seed)
    cm = dg.random_matrix(rng.randint(2, 4), rng)
    lat = dg.spherical_subsets(cm)
    # 20000 exceeds |H4| = 14400, the largest finite group of rank <= 4 here
    brute = {J for J in cx.iter_subsets(cm) if geometric_order(cm.m, J, 20000) is not None}
    assert lat.spherical == frozenset(brute)
    # lattice invariants
    assert lat.maximal <= lat.spherical
    for J in lat.spherical:
        assert lat.maximal_containing(J)
        for s in J:
            assert J - {s} in lat.spherical


def test_condition_examples():
    assert not dg.check_condition(A2T, "R1")
    assert dg.check_condition(A2T, "R2")
    assert dg.check_condition(A1T, "R1")
    assert dg.check_condition(A1T, "R3")
    assert dg.check_condition(A2T, "R2′") == dg.check_condition(A2T, "R2'")
    with pytest.raises(ValueError):
        dg.normalize_condition("R4")


def test_audit_examples():
    assert dg.equivalence_audit(A2T).passed
    assert dg.equivalence_audit(A1T).passed
    cm = dg.random_matrix(5, random.Random(42))
    assert cm.rank == 5
    assert dg.equivalence_audit(cm).passed


def test_random_matrix_entries():
    rng = random.Random(3)
    for _ in range(20):
        cm = dg.random_matrix(4, rng)
        for i in cm.gens:
            for j in cm.gens:
                if i != j:
                    assert cm.order(i, j) in dg.RANDOM_ENTRIES


def test_affine_catalog_satisfies_r2():
    cat = dg.affine_catalog()
    assert {"~A1", "~A2", "~B3", "~C2", "~D4", "~G2", "~F4"} <= set(cat)
    for name, cm in cat.items():
        assert cm.rank <= 5
        assert not cx.is_spherical(cm.gens, cm), name
        assert dg.check_condition(cm, "R2"), name


def test_r3_means_unique_maximal_per_generator():
    rng = random.Random(11)
    hits = 0
    for _ in range(150):
        cm = dg.random_matrix(rng.randint(2, 5), rng)
        lat = dg.spherical_subsets(cm)
        if dg.check_condition(cm, "R3", lat):
            hits += 1
            for j in cm.gens:
                assert sum(1 for K in lat.maximal if j in K) == 1
            # the maximal sets then partition S
            assert sum(len(K) for K in lat.maximal) == cm.rank
    assert hits > 0


def test_set_partitions_count():
    # Bell numbers
    assert [sum(1 for _ in dg.set_partitions(list(range(n)))) for n in range(6)] == [1, 1, 2, 5, 15, 52]

import pytest

from oracles import frozen, null_lattice_diamonds
from posetcoh.poset import is_directed, is_pathwise_connected
from posetcoh.spacetime import (CausalLattice, Cylinder, LatticeError, PunctureError, Strip,
                                all_punctures, check_puncture,
                                generate_diamond_poset, interpolation_lemma_check, puncture)

from conftest import charts, diamonds

FZ = frozen()
FIXTURES = [("cylinder", 4, 2, 2), ("cylinder", 4, 2, 3), ("cylinder", 5, 2, 3),
            ("cylinder", 6, 2, 3), ("strip", 5, 2, 3), ("strip", 5, 2, 5), ("strip", 7, 3, 3)]


def key(args):
    return f"{args[0]}{args[1]}_{args[2]}_{args[3]}"


@pytest.mark.parametrize("args", FIXTURES)
def test_diamonds_match_oracle(args):
    dp = diamonds(*args)
    ref = FZ["lattices"][key(args)]
    assert dp.poset.n == ref["n"]
    assert is_directed(dp.poset) == ref["directed"]
    # a top element has nothing disjoint from it, so property (i) only holds without one
    assert dp.report.ok == (not ref["has_top"])
    _, _, sets, _, _ = null_lattice_diamonds(*args)
    assert sorted(map(sorted, sets)) == sorted(sorted(d.vertices) for d in dp.diamonds)


@pytest.mark.parametrize("args", FIXTURES)
def test_disjointness_matches_oracle(args):
    dp = diamonds(*args)
    _, dis, sets, _, _ = null_lattice_diamonds(*args)
    where = {frozenset(s): k for k, s in enumerate(sets)}
    perm = [where[d.vertices] for d in dp.diamonds]
    for i in range(dp.poset.n):
        for j in range(dp.poset.n):
            assert dp.poset.disjoint[i, j] == dis[perm[i]][perm[j]]


def test_lattice_geometry():
    lat = Cylinder(6, 3)
    assert lat.dist((0, 0), (5, 0)) == 2 and lat.dist((0, 0), (3, 0)) == 6
    assert lat.precedes((0, 0), (0, 1)) and lat.precedes((0, 0), (5, 1))
    assert not lat.precedes((0, 0), (2, 1))
    strip = Strip(6, 3)
    assert strip.dist((0, 0), (5, 0)) == 10
    assert lat.shadow((0, 1), 0) == {0, 1}


def test_bad_lattices():
    with pytest.raises(LatticeError):
        CausalLattice("torus", 4, 2)
    with pytest.raises(LatticeError):
        Cylinder(2, 2)
    with pytest.raises(LatticeError):
        generate_diamond_poset(Cylinder(4, 2), 4)
    with pytest.raises(PunctureError):
        puncture(diamonds("cylinder", 6, 2, 3), (9, 9))


def test_cylinders_not_directed_strip_with_top_is():
    for args in FIXTURES:
        dp = diamonds(*args)
        if args[0] == "cylinder":
            assert not is_directed(dp.poset)
        elif FZ["lattices"][key(args)]["has_top"]:
            assert is_directed(dp.poset)


# ---------------------------------------------------------------- punctures

@pytest.mark.parametrize("x", [(0, 0), (0, 1), (3, 0)])
def test_puncture_flags_match_oracle(x):
    dp = diamonds("cylinder", 6, 2, 3)
    pk = puncture(dp, x)
    ref = FZ["lattices"]["cylinder6_2_3"]["punctures"][f"{x[0]}_{x[1]}"]
    assert len(pk.members) == ref["size"]
    rep = check_puncture(dp, pk)
    for flag in ("connected", "restricted_downsets_connected", "complements_connected",
                 "perp_pairs_connected"):
        assert rep[flag] == ref[flag], flag


def test_puncture_is_sieve_avoiding_cone():
    dp = diamonds("cylinder", 6, 2, 3)
    for pk in all_punctures(dp):
        J = dp.cone(pk.point)
        for i in pk.members:
            assert not (dp.closure(i) & J)
            assert all(j in pk.members for j in range(dp.poset.n) if dp.poset.leq[j, i])
        assert set(pk.sequence) <= set(pk.members)


def test_sequence_runs_towards_the_point():
    dp = diamonds("cylinder", 8, 3, 3)
    lat = dp.lattice
    pk = puncture(dp, (0, 1))

    def d(i):
        return min(lat.dist(v, pk.point) + abs(v[1] - pk.point[1])
                   for v in dp.diamonds[i].vertices)
    ds = [d(i) for i in pk.sequence]
    assert ds == sorted(ds, reverse=True)


def test_covering_punctures():
    for args in (("cylinder", 5, 2, 3), ("cylinder", 6, 2, 3), ("cylinder", 4, 2, 2)):
        cov = charts(*args)
        assert cov is not None
        assert set().union(*(pk.members for pk in cov)) == set(range(diamonds(*args).poset.n))
    assert charts("cylinder", 4, 2, 3) is None


def test_punctures_connected_on_cylinder8():
    dp = diamonds("cylinder", 8, 3, 3)
    for pk in charts("cylinder", 8, 3, 3):
        assert is_pathwise_connected(dp.poset, sorted(pk.members))


# ---------------------------------------------------------------- interpolation

@pytest.mark.parametrize("args", [("cylinder", 8, 3, 3), ("strip", 7, 3, 3)])
def test_interpolation_witnesses(args):
    dp = diamonds(*args)
    p = dp.poset
    res = interpolation_lemma_check(dp)
    witnessed = 0
    for o, v in res.items():
        if v[0] == "witness":
            _, o1, o2 = v
            assert dp.closure(o) <= dp.diamonds[o1].vertices
            assert p.disjoint[o1, o2]
            witnessed += 1
        else:
            # the boundary claim is checked by brute force
            cl = dp.closure(o)
            bigger = [i for i in range(p.n) if cl <= dp.diamonds[i].vertices]
            assert v[1] == "no larger diamond contains the closure" and not bigger \
                or not any(p.disjoint[i].any() for i in bigger)
    assert witnessed >= p.n // 2


def test_interpolation_inside_neighbourhood():
    dp = diamonds("cylinder", 8, 3, 3)
    U = [v for v in dp.lattice.vertices if v[0] < 5]
    res = interpolation_lemma_check(dp, U)
    for o, v in res.items():
        if v[0] == "witness":
            assert dp.closure(v[1]) <= set(U) and dp.closure(v[2]) <= set(U)
    assert any(v[0] == "witness" for v in res.values())

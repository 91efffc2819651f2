import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from oracles import brute_simplices1, frozen
from posetcoh.fixtures import antichain, chain, circle_poset, random_directed_poset
from posetcoh.poset import (Path, Poset, PosetError, Simplex1, causal_complement, compose_paths,
                            count_simplices2, degenerate, enumerate_simplices, find_path,
                            is_directed, is_refinement, is_simplex2, iter_simplices2,
                            reverse_path, transitive_closure, validate_poset)

from conftest import diamonds

FZ = frozen()


# ---------------------------------------------------------------- validation

def test_chain_without_disjointness_fails_property_i():
    rep = validate_poset(chain(3))
    assert not rep.ok and rep.axiom == "property (i)" and rep.witness == (0,)


def test_antichain_with_disjointness_is_valid():
    assert validate_poset(antichain(2)).ok


def test_antisymmetry_violation():
    leq = np.array([[1, 1], [1, 1]], dtype=bool)
    rep = validate_poset(Poset(leq, np.zeros((2, 2), dtype=bool)))
    assert not rep.ok and rep.axiom == "antisymmetry" and rep.witness == (0, 1)


def test_transitivity_and_reflexivity_violations():
    leq = np.eye(3, dtype=bool)
    leq[0, 1] = leq[1, 2] = True
    rep = validate_poset(Poset(leq, np.zeros((3, 3), dtype=bool)), False)
    assert rep.axiom == "transitivity" and rep.witness == (0, 1, 2)
    rep = validate_poset(Poset(np.zeros((2, 2), dtype=bool), np.zeros((2, 2), dtype=bool)))
    assert rep.axiom == "reflexivity"


def test_property_ii_violation_has_witness():
    # 0 <= 1, 1 ⊥ 2 but not 0 ⊥ 2
    leq = np.eye(3, dtype=bool)
    leq[0, 1] = True
    dis = np.zeros((3, 3), dtype=bool)
    dis[1, 2] = dis[2, 1] = True
    rep = validate_poset(Poset(leq, dis), require_disjointness=False)
    assert rep.axiom == "property (ii)" and rep.witness == (0, 1, 2)


def test_disjoint_comparable_rejected():
    leq = np.array([[1, 1], [0, 1]], dtype=bool)
    dis = np.array([[0, 1], [1, 0]], dtype=bool)
    assert validate_poset(Poset(leq, dis)).axiom == "disjoint elements comparable"


def test_shape_mismatch():
    with pytest.raises(PosetError):
        Poset(np.eye(2, dtype=bool), np.eye(3, dtype=bool))


def test_circle_and_diamond_fixtures_valid():
    for n in (3, 4, 5, 6):
        assert validate_poset(circle_poset(n)).ok
    for args in (("cylinder", 4, 2, 2), ("cylinder", 6, 2, 3), ("strip", 5, 2, 3)):
        assert diamonds(*args).report.ok


# ---------------------------------------------------------------- simplices

def test_chain_simplices_dim1_matches_brute_force():
    got = [tuple(b) for b in enumerate_simplices(chain(2), 1)]
    assert got == [tuple(x) for x in FZ["chain2_simplices1"]]
    assert got == [(0, 0, 0), (0, 0, 1), (0, 1, 1), (1, 0, 1), (1, 1, 1)]


def test_singleton_has_only_degenerate_simplex():
    assert enumerate_simplices(chain(1), 1) == [degenerate(0)]


def test_simplices2_count_matches_brute_force():
    for n, key in ((2, "chain2_simplices2_count"), (3, "chain3_simplices2_count")):
        p = chain(n)
        assert len(enumerate_simplices(p, 2)) == FZ[key] == count_simplices2(p)
        assert all(is_simplex2(p, c) for c in iter_simplices2(p))


def test_simplices_on_random_posets_match_brute_force(rng):
    for _ in range(5):
        p = random_directed_poset(7, rng)
        got = sorted(tuple(b) for b in enumerate_simplices(p, 1))
        assert got == brute_simplices1(p.leq.tolist())


# ---------------------------------------------------------------- paths

def test_compose_lengths_and_degenerate_not_normalised():
    p = Path([Simplex1(0, 1, 1)])
    q = Path([Simplex1(1, 2, 2)])
    assert len(compose_paths(q, p)) == 2
    assert compose_paths(q, p).start == 0 and compose_paths(q, p).end == 2
    assert len(compose_paths(p, Path([degenerate(0)]))) == 2


def test_compose_mismatch():
    with pytest.raises(PosetError):
        compose_paths(Path([Simplex1(0, 1, 1)]), Path([Simplex1(0, 1, 1)]))


def test_reverse_examples():
    assert reverse_path(Path([(0, 1, 2)])) == Path([(1, 0, 2)])
    assert reverse_path(Path([degenerate(3)])) == Path([degenerate(3)])


def _random_path(p, rng, length):
    a = int(rng.integers(p.n))
    steps = []
    for _ in range(length):
        ups = np.flatnonzero(p.leq[a])
        s = int(rng.choice(ups))
        b = int(rng.choice(np.flatnonzero(p.leq[:, s])))
        steps.append(Simplex1(a, b, s))
        a = b
    return Path(steps)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10**6), st.integers(1, 8))
def test_reverse_involution_and_associativity(seed, length):
    rng = np.random.default_rng(seed)
    p = circle_poset(5)
    x = _random_path(p, rng, length)
    assert reverse_path(reverse_path(x)) == x
    y = Path([Simplex1(x.end, x.end, x.end)])
    z = Path([Simplex1(x.end, x.end, x.end), Simplex1(x.end, x.end, x.end)])
    assert compose_paths(z, compose_paths(y, x)) == compose_paths(compose_paths(z, y), x)


def test_find_path_respects_bound():
    p = circle_poset(4)
    q = find_path(p, 0, 1, bound=4)
    assert q.start == 0 and q.end == 1 and all(p.leq[b.support, 4] for b in q)
    assert find_path(p, 0, 2, bound=4) is None


# ---------------------------------------------------------------- directedness

def test_directedness():
    assert is_directed(chain(3))
    assert not is_directed(circle_poset(4)) and not FZ["circle4_directed"]
    assert not is_directed(antichain(2))


def test_directed_random_posets(rng):
    for _ in range(10):
        assert is_directed(random_directed_poset(9, rng))


# ---------------------------------------------------------------- refinement

def test_refinement_examples():
    p = diamonds("cylinder", 6, 2, 3).poset
    assert is_refinement(range(p.n), p, True).ok
    dp = diamonds("cylinder", 6, 2, 3)
    small = dp.by_base(2)
    assert is_refinement(small, p, True).ok
    # dropping every minimal element below the first base-1 diamond
    o = dp.by_base(1)[0]
    sub = [i for i in range(p.n) if not p.leq[i, o]]
    rep = is_refinement(sub, p)
    assert not rep.ok and rep.witness == (o,)


def test_refinement_rejects_foreign_elements():
    with pytest.raises(PosetError):
        is_refinement([0, 99], chain(2))


# ---------------------------------------------------------------- complements

def test_causal_complement_examples():
    assert causal_complement(antichain(2), 0) == {1}
    p = circle_poset(5)
    assert sorted(causal_complement(p, 6)) == FZ["circle5_arc1_complement"]
    # the neighbouring arcs 5 and 7 overlap arc 6
    assert 5 not in causal_complement(p, 6) and 7 not in causal_complement(p, 6)


def test_complements_are_sieves_on_fixtures():
    for p in (circle_poset(5), diamonds("cylinder", 6, 2, 3).poset):
        for t in range(p.n):
            c = causal_complement(p, t)
            for i in c:
                assert set(np.flatnonzero(p.leq[:, i])) <= set(c)


def test_transitive_closure():
    leq = np.eye(3, dtype=bool)
    leq[0, 1] = leq[1, 2] = True
    assert transitive_closure(leq)[0, 2]

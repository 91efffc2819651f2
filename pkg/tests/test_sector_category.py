import functools

import numpy as np
import pytest

from posetcoh.fixtures import (circle_poset, circle_punctures, circle_qubit_net, random_coboundary)
from posetcoh.nets import (Cocycle, IncompleteCover, Intertwiner, LocalNet, NetError,
                           check_cocycle, check_path_independence, find_intertwiner,
                           trivial_cocycle, winding_cocycle)
from posetcoh.sectors import (NotSimple, Sectors, conjugate, left_inverse, localized_endomorphism,
                              statistics, symmetry, tensor, verify_category_axioms)

from conftest import charts, diamonds

TOL = 1e-9


@functools.lru_cache(maxsize=None)
def scalar_cylinder():
    p = diamonds("cylinder", 6, 2, 3).poset
    return p, Sectors(p, LocalNet.full(1, p.n), charts("cylinder", 6, 2, 3))


@functools.lru_cache(maxsize=None)
def qubit_circle():
    p = circle_poset(4)
    net = circle_qubit_net(4)
    S = Sectors(p, net, circle_punctures(4))
    rng = np.random.default_rng(7)
    z, _ = random_coboundary(p, net, rng)
    z.name = "z"
    z1, _ = random_coboundary(p, net, rng)
    z1.name = "z1"
    return p, net, S, z, z1


def w(p, theta, name=None):
    z = winding_cocycle(p, theta)
    z.name = name or f"w{theta:.3f}"
    return z


# ---------------------------------------------------------------- localized morphisms

def test_y_of_iota_and_scalars_is_identity():
    p, net, S, z, _ = qubit_circle()
    ch = S.charts[0]
    a = ch.members[0]
    A = net.algebras[ch.members[-1]].generators()[0]
    y = localized_endomorphism(trivial_cocycle(p, net.d), a, ch)
    assert np.allclose(y(A, [ch.members[-1]]), A)
    ps, Ss = scalar_cylinder()
    ys = localized_endomorphism(w(ps, 0.4), Ss.charts[0].members[0], Ss.charts[0])
    assert np.allclose(ys(np.eye(1), [Ss.charts[0].members[0]]), np.eye(1))


def test_y_fixes_disjoint_algebras():
    p, net, S, z, _ = qubit_circle()
    for ch in S.charts:
        for a in ch.members:
            y = localized_endomorphism(z, a, ch)
            assert y.localization() <= TOL
            assert y.well_definedness() <= TOL


def test_chart_refuses_net_without_duality():
    p = circle_poset(4)
    with pytest.raises(NetError):
        Sectors(p, LocalNet.full(2, p.n), circle_punctures(4))


# ---------------------------------------------------------------- tensor

def test_unit_and_u1_products():
    p, S = scalar_cylinder()
    iota = trivial_cocycle(p)
    a, b = w(p, np.pi / 3), w(p, 0.7)
    assert S.tensor(iota, a).distance(a) <= TOL
    assert tensor(a, b, S).distance(winding_cocycle(p, np.pi / 3 + 0.7)) <= 1e-10
    assert check_cocycle(S.tensor(a, b)).ok


def test_tensor_of_coboundaries_is_path_independent():
    p, net, S, z, z1 = qubit_circle()
    T = S.tensor(z, z1)
    assert check_cocycle(T, net).ok
    assert check_path_independence(T).ok


def test_tensor_needs_cover():
    p = diamonds("cylinder", 6, 2, 3).poset
    S = Sectors(p, LocalNet.full(1, p.n), charts("cylinder", 6, 2, 3)[:1])
    assert S.missing
    with pytest.raises(IncompleteCover):
        S.tensor(trivial_cocycle(p), trivial_cocycle(p))


# ---------------------------------------------------------------- symmetry

def test_symmetry_unit_and_involution():
    p, net, S, z, z1 = qubit_circle()
    iota = trivial_cocycle(p, net.d)
    e = S.symmetry(iota, z)
    assert max(np.abs(e[a] - np.eye(net.d)).max() for a in e.entries) <= TOL
    e12, e21 = S.symmetry(z, z1), S.symmetry(z1, z)
    assert max(np.abs(e21[a] @ e12[a] - np.eye(net.d)).max() for a in e12.entries) <= TOL
    assert e12.defect()[0] <= TOL


def test_u1_symmetry_is_trivial():
    p, S = scalar_cylinder()
    entry, table = symmetry(w(p, 0.3), w(p, 1.2), 0, S)
    assert abs(entry[0, 0] - 1) <= TOL
    assert all(abs(table[a][0, 0] - 1) <= TOL for a in table.entries)


# ---------------------------------------------------------------- left inverse

def test_left_inverse_of_iota_and_scalar():
    p, S = scalar_cylinder()
    iota = trivial_cocycle(p)
    t = Intertwiner(iota, iota, {a: np.full((1, 1), 0.5 + 0.25j) for a in range(p.n)})
    phi = left_inverse(iota, t, S)
    assert all(abs(phi[a][0, 0] - (0.5 + 0.25j)) <= TOL for a in range(p.n))
    z = w(p, 0.9)
    phi = left_inverse(z, t, S)
    assert all(abs(phi[a][0, 0] - (0.5 + 0.25j)) <= TOL for a in range(p.n))


def test_left_inverse_normalised():
    p, net, S, z, _ = qubit_circle()
    one = Intertwiner(z, z, {a: np.eye(net.d) for a in range(p.n)})
    phi = S.left_inverse(z, one)
    assert max(np.abs(phi[a] - np.eye(net.d)).max() for a in phi) <= TOL


# ---------------------------------------------------------------- statistics

def test_statistics_iota_and_winding():
    p, S = scalar_cylinder()
    for z in (trivial_cocycle(p), w(p, 1.1)):
        st = statistics(z, S)
        assert st.simple and st.phase == 1 and st.dimension == 1
        assert abs(st.parameter - 1) <= 1e-9


def test_statistics_coboundary_and_exchange_identity():
    p, net, S, z, _ = qubit_circle()
    st = S.statistics(z)
    assert st.simple and st.phase == 1 and st.dimension == 1
    # chi z(b) = y^z(d1 b)(z(b)) when the faces of b are disjoint
    loc = S.local[0]
    ch = S.charts[0]
    checked = 0
    for b in ch.simplices():
        if p.disjoint[b.d1, b.d0]:
            lhs = st.phase * z(b)
            rhs = loc.y(z, b.d1)(z(b), [b.support])
            assert np.abs(lhs - rhs).max() <= TOL
            checked += 1
    assert checked > 0


# ---------------------------------------------------------------- conjugates

def test_conjugates():
    p, S = scalar_cylinder()
    iota = trivial_cocycle(p)
    assert conjugate(iota, S).distance(iota) <= TOL
    z = w(p, np.pi / 3)
    zb = S.conjugate(z)
    assert zb.distance(winding_cocycle(p, -np.pi / 3)) <= 1e-10
    for T in (S.tensor(z, zb), S.tensor(zb, z)):
        assert max(abs(u[0, 0] - 1) for u in T.entries.values()) <= 1e-10


def test_double_conjugate_equivalent():
    p, net, S, z, _ = qubit_circle()
    zbb = S.conjugate(S.conjugate(z))
    assert find_intertwiner(zbb, z, net) is not None


def test_conjugate_refuses_non_simple(monkeypatch):
    p, S = scalar_cylinder()
    from posetcoh.sectors import StatisticsReport
    monkeypatch.setattr(S, "statistics", lambda z, window=3: StatisticsReport(False))
    with pytest.raises(NotSimple):
        S.conjugate(trivial_cocycle(p))


# ---------------------------------------------------------------- axioms

def test_axioms_trivial_battery():
    p, S = scalar_cylinder()
    rep = verify_category_axioms(S, [trivial_cocycle(p)])
    assert rep.ok, rep.failures()
    assert [r.check for r in rep] == sorted(r.check for r in rep)


def test_axioms_u1_battery():
    p, S = scalar_cylinder()
    battery = [trivial_cocycle(p), w(p, np.pi / 3), w(p, 0.7), w(p, -2.0)]
    rep = verify_category_axioms(S, battery)
    assert rep.ok, rep.failures()
    assert max(r.value for r in rep) <= TOL


def test_axioms_qubit_coboundaries():
    p, net, S, z, z1 = qubit_circle()
    rep = verify_category_axioms(S, [trivial_cocycle(p, net.d), z, z1])
    assert rep.ok, rep.failures()


def test_axioms_detect_corrupted_tensor():
    p, S = scalar_cylinder()
    battery = [trivial_cocycle(p), w(p, 0.4)]

    def bad_tensor(a, b):
        t = S.tensor(a, b)
        ent = dict(t.entries)
        key = sorted(k for k in ent if not k.is_degenerate)[0]
        ent[key] = ent[key] * np.exp(0.5j)
        return Cocycle(p, ent, t.d, None, t.name)
    rep = verify_category_axioms(S, battery, tensor_fn=bad_tensor)
    row = rep.row("tensor.functoriality")
    assert not row.ok and row.witness is not None

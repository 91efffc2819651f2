import json

import numpy as np
import pytest

from posetcoh import jsonio as jio
from posetcoh.fixtures import circle_poset, circle_punctures, circle_qubit_net, random_coboundary
from posetcoh.nets import LocalNet, find_intertwiner, winding_cocycle
from posetcoh.poset import Path, Simplex1, degenerate

from conftest import diamonds


def through_text(obj):
    return json.loads(jio.dumps(obj))


def test_poset_round_trip():
    for p in (circle_poset(5), diamonds("cylinder", 6, 2, 3).poset):
        q = jio.poset_from_json(through_text(jio.poset_to_json(p)))
        assert np.array_equal(p.leq, q.leq) and np.array_equal(p.disjoint, q.disjoint)
        assert list(p.labels) == list(q.labels)


def test_poset_transitive_closure_opt_in():
    obj = {"n": 3, "leq": [[0, 1], [1, 2]]}
    with pytest.raises(jio.FormatError) as e:
        jio.poset_from_json(obj, "x.json")
    assert str(e.value).startswith("x.json")
    p = jio.poset_from_json(dict(obj, transitive_closure=True))
    assert p.leq[0, 2]


def test_path_round_trip_and_checks():
    p = circle_poset(4)
    q = Path([Simplex1(0, 1, 4), Simplex1(1, 2, 5), degenerate(2)])
    assert jio.path_from_json(through_text(jio.path_to_json(q)), p=p) == q
    with pytest.raises(jio.FormatError):
        jio.path_from_json([[0, 2, 4]], p=p)          # 2 is not below 4
    with pytest.raises(jio.FormatError):
        jio.path_from_json([[0, 1, 4], [0, 1, 4]], p=p)  # not composable


def test_matrix_round_trip():
    m = np.array([[1 + 2j, 0.5], [-1j, 3]])
    assert np.array_equal(jio.matrix_from_json(through_text(jio.matrix_to_json(m)), "m"), m)
    with pytest.raises(jio.FormatError):
        jio.matrix_from_json([[[1, 0]], [[1, 0], [0, 0]]], "m")


def test_net_round_trip():
    p = circle_poset(4)
    net = circle_qubit_net(4)
    back = jio.net_from_json(through_text(jio.net_to_json(net)), p.n)
    assert jio.nets_equal(net, back, 1e-12)
    full = LocalNet.full(2, p.n)
    assert jio.nets_equal(full, jio.net_from_json(through_text(jio.net_to_json(full)), p.n))


def test_cocycle_and_intertwiner_round_trip(rng):
    p = circle_poset(4)
    net = circle_qubit_net(4)
    z, _ = random_coboundary(p, net, rng)
    z.name = "z"
    back = jio.cocycle_from_json(through_text(jio.cocycle_to_json(z)), p)
    assert back.distance(z) == 0 and back.name == "z"
    t = find_intertwiner(z, z, net)
    tb = jio.intertwiner_from_json(through_text(jio.intertwiner_to_json(t)), z, z)
    assert all(np.array_equal(t[a], tb[a]) for a in range(p.n))


def test_cocycle_duplicate_rejected():
    p = circle_poset(4)
    obj = jio.cocycle_to_json(winding_cocycle(p, 0.3))
    obj["entries"].append(obj["entries"][0])
    with pytest.raises(jio.FormatError):
        jio.cocycle_from_json(obj, p)


def test_punctures_round_trip():
    p = circle_poset(5)
    pks = circle_punctures(5)
    back = jio.punctures_from_json(through_text(jio.punctures_to_json(pks)), p)
    assert [(q.id, set(q.members), q.sequence) for q in back] == \
        [(q.id, set(q.members), q.sequence) for q in pks]
    bad = jio.punctures_to_json(pks)
    bad["punctures"][0]["members"] = bad["punctures"][0]["members"][1:]
    with pytest.raises(jio.FormatError):
        jio.punctures_from_json(bad, p)


def test_dumps_sorted_and_stable():
    p = diamonds("cylinder", 6, 2, 3)
    a = jio.dumps(jio.diamonds_to_json(p))
    assert a == jio.dumps(json.loads(a))
    assert json.loads(a)["lattice"]["kind"] == "cylinder"


def test_load_file_reports_position(tmp_path):
    f = tmp_path / "x.json"
    f.write_text('{"n": 2,\n  oops}')
    with pytest.raises(jio.FormatError) as e:
        jio.load_file(f)
    assert ":2:" in str(e.value)

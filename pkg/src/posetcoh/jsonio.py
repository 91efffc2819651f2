"""JSON encodings of posets, paths, nets, cocycles, intertwiners and punctures.

Matrices are row-major nested lists of [re, im] pairs. Floats go through
repr, so a dump followed by a load reproduces every entry bit for bit.
"""

import json

import numpy as np

from .nets import Cocycle, Intertwiner, LocalNet
from .poset import Path, Poset, PosetError, Simplex1, Sieve, check_order, transitive_closure
from .spacetime import Puncture


class FormatError(ValueError):
    """Malformed input; the message starts with the location of the problem."""

    def __init__(self, where, msg):
        super().__init__(f"{where}: {msg}")
        self.where = where


def dumps(obj):
    return json.dumps(obj, sort_keys=True)


def load_file(path):
    try:
        with open(path) as fh:
            return json.load(fh)
    except json.JSONDecodeError as e:
        raise FormatError(f"{path}:{e.lineno}:{e.colno}", e.msg) from None
    except OSError as e:
        raise FormatError(str(path), e.strerror or str(e)) from None


def _int(x, where):
    if isinstance(x, bool) or not isinstance(x, int):
        raise FormatError(where, f"expected an integer, got {x!r}")
    return x


def _pairs(items, n, where):
    out = []
    if not isinstance(items, list):
        raise FormatError(where, "expected a list of pairs")
    for k, pr in enumerate(items):
        if not isinstance(pr, list) or len(pr) != 2:
            raise FormatError(f"{where}[{k}]", "expected a pair [i, j]")
        i, j = (_int(v, f"{where}[{k}]") for v in pr)
        if not (0 <= i < n and 0 <= j < n):
            raise FormatError(f"{where}[{k}]", f"element out of range 0..{n - 1}")
        out.append((i, j))
    return out


# ------------------------------------------------------------------ posets

def poset_to_json(p):
    n = p.n
    out = {"n": n,
           "leq": [[int(i), int(j)] for i, j in np.argwhere(p.leq) if i != j],
           "disjoint": [[int(i), int(j)] for i, j in np.argwhere(p.disjoint)]}
    if p.labels is not None:
        out["labels"] = list(p.labels)
    return out


def poset_from_json(obj, where="poset"):
    if not isinstance(obj, dict):
        raise FormatError(where, "expected an object")
    if "n" not in obj:
        raise FormatError(where, "missing field 'n'")
    n = _int(obj["n"], f"{where}.n")
    if n < 1:
        raise FormatError(f"{where}.n", "a poset needs at least one element")
    leq = np.eye(n, dtype=bool)
    for i, j in _pairs(obj.get("leq", []), n, f"{where}.leq"):
        leq[i, j] = True
    if obj.get("transitive_closure", False):
        leq = transitive_closure(leq)
    else:
        closed = transitive_closure(leq)
        if not np.array_equal(closed, leq):
            i, j = np.argwhere(closed & ~leq)[0]
            raise FormatError(f"{where}.leq", f"not transitive: missing ({i}, {j}); "
                              "set \"transitive_closure\": true to close it")
    bad = check_order(leq)
    if bad is not None:
        raise FormatError(f"{where}.leq", f"{bad.axiom} fails at {bad.witness}")
    dis = np.zeros((n, n), dtype=bool)
    for i, j in _pairs(obj.get("disjoint", []), n, f"{where}.disjoint"):
        dis[i, j] = True
    labels = obj.get("labels")
    try:
        return Poset(leq, dis, labels)
    except PosetError as e:
        raise FormatError(where, str(e)) from None


# ------------------------------------------------------------------ paths

def simplex_from_json(t, where):
    if not isinstance(t, list) or len(t) != 3:
        raise FormatError(where, "expected a triple [d1, d0, support]")
    return Simplex1(*(_int(v, where) for v in t))


def path_to_json(path):
    return [[b.d1, b.d0, b.support] for b in path]


def path_from_json(obj, where="path", p=None):
    if not isinstance(obj, list) or not obj:
        raise FormatError(where, "expected a non-empty list of triples")
    items = [simplex_from_json(t, f"{where}[{k}]") for k, t in enumerate(obj)]
    if p is not None:
        for k, b in enumerate(items):
            if max(b) >= p.n or min(b) < 0:
                raise FormatError(f"{where}[{k}]", "element out of range")
            if not (p.leq[b.d1, b.support] and p.leq[b.d0, b.support]):
                raise FormatError(f"{where}[{k}]", "faces are not below the support")
    try:
        return Path(items)
    except PosetError as e:
        raise FormatError(where, str(e)) from None


def paths_from_json(obj, p=None, where="paths"):
    """Either a bare list of paths or {"paths": [...]}."""
    if isinstance(obj, dict):
        if "paths" not in obj:
            raise FormatError(where, "missing field 'paths'")
        obj = obj["paths"]
    if not isinstance(obj, list):
        raise FormatError(where, "expected a list of paths")
    return [path_from_json(x, f"{where}[{k}]", p) for k, x in enumerate(obj)]


# ------------------------------------------------------------------ matrices

def matrix_to_json(m):
    m = np.asarray(m, dtype=complex)
    return [[[float(x.real), float(x.imag)] for x in row] for row in m]


def matrix_from_json(obj, where, d=None):
    try:
        a = np.array(obj, dtype=float)
    except (TypeError, ValueError):
        raise FormatError(where, "expected a matrix of [re, im] pairs") from None
    if a.ndim != 3 or a.shape[2] != 2 or a.shape[0] != a.shape[1]:
        raise FormatError(where, f"expected a square matrix of [re, im] pairs, got shape {a.shape}")
    if d is not None and a.shape[0] != d:
        raise FormatError(where, f"matrix is {a.shape[0]}x{a.shape[0]}, expected {d}x{d}")
    return a[..., 0] + 1j * a[..., 1]


# ------------------------------------------------------------------ nets

def net_to_json(net):
    out = {"d": net.d, "mode": net.mode}
    if net.mode != "full":
        out["algebras"] = {str(a): [matrix_to_json(m) for m in alg.generators()]
                           for a, alg in enumerate(net.algebras)}
    return out


def net_from_json(obj, n, where="net"):
    if not isinstance(obj, dict) or "d" not in obj:
        raise FormatError(where, "expected an object with field 'd'")
    d = _int(obj["d"], f"{where}.d")
    mode = obj.get("mode", "subalgebra")
    if mode == "full":
        return LocalNet.full(d, n)
    if mode != "subalgebra":
        raise FormatError(f"{where}.mode", f"unknown mode {mode!r}")
    algs = obj.get("algebras")
    if not isinstance(algs, dict):
        raise FormatError(f"{where}.algebras", "expected an object keyed by element")
    gens = []
    for a in range(n):
        key = str(a)
        if key not in algs:
            raise FormatError(f"{where}.algebras", f"no entry for element {a}")
        gens.append([matrix_from_json(m, f"{where}.algebras.{key}[{k}]", d)
                     for k, m in enumerate(algs[key])])
    extra = set(algs) - {str(a) for a in range(n)}
    if extra:
        raise FormatError(f"{where}.algebras", f"unknown element {sorted(extra)[0]!r}")
    return LocalNet.from_generators(d, gens)


def nets_equal(n1, n2, tol=0.0):
    if n1.d != n2.d or len(n1.algebras) != len(n2.algebras):
        return False
    return all(a.dim == b.dim and a.includes(b) <= tol + 1e-12 and b.includes(a) <= tol + 1e-12
               for a, b in zip(n1.algebras, n2.algebras))


# ------------------------------------------------------------------ cocycles

def cocycle_to_json(z):
    out = {"d": z.d,
           "entries": [{"b": list(b), "u": matrix_to_json(z.entries[b])} for b in z.simplices()]}
    if z.name:
        out["name"] = z.name
    if z.members != frozenset(range(z.p.n)):
        out["members"] = sorted(z.members)
    return out


def cocycle_from_json(obj, p, where="cocycle"):
    if not isinstance(obj, dict) or "entries" not in obj:
        raise FormatError(where, "expected an object with field 'entries'")
    d = obj.get("d")
    entries = {}
    for k, e in enumerate(obj["entries"]):
        w = f"{where}.entries[{k}]"
        if not isinstance(e, dict) or "b" not in e or "u" not in e:
            raise FormatError(w, "expected {\"b\": [d1, d0, support], \"u\": matrix}")
        b = simplex_from_json(e["b"], f"{w}.b")
        if max(b) >= p.n or min(b) < 0:
            raise FormatError(f"{w}.b", "element out of range")
        u = matrix_from_json(e["u"], f"{w}.u", d)
        d = u.shape[0] if d is None else d
        if b in entries:
            raise FormatError(f"{w}.b", f"duplicate simplex {list(b)}")
        entries[b] = u
    return Cocycle(p, entries, d if d is not None else 1, obj.get("members"), obj.get("name", ""))


def intertwiner_to_json(t):
    return {"entries": [{"a": a, "t": matrix_to_json(t.entries[a])} for a in sorted(t.entries)]}


def intertwiner_from_json(obj, source, target, where="arrow"):
    if not isinstance(obj, dict) or "entries" not in obj:
        raise FormatError(where, "expected an object with field 'entries'")
    entries = {}
    for k, e in enumerate(obj["entries"]):
        w = f"{where}.entries[{k}]"
        entries[_int(e.get("a"), f"{w}.a")] = matrix_from_json(e.get("t"), f"{w}.t", source.d)
    return Intertwiner(source, target, entries)


# ------------------------------------------------------------------ punctures

def punctures_to_json(pks):
    out = []
    for pk in pks:
        item = {"id": pk.id, "members": sorted(pk.members), "sequence": list(pk.sequence)}
        if pk.point is not None:
            item["point"] = list(pk.point)
        out.append(item)
    return {"punctures": out}


def punctures_from_json(obj, p, where="punctures"):
    if isinstance(obj, dict):
        obj = obj.get("punctures")
    if not isinstance(obj, list):
        raise FormatError(where, "expected {\"punctures\": [...]}")
    out = []
    for k, item in enumerate(obj):
        w = f"{where}[{k}]"
        if not isinstance(item, dict) or "members" not in item:
            raise FormatError(w, "expected an object with 'members'")
        members = [_int(m, f"{w}.members") for m in item["members"]]
        seq = [_int(m, f"{w}.sequence") for m in item.get("sequence", [])]
        if any(m < 0 or m >= p.n for m in members):
            raise FormatError(f"{w}.members", "element out of range")
        if any(s not in members for s in seq):
            raise FormatError(f"{w}.sequence", "sequence leaves the puncture")
        try:
            sieve = Sieve.checked(p, members)
        except PosetError as e:
            raise FormatError(f"{w}.members", str(e)) from None
        point = item.get("point")
        out.append(Puncture(str(item.get("id", k)), tuple(point) if point is not None else None,
                            sieve, tuple(seq)))
    return out


def diamonds_to_json(dp):
    lat = dp.lattice
    return {"lattice": {"kind": lat.kind, "size": lat.size, "T": lat.T},
            "diamonds": {str(i): d.to_json() for i, d in enumerate(dp.diamonds)}}

"""Finite posets with a causal disjointness relation, their low simplices and paths."""

from collections import deque
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np


class PosetError(ValueError):
    pass


class Simplex1(NamedTuple):
    """A 1-simplex: start face d1, end face d0, support."""
    d1: int
    d0: int
    support: int

    def reversed(self):
        return Simplex1(self.d0, self.d1, self.support)

    @property
    def is_degenerate(self):
        return self.d1 == self.d0 == self.support


class Simplex2(NamedTuple):
    f0: Simplex1
    f1: Simplex1
    f2: Simplex1
    support: int

    @property
    def vertices(self):
        return (self.f2.d1, self.f2.d0, self.f0.d0)


def degenerate(a):
    return Simplex1(a, a, a)


class Path(tuple):
    """Composable sequence of 1-simplices, stored in traversal order.

    path[0] is the first simplex walked (b_1), path[-1] the last (b_n).
    """

    def __new__(cls, simplices):
        items = tuple(Simplex1(*b) for b in simplices)
        if not items:
            raise PosetError("a path needs at least one simplex")
        for k in range(len(items) - 1):
            if items[k].d0 != items[k + 1].d1:
                raise PosetError(f"path breaks between positions {k} and {k + 1}")
        return super().__new__(cls, items)

    @property
    def start(self):
        return self[0].d1

    @property
    def end(self):
        return self[-1].d0

    @property
    def is_closed(self):
        return self.start == self.end

    def supports(self):
        return [b.support for b in self]

    def __repr__(self):
        return "Path(" + ", ".join(f"({b.d1},{b.d0},{b.support})" for b in self) + ")"


def compose_paths(q, p):
    """q*p: walk p first, then q."""
    if p.end != q.start:
        raise PosetError(f"cannot compose: p ends at {p.end}, q starts at {q.start}")
    return Path(tuple(p) + tuple(q))


def reverse_path(p):
    return Path(b.reversed() for b in reversed(p))


class Sieve(frozenset):
    """Downward closed set of elements."""

    @classmethod
    def checked(cls, poset, members):
        s = cls(int(m) for m in members)
        for i in s:
            below = np.flatnonzero(poset.leq[:, i])
            missing = [int(j) for j in below if j not in s]
            if missing:
                raise PosetError(f"not downward closed: {missing[0]} <= {i} missing")
        return s


def _frozen(a):
    a = np.array(a, dtype=bool)
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Poset:
    leq: np.ndarray
    disjoint: np.ndarray
    labels: tuple = None

    def __post_init__(self):
        leq = _frozen(self.leq)
        dis = _frozen(self.disjoint)
        if leq.ndim != 2 or leq.shape[0] != leq.shape[1] or dis.shape != leq.shape:
            raise PosetError("order and disjointness matrices must be square and equal size")
        object.__setattr__(self, "leq", leq)
        object.__setattr__(self, "disjoint", dis)
        if self.labels is not None:
            labels = tuple(str(x) for x in self.labels)
            if len(labels) != leq.shape[0]:
                raise PosetError("label count does not match element count")
            object.__setattr__(self, "labels", labels)

    @property
    def n(self):
        return self.leq.shape[0]

    def __eq__(self, other):
        return (isinstance(other, Poset) and self.n == other.n
                and np.array_equal(self.leq, other.leq)
                and np.array_equal(self.disjoint, other.disjoint)
                and self.labels == other.labels)

    def __hash__(self):
        return hash((self.n, self.leq.tobytes(), self.disjoint.tobytes()))

    @classmethod
    def from_relations(cls, n, leq_pairs=(), disjoint_pairs=(), labels=None, close=True):
        leq = np.eye(n, dtype=bool)
        for i, j in leq_pairs:
            leq[i, j] = True
        if close:
            leq = transitive_closure(leq)
        dis = np.zeros((n, n), dtype=bool)
        for i, j in disjoint_pairs:
            dis[i, j] = dis[j, i] = True
        return cls(leq, dis, labels)

    def down(self, a):
        return np.flatnonzero(self.leq[:, a])

    def up(self, a):
        return np.flatnonzero(self.leq[a, :])

    def le(self, i, j):
        return bool(self.leq[i, j])

    def is_simplex(self, b):
        return bool(self.leq[b.d1, b.support] and self.leq[b.d0, b.support])

    def subposet(self, members):
        idx = np.array(sorted(members), dtype=int)
        lab = None if self.labels is None else [self.labels[i] for i in idx]
        return Poset(self.leq[np.ix_(idx, idx)], self.disjoint[np.ix_(idx, idx)], lab), idx


def transitive_closure(leq):
    r = np.array(leq, dtype=bool) | np.eye(len(leq), dtype=bool)
    # repeated squaring over the boolean semiring
    while True:
        nxt = (r.astype(np.int64) @ r.astype(np.int64)) > 0
        if np.array_equal(nxt, r):
            return r
        r = nxt


class ValidationReport(NamedTuple):
    ok: bool
    axiom: str = ""
    witness: tuple = ()

    def __bool__(self):
        return self.ok


def check_order(leq):
    """First violated partial-order axiom, or None."""
    n = leq.shape[0]
    for i in range(n):
        if not leq[i, i]:
            return ValidationReport(False, "reflexivity", (i,))
    both = leq & leq.T
    np.fill_diagonal(both, False)
    if both.any():
        i, j = np.argwhere(both)[0]
        return ValidationReport(False, "antisymmetry", (int(i), int(j)))
    # leq[i,j] and leq[j,k] but not leq[i,k]
    two = (leq.astype(np.int64) @ leq.astype(np.int64)) > 0
    bad = two & ~leq
    if bad.any():
        i, k = np.argwhere(bad)[0]
        j = int(np.flatnonzero(leq[i] & leq[:, k])[0])
        return ValidationReport(False, "transitivity", (int(i), j, int(k)))
    return None


def validate_poset(p, require_disjointness=True):
    bad = check_order(p.leq)
    if bad is not None:
        return bad
    dis = p.disjoint
    asym = dis & ~dis.T
    if asym.any():
        i, j = np.argwhere(asym)[0]
        return ValidationReport(False, "disjointness symmetry", (int(i), int(j)))
    both = dis & (p.leq | p.leq.T)
    if both.any():
        i, j = np.argwhere(both)[0]
        return ValidationReport(False, "disjoint elements comparable", (int(i), int(j)))
    if require_disjointness:
        lonely = np.flatnonzero(~dis.any(axis=1))
        if lonely.size:
            return ValidationReport(False, "property (i)", (int(lonely[0]),))
    # i <= j and j ⊥ k must give i ⊥ k
    forced = (p.leq.astype(np.int64) @ dis.astype(np.int64)) > 0
    bad = forced & ~dis
    if bad.any():
        i, k = np.argwhere(bad)[0]
        j = int(np.flatnonzero(p.leq[i] & dis[:, k])[0])
        return ValidationReport(False, "property (ii)", (int(i), j, int(k)))
    return ValidationReport(True)


def iter_simplices1(p, members=None):
    """1-simplices with support (hence faces) inside members, lexicographic."""
    allowed = None if members is None else set(int(m) for m in members)
    n = p.n
    for d1 in range(n):
        if allowed is not None and d1 not in allowed:
            continue
        ups = p.leq[d1]
        for d0 in range(n):
            if allowed is not None and d0 not in allowed:
                continue
            common = np.flatnonzero(ups & p.leq[d0])
            for s in common:
                if allowed is None or int(s) in allowed:
                    yield Simplex1(d1, d0, int(s))


def iter_simplices2(p, support=None):
    """All 2-simplices, grouped by support (unsorted inside a group)."""
    supports = range(p.n) if support is None else [support]
    for s in supports:
        down = [int(a) for a in p.down(s)]
        ub = {}
        for u in down:
            for v in down:
                ub[u, v] = [int(e) for e in down if p.leq[u, e] and p.leq[v, e]]
        for v0 in down:
            for v1 in down:
                for e01 in ub[v0, v1]:
                    f2 = Simplex1(v0, v1, e01)
                    for v2 in down:
                        for e12 in ub[v1, v2]:
                            f0 = Simplex1(v1, v2, e12)
                            for e02 in ub[v0, v2]:
                                yield Simplex2(f0, Simplex1(v0, v2, e02), f2, s)


def count_simplices2(p):
    total = 0
    L = p.leq.astype(np.int64)
    for s in range(p.n):
        d = p.down(s)
        sub = L[np.ix_(d, d)]
        m = sub @ sub.T  # common upper bounds inside the down-set
        total += int(np.sum(m * (m @ m)))
    return total


def enumerate_simplices(p, dim):
    if dim == 1:
        return list(iter_simplices1(p))
    if dim == 2:
        return sorted(iter_simplices2(p))
    raise PosetError("only dimensions 1 and 2 are modelled")


def is_simplex2(p, c):
    f0, f1, f2 = c.f0, c.f1, c.f2
    if not (f0.d0 == f1.d0 and f0.d1 == f2.d0 and f1.d1 == f2.d1):
        return False
    return all(p.is_simplex(f) and p.leq[f.support, c.support] for f in (f0, f1, f2))


def is_directed(p):
    L = p.leq.astype(np.int64)
    return bool(((L @ L.T) > 0).all())


def top_element(p):
    tops = np.flatnonzero(p.leq.all(axis=0))
    return int(tops[0]) if tops.size else None


def components(p, members=None):
    """Path components of the subposet on members (comparability graph)."""
    elems = list(range(p.n)) if members is None else sorted(int(m) for m in members)
    inside = np.zeros(p.n, dtype=bool)
    inside[elems] = True
    comp = {}
    adj = (p.leq | p.leq.T) & inside[None, :] & inside[:, None]
    for a in elems:
        if a in comp:
            continue
        comp[a] = a
        todo = deque([a])
        while todo:
            u = todo.popleft()
            for v in np.flatnonzero(adj[u]):
                v = int(v)
                if v not in comp:
                    comp[v] = a
                    todo.append(v)
    groups = {}
    for a in elems:
        groups.setdefault(comp[a], []).append(a)
    return sorted(groups.values())


def is_pathwise_connected(p, members=None):
    return len(components(p, members)) <= 1


def find_path(p, start, end, members=None, bound=None):
    """Shortest path of up/down steps inside members with supports <= bound."""
    allowed = np.ones(p.n, dtype=bool) if members is None else np.zeros(p.n, dtype=bool)
    if members is not None:
        allowed[list(members)] = True
    if bound is not None:
        allowed &= p.leq[:, bound]
    if not (allowed[start] and allowed[end]):
        return None
    if start == end:
        return Path([degenerate(start)])
    prev = {start: None}
    todo = deque([start])
    adj = (p.leq | p.leq.T) & allowed[None, :]
    while todo:
        u = todo.popleft()
        for v in np.flatnonzero(adj[u]):
            v = int(v)
            if v in prev:
                continue
            prev[v] = u
            if v == end:
                steps = []
                w = v
                while prev[w] is not None:
                    a = prev[w]
                    steps.append(Simplex1(a, w, w if p.leq[a, w] else a))
                    w = a
                return Path(reversed(steps))
            todo.append(v)
    return None


def is_refinement(sub, p, locally_relatively_connected=False):
    """Refinement test; returns a ValidationReport with a witness element on failure."""
    sub = sorted(set(int(s) for s in sub))
    if any(s < 0 or s >= p.n for s in sub):
        raise PosetError("refinement candidate is not a subset of the carrier")
    inside = np.zeros(p.n, dtype=bool)
    inside[sub] = True
    for o in range(p.n):
        if not (inside & p.leq[:, o]).any():
            return ValidationReport(False, "no refining element below", (o,))
    if locally_relatively_connected:
        for o in range(p.n):
            below = np.flatnonzero(inside & p.leq[:, o])
            comps = components(p, below)
            if len(comps) > 1:
                return ValidationReport(False, "not locally relatively connected",
                                        (o, comps[0][0], comps[1][0]))
    return ValidationReport(True)


def causal_complement(p, target, within=None):
    members = np.flatnonzero(p.disjoint[target])
    if within is not None:
        keep = set(int(w) for w in within)
        members = [m for m in members if int(m) in keep]
    return Sieve(int(m) for m in members)

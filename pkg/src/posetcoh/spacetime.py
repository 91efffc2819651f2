"""Causal lattices in 1+1 dimensions, their diamond posets and punctures."""

from dataclasses import dataclass, field

import numpy as np

from .poset import Poset, Sieve, components, is_pathwise_connected, validate_poset


class LatticeError(ValueError):
    pass


@dataclass(frozen=True)
class CausalLattice:
    kind: str      # "cylinder" or "strip"
    size: int      # circumference or width
    T: int

    def __post_init__(self):
        if self.kind not in ("cylinder", "strip"):
            raise LatticeError(f"unknown lattice kind {self.kind!r}")
        if self.size < 3 or self.T < 1:
            raise LatticeError("degenerate lattice: need size >= 3 and T >= 1")

    @property
    def vertices(self):
        return [(s, t) for t in range(self.T) for s in range(self.size)]

    def pos(self, v):
        """Light-cone coordinate: sites of odd slices sit half way between even ones."""
        return 2 * v[0] + (v[1] % 2)

    def dist(self, v, w):
        d = abs(self.pos(v) - self.pos(w))
        if self.kind == "cylinder":
            d = min(d, 2 * self.size - d)
        return d

    def precedes(self, u, v):
        dt = v[1] - u[1]
        return dt >= 0 and self.dist(u, v) <= dt

    def related(self, u, v):
        return self.precedes(u, v) or self.precedes(v, u)

    def cone(self, x):
        """J(x): every vertex causally related to x."""
        return frozenset(v for v in self.vertices if self.related(v, x))

    def shadow(self, v, t):
        """Sites of slice t reached by causal chains through v."""
        r = abs(v[1] - t)
        return frozenset(s for s in range(self.size) if self.dist(v, (s, t)) <= r)

    def arc(self, start, length):
        if self.kind == "cylinder":
            return frozenset((start + k) % self.size for k in range(length))
        return frozenset(range(start, start + length))

    def dependence(self, base, t):
        """Vertices all of whose maximal chains cross the base on slice t."""
        return frozenset(v for v in self.vertices if self.shadow(v, t) <= base)

    def step(self, verts):
        """Vertex set plus one causal step in either time direction."""
        out = set(verts)
        for v in verts:
            for dt in (-1, 1):
                t = v[1] + dt
                if 0 <= t < self.T:
                    out.update((s, t) for s in self.shadow(v, t))
        return frozenset(out)


def Cylinder(m, T):
    return CausalLattice("cylinder", m, T)


def Strip(width, T):
    return CausalLattice("strip", width, T)


@dataclass(frozen=True)
class Diamond:
    slice: int
    start: int
    length: int
    vertices: frozenset

    def to_json(self):
        return {"slice": self.slice, "start": self.start, "length": self.length,
                "vertices": sorted([list(v) for v in self.vertices])}


@dataclass
class DiamondPoset:
    lattice: CausalLattice
    poset: Poset
    diamonds: list
    report: object = None
    _cones: dict = field(default_factory=dict, repr=False)

    def cone(self, x):
        if x not in self._cones:
            self._cones[x] = self.lattice.cone(x)
        return self._cones[x]

    def closure(self, i):
        return self.lattice.step(self.diamonds[i].vertices)

    def by_base(self, length):
        return [i for i, d in enumerate(self.diamonds) if d.length <= length]


def generate_diamond_poset(lattice, max_base=None):
    size = lattice.size
    if max_base is None:
        max_base = min(3, size - 1) if lattice.kind == "cylinder" else min(3, size)
    if max_base < 1:
        raise LatticeError("max_base must be positive")
    if lattice.kind == "cylinder" and max_base >= size:
        raise LatticeError("bases must be proper arcs of the circle")
    max_base = min(max_base, size)
    seen = {}
    diamonds = []
    for t in range(lattice.T):
        for length in range(1, max_base + 1):
            starts = range(size) if lattice.kind == "cylinder" else range(size - length + 1)
            for start in starts:
                verts = lattice.dependence(lattice.arc(start, length), t)
                if verts in seen:
                    continue
                seen[verts] = len(diamonds)
                diamonds.append(Diamond(t, start, length, verts))
    n = len(diamonds)
    leq = np.zeros((n, n), dtype=bool)
    dis = np.zeros((n, n), dtype=bool)
    vindex = {v: k for k, v in enumerate(lattice.vertices)}
    nv = len(vindex)
    member = np.zeros((n, nv), dtype=bool)
    for i, d in enumerate(diamonds):
        member[i, [vindex[v] for v in d.vertices]] = True
    rel = np.zeros((nv, nv), dtype=bool)
    for u, a in vindex.items():
        for v, b in vindex.items():
            rel[a, b] = lattice.related(u, v)
    M = member.astype(np.int64)
    # inclusion: no vertex of i outside j
    leq = (M @ (1 - M).T) == 0
    touch = (M @ rel.astype(np.int64) @ M.T) > 0
    dis = ~touch
    poset = Poset(leq, dis, [f"D{d.slice}:{d.start}+{d.length}" for d in diamonds])
    out = DiamondPoset(lattice, poset, diamonds)
    out.report = validate_poset(poset)
    return out


class PunctureError(ValueError):
    pass


@dataclass(frozen=True)
class Puncture:
    id: str
    point: tuple
    members: Sieve
    sequence: tuple

    def to_json(self):
        return {"id": self.id, "members": sorted(self.members), "sequence": list(self.sequence)}


def puncture(dp, x, pid=None):
    x = tuple(x)
    if x not in set(dp.lattice.vertices):
        raise PunctureError(f"{x} is not a lattice vertex")
    J = dp.cone(x)
    members = [i for i in range(dp.poset.n) if not (dp.closure(i) & J)]
    if not members:
        raise PunctureError(f"K_x is empty for x={x}: the lattice is too small")
    lat = dp.lattice

    def far(i):
        return min(lat.dist(v, x) + abs(v[1] - x[1]) for v in dp.diamonds[i].vertices)

    # minimal elements ordered from far to near: the finite stand-in for a_n -> x
    minimal = [i for i in members if dp.diamonds[i].length == 1]
    seq = sorted(minimal, key=lambda i: (-far(i), i))
    return Puncture(pid or f"x{x[0]}_{x[1]}", x, Sieve(members), tuple(seq))


def all_punctures(dp):
    out = []
    for v in dp.lattice.vertices:
        try:
            out.append(puncture(dp, v))
        except PunctureError:
            pass
    return out


def covering_punctures(dp, punctures=None):
    """Greedy choice of punctures whose members cover every element, or None."""
    punctures = all_punctures(dp) if punctures is None else list(punctures)
    need = set(range(dp.poset.n))
    chosen = []
    while need:
        best = max(punctures, key=lambda q: (len(need & q.members), -punctures.index(q)),
                   default=None)
        if best is None or not (need & best.members):
            return None
        chosen.append(best)
        need -= best.members
    return chosen


class PunctureCheck(dict):
    pass


def check_puncture(dp, pk):
    """Connectivity facts about a puncture, reported rather than assumed."""
    p = dp.poset
    mem = sorted(pk.members)
    rep = PunctureCheck(connected=is_pathwise_connected(p, mem))
    # down-sets K_x|_O for diamonds O containing x
    bad_down = []
    for o in range(p.n):
        if pk.point in dp.diamonds[o].vertices:
            sub = [i for i in mem if p.leq[i, o]]
            if sub and not is_pathwise_connected(p, sub):
                bad_down.append(o)
    rep["restricted_downsets_connected"] = not bad_down
    rep["bad_downsets"] = bad_down
    bad_comp = []
    for a in mem:
        comp = [i for i in mem if p.disjoint[a, i]]
        if comp and not is_pathwise_connected(p, comp):
            bad_comp.append(a)
    rep["complements_connected"] = not bad_comp
    rep["bad_complements"] = bad_comp
    rep["perp_pairs_connected"] = perp_pairs_connected(p, mem)
    return rep


def perp_pairs_connected(p, members):
    """Is the set of ⊥-pairs inside members connected under the product order?"""
    mem = sorted(members)
    pairs = [(a, b) for a in mem for b in mem if p.disjoint[a, b]]
    if not pairs:
        return True
    index = {q: k for k, q in enumerate(pairs)}
    seen = {pairs[0]}
    todo = [pairs[0]]
    while todo:
        a, b = todo.pop()
        for (c, d) in pairs:
            if (c, d) in seen:
                continue
            if (p.leq[a, c] or p.leq[c, a]) and (p.leq[b, d] or p.leq[d, b]):
                seen.add((c, d))
                todo.append((c, d))
    return len(seen) == len(index)


def complement_components(dp, a, members=None):
    p = dp.poset
    mem = range(p.n) if members is None else members
    comp = [i for i in mem if p.disjoint[a, i]]
    return components(p, comp)


def interpolation_lemma_check(dp, neighborhood=None):
    """For every diamond O look for O1 containing cl(O) and O2 ⊥ O1.

    With a neighborhood (a vertex set) both cl(O1) and cl(O2) must lie inside it.
    Returns {element: ("witness", O1, O2) | ("boundary", reason)}.
    """
    p = dp.poset
    U = None if neighborhood is None else frozenset(neighborhood)
    cl = [dp.closure(i) for i in range(p.n)]
    out = {}
    for o in range(p.n):
        target = cl[o]
        cands = [i for i in range(p.n)
                 if target <= dp.diamonds[i].vertices and (U is None or cl[i] <= U)]
        if not cands:
            out[o] = ("boundary", "no larger diamond contains the closure")
            continue
        cands.sort(key=lambda i: (len(dp.diamonds[i].vertices), i))
        found = None
        for o1 in cands:
            for o2 in np.flatnonzero(p.disjoint[o1]):
                if U is None or cl[o2] <= U:
                    found = (o1, int(o2))
                    break
            if found:
                break
        out[o] = ("witness",) + found if found else ("boundary", "no disjoint partner")
    return out

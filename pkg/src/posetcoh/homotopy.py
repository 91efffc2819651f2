"""Elementary deformations, presentations of the first homotopy group and homotopy decisions."""

import heapq
from collections import deque
from dataclasses import dataclass
from functools import cached_property
from typing import NamedTuple

import numpy as np

from . import groups
from .poset import (Path, PosetError, Simplex1, Simplex2, components, count_simplices2,
                    degenerate, is_simplex2, iter_simplices1, iter_simplices2)

AMPLIATION = "ampliation"
CONTRACTION = "contraction"
DEFAULT_DEPTH = 12
ALL_RELATIONS_LIMIT = 20000


class DeformationError(ValueError):
    pass


class NotPathwiseConnected(PosetError):
    def __init__(self, a, b):
        super().__init__(f"elements {a} and {b} are not joined by a path")
        self.witness = (a, b)


class Deformation(NamedTuple):
    kind: str
    position: int
    witness: Simplex2

    def inverse(self):
        kind = CONTRACTION if self.kind == AMPLIATION else AMPLIATION
        return Deformation(kind, self.position, self.witness)


def apply_deformation(path, d, poset=None):
    c = d.witness
    j = d.position
    items = list(path)
    if poset is not None and not is_simplex2(poset, c):
        raise DeformationError(f"{c} is not a 2-simplex")
    if d.kind == AMPLIATION:
        if not 0 <= j < len(items) or items[j] != c.f1:
            raise DeformationError(f"ampliation at {j}: witness face does not match the path")
        items[j:j + 1] = [c.f2, c.f0]
    elif d.kind == CONTRACTION:
        if not 0 <= j < len(items) - 1 or items[j] != c.f2 or items[j + 1] != c.f0:
            raise DeformationError(f"contraction at {j}: witness faces do not match the path")
        items[j:j + 2] = [c.f1]
    else:
        raise DeformationError(f"unknown deformation kind {d.kind!r}")
    return Path(items)


def replay(path, moves, poset=None):
    for d in moves:
        path = apply_deformation(path, d, poset)
    return path


def invert_moves(moves):
    return [d.inverse() for d in reversed(moves)]


# ------------------------------------------------------------ presentation

def spanning_tree(p, root, members=None):
    """BFS tree; returns {element: tuple of simplices walking root -> element}."""
    allowed = np.ones(p.n, dtype=bool)
    if members is not None:
        allowed[:] = False
        allowed[list(members)] = True
    tree = {root: ()}
    todo = deque([root])
    while todo:
        u = todo.popleft()
        for s in p.up(u):
            if not allowed[s]:
                continue
            for v in p.down(s):
                v = int(v)
                if allowed[v] and v not in tree:
                    tree[v] = tree[u] + (Simplex1(u, v, int(s)),)
                    todo.append(v)
    return tree


def generating_2simplices(p):
    """A family of 2-simplices whose relations generate those of all 2-simplices.

    Degenerate ones, the split of each 1-simplex through its support, the
    cancellation of an upward step against its downward return, and the
    chains u < v < w of the order complex.
    """
    n = p.n
    out = []
    for a in range(n):
        d = degenerate(a)
        out.append(Simplex2(d, d, d, a))
    for b in iter_simplices1(p):
        x, y, s = b
        if x != s and y != s:
            out.append(Simplex2(Simplex1(s, y, s), b, Simplex1(x, s, s), s))
    strict = p.leq & ~np.eye(n, dtype=bool)
    for u, w in np.argwhere(strict):
        u, w = int(u), int(w)
        out.append(Simplex2(Simplex1(w, u, w), degenerate(u), Simplex1(u, w, w), w))
    for u, v in np.argwhere(strict):
        u, v = int(u), int(v)
        for w in np.flatnonzero(strict[v]):
            w = int(w)
            out.append(Simplex2(Simplex1(v, w, w), Simplex1(u, w, w), Simplex1(u, v, v), w))
    return out


class GroupPresentation:
    """Generators are all 1-simplices; relations kill the tree and degenerate
    generators and encode one 2-simplex each."""

    def __init__(self, poset, basepoint, relations="auto"):
        self.poset = poset
        self.basepoint = basepoint
        comps = components(poset)
        if len(comps) > 1:
            other = next(c for c in comps if basepoint not in c)
            raise NotPathwiseConnected(basepoint, other[0])
        self.generators = list(iter_simplices1(poset))
        self.index = {b: k + 1 for k, b in enumerate(self.generators)}
        self.tree = spanning_tree(poset, basepoint)
        tree_edges = sorted(set(b for path in self.tree.values() for b in path))
        if relations == "auto":
            relations = "all" if count_simplices2(poset) <= ALL_RELATIONS_LIMIT else "generating"
        if relations not in ("all", "generating"):
            raise ValueError(f"relations must be 'all', 'generating' or 'auto', not {relations!r}")
        self.mode = relations
        self.killed = set(self.index[b] for b in tree_edges)
        self.killed.update(self.index[degenerate(a)] for a in range(poset.n))
        rels = [(self.index[b],) for b in tree_edges]
        rels += [(self.index[degenerate(a)],) for a in range(poset.n)
                 if self.index[degenerate(a)] not in set(self.index[b] for b in tree_edges)]
        self.sources = [("tree", b) for b in tree_edges]
        self.sources += [("degenerate", degenerate(a)) for a in range(poset.n)
                         if degenerate(a) not in tree_edges]
        simplices = iter_simplices2(poset) if relations == "all" else generating_2simplices(poset)
        for c in simplices:
            rels.append(self.relation_word(c))
            self.sources.append(("simplex", c))
        self.relations = rels

    def relation_word(self, c):
        return (-self.index[c.f1], self.index[c.f0], self.index[c.f2])

    def word(self, path):
        """Letters of a path in operator order: the last simplex walked comes first."""
        return tuple(self.index[b] for b in reversed(path))

    @cached_property
    def tietze(self):
        return groups.tietze(len(self.generators), self.relations)

    @cached_property
    def abelian_map(self):
        return groups.AbelianMap(self.tietze)

    def normal_form(self, path):
        return self.tietze.normal_form(self.word(path))

    def abelian_class(self, path):
        return self.abelian_map(self.word(path))

    def survivors(self):
        return [self.generators[g - 1] for g in self.tietze.survivors]

    def fundamental_cycle(self, b):
        """Based loop: tree path to the start of b, b, tree path back."""
        t1 = self.tree[b.d1]
        t0 = self.tree[b.d0]
        items = list(t1) + [b] + [e.reversed() for e in reversed(t0)]
        return Path(items)


def pi1_presentation(p, basepoint, relations="auto"):
    return GroupPresentation(p, basepoint, relations)


def abelianization(g):
    return groups.abelian_invariants(len(g.generators), g.relations)


def path_class(g, path):
    """Word of a path over the non-tree generators, freely reduced.

    A step walked against the orientation d1 < d0 is written as the inverse of
    its reverse, which is what the backtracking 2-simplices impose.
    """
    letters = []
    for b in reversed(path):
        if b.d1 > b.d0:
            letters.append(-g.index[b.reversed()])
        else:
            letters.append(g.index[b])
    return groups.free_reduce(x for x in letters if abs(x) not in g.killed)


def integer_cocycle(g):
    """Free-part coordinates of every generator: one integer cocycle per free summand.

    Sign is fixed so that the first surviving generator is positive in each column
    where it is nonzero.
    """
    am = g.abelian_map
    table = {b: am.free_part((k,)) for b, k in g.index.items()}
    if not table:
        return table
    width = am.free_rank
    signs = [1] * width
    for s in g.tietze.survivors:
        v = table[g.generators[s - 1]]
        for i in range(width):
            if signs[i] == 1 and v[i] < 0:
                signs[i] = -1
        break
    return {b: tuple(x * sg for x, sg in zip(v, signs)) for b, v in table.items()}


# ------------------------------------------------------------ witnesses

def up(u, w):
    return Simplex1(u, w, w)


def down(w, u):
    return Simplex1(w, u, w)


def _to_support(b, S):
    """Moves turning the single simplex b (at position 0) into (b.d1, b.d0, S)."""
    if b.support == S:
        return []
    x, y, s = b
    mid = degenerate(y)
    return [Deformation(AMPLIATION, 0, Simplex2(mid, b, b, s)),
            Deformation(CONTRACTION, 0, Simplex2(mid, Simplex1(x, y, S), b, S))]


def contraction_moves(segment, S):
    """Moves collapsing a segment (at position 0) into one simplex with support S."""
    moves = []
    for k, b in enumerate(segment):
        moves += [m._replace(position=m.position + k) for m in _to_support(b, S)]
    x = segment[0].d1
    for k in range(1, len(segment)):
        w = segment[k].d1
        y = segment[k].d0
        c = Simplex2(Simplex1(w, y, S), Simplex1(x, y, S), Simplex1(x, w, S), S)
        moves.append(Deformation(CONTRACTION, 0, c))
    return moves


class Rewriter:
    """A path under rewriting, recording every elementary move."""

    def __init__(self, path):
        self.path = list(path)
        self.moves = []

    def replace(self, i, j, new, S):
        old = self.path[i:j]
        if old == list(new):
            return
        assert old[0].d1 == new[0].d1 and old[-1].d0 == new[-1].d0
        fwd = contraction_moves(old, S)
        back = invert_moves(contraction_moves(list(new), S))
        self.moves += [m._replace(position=m.position + i) for m in fwd + back]
        self.path[i:j] = list(new)


class CollapseData:
    """Reduction of the order complex's 2-skeleton used to canonicalise paths.

    Every order-complex edge u < w is either kept in a spanning tree, killed by
    one triangle (then rewritten into the triangle's other two sides), or left
    over. A triangle may kill an edge only while its other sides are alive, so
    rewriting killed edges in order of death always terminates. Killing an edge
    discards the other triangles through it; the result is complete whenever
    the number of leftover edges equals the free rank of a free fundamental group.
    """

    def __init__(self, p):
        self.p = p
        n = p.n
        strict = p.leq & ~np.eye(n, dtype=bool)
        edges = [(int(u), int(w)) for u, w in np.argwhere(strict)]
        tri = []
        for u, v in edges:
            for w in np.flatnonzero(strict[v]):
                tri.append((u, v, int(w)))
        self.edges = edges
        self.triangles = tri
        on_edge = {e: set() for e in edges}
        for k, (u, v, w) in enumerate(tri):
            for e in ((u, v), (v, w), (u, w)):
                on_edge[e].add(k)
        usable = set(range(len(tri)))
        self.killed = {}
        clock = [0]

        def kill(e, k):
            self.killed[e] = (clock[0], tri[k])
            clock[0] += 1
            usable.discard(k)
            for j in list(on_edge[e]):
                usable.discard(j)
                for f in _tri_edges(tri[j]):
                    on_edge[f].discard(j)
            on_edge[e].clear()
            for f in _tri_edges(tri[k]):
                on_edge[f].discard(k)

        # free faces first: these kills discard nothing
        heap = [e for e in edges if len(on_edge[e]) == 1]
        heapq.heapify(heap)
        while heap:
            e = heapq.heappop(heap)
            if e in self.killed or len(on_edge[e]) != 1:
                continue
            k = next(iter(on_edge[e]))
            others = [f for f in _tri_edges(tri[k]) if f != e]
            kill(e, k)
            for f in others:
                if f not in self.killed and len(on_edge[f]) == 1:
                    heapq.heappush(heap, f)
        alive = [e for e in edges if e not in self.killed]
        adj = {a: [] for a in range(n)}
        for (u, w) in alive:
            adj[u].append((w, (u, w)))
            adj[w].append((u, (u, w)))
        tree = set()
        seen = set()
        for root in range(n):
            if root in seen:
                continue
            seen.add(root)
            todo = deque([root])
            while todo:
                a = todo.popleft()
                for b, e in sorted(adj[a]):
                    if b not in seen:
                        seen.add(b)
                        tree.add(e)
                        todo.append(b)
        self.tree = tree
        # Triangles with one non-trivial side trivialise it; trivial edges keep
        # their triangles usable. When that stalls, kill the cheapest edge.
        trivial = set(tree)
        self.trivialized = {}
        t_clock = 0
        while True:
            changed = True
            while changed:
                changed = False
                for k in sorted(usable):
                    hard = [e for e in _tri_edges(tri[k]) if e not in trivial]
                    if not hard:
                        usable.discard(k)
                    elif len(hard) == 1:
                        e = hard[0]
                        self.trivialized[e] = (t_clock, tri[k])
                        t_clock += 1
                        trivial.add(e)
                        usable.discard(k)
                        changed = True
            best = None
            for k in usable:
                for e in _tri_edges(tri[k]):
                    if e in trivial:
                        continue
                    key = (len(on_edge[e]), e, k)
                    if best is None or key < best:
                        best = key
            if best is None:
                break
            kill(best[1], best[2])
        self.nontrivial = sorted(e for e in edges if e not in self.killed and e not in trivial)

    def complete_for(self, g):
        """Canonical forms decide homotopy when the leftover edges match a free group's rank."""
        kind = g.tietze.kind()
        if kind == "trivial":
            return not self.nontrivial
        return kind == "free" and len(self.nontrivial) == len(g.tietze.survivors)


def _tri_edges(t):
    u, v, w = t
    return ((u, v), (v, w), (u, w))


def _edge(b):
    """Order-complex edge and direction of an up or down simplex."""
    if b.d1 == b.support:
        return (b.d0, b.d1), -1
    return (b.d1, b.d0), 1


def _sides(tri, e, direction):
    """The other two sides of a triangle, walked from the start to the end of e."""
    u, v, w = tri
    if e == (u, w):
        seq = [up(u, v), up(v, w)]
    elif e == (u, v):
        seq = [up(u, w), down(w, v)]
    else:
        seq = [down(v, u), up(u, w)]
    if direction == -1:
        seq = [b.reversed() for b in reversed(seq)]
    return seq, w


class PathTooLong(RuntimeError):
    pass


def canonicalize(p, path, data=None, limit=200000):
    """Rewrite a path into a reduced edge path of the collapsed order complex.

    Returns (canonical path, moves). When `data.complete_for(g)` holds the
    canonical path is a complete invariant among paths with the same endpoints.
    """
    data = data or CollapseData(p)
    rw = Rewriter(path)
    # split every simplex into an upward and a downward step
    i = 0
    while i < len(rw.path):
        b = rw.path[i]
        x, y, s = b
        if x != s and y != s:
            rw.replace(i, i + 1, [up(x, s), down(s, y)], s)
            i += 2
        else:
            i += 1
    _drop_degenerate(rw)
    # rewrite killed edges, earliest death first
    while True:
        best = None
        for k, b in enumerate(rw.path):
            if b.is_degenerate:
                continue
            e, _ = _edge(b)
            if e in data.killed:
                t = data.killed[e][0]
                if best is None or t < best[0]:
                    best = (t, k)
        if best is None:
            break
        k = best[1]
        e, direction = _edge(rw.path[k])
        seq, S = _sides(data.killed[e][1], e, direction)
        rw.replace(k, k + 1, seq, S)
        if len(rw.path) > limit:
            raise PathTooLong(len(rw.path))
    # then trivialised edges, latest first
    while True:
        best = None
        for k, b in enumerate(rw.path):
            if b.is_degenerate:
                continue
            e, _ = _edge(b)
            if e in data.trivialized:
                t = data.trivialized[e][0]
                if best is None or t > best[0]:
                    best = (t, k)
        if best is None:
            break
        k = best[1]
        e, direction = _edge(rw.path[k])
        seq, S = _sides(data.trivialized[e][1], e, direction)
        rw.replace(k, k + 1, seq, S)
        if len(rw.path) > limit:
            raise PathTooLong(len(rw.path))
    _free_reduce(rw)
    return Path(rw.path), rw.moves


def _drop_degenerate(rw):
    k = 0
    while len(rw.path) > 1 and k < len(rw.path):
        b = rw.path[k]
        if not b.is_degenerate:
            k += 1
            continue
        if k + 1 < len(rw.path):
            nb = rw.path[k + 1]
            rw.replace(k, k + 2, [nb], nb.support)
        else:
            pb = rw.path[k - 1]
            rw.replace(k - 1, k + 1, [pb], pb.support)
            k -= 1


def _free_reduce(rw):
    _drop_degenerate(rw)
    stack_changed = True
    while stack_changed:
        stack_changed = False
        k = 0
        while k < len(rw.path) - 1:
            a, b = rw.path[k], rw.path[k + 1]
            if b == a.reversed() and not a.is_degenerate:
                rw.replace(k, k + 2, [degenerate(a.d1)], a.support)
                _drop_degenerate(rw)
                stack_changed = True
                k = max(k - 1, 0)
            else:
                k += 1


# ------------------------------------------------------------ decisions

@dataclass(frozen=True)
class HomotopyVerdict:
    status: str                 # "homotopic" | "not-homotopic" | "unknown"
    witness: tuple = ()
    certificate: object = None
    depth: int = None
    method: str = ""

    @property
    def homotopic(self):
        return self.status == "homotopic"


class HomotopyDecider:
    """Caches the presentation and collapse data of one poset."""

    def __init__(self, p, basepoint=0, relations="auto"):
        self.p = p
        self.g = GroupPresentation(p, basepoint, relations)
        self._data = None

    @property
    def data(self):
        if self._data is None:
            self._data = CollapseData(self.p)
        return self._data

    def canonical(self, path):
        return canonicalize(self.p, path, self.data)

    def decide(self, p1, p2, depth=DEFAULT_DEPTH):
        if p1.start != p2.start or p1.end != p2.end:
            raise DeformationError("paths do not share both endpoints")
        if tuple(p1) == tuple(p2):
            return HomotopyVerdict("homotopic", (), method="syntactic")
        g = self.g
        c1, c2 = g.abelian_class(p1), g.abelian_class(p2)
        if c1 != c2:
            diff = _class_difference(c1, c2, g.abelian_map)
            return HomotopyVerdict("not-homotopic", certificate=("abelianization", c1, c2, diff),
                                   method="abelianization")
        kind = g.tietze.kind()
        algebra = None
        if kind in ("trivial", "free", "free-abelian"):
            n1, n2 = g.normal_form(p1), g.normal_form(p2)
            algebra = n1 == n2
            if not algebra:
                return HomotopyVerdict("not-homotopic", certificate=("normal-form", n1, n2),
                                       method=kind)
        S = common_bound(self.p, list(p1) + list(p2))
        if S is not None:
            rw = Rewriter(p1)
            rw.replace(0, len(p1), list(p2), S)
            return HomotopyVerdict("homotopic", tuple(rw.moves), method="common bound")
        try:
            q1, m1 = self.canonical(p1)
            q2, m2 = self.canonical(p2)
        except PathTooLong:
            return HomotopyVerdict("unknown", depth=depth, method="canonical form overflow")
        if tuple(q1) == tuple(q2):
            return HomotopyVerdict("homotopic", tuple(m1 + invert_moves(m2)),
                                   method="canonical form")
        if self.data.complete_for(g):
            if algebra:
                raise AssertionError("normal forms and canonical forms disagree")
            return HomotopyVerdict("not-homotopic", certificate=("canonical-form", q1, q2),
                                   method="canonical form")
        mid = bfs_homotopy(self.p, q1, q2, depth)
        if mid is not None:
            return HomotopyVerdict("homotopic", tuple(m1 + mid + invert_moves(m2)), method="search")
        return HomotopyVerdict("unknown", depth=depth, method="search")


def common_bound(p, simplices):
    """Smallest element above every support, if any."""
    ok = np.ones(p.n, dtype=bool)
    for b in simplices:
        ok &= p.leq[b.support]
    cands = np.flatnonzero(ok)
    if not cands.size:
        return None
    return int(min(cands, key=lambda c: (int(p.leq[:, c].sum()), int(c))))


def _class_difference(c1, c2, am):
    kept = [m for m in am.moduli if m != 1]
    return tuple((a - b) % m if m else a - b for a, b, m in zip(c1, c2, kept))


def decide_homotopy(p, p1, p2, depth=DEFAULT_DEPTH, decider=None):
    decider = decider or HomotopyDecider(p, p1.start)
    return decider.decide(p1, p2, depth)


# ------------------------------------------------------------ bounded search

def _neighbours(p, path):
    items = tuple(path)
    out = []
    for j in range(len(items) - 1):
        a, b = items[j], items[j + 1]
        x, y = a.d1, b.d0
        common = np.flatnonzero(p.leq[a.support] & p.leq[b.support])
        for S in common:
            S = int(S)
            c = Simplex2(b, Simplex1(x, y, S), a, S)
            out.append(Deformation(CONTRACTION, j, c))
    for j, b in enumerate(items):
        x, y, s = b
        for v in p.down(s):
            v = int(v)
            f2, f0 = Simplex1(x, v, s), Simplex1(v, y, s)
            if f2.is_degenerate or f0.is_degenerate:
                continue
            c = Simplex2(f0, b, f2, s)
            if j > 0 and items[j - 1] == f2.reversed():
                continue
            if j + 1 < len(items) and items[j + 1] == f0.reversed():
                continue
            out.append(Deformation(AMPLIATION, j, c))
    return out


def bfs_homotopy(p, p1, p2, depth, max_states=200000):
    """Bidirectional breadth-first search over elementary deformations."""
    if tuple(p1) == tuple(p2):
        return []
    front = {tuple(p1): []}
    back = {tuple(p2): []}
    fq = [tuple(p1)]
    bq = [tuple(p2)]
    for level in range(depth):
        forward = level % 2 == 0
        seen, other, queue = (front, back, fq) if forward else (back, front, bq)
        nxt = []
        for state in queue:
            for d in _neighbours(p, state):
                new = tuple(apply_deformation(state, d))
                if new in seen:
                    continue
                seen[new] = seen[state] + [d]
                if new in other:
                    a, b = (front[new], back[new])
                    return a + invert_moves(b)
                nxt.append(new)
                if len(front) + len(back) > max_states:
                    return None
        if forward:
            fq = nxt
        else:
            bq = nxt
        if not nxt:
            return None
    return None

"""Words in free groups, Tietze elimination and Smith normal form over the integers.

Letters are nonzero ints: k stands for generator k-1, -k for its inverse.
Words are read left to right as products, so the word (3, 1) is g2·g0.
"""

import heapq
from collections import defaultdict
from math import gcd


def inverse(word):
    return tuple(-x for x in reversed(word))


def free_reduce(word):
    out = []
    for x in word:
        if out and out[-1] == -x:
            out.pop()
        else:
            out.append(x)
    return tuple(out)


def cyclic_reduce(word):
    w = list(free_reduce(word))
    i, j = 0, len(w) - 1
    while i < j and w[i] == -w[j]:
        i += 1
        j -= 1
    return tuple(w[i:j + 1])


def exponent_vector(word, n):
    v = [0] * n
    for x in word:
        v[abs(x) - 1] += 1 if x > 0 else -1
    return v


def cyclic_key(word):
    """Representative of a relator up to rotation and inversion."""
    w = cyclic_reduce(word)
    if not w:
        return ()
    cands = []
    for u in (w, inverse(w)):
        for k in range(len(u)):
            cands.append(u[k:] + u[:k])
    return min(cands)


class TietzeResult:
    """Outcome of generator elimination.

    survivors: original generator numbers (1-based) that remain.
    relations: relators over the surviving letters.
    """

    def __init__(self, n, survivors, relations, subst, moves, exhausted):
        self.n = n
        self.survivors = survivors
        self.relations = relations
        self.subst = subst
        self.moves = moves
        self.exhausted = exhausted
        self._memo = {}

    def express(self, word):
        out = []
        for x in word:
            g = abs(x)
            w = self._expand(g)
            out.extend(w if x > 0 else inverse(w))
        return free_reduce(out)

    def _expand(self, g):
        if g not in self.subst:
            return (g,)
        if g in self._memo:
            return self._memo[g]
        # iterative expansion to stay clear of recursion limits
        stack = [g]
        while stack:
            h = stack[-1]
            pending = [abs(x) for x in self.subst[h]
                       if abs(x) in self.subst and abs(x) not in self._memo]
            if pending:
                stack.extend(pending)
                continue
            stack.pop()
            if h in self._memo:
                continue
            out = []
            for x in self.subst[h]:
                w = self._memo.get(abs(x), (abs(x),))
                out.extend(w if x > 0 else inverse(w))
            self._memo[h] = free_reduce(out)
        return self._memo[g]

    @property
    def rank(self):
        return len(self.survivors)

    def kind(self):
        if not self.survivors:
            return "trivial"
        if not self.relations:
            return "free"
        if self.is_free_abelian():
            return "free-abelian"
        return "general"

    def is_free_abelian(self):
        gens = self.survivors
        want = set()
        for i, a in enumerate(gens):
            for b in gens[i + 1:]:
                want.add(cyclic_key((a, b, -a, -b)))
        have = set(cyclic_key(r) for r in self.relations)
        return have == want

    def normal_form(self, word):
        """Normal form of a word in the original letters, when one exists."""
        w = self.express(word)
        k = self.kind()
        if k == "trivial":
            return ()
        if k == "free":
            return w
        if k == "free-abelian":
            return tuple(exponent_vector(w, self.n)[g - 1] for g in self.survivors)
        return None


def tietze(n, relations, budget=None, max_len=None):
    """Eliminate generators that occur once in some relator.

    Relators are processed shortest first; each move removes one generator
    and one relator. Stops after `budget` moves (default 10·n).
    """
    budget = 10 * n if budget is None else budget
    rels = {}
    occ = defaultdict(set)
    for k, r in enumerate(relations):
        r = cyclic_reduce(r)
        if r:
            rels[k] = r
            for x in r:
                occ[abs(x)].add(k)
    alive = set(range(1, n + 1))
    subst = {}
    heap = [(len(r), k) for k, r in rels.items()]
    heapq.heapify(heap)
    moves = 0
    seen_keys = {}
    for k, r in list(rels.items()):
        key = cyclic_key(r)
        if key in seen_keys:
            _drop(rels, occ, k)
        else:
            seen_keys[key] = k
    while heap and moves < budget:
        length, k = heapq.heappop(heap)
        r = rels.get(k)
        if r is None or len(r) != length:
            continue
        if max_len is not None and length > max_len:
            break
        counts = defaultdict(int)
        for x in r:
            counts[abs(x)] += 1
        single = [g for g, c in counts.items() if c == 1]
        if not single:
            continue
        g = min(single, key=lambda h: (len(occ[h]), h))
        pos = next(i for i, x in enumerate(r) if abs(x) == g)
        rot = r[pos:] + r[:pos]
        rest = rot[1:]
        # rot = g^e · rest = 1  =>  g = rest^-1 (e=+1) or rest (e=-1)
        value = inverse(rest) if rot[0] > 0 else rest
        subst[g] = value
        alive.discard(g)
        _drop(rels, occ, k)
        moves += 1
        for j in sorted(occ.pop(g, ())):
            old = rels.get(j)
            if old is None:
                continue
            new = []
            for x in old:
                if abs(x) == g:
                    new.extend(value if x > 0 else inverse(value))
                else:
                    new.append(x)
            new = cyclic_reduce(new)
            _drop(rels, occ, j)
            if new:
                rels[j] = new
                for x in new:
                    occ[abs(x)].add(j)
                heapq.heappush(heap, (len(new), j))
    survivors = sorted(alive)
    remaining = []
    keys = set()
    for k in sorted(rels):
        key = cyclic_key(rels[k])
        if key and key not in keys:
            keys.add(key)
            remaining.append(rels[k])
    return TietzeResult(n, survivors, remaining, subst, moves, moves >= budget)


def _drop(rels, occ, k):
    r = rels.pop(k, None)
    if r is None:
        return
    for x in r:
        occ[abs(x)].discard(k)


# ---------------------------------------------------------------- Smith form

def _smith_dense(A, track=False):
    """Diagonalise an integer matrix. Returns (diagonal, V) with rows(A)·V = diag form."""
    A = [list(r) for r in A]
    m = len(A)
    n = len(A[0]) if m else 0
    V = [[int(i == j) for j in range(n)] for i in range(n)] if track else None
    diag = []
    t = 0
    while t < min(m, n):
        best = None
        for i in range(t, m):
            row = A[i]
            for j in range(t, n):
                if row[j] and (best is None or abs(row[j]) < best[0]):
                    best = (abs(row[j]), i, j)
                    if best[0] == 1:
                        break
            if best and best[0] == 1:
                break
        if best is None:
            break
        _, i, j = best
        A[t], A[i] = A[i], A[t]
        if j != t:
            for row in A:
                row[t], row[j] = row[j], row[t]
            if track:
                for row in V:
                    row[t], row[j] = row[j], row[t]
        while True:
            p = A[t][t]
            dirty = False
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    if q:
                        ri, rt = A[i], A[t]
                        for j in range(t, n):
                            if rt[j]:
                                ri[j] -= q * rt[j]
                    if A[i][t]:
                        A[t], A[i] = A[i], A[t]
                        dirty = True
                        break
            if dirty:
                continue
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // p
                    if q:
                        for row in A:
                            if row[t]:
                                row[j] -= q * row[t]
                        if track:
                            for row in V:
                                if row[t]:
                                    row[j] -= q * row[t]
                    if A[t][j]:
                        for row in A:
                            row[t], row[j] = row[j], row[t]
                        if track:
                            for row in V:
                                row[t], row[j] = row[j], row[t]
                        dirty = True
                        break
            if not dirty:
                break
        diag.append(abs(A[t][t]))
        t += 1
    return diag, V


def invariant_factors(diag):
    """Turn a diagonal into a divisibility chain."""
    d = [x for x in diag if x != 0]
    changed = True
    while changed:
        changed = False
        for i in range(len(d)):
            for j in range(i + 1, len(d)):
                a, b = d[i], d[j]
                g = gcd(a, b)
                lcm = a // g * b
                if (g, lcm) != (a, b):
                    d[i], d[j] = g, lcm
                    changed = True
    return sorted(d)


def abelian_invariants(n, relations):
    """(free rank, torsion) of Z^n modulo the exponent vectors of the relators.

    Unit pivots are cleared sparsely first; the remainder goes to a dense Smith form.
    """
    rows = []
    for r in relations:
        row = defaultdict(int)
        for x in r:
            row[abs(x) - 1] += 1 if x > 0 else -1
        row = {c: v for c, v in row.items() if v}
        if row:
            rows.append(row)
    cols = defaultdict(set)
    for i, row in enumerate(rows):
        for c in row:
            cols[c].add(i)
    live_rows = set(range(len(rows)))
    live_cols = set(range(n))
    rank = 0
    progress = True
    while progress:
        progress = False
        order = sorted(live_rows, key=lambda i: len(rows[i]))
        for i in order:
            if i not in live_rows:
                continue
            row = rows[i]
            unit = [c for c, v in row.items() if abs(v) == 1]
            if not unit:
                continue
            c = min(unit, key=lambda c: (len(cols[c]), c))
            s = row[c]
            for k in list(cols[c]):
                if k == i:
                    continue
                other = rows[k]
                f = other[c] * s  # other -= f * row  (s = ±1, so other[c] -> 0)
                for cc, v in row.items():
                    nv = other.get(cc, 0) - f * v
                    if nv:
                        if cc not in other:
                            cols[cc].add(k)
                        other[cc] = nv
                    elif cc in other:
                        del other[cc]
                        cols[cc].discard(k)
                if not other:
                    live_rows.discard(k)
            for cc in row:
                cols[cc].discard(i)
            live_rows.discard(i)
            live_cols.discard(c)
            rank += 1
            progress = True
    rest_cols = sorted(live_cols)
    idx = {c: k for k, c in enumerate(rest_cols)}
    dense = []
    for i in sorted(live_rows):
        r = [0] * len(rest_cols)
        for c, v in rows[i].items():
            r[idx[c]] = v
        if any(r):
            dense.append(r)
    diag, _ = _smith_dense(dense) if dense and rest_cols else ([], None)
    nz = [d for d in diag if d]
    rank += len(nz)
    torsion = [d for d in invariant_factors(nz) if d > 1]
    return n - rank, torsion


class AbelianMap:
    """Homomorphism from the free group on n letters onto Z^r ⊕ ⊕ Z/d_i."""

    def __init__(self, tz):
        self.tz = tz
        gens = tz.survivors
        self.pos = {g: k for k, g in enumerate(gens)}
        mat = []
        for r in tz.relations:
            row = [0] * len(gens)
            for x in r:
                row[self.pos[abs(x)]] += 1 if x > 0 else -1
            if any(row):
                mat.append(row)
        if gens:
            diag, V = _smith_dense(mat, track=True) if mat else ([], None)
            if V is None:
                V = [[int(i == j) for j in range(len(gens))] for i in range(len(gens))]
        else:
            diag, V = [], []
        self.V = V
        k = len(gens)
        self.moduli = [diag[i] if i < len(diag) else 0 for i in range(k)]
        self.free_rank = sum(1 for m in self.moduli if m == 0)
        self.torsion = [d for d in invariant_factors([m for m in self.moduli if m]) if d > 1]

    def __call__(self, word):
        w = self.tz.express(word)
        x = [0] * len(self.pos)
        for a in w:
            x[self.pos[abs(a)]] += 1 if a > 0 else -1
        out = []
        for j, m in enumerate(self.moduli):
            if m == 1:
                continue
            v = sum(x[i] * self.V[i][j] for i in range(len(x)))
            out.append(v % m if m else v)
        return tuple(out)

    def free_part(self, word):
        """Coordinates in the free summand only."""
        cls = self(word)
        kept = [m for m in self.moduli if m != 1]
        return tuple(c for c, m in zip(cls, kept) if m == 0)

"""Independent oracles for the frozen expectations in tests/data/derived.json.

Nothing here imports the library's algorithms: inputs are raw boolean
matrices, and the answers come from brute force, networkx or sympy.
Run `python3 tests/oracles.py` to recompute and rewrite the frozen file.
"""

import itertools
import json
import sys
from pathlib import Path

import networkx as nx
from sympy import Matrix, ZZ
from sympy.matrices.normalforms import smith_normal_form

DATA = Path(__file__).parent / "data" / "derived.json"


# ------------------------------------------------------------------ simplices

def brute_simplices1(leq):
    n = len(leq)
    return sorted((x, y, s) for x in range(n) for y in range(n) for s in range(n)
                  if leq[x][s] and leq[y][s])


def brute_simplices2_count(leq):
    """Quadruples (f0, f1, f2, support) of 1-simplices with matching faces."""
    n = len(leq)
    s1 = brute_simplices1(leq)
    count = 0
    for c in range(n):
        below = [b for b in s1 if leq[b[2]][c]]
        for f0, f1, f2 in itertools.product(below, repeat=3):
            # vertices v0 = f2.d1 = f1.d1, v1 = f2.d0 = f0.d1, v2 = f0.d0 = f1.d0
            if f2[0] == f1[0] and f2[1] == f0[0] and f0[1] == f1[1]:
                count += 1
    return count


# ------------------------------------------------------------------ homology

def order_complex_h1(leq):
    """(rank, torsion) of H_1 of the order complex (chains of the strict order)."""
    n = len(leq)
    lt = [[leq[i][j] and i != j for j in range(n)] for i in range(n)]
    edges = [(i, j) for i in range(n) for j in range(n) if lt[i][j]]
    eidx = {e: k for k, e in enumerate(edges)}
    tris = [(i, j, k) for (i, j) in edges for k in range(n) if lt[j][k]]
    d1 = Matrix.zeros(n, len(edges))
    for k, (i, j) in enumerate(edges):
        d1[j, k] += 1
        d1[i, k] -= 1
    d2 = Matrix.zeros(len(edges), len(tris))
    for k, (i, j, l) in enumerate(tris):
        d2[eidx[(j, l)], k] += 1
        d2[eidx[(i, l)], k] -= 1
        d2[eidx[(i, j)], k] += 1
    r1 = d1.rank()
    if tris:
        snf = smith_normal_form(d2, domain=ZZ)
        diag = [abs(snf[i, i]) for i in range(min(snf.shape)) if snf[i, i] != 0]
    else:
        diag = []
    rank = len(edges) - r1 - len(diag)
    torsion = sorted(int(x) for x in diag if x > 1)
    return rank, torsion


# ------------------------------------------------------------------ graphs

def comparability_graph(leq, members):
    g = nx.Graph()
    g.add_nodes_from(members)
    for a in members:
        for b in members:
            if a != b and (leq[a][b] or leq[b][a]):
                g.add_edge(a, b)
    return g


def connected(leq, members):
    members = list(members)
    return not members or nx.is_connected(comparability_graph(leq, members))


def perp_pairs_connected(leq, dis, members):
    pairs = [(a, b) for a in members for b in members if dis[a][b]]
    if not pairs:
        return True
    g = nx.Graph()
    g.add_nodes_from(pairs)
    for (a, b), (c, d) in itertools.combinations(pairs, 2):
        if (leq[a][c] or leq[c][a]) and (leq[b][d] or leq[d][b]):
            g.add_edge((a, b), (c, d))
    return nx.is_connected(g)


def directed(leq):
    n = len(leq)
    return all(any(leq[a][c] and leq[b][c] for c in range(n)) for a in range(n) for b in range(n))


# ------------------------------------------------------------------ fixtures by hand

def circle_sets(n):
    return [frozenset([i]) for i in range(n)] + [frozenset([i, (i + 1) % n]) for i in range(n)]


def from_sets(sets):
    leq = [[a <= b for b in sets] for a in sets]
    dis = [[not (a & b) for b in sets] for a in sets]
    return leq, dis


def null_lattice_diamonds(kind, size, T, max_base):
    """Diamonds on the null lattice, recomputed from scratch.

    A vertex (s, t) sits at light-cone position 2s + (t mod 2); u precedes v when
    the position distance is at most the time difference. A diamond is the set of
    vertices whose every past/future shadow on slice t lies inside an arc.
    """
    verts = [(s, t) for t in range(T) for s in range(size)]

    def dist(u, v):
        d = abs(2 * u[0] + u[1] % 2 - 2 * v[0] - v[1] % 2)
        return min(d, 2 * size - d) if kind == "cylinder" else d

    def related(u, v):
        return dist(u, v) <= abs(u[1] - v[1])

    out = []
    for t in range(T):
        for length in range(1, max_base + 1):
            starts = range(size) if kind == "cylinder" else range(size - length + 1)
            for a in starts:
                arc = {(a + k) % size for k in range(length)} if kind == "cylinder" \
                    else set(range(a, a + length))
                dv = frozenset(v for v in verts
                               if all(s in arc for s in range(size)
                                      if dist(v, (s, t)) <= abs(v[1] - t)))
                if dv not in out:
                    out.append(dv)
    n = len(out)
    leq = [[out[i] <= out[j] for j in range(n)] for i in range(n)]
    dis = [[not any(related(u, v) for u in out[i] for v in out[j]) for j in range(n)]
           for i in range(n)]
    return leq, dis, out, related, verts


def puncture_members(leq, dis, diamonds, related, verts, x):
    """Diamonds whose one-step causal closure avoids every vertex related to x."""
    J = {v for v in verts if related(v, x)}

    def closure(dv):
        out = set(dv)
        for v in dv:
            for w in verts:
                if abs(w[1] - v[1]) == 1 and related(v, w):
                    out.add(w)
        return out
    return [i for i, dv in enumerate(diamonds) if not (closure(dv) & J)]


# ------------------------------------------------------------------ compute

def compute():
    out = {}
    chain2 = [[True, True], [False, True]]
    out["chain2_simplices1"] = brute_simplices1(chain2)
    out["chain2_simplices2_count"] = brute_simplices2_count(chain2)
    chain3 = [[i <= j for j in range(3)] for i in range(3)]
    out["chain3_simplices2_count"] = brute_simplices2_count(chain3)

    h1 = {}
    for n in (3, 4, 5):
        leq, _ = from_sets(circle_sets(n))
        h1[f"circle{n}"] = order_complex_h1(leq)
        out[f"circle{n}_directed"] = directed(leq)
    # C4 x C4 with componentwise order
    leq4, _ = from_sets(circle_sets(4))
    m = len(leq4)
    prod = [[leq4[i // m][j // m] and leq4[i % m][j % m] for j in range(m * m)]
            for i in range(m * m)]
    h1["circle4xcircle4"] = order_complex_h1(prod)
    lattices = {}
    for kind, size, T, mb in (("cylinder", 4, 2, 2), ("cylinder", 4, 2, 3), ("cylinder", 5, 2, 3),
                              ("cylinder", 6, 2, 3), ("strip", 5, 2, 3), ("strip", 5, 2, 5),
                              ("strip", 7, 3, 3)):
        leq, dis, diamonds, related, verts = null_lattice_diamonds(kind, size, T, mb)
        key = f"{kind}{size}_{T}_{mb}"
        h1[key] = order_complex_h1(leq)
        entry = {"n": len(leq), "directed": directed(leq),
                 "has_top": any(all(leq[i][j] for i in range(len(leq))) for j in range(len(leq)))}
        if kind == "cylinder" and size == 6:
            pun = {}
            for x in ((0, 0), (0, 1), (3, 0)):
                mem = puncture_members(leq, dis, diamonds, related, verts, x)
                downs = all(connected(leq, [i for i in mem if leq[i][o]])
                            for o in range(len(leq)) if x in diamonds[o])
                comps = all(connected(leq, [i for i in mem if dis[a][i]]) for a in mem)
                pun[f"{x[0]}_{x[1]}"] = {
                    "size": len(mem), "connected": connected(leq, mem),
                    "restricted_downsets_connected": downs,
                    "complements_connected": comps,
                    "perp_pairs_connected": perp_pairs_connected(leq, dis, mem)}
            entry["punctures"] = pun
        lattices[key] = entry
    out["h1"] = {k: [r, t] for k, (r, t) in h1.items()}
    out["lattices"] = lattices
    # causal complement of an arc in C_n: scan the matrix directly
    leq, dis = from_sets(circle_sets(5))
    arc = 5 + 1                                     # points {1, 2}
    out["circle5_arc1_complement"] = [j for j in range(10) if dis[arc][j]]
    return out


def frozen():
    return json.loads(DATA.read_text())


if __name__ == "__main__":
    res = compute()
    DATA.parent.mkdir(exist_ok=True)
    DATA.write_text(json.dumps(res, indent=1, sort_keys=True) + "\n")
    json.dump(res, sys.stdout, sort_keys=True)
    print()

"""Small posets, nets and cocycles with known answers."""

import numpy as np

from .nets import Algebra, LocalNet, coboundary, qubit_net, random_local_unitary
from .poset import Poset, Sieve, transitive_closure
from .spacetime import Puncture


def chain(n):
    leq = np.triu(np.ones((n, n), dtype=bool))
    return Poset(leq, np.zeros((n, n), dtype=bool), [str(i) for i in range(n)])


def antichain(n=2, disjoint=True):
    dis = ~np.eye(n, dtype=bool) if disjoint else np.zeros((n, n), dtype=bool)
    return Poset(np.eye(n, dtype=bool), dis)


def circle_poset(n):
    """Points 0..n-1 and arcs n..2n-1, arc n+i covering points i and i+1 mod n.

    Elements are disjoint when their point sets are.
    """
    if n < 3:
        raise ValueError("a circle needs at least three arcs")
    sets = [frozenset([i]) for i in range(n)] + [frozenset([i, (i + 1) % n]) for i in range(n)]
    return _from_sets(sets, [f"p{i}" for i in range(n)] + [f"arc{i}" for i in range(n)])


def circle_footprints(n):
    return [{i} for i in range(n)] + [{i, (i + 1) % n} for i in range(n)]


def circle_punctures(n):
    """K_x on the circle: elements avoiding point x, points ordered far to near."""
    sets = circle_footprints(n)
    out = []
    for x in range(n):
        members = [i for i, s in enumerate(sets) if x not in s]
        dist = lambda i: min((i - x) % n, (x - i) % n)
        seq = sorted((i for i in range(n) if i != x), key=lambda i: (-dist(i), i))
        out.append(Puncture(f"p{x}", (x,), Sieve(members), tuple(seq)))
    return out


def _from_sets(sets, labels=None):
    leq = np.array([[a <= b for b in sets] for a in sets])
    dis = np.array([[not (a & b) for b in sets] for a in sets])
    return Poset(leq, dis, labels)


def product_poset(p, q):
    """Componentwise order; disjoint when both components are."""
    leq = np.kron(p.leq, q.leq).astype(bool)
    dis = np.kron(p.disjoint, q.disjoint).astype(bool)
    return Poset(leq, dis)


def random_directed_poset(n, rng, density=0.3):
    """Random order on n elements with a top element (hence directed).

    A finite directed poset has a greatest element, so no element can be
    disjoint from it; the disjointness relation is left empty.
    """
    leq = np.eye(n, dtype=bool)
    perm = rng.permutation(n - 1)
    for i in range(n - 1):
        for j in range(i + 1, n - 1):
            if rng.random() < density:
                leq[perm[i], perm[j]] = True
    leq[:, n - 1] = True
    leq = transitive_closure(leq)
    return Poset(leq, np.zeros((n, n), dtype=bool))


def diamond_footprints(dp):
    """Spatial sites touched by each diamond."""
    return [{v[0] for v in d.vertices} for d in dp.diamonds]


def diamond_qubit_net(dp):
    return qubit_net(diamond_footprints(dp), dp.lattice.size)


def circle_qubit_net(n):
    return qubit_net(circle_footprints(n), n)


def block_diagonal_net(p, d=2):
    """Every algebra is the diagonal algebra: abelian, causal, not irreducible."""
    diag = [np.diag(np.eye(d)[k]).astype(complex) for k in range(d)]
    alg = Algebra.generated(d, diag)
    return LocalNet(d, [alg] * p.n)


def local_unitaries(net, rng, elements=None):
    elements = range(net.n) if elements is None else elements
    return {a: random_local_unitary(net.algebras[a], rng) for a in elements}


def random_coboundary(p, net, rng, members=None):
    """z(b) = W[d0] W[d1]^* with W[a] a random unitary of A(a)."""
    W = local_unitaries(net, rng)
    return coboundary(p, W, members), W

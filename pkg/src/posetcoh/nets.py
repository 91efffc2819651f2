"""Finite-dimensional nets of local algebras, unitary 1-cocycles and their arrows."""

import numpy as np

from . import TAU, TAU_ALG
from .homotopy import GroupPresentation, integer_cocycle, spanning_tree
from .poset import (Path, Simplex1, components, find_path,
                    is_refinement, iter_simplices1, iter_simplices2)


class NetError(ValueError):
    pass


class CocycleError(ValueError):
    pass


def _vec(m):
    return np.asarray(m, dtype=complex).reshape(-1)


def orthonormal_basis(mats, d, tol=TAU_ALG):
    """Hilbert-Schmidt orthonormal rows spanning the given matrices."""
    if len(mats) == 0:
        return np.zeros((0, d * d), dtype=complex)
    A = np.array([_vec(m) for m in mats])
    u, s, vh = np.linalg.svd(A, full_matrices=False)
    keep = s > tol * max(1.0, s[0])
    return vh[keep]


class Algebra:
    """A *-closed unital subalgebra of M_d stored by an orthonormal basis."""

    def __init__(self, d, basis):
        self.d = d
        self.basis = basis          # (k, d*d) rows
        self._proj = None

    @classmethod
    def full(cls, d):
        return cls(d, np.eye(d * d, dtype=complex))

    @classmethod
    def scalars(cls, d):
        return cls(d, _vec(np.eye(d))[None, :] / np.sqrt(d))

    @classmethod
    def generated(cls, d, gens, tol=TAU_ALG):
        """Smallest *-algebra containing the generators and the identity."""
        words = [np.eye(d, dtype=complex)]
        for g in gens:
            g = np.asarray(g, dtype=complex)
            if g.shape != (d, d):
                raise NetError(f"generator of shape {g.shape} in a net of dimension {d}")
            words += [g, g.conj().T]
        basis = orthonormal_basis(words, d, tol)
        while True:
            mats = [b.reshape(d, d) for b in basis]
            prods = [x @ y for x in mats for y in mats]
            new = orthonormal_basis(list(mats) + prods, d, tol)
            if len(new) == len(basis):
                return cls(d, new)
            basis = new

    @property
    def dim(self):
        return len(self.basis)

    @property
    def projector(self):
        if self._proj is None:
            self._proj = self.basis.T @ self.basis.conj()
        return self._proj

    def matrices(self):
        return [b.reshape(self.d, self.d) for b in self.basis]

    def generators(self):
        """A generating set; the basis unless a smaller one is known."""
        gens = getattr(self, "gens", None)
        return self.matrices() if gens is None else gens

    def residual(self, m):
        v = _vec(m)
        return float(np.linalg.norm(v - self.projector @ v))

    def contains(self, m, tol=TAU_ALG):
        return self.residual(m) <= tol * max(1.0, float(np.linalg.norm(m)))

    def includes(self, other, tol=TAU_ALG):
        """Largest residual of other's basis projected into self."""
        if other.dim == 0:
            return 0.0
        r = other.basis.T - self.projector @ other.basis.T
        return float(np.abs(r).max()) if r.size else 0.0

    def __eq__(self, other):
        return (isinstance(other, Algebra) and self.d == other.d and self.dim == other.dim
                and self.includes(other) <= TAU_ALG)


def commutant(d, mats, tol=TAU_ALG):
    """Basis of {X : XA = AX for every A in mats}."""
    eye = np.eye(d)
    rows = [np.kron(np.asarray(a), eye) - np.kron(eye, np.asarray(a).T) for a in mats]
    if not rows:
        return Algebra.full(d)
    M = np.vstack(rows)
    G = M.conj().T @ M
    w, v = np.linalg.eigh(G)
    keep = w <= tol * max(1.0, w[-1])
    return Algebra(d, v[:, keep].T)


class LocalNet:
    """Element -> algebra. mode is "full" (M_d everywhere) or "subalgebra"."""

    def __init__(self, d, algebras, mode="subalgebra"):
        self.d = d
        self.algebras = list(algebras)
        self.mode = mode

    @classmethod
    def full(cls, d, n):
        a = Algebra.full(d)
        return cls(d, [a] * n, "full")

    @classmethod
    def from_generators(cls, d, gens):
        """gens: list (one entry per element) of lists of generator matrices."""
        cache = {}
        algs = []
        for g in gens:
            key = tuple(np.asarray(x, dtype=complex).tobytes() for x in g)
            if key not in cache:
                cache[key] = Algebra.generated(d, g)
                cache[key].gens = [np.asarray(x, dtype=complex) for x in g]
            algs.append(cache[key])
        return cls(d, algs, "subalgebra")

    @property
    def n(self):
        return len(self.algebras)

    def algebra(self, a):
        return self.algebras[a]

    def generated(self, members):
        """The algebra generated by A(a) for a in members."""
        algs = [self.algebras[a] for a in members]
        if algs and all(hasattr(x, "footprint") for x in algs):
            return pauli_algebra(frozenset().union(*(x.footprint for x in algs)), self.n_sites)
        mats = []
        seen = set()
        for a in members:
            alg = self.algebras[a]
            if id(alg) in seen:
                continue
            seen.add(id(alg))
            mats += alg.generators()
        return Algebra.generated(self.d, mats)


_PAULI = [np.eye(2, dtype=complex), np.array([[0, 1], [1, 0]], dtype=complex),
          np.array([[0, -1j], [1j, 0]]), np.array([[1, 0], [0, -1]], dtype=complex)]


def _site_op(m, site, n_sites):
    return np.kron(np.kron(np.eye(2 ** site), m), np.eye(2 ** (n_sites - site - 1)))


def pauli_algebra(sites, n_sites):
    """All Pauli strings supported on the given qubits, normalised."""
    from itertools import product
    sites = sorted(sites)
    d = 2 ** n_sites
    rows = []
    for labels in product(range(4), repeat=len(sites)):
        choice = dict(zip(sites, labels))
        m = np.eye(1, dtype=complex)
        for k in range(n_sites):
            m = np.kron(m, _PAULI[choice.get(k, 0)])
        rows.append(_vec(m) / np.sqrt(d))
    alg = Algebra(d, np.array(rows))
    alg.footprint = frozenset(sites)
    alg.gens = [_site_op(_PAULI[k], s, n_sites) for s in sites for k in (1, 3)]
    return alg


def qubit_net(footprints, n_sites):
    """Tensor-product net: A(a) is the full matrix algebra on the qubits in footprints[a]."""
    cache = {}
    algs = []
    for fp in footprints:
        fp = frozenset(fp)
        if fp not in cache:
            cache[fp] = pauli_algebra(fp, n_sites)
        algs.append(cache[fp])
    net = LocalNet(2 ** n_sites, algs, "subalgebra")
    net.n_sites = n_sites
    return net


def scalar_net(n):
    return LocalNet.full(1, n)


# ------------------------------------------------------------ validators

class Row(tuple):
    """(check, ok, witness, value)"""

    def __new__(cls, check, ok, witness=None, value=0.0):
        return super().__new__(cls, (check, bool(ok), witness, float(value)))

    check = property(lambda s: s[0])
    ok = property(lambda s: s[1])
    witness = property(lambda s: s[2])
    value = property(lambda s: s[3])


class Report(list):
    @property
    def ok(self):
        return all(r.ok for r in self)

    def failures(self):
        return [r for r in self if not r.ok]

    def row(self, check):
        return next(r for r in self if r.check == check)


def validate_net(net, p, tol=TAU_ALG):
    if net.n != p.n:
        raise NetError(f"net has {net.n} algebras for a poset of {p.n} elements")
    for alg in net.algebras:
        if alg.d != net.d:
            raise NetError("algebras of different dimensions in one net")
    rep = Report()
    worst, wit = 0.0, None
    for i, j in np.argwhere(p.leq):
        i, j = int(i), int(j)
        r = net.algebras[j].includes(net.algebras[i])
        if r > worst:
            worst, wit = r, (i, j)
    rep.append(Row("isotony", worst <= tol, wit, worst))
    worst, wit = 0.0, None
    done = set()
    for i, j in np.argwhere(np.triu(p.disjoint)):
        i, j = int(i), int(j)
        key = (id(net.algebras[i]), id(net.algebras[j]))
        if key in done:
            continue
        done.add(key)
        r = _max_commutator(net.algebras[i], net.algebras[j])
        if r > worst:
            worst, wit = r, (i, j)
    rep.append(Row("causality", worst <= tol, wit, worst))
    comm = commutant(net.d, [m for alg in _distinct(net.algebras) for m in alg.generators()])
    rep.append(Row("irreducibility", comm.dim == 1, None if comm.dim == 1 else comm.dim, comm.dim))
    return rep


def _distinct(algs):
    seen = {}
    for a in algs:
        seen.setdefault(id(a), a)
    return list(seen.values())


def _max_commutator(A, B):
    worst = 0.0
    for x in A.generators():
        for y in B.generators():
            worst = max(worst, float(np.linalg.norm(x @ y - y @ x, 2)))
    return worst


def relative_commutant(amb, mats, tol=TAU_ALG):
    """Elements of the algebra amb commuting with every matrix in mats."""
    if not len(mats):
        return amb
    d = amb.d
    B = amb.basis.reshape(-1, d, d)
    G = np.zeros((len(B), len(B)), dtype=complex)
    for A in mats:
        C = (B @ A - A @ B).reshape(len(B), -1)
        G += C.conj() @ C.T
    w, v = np.linalg.eigh(G)
    keep = v[:, w <= tol * max(1.0, float(w[-1]))]
    out = np.tensordot(keep.T, B, axes=1)
    return Algebra(d, orthonormal_basis(list(out), d, tol))


def haag_duality(net, p, members=None, tol=TAU_ALG):
    """A(o) equals the commutant of the algebras disjoint from o, relative to the
    algebra generated by members.

    With members = a puncture this is the punctured form. The report names the
    first element where the relative commutant is too large.
    """
    mem = list(range(p.n)) if members is None else sorted(members)
    amb = net.generated(mem)
    rep = Report()
    bad = None
    cache = {}
    for o in mem:
        perp = tuple(a for a in mem if p.disjoint[o, a])
        if perp not in cache:
            algs = _distinct([net.algebras[a] for a in perp])
            gens = [m for alg in algs for m in alg.generators()]
            cache[perp] = relative_commutant(amb, gens, tol)
        comm = cache[perp]
        if comm.dim != net.algebras[o].dim or net.algebras[o].includes(comm) > tol:
            bad = (o, comm.dim, net.algebras[o].dim)
            break
    rep.append(Row("duality", bad is None, bad, 0.0 if bad is None else bad[1] - bad[2]))
    return rep


# ------------------------------------------------------------ cocycles

def _unitary_defect(u):
    return float(np.linalg.norm(u.conj().T @ u - np.eye(len(u)), 2))


class Cocycle:
    """Unitary matrices on the 1-simplices supported in `members`."""

    def __init__(self, p, entries, d=None, members=None, name=""):
        self.p = p
        self.entries = {b if type(b) is Simplex1 else Simplex1(*b): np.asarray(u, dtype=complex)
                        for b, u in entries.items()}
        if d is None:
            d = len(next(iter(self.entries.values()))) if self.entries else 1
        self.d = d
        self.members = frozenset(range(p.n)) if members is None else frozenset(members)
        self.name = name

    def __call__(self, b):
        try:
            return self.entries[b]
        except KeyError:
            raise CocycleError(f"no entry for {tuple(b)}") from None

    def __eq__(self, other):
        return (isinstance(other, Cocycle) and self.entries.keys() == other.entries.keys()
                and all(np.array_equal(u, other.entries[b]) for b, u in self.entries.items()))

    def distance(self, other):
        if self.entries.keys() != other.entries.keys():
            return np.inf
        return max((float(np.abs(u - other.entries[b]).max()) for b, u in self.entries.items()),
                   default=0.0)

    def evaluate(self, path):
        out = np.eye(self.d, dtype=complex)
        for b in path:
            out = self(b) @ out
        return out

    def simplices(self):
        return sorted(self.entries)


def evaluate(z, path):
    return z.evaluate(path)


def _simplices(p, members):
    return list(iter_simplices1(p, None if len(members) == p.n else members))


def trivial_cocycle(p, d=1, members=None):
    members = frozenset(range(p.n)) if members is None else frozenset(members)
    one = np.eye(d, dtype=complex)
    return Cocycle(p, {b: one for b in _simplices(p, members)}, d, members, "iota")


def coboundary(p, W, members=None, name="coboundary"):
    """z(b) = W[d0] W[d1]^*; W maps elements to unitaries."""
    members = frozenset(range(p.n)) if members is None else frozenset(members)
    ent = {b: W[b.d0] @ W[b.d1].conj().T for b in _simplices(p, members)}
    d = len(next(iter(W.values())))
    return Cocycle(p, ent, d, members, name)


def winding_cocycle(p, theta, basepoint=0, d=1, g=None, column=0):
    """exp(i theta k(b)) with k the integer cocycle dual to the first free generator."""
    g = g or GroupPresentation(p, basepoint)
    k = integer_cocycle(g)
    if not k or not any(any(v) for v in k.values()):
        raise CocycleError("the poset has no free first homology to wind around")
    one = np.eye(d, dtype=complex)
    ent = {b: np.exp(1j * theta * v[column]) * one for b, v in k.items()}
    z = Cocycle(p, ent, d, None, f"winding({theta:g})")
    z.presentation = g
    return z


def random_local_unitary(alg, rng):
    """exp(iH) with H a random self-adjoint element of the algebra."""
    d = alg.d
    coeffs = rng.normal(size=alg.dim) + 1j * rng.normal(size=alg.dim)
    m = sum(c * b.reshape(d, d) for c, b in zip(coeffs, alg.basis))
    h = (m + m.conj().T) / 2
    w, v = np.linalg.eigh(h)
    return (v * np.exp(1j * w)) @ v.conj().T


def check_cocycle(z, net=None, tol=TAU, tol_alg=TAU_ALG):
    """Unitarity, the cocycle identity on every 2-simplex, and locality."""
    rep = Report()
    worst, wit = 0.0, None
    for b in z.simplices():
        r = _unitary_defect(z(b))
        if r > worst:
            worst, wit = r, b
    rep.append(Row("unitarity", worst <= tol, wit, worst))
    worst, wit = _cocycle_defect(z)
    rep.append(Row("cocycle identity", worst <= tol, wit, worst))
    if net is not None:
        worst, wit = 0.0, None
        for b in z.simplices():
            r = net.algebras[b.support].residual(z(b))
            if r > worst:
                worst, wit = r, b
        rep.append(Row("locality", worst <= tol_alg, wit, worst))
    return rep


def _cocycle_defect(z):
    worst, wit = 0.0, None
    ent = z.entries
    for s in sorted(z.members):
        for c in iter_simplices2(z.p, s):
            if c.f0 not in ent or c.f1 not in ent or c.f2 not in ent:
                continue
            r = float(np.abs(ent[c.f0] @ ent[c.f2] - ent[c.f1]).max())
            if r > worst:
                worst, wit = r, c
    return worst, wit


def _region(z, region):
    mem = sorted(z.members if region is None else region)
    return mem


def _tree(p, mem):
    comps = components(p, mem)
    if len(comps) > 1:
        from .homotopy import NotPathwiseConnected
        raise NotPathwiseConnected(comps[0][0], comps[1][0])
    root = mem[0]
    return root, spanning_tree(p, root, mem)


def transport(z, tree):
    """V_a = z(tree path from the root to a)."""
    out = {}
    for a, steps in tree.items():
        out[a] = z.evaluate(steps) if steps else np.eye(z.d, dtype=complex)
    return out


class PathIndependence:
    def __init__(self, ok, witness=None, value=None, deviation=0.0):
        self.ok = ok
        self.witness = witness        # the failing fundamental cycle (a Path)
        self.value = value
        self.deviation = deviation

    def __bool__(self):
        return self.ok


def check_path_independence(z, region=None, tol=TAU):
    p = z.p
    mem = _region(z, region)
    root, tree = _tree(p, mem)
    V = transport(z, tree)
    inside = set(mem)
    worst = (0.0, None, None)
    for b in iter_simplices1(p, mem if len(mem) < p.n else None):
        if not (b.support in inside):
            continue
        loop = V[b.d0].conj().T @ z(b) @ V[b.d1]
        dev = float(np.abs(loop - np.eye(z.d)).max())
        if dev > worst[0]:
            worst = (dev, b, loop)
    dev, b, loop = worst
    if dev <= tol:
        return PathIndependence(True, deviation=dev)
    cycle = Path(list(tree[b.d1]) + [b] + [e.reversed() for e in reversed(tree[b.d0])])
    return PathIndependence(False, cycle, loop, dev)


class Trivialization:
    def __init__(self, ok, field=None, witness=None):
        self.ok = ok
        self.field = field
        self.witness = witness

    def __bool__(self):
        return self.ok


def trivialize(z, region=None, tol=TAU):
    """V with V[d0] z(b) V[d1]^* = 1, or the failing fundamental cycle."""
    pi = check_path_independence(z, region, tol)
    if not pi:
        return Trivialization(False, witness=pi.witness)
    root, tree = _tree(z.p, _region(z, region))
    V = {a: v.conj().T for a, v in transport(z, tree).items()}
    return Trivialization(True, V)


# ------------------------------------------------------------ intertwiners

class Intertwiner:
    def __init__(self, source, target, entries):
        self.source = source
        self.target = target
        self.entries = {int(a): np.asarray(t, dtype=complex) for a, t in entries.items()}

    def __getitem__(self, a):
        return self.entries[a]

    def defect(self):
        z, z1 = self.source, self.target
        worst, wit = 0.0, None
        for b in z.simplices():
            if b.d0 not in self.entries or b.d1 not in self.entries:
                continue
            r = float(np.abs(self[b.d0] @ z(b) - z1(b) @ self[b.d1]).max())
            if r > worst:
                worst, wit = r, b
        return worst, wit

    def locality(self, net):
        return max((net.algebras[a].residual(t) for a, t in self.entries.items()), default=0.0)

    def is_unitary(self, tol=TAU):
        return all(_unitary_defect(t) <= tol for t in self.entries.values())

    def compose(self, other):
        """self . other, with other in (z, z1) and self in (z1, z2)."""
        return Intertwiner(other.source, self.target,
                           {a: self[a] @ other[a] for a in self.entries})

    def adjoint(self):
        return Intertwiner(self.target, self.source,
                           {a: t.conj().T for a, t in self.entries.items()})

    def norms(self):
        return {a: float(np.linalg.norm(t, 2)) for a, t in self.entries.items()}


def identity_arrow(z):
    one = np.eye(z.d, dtype=complex)
    return Intertwiner(z, z, {a: one for a in z.members})


def transport_intertwiner(z, z1, t0, root=None, tree=None):
    """t_a = z1(p) t_root z(p)^* along tree paths."""
    mem = sorted(z.members)
    if tree is None:
        root, tree = _tree(z.p, mem)
    V, V1 = transport(z, tree), transport(z1, tree)
    return Intertwiner(z, z1, {a: V1[a] @ t0 @ V[a].conj().T for a in tree})


def intertwiner_space(z, z1, net=None, tol=1e-8):
    """Basis of the values t_root for arrows in (z, z1), with the tree used."""
    if z.members != z1.members:
        raise CocycleError("cocycles live on different regions")
    p = z.p
    mem = sorted(z.members)
    root, tree = _tree(p, mem)
    V, V1 = transport(z, tree), transport(z1, tree)
    d = z.d
    eye = np.eye(d)
    G = np.zeros((d * d, d * d), dtype=complex)
    for b in iter_simplices1(p, mem if len(mem) < p.n else None):
        if b.is_degenerate:
            continue
        L = V[b.d0].conj().T @ z(b) @ V[b.d1]
        L1 = V1[b.d0].conj().T @ z1(b) @ V1[b.d1]
        # T L - L1 T = 0, row-major vec: vec(AXB) = (A kron B^T) vec(X)
        M = np.kron(eye, L.T) - np.kron(L1, eye)
        G += M.conj().T @ M
    if net is not None:
        for a in mem:
            alg = net.algebras[a]
            if alg.dim == d * d:
                continue
            Q = np.eye(d * d) - alg.projector
            M = Q @ np.kron(V1[a], V[a].conj())
            G += M.conj().T @ M
    w, v = np.linalg.eigh(G)
    scale = max(1.0, float(w[-1])) if len(w) else 1.0
    keep = w <= tol * scale
    basis = [v[:, k].reshape(d, d) for k in np.flatnonzero(keep)]
    return basis, root, tree


def find_intertwiner(z, z1, net=None, unitary_only=True, tol=TAU, seed=0):
    basis, root, tree = intertwiner_space(z, z1, net)
    if not basis:
        return None
    if not unitary_only:
        t = transport_intertwiner(z, z1, basis[0], root, tree)
        t.space = basis
        return t
    rng = np.random.default_rng(seed)
    for _ in range(8):
        c = rng.normal(size=len(basis)) + 1j * rng.normal(size=len(basis))
        T = sum(ck * bk for ck, bk in zip(c, basis))
        u, s, vh = np.linalg.svd(T)
        if s[-1] <= 1e-6 * s[0]:
            continue
        U = u @ vh
        t = transport_intertwiner(z, z1, U, root, tree)
        worst, _ = t.defect()
        loc = t.locality(net) if net is not None else 0.0
        if worst <= max(tol, 1e-8) * 10 and loc <= TAU_ALG * 10:
            t.space = basis
            return t
    return None


# ------------------------------------------------------------ pi_1 representations

def induced_representation(z, g, tol=TAU):
    """Survivor generator -> z(fundamental cycle); relations are checked."""
    if g.basepoint not in z.members:
        raise CocycleError("basepoint outside the cocycle's region")
    V = transport(z, g.tree)
    d = z.d
    table = {}
    for b in g.survivors():
        table[b] = V[b.d0].conj().T @ z(b) @ V[b.d1]
    pos = {g.index[b]: table[b] for b in table}
    worst, wit = 0.0, None
    for r in g.tietze.relations:
        m = np.eye(d, dtype=complex)
        for x in r:
            u = pos[abs(x)]
            m = m @ (u if x > 0 else u.conj().T)
        dev = float(np.abs(m - np.eye(d)).max())
        if dev > worst:
            worst, wit = dev, r
    if worst > tol * max(1, len(g.tietze.relations)):
        raise CocycleError(f"relation {wit} fails by {worst:.3g}")
    return table


def represent(table, g, word):
    """Image of a word in the original letters under a representation table."""
    w = g.tietze.express(word)
    d = len(next(iter(table.values()))) if table else 1
    pos = {g.index[b]: u for b, u in table.items()}
    m = np.eye(d, dtype=complex)
    for x in w:
        u = pos[abs(x)]
        m = m @ (u if x > 0 else u.conj().T)
    return m


def equivalent_tables(t1, t2, tol=1e-8, seed=0):
    """Unitary U with U t1[g] U^* = t2[g] for every generator, or None."""
    keys = sorted(t1)
    if keys != sorted(t2):
        return None
    d = len(t1[keys[0]]) if keys else 1
    eye = np.eye(d)
    G = np.zeros((d * d, d * d), dtype=complex)
    for k in keys:
        M = np.kron(eye, t1[k].T) - np.kron(t2[k], eye)
        G += M.conj().T @ M
    w, v = np.linalg.eigh(G)
    keep = np.flatnonzero(w <= tol * max(1.0, float(w[-1])))
    if not keep.size:
        return None
    rng = np.random.default_rng(seed)
    for _ in range(8):
        c = rng.normal(size=keep.size) + 1j * rng.normal(size=keep.size)
        T = (v[:, keep] @ c).reshape(d, d)
        u, s, vh = np.linalg.svd(T)
        if s[-1] > 1e-6 * s[0]:
            return u @ vh
    return None


def equivalence_from_representations(z, z1, g, U):
    """Field V_a = V1_a U V_a^* relating z to z1, built from an intertwiner U of
    the induced representations."""
    V, V1 = transport(z, g.tree), transport(z1, g.tree)
    return {a: V1[a] @ U @ V[a].conj().T for a in g.tree}


# ------------------------------------------------------------ refinements

class RefinementError(ValueError):
    pass


def _check_refinement(sub, p):
    rep = is_refinement(sub, p, True)
    if not rep.ok:
        raise RefinementError(f"{rep.axiom}: witness {rep.witness}")


def restrict(obj, sub, p=None, check=True):
    """Cocycle or intertwiner restricted to the simplices inside sub."""
    sub = frozenset(int(s) for s in sub)
    if isinstance(obj, Intertwiner):
        src = restrict(obj.source, sub, p, check)
        tgt = restrict(obj.target, sub, p, check)
        return Intertwiner(src, tgt, {a: t for a, t in obj.entries.items() if a in sub})
    z = obj
    p = p or z.p
    if check:
        _check_refinement(sub, p)
    ent = {b: u for b, u in z.entries.items()
           if b.d0 in sub and b.d1 in sub and b.support in sub}
    return Cocycle(p, ent, z.d, sub, z.name)


def default_choice(sub, p):
    """f(O) = O on sub, else the smallest sub element below O."""
    sub = sorted(set(int(s) for s in sub))
    inside = set(sub)
    f = {}
    for o in range(p.n):
        if o in inside:
            f[o] = o
        else:
            below = [s for s in sub if p.leq[s, o]]
            if not below:
                raise RefinementError(f"no element of the refinement below {o}")
            f[o] = below[0]
    return f


def _check_choice(choice, sub, p):
    for o in range(p.n):
        fo = choice.get(o)
        if fo is None or fo not in sub:
            raise RefinementError(f"choice undefined or outside the refinement at {o}")
        if o in sub and fo != o:
            raise RefinementError(f"choice moves the refinement element {o}")
        if not p.leq[fo, o]:
            raise RefinementError(f"choice f({o}) = {fo} is not below {o}")


def extend(zhat, sub, p, choice=None, check=True):
    """The extension functor on objects: F(z)(b) = z(connecting path below |b|)."""
    sub = frozenset(int(s) for s in sub)
    if check:
        _check_refinement(sub, p)
    choice = default_choice(sub, p) if choice is None else choice
    _check_choice(choice, sub, p)
    ent = {}
    paths = {}
    for b in iter_simplices1(p):
        x, y = choice[b.d1], choice[b.d0]
        s = b.support
        if s in sub:
            ent[b] = zhat(Simplex1(x, y, s))
            continue
        key = (x, y, s)
        if key not in paths:
            q = find_path(p, x, y, members=sub, bound=s)
            if q is None:
                raise RefinementError(f"no connecting path from {x} to {y} below {s}")
            paths[key] = zhat.evaluate(q)
        ent[b] = paths[key]
    out = Cocycle(p, ent, zhat.d, None, zhat.name)
    out.choice = choice
    return out


def extend_arrow(that, sub, p, choice, zext, z1ext):
    return Intertwiner(zext, z1ext, {a: that[choice[a]] for a in range(p.n)})


def natural_iso(z, choice):
    """u(z)_a = z(a -> f(a), support a), an arrow from z to F(R(z))."""
    return {a: z(Simplex1(a, fa, a)) for a, fa in choice.items()}


# ------------------------------------------------------------ gluing

class OverlapConflict(Exception):
    def __init__(self, item, x1, x2, norm):
        super().__init__(f"{item} differs between {x1} and {x2} by {norm:.3g}")
        self.item, self.x1, self.x2, self.norm = item, x1, x2, norm


class IncompleteCover(Exception):
    def __init__(self, item):
        super().__init__(f"{item} lies in no puncture")
        self.item = item


class PunctureFamily:
    def __init__(self, punctures, locals_):
        self.punctures = list(punctures)
        self.locals = dict(locals_)
        for pk in self.punctures:
            if pk.id not in self.locals:
                raise CocycleError(f"no local datum for puncture {pk.id}")


class GlueResult:
    def __init__(self, cocycle, path_independence):
        self.cocycle = cocycle
        self.path_independence = path_independence


def glue(fam, p, tol=TAU, check_global=True):
    ent = {}
    origin = {}
    d = None
    for pk in fam.punctures:
        z = fam.locals[pk.id]
        d = z.d
        for b, u in z.entries.items():
            if b in ent:
                dev = float(np.abs(ent[b] - u).max())
                if dev > tol:
                    raise OverlapConflict(b, origin[b], pk.id, dev)
            else:
                ent[b] = u
                origin[b] = pk.id
    for b in iter_simplices1(p):
        if b not in ent:
            raise IncompleteCover(b)
    z = Cocycle(p, ent, d, None, "glued")
    pi = check_path_independence(z, None, tol) if check_global else None
    return GlueResult(z, pi)


def glue_intertwiner(fam, p, source, target, tol=TAU):
    ent = {}
    origin = {}
    for pk in fam.punctures:
        t = fam.locals[pk.id]
        for a, m in t.entries.items():
            if a in ent:
                dev = float(np.abs(ent[a] - m).max())
                if dev > tol:
                    raise OverlapConflict(a, origin[a], pk.id, dev)
            else:
                ent[a] = m
                origin[a] = pk.id
    for a in range(p.n):
        if a not in ent:
            raise IncompleteCover(a)
    return Intertwiner(source, target, ent)


def local_family(z, punctures):
    return PunctureFamily(punctures, {pk.id: restrict_to(z, pk.members) for pk in punctures})


def restrict_to(obj, members):
    """Plain restriction to a sieve, without refinement checks."""
    return restrict(obj, members, check=False)


def puncture_criterion(z, punctures, tol=TAU):
    """Local path-independence on every puncture against the global verdict.

    Returns (covered, locally independent, globally independent, witness).
    """
    p = z.p
    covered = set()
    for pk in punctures:
        covered |= set(pk.members)
    if covered != set(range(p.n)):
        missing = min(set(range(p.n)) - covered)
        return False, None, None, missing
    local = all(check_path_independence(restrict_to(z, pk.members), None, tol)
                for pk in punctures)
    glob = check_path_independence(z, None, tol)
    return True, local, bool(glob), glob.witness

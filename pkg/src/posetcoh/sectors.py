"""Tensor structure, symmetry, left inverses and conjugates of cocycles over punctures.

Every construction is first done inside one puncture (a chart) and then glued
over a family of charts covering the poset, with agreement checked on overlaps.
"""

from dataclasses import dataclass, field

import numpy as np

from . import TAU
from .nets import (Cocycle, IncompleteCover, Intertwiner, NetError, OverlapConflict,
                   Report, Row, check_path_independence, haag_duality, restrict_to)
from .poset import find_path, iter_simplices1, is_pathwise_connected

STABLE_WINDOW = 3


class SectorError(ValueError):
    pass


class NoFarElement(SectorError):
    pass


class NotStabilized(SectorError):
    def __init__(self, oscillation, anchor=None):
        super().__init__(f"transport sequence does not settle (oscillation {oscillation:.3g})")
        self.oscillation = oscillation
        self.anchor = anchor


class NotSimple(SectorError):
    pass


def _dist(a, b):
    return float(np.abs(a - b).max()) if np.size(a) else 0.0


class Chart:
    """One puncture K_x of a poset carrying a net.

    With require_duality the chart refuses nets failing punctured Haag duality.
    """

    def __init__(self, p, puncture, net, require_duality=True):
        self.p = p
        self.pk = puncture
        self.id = puncture.id
        self.net = net
        self.members = sorted(puncture.members)
        self.inside = frozenset(self.members)
        self.sequence = list(puncture.sequence)
        self._paths = {}
        self._starts = {}
        self._simplices = None
        if require_duality:
            rep = haag_duality(net, p, self.members)
            if not rep.ok:
                raise NetError(f"punctured duality fails on {self.id}: {rep[0].witness}")

    def __contains__(self, a):
        return a in self.inside

    def path(self, a, b):
        key = (a, b)
        if key not in self._paths:
            q = find_path(self.p, a, b, members=self.members)
            if q is None:
                raise SectorError(f"{a} and {b} are not connected inside {self.id}")
            self._paths[key] = q
        return self._paths[key]

    def starts(self, region):
        """Sequence elements disjoint from every element of region, nearest first."""
        key = tuple(region)
        if key not in self._starts:
            dis = self.p.disjoint
            self._starts[key] = [s for s in reversed(self.sequence)
                                 if all(dis[s, r] for r in key)]
        return self._starts[key]

    def complement_connected(self, a):
        comp = [b for b in self.members if self.p.disjoint[a, b]]
        return is_pathwise_connected(self.p, comp) if comp else True

    def simplices(self):
        if self._simplices is None:
            self._simplices = list(iter_simplices1(self.p, self.members))
        return self._simplices


def _supports(path):
    return sorted(set(b.support for b in path))


# ------------------------------------------------------------ localized morphisms

class LocalizedMorphism:
    """y^z(a): conjugation by z along a transport path from a far element into a.

    The far element depends on what is acted on: it is the nearest element of the
    puncture sequence disjoint from the region the operand is localized in.
    """

    def __init__(self, z, anchor, chart):
        if anchor not in chart:
            raise SectorError(f"{anchor} is not in {chart.id}")
        self.cocycle = z
        self.anchor = anchor
        self.chart = chart
        self.puncture = chart.id
        self._cache = {}

    def transport(self, region, alternative=False):
        starts = self.chart.starts(region)
        k = 1 if alternative else 0
        if len(starts) <= k:
            return None
        return self.chart.path(starts[k], self.anchor)

    def unitary(self, region, alternative=False):
        q = self.transport(region, alternative)
        if q is None:
            if self.cocycle.d == 1:
                return np.eye(1, dtype=complex)
            raise NoFarElement(f"no element of {self.puncture} is disjoint from {list(region)}")
        key = (q.start, alternative)
        if key not in self._cache:
            self._cache[key] = self.cocycle.evaluate(q)
        return self._cache[key]

    def __call__(self, A, region):
        Y = self.unitary(region)
        return Y @ A @ Y.conj().T

    def inverse(self, A, region):
        Y = self.unitary(region)
        return Y.conj().T @ A @ Y

    def well_definedness(self, regions=None):
        """Largest change of the action when the far element or the path changes."""
        ch = self.chart
        regions = regions or [[a1] for a1 in ch.members]
        worst = 0.0
        for region in regions:
            starts = ch.starts(region)
            if len(starts) < 2:
                continue
            Y1 = self.cocycle.evaluate(ch.path(starts[0], self.anchor))
            Y2 = self.cocycle.evaluate(ch.path(starts[1], self.anchor))
            # a second route: through the alternative start
            Y3 = self.cocycle.evaluate(ch.path(starts[1], self.anchor)) @ \
                self.cocycle.evaluate(ch.path(starts[0], starts[1]))
            for a1 in region:
                for A in ch.net.algebras[a1].generators():
                    ref = Y1 @ A @ Y1.conj().T
                    worst = max(worst, _dist(ref, Y2 @ A @ Y2.conj().T),
                                _dist(ref, Y3 @ A @ Y3.conj().T))
        return worst

    def localization(self):
        """Largest movement of A(a1) for a1 disjoint from the anchor."""
        ch = self.chart
        worst = 0.0
        for a1 in ch.members:
            if not ch.p.disjoint[a1, self.anchor]:
                continue
            for A in ch.net.algebras[a1].generators():
                worst = max(worst, _dist(self(A, [a1]), A))
        return worst


def localized_endomorphism(z, a, chart, tol=TAU):
    z_x = _on_chart(z, chart)
    pi = check_path_independence(z_x, None, tol)
    if not pi:
        raise SectorError(f"cocycle is not path-independent on {chart.id}")
    y = LocalizedMorphism(z_x, a, chart)
    if not chart.starts([a]) and z.d > 1:
        raise NoFarElement(f"no element of {chart.id} is disjoint from {a}")
    y.complement_connected = chart.complement_connected(a)
    return y


def _on_chart(z, chart):
    if z.members == chart.inside:
        return z
    return restrict_to(z, chart.members)


# ------------------------------------------------------------ local constructions

class LocalSectors:
    """Tensor product, symmetry, left inverse and conjugation inside one chart."""

    def __init__(self, chart, tol=TAU):
        self.chart = chart
        self.tol = tol
        self._y = {}
        self._pairs = {}

    def y(self, z, a):
        key = (id(z), a)
        if key not in self._y:
            # keep z alive so that its id is not reused
            self._y[key] = (z, LocalizedMorphism(_on_chart(z, self.chart), a, self.chart))
        return self._y[key][1]

    def cross(self, z, p, z1, q):
        """z(p) x z1(q) = z(p) y^z(start of p)(z1(q))."""
        zp = z.evaluate(p)
        z1q = z1.evaluate(q)
        return zp @ self.y(z, p.start)(z1q, _supports(q))

    def tensor(self, z, z1):
        ch = self.chart
        bs = ch.simplices()
        Y = {}
        for b in bs:
            if (b.d1, b.support) not in Y:
                Y[b.d1, b.support] = self.y(z, b.d1).unitary([b.support])
        Ys = np.stack([Y[b.d1, b.support] for b in bs])
        Z = np.stack([z(b) for b in bs])
        Z1 = np.stack([z1(b) for b in bs])
        out = Z @ Ys @ Z1 @ Ys.conj().transpose(0, 2, 1)
        return Cocycle(ch.p, dict(zip(bs, out)), z.d, ch.members, f"({z.name}x{z1.name})")

    def tensor_arrows(self, t, s, z):
        """(t x s)_a = t_a y^z(a)(s_a), with t starting at z."""
        ch = self.chart
        return {a: t[a] @ self.y(z, a)(s[a], [a]) for a in ch.members}

    def perp_pair(self, a, skip=0):
        """Elements e, f of the chart with e disjoint from f, nearest to a first."""
        ch = self.chart
        if a not in self._pairs:
            cands = []
            for e in ch.members:
                for f in ch.members:
                    if e < f and ch.p.disjoint[e, f]:
                        cands.append((len(ch.path(a, e)) + len(ch.path(a, f)), e, f))
            self._pairs[a] = sorted(cands)
        cands = self._pairs[a]
        if len(cands) <= skip:
            raise SectorError(f"no disjoint pair reachable from {a} in {ch.id}")
        return cands[skip][1:]

    def symmetry_at(self, z, z1, a, skip=0):
        e, f = self.perp_pair(a, skip)
        p = self.chart.path(a, e)
        q = self.chart.path(a, f)
        zp, z1q = z.evaluate(p), z1.evaluate(q)
        left = z1q.conj().T @ self.y(z1, f)(zp.conj().T, _supports(p))
        right = zp @ self.y(z, a)(z1q, _supports(q))
        return left @ right

    def symmetry(self, z, z1):
        return {a: self.symmetry_at(z, z1, a) for a in self.chart.members}

    def symmetry_independence(self, z, z1):
        worst = 0.0
        for a in self.chart.members:
            try:
                alt = self.symmetry_at(z, z1, a, skip=1)
            except SectorError:
                continue
            worst = max(worst, _dist(self.symmetry_at(z, z1, a), alt))
        return worst

    def left_inverse(self, z, t, window=STABLE_WINDOW):
        """Stable value of z(p_n) t_a z(p_n)^* along the puncture sequence."""
        ch = self.chart
        seq = ch.sequence
        if len(seq) < window:
            raise NotStabilized(np.inf)
        out = {}
        for a in ch.members:
            vals = []
            for an in seq:
                zp = z.evaluate(ch.path(a, an))
                vals.append(zp @ t[a] @ zp.conj().T)
            tail = vals[-window:]
            osc = max(_dist(tail[0], v) for v in tail[1:])
            if osc > self.tol:
                raise NotStabilized(osc, a)
            out[a] = tail[-1]
        return out

    def asymptotically_disjoint(self):
        """Elements that the tail of the sequence is disjoint from."""
        ch = self.chart
        last = ch.sequence[-1] if ch.sequence else None
        return {a: bool(last is not None and ch.p.disjoint[a, last]) for a in ch.members}

    def conjugate(self, z):
        ch = self.chart
        ent = {}
        for b in ch.simplices():
            ent[b] = self.y(z, b.d0).inverse(z(b).conj().T, [b.support])
        return Cocycle(ch.p, ent, z.d, ch.members, f"conj({z.name})")


# ------------------------------------------------------------ global theory

class Sectors:
    """Charts covering a poset; local constructions glued with overlap checks."""

    def __init__(self, p, net, punctures, tol=TAU, require_duality=True):
        self.p = p
        self.net = net
        self.tol = tol
        self.charts = [Chart(p, pk, net, require_duality) for pk in punctures]
        self.local = [LocalSectors(ch, tol) for ch in self.charts]
        covered = set()
        for ch in self.charts:
            covered |= ch.inside
        self.missing = sorted(set(range(p.n)) - covered)
        self._tensors = {}
        self._symmetries = {}
        self._restricted = {}
        self._all = None

    def simplices(self):
        if self._all is None:
            self._all = list(iter_simplices1(self.p))
        return self._all

    def _require_cover(self):
        if self.missing:
            raise IncompleteCover(self.missing[0])

    def local_cocycle(self, z, k):
        key = (id(z), k)
        if key not in self._restricted:
            self._restricted[key] = (z, _on_chart(z, self.charts[k]))
        return self._restricted[key][1]

    def locally_trivial(self, z):
        return all(check_path_independence(self.local_cocycle(z, k), None, self.tol)
                   for k in range(len(self.charts)))

    def _glue(self, pieces, kind):
        ent, origin = {}, {}
        for ch, piece in zip(self.charts, pieces):
            shared = [key for key in piece if key in ent]
            if shared:
                diff = np.stack([ent[k] for k in shared]) - np.stack([piece[k] for k in shared])
                dev = np.abs(diff).reshape(len(shared), -1).max(axis=1)
                bad = np.flatnonzero(dev > self.tol)
                if bad.size:
                    key = shared[bad[0]]
                    raise OverlapConflict(key, origin[key], ch.id, float(dev[bad[0]]))
            for key, m in piece.items():
                if key not in ent:
                    ent[key] = m
                    origin[key] = ch.id
        return ent

    def tensor(self, z, z1):
        key = (id(z), id(z1))
        if key not in self._tensors:
            self._tensors[key] = (z, z1, self._tensor(z, z1))
        return self._tensors[key][2]

    def _tensor(self, z, z1):
        self._require_cover()
        pieces = []
        for k, loc in enumerate(self.local):
            pieces.append(loc.tensor(self.local_cocycle(z, k), self.local_cocycle(z1, k)).entries)
        ent = self._glue(pieces, "simplex")
        for b in self.simplices():
            if b not in ent:
                raise IncompleteCover(b)
        return Cocycle(self.p, ent, z.d, None, f"({z.name}x{z1.name})")

    def tensor_arrows(self, t, s):
        self._require_cover()
        z = t.source
        pieces = []
        for k, loc in enumerate(self.local):
            pieces.append(loc.tensor_arrows(t.entries, s.entries, self.local_cocycle(z, k)))
        ent = self._glue(pieces, "element")
        src = self.tensor(t.source, s.source)
        tgt = self.tensor(t.target, s.target)
        return Intertwiner(src, tgt, ent)

    def symmetry(self, z, z1):
        key = (id(z), id(z1))
        if key not in self._symmetries:
            self._symmetries[key] = (z, z1, self._symmetry(z, z1))
        return self._symmetries[key][2]

    def _symmetry(self, z, z1):
        self._require_cover()
        pieces = []
        for k, loc in enumerate(self.local):
            pieces.append(loc.symmetry(self.local_cocycle(z, k), self.local_cocycle(z1, k)))
        ent = self._glue(pieces, "element")
        return Intertwiner(self.tensor(z, z1), self.tensor(z1, z), ent)

    def symmetry_independence(self, z, z1):
        return max(loc.symmetry_independence(self.local_cocycle(z, k), self.local_cocycle(z1, k))
                   for k, loc in enumerate(self.local))

    def left_inverse(self, z, t, window=STABLE_WINDOW):
        """t is an arrow (z x z1, z x z2); the result lives in (z1, z2)."""
        self._require_cover()
        pieces = []
        for k, loc in enumerate(self.local):
            pieces.append(loc.left_inverse(self.local_cocycle(z, k), t.entries, window))
        return self._glue(pieces, "element")

    def conjugate(self, z):
        self._require_cover()
        st = self.statistics(z)
        if not st.simple:
            raise NotSimple("conjugates are built for simple objects only")
        pieces = []
        for k, loc in enumerate(self.local):
            pieces.append(loc.conjugate(self.local_cocycle(z, k)).entries)
        ent = self._glue(pieces, "simplex")
        return Cocycle(self.p, ent, z.d, None, f"conj({z.name})")

    def statistics(self, z, window=STABLE_WINDOW):
        self._require_cover()
        eps = self.symmetry(z, z)
        d = z.d
        chi = None
        simple = True
        for a, e in eps.entries.items():
            c = e[0, 0]
            if _dist(e, c * np.eye(d)) > self.tol or min(abs(c - 1), abs(c + 1)) > self.tol:
                simple = False
                break
            sign = 1 if abs(c - 1) <= self.tol else -1
            if chi is None:
                chi = sign
            elif chi != sign:
                simple = False
                break
        report = StatisticsReport(simple, chi if simple else None)
        lams = []
        try:
            for k, loc in enumerate(self.local):
                ch = self.charts[k]
                phi = loc.left_inverse(self.local_cocycle(z, k),
                                       {a: eps.entries[a] for a in ch.members}, window)
                vals = [m[0, 0] for m in phi.values()]
                if any(_dist(m, m[0, 0] * np.eye(d)) > self.tol for m in phi.values()):
                    raise NotStabilized(0.0)
                if max(abs(v - vals[0]) for v in vals) > self.tol:
                    raise NotStabilized(max(abs(v - vals[0]) for v in vals))
                lams.append(vals[0])
            report.stabilized = True
            report.sequence_length = min(len(ch.sequence) for ch in self.charts)
            spread = max(abs(l - lams[0]) for l in lams)
            report.per_chart = [complex(l) for l in lams]
            if spread <= self.tol:
                lam = lams[0]
                report.parameter = complex(lam)
                if abs(lam) > 0:
                    dim = 1 / abs(lam)
                    if abs(dim - round(dim)) <= 1e-6 and round(dim) >= 1:
                        report.dimension = int(round(dim))
        except NotStabilized:
            report.stabilized = False
        return report


@dataclass
class StatisticsReport:
    simple: bool
    phase: int = None
    parameter: complex = None
    dimension: int = None
    stabilized: bool = False
    sequence_length: int = 0
    per_chart: list = field(default_factory=list)

    def to_json(self):
        lam = None if self.parameter is None else [self.parameter.real, self.parameter.imag]
        return {"simple": self.simple, "phase": self.phase, "parameter": lam,
                "dimension": self.dimension, "stabilized": self.stabilized,
                "sequence_length": self.sequence_length}


# ------------------------------------------------------------ module-level API

def tensor(z, z1, sectors):
    return sectors.tensor(z, z1)


def symmetry(z, z1, a, sectors):
    """The symmetry at one element, together with the full glued table."""
    table = sectors.symmetry(z, z1)
    return table[a], table


def left_inverse(z, t, sectors, window=STABLE_WINDOW):
    return sectors.left_inverse(z, t, window)


def statistics(z, sectors):
    return sectors.statistics(z)


def conjugate(z, sectors):
    return sectors.conjugate(z)


# ------------------------------------------------------------ axiom battery

def _arrow_dist(s, t):
    return max((_dist(s[a], t[a]) for a in s.entries), default=0.0)


def _compose(t, s):
    return Intertwiner(s.source, t.target, {a: t[a] @ s[a] for a in t.entries})


def _unit(z, n):
    one = np.eye(z.d, dtype=complex)
    return Intertwiner(z, z, {a: one for a in range(n)})


def verify_category_axioms(sectors, battery, arrows=(), tensor_fn=None, tol=TAU):
    """Rows (check, ok, witness, residual) for the tensor, symmetry, left-inverse
    and conjugate axioms over a battery of cocycles and arrows.

    tensor_fn replaces the tensor product on objects (fault injection).
    """
    S = sectors
    n = S.p.n
    tensor_fn = tensor_fn or S.tensor
    rep = {}

    def note(check, value, witness=None):
        old = rep.get(check)
        if old is None or value > old[1]:
            rep[check] = (witness, value)

    iota = None
    for z in battery:
        if z.name == "iota":
            iota = z
    arrows = list(arrows)
    for z in battery:
        arrows.append(_unit(z, n))

    # C*-structure
    rng = np.random.default_rng(0)
    for t in arrows:
        for s in arrows:
            if s.target is not t.source:
                continue
            al, be = rng.normal(size=2)
            lhs = {a: t[a] @ ((al * s[a]) + (be * s[a])) for a in t.entries}
            rhs = {a: al * (t[a] @ s[a]) + be * (t[a] @ s[a]) for a in t.entries}
            note("cstar.bilinearity", max(_dist(lhs[a], rhs[a]) for a in lhs), (t.source.name,))
        for a, m in t.entries.items():
            nn = np.linalg.norm(m, 2)
            note("cstar.norm", abs(np.linalg.norm(m.conj().T @ m, 2) - nn ** 2), (t.source.name, a))
        adj = t.adjoint().adjoint()
        note("cstar.involution", _arrow_dist(adj, t), (t.source.name,))

    # tensor on objects
    prods = {}
    for z in battery:
        for z1 in battery:
            prods[id(z), id(z1)] = tensor_fn(z, z1)
    for z in battery:
        if iota is not None:
            note("tensor.unit", max(prods[id(iota), id(z)].distance(z),
                                    prods[id(z), id(iota)].distance(z)), (z.name,))
    for z in battery:
        for z1 in battery:
            zz = prods[id(z), id(z1)]
            local = S.locally_trivial(zz)
            note("tensor.local-path-independence", 0.0 if local else 1.0, (z.name, z1.name))
            if check_path_independence(z, None, tol) and check_path_independence(z1, None, tol):
                ok = bool(check_path_independence(zz, None, tol))
                note("tensor.path-independence", 0.0 if ok else 1.0, (z.name, z1.name))
            for z2 in battery[:3]:
                left = tensor_fn(zz, z2)
                right = tensor_fn(z, prods[id(z1), id(z2)])
                note("tensor.associativity", left.distance(right), (z.name, z1.name, z2.name))

    # tensor on arrows: exchange and units
    for z in battery:
        for z1 in battery:
            lhs = S.tensor_arrows(_unit(z, n), _unit(z1, n))
            ref = prods[id(z), id(z1)]
            note("tensor.functoriality",
                 max(_dist(lhs[a], np.eye(z.d)) for a in lhs.entries) +
                 lhs.source.distance(ref), (z.name, z1.name))
    for t in arrows:
        for s in arrows:
            for t1 in arrows:
                if t1.target is not t.source:
                    continue
                for s1 in arrows:
                    if s1.target is not s.source:
                        continue
                    a1 = _compose(S.tensor_arrows(t, s), S.tensor_arrows(t1, s1))
                    a2 = S.tensor_arrows(_compose(t, t1), _compose(s, s1))
                    note("tensor.exchange", _arrow_dist(a1, a2), (t.source.name, s.source.name))

    # symmetry
    eps = {}
    for z in battery:
        for z1 in battery:
            eps[id(z), id(z1)] = S.symmetry(z, z1)
    for z in battery:
        for z1 in battery:
            e = eps[id(z), id(z1)]
            worst, wit = e.defect()
            note("symmetry.intertwiner", worst, (z.name, z1.name, wit))
            e21 = eps[id(z1), id(z)]
            note("symmetry.ii", max(_dist(e[a].conj().T, e21[a]) for a in e.entries),
                 (z.name, z1.name))
            note("symmetry.iv", max(_dist(e[a] @ e21[a], np.eye(z.d)) for a in e.entries),
                 (z.name, z1.name))
            note("symmetry.independence", S.symmetry_independence(z, z1), (z.name, z1.name))
            if iota is not None and (z is iota or z1 is iota):
                note("symmetry.unit", max(_dist(e[a], np.eye(z.d)) for a in e.entries),
                     (z.name, z1.name))
            for z2 in battery[:3]:
                # eps(z, z1 x z2) = (1_z1 x eps(z, z2)) . (eps(z, z1) x 1_z2)
                lhs = S.symmetry(z, prods[id(z1), id(z2)])
                f1 = S.tensor_arrows(_unit(z1, n), eps[id(z), id(z2)])
                f2 = S.tensor_arrows(e, _unit(z2, n))
                rhs = {a: f1[a] @ f2[a] for a in lhs.entries}
                note("symmetry.iii", max(_dist(lhs[a], rhs[a]) for a in lhs.entries),
                     (z.name, z1.name, z2.name))
    for t in arrows:
        for s in arrows:
            # eps(z3, z4) (t x s) = (s x t) eps(z1, z2), t in (z2, z4), s in (z1, z3)
            e_src = S.symmetry(s.source, t.source)
            e_tgt = S.symmetry(s.target, t.target)
            ts = S.tensor_arrows(s, t)
            st = S.tensor_arrows(t, s)
            note("symmetry.i", max(_dist(e_tgt[a] @ ts[a], st[a] @ e_src[a])
                                   for a in ts.entries), (t.source.name, s.source.name))

    # left inverses
    for z in battery:
        try:
            if iota is not None:
                phi = S.left_inverse(z, _unit_on(S, prods[id(z), id(iota)]))
                note("left-inverse.iv", max(_dist(phi[a], np.eye(z.d)) for a in phi),
                     (z.name,))
            for t in arrows:
                # (i) with r = 1_z x t and t, s units: phi(1_z x t) = t
                r = S.tensor_arrows(_unit(z, n), t)
                phi = S.left_inverse(z, r)
                note("left-inverse.i", max(_dist(phi[a], t[a]) for a in phi),
                     (z.name, t.source.name))
                rr = S.tensor_arrows(r, _unit(t.source, n))
                phi2 = S.left_inverse(z, rr)
                rhs = S.tensor_arrows(Intertwiner(t.source, t.target, phi), _unit(t.source, n))
                note("left-inverse.ii", max(_dist(phi2[a], rhs[a]) for a in phi2),
                     (z.name, t.source.name))
                pos = S.left_inverse(z, Intertwiner(r.source, r.source,
                                                    {a: r[a].conj().T @ r[a] for a in r.entries}))
                lo = min(float(np.linalg.eigvalsh((m + m.conj().T) / 2).min()) for m in pos.values())
                note("left-inverse.iii", max(0.0, -lo), (z.name, t.source.name))
        except NotStabilized as e:
            note("left-inverse.stabilization", float("inf"), (z.name, e.anchor))

    # conjugates
    for z in battery:
        try:
            zb = S.conjugate(z)
        except (NotSimple, NotStabilized):
            continue
        zzb = S.tensor(z, zb)
        zbz = S.tensor(zb, z)
        one = np.eye(z.d)
        note("conjugate.product", max(max(_dist(u, one) for u in zzb.entries.values()),
                                      max(_dist(u, one) for u in zbz.entries.values())), (z.name,))
        # r = rbar = 1: rbar^* x 1_z . 1_z x r = 1_z
        r = Intertwiner(iota or zb, zbz, {a: one for a in range(n)})
        rbar = Intertwiner(iota or zb, zzb, {a: one for a in range(n)})
        left = S.tensor_arrows(rbar.adjoint(), _unit(z, n))
        right = S.tensor_arrows(_unit(z, n), r)
        note("conjugate.equations", max(_dist(left[a] @ right[a], one) for a in range(n)),
             (z.name,))

    out = Report()
    for check in sorted(rep):
        wit, value = rep[check]
        out.append(Row(check, value <= tol, None if value <= tol else wit, value))
    return out


def _unit_on(S, z):
    return _unit(z, S.p.n)

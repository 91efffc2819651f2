"""posetcoh command line: subcommands over the JSON formats of jsonio."""

import argparse
import os
import sys
import time
from contextlib import nullcontext
from pathlib import Path as FsPath

import numpy as np

from . import TAU, __version__
from . import jsonio as jio
from .fixtures import circle_footprints, circle_poset, circle_punctures, diamond_footprints
from .homotopy import (DEFAULT_DEPTH, DeformationError, HomotopyDecider, NotPathwiseConnected,
                       abelianization, pi1_presentation)
from .nets import (CocycleError, IncompleteCover, LocalNet, NetError, OverlapConflict,
                   PunctureFamily, RefinementError, check_cocycle, check_path_independence,
                   coboundary, extend, find_intertwiner, glue, haag_duality, induced_representation,
                   local_family, natural_iso, qubit_net, random_local_unitary, restrict,
                   restrict_to, validate_net, winding_cocycle)
from .poset import (Path, PosetError, Simplex1, Simplex2, check_order, is_directed,
                    is_pathwise_connected, is_refinement, validate_poset)
from .sectors import SectorError, Sectors, verify_category_axioms
from .spacetime import (Cylinder, LatticeError, Strip, covering_punctures,
                        generate_diamond_poset)

ANCHORS = {
    "poset": "order and disjointness axioms",
    "net": "net of local algebras",
    "duality": "punctured Haag duality",
    "pi1": "edge-path group",
    "homotopy": "elementary deformations",
    "cocycle": "1-cocycle axioms",
    "classify": "cocycle equivalence",
    "rep": "induced representation",
    "refine": "refinement equivalence",
    "glue": "gluing over punctures",
    "tensor": "tensor product",
    "symmetry": "symmetry",
    "statistics": "statistics parameter",
    "conjugate": "conjugate equations",
    "axioms": "tensor category axioms",
    "generate": "fixture generator",
    "error": "input",
}


class UsageError(Exception):
    pass


def plain(x):
    """JSON-ready copy of witnesses and values."""
    if isinstance(x, Simplex2):
        return {"f0": plain(x.f0), "f1": plain(x.f1), "f2": plain(x.f2), "support": x.support}
    if isinstance(x, (Simplex1, Path)):
        return jio.path_to_json(x) if isinstance(x, Path) else [x.d1, x.d0, x.support]
    if isinstance(x, dict):
        return {str(k): plain(v) for k, v in sorted(x.items(), key=lambda kv: str(kv[0]))}
    if isinstance(x, (set, frozenset)):
        return sorted(plain(v) for v in x)
    if isinstance(x, (list, tuple)):
        return [plain(v) for v in x]
    if isinstance(x, np.ndarray):
        return jio.matrix_to_json(x) if x.ndim == 2 else plain(x.tolist())
    if isinstance(x, (complex, np.complexfloating)):
        return [float(x.real), float(x.imag)]
    if isinstance(x, (np.bool_, bool)):
        return bool(x)
    if isinstance(x, np.integer):
        return int(x)
    if isinstance(x, np.floating):
        return float(x)
    return x


class Report:
    def __init__(self, command, header):
        self.command = command
        self.header = header
        self.rows = []
        self.result = {}
        self.timing = None

    def add(self, check, ok, witness=None, value=None, anchor=None):
        """ok is True, False or None (undecided)."""
        anchor = anchor or ANCHORS.get(check.split(".")[0], self.command)
        outcome = {True: "pass", False: "fail", None: "unknown"}[None if ok is None else bool(ok)]
        self.rows.append({"check": check, "anchor": anchor, "outcome": outcome,
                          "witness": plain(witness), "value": plain(value)})

    @property
    def status(self):
        outs = {r["outcome"] for r in self.rows}
        if "fail" in outs:
            return "fail"
        if "unknown" in outs:
            return "partial"
        return "pass"

    def to_json(self):
        out = {"command": self.command, "status": self.status, "header": self.header,
               "rows": sorted(self.rows, key=lambda r: r["check"]), "result": plain(self.result)}
        if self.timing is not None:
            out["timing_ms"] = self.timing
        return out

    def table(self):
        lines = [f"{self.command}: {self.status}"]
        for r in sorted(self.rows, key=lambda r: r["check"]):
            line = f"  {r['outcome'].upper():7s} {r['check']:34s} {r['anchor']}"
            if r["value"] is not None and not isinstance(r["value"], (list, dict)):
                line += f"  value={r['value']}"
            if r["outcome"] != "pass" and r["witness"] is not None:
                line += f"  witness={r['witness']}"
            lines.append(line)
        for k, v in sorted(self.result.items()):
            if isinstance(v, (int, float, str, bool)) or v is None:
                lines.append(f"  {k}: {v}")
        if self.timing is not None:
            lines.append(f"  time: {self.timing} ms")
        return "\n".join(lines)

    @property
    def exit_code(self):
        return 0 if self.status == "pass" else 1


# ------------------------------------------------------------------ loading

def _poset(args, attr="poset"):
    return jio.poset_from_json(jio.load_file(getattr(args, attr)), getattr(args, attr))


def _cocycle(path, p):
    return jio.cocycle_from_json(jio.load_file(path), p, str(path))


def _net(args, p, d):
    if getattr(args, "net", None):
        net = jio.net_from_json(jio.load_file(args.net), p.n, args.net)
        if net.d != d:
            raise jio.FormatError(args.net, f"net acts on C^{net.d}, cocycles on C^{d}")
        return net
    return LocalNet.full(d, p.n)


def _punctures(args, p):
    return jio.punctures_from_json(jio.load_file(args.punctures), p, args.punctures)


def _write(path, obj):
    FsPath(path).write_text(jio.dumps(obj) + "\n")


def _emit(args, rep, key, obj):
    """Write an artifact to -o, or keep it in the report."""
    if getattr(args, "output", None):
        _write(args.output, obj)
        rep.result[key + "_file"] = args.output
    else:
        rep.result[key] = obj


def _rows(rep, prefix, rows):
    for r in rows:
        rep.add(f"{prefix}.{r.check.replace(' ', '-')}", r.ok, r.witness, r.value)


# ------------------------------------------------------------------ commands

def cmd_validate(args, rep):
    p = _poset(args)
    bad = check_order(p.leq)
    rep.add("poset.order", bad is None, None if bad is None else [bad.axiom, bad.witness])
    v = validate_poset(p, require_disjointness=not args.no_disjointness_axioms)
    rep.add("poset.disjointness", v.ok, None if v.ok else [v.axiom, v.witness])
    rep.result.update(n=p.n, directed=bool(is_directed(p)), connected=bool(is_pathwise_connected(p)))
    if args.net:
        net = jio.net_from_json(jio.load_file(args.net), p.n, args.net)
        _rows(rep, "net", validate_net(net, p, args.tol_alg))
        if args.punctures:
            for pk in _punctures(args, p):
                r = haag_duality(net, p, pk.members, args.tol_alg)[0]
                rep.add(f"duality.{pk.id}", r.ok, r.witness, r.value)


def cmd_pi1(args, rep):
    p = _poset(args)
    if not 0 <= args.basepoint < p.n:
        raise UsageError(f"basepoint {args.basepoint} outside 0..{p.n - 1}")
    g = pi1_presentation(p, args.basepoint, args.relations)
    tz = g.tietze
    am = g.abelian_map
    rank, torsion = abelianization(g)
    # the Smith form of the raw relators and the one of the simplified presentation must agree
    agree = rank == am.free_rank and sorted(torsion) == sorted(am.torsion)
    rep.add("pi1.abelianization", agree, None if agree else [[rank, torsion], [am.free_rank, am.torsion]],
            rank)
    rep.result.update(
        basepoint=args.basepoint, generators=len(g.generators), relations=len(g.relations),
        relation_mode=g.mode, group=tz.kind(), survivors=[list(b) for b in g.survivors()],
        simplified_relations=[list(r) for r in tz.relations], rank=rank, torsion=list(torsion))


def cmd_homotopy(args, rep):
    p = _poset(args)
    paths = jio.paths_from_json(jio.load_file(args.paths), p, args.paths)
    if len(paths) < 2:
        raise jio.FormatError(args.paths, "need at least two paths")
    dec = HomotopyDecider(p, paths[0].start)
    verdicts = []
    for k, q in enumerate(paths[1:], start=1):
        try:
            v = dec.decide(paths[0], q, args.depth)
        except DeformationError as e:
            raise jio.FormatError(f"{args.paths}[{k}]", str(e)) from None
        ok = {"homotopic": True, "not-homotopic": False}.get(v.status)
        wit = [list(m) for m in v.witness] if v.homotopic else v.certificate
        rep.add(f"homotopy.0-{k}", ok, wit, v.method)
        verdicts.append({"pair": [0, k], "status": v.status, "method": v.method,
                         "moves": [[m.kind, m.position, plain(m.witness)] for m in v.witness]})
    rep.result["verdicts"] = verdicts


def cmd_cocycle_check(args, rep):
    p = _poset(args)
    z = _cocycle(args.cocycle, p)
    net = jio.net_from_json(jio.load_file(args.net), p.n, args.net) if args.net else None
    _rows(rep, "cocycle", check_cocycle(z, net, args.tol, args.tol_alg))
    try:
        pi = check_path_independence(z, None, args.tol)
    except NotPathwiseConnected as e:
        rep.add("cocycle.path-independence", False, list(e.witness), None)
        return
    rep.add("cocycle.path-independence", pi.ok, pi.witness, pi.deviation)


def cmd_classify(args, rep):
    p = _poset(args)
    z, z1 = _cocycle(args.z, p), _cocycle(args.z1, p)
    net = _net(args, p, z.d) if args.net else None
    t = find_intertwiner(z, z1, net, tol=args.tol, seed=args.seed)
    rep.add("classify.equivalent", t is not None, None, None)
    if t is not None:
        rep.result["space_dimension"] = len(t.space)
        _emit(args, rep, "arrow", jio.intertwiner_to_json(t))


def cmd_rep(args, rep):
    p = _poset(args)
    z = _cocycle(args.cocycle, p)
    g = pi1_presentation(p, args.basepoint)
    try:
        table = induced_representation(z, g, args.tol)
    except CocycleError as e:
        rep.add("rep.relations", False, str(e))
        return
    rep.add("rep.relations", True)
    rep.result.update(group=g.tietze.kind(),
                      table=[{"generator": list(b), "u": jio.matrix_to_json(u)}
                             for b, u in sorted(table.items())])


def _members(spec, n):
    if spec.endswith(".json"):
        obj = jio.load_file(spec)
        items = obj.get("members") if isinstance(obj, dict) else obj
    else:
        try:
            items = [int(x) for x in spec.split(",") if x.strip()]
        except ValueError:
            raise UsageError(f"cannot read element list {spec!r}") from None
    if not isinstance(items, list) or any(not isinstance(i, int) or not 0 <= i < n for i in items):
        raise jio.FormatError(spec, "expected a list of elements")
    return sorted(set(items))


def cmd_refine(args, rep):
    p = _poset(args)
    z = _cocycle(args.cocycle, p)
    sub = _members(args.sub, p.n)
    r = is_refinement(sub, p, True)
    rep.add("refine.is-refinement", r.ok, None if r.ok else [r.axiom, r.witness])
    if not r.ok:
        return
    try:
        zhat = restrict(z, sub, p)
        ext = extend(zhat, sub, p)
    except RefinementError as e:
        rep.add("refine.extension", False, str(e))
        return
    back = restrict(ext, sub, p)
    rep.add("refine.restrict-extend", back == zhat, None, zhat.distance(back))
    u = natural_iso(z, ext.choice)
    worst, wit = 0.0, None
    for b in z.simplices():
        res = float(np.abs(u[b.d0] @ z(b) - ext(b) @ u[b.d1]).max())
        if res > worst:
            worst, wit = res, b
    unit = max(float(np.abs(m.conj().T @ m - np.eye(z.d)).max()) for m in u.values())
    rep.add("refine.natural-iso", worst <= args.tol and unit <= args.tol, wit, max(worst, unit))
    _emit(args, rep, "extension", jio.cocycle_to_json(ext))


def cmd_glue(args, rep):
    p = _poset(args)
    pks = _punctures(args, p)
    z = _cocycle(args.cocycle, p)
    if args.locals:
        obj = jio.load_file(args.locals)
        if not isinstance(obj, dict) or not isinstance(obj.get("locals"), dict):
            raise jio.FormatError(args.locals, "expected {\"locals\": {puncture id: cocycle}}")
        loc = {k: jio.cocycle_from_json(v, p, f"{args.locals}.locals.{k}")
               for k, v in obj["locals"].items()}
        fam = PunctureFamily(pks, loc)
    else:
        fam = local_family(z, pks)
    for pk in pks:
        pi = check_path_independence(restrict_to(fam.locals[pk.id], pk.members), None, args.tol)
        rep.add(f"glue.local.{pk.id}", pi.ok, pi.witness, pi.deviation)
    try:
        res = glue(fam, p, args.tol)
    except IncompleteCover as e:
        rep.add("glue.cover", False, e.item)
        return
    except OverlapConflict as e:
        rep.add("glue.cover", True)
        rep.add("glue.overlap", False, [e.item, e.x1, e.x2], e.norm)
        return
    rep.add("glue.cover", True)
    rep.add("glue.overlap", True)
    rep.add("glue.round-trip", res.cocycle == z, None, res.cocycle.distance(z))
    pi = res.path_independence
    rep.add("glue.global-path-independence", pi.ok, pi.witness, pi.deviation)


def _sectors(args, p, d):
    net = _net(args, p, d)
    return Sectors(p, net, _punctures(args, p), args.tol, require_duality=not args.no_duality)


def cmd_tensor(args, rep):
    p = _poset(args)
    z, z1 = _cocycle(args.z, p), _cocycle(args.z1, p)
    S = _sectors(args, p, z.d)
    T = S.tensor(z, z1)
    _rows(rep, "tensor", check_cocycle(T, S.net, args.tol, args.tol_alg))
    rep.add("tensor.local-path-independence", S.locally_trivial(T))
    _emit(args, rep, "cocycle", jio.cocycle_to_json(T))


def cmd_symmetry(args, rep):
    p = _poset(args)
    z, z1 = _cocycle(args.z, p), _cocycle(args.z1, p)
    S = _sectors(args, p, z.d)
    e, e1 = S.symmetry(z, z1), S.symmetry(z1, z)
    worst, wit = e.defect()
    rep.add("symmetry.intertwiner", worst <= args.tol, wit, worst)
    inv = max(float(np.abs(e1[a] @ e[a] - np.eye(z.d)).max()) for a in e.entries)
    rep.add("symmetry.involution", inv <= args.tol, None, inv)
    ind = S.symmetry_independence(z, z1)
    rep.add("symmetry.independence", ind <= args.tol, None, ind)
    _emit(args, rep, "arrow", jio.intertwiner_to_json(e))


def cmd_statistics(args, rep):
    p = _poset(args)
    z = _cocycle(args.cocycle, p)
    S = _sectors(args, p, z.d)
    st = S.statistics(z)
    rep.add("statistics.simple", st.simple)
    rep.add("statistics.stabilized", st.stabilized, None, st.sequence_length)
    rep.add("statistics.dimension", None if st.dimension is None else True, None, st.dimension)
    rep.result.update(st.to_json())


def cmd_conjugate(args, rep):
    p = _poset(args)
    z = _cocycle(args.cocycle, p)
    S = _sectors(args, p, z.d)
    zb = S.conjugate(z)
    worst = 0.0
    for a, b in ((z, zb), (zb, z)):
        T = S.tensor(a, b)
        worst = max(worst, max(float(np.abs(u - np.eye(z.d)).max()) for u in T.entries.values()))
    rep.add("conjugate.product", worst <= args.tol, None, worst)
    _emit(args, rep, "cocycle", jio.cocycle_to_json(zb))


def cmd_axioms(args, rep):
    p = _poset(args)
    battery = [_cocycle(c, p) for c in args.cocycles]
    d = battery[0].d
    S = _sectors(args, p, d)
    for r in verify_category_axioms(S, battery, tol=args.tol):
        rep.add(f"axioms.{r.check}", r.ok, r.witness, r.value)


def cmd_generate(args, rep):
    kind = args.kind
    out = args.output
    stem = str(out)[:-5] if out and str(out).endswith(".json") else out
    if kind in ("cylinder", "strip"):
        size = args.m if kind == "cylinder" else args.width
        if size is None:
            raise UsageError(f"generate {kind} needs --{'m' if kind == 'cylinder' else 'width'}")
        lat = Cylinder(size, args.t) if kind == "cylinder" else Strip(size, args.t)
        dp = generate_diamond_poset(lat, args.max_base)
        p = dp.poset
        rep.result.update(n=p.n, lattice=kind, size=size, T=args.t, max_base=args.max_base)
        artifacts = {"poset": jio.poset_to_json(p), "diamonds": jio.diamonds_to_json(dp)}
        if args.punctures:
            pks = covering_punctures(dp)
            rep.add("generate.cover", pks is not None)
            if pks is not None:
                artifacts["punctures"] = jio.punctures_to_json(pks)
        if args.qubit_net:
            artifacts["net"] = jio.net_to_json(qubit_net(diamond_footprints(dp), lat.size))
    elif kind == "circle":
        p = circle_poset(args.m or 4)
        rep.result.update(n=p.n, lattice=kind, size=args.m or 4)
        artifacts = {"poset": jio.poset_to_json(p),
                     "punctures": jio.punctures_to_json(circle_punctures(args.m or 4))}
        if args.qubit_net:
            artifacts["net"] = jio.net_to_json(qubit_net(circle_footprints(args.m or 4), args.m or 4))
    elif kind in ("winding", "coboundary"):
        if not args.poset:
            raise UsageError(f"generate {kind} needs --poset")
        p = _poset(args)
        if kind == "winding":
            z = winding_cocycle(p, args.theta, args.basepoint)
        else:
            net = _net(args, p, args.d)
            rng = np.random.default_rng(args.seed)
            W = {a: random_local_unitary(net.algebras[a], rng) for a in range(p.n)}
            z = coboundary(p, W)
        z.name = kind
        artifacts = {"cocycle": jio.cocycle_to_json(z)}
        rep.result.update(n=p.n, entries=len(z.entries))
    else:
        raise UsageError(f"unknown generator {kind!r}")
    rep.add("generate.written", True)
    main_key = next(iter(artifacts))
    if out:
        files = {}
        for key, obj in artifacts.items():
            path = out if key == main_key else f"{stem}.{key}.json"
            _write(path, obj)
            files[key] = str(path)
        rep.result["files"] = files
    else:
        rep.result.update(artifacts)


# ------------------------------------------------------------------ parser

def _parser():
    ap = argparse.ArgumentParser(prog="posetcoh", description="Homotopy and net cohomology of finite posets.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable report on stdout")
    common.add_argument("--tol", type=float, default=TAU, help="numerical tolerance")
    common.add_argument("--tol-alg", type=float, default=1e-8, help="algebra membership tolerance")
    common.add_argument("--depth", type=int, default=DEFAULT_DEPTH, help="homotopy search depth")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--timing", action="store_true", help="include wall time in the report")
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, *pos, **kw):
        sp = sub.add_parser(name, parents=[common], **kw)
        for a in pos:
            sp.add_argument(a)
        sp.set_defaults(fn=fn)
        return sp

    sp = add("validate", cmd_validate, "poset")
    sp.add_argument("--net")
    sp.add_argument("--punctures")
    sp.add_argument("--no-disjointness-axioms", action="store_true")
    sp = add("pi1", cmd_pi1, "poset")
    sp.add_argument("--basepoint", type=int, default=0)
    sp.add_argument("--relations", choices=["auto", "all", "generating"], default="auto")
    add("homotopy", cmd_homotopy, "poset", "paths")
    sp = add("cocycle-check", cmd_cocycle_check, "poset", "cocycle")
    sp.add_argument("--net")
    sp = add("classify", cmd_classify, "poset", "z", "z1")
    sp.add_argument("--net")
    sp.add_argument("-o", "--output")
    sp = add("rep", cmd_rep, "poset", "cocycle")
    sp.add_argument("--basepoint", type=int, default=0)
    sp = add("refine", cmd_refine, "poset", "cocycle")
    sp.add_argument("--sub", required=True, help="comma list or JSON file of refinement elements")
    sp.add_argument("-o", "--output")
    sp = add("glue", cmd_glue, "poset", "punctures", "cocycle")
    sp.add_argument("--locals", help="JSON {\"locals\": {puncture id: cocycle}}")
    for name, fn, pos in (("tensor", cmd_tensor, ("z", "z1")), ("symmetry", cmd_symmetry, ("z", "z1")),
                          ("statistics", cmd_statistics, ("cocycle",)),
                          ("conjugate", cmd_conjugate, ("cocycle",))):
        sp = add(name, fn, "poset", "punctures", *pos)
        sp.add_argument("--net")
        sp.add_argument("--no-duality", action="store_true")
        if name in ("tensor", "symmetry", "conjugate"):
            sp.add_argument("-o", "--output")
    sp = add("axioms", cmd_axioms, "poset", "punctures")
    sp.add_argument("cocycles", nargs="+")
    sp.add_argument("--net")
    sp.add_argument("--no-duality", action="store_true")
    sp = add("generate", cmd_generate, "kind")
    sp.add_argument("--m", type=int)
    sp.add_argument("--width", type=int)
    sp.add_argument("--t", type=int, default=2)
    sp.add_argument("--max-base", type=int, default=None)
    sp.add_argument("--punctures", action="store_true", help="also write covering punctures")
    sp.add_argument("--qubit-net", action="store_true", help="also write the qubit net")
    sp.add_argument("--poset")
    sp.add_argument("--net")
    sp.add_argument("--d", type=int, default=1)
    sp.add_argument("--theta", type=float, default=1.0)
    sp.add_argument("--basepoint", type=int, default=0)
    sp.add_argument("-o", "--output")
    return ap


def _threads():
    raw = os.environ.get("POSETCOH_THREADS")
    if not raw:
        return None, nullcontext()
    try:
        n = int(raw)
        if n < 1:
            raise ValueError
    except ValueError:
        raise UsageError(f"POSETCOH_THREADS must be a positive integer, not {raw!r}") from None
    try:
        from threadpoolctl import threadpool_limits
    except ImportError:
        return n, nullcontext()
    return n, threadpool_limits(limits=n)


DOMAIN_ERRORS = (CocycleError, NetError, SectorError, RefinementError, PosetError, LatticeError,
                 IncompleteCover, OverlapConflict)


def run(argv=None, stdout=None, stderr=None):
    """Run one subcommand; returns (exit code, Report or None)."""
    stdout = stdout or sys.stdout
    stderr = stderr or sys.stderr
    ap = _parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as e:
        return int(e.code or 0), None
    header = {"version": __version__, "seed": args.seed, "tol": args.tol, "depth": args.depth}
    rep = Report(args.command, header)
    t0 = time.perf_counter()
    try:
        threads, limit = _threads()
        header["threads"] = threads
        with limit:
            args.fn(args, rep)
    except (jio.FormatError, UsageError) as e:
        print(f"posetcoh {args.command}: {e}", file=stderr)
        return 2, None
    except DOMAIN_ERRORS as e:
        rep.add(f"{args.command}.error", False, f"{type(e).__name__}: {e}", anchor=ANCHORS["error"])
    if args.timing:
        rep.timing = round((time.perf_counter() - t0) * 1000, 3)
    print(jio.dumps(rep.to_json()) if args.json else rep.table(), file=stdout)
    return rep.exit_code, rep


def main(argv=None):
    code, _ = run(argv)
    return code


if __name__ == "__main__":
    sys.exit(main())

"""Problem files: a JSON format describing a ring, named modules, named
extension classes, a truncation policy and a task list; plus the dispatcher
that runs the tasks and assembles a deterministic report bundle."""

from __future__ import annotations

import json

from .artinian import RingSpec, TruncationPolicy, UnstableError
from .families import FamilySpec, sci_family, ulrich_dim1_family
from .fieldmath import DEFAULT_PRIME
from .modpres import ExtensionClass, ModuleMap, PresentedModule, minimalize
from .poly import ParseError, PolyVec

SCHEMA_VERSION = 1


class ProblemError(ValueError):
    """The problem file itself is malformed (exit code 2 territory)."""


def _require(cond, msg):
    if not cond:
        raise ProblemError(msg)


def parse_ring(block) -> RingSpec:
    _require(isinstance(block, dict), "ring block must be an object")
    p = block.get("p", DEFAULT_PRIME)
    varnames = block.get("vars")
    _require(isinstance(varnames, list) and varnames,
             "ring block needs a nonempty vars list")
    ideal = block.get("ideal", [])
    try:
        return RingSpec.make(tuple(varnames), ideal, p)
    except (ParseError, ValueError) as exc:
        raise ProblemError(f"bad ring block: {exc}")


def parse_module(name, block, ring: RingSpec) -> PresentedModule:
    _require(isinstance(block, dict), f"module {name}: block must be object")
    gens = block.get("generators")
    _require(isinstance(gens, list) and gens,
             f"module {name}: needs a generators list")
    rows = block.get("relations", [])
    _require(all(isinstance(r, list) and len(r) == len(rows[0])
                 for r in rows) if rows else True,
             f"module {name}: ragged relation matrix")
    _require(len(rows) in (0, len(gens)),
             f"module {name}: relation matrix needs one row per generator")
    try:
        polys = [[ring.poly(t) for t in row] for row in rows]
    except (ParseError, ValueError) as exc:
        raise ProblemError(f"module {name}: {exc}")
    ncols = len(polys[0]) if polys else 0
    cols = [PolyVec([polys[i][j] for i in range(len(gens))])
            for j in range(ncols)]
    return PresentedModule(ring, gens, cols)


def _parse_map(name, rows, source, target, ring) -> ModuleMap:
    _require(isinstance(rows, list) and len(rows) == target.rank,
             f"extension {name}: map needs {target.rank} rows")
    try:
        polys = [[ring.poly(t) for t in row] for row in rows]
    except (ParseError, ValueError) as exc:
        raise ProblemError(f"extension {name}: {exc}")
    _require(all(len(r) == source.rank for r in polys),
             f"extension {name}: map needs {source.rank} columns")
    cols = [PolyVec([polys[i][j] for i in range(target.rank)])
            for j in range(source.rank)]
    return ModuleMap(source, target, cols)


def parse_extension(name, block, modules, ring) -> ExtensionClass:
    _require(isinstance(block, dict),
             f"extension {name}: block must be object")
    for key in ("N", "E", "M", "iota", "pi"):
        _require(key in block, f"extension {name}: missing field {key}")
    for key in ("N", "E", "M"):
        _require(block[key] in modules,
                 f"extension {name}: unknown module {block[key]}")
    n_mod, e_mod, m_mod = (modules[block[k]] for k in ("N", "E", "M"))
    iota = _parse_map(name, block["iota"], n_mod, e_mod, ring)
    pi = _parse_map(name, block["pi"], e_mod, m_mod, ring)
    return ExtensionClass(N=n_mod, E=e_mod, M=m_mod, iota=iota, pi=pi,
                          meta={"name": name})


def parse_policy(block) -> tuple:
    """Returns (policy, seed, trials)."""
    block = block or {}
    _require(isinstance(block, dict), "policy block must be an object")
    try:
        policy = TruncationPolicy(
            base=block.get("base", 4), buffer=block.get("buffer", 2),
            window=block.get("window", 2), cap=block.get("cap", 12))
    except ValueError as exc:
        raise ProblemError(f"bad policy: {exc}")
    return policy, block.get("seed", 0), block.get("trials", 5)


class Problem:
    def __init__(self, doc: dict):
        _require(isinstance(doc, dict), "problem must be a JSON object")
        version = doc.get("schema_version", SCHEMA_VERSION)
        _require(version == SCHEMA_VERSION,
                 f"unsupported schema_version {version}")
        _require("ring" in doc, "missing ring block")
        self.ring = parse_ring(doc["ring"])
        self.modules = {}
        for name, block in (doc.get("modules") or {}).items():
            self.modules[name] = parse_module(name, block, self.ring)
        self.extensions = {}
        for name, block in (doc.get("extensions") or {}).items():
            self.extensions[name] = parse_extension(
                name, block, self.modules, self.ring)
        self.policy, self.seed, self.trials = parse_policy(doc.get("policy"))
        tasks = doc.get("tasks", [])
        _require(isinstance(tasks, list), "tasks must be a list")
        self.tasks = [str(t) for t in tasks]
        self.doc = doc


def _task_hilbert(problem, args):
    from .hilbert import hilbert_data
    mod = _get_module(problem, args, 0)
    return hilbert_data(mod, problem.policy).to_json()


def _task_etor(problem, args):
    from .etor import etor
    mod = _get_module(problem, args, 0)
    return etor(mod, problem.policy).to_json()


def _task_tor1(problem, args):
    from .etor import tor1_length
    mod = _get_module(problem, args, 0)
    _require(len(args) >= 2, "tor1 needs a module and an index")
    try:
        n = int(args[1])
    except ValueError:
        raise ProblemError(f"bad tor1 index {args[1]}")
    return {"n": n, "length": tor1_length(mod, n, problem.policy)}


def _task_tsplit(problem, args):
    from .etor import extension_report
    s = _get_extension(problem, args, 0)
    rep = extension_report(s, problem.policy)
    return rep.to_json()


def _task_filmy(problem, args):
    from .etor import filmy_check
    s = _get_extension(problem, args, 0)
    return {"filmy": filmy_check(s, problem.policy)}


def _task_validate(problem, args):
    s = _get_extension(problem, args, 0)
    return s.validate(problem.policy)


def _task_ladder(problem, args):
    from .etor import scalar_ladder
    s = _get_extension(problem, args, 0)
    _require(len(args) >= 3, "ladder needs: class, u, steps")
    try:
        u = problem.ring.poly(args[1])
        steps = int(args[2])
    except (ParseError, ValueError) as exc:
        raise ProblemError(f"bad ladder arguments: {exc}")
    return scalar_ladder(s, u, steps, problem.policy).to_json()


def _task_ulrich(problem, args):
    from .hilbert import is_ulrich
    mod = _get_module(problem, args, 0)
    ok, evidence = is_ulrich(mod, problem.policy)
    return {"ulrich": ok, **evidence}


def _task_minmult(problem, args):
    from .hilbert import has_min_mult
    mod = _get_module(problem, args, 0)
    ok, evidence = has_min_mult(mod, problem.policy)
    return {"min_mult": ok, **evidence}


def _task_superficial(problem, args):
    from .hilbert import find_superficial
    mods = [_get_module(problem, args, i) for i in range(len(args))]
    cert = find_superficial(mods, problem.policy, seed=problem.seed)
    return cert.to_json()


def _task_cm(problem, args):
    from .gcm import GradedModel, cm_certify
    mod = minimalize(_get_module(problem, args, 0), problem.policy)
    bound = 10
    if len(args) >= 2:
        try:
            bound = int(args[1])
        except ValueError:
            raise ProblemError(f"bad degree bound {args[1]}")
    g = GradedModel(mod, bound, problem.policy)
    return cm_certify(g, trials=problem.trials, seed=problem.seed,
                      policy=problem.policy).to_json()


def _task_gexact(problem, args):
    from .gcm import g_exactness
    s = _get_extension(problem, args, 0)
    bound = 10
    if len(args) >= 2:
        try:
            bound = int(args[1])
        except ValueError:
            raise ProblemError(f"bad degree bound {args[1]}")
    ok, first_fail = g_exactness(s, bound, problem.policy)
    return {"exact": ok, "first_failure": first_fail, "bound": bound}


def _task_additivity(problem, args):
    from .gcm import additivity_check
    s = _get_extension(problem, args, 0)
    return additivity_check(s, problem.policy)


def _get_module(problem, args, i):
    _require(len(args) > i, "task needs a module name")
    _require(args[i] in problem.modules, f"unknown module {args[i]}")
    return problem.modules[args[i]]


def _get_extension(problem, args, i):
    _require(len(args) > i, "task needs an extension name")
    _require(args[i] in problem.extensions, f"unknown extension {args[i]}")
    return problem.extensions[args[i]]


_TASKS = {
    "hilbert": _task_hilbert,
    "etor": _task_etor,
    "tor1": _task_tor1,
    "tsplit": _task_tsplit,
    "filmy": _task_filmy,
    "validate": _task_validate,
    "ladder": _task_ladder,
    "ulrich": _task_ulrich,
    "minmult": _task_minmult,
    "superficial": _task_superficial,
    "cm": _task_cm,
    "gexact": _task_gexact,
    "additivity": _task_additivity,
}


def run_problem(doc: dict) -> tuple:
    """Run all tasks of a problem document.

    Returns (bundle, exit_code): 0 all tasks fine, 1 some task errored.
    Problem-level malformedness raises ProblemError instead.
    """
    problem = Problem(doc)
    reports = []
    any_error = False
    for task in problem.tasks:
        words = task.split()
        if not words:
            continue
        entry = {"task": task}
        handler = _TASKS.get(words[0])
        if handler is None:
            raise ProblemError(f"unknown task kind '{words[0]}'")
        try:
            entry["report"] = handler(problem, words[1:])
            entry["ok"] = True
        except ProblemError:
            raise
        except (UnstableError, ValueError, RuntimeError) as exc:
            entry["ok"] = False
            entry["error"] = f"{type(exc).__name__}: {exc}"
            any_error = True
        reports.append(entry)
    bundle = {
        "schema_version": SCHEMA_VERSION,
        "policy": {"base": problem.policy.base,
                   "buffer": problem.policy.buffer,
                   "window": problem.policy.window,
                   "cap": problem.policy.cap,
                   "seed": problem.seed,
                   "trials": problem.trials},
        "ring": {"p": problem.ring.p,
                 "vars": list(problem.ring.varnames),
                 "ideal": [f.to_string(problem.ring.varnames)
                           for f in problem.ring.ideal]},
        "reports": reports,
    }
    return bundle, (1 if any_error else 0)


def dumps_bundle(bundle: dict) -> str:
    """Canonical serialization: sorted keys, stable separators."""
    return json.dumps(bundle, sort_keys=True, separators=(",", ": "),
                      indent=1)


def module_block(m: PresentedModule) -> dict:
    names = m.ring.varnames
    rows = []
    for i in range(m.rank):
        rows.append([col[i].to_string(names) for col in m.relations])
    return {"generators": list(m.generators),
            "relations": rows if m.relations else []}


def map_rows(mp: ModuleMap) -> list:
    names = mp.source.ring.varnames
    return [[mp.columns[j][i].to_string(names)
             for j in range(mp.source.rank)]
            for i in range(mp.target.rank)]


def emit_fixture(spec: FamilySpec) -> dict:
    """Build a self-contained problem document from a family description."""
    kind = spec.kind
    params = spec.params
    if kind == "hypersurface-sci":
        varnames = tuple(params.get("vars", ("x", "y")))
        g = str(params.get("g", "x"))
        power = int(params.get("i", 2))
        h = str(params.get("h", "1"))
        n_lo, n_hi = params.get("n_range", (0, 4))
        p = params.get("p", DEFAULT_PRIME)
        u_param = params.get("u")
        try:
            chi, u, members = sci_family(varnames, g, power, h,
                                         range(n_lo, n_hi + 1),
                                         u_text=None if u_param is None
                                         else str(u_param), p=p)
        except ValueError as exc:
            raise ProblemError(f"family construction failed: {exc}")
        ring = chi.ring
        doc = {
            "schema_version": SCHEMA_VERSION,
            "ring": {"p": ring.p, "vars": list(ring.varnames),
                     "ideal": [f.to_string(ring.varnames)
                               for f in ring.ideal]},
            "modules": {}, "extensions": {},
            "policy": {"seed": spec.seed},
            "tasks": [],
        }
        for n, s in members:
            nn, en, mn = f"N{n}", f"E{n}", f"M{n}"
            doc["modules"][nn] = module_block(s.N)
            doc["modules"][en] = module_block(s.E)
            doc["modules"][mn] = module_block(s.M)
            sname = f"s{n}"
            doc["extensions"][sname] = {
                "N": nn, "E": en, "M": mn,
                "iota": map_rows(s.iota), "pi": map_rows(s.pi)}
            doc["tasks"].append(f"tsplit {sname}")
        return doc
    if kind == "ulrich-dim1":
        varnames = tuple(params.get("vars", ("x", "y")))
        ideal = params.get("ideal", ["x^2"])
        p = params.get("p", DEFAULT_PRIME)
        ring = RingSpec.make(varnames, ideal, p)
        mod = PresentedModule.free(ring, int(params.get("rank", 1)))
        doc = {
            "schema_version": SCHEMA_VERSION,
            "ring": {"p": ring.p, "vars": list(ring.varnames),
                     "ideal": list(ideal)},
            "modules": {"E": module_block(mod)},
            "policy": {"seed": spec.seed},
            "tasks": ["hilbert E", "ulrich E", "etor E"],
        }
        return doc
    if kind == "rci":
        r = int(params.get("r", 1))
        l = int(params.get("l", 0))
        if not (0 <= l <= r - 1):
            raise ProblemError("rci needs 0 <= l <= r - 1")
        raise ProblemError("rci fixtures are constructed in-process; "
                           "no standalone problem file is defined")
    raise ProblemError(f"unknown family kind '{kind}'")

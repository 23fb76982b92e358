"""Command-line front end.  Exit codes: 0 pass, 1 fail, 2 error."""
from __future__ import annotations

import argparse
import json
import random
import sys
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import __version__
from .algebra import (AlgebraError, axiom_suite, ep_isometry_check, katsura_check,
                      katsura_ideal_report, y_basis)
from .cocycle import (ActionError, GeneratingCocycle, extend_to_paths, fixes_sources,
                      group_sample, path_extension_violations, validate_cocycle)
from .cohomology import (CohomologyError, SearchLimitExceeded, brute_force_cohomologous,
                         canonical_cocycle, is_translation_coboundary, orbit_invariants,
                         signature, transitive_conjugacy, transport, verify_cohomologous,
                         z_conjugacy, _orbit_restriction)
from .constructions import ConstructionError, EpkParameters, epk_cocycle, epk_decompose
from .graph import GraphError, classify_vertices
from .group import GroupError, Integers
from .spec import (BUILDERS, SCHEMA_VERSION, SpecError, build, dumps_system, fingerprint,
                   load_system, parse_params)
from .toeplitz import (FockBatch, WordError, check_relations, combination_to_json,
                       family_from_json, fock_check, format_combination, format_word,
                       monomials_up_to, normalize, parse_word, perturb_family, product_census,
                       random_word, strings_m3_family)

PASS, FAIL, ERROR = 0, 1, 2
DEFAULT_SEED = 20240601

ERRORS = (SpecError, WordError, CohomologyError, ConstructionError, AlgebraError, ActionError,
          GraphError, GroupError)


# -- reports --------------------------------------------------------------------------

def _report(command: str, system=None, **results) -> dict:
    out: dict = {"schema_version": SCHEMA_VERSION, "command": command}
    if system is not None:
        out["system"] = {"name": system.name, "fingerprint": fingerprint(system)}
    out.update(results)
    return out


def _emit(report: dict, args, lines: list[str]) -> None:
    if args.json:
        print(json.dumps(report, indent=2, sort_keys=True, default=str))
    else:
        print("\n".join(lines))


def _status(ok: bool) -> str:
    return "PASS" if ok else "FAIL"


def _system_line(system) -> str:
    return f"system: {system.name or '(unnamed)'} [{fingerprint(system)[:16]}]"


# -- Z-system helpers ---------------------------------------------------------------------

def _is_z(system) -> bool:
    return isinstance(system.group, Integers) and isinstance(system.cocycle, GeneratingCocycle)


def _epk_parameters(system):
    """``(a, b)`` when the system is literally ``EPK(a, b)`` on a bouquet."""
    if not _is_z(system) or system.graph.num_vertices != 1 or not system.graph.num_edges:
        return None
    a, b = system.graph.num_edges, signature(system.cocycle)
    ref = epk_cocycle(a, b)
    if tuple(system.cocycle.action.tau) == ref.action.tau and system.cocycle.xi == ref.xi:
        return a, b
    return None


def _orbit_table(system) -> list[dict]:
    """Per orbit: invariants and a verified witness to the canonical form
    ``xi = (c, 0, ..., 0)`` on the translation action of ``Z_size``."""
    E, phi = system.graph, system.cocycle
    rows = []
    for cyc, (size, c) in zip(phi.action.cycles, orbit_invariants(phi)):
        restricted = _orbit_restriction(phi, cyc)
        canon = canonical_cocycle(size, c)
        theta, psi = transitive_conjugacy(restricted, canon)
        ok = verify_cohomologous(transport(restricted, theta, canon.action), canon, psi)
        rows.append({"orbit": [E.edges[x] for x in cyc], "size": size, "signature": c,
                     "canonical": {"a": size, "c": c,
                                   "theta": [E.edges[cyc[t]] for t in theta],
                                   "witness": list(psi.values), "verified": ok}})
    return rows


# -- commands -----------------------------------------------------------------------------

def cmd_validate(args) -> int:
    try:
        system = load_system(args.spec)
    except SpecError as exc:
        if not exc.cocycle:
            raise
        report = _report("validate", valid=False, violations=[{"kind": "extension",
                                                             "detail": str(exc)}])
        _emit(report, args, ["validate: FAIL", f"  {exc}"])
        return FAIL
    rep = validate_cocycle(system.action, system.cocycle, strong=args.strong, radius=args.radius)
    report = _report("validate", system, mode="strong" if args.strong else "weak",
                     radius=args.radius, scope=rep.scope, valid=rep.valid,
                     violations=rep.violations[:50], violation_count=len(rep.violations),
                     fixes_sources=fixes_sources(system.action))
    lines = [_system_line(system), f"validate ({report['mode']}, {rep.scope}): {_status(rep.valid)}"]
    lines += [f"  {v}" for v in rep.violations[:10]]
    _emit(report, args, lines)
    return PASS if rep.valid else FAIL


def cmd_classify(args) -> int:
    system = load_system(args.spec)
    E, G = system.graph, system.group
    regular, sources = classify_vertices(E)
    results: dict = {
        "group": G.describe(), "vertices": E.num_vertices, "edges": E.num_edges,
        "regular_vertices": [E.vertices[v] for v in sorted(regular)],
        "sources": [E.vertices[v] for v in sorted(sources)],
        "fixes_sources": fixes_sources(system.action),
    }
    lines = [_system_line(system), f"group {G.describe()}, |E^0| = {E.num_vertices}, "
             f"|E^1| = {E.num_edges}, sources {results['sources']}"]
    if args.signature and not _is_z(system):
        raise CohomologyError("the signature needs G = Z with a generating function")
    if _is_z(system):
        results["signature"] = signature(system.cocycle)
        results["orbits"] = _orbit_table(system)
        lines.append(f"signature {results['signature']}")
        for row in results["orbits"]:
            lines.append(f"  orbit {' '.join(row['orbit'])}: size {row['size']}, "
                         f"signature {row['signature']}, canonical form verified "
                         f"{row['canonical']['verified']}")
        ab = _epk_parameters(system)
        if ab:
            results["epk"] = _epk_summary(*ab)
            lines.append(f"EPK({ab[0]},{ab[1]}): d = {results['epk']['d']}, components "
                         f"({results['epk']['a_prime']},{results['epk']['b_prime']})")
    else:
        if fixes_sources(system.action):
            try:
                psi = is_translation_coboundary(system.action)
            except CohomologyError:
                psi = None
            results["free_on_edges"] = psi is not None
            if psi is not None:
                results["coboundary_witness_for_translation_cocycle"] = psi.to_dict()
        results["katsura_ideal"] = katsura_ideal_report(system)
        lines.append(f"orbit invariants need G = Z; katsura ideal is B: "
                     f"{results['katsura_ideal']['ideal_is_B']}")
    _emit(_report("classify", system, results=results), args, lines)
    return PASS


def _epk_summary(a: int, b: int) -> dict:
    p = EpkParameters(a, b)
    comps = epk_decompose(a, b)
    return {"a": a, "b": b, "d": p.d, "a_prime": p.a_prime, "b_prime": p.b_prime,
            "components": [c.to_dict() for c in comps],
            "verified": all(c.verified for c in comps)}


def cmd_decompose(args) -> int:
    if args.spec is None:
        if args.a is None or args.b is None:
            raise SpecError("decompose needs a system file or --a and --b")
        summary = _epk_summary(args.a, args.b)
        report = _report("decompose", epk=summary, pass_=summary["verified"])
        lines = [f"EPK({args.a},{args.b}): d = {summary['d']}"]
        for c in summary["components"]:
            lines.append(f"  orbit {c['orbit']} -> EPK({c['target']['a']},{c['target']['b']}) "
                         f"theta {c['theta']} witness {c['witness']['values']} "
                         f"{'verified' if c['verified'] else 'NOT verified'}")
        _emit(_fix(report), args, lines)
        return PASS if summary["verified"] else FAIL
    system = load_system(args.spec)
    if not _is_z(system):
        raise CohomologyError("orbit decomposition needs G = Z with a generating function")
    rows = _orbit_table(system)
    ok = all(r["canonical"]["verified"] for r in rows)
    lines = [_system_line(system)]
    for r in rows:
        lines.append(f"  orbit {' '.join(r['orbit'])}: ~ (Z_{r['size']}, c = {r['signature']}) "
                     f"theta {r['canonical']['theta']} witness {r['canonical']['witness']}")
    _emit(_fix(_report("decompose", system, orbits=rows, pass_=ok)), args, lines)
    return PASS if ok else FAIL


def _fix(report: dict) -> dict:
    if "pass_" in report:
        report["pass"] = report.pop("pass_")
    return report


def _restrict(system, orbit_point):
    phi = system.cocycle
    if orbit_point is None:
        return phi, system.graph.edges
    if not _is_z(system):
        raise CohomologyError("--orbit needs G = Z")
    x = system.graph.edge_index(orbit_point)
    cyc = phi.action.orbit(x)
    return _orbit_restriction(phi, cyc), [system.graph.edges[y] for y in cyc]


def cmd_compare(args) -> int:
    A, B = load_system(args.spec_a), load_system(args.spec_b)
    if A.group != B.group:
        raise CohomologyError(f"incompatible groups {A.group.describe()} and {B.group.describe()}")
    phiA, namesA = _restrict(A, args.orbit_a)
    phiB, namesB = _restrict(B, args.orbit_b)
    T = phiA.target
    results: dict = {"bound": args.bound}
    set_level = args.orbit_a is not None or args.orbit_b is not None or (
        A.graph.num_vertices == 1 and B.graph.num_vertices == 1)
    if isinstance(A.group, Integers) and isinstance(phiA, GeneratingCocycle) and set_level:
        invA, invB = orbit_invariants(phiA), orbit_invariants(phiB)
        results["signatures"] = [signature(phiA), signature(phiB)]
        results["orbit_invariants"] = [sorted(invA), sorted(invB)]
        found = z_conjugacy(phiA, phiB)
        if found is None:
            results["decision"] = "not_conjugate"
            results["reason"] = ("signature mismatch" if results["signatures"][0] !=
                                 results["signatures"][1] else "orbit invariants differ")
        else:
            theta, psi = found
            ok = verify_cohomologous(transport(phiA, theta, phiB.action), phiB, psi)
            results["decision"] = "conjugate" if ok else "error"
            results["theta"] = {namesB[y]: namesA[theta[y]] for y in range(len(theta))}
            results["witness"] = {namesB[y]: T.format(psi(y)) for y in range(len(theta))}
            results["verified"] = ok
        results["method"] = "constructive (orbit matching)"
    else:
        if A.graph != B.graph or not _same_actions(A, B):
            results["decision"] = "unknown"
            results["reason"] = "different graphs or actions; only theta = id is searched"
        else:
            try:
                psi = brute_force_cohomologous(A.cocycle, B.cocycle, args.bound, A.action)
            except SearchLimitExceeded as exc:
                psi, results["reason"] = None, str(exc)
            results["method"] = f"brute force, theta = id, values in box {args.bound}"
            if psi is not None:
                results["decision"] = "conjugate"
                results["witness"] = {A.graph.edges[e]: T.format(psi(e))
                                      for e in range(A.graph.num_edges)}
            else:
                results["decision"] = "unknown"
                results.setdefault("reason", "no witness with theta = id within the bound")
    report = _report("compare", A, other={"name": B.name, "fingerprint": fingerprint(B)},
                     results=results)
    lines = [_system_line(A), _system_line(B), f"decision: {results['decision']}"]
    for key in ("reason", "theta", "witness"):
        if key in results:
            lines.append(f"  {key}: {results[key]}")
    _emit(report, args, lines)
    return {"conjugate": PASS, "not_conjugate": FAIL, "unknown": FAIL}.get(results["decision"], ERROR)


def _same_actions(A, B) -> bool:
    G = A.group
    sample = [1] if isinstance(G, Integers) else group_sample(G)
    return all(A.action.act_edge(g, e) == B.action.act_edge(g, e)
               for g in sample for e in range(A.graph.num_edges)) and \
        all(A.action.act_vertex(g, v) == B.action.act_vertex(g, v)
            for g in sample for v in range(A.graph.num_vertices))


def cmd_extend(args) -> int:
    system = load_system(args.spec)
    try:
        pa, _ = extend_to_paths(system, args.length)
        bad = path_extension_violations(system, args.length, args.radius)
        error = None
    except ActionError as exc:
        pa, bad, error = None, [], str(exc)
    ok = error is None and not bad
    report = _report("extend", system, length=args.length, radius=args.radius,
                     paths=pa.size if pa else None, violations=bad[:50], error=error, **{"pass": ok})
    lines = [_system_line(system),
             f"extend to paths of length <= {args.length}: {_status(ok)}"
             + (f" ({pa.size} paths)" if pa else "")]
    if error:
        lines.append(f"  {error}")
    lines += [f"  {v}" for v in bad[:10]]
    _emit(report, args, lines)
    return PASS if ok else FAIL


def cmd_normalize(args) -> int:
    system = load_system(args.spec)
    tokens = parse_word(system, args.expression)
    nf = normalize(system, tokens)
    text = format_combination(system, nf)
    report = _report("normalize", system, word=format_word(system, tokens), normal_form=text,
                     monomials=combination_to_json(system, nf))
    _emit(report, args, [text])
    return PASS


def cmd_fock(args) -> int:
    system = load_system(args.spec)
    res = fock_check(system, args.expression, args.length, args.radius, engine=args.engine)
    E, G = system.graph, system.group
    mism = [{"path": E.path_name(p), "g": G.format(g)} for p, g in res.mismatches]
    report = _report("fock", system, word=args.expression, length=args.length,
                     radius=args.radius, vectors=res.vectors,
                     normal_form=format_combination(system, res.normal_form),
                     mismatches=mism, **{"pass": res.ok})
    _emit(report, args, [_system_line(system),
                         f"fock {args.expression!r} ~ {report['normal_form']} on {res.vectors} "
                         f"vectors (L = {args.length}, |g| <= {args.radius}): {_status(res.ok)}"])
    return PASS if res.ok else FAIL


def cmd_checkmatrices(args) -> int:
    system = load_system(args.spec)
    if args.family == "m3":
        fam = strings_m3_family(system)
    else:
        try:
            with open(args.family, encoding="utf-8") as fh:
                fam = family_from_json(system, json.load(fh))
        except (OSError, json.JSONDecodeError) as exc:
            raise SpecError(f"cannot read matrix family: {exc}") from None
    if args.perturb:
        fam = perturb_family(fam, args.perturb, args.seed)
    rep = check_relations(system, fam, args.mode, args.tol)
    report = _report("checkmatrices", system, perturb=args.perturb, **rep)
    lines = [_system_line(system),
             f"{args.mode} relations, dimension {rep['dimension']}, tol {args.tol:g}: "
             f"{_status(rep['pass'])}"]
    lines += [f"  {k}: {v:.3e}" for k, v in rep["deviations"].items()]
    lines += [f"  problem: {p}" for p in rep["problems"]]
    _emit(report, args, lines)
    return PASS if rep["pass"] else FAIL


def _selftest_items(system, args) -> list:
    G = system.group
    regular, _ = classify_vertices(system.graph)
    katsura_radius = min(args.radius, 3)

    def axioms():
        r = axiom_suite(system, args.trials, args.seed, args.radius)
        return "axioms", r["pass"], {k: r[k] for k in ("trials", "failures")}

    def katsura():
        basis = y_basis(system, katsura_radius)
        bad = [(system.graph.vertices[v], G.format(g)) for v in sorted(regular)
               for g in group_sample(G, katsura_radius) if katsura_check(system, v, g, basis)]
        return "katsura", not bad, {"failures": bad[:20]}

    def isometry():
        bad = ep_isometry_check(system, args.radius)
        return "isometry", not bad, {"failures": len(bad)}

    def fock():
        rng = random.Random(args.seed)
        batch = FockBatch(system, args.length, args.radius) if FockBatch.supports(system) else None
        bad = []
        for _ in range(args.trials):
            w = random_word(system, rng, 6, min(args.radius, 2))
            if not fock_check(system, w, args.length, args.radius, batch=batch).ok:
                bad.append(format_word(system, w))
        return "fock", not bad, {"words": args.trials, "failures": bad[:20]}

    def products():
        c = product_census(system, monomials_up_to(system, 2, 1))
        return "products", not c["invalid"], {"pairs": c["pairs"], "zero": c["zero"],
                                              "single": c["single"]}

    return [axioms, katsura, isometry, fock, products]


def cmd_selftest(args) -> int:
    system = load_system(args.spec)
    items = _selftest_items(system, args)
    timings = {}

    def run(fn):
        t = time.perf_counter()
        out = fn()
        timings[out[0]] = round(time.perf_counter() - t, 3)
        return out

    if args.jobs > 1:
        with ThreadPoolExecutor(args.jobs) as pool:
            results = list(pool.map(run, items))
    else:
        results = [run(fn) for fn in items]
    ok = all(r[1] for r in results)
    suites = {name: {"pass": passed, **detail} for name, passed, detail in results}
    report = _report("selftest", system, seed=args.seed, trials=args.trials, radius=args.radius,
                     suites=suites, **{"pass": ok})
    if args.timings:
        report["timings"] = timings
    lines = [_system_line(system)] + [f"  {name}: {_status(passed)}" for name, passed, _ in results]
    lines.append(f"selftest: {_status(ok)}")
    _emit(report, args, lines)
    return PASS if ok else FAIL


def cmd_build(args) -> int:
    if args.builder == "list":
        for name in sorted(BUILDERS):
            b = BUILDERS[name]
            print(f"{name}({', '.join(b.params)}): {b.doc}")
        return PASS
    system = build(args.builder, parse_params(args.params))
    text = dumps_system(system)
    if args.output:
        with open(args.output, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return PASS


# -- parser ------------------------------------------------------------------------------

def make_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="JSON report on stdout")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED)
    common.add_argument("--jobs", type=int, default=1, help="parallel suite items")
    common.add_argument("--timings", action="store_true", help="include wall-clock timings")

    p = argparse.ArgumentParser(prog="epalg", description=__doc__)
    p.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", parents=[common], help="check action and cocycle axioms")
    s.add_argument("spec")
    s.add_argument("--strong", action="store_true", help="vertex condition at all vertices")
    s.add_argument("--radius", type=int, default=3)
    s.set_defaults(fn=cmd_validate)

    s = sub.add_parser("classify", parents=[common], help="invariants and canonical forms")
    s.add_argument("spec")
    s.add_argument("--signature", action="store_true", help="require the signature")
    s.set_defaults(fn=cmd_classify)

    s = sub.add_parser("compare", parents=[common], help="cohomology conjugacy decision")
    s.add_argument("spec_a")
    s.add_argument("spec_b")
    s.add_argument("--bound", type=int, default=4)
    s.add_argument("--orbit-a", help="restrict A to the orbit of this edge")
    s.add_argument("--orbit-b", help="restrict B to the orbit of this edge")
    s.set_defaults(fn=cmd_compare)

    s = sub.add_parser("decompose", parents=[common], help="orbit decomposition")
    s.add_argument("spec", nargs="?")
    s.add_argument("--a", type=int)
    s.add_argument("--b", type=int)
    s.set_defaults(fn=cmd_decompose)

    s = sub.add_parser("extend", parents=[common], help="self-similar extension to paths")
    s.add_argument("spec")
    s.add_argument("--length", type=int, default=5)
    s.add_argument("--radius", type=int, default=3)
    s.set_defaults(fn=cmd_extend)

    s = sub.add_parser("normalize", parents=[common], help="normal form of a word")
    s.add_argument("spec")
    s.add_argument("expression")
    s.set_defaults(fn=cmd_normalize)

    s = sub.add_parser("fock", parents=[common], help="compare a word with its normal form")
    s.add_argument("spec")
    s.add_argument("expression")
    s.add_argument("--length", "-L", type=int, default=8)
    s.add_argument("--radius", type=int, default=4)
    s.add_argument("--engine", choices=["auto", "batch", "scalar"], default="auto")
    s.set_defaults(fn=cmd_fock)

    s = sub.add_parser("checkmatrices", parents=[common], help="relations of a matrix family")
    s.add_argument("spec")
    s.add_argument("family", help="JSON file, or 'm3' for the built-in strings family")
    s.add_argument("--mode", choices=["toeplitz", "ck"], default="ck")
    s.add_argument("--tol", type=float, default=1e-9)
    s.add_argument("--perturb", type=float, default=0.0)
    s.set_defaults(fn=cmd_checkmatrices)

    s = sub.add_parser("selftest", parents=[common], help="algebra and oracle suites")
    s.add_argument("spec")
    s.add_argument("--radius", type=int, default=4)
    s.add_argument("--trials", type=int, default=100)
    s.add_argument("--length", "-L", type=int, default=8)
    s.set_defaults(fn=cmd_selftest)

    s = sub.add_parser("build", parents=[common], help="emit a builder's system as TOML")
    s.add_argument("builder", help="builder name, or 'list'")
    s.add_argument("params", nargs="*", help="key=value")
    s.add_argument("--output", "-o")
    s.set_defaults(fn=cmd_build)
    return p


def main(argv=None) -> int:
    args = make_parser().parse_args(argv)
    np.seterr(all="ignore")
    try:
        return args.fn(args)
    except ERRORS as exc:
        if getattr(args, "json", False):
            print(json.dumps({"schema_version": SCHEMA_VERSION, "command": args.command,
                              "error": str(exc)}, indent=2, sort_keys=True))
        else:
            print(f"error: {exc}", file=sys.stderr)
        return ERROR


if __name__ == "__main__":
    sys.exit(main())

"""Command-line entry point.

Exit codes: 0 for equal/pass, 1 for unequal/fail, 2 for usage or input errors.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from importlib import resources
from typing import Sequence

from .algebras import (
    HOPF_LAWS,
    AlgebraError,
    axiom_soundness,
    counterexample,
    decision_algebra,
    format_assignment,
    load_algebra,
)
from .category import (
    CubeCategory,
    FactorizationError,
    HomBoundError,
    factorize,
    hom_with_keys,
    is_iso,
    morphism,
    morphisms_equal,
)
from .experiments import (
    ExperimentError,
    build_A,
    coslice_initial_check,
    contraction_collapse,
    fig2_discrepancies,
    incidences,
    render_table2,
    table2_report,
    two_three_agreement,
    verify_A_homotopy,
)
from .fincat import FinCatError, nerve
from .terms import TermError, check_discipline, format_term, parse_term

EXPERIMENTS = ("a-poset", "a-homology", "coslice-check", "contraction-collapse", "table2")

CLAIMS = {
    "term-eq": "equality of terms decided by evaluation in a finite algebra",
    "hom": "hom-set of the cube category, one representative per semantic class",
    "axioms": "each applicable cubical axiom holds in the decision algebra",
    "factor": "unique factorization into degeneracies, symmetry, reversals and faces",
    "prop-suite": "equality over the two-element and three-element chains agrees below the full signature",
    "a-poset": "generated obstruction poset matches the picture of the square",
    "a-homology": "obstruction poset has the homology of the expected wedge of spheres",
    "coslice-check": "every coslice of the obstruction poset has the predicted initial object",
    "contraction-collapse": "with contraction the northern hemisphere is terminal and A is acyclic",
    "table2": "test / strict test verdict for each weakening language",
}


class UsageError(Exception):
    pass


def report_schema() -> dict:
    return json.loads(resources.files("cubecat").joinpath("report.schema.json").read_text())


def validate_report(report: dict) -> None:
    import jsonschema

    jsonschema.validate(report, report_schema())


def _category(args) -> CubeCategory:
    if args.rules is None or args.sig is None:
        raise UsageError("--rules and --sig are required")
    kw = {}
    if getattr(args, "bound", None):
        kw["max_hom_size"] = args.bound
    return CubeCategory.parse(args.rules, args.sig, args.theory, **kw)


def _inputs(args) -> dict:
    skip = {"func", "json", "dot"}
    return {k: v for k, v in vars(args).items() if k not in skip and v is not None}


# --- commands --------------------------------------------------------------------------


def cmd_term_eq(args) -> tuple[bool, dict, str]:
    cat = _category(args)
    alg = load_algebra(args.algebra) if args.algebra else decision_algebra(cat.language, cat.theory)
    if not alg.supports(cat.signature):
        raise UsageError(f"algebra {alg.name} lacks operations of {cat.signature}")
    s = parse_term(args.lhs, args.arity, cat.signature)
    t = parse_term(args.rhs, args.arity, cat.signature)
    for term in (s, t):
        if not check_discipline([term], args.arity, cat.rules):
            raise UsageError(f"{format_term(term)} breaks the structural rules {cat.rules.code or '∅'}")
    cex = counterexample(s, t, args.arity, alg)
    witness = None if cex is None else format_assignment(cex, alg)
    results = {"lhs": format_term(s), "rhs": format_term(t), "algebra": alg.name,
               "equal": cex is None, "witness": witness}
    text = f"equal in {alg.name}" if cex is None else f"unequal in {alg.name}: {witness}"
    return cex is None, results, text


def cmd_hom(args) -> tuple[bool, dict, str]:
    cat = _category(args)
    homs = hom_with_keys(args.m, args.n, cat)
    results: dict = {"category": cat.name, "m": args.m, "n": args.n, "count": len(homs)}
    if args.list:
        listing = [", ".join(format_term(c) for c in f.components) for _, f in homs]
        results["morphisms"] = listing
        text = "\n".join(f"({x})" for x in listing)
    else:
        text = str(len(homs))
    return True, results, text


def cmd_axioms(args) -> tuple[bool, dict, str]:
    cat = _category(args)
    rep = axiom_soundness(cat.language, cat.theory, HOPF_LAWS if args.hopf else ())
    checks = [{"name": c.name, "lhs": c.lhs, "rhs": c.rhs, "holds": c.holds, "witness": c.witness}
              for c in rep.checks]
    lines = [f"{'ok  ' if c.holds else 'FAIL'} {c.name}: {c.lhs} = {c.rhs}"
             + (f"  [{c.witness}]" if c.witness else "") for c in rep.checks]
    lines.append(f"{len(rep.checks) - len(rep.failures)}/{len(rep.checks)} hold in {rep.algebra}")
    return rep.ok, {"category": cat.name, "algebra": rep.algebra, "checks": checks}, "\n".join(lines)


def cmd_factor(args) -> tuple[bool, dict, str]:
    cat = _category(args)
    f = morphism(args.arity, args.components, cat)
    fac = factorize(f, cat)
    ok = morphisms_equal(fac.recompose(), f, cat)
    parts = {
        "degeneracy": str(fac.degeneracy()),
        "symmetry": str(fac.symmetry()),
        "reversal": str(fac.reversal()),
        "face": str(fac.face_map()),
    }
    results = {"morphism": str(f), "dropped": list(fac.dropped), "permutation": list(fac.permutation),
               "reversals": list(fac.reversals), "face": [str(c) for c in fac.face],
               "blocks": parts, "is_iso": is_iso(f, cat), "recomposes": ok}
    text = "\n".join(f"{k:<10} {v}" for k, v in parts.items()) + f"\niso: {results['is_iso']}"
    return ok, results, text


def cmd_prop_suite(args) -> tuple[bool, dict, str]:
    rep = two_three_agreement(args.seed, args.pairs)
    text = (f"{rep.pairs} pairs over {len(rep.languages)} languages, {rep.equal_pairs} equal, "
            f"{len(rep.violations)} disagreements\nseparation: {rep.separation}")
    for v in rep.violations[:10]:
        text += f"\n  {v}"
    return rep.passed, rep.to_dict(), text


def _exp_a_poset(args):
    cat = _category(args)
    a = build_A(cat)
    bad = fig2_discrepancies(a)
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(a.to_dot(cat.name))
    below = incidences(a)
    text = "\n".join(f"{x} ({a.data['kind'][x]}) over: {', '.join(below[x]) or '-'}" for x in a.objects)
    if bad:
        text += "\ndifferences from the expected square:\n  " + "\n  ".join(bad)
    results = {"category": cat.name, "objects": list(a.objects), "kinds": a.data["kind"],
               "below": below, "is_poset": a.is_poset, "discrepancies": bad,
               "f_vector": list(nerve(a).f_vector)}
    return a.is_poset and not bad, results, text


def _exp_a_homology(args):
    cat = _category(args)
    chk = verify_A_homotopy(cat)
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(build_A(cat).to_dot(cat.name))
    results = {"category": cat.name, "homology": chk.homology.to_dict(), "f_vector": list(chk.f_vector),
               "expected_betti": list(chk.expected_betti), "expected_space": chk.expected_space}
    text = (f"{cat.name}: f-vector {chk.f_vector}, H = {chk.homology.profile()}, "
            f"Betti {chk.homology.betti}; expected {chk.expected_space} {chk.expected_betti}: "
            f"{'PASS' if chk.passed else 'FAIL'}")
    return chk.passed, results, text


def _exp_coslice(args):
    cat = _category(args)
    rep = coslice_initial_check(cat, args.max_dim if args.max_dim is not None else 3)
    cases = [{"object": c.slice_object, "expected": c.expected, "initial": c.initial,
              "size": c.size, "passed": c.passed} for c in rep.cases]
    lines = [f"{'ok  ' if c.passed else 'FAIL'} {c.slice_object}: initial {c.initial}, expected {c.expected}"
             for c in rep.cases]
    lines.append(f"{len(rep.cases) - len(rep.failures)}/{len(rep.cases)} coslices with the predicted initial object")
    return rep.passed, {"category": cat.name, "max_dim": rep.max_dim, "cases": cases}, "\n".join(lines)


def _exp_collapse(args):
    cat = _category(args)
    col = contraction_collapse(cat)
    if args.dot:
        with open(args.dot, "w") as fh:
            fh.write(build_A(cat).to_dot(cat.name))
    results = {"category": cat.name, "terminal": col.terminal, "terminal_kind": col.terminal_kind,
               "homology": col.homology.to_dict(), "reduced_trivial": col.reduced_trivial}
    text = (f"{cat.name}: terminal object {col.terminal} ({col.terminal_kind}), "
            f"H = {col.homology.profile()}: {'PASS' if col.passed else 'FAIL'}")
    return col.passed, results, text


def _exp_table2(args):
    dim = args.max_dim if args.max_dim is not None else 3
    rows = table2_report(dim)
    ok = all(r.matches and r.evidence_ok for r in rows)
    return ok, {"rows": [r.to_dict() for r in rows]}, render_table2(rows)


def cmd_experiment(args) -> tuple[bool, dict, str]:
    runner = {
        "a-poset": _exp_a_poset,
        "a-homology": _exp_a_homology,
        "coslice-check": _exp_coslice,
        "contraction-collapse": _exp_collapse,
        "table2": _exp_table2,
    }[args.name]
    return runner(args)


# --- parser ------------------------------------------------------------------------------


def _add_language(p: argparse.ArgumentParser, required: bool = True) -> None:
    p.add_argument("--rules", required=required, help="structural rules, a subset of 'wec' ('' or ∅ for none)")
    p.add_argument("--sig", required=required, help="signature from j (∨), m (∧), r (′); ∅ for none")
    p.add_argument("--theory", default="canonical", help="canonical | demorgan | boolean")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="cubecat", description="Cube categories, term equality and obstruction posets.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="print a JSON report")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("term-eq", parents=[common], help="decide equality of two terms")
    _add_language(p)
    p.add_argument("--arity", type=int, required=True)
    p.add_argument("--algebra", help="JSON file with a custom finite algebra")
    p.add_argument("lhs")
    p.add_argument("rhs")
    p.set_defaults(func=cmd_term_eq)

    p = sub.add_parser("hom", parents=[common], help="count or list hom([m],[n])")
    _add_language(p)
    p.add_argument("m", type=int)
    p.add_argument("n", type=int)
    g = p.add_mutually_exclusive_group()
    g.add_argument("--count", action="store_true", default=True)
    g.add_argument("--list", action="store_true")
    p.add_argument("--bound", type=int, help="largest hom-set to enumerate")
    p.set_defaults(func=cmd_hom)

    p = sub.add_parser("axioms", parents=[common], help="check the cubical axioms in the decision algebra")
    _add_language(p)
    p.add_argument("--hopf", action="store_true", help="also check x ∨ x′ = 1 and x ∧ x′ = 0")
    p.set_defaults(func=cmd_axioms)

    p = sub.add_parser("factor", parents=[common], help="factor a morphism of a category without connections")
    _add_language(p)
    p.add_argument("--arity", type=int, required=True)
    p.add_argument("components", nargs="+")
    p.set_defaults(func=cmd_factor)

    p = sub.add_parser("prop-suite", parents=[common], help="random agreement of two- and three-element equality")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--pairs", type=int, default=1000, help="pairs per language")
    p.set_defaults(func=cmd_prop_suite)

    p = sub.add_parser("experiment", parents=[common], help="run an obstruction-poset experiment")
    p.add_argument("name", choices=EXPERIMENTS)
    _add_language(p, required=False)
    p.add_argument("--max-dim", type=int, help="largest slice dimension for coslice sweeps")
    p.add_argument("--dot", help="write the poset A as a DOT file")
    p.set_defaults(func=cmd_experiment)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 0 if exc.code == 0 else 2
    key = args.name if args.command == "experiment" else args.command
    start = time.perf_counter()
    try:
        ok, results, text = args.func(args)
    except (UsageError, TermError, AlgebraError, HomBoundError, FactorizationError,
            ExperimentError, FinCatError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    if args.json:
        report = {
            "command": key,
            "inputs": _inputs(args),
            "results": results,
            "passed": ok,
            "claim": CLAIMS[key],
            "seconds": round(time.perf_counter() - start, 6),
        }
        validate_report(report)
        print(json.dumps(report, indent=2, ensure_ascii=False, default=str))
    else:
        print(text)
    return 0 if ok else 1


if __name__ == "__main__":
    sys.exit(main())

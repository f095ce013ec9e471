"""Command-line front end.

Every command prints one JSON report on stdout and a short human summary on
stderr.  Exit codes: 0 success, 1 negative mathematical outcome, 2 input
error, 3 budget exhausted.
"""

from __future__ import annotations

import argparse
import json
import random
import sys
import time
from typing import Sequence

from . import __version__
from . import constructions as cons
from . import groebner as gb
from . import loci
from .algebra import GradedAlgebra, QuadricPresentation, build_algebra
from .core import VariableContext, field_from_descriptor, format_poly, parse_poly
from .errors import (BudgetExceeded, InputError, MathematicalFailure, NotRegularSequence,
                     SagaError)
from .groebner import Ideal
from .lefschetz import check_slp, check_wlp

SCHEMA_VERSION = "1"
COMMANDS = ("build", "hilbert", "lefschetz", "nihil", "n2", "decompose", "jacobian",
            "quotient", "verify-example", "fibers")


class _Failed(Exception):
    """Negative mathematical outcome; the report is already filled in."""


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        raise SystemExit(2)


def _parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--field", help="Q or Fp:<prime> (default: $SAGA_FIELD or Fp:2147483629)")
    common.add_argument("--seed", type=int, default=0)
    common.add_argument("--max-pairs", type=int, default=gb.DEFAULT_MAX_PAIRS,
                        help="Groebner pair budget")
    common.add_argument("--max-degree", type=int, default=None,
                        help="top degree to construct (default n+2)")
    common.add_argument("--samples", type=int, default=None,
                        help="random samples for rank certificates and fiber statistics")
    common.add_argument("--threads", type=int, default=1,
                        help="accepted for compatibility; computations are single-threaded")
    src = argparse.ArgumentParser(add_help=False)
    g = src.add_mutually_exclusive_group()
    g.add_argument("--file", help="presentation file")
    g.add_argument("--example", help="corpus instance: EX1..EX5 or FERMAT(n)")
    g.add_argument("--random", type=int, metavar="N", help="random quadric CI in N+1 variables")

    p = _Parser(prog="saga", description="Lefschetz properties and nihilpotent loci of "
                                         "complete intersections of quadrics.")
    p.add_argument("--version", action="version", version=__version__)
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    b = sub.add_parser("build", parents=[common, src], help="construct R and report its bases")
    b.add_argument("--out", help="write the presentation to this file")
    sub.add_parser("hilbert", parents=[common, src], help="Hilbert function of R")
    lf = sub.add_parser("lefschetz", parents=[common, src], help="WLP/SLP certificates")
    lf.add_argument("--wlp", type=int, action="append", default=[], metavar="K")
    lf.add_argument("--slp", type=int, nargs=2, action="append", default=[], metavar=("K", "S"))
    nh = sub.add_parser("nihil", parents=[common, src], help="ideal and dimension of N_k")
    nh.add_argument("--k", type=int, required=True)
    nh.add_argument("--slice", type=int, default=0, metavar="C",
                    help="report the dimension bound from a random codimension-C slice")
    nh.add_argument("--no-dimension", action="store_true")
    n2 = sub.add_parser("n2", parents=[common, src], help="degree and points of N_2")
    n2.add_argument("--reconstruct", action="store_true",
                    help="also attempt the Fermat reconstruction")
    dc = sub.add_parser("decompose", parents=[common, src],
                        help="verify N_k = union of V(component)")
    dc.add_argument("--k", type=int, required=True)
    dc.add_argument("--component", action="append", required=True,
                    help="comma-separated generators in w0..wn; repeat per component")
    jc = sub.add_parser("jacobian", parents=[common], help="jacobian ring of a cubic")
    jc.add_argument("--cubic", required=True)
    jc.add_argument("--n", type=int, required=True)
    jc.add_argument("--out", help="write the presentation to this file")
    qt = sub.add_parser("quotient", parents=[common, src], help="R/(z) for a non-Lefschetz z")
    qt.add_argument("--z", required=True, help="linear form in x0..xn")
    qt.add_argument("--lifting", action="store_true", help="compare WLP_2 of R/(z) and R")
    ve = sub.add_parser("verify-example", parents=[common], help="verify a corpus instance")
    ve.add_argument("name")
    fb = sub.add_parser("fibers", parents=[common, src], help="histogram of dim K^1_{x^k}")
    fb.add_argument("--k", type=int, required=True)
    return p


# ---------------------------------------------------------------- helpers

def _field(args, default=None):
    if args.field is not None:
        return field_from_descriptor(args.field)
    return default if default is not None else field_from_descriptor()


def _presentation(args) -> tuple[QuadricPresentation, str]:
    if args.file:
        try:
            with open(args.file) as fh:
                text = fh.read()
        except OSError as exc:
            raise InputError(f"cannot read {args.file}: {exc}") from exc
        field = field_from_descriptor(args.field) if args.field else None
        return QuadricPresentation.from_text(text, field), f"file:{args.file}"
    if args.example:
        try:
            inst = cons.corpus_instance(args.example)
        except (KeyError, ValueError) as exc:
            raise InputError(str(exc)) from exc
        pres = inst.presentation
        if args.field:
            pres = QuadricPresentation.from_text(pres.to_text(), field_from_descriptor(args.field))
        return pres, f"example:{inst.name}"
    if args.random is not None:
        return (cons.random_quadric_ci(args.random, args.seed, _field(args)),
                f"random:n={args.random},seed={args.seed}")
    raise InputError("give one of --file, --example or --random")


def _algebra(args) -> tuple[GradedAlgebra, str]:
    pres, desc = _presentation(args)
    return build_algebra(pres, args.max_degree), desc


def _strs(values) -> list[str]:
    return [str(v) for v in values]


def _write(path: str, text: str):
    try:
        with open(path, "w") as fh:
            fh.write(text)
    except OSError as exc:
        raise InputError(f"cannot write {path}: {exc}") from exc


# ---------------------------------------------------------------- commands

def cmd_build(args, rep):
    A, rep["instance"] = _algebra(args)
    rep["field"] = A.field.descriptor()
    rep["results"] = A.to_report()
    rep["results"]["gorenstein"] = "true" if A.is_gorenstein() else "false"
    if args.out:
        _write(args.out, A.presentation.to_text())
    return f"built R with dims {A.dims}"


def cmd_hilbert(args, rep):
    A, rep["instance"] = _algebra(args)
    rep["field"] = A.field.descriptor()
    N = A.socle_degree
    rep["results"] = {"dims": _strs(A.dims[:N + 1]), "socle_degree": str(N)}
    return f"dims {A.dims[:N + 1]}"


def cmd_lefschetz(args, rep):
    A, rep["instance"] = _algebra(args)
    rep["field"] = A.field.descriptor()
    pairs = [(k, 1, "WLP") for k in args.wlp] + [(k, s, "SLP") for k, s in args.slp]
    if not pairs:
        raise InputError("give at least one --wlp K or --slp K S")
    rng = random.Random(args.seed)
    verdicts = []
    for k, s, kind in pairs:
        kw = {"rng": rng, "budget": args.samples}
        v = check_wlp(A, k, **kw) if kind == "WLP" else check_slp(A, k, s, **kw)
        verdicts.append(v)
    rep["results"] = {"verdicts": [v.to_dict() for v in verdicts]}
    rep["certificates"] = [v.certificate.to_dict() for v in verdicts]
    summary = ", ".join(f"{v.name}_{v.degree}({v.power}) {v.verdict} "
                        f"rank {v.certificate.generic_rank}/{v.certificate.max_possible}"
                        for v in verdicts)
    if not all(v.holds for v in verdicts):
        raise _Failed(summary)
    return summary


def cmd_nihil(args, rep):
    A, rep["instance"] = _algebra(args)
    rep["field"] = A.field.descriptor()
    locus = loci.nihil_ideal(A, args.k)
    res = {"locus": locus.to_dict(), "generator_count": str(len(locus.generators))}
    summary = f"N_{args.k}: {len(locus.generators)} generators"
    if args.slice:
        bound = loci.sliced_dimension_bound(A, args.k, args.slice, random.Random(args.seed),
                                            args.max_pairs)
        res["dimension_upper_bound"] = str(bound)
        summary += f", dim <= {bound}"
    elif not args.no_dimension:
        d = loci.projective_dimension(locus.ideal, args.max_pairs)
        res["dimension"] = str(d)
        summary += f", projective dimension {d}"
    rep["results"] = res
    return summary


def cmd_n2(args, rep):
    A, rep["instance"] = _algebra(args)
    f = A.field
    rep["field"] = f.descriptor()
    a = loci.n2_analysis(A, args.max_pairs)
    res = a.to_dict(f)
    summary = f"N_2 has degree {a.degree}, {len(a.rational_points)} rational points"
    if args.reconstruct:
        rec = cons.fermat_reconstruct(A, a)
        res["reconstruction"] = {
            "matrix": ([[f.to_string(c) for c in row] for row in rec.matrix.tolist()]
                       if rec.matrix is not None else None),
            "squares_vanish": "true" if rec.squares_vanish else "false",
            "independent": "true" if rec.independent else "false",
            "same_ideal": "true" if rec.same_ideal else "false",
            "note": rec.note,
        }
        rep["results"] = res
        if not rec.ok:
            raise _Failed(summary + "; reconstruction failed")
        summary += "; Fermat reconstruction verified"
    rep["results"] = res
    return summary


def cmd_decompose(args, rep):
    A, rep["instance"] = _algebra(args)
    f = A.field
    rep["field"] = f.descriptor()
    W = VariableContext.dual(A.n)
    comps = []
    for text in args.component:
        gens = [parse_poly(t, W, f) for t in text.split(",") if t.strip()]
        if not gens:
            raise InputError("empty component")
        comps.append(Ideal.of(gens))
    check = loci.verify_component_decomposition(A, args.k, comps, max_pairs=args.max_pairs)
    rep["results"] = {"k": str(args.k), "holds": "true" if check.holds else "false",
                      "log": check.log}
    summary = f"decomposition of N_{args.k}: {'verified' if check.holds else 'FAILS'}"
    if not check.holds:
        raise _Failed(summary)
    return summary


def cmd_jacobian(args, rep):
    f = _field(args)
    rep["field"] = f.descriptor()
    F = cons.CubicForm.parse(args.cubic, args.n, f)
    pres = cons.jacobian_ring(F)
    rep["instance"] = f"cubic:{format_poly(F.F)}"
    rep["results"] = {"cubic": format_poly(F.F), "generators": [format_poly(g) for g in pres.generators]}
    if args.out:
        _write(args.out, pres.to_text())
    A = build_algebra(pres, args.max_degree)
    rep["results"]["dims"] = _strs(A.dims)
    rep["results"]["smooth"] = "true"
    return f"smooth cubic; jacobian ring dims {A.dims}"


def cmd_quotient(args, rep):
    A, rep["instance"] = _algebra(args)
    f = A.field
    rep["field"] = f.descriptor()
    z = A.parse(args.z)
    q = A.quotient_by_linear(z)
    res = {"z": str(z), "w": str(q.w),
           "quotient_generators": [format_poly(g) for g in q.algebra.presentation.generators],
           "quotient_dims": _strs(q.algebra.dims),
           "identity": [{"s": str(s), "dim_K_w": str(lhs), "dim_R_minus_K_z": str(rhs)}
                        for s, lhs, rhs in q.identity],
           "identity_holds": "true" if q.identity_holds else "false"}
    summary = f"R/(z) dims {q.algebra.dims}; kernel identity {'holds' if q.identity_holds else 'FAILS'}"
    if args.lifting:
        lift = cons.verify_lifting(A, z, seed=args.seed)
        res["lifting"] = lift.to_dict()
        rep["certificates"] = [lift.quotient_wlp2.certificate.to_dict(),
                               lift.parent_wlp2.certificate.to_dict()]
        summary += (f"; WLP_2 quotient {lift.quotient_wlp2.verdict}, parent "
                    f"{lift.parent_wlp2.verdict}")
        rep["results"] = res
        if not lift.consistent_with_theorem:
            raise _Failed(summary)
    rep["results"] = res
    if not q.identity_holds:
        raise _Failed(summary)
    return summary


def cmd_verify_example(args, rep):
    try:
        inst = cons.corpus_instance(args.name)
    except (KeyError, ValueError) as exc:
        raise InputError(str(exc)) from exc
    rep["instance"] = f"example:{inst.name}"
    rep["field"] = inst.presentation.field.descriptor()
    facts = inst.verify()
    rep["results"] = {"facts": [{"name": r.name, "passed": "true" if r.passed else "false",
                                 "detail": r.detail} for r in facts],
                      "all_passed": "true" if all(r.passed for r in facts) else "false"}
    passed = sum(r.passed for r in facts)
    summary = f"{inst.name}: {passed}/{len(facts)} facts verified"
    if passed != len(facts):
        raise _Failed(summary)
    return summary


def cmd_fibers(args, rep):
    A, rep["instance"] = _algebra(args)
    rep["field"] = A.field.descriptor()
    samples = args.samples if args.samples is not None else 50
    hist = loci.fiber_statistics(A, args.k, samples, random.Random(args.seed))
    rep["results"] = {"k": str(args.k), "samples": str(samples),
                      "histogram": {str(d): str(c) for d, c in sorted(hist.items())},
                      "generic_value": str(min(hist))}
    return f"dim K^1_(x^{args.k}) histogram {dict(sorted(hist.items()))}"


HANDLERS = {"build": cmd_build, "hilbert": cmd_hilbert, "lefschetz": cmd_lefschetz,
            "nihil": cmd_nihil, "n2": cmd_n2, "decompose": cmd_decompose,
            "jacobian": cmd_jacobian, "quotient": cmd_quotient,
            "verify-example": cmd_verify_example, "fibers": cmd_fibers}


# ---------------------------------------------------------------- entry point

def emit_report(rep: dict) -> str:
    """JSON text with a stable key order."""
    order = ["schema", "tool_version", "command", "instance", "field", "seed", "results",
             "certificates", "error", "timings"]
    out = {k: rep[k] for k in order if k in rep}
    return json.dumps(out, indent=2, ensure_ascii=False)


def run(argv: Sequence[str] | None = None) -> int:
    """Run one command; returns the process exit code."""
    try:
        args = _parser().parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    if args.field:
        try:
            field_from_descriptor(args.field)
        except SagaError as exc:
            print(f"saga: error: {exc}", file=sys.stderr)
            return 2
    rep: dict = {"schema": SCHEMA_VERSION, "tool_version": __version__, "command": args.command,
                 "instance": "", "field": "", "seed": str(args.seed), "results": {},
                 "certificates": []}
    start = time.perf_counter()
    code = 0
    try:
        summary = HANDLERS[args.command](args, rep)
    except _Failed as exc:
        summary, code = str(exc), 1
    except NotRegularSequence as exc:
        rep["error"] = {"type": "NotRegularSequence", "message": str(exc),
                        "degree": str(exc.degree), "found": str(exc.found),
                        "expected": str(exc.expected)}
        summary, code = str(exc), 1
    except MathematicalFailure as exc:
        rep["error"] = {"type": type(exc).__name__, "message": str(exc)}
        summary, code = str(exc), 1
    except InputError as exc:
        rep["error"] = {"type": type(exc).__name__, "message": str(exc)}
        summary, code = f"input error: {exc}", 2
    except BudgetExceeded as exc:
        rep["error"] = {"type": type(exc).__name__, "message": str(exc)}
        summary, code = f"budget exceeded: {exc}", 3
    rep["timings"] = {"total_seconds": f"{time.perf_counter() - start:.3f}"}
    print(emit_report(rep))
    print(f"saga {args.command}: {summary}", file=sys.stderr)
    return code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()

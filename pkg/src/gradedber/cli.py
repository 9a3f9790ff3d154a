"""Command line front end.

    gradedber info FILE
    gradedber trace FILE MATRIX
    gradedber transpose FILE MATRIX
    gradedber ber FILE MATRIX [--via-cohomology] [--pi BITS]
    gradedber cohomology FILE [--weight-bound W] [--pi BITS]
    gradedber verify SUITE [--seed S]

Exit codes: 0 success, 1 input error, 2 math error, 3 verification failure.
"""

from __future__ import annotations

import argparse
import json
import sys

from .algebra import format_element
from .berezinian import gber, is_quaternion, study_det_oracle
from .errors import DecompositionFailed, InputError, MathError
from .gmatrix import graded_trace, graded_transpose
from .grading import Degree, standard_order
from .koszul import KoszulContext, cohomology_ranks, group_action_class
from .problem import parse_degree, read_problem
from .suites import SUITES, run_suite

EXIT_OK, EXIT_INPUT, EXIT_MATH, EXIT_VERIFY = 0, 1, 2, 3


def _emit(args, payload: dict, text: str):
    if args.json:
        print(json.dumps(payload, indent=2))
    else:
        print(text)


def _pi(args, prob):
    if args.pi is not None:
        return parse_degree(args.pi, prob.n, "--pi")
    return prob.pi


def _context(args, prob, ranks):
    ctx = KoszulContext(prob.algebra, ranks, _pi(args, prob))
    note = " (default)" if ctx.pi_defaulted else ""
    return ctx, note


def cmd_info(args) -> int:
    prob = read_problem(args.file)
    A = prob.algebra
    order = standard_order(A.n)
    mono_degrees = [d for d in order if any(m == d.mask for m in A.mono_degree)]
    payload = A.describe()
    payload["basis"] = [
        {"monomial": A.mono_name(m) or "1", "degree": Degree.from_mask(A.mono_degree[m], A.n).to_json()}
        for m in range(A.dim)
    ]
    payload["degrees_present"] = [d.to_json() for d in mono_degrees]
    payload["standard_order"] = [d.to_json() for d in order]
    payload["q"] = A.grading.q
    lines = [
        f"algebra     {A.label}  (n = {A.n})",
        f"dimension   {A.dim} = 2^{A.m}",
        "generators  " + ", ".join(f"{g.name}: {g.degree}, square {g.square}" for g in A.generators),
        "degrees     " + ", ".join(str(d) for d in mono_degrees),
        "order       " + ", ".join(str(d) for d in order),
        f"q           {A.grading.q}",
    ]
    if prob.ranks is not None:
        payload["ranks"] = list(prob.ranks.ranks)
        payload["r"] = prob.ranks.total
        payload["r_even"] = prob.ranks.even_total
        lines.append(f"ranks       {list(prob.ranks.ranks)}  (r = {prob.ranks.total}, r' = {prob.ranks.even_total})")
    if prob.matrices:
        payload["matrices"] = {k: repr(m) for k, m in prob.matrices.items()}
        lines.append("matrices    " + ", ".join(sorted(prob.matrices)))
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_trace(args) -> int:
    prob = read_problem(args.file)
    value = graded_trace(prob.matrix(args.matrix))
    s = format_element(value)
    _emit(args, {"matrix": args.matrix, "trace": s}, s)
    return EXIT_OK


def cmd_transpose(args) -> int:
    prob = read_problem(args.file)
    T = graded_transpose(prob.matrix(args.matrix))
    _emit(args, {"matrix": args.matrix, "transpose": T.to_json()}, str(T))
    return EXIT_OK


def cmd_ber(args) -> int:
    prob = read_problem(args.file)
    T = prob.matrix(args.matrix)
    if not args.via_cohomology:
        s = format_element(gber(T))
        payload = {"matrix": args.matrix, "ber": s}
        text = s
        if is_quaternion(prob.algebra):
            study = study_det_oracle(T)
            payload["study_determinant"] = float(f"{study:.12g}")
            text += f"\nStudy determinant {study:.12g}"
        _emit(args, payload, text)
        return EXIT_OK
    ctx, note = _context(args, prob, T.row_ranks)
    via = group_action_class(T, ctx)
    payload = {"matrix": args.matrix, "pi": ctx.pi.to_json(), "pi_defaulted": ctx.pi_defaulted,
               "ber_cohomology": format_element(via)}
    try:
        direct = gber(T)
    except DecompositionFailed as exc:
        payload["ber_decomposition"] = None
        payload["agree"] = None
        _emit(args, payload, f"{format_element(via)} (decomposition route unavailable: {exc})")
        return EXIT_OK
    agree = direct == via
    payload["ber_decomposition"] = format_element(direct)
    payload["agree"] = agree
    if agree:
        text = f"{format_element(via)} (both routes agree)"
    else:
        text = (f"cohomology:    {format_element(via)}\n"
                f"decomposition: {format_element(direct)}\nMISMATCH")
    if note:
        text += f"\npi = {ctx.pi}{note}"
    _emit(args, payload, text)
    return EXIT_OK if agree else EXIT_VERIFY


def cmd_cohomology(args) -> int:
    prob = read_problem(args.file)
    if prob.ranks is None:
        raise InputError(f"{args.file}: cohomology needs top-level ranks")
    ctx, note = _context(args, prob, prob.ranks)
    rep = cohomology_ranks(ctx, args.weight_bound)
    payload = rep.to_json()
    payload.update(pi=ctx.pi.to_json(), pi_defaulted=ctx.pi_defaulted, r=ctx.r)
    lines = [f"Koszul complex r = {ctx.r}, pi = {ctx.pi}{note}, x-weight <= {rep.weight_bound}"]
    for k in rep.levels():
        unsafe = sorted(w for kk, w in rep.unsafe if kk == k)
        flag = f"  (x-weight {unsafe} truncated, not counted)" if unsafe else ""
        lines.append(f"H^{k}: dim_Q {rep.level_dim(k)}, rank over A {rep.level_rank(k)}{flag}")
    _emit(args, payload, "\n".join(lines))
    return EXIT_OK


def cmd_verify(args) -> int:
    names = SUITES if args.suite == "all" else (args.suite,)
    results = [run_suite(name, args.seed) for name in names]
    ok = all(r.ok for r in results)
    if args.json:
        print(json.dumps({"seed": args.seed, "ok": ok, "suites": [r.to_json() for r in results]}, indent=2))
    else:
        for r in results:
            print(f"[{'PASS' if r.ok else 'FAIL'}] {r.suite}  (seed {args.seed}, {r.elapsed:.1f} s)")
            for c in r.checks:
                print(f"    {'ok  ' if c.ok else 'FAIL'} {c.name}: {c.passed} passed, {c.failed} failed")
                if c.counterexample:
                    print("         first counterexample:")
                    for line in c.counterexample.splitlines():
                        print("           " + line)
    return EXIT_OK if ok else EXIT_VERIFY


class _Parser(argparse.ArgumentParser):
    # usage errors are input errors, not argparse's default exit status 2
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="gradedber", description="Linear algebra over (Z_2)^n-commutative algebras.")
    common = _Parser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine readable output")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)

    s = sub.add_parser("info", parents=[common], help="describe the algebra and ranks of a problem file")
    s.add_argument("file")
    s.set_defaults(func=cmd_info)

    for name, func, extra in [("trace", cmd_trace, "graded trace"),
                              ("transpose", cmd_transpose, "graded transpose"),
                              ("ber", cmd_ber, "graded Berezinian (degree 0 only)")]:
        s = sub.add_parser(name, parents=[common], help=extra)
        s.add_argument("file")
        s.add_argument("matrix")
        s.set_defaults(func=func)
        if name == "ber":
            s.add_argument("--via-cohomology", action="store_true",
                           help="also compute the class of the top Koszul cocycle and compare")
            s.add_argument("--pi", help="parity shift degree, e.g. 011 or [0,1,1]")

    s = sub.add_parser("cohomology", parents=[common], help="truncated Koszul cohomology ranks")
    s.add_argument("file")
    s.add_argument("--weight-bound", type=int, default=3, metavar="W")
    s.add_argument("--pi", help="parity shift degree, e.g. 011 or [0,1,1]")
    s.set_defaults(func=cmd_cohomology)

    s = sub.add_parser("verify", parents=[common], help="run an invariant suite")
    s.add_argument("suite", choices=list(SUITES) + ["all"])
    s.add_argument("--seed", type=int, default=0)
    s.set_defaults(func=cmd_verify)
    return p


def main(argv=None) -> int:
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:  # --help or a usage error
        return exc.code
    try:
        return args.func(args)
    except InputError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except MathError as exc:
        print(f"math error ({type(exc).__name__}): {exc}", file=sys.stderr)
        return EXIT_MATH


if __name__ == "__main__":
    sys.exit(main())

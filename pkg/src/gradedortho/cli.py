"""Command line front end.

Subcommands: ``run`` (orthonormalize a problem file and write a result
file), ``verify`` (re-check a result file against its problem from
first principles) and ``compare`` (run all three methods and report
pairwise differences).

Exit codes: 0 success, 2 parse/schema/usage error, 3 mathematical
failure (linear dependence, degenerate metric, terminal isotropic
vector), 4 verification failure.
"""

import argparse
import sys

import numpy as np

from .errors import (
    DegenerateMetric,
    GradedOrthoError,
    LinearlyDependentInput,
    SchemaError,
    TerminalIsotropicVector,
)
from .fileio import (
    METHODS,
    parse_problem,
    parse_result,
    result_payload,
    write_result,
)
from .ortho import (
    gram_method_reference,
    gram_schmidt_reference,
    orthonormalize_graded,
    verify_table,
)
from .pseudo import pseudo_orthonormalize_graded
from .spectral import max_abs

EXIT_OK = 0
EXIT_SCHEMA = 2
EXIT_MATH = 3
EXIT_VERIFY = 4

# Degeneration identities the compare subcommand checks (singleton
# levels reduce to Gram-Schmidt, one level reduces to the Gram method).
SINGLETON_MATCH_TOL = 1e-10
SINGLE_LEVEL_MATCH_TOL = 1e-12


def _fail(code, message):
    print(f"error: {message}", file=sys.stderr)
    return code


def _math_exit(err):
    level = getattr(err, "level", None)
    where = f" (level {level})" if level is not None else ""
    return _fail(EXIT_MATH, f"{type(err).__name__}{where}: {err}")


def _load_problem(path):
    return parse_problem(path)


def _run_method(problem, method, degeneracy_tol):
    if method == "graded":
        if problem.metric == "pseudo":
            return pseudo_orthonormalize_graded(problem.source, degeneracy_tol)
        return orthonormalize_graded(problem.source, degeneracy_tol)
    if method == "gram-schmidt":
        return gram_schmidt_reference(problem.source, degeneracy_tol)
    return gram_method_reference(problem.source, degeneracy_tol)


def cmd_run(args):
    try:
        problem = _load_problem(args.input)
    except (SchemaError, GradedOrthoError, OSError) as err:
        return _fail(EXIT_SCHEMA, str(err))
    if args.degeneracy_tol is not None:
        problem.degeneracy_tol = args.degeneracy_tol
    if args.verify_tol is not None:
        problem.verify_tol = args.verify_tol
    if problem.metric == "pseudo" and args.method != "graded":
        return _fail(
            EXIT_SCHEMA,
            f"method '{args.method}' requires a euclidean metric; the "
            f"pseudo pipeline only supports 'graded'",
        )
    try:
        table = _run_method(problem, args.method, problem.degeneracy_tol)
    except (LinearlyDependentInput, DegenerateMetric, TerminalIsotropicVector) as err:
        return _math_exit(err)
    report = verify_table(problem.source, table, problem.verify_tol)
    output = args.output
    if output is None:
        stem = args.input[:-5] if args.input.endswith(".json") else args.input
        output = stem + ".result.json"
    payload = result_payload(problem, table, report, args.method)
    write_result(output, payload)
    print(f"wrote {output}")
    for line in report.lines():
        print(line)
    if getattr(table, "promotions", None):
        for from_level, label, to_level in table.promotions:
            print(f"promoted '{label}' from level {from_level} to level {to_level}")
    return EXIT_OK if report.passed else EXIT_VERIFY


def cmd_verify(args):
    try:
        problem = _load_problem(args.problem)
        result = parse_result(args.result)
    except (SchemaError, GradedOrthoError, OSError) as err:
        return _fail(EXIT_SCHEMA, str(err))
    if result.digest_hex != problem.digest_hex:
        return _fail(
            EXIT_SCHEMA,
            "result file was computed from a different problem file "
            f"(digest {result.digest_hex[:12]}... vs {problem.digest_hex[:12]}...)",
        )
    gram = problem.source.matrix
    total = gram.shape[0]
    for pos, block in enumerate(result.blocks):
        if block.shape[0] != total:
            return _fail(
                EXIT_SCHEMA,
                f"level entry {pos} has {block.shape[0]} coefficient rows, "
                f"expected {total}",
            )
    c = np.hstack(result.blocks)
    if c.shape[1] != total:
        return _fail(
            EXIT_SCHEMA,
            f"result provides {c.shape[1]} output vectors for {total} inputs",
        )
    product = c.conj().T @ gram @ c
    if result.signs is not None:
        target = np.diag(np.concatenate(result.signs).astype(np.complex128))
    else:
        target = np.eye(total, dtype=np.complex128)
    residual = max_abs(product - target)
    embedded = result.report.get("max_residual")
    print(f"recomputed orthonormality residual: {residual:.6e}")
    if embedded is not None:
        print(f"residual recorded in result file:   {float(embedded):.6e}")
    print(f"tolerance: {result.verify_tol:.1e}")
    if residual <= result.verify_tol:
        print("verification: PASS")
        return EXIT_OK
    print("verification: FAIL")
    return EXIT_VERIFY


def cmd_compare(args):
    try:
        problem = _load_problem(args.input)
    except (SchemaError, GradedOrthoError, OSError) as err:
        return _fail(EXIT_SCHEMA, str(err))
    if problem.metric != "euclidean":
        return _fail(EXIT_SCHEMA, "compare requires a euclidean problem")
    degeneracy_tol = (
        args.degeneracy_tol if args.degeneracy_tol is not None else problem.degeneracy_tol
    )
    tables = {}
    for method in METHODS:
        try:
            tables[method] = _run_method(problem, method, degeneracy_tol)
        except (LinearlyDependentInput, DegenerateMetric) as err:
            return _math_exit(err)
    matrices = {m: t.matrix() for m, t in tables.items()}
    pairs = [("graded", "gram-schmidt"), ("graded", "gram"), ("gram-schmidt", "gram")]
    diffs = {}
    for a, b in pairs:
        diffs[(a, b)] = max_abs(matrices[a] - matrices[b])
        print(f"max |{a} - {b}| = {diffs[(a, b)]:.6e}")
    index = problem.source.index
    if all(size == 1 for size in index.sizes):
        holds = diffs[("graded", "gram-schmidt")] <= SINGLETON_MATCH_TOL
        print(
            "singleton levels: graded reduces to gram-schmidt -> "
            + ("HOLDS" if holds else "VIOLATED")
        )
    if len(index) == 1:
        holds = diffs[("graded", "gram")] <= SINGLE_LEVEL_MATCH_TOL
        print(
            "single level: graded reduces to gram -> "
            + ("HOLDS" if holds else "VIOLATED")
        )
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(
        prog="gradedortho",
        description="Grading-preserving orthonormalization of vector systems.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    run = sub.add_parser("run", help="orthonormalize a problem file")
    run.add_argument("input", help="problem JSON file")
    run.add_argument("--output", help="result file path (default: <input>.result.json)")
    run.add_argument("--method", choices=METHODS, default="graded")
    run.add_argument("--degeneracy-tol", type=float, default=None)
    run.add_argument("--verify-tol", type=float, default=None)
    run.set_defaults(func=cmd_run)

    verify = sub.add_parser("verify", help="re-check a result against its problem")
    verify.add_argument("problem", help="problem JSON file")
    verify.add_argument("result", help="result JSON file")
    verify.set_defaults(func=cmd_verify)

    compare = sub.add_parser("compare", help="run all methods and compare")
    compare.add_argument("input", help="problem JSON file")
    compare.add_argument("--degeneracy-tol", type=float, default=None)
    compare.set_defaults(func=cmd_compare)
    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    return args.func(args)


def entry():
    raise SystemExit(main())


if __name__ == "__main__":
    entry()

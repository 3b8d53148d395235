"""Command-line interface.

Exit codes: 0 success, 1 verification or lift-condition failure, 2 bad
input, 3 budget exceeded.
"""

from __future__ import annotations

import argparse
import difflib
import json
import logging
import sys
import time
from pathlib import Path

from . import formats
from .errors import (BudgetExceeded, ConditionsFailed, DimensionError, InternalError,
                     InvalidSpec, NoCircuitOfSupport3, NotCanonicalizable)
from .exact import IntMatrix
from .graver import (DEFAULT_COMPLETION_BUDGET, DEFAULT_ORACLE_BUDGET, graver_basis,
                     graver_complexity)
from .lift import (base_relation_a34, base_relation_cor2, bound_berstein_onn, bound_cor1,
                   bound_cor2, bound_cor3, bound_mixed, check_conditions, lift, lift_chain)
from .nfold import type_of
from .relation import (MEMBERSHIP_MAX_COPIES, canonicalize_for_lift, normalize_signs, verify_membership,
                       verify_relation)

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3

log = logging.getLogger("graverlift")


class InputError(Exception):
    pass


def _positive(text: str) -> int:
    value = int(text)
    if value <= 0:
        raise argparse.ArgumentTypeError(f"must be positive, got {value}")
    return value


def _read_matrix(path: str) -> IntMatrix:
    p = Path(path)
    if not p.is_file():
        raise InputError(f"no such file: {path}")
    return formats.read_matrix(p)


def _read_relation(path: str):
    p = Path(path)
    if not p.is_file():
        raise InputError(f"no such file: {path}")
    return formats.read_relation(p)


def _print_relation(rel, out=sys.stdout):
    for i, (h, x) in enumerate(zip(rel.coefficients, rel.elements)):
        print(f"[{i}] coefficient {h}, type {type_of(x)}", file=out)
        for row in x.bricks:
            print("    " + " ".join(f"{a:>3}" for a in row), file=out)
    print(f"sum of |coefficients| = {rel.coefficient_sum()}", file=out)


def _write_relation(rel, output: str | None, fmt: str):
    text = formats.dump_relation(rel)
    if output:
        Path(output).write_text(text)
    if fmt == "json" and not output:
        sys.stdout.write(text)
    elif fmt == "human":
        _print_relation(rel)


# -- subcommands ---------------------------------------------------------------------

def cmd_graver(args) -> int:
    m = _read_matrix(args.matrix)
    basis = graver_basis(m, budget=args.budget_completion)
    if args.format == "json":
        json.dump({"elements": [list(v) for v in basis], "count": len(basis), "max_norm": basis.max_norm()},
                  sys.stdout)
        print()
    else:
        for v in basis:
            print(" ".join(str(a) for a in v))
        print(f"{len(basis)} elements")
        print(f"max 1-norm {basis.max_norm()}")
    return EXIT_OK


def cmd_complexity(args) -> int:
    A = _read_matrix(args.A)
    B = _read_matrix(args.B) if args.B else IntMatrix.identity(A.cols)
    if A.cols != B.cols:
        raise InputError(f"A has {A.cols} columns but B has {B.cols}")
    value = graver_complexity(A, B, budget=args.budget_completion)
    if args.format == "json":
        print(json.dumps({"graver_complexity": value}))
    else:
        print(value)
    return EXIT_OK


def _report(report, fmt, extra=None) -> None:
    if fmt == "json":
        doc = {
            "sum_zero": report.sum_zero, "coprime": report.coprime, "nonzero": report.nonzero,
            "kernel_dim_one": report.kernel_dim_one, "membership": report.membership,
            "notes": report.notes, "valid": report.ok,
        }
        doc.update(extra or {})
        print(json.dumps(doc))
    else:
        for line in report.lines():
            print(line)
        for k, v in (extra or {}).items():
            print(f"{k:<15} {v}")


def cmd_relation(args) -> int:
    rel = _read_relation(args.relation)
    if args.action == "verify":
        report = verify_relation(rel)
        if not args.skip_membership:
            limit = args.membership_max_copies or None
            report = report.merge(verify_membership(rel, budget=args.budget_oracle, max_copies=limit))
        _report(report, args.format, {"sum": rel.coefficient_sum()})
        return EXIT_OK if report.ok else EXIT_FAIL

    if args.l is None:
        raise InputError("--l is required for lift and chain")
    rel = normalize_signs(rel)
    if args.x0_index is not None:
        rel, perm = canonicalize_for_lift(rel, args.l, args.x0_index)
        log.info("brick permutation %s", perm)
    if args.action == "lift":
        cert = check_conditions(rel, args.l)
        if not cert.ok:
            raise ConditionsFailed("; ".join(cert.diagnostics), certificate=cert)
        out = lift(rel, cert)
    else:
        if args.target is None:
            raise InputError("--target is required for chain")
        switch = None
        if args.switch_at is not None or args.switch_l is not None:
            if args.switch_at is None or args.switch_l is None:
                raise InputError("--switch-at and --switch-l go together")
            switch = (args.switch_at, args.switch_l)
        if args.target < rel.copies or (switch and switch[0] > args.target):
            raise InputError("target must be at least M and at least the switch point")
        out = lift_chain(rel, args.l, args.target, switch)
    _write_relation(out, args.output, args.format)
    if args.format == "human" or args.output:
        print(f"sum = {out.coefficient_sum()}")
    return EXIT_OK


def cmd_base(args) -> int:
    if args.which == "a34":
        rel = base_relation_a34()
    else:
        if not args.matrix:
            raise InputError("base cor2 needs a matrix file")
        rel = base_relation_cor2(_read_matrix(args.matrix), budget=args.budget_completion)
    _write_relation(rel, args.output, args.format)
    return EXIT_OK


_FORMULAS = {
    "cor1": lambda a, M: bound_cor1(a.sum_h, a.g, a.s, a.m0, M),
    "cor2": lambda a, M: bound_cor2(a.g, M),
    "cor3": lambda a, M: bound_cor3(M),
    "berstein_onn": lambda a, M: bound_berstein_onn(M),
    "mixed": lambda a, M: bound_mixed(a.m0, M),
}


def cmd_bound(args) -> int:
    formulas = [args.formula] + list(args.compare or [])
    needed = {"cor1": ("sum_h", "g", "s", "m0"), "cor2": ("g",), "mixed": ("m0",)}
    for f in formulas:
        missing = [p for p in needed.get(f, ()) if getattr(args, p) is None]
        if missing:
            raise InputError(f"{f} needs --{', --'.join(p.replace('_', '-') for p in missing)}")
    if args.M is not None:
        Ms = [args.M]
    else:
        lo = args.m_from if args.m_from is not None else 4
        hi = args.m_to if args.m_to is not None else lo
        if hi < lo:
            raise InputError("--m-to below --m-from")
        Ms = list(range(lo, hi + 1))
    try:
        table = [[_FORMULAS[f](args, M) for f in formulas] for M in Ms]
    except ValueError as exc:
        raise InputError(str(exc)) from None
    if args.format == "json":
        print(json.dumps([formats.bound_to_dict(r) for row in table for r in row]))
    else:
        print("M".rjust(4) + "".join(f.rjust(14) for f in formulas))
        for M, row in zip(Ms, table):
            print(str(M).rjust(4) + "".join(str(r.value).rjust(14) for r in row))
    return EXIT_OK


_REPRO_TARGETS = (
    ("a3m_m5", 5, None, 75),
    ("a3m_m6", 6, None, 171),
    ("a3m_m7", 7, None, 363),
    ("a3m_m7_switched", 7, 6, 367),
)


def _golden(name: str, golden_dir: str | None) -> str:
    if golden_dir:
        return (Path(golden_dir) / f"{name}.json").read_text()
    return formats.golden_text(name)


def cmd_reproduce(args) -> int:
    failures = 0

    def check(label: str, ok: bool, detail: str = ""):
        nonlocal failures
        failures += not ok
        print(f"{'PASS' if ok else 'FAIL'}  {label}{'  ' + detail if detail and not ok else ''}")

    start = time.perf_counter()
    base = base_relation_a34()
    base_text = formats.dump_relation(base)
    check("base relation matches golden file", base_text == _golden("base_a34", args.golden_dir),
          _diff(_golden("base_a34", args.golden_dir), base_text, "base_a34"))
    check("base relation is primitive", verify_relation(base).ok)
    check("base relation sum = 27", base.coefficient_sum() == 27)

    produced = {}
    for name, M, switch_at, expected in _REPRO_TARGETS:
        rel = lift_chain(base, 2, M, (switch_at, 0) if switch_at else None)
        produced[name] = rel
        text = formats.dump_relation(rel)
        golden = _golden(name, args.golden_dir)
        check(f"{name}: tables and coefficients match golden file", text == golden, _diff(golden, text, name))
        check(f"{name}: primitive", verify_relation(rel).ok)
        check(f"{name}: sum = {expected}", rel.coefficient_sum() == expected, f"got {rel.coefficient_sum()}")
    check("367 > 363", produced["a3m_m7_switched"].coefficient_sum() > produced["a3m_m7"].coefficient_sum())
    print(f"algebraic checks took {time.perf_counter() - start:.2f}s")

    if not args.skip_membership:
        for name, rel in [("base_a34", base)] + list(produced.items()):
            report = verify_membership(rel, budget=args.budget_oracle)
            check(f"{name}: every element in the Graver basis (oracle)", report.ok,
                  "" if report.ok else ", ".join(report.membership))
    else:
        print("SKIP  membership oracles (--skip-membership)")

    print(f"{'all checks passed' if not failures else f'{failures} check(s) failed'}")
    return EXIT_OK if not failures else EXIT_FAIL


def _diff(expected: str, actual: str, name: str) -> str:
    if expected == actual:
        return ""
    lines = difflib.unified_diff(expected.splitlines(), actual.splitlines(),
                                 f"golden/{name}.json", f"computed/{name}.json", lineterm="")
    return "\n" + "\n".join(lines)


# -- argument parsing ----------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("human", "json"), default="human")
    common.add_argument("--budget-completion", type=_positive, default=DEFAULT_COMPLETION_BUDGET)
    common.add_argument("--budget-oracle", type=_positive, default=DEFAULT_ORACLE_BUDGET)
    common.add_argument("-v", "--verbose", action="store_true")

    parser = argparse.ArgumentParser(prog="graverlift", description="Graver bases and lifted primitive relations.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("graver", parents=[common], help="Graver basis of a matrix file")
    p.add_argument("matrix")
    p.set_defaults(func=cmd_graver)

    p = sub.add_parser("complexity", parents=[common], help="Graver complexity g(A, B)")
    p.add_argument("A")
    p.add_argument("B", nargs="?")
    p.set_defaults(func=cmd_complexity)

    p = sub.add_parser("relation", parents=[common], help="verify, lift or chain a relation document")
    p.add_argument("action", choices=("verify", "lift", "chain"))
    p.add_argument("relation")
    p.add_argument("--l", type=int)
    p.add_argument("--target", type=int)
    p.add_argument("--switch-at", type=int)
    p.add_argument("--switch-l", type=int)
    p.add_argument("--x0-index", type=int)
    p.add_argument("--skip-membership", action="store_true")
    p.add_argument("--membership-max-copies", type=int, default=MEMBERSHIP_MAX_COPIES,
                   help="skip the oracle above this M (0 = no limit)")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_relation)

    p = sub.add_parser("base", parents=[common], help="write a base relation document")
    p.add_argument("which", choices=("a34", "cor2"))
    p.add_argument("matrix", nargs="?")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_base)

    p = sub.add_parser("bound", parents=[common], help="evaluate lower-bound formulas")
    p.add_argument("formula", choices=sorted(_FORMULAS))
    p.add_argument("--compare", nargs="+", choices=sorted(_FORMULAS))
    p.add_argument("--M", type=int)
    p.add_argument("--m-from", type=int)
    p.add_argument("--m-to", type=int)
    p.add_argument("--g", type=int)
    p.add_argument("--s", type=int)
    p.add_argument("--m0", type=int)
    p.add_argument("--sum-h", type=int)
    p.set_defaults(func=cmd_bound)

    p = sub.add_parser("reproduce", parents=[common], help="regenerate the M=5,6,7 relations and compare")
    p.add_argument("--skip-membership", action="store_true")
    p.add_argument("--golden-dir")
    p.set_defaults(func=cmd_reproduce)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except (InputError, formats.ParseError, InvalidSpec, DimensionError, NotCanonicalizable,
            NoCircuitOfSupport3, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except ConditionsFailed as exc:
        print(f"lift conditions failed: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except BudgetExceeded as exc:
        print(f"budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except InternalError as exc:
        print(f"internal error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())

"""Command-line pipeline: generate -> reduce -> solve -> verify -> extract-vc, plus checks.

Exit codes: 0 success / check holds, 1 check falsified, 2 bad input,
3 instance beyond the chosen solver's budget.
"""
from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path

from .allocation import parse_allocation, serialize_allocation
from .errors import BudgetExceeded, FormatError, PreconditionError, ValidationError
from .exact import parse_fraction_arg
from .graphs import FAMILIES, generate_family, parse_graph
from .reduction import DEFAULT_EPSILON, ReductionParams, build_instance, parse_instance, serialize_instance
from .solver import improve_allocation, removable_vertices, solve_bruteforce, solve_structured
from .valuations import check_superadditive_additive, check_supermodular, nsw_log2, nsw_power
from .verifier import theorem_sweep, verify_capprox

EXIT_OK, EXIT_FALSIFIED, EXIT_BAD_INPUT, EXIT_BUDGET = 0, 1, 2, 3


def _write(path: str | None, text: str) -> None:
    if path is None or path == "-":
        sys.stdout.write(text)
        return
    target = Path(path)
    fd, tmp = tempfile.mkstemp(dir=target.parent or ".", prefix=f".{target.name}.", suffix=".tmp")
    try:
        with os.fdopen(fd, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
        os.replace(tmp, target)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _read(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _json(obj) -> str:
    return json.dumps(obj, indent=1) + "\n"


def _seed(text: str) -> int:
    try:
        value = int(text)
    except ValueError:
        raise argparse.ArgumentTypeError(f"seed must be an integer, got {text!r}") from None
    if not 0 <= value < 2 ** 64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return value


def _fraction(text: str):
    try:
        return parse_fraction_arg(text)
    except FormatError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _load_pair(args):
    inst = parse_instance(_read(args.instance))
    alloc = parse_allocation(_read(args.allocation), inst, complete_to_greedy=args.complete_to_greedy)
    return inst, alloc


def cmd_generate(args) -> int:
    g = generate_family(args.family, args.n, args.seed)
    _write(args.output, g.to_text())
    return EXIT_OK


def cmd_reduce(args) -> int:
    g = parse_graph(_read(args.graph))
    inst = build_instance(g, ReductionParams(args.c, args.epsilon))
    _write(args.output, serialize_instance(inst))
    print(f"N={inst.N} M={inst.M} agents={inst.n} items={inst.item_count} alpha_log2={inst.alpha_log2:.6f}",
          file=sys.stderr if args.output in (None, "-") else sys.stdout)
    return EXIT_OK


def cmd_solve(args) -> int:
    inst = parse_instance(_read(args.instance))
    solve = solve_bruteforce if args.method == "bruteforce" else solve_structured
    alloc, value = solve(inst)
    _write(args.output, serialize_allocation(alloc))
    print(f"k={value.two_exp} g={value.alpha_exp} log2_nsw={nsw_log2(value, inst.alpha_log2, inst.n):.9f}",
          file=sys.stderr if args.output in (None, "-") else sys.stdout)
    return EXIT_OK


def cmd_verify(args) -> int:
    inst, alloc = _load_pair(args)
    report = verify_capprox(inst, alloc, cross_check=args.cross_check)
    _write(args.output, _json(report.to_dict()))
    return EXIT_OK if report.theorem_holds else EXIT_FALSIFIED


def cmd_extract_vc(args) -> int:
    inst, alloc = _load_pair(args)
    report = verify_capprox(inst, alloc)
    if not report.c_approximate:
        print("allocation is not c-approximate; no cover extracted", file=sys.stderr)
        return EXIT_FALSIFIED
    if not report.is_minimum:
        print("V_E of a c-approximate allocation is not a minimum cover", file=sys.stderr)
        return EXIT_FALSIFIED
    print(" ".join(str(v) for v in sorted(report.V_E)))
    return EXIT_OK


def cmd_check(args) -> int:
    inst = parse_instance(_read(args.instance))
    if args.mode == "supermodular":
        report = check_supermodular(inst, "exhaustive" if args.exhaustive else "sampled", args.budget, args.seed)
    elif args.mode == "classes":
        report = check_superadditive_additive(inst, args.budget, args.seed)
    else:
        report = theorem_sweep(inst, args.trials, args.seed)
    _write(args.output, _json(report.to_dict()))
    return EXIT_OK if report.ok else EXIT_FALSIFIED


def cmd_improve(args) -> int:
    inst, alloc = _load_pair(args)
    if nsw_power(inst, alloc).is_zero:
        raise PreconditionError("allocation has zero NSW; nothing to improve")
    vbar = args.vertex
    if vbar is None:
        candidates = removable_vertices(inst, alloc)
        if not candidates:
            raise PreconditionError("V_E is already a minimal cover; no improving move exists")
        vbar = candidates[0]
    better = improve_allocation(inst, alloc, vbar)
    _write(args.output, serialize_allocation(better))
    value = nsw_power(inst, better)
    print(f"released vertex {vbar}: k={value.two_exp} g={value.alpha_exp}",
          file=sys.stderr if args.output in (None, "-") else sys.stdout)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="nswhard", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("generate", help="write a cubic graph file")
    p.add_argument("--family", required=True, choices=FAMILIES)
    p.add_argument("--n", type=int)
    p.add_argument("--seed", type=_seed)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_generate)

    p = sub.add_parser("reduce", help="compile a graph into an NSW instance")
    p.add_argument("graph")
    p.add_argument("-c", type=_fraction, default=_fraction("1"))
    p.add_argument("--epsilon", type=_fraction, default=DEFAULT_EPSILON)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_reduce)

    p = sub.add_parser("solve", help="exact NSW optimum")
    p.add_argument("instance")
    p.add_argument("--method", choices=("structured", "bruteforce"), default="structured")
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_solve)

    for name, func, helptext in (
        ("verify", cmd_verify, "diagnose an allocation; exit 1 if the theorem fails"),
        ("extract-vc", cmd_extract_vc, "print the minimum vertex cover of a c-approximate allocation"),
        ("improve", cmd_improve, "apply the improving move to a non-minimal allocation"),
    ):
        p = sub.add_parser(name, help=helptext)
        p.add_argument("instance")
        p.add_argument("allocation")
        p.add_argument("--complete-to-greedy", action="store_true",
                       help="give unassigned items to the greedy agent instead of rejecting the file")
        if name == "verify":
            p.add_argument("--cross-check", action="store_true", help="compare the optimum with brute force")
        if name == "improve":
            p.add_argument("--vertex", type=int, help="vertex to release (default: smallest removable)")
        if name != "extract-vc":
            p.add_argument("-o", "--output")
        p.set_defaults(func=func)

    p = sub.add_parser("check", help="run a lemma-check suite")
    p.add_argument("instance")
    p.add_argument("--mode", choices=("supermodular", "classes", "lemmas"), required=True)
    grp = p.add_mutually_exclusive_group()
    grp.add_argument("--exhaustive", action="store_true")
    grp.add_argument("--sampled", dest="exhaustive", action="store_false")
    p.add_argument("--budget", type=int, default=100_000)
    p.add_argument("--trials", type=int, default=1000)
    p.add_argument("--seed", type=_seed, default=0)
    p.add_argument("-o", "--output")
    p.set_defaults(func=cmd_check)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (FormatError, ValidationError, PreconditionError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BAD_INPUT


if __name__ == "__main__":
    sys.exit(main())

"""Solve reduced instances exactly and read a minimum vertex cover off the optimum."""
from fractions import Fraction

from nswhard import (
    ReductionParams,
    build_instance,
    extract_cover,
    generate_family,
    minimum_vertex_covers,
    opt_formula,
    solve_bruteforce,
    solve_structured,
    verify_capprox,
)
from nswhard.valuations import nsw_log2

for family in ("k4", "k33", "prism", "petersen"):
    inst = build_instance(generate_family(family), ReductionParams(Fraction(2)))
    alloc, value = solve_structured(inst)
    _, brute = solve_bruteforce(inst)
    report = verify_capprox(inst, alloc)
    cover = extract_cover(inst, alloc)
    size, _ = minimum_vertex_covers(inst.graph)
    print(f"{family:9s} OPT^n = {value}  (brute force: {brute}, closed form: {opt_formula(inst)})")
    print(f"          log2 NSW ~ {nsw_log2(value, inst.alpha_log2, inst.n):.3f}, c-approximate: {report.c_approximate}")
    print(f"          extracted cover {sorted(cover)}; oracle minimum size {size}")

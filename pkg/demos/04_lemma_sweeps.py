"""Random and cover-structured allocations against the structural lemmas.

Non-minimal V_E always admits an improving move; minimal but non-minimum V_E
always loses to the best cover by more than the factor c.
"""
from fractions import Fraction

import numpy as np

from nswhard import ReductionParams, build_instance, generate_family, improve_allocation, nsw_power
from nswhard.allocation import random_allocation
from nswhard.solver import check_dominance, removable_vertices
from nswhard.verifier import theorem_sweep

g = generate_family("petersen")
for c in (Fraction(1), Fraction(2), Fraction(10)):
    inst = build_instance(g, ReductionParams(c))
    report = theorem_sweep(inst, trials=1000, seed=0)
    print(f"c={c}: {report.checked} allocations, {len(report.violations)} violations, branches={report.branches}")

# %% One improving move, step by step.
inst = build_instance(g)
a = random_allocation(inst, np.random.default_rng(4))
vbar = removable_vertices(inst, a)[0]
b = improve_allocation(inst, a, vbar)
print(f"\nbefore: {nsw_power(inst, a)}; releasing vertex {vbar}; after: {nsw_power(inst, b)}")

# %% Items parked at agents that do not value them are never useful.
print("\ndominance:", {k: v if k != "violations" else len(v) for k, v in check_dominance(inst, 5000, seed=2).items()})

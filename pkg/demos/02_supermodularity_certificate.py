"""Certify that the greedy agent's valuation is supermodular and monotone.

On K4 (12 items) every ordered pair of bundles is checked: 2^24 pairs.
Larger graphs fall back to a seeded sample.
"""
import time

from nswhard import build_instance, check_superadditive_additive, check_supermodular, generate_family

# %% Exhaustive on K4.
k4 = build_instance(generate_family("k4"))
t0 = time.perf_counter()
report = check_supermodular(k4, "exhaustive")
print(f"K4 exhaustive: {report.checked:,} pairs in {time.perf_counter() - t0:.1f}s")
print("  supermodularity violations:", len(report.violations))
print("  monotonicity violations:   ", len(report.monotonicity_violations), f"of {report.monotonicity_checked:,} nested pairs")
print("  v_g(empty) =", report.v_g_empty, "(so v_g is not normalized)")

# %% Sampled on Petersen (30 items).
pet = build_instance(generate_family("petersen"))
sampled = check_supermodular(pet, "sampled", budget=200_000, seed=1)
print(f"\nPetersen sampled: {sampled.checked:,} pairs, {len(sampled.violations)} violations")

# %% Edge agents are additive; the greedy agent is superadditive only after removing v_g(empty).
classes = check_superadditive_additive(pet, samples=2000, seed=1)
print(f"\nadditivity checks: {classes.additive_checked}, violations: {len(classes.additive_violations)}")
print(f"shifted superadditivity checks: {classes.superadditive_checked}, violations: {len(classes.superadditive_violations)}")
print(f"raw superadditivity failures (expected, v_g(empty)=1): {classes.raw_superadditive_failures}")

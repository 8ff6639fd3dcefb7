import dataclasses
import itertools
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from nswhard.allocation import Allocation, all_to_greedy, full_cover_allocation, from_owner, random_owner
from nswhard.errors import PreconditionError, ValidationError
from nswhard.graphs import generate_family
from nswhard.reduction import build_instance
from nswhard.solver import construct_from_cover
from nswhard.valuations import (
    ZERO,
    NswPower,
    check_superadditive_additive,
    check_supermodular,
    compare,
    covered_vertices,
    edge_value,
    greedy_exponent,
    greedy_value,
    nsw_log2,
    nsw_power,
    nsw_power_batch,
    to_big_rational,
)


def test_edge_value_examples(k4_example_inst):
    inst = k4_example_inst
    assert edge_value(inst, 1, {0}) == 1  # v1'
    assert edge_value(inst, 1, set()) == 0
    assert edge_value(inst, 1, range(12)) == 2


def test_covered_vertices_examples(k4_example_inst):
    inst = k4_example_inst
    assert covered_vertices(inst, {6, 7, 8}) == {2}
    assert covered_vertices(inst, {6, 7}) == set()
    assert covered_vertices(inst, range(12)) == set(range(4))


def test_greedy_exponent_examples(k4_example_inst):
    inst = k4_example_inst
    assert greedy_exponent(inst, ()) == 0 and greedy_value(inst, ()) == 1
    assert greedy_exponent(inst, range(12)) == 4
    assert greedy_exponent(inst, range(6)) == 2


def test_nsw_power_examples(k4_example_inst):
    inst = k4_example_inst
    assert nsw_power(inst, full_cover_allocation(inst)) == NswPower(6, 0)
    assert nsw_power(inst, all_to_greedy(inst)) is ZERO
    assert nsw_power(inst, construct_from_cover(inst, {0, 1, 2})) == NswPower(3, 1)


def test_nsw_power_rejects_non_partition(k4_example_inst):
    a = full_cover_allocation(k4_example_inst)
    broken = Allocation(a.edge_bundles, frozenset({0}))
    with pytest.raises(ValidationError, match="not a partition"):
        nsw_power(k4_example_inst, broken)


def test_compare_examples(instances):
    M = 6
    assert compare(ZERO, NswPower(0, 0), M) == -1
    assert compare(NswPower(M, 0), NswPower(0, 1), M) == -1
    assert to_big_rational(NswPower(M, 0), instances["k4"].alpha) < to_big_rational(NswPower(0, 1), instances["k4"].alpha)
    assert compare(NswPower(3, 1), NswPower(2, 1), M) == 1
    assert compare(ZERO, ZERO, M) == 0
    with pytest.raises(PreconditionError):
        compare(NswPower(M + 1, 0), NswPower(0, 0), M)


@pytest.mark.parametrize("name", ["k4", "k33", "prism", "petersen"])
def test_compare_agrees_with_big_rationals(instances, name):
    inst = instances[name]
    grid = [ZERO] + [NswPower(k, g) for k in range(inst.M + 1) for g in range(inst.N + 1)]
    exact = {x: to_big_rational(x, inst.alpha) for x in grid}
    for x, y in itertools.product(grid, repeat=2):
        want = (exact[x] > exact[y]) - (exact[x] < exact[y])
        assert compare(x, y, inst.M) == want


def test_to_big_rational_examples(k4_example_inst):
    alpha = k4_example_inst.alpha
    assert to_big_rational(ZERO, alpha) == 0
    assert to_big_rational(NswPower(0, 0), alpha) == 1
    assert to_big_rational(NswPower(3, 1), alpha) == 8 * 4096 * Fraction(101, 100) ** 7


def test_nsw_log2(k4_example_inst):
    inst = k4_example_inst
    mpmath.mp.dps = 50
    oracle = (3 + mpmath.log(4096 * mpmath.mpf(101) ** 7 / mpmath.mpf(100) ** 7, 2)) / 7
    assert abs(nsw_log2(NswPower(3, 1), inst.alpha_log2, inst.n) - float(oracle)) < 1e-9
    assert nsw_log2(NswPower(3, 1), inst.alpha_log2, inst.n) == pytest.approx(2.157, abs=1e-3)
    assert nsw_log2(NswPower(0, 0), inst.alpha_log2, inst.n) == 0.0
    assert nsw_log2(NswPower(6, 0), inst.alpha_log2, inst.n) == 6 / 7
    with pytest.raises(PreconditionError):
        nsw_log2(ZERO, inst.alpha_log2, inst.n)


bundles = st.frozensets(st.integers(0, 17), max_size=18)


@settings(max_examples=300, deadline=None)
@given(s=bundles, t=bundles)
def test_coverage_lattice(instances, s, t):
    inst = instances["prism"]
    cs, ct = covered_vertices(inst, s), covered_vertices(inst, t)
    assert covered_vertices(inst, s | t) >= cs | ct
    assert covered_vertices(inst, s & t) == cs & ct
    if s <= t:
        assert greedy_exponent(inst, s) <= greedy_exponent(inst, t)
    for e in range(1, inst.M + 1):
        assert edge_value(inst, e, s) == sum(edge_value(inst, e, {j}) for j in s)


@settings(max_examples=300, deadline=None)
@given(s=bundles, t=bundles)
def test_supermodular_by_direct_evaluation(instances, s, t):
    inst = instances["prism"]
    v = lambda x: greedy_value(inst, x)
    assert v(s | t) + v(s & t) >= v(s) + v(t)


def test_table_rows_on_witnesses(k4_example_inst):
    inst = k4_example_inst
    a, b, c = 0, 1, 2  # v', v'', v''' of vertex 0
    ind = lambda x: int(0 in covered_vertices(inst, x))
    witnesses = {
        (0, 0, "not covered"): ({a}, {b}),
        (0, 0, "covered"): ({a}, {b, c}),
        (0, 1, ""): ({a}, {a, b, c}),
        (1, 0, ""): ({a, b, c}, {b}),
        (1, 1, ""): ({a, b, c}, {a, b, c}),
    }
    for (row_s, row_t, case), (s, t) in witnesses.items():
        s, t = frozenset(s), frozenset(t)
        assert (ind(s), ind(t)) == (row_s, row_t)
        assert ind(s & t) == (row_s and row_t)
        assert ind(s | t) >= ind(s) + ind(t) - ind(s & t) >= 0
        if case:
            assert ind(s | t) == (case == "covered")


def test_supermodular_equality_on_diagonal(instances):
    inst = instances["k4"]
    rng = np.random.default_rng(3)
    for _ in range(50):
        s = frozenset(np.flatnonzero(rng.random(12) < 0.6).tolist())
        v = greedy_value(inst, s)
        assert greedy_value(inst, s | s) + greedy_value(inst, s & s) == v + v


def test_exhaustive_supermodularity_k4(k4_example_inst):
    report = check_supermodular(k4_example_inst, "exhaustive")
    assert report.checked == 4096 ** 2
    assert report.violations == [] and report.monotonicity_violations == []
    assert report.indicator_violations == 0
    assert report.monotonicity_checked == 3 ** 12  # pairs S subset of T
    d = report.to_dict()
    assert d["v_g_empty"] == "1" and d["mode"] == "exhaustive" and list(d)[:5] == ["checked", "violations", "v_g_empty", "mode", "seed"]


def test_checker_catches_violations(k4_example_inst):
    # With alpha < 1 the greedy valuation stops being supermodular: S={v'}, T={v'', v'''}
    # gives alpha + 1 < 1 + 1. The checker must find such pairs in both modes.
    broken = dataclasses.replace(k4_example_inst, alpha=Fraction(1, 2))
    assert check_supermodular(broken, "exhaustive").violations
    assert check_supermodular(broken, "sampled", budget=20_000, seed=0).violations


def test_sampled_is_reproducible(instances):
    a = check_supermodular(instances["petersen"], "sampled", budget=5000, seed=11).to_dict()
    b = check_supermodular(instances["petersen"], "sampled", budget=5000, seed=11).to_dict()
    assert a == b and a["violations"] == [] and a["seed"] == 11


def test_exhaustive_budget(instances):
    with pytest.raises(PreconditionError):
        check_supermodular(instances["prism"], "exhaustive")


def test_classes(instances):
    for name in ("k4", "petersen"):
        rep = check_superadditive_additive(instances[name], samples=1000, seed=2)
        assert rep.ok and rep.additive_checked > 0 and rep.superadditive_checked > 0
        # the unshifted greedy valuation fails superadditivity because v_g(empty) = 1
        assert rep.raw_superadditive_failures > 0
        assert rep.to_dict()["normalized"] is False


def test_additive_edge_agent_examples(instances):
    inst = instances["k4"]
    i, j = inst.edge_to_items[0]
    assert edge_value(inst, 1, {i, j}) == edge_value(inst, 1, {i}) + edge_value(inst, 1, {j}) == 2
    others = set(range(12)) - {i, j}
    assert edge_value(inst, 1, others) == 0


def test_batch_matches_scalar():
    for g in (generate_family("petersen"), generate_family("random", 8, 4)):
        inst = build_instance(g)
        rng = np.random.default_rng(0)
        owners = np.stack([random_owner(inst, rng, force_positive=bool(t % 2), stray=0.2) for t in range(400)])
        pos, k, gexp = nsw_power_batch(inst, owners)
        for row, p, kk, gg in zip(owners, pos, k, gexp):
            want = nsw_power(inst, from_owner(inst, row))
            assert want == (NswPower(int(kk), int(gg)) if p else ZERO)

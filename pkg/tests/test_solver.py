import itertools
from fractions import Fraction

import numpy as np
import pytest

from nswhard.allocation import all_to_greedy, check_partition, edge_held_vertices, from_owner, full_cover_allocation, random_allocation
from nswhard.errors import BudgetExceeded, PreconditionError
from nswhard.graphs import all_vertex_covers, d_count, generate_family, minimum_vertex_covers, select_cstar
from nswhard.reduction import ReductionParams, build_instance
from nswhard.solver import (
    check_dominance,
    construct_from_cover,
    cover_value,
    improve_allocation,
    opt_formula,
    removable_vertices,
    solve_bruteforce,
    solve_structured,
)
from nswhard.valuations import ZERO, NswPower, compare, nsw_power, nsw_power_batch, to_big_rational


def home_or_greedy_optimum(inst):
    """Oracle: every item to its own edge agent or to g (2^m owner vectors), scored exactly."""
    home = np.asarray(inst.item_to_edge_agent) - 1
    m = inst.item_count
    masks = np.arange(1 << m)[:, None] >> np.arange(m) & 1
    owners = np.where(masks == 1, home, inst.M)
    pos, k, g = nsw_power_batch(inst, owners)
    best = max(
        (to_big_rational(NswPower(int(kk), int(gg)), inst.alpha) for p, kk, gg in zip(pos, k, g) if p),
        default=0,
    )
    return best


def test_bruteforce_k4_matches_scalar_oracle(k4_example_inst):
    inst = k4_example_inst
    best = max(
        to_big_rational(nsw_power(inst, from_owner(inst, [h - 1 if b else inst.M for h, b in zip(inst.item_to_edge_agent, bits)])), inst.alpha)
        for bits in itertools.product((0, 1), repeat=inst.item_count)
    )
    alloc, value = solve_bruteforce(inst)
    assert value == NswPower(3, 1)
    assert to_big_rational(value, inst.alpha) == best
    assert nsw_power(inst, alloc) == value


@pytest.mark.parametrize("name, want", [("k4", NswPower(3, 1)), ("k33", NswPower(0, 3)), ("prism", NswPower(3, 2))])
def test_bruteforce_named(instances, name, want):
    inst = instances[name]
    _, value = solve_bruteforce(inst)
    assert value == want
    assert to_big_rational(value, inst.alpha) == home_or_greedy_optimum(inst)


def test_bruteforce_tie_break_is_canonical(instances):
    inst = instances["k4"]
    alloc, value = solve_bruteforce(inst)
    owner = alloc.owner_vector()
    for cover in all_vertex_covers(inst.graph):
        cand = construct_from_cover(inst, cover)
        if nsw_power(inst, cand) == value:
            assert owner <= cand.owner_vector()


def test_all_to_greedy_is_zero(instances):
    assert nsw_power(instances["k4"], all_to_greedy(instances["k4"])) is ZERO


@pytest.mark.parametrize("seed", range(6))
@pytest.mark.parametrize("n", [4, 6, 8])
def test_solvers_agree_on_random_graphs(n, seed):
    inst = build_instance(generate_family("random", n, seed))
    _, brute = solve_bruteforce(inst)
    alloc, structured = solve_structured(inst)
    assert brute == structured == opt_formula(inst)
    assert edge_held_vertices(inst, alloc) == select_cstar(inst.graph)


def test_structured_named(instances, graphs):
    alloc, value = solve_structured(instances["k4"])
    assert value == NswPower(3, 1) and edge_held_vertices(instances["k4"], alloc) == {0, 1, 2}
    _, value = solve_structured(instances["petersen"])
    assert value == NswPower(d_count(graphs["petersen"], select_cstar(graphs["petersen"])), 4)
    for name, inst in instances.items():
        full = cover_value(inst, range(inst.N))
        assert full == NswPower(inst.M, 0)
        assert compare(full, solve_structured(inst)[1], inst.M) <= 0


def test_opt_formula(instances):
    assert opt_formula(instances["k4"]) == NswPower(3, 1)
    assert opt_formula(instances["petersen"]) == NswPower(3, 4)
    assert opt_formula(instances["prism"]) == NswPower(3, 2)


@pytest.mark.parametrize("name", ["k4", "k33", "prism", "petersen"])
def test_cover_construction_value(instances, name):
    inst = instances[name]
    for cover in all_vertex_covers(inst.graph):
        alloc = construct_from_cover(inst, cover)
        check_partition(inst, alloc)
        assert nsw_power(inst, alloc) == cover_value(inst, cover)
        assert edge_held_vertices(inst, alloc) == cover


def test_cover_construction_examples(instances, k4_example_inst):
    assert nsw_power(k4_example_inst, construct_from_cover(k4_example_inst, {0, 1, 2})) == NswPower(3, 1)
    inst = instances["prism"]
    a = construct_from_cover(inst, range(6))
    assert a == full_cover_allocation(inst) and a.greedy_bundle == frozenset()
    _, covers = minimum_vertex_covers(inst.graph)
    assert nsw_power(inst, construct_from_cover(inst, covers[0])) == NswPower(3, 2)
    with pytest.raises(PreconditionError):
        construct_from_cover(inst, {0})


def test_improve_k4_example(k4_example_inst):
    inst = k4_example_inst
    a = full_cover_allocation(inst)
    b = improve_allocation(inst, a, 3)
    check_partition(inst, b)
    assert edge_held_vertices(inst, b) == {0, 1, 2}
    before, after = nsw_power(inst, a), nsw_power(inst, b)
    assert after.alpha_exp == before.alpha_exp + 1
    assert to_big_rational(after, inst.alpha) * 8 >= inst.alpha * to_big_rational(before, inst.alpha)
    with pytest.raises(PreconditionError):
        improve_allocation(inst, b, 0)


def test_improve_rejects_zero_allocation(k4_example_inst):
    with pytest.raises(PreconditionError):
        improve_allocation(k4_example_inst, all_to_greedy(k4_example_inst), 0)


@pytest.mark.parametrize("c", [Fraction(1), Fraction(2), Fraction(10)])
def test_improve_random_with_strays(graphs, c):
    inst = build_instance(graphs["prism"], ReductionParams(c))
    rng = np.random.default_rng(5)
    done = 0
    for _ in range(300):
        a = random_allocation(inst, rng, stray=0.25)
        if nsw_power(inst, a).is_zero:
            continue
        for vbar in removable_vertices(inst, a):
            b = improve_allocation(inst, a, vbar)
            check_partition(inst, b)
            old, new = (to_big_rational(nsw_power(inst, x), inst.alpha) for x in (a, b))
            assert new * 8 >= inst.alpha * old
            assert new > c ** inst.n * old
            done += 1
    assert done > 100


@pytest.mark.parametrize("name", ["k4", "petersen"])
def test_dominance(instances, name):
    report = check_dominance(instances[name], trials=2000, seed=9)
    assert report["violations"] == [] and report["checked"] > 1000


@pytest.mark.parametrize("c", [1, 2, 10])
@pytest.mark.parametrize("name", ["k4", "prism", "k33"])
def test_gap_for_larger_covers(graphs, name, c):
    inst = build_instance(graphs[name], ReductionParams(Fraction(c)))
    g = inst.graph
    cstar = select_cstar(g)
    best = to_big_rational(cover_value(inst, cstar), inst.alpha)
    for cover in all_vertex_covers(g):
        if len(cover) > len(cstar):
            assert c ** inst.n * to_big_rational(cover_value(inst, cover), inst.alpha) < best


def test_budget_guards():
    inst = build_instance(generate_family("random", 12, 1))
    with pytest.raises(BudgetExceeded):
        solve_bruteforce(inst)
    big = build_instance(generate_family("random", 26, 1))
    with pytest.raises(BudgetExceeded):
        solve_structured(big)

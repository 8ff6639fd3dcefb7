"""Diagnose allocations of a reduced instance and certify the cover-extraction theorem.

A c-approximate allocation must hand out the items of a minimum vertex cover
to the edge agents. Every check here is exact: NSW is compared as NSW^n
against OPT^n / c^n in rationals, and minimality is judged by the brute-force
cover oracle in :mod:`nswhard.graphs`, never by the solver being checked.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple, Optional

import numpy as np

from .allocation import Allocation, check_partition, edge_held_vertices, from_owner, random_owner
from .errors import PreconditionError
from .exact import format_fraction
from .graphs import all_vertex_covers, d_count, is_minimal_cover, is_vertex_cover, minimum_vertex_covers, select_cstar
from .reduction import AuctionInstance
from .solver import (
    BRUTEFORCE_MAX_EDGES,
    construct_from_cover,
    improve_allocation,
    opt_formula,
    removable_vertices,
    solve_bruteforce,
)
from .valuations import NswPower, covered_vertices, nsw_log2, nsw_power, to_big_rational


class Decomposition(NamedTuple):
    V_E: frozenset[int]
    V_g: frozenset[int]
    k: int


def decompose(inst: AuctionInstance, a: Allocation) -> Optional[Decomposition]:
    """Split a positive allocation into (V_E, V_g, k); ``None`` if some edge agent gets nothing."""
    check_partition(inst, a)
    k = 0
    for (i, j), bundle in zip(inst.edge_to_items, a.edge_bundles):
        val = (i in bundle) + (j in bundle)
        if val == 0:
            return None
        k += val == 2
    return Decomposition(edge_held_vertices(inst, a), covered_vertices(inst, a.greedy_bundle), k)


def _vset(s) -> list[int]:
    return sorted(s)


@dataclass
class VerifierReport:
    positive: bool
    V_E: frozenset[int]
    V_g: frozenset[int]
    k: Optional[int]
    nsw: NswPower
    opt: NswPower
    is_cover: bool
    is_minimal: bool
    is_minimum: bool
    c_approximate: bool
    theorem_holds: bool
    c: Fraction
    alpha: Fraction
    display: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "format": 1,
            "positive": self.positive,
            "V_E": _vset(self.V_E),
            "V_g": _vset(self.V_g),
            "k": self.k,
            "nsw": {**self.nsw.to_dict(), "value": format_fraction(to_big_rational(self.nsw, self.alpha))},
            "opt": {**self.opt.to_dict(), "value": format_fraction(to_big_rational(self.opt, self.alpha))},
            "is_cover": self.is_cover,
            "is_minimal": self.is_minimal,
            "is_minimum": self.is_minimum,
            "c_approximate": self.c_approximate,
            "theorem_holds": self.theorem_holds,
            "c": format_fraction(self.c),
            "alpha": format_fraction(self.alpha),
            "display": self.display,
        }


def is_c_approximate(inst: AuctionInstance, nsw: NswPower, opt: NswPower, c: Optional[Fraction] = None) -> bool:
    """NSW >= OPT / c, decided as NSW^n * c^n >= OPT^n in exact rationals."""
    c = inst.params.c if c is None else Fraction(c)
    return to_big_rational(nsw, inst.alpha) * c ** inst.n >= to_big_rational(opt, inst.alpha)


def verify_capprox(inst: AuctionInstance, a: Allocation, *, cross_check: bool = False) -> VerifierReport:
    """Full diagnosis of one allocation against the instance's own ``c``.

    With ``cross_check`` the closed-form optimum is compared with the
    brute-force solver first (only when the instance is small enough).
    """
    check_partition(inst, a)
    g = inst.graph
    opt = opt_formula(inst)
    if cross_check and inst.M <= BRUTEFORCE_MAX_EDGES:
        _, brute = solve_bruteforce(inst)
        if brute != opt:
            raise AssertionError(f"closed-form optimum {opt} disagrees with brute force {brute}")
    nsw = nsw_power(inst, a)
    dec = decompose(inst, a)
    ve = edge_held_vertices(inst, a)
    vg = covered_vertices(inst, a.greedy_bundle)
    is_cover = is_vertex_cover(g, ve)
    is_minimal = is_cover and is_minimal_cover(g, ve)
    mvc_size, _ = minimum_vertex_covers(g)
    is_minimum = is_cover and len(ve) == mvc_size
    capprox = is_c_approximate(inst, nsw, opt)
    display = {"alpha_log2": inst.alpha_log2, "log2_opt": nsw_log2(opt, inst.alpha_log2, inst.n)}
    if not nsw.is_zero:
        display["log2_nsw"] = nsw_log2(nsw, inst.alpha_log2, inst.n)
    return VerifierReport(
        positive=dec is not None,
        V_E=ve,
        V_g=vg,
        k=None if dec is None else dec.k,
        nsw=nsw,
        opt=opt,
        is_cover=is_cover,
        is_minimal=is_minimal,
        is_minimum=is_minimum,
        c_approximate=capprox,
        theorem_holds=(not capprox) or is_minimum,
        c=inst.params.c,
        alpha=inst.alpha,
        display=display,
    )


def extract_cover(inst: AuctionInstance, a: Allocation) -> frozenset[int]:
    """V_E of a c-approximate allocation, which is then a minimum vertex cover."""
    report = verify_capprox(inst, a)
    if not report.c_approximate:
        raise PreconditionError("allocation is not c-approximate; no cover guarantee")
    assert report.is_minimum, "c-approximate allocation whose V_E is not a minimum cover"
    return report.V_E


def improvement_holds(inst: AuctionInstance, before: NswPower, after: NswPower) -> tuple[bool, bool]:
    """(NSW'^n * 8 >= alpha * NSW^n, NSW'^n > c^n * NSW^n), both exact."""
    old = to_big_rational(before, inst.alpha)
    new = to_big_rational(after, inst.alpha)
    return new * 8 >= inst.alpha * old, new > inst.params.c ** inst.n * old


def gap_chain(inst: AuctionInstance, cover, c: Optional[Fraction] = None) -> list[bool]:
    """Step-by-step exact check that a cover larger than C* cannot be c-approximate.

    Steps, writing a = alpha, |C| > |C*|:
      c^n 2^{d_C} a^{N-|C|} < 8^N c^n a^{N-|C|} < a^{N-|C|+1} <= 2^{d_C*} a^{N-|C*|}
    and the conclusion c^n 2^{d_C} a^{N-|C|} < 2^{d_C*} a^{N-|C*|}.
    """
    c = inst.params.c if c is None else Fraction(c)
    g = inst.graph
    cstar = select_cstar(g)
    if len(cover) <= len(cstar):
        raise PreconditionError("gap chain needs a cover strictly larger than a minimum one")
    alpha, N, n = inst.alpha, inst.N, inst.n
    lhs = c ** n * 2 ** d_count(g, cover) * alpha ** (N - len(cover))
    step1 = 8 ** N * c ** n * alpha ** (N - len(cover))
    step2 = alpha ** (N - len(cover) + 1)
    best = 2 ** d_count(g, cstar) * alpha ** (N - len(cstar))
    return [lhs < step1, step1 < step2, step2 <= best, lhs < best]


@dataclass
class SweepReport:
    seed: int
    c: Fraction
    checked: int = 0
    violations: list = field(default_factory=list)
    branches: dict = field(
        default_factory=lambda: {
            "not_positive": 0,
            "non_minimal": 0,
            "minimal_not_minimum": 0,
            "minimum": 0,
            "c_approximate": 0,
            "improved": 0,
        }
    )

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "checked": self.checked,
            "violations": self.violations,
            "v_g_empty": "1",
            "mode": "lemmas",
            "seed": self.seed,
            "c": format_fraction(self.c),
            "branches": self.branches,
        }


def check_allocation(inst: AuctionInstance, a: Allocation, mvc_size: int, opt: NswPower, report: SweepReport, tag) -> None:
    """Run the decomposition, improving-move and gap checks on one allocation, recording into ``report``."""
    g = inst.graph
    report.checked += 1

    def fail(reason):
        report.violations.append({"trial": tag, "reason": reason})

    nsw = nsw_power(inst, a)
    dec = decompose(inst, a)
    capprox = is_c_approximate(inst, nsw, opt)
    if dec is None:
        report.branches["not_positive"] += 1
        if capprox:
            fail("zero-NSW allocation judged c-approximate")
        return

    ve, vg, k = dec
    if not is_vertex_cover(g, ve):
        fail("V_E is not a vertex cover")
        return
    if ve & vg or (ve | vg) != frozenset(g.vertices):
        fail("V_E and V_g are not complementary")
    if not k <= d_count(g, ve):
        fail(f"k={k} exceeds d(V_E)={d_count(g, ve)}")
    if nsw != NswPower(k, len(vg)) or len(vg) != inst.N - len(ve):
        fail(f"NSW^n {nsw} is not 2^{k} * alpha^{len(vg)}")

    minimum = len(ve) == mvc_size
    if capprox:
        report.branches["c_approximate"] += 1
        if not minimum:
            fail("c-approximate allocation with a non-minimum V_E")

    if not is_minimal_cover(g, ve):
        report.branches["non_minimal"] += 1
        if capprox:
            fail("non-minimal V_E judged c-approximate")
        vbar = removable_vertices(inst, a)[0]
        better = nsw_power(inst, improve_allocation(inst, a, vbar))
        factor_ok, beats_c = improvement_holds(inst, nsw, better)
        if not (factor_ok and beats_c):
            fail(f"improving move at vertex {vbar} gave {better}, not enough over {nsw}")
        else:
            report.branches["improved"] += 1
    elif not minimum:
        report.branches["minimal_not_minimum"] += 1
        if capprox:
            fail("minimal but non-minimum V_E judged c-approximate")
        if not all(gap_chain(inst, ve)):
            fail("gap chain broken for a minimal non-minimum cover")
    else:
        report.branches["minimum"] += 1


def theorem_sweep(inst: AuctionInstance, trials: int = 1000, seed: int = 0) -> SweepReport:
    """Seeded random positive allocations plus every cover-structured allocation.

    Random allocations use :func:`nswhard.allocation.random_owner` with
    ``force_positive=True`` and numpy's PCG64 seeded by ``seed``; trial ``t``
    draws from the stream in order, so reports are reproducible.
    """
    report = SweepReport(seed=seed, c=inst.params.c)
    mvc_size, _ = minimum_vertex_covers(inst.graph)
    opt = opt_formula(inst)
    rng = np.random.default_rng(seed)
    for t in range(trials):
        check_allocation(inst, from_owner(inst, random_owner(inst, rng)), mvc_size, opt, report, t)
    for cover in all_vertex_covers(inst.graph):
        check_allocation(inst, construct_from_cover(inst, cover), mvc_size, opt, report, f"cover:{_vset(cover)}")
    return report

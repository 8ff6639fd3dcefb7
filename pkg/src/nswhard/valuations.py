"""Agent valuations, exact NSW^n values, and valuation-class checkers.

The greedy agent's value is always handled through its exponent ``|V_S|``;
``alpha ** exponent`` is only materialised inside exact checks and oracles.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, Optional

import numpy as np

from .allocation import Allocation, check_partition
from .errors import PreconditionError
from .reduction import AuctionInstance

EXHAUSTIVE_ITEM_LIMIT = 14


# -- single-agent valuations -------------------------------------------------

def edge_value(inst: AuctionInstance, e: int, s: Iterable[int]) -> int:
    """How many of edge ``e``'s two valued items are in ``s`` (0, 1 or 2)."""
    i, j = inst.edge_to_items[e - 1]
    s = s if isinstance(s, (set, frozenset)) else set(s)
    return (i in s) + (j in s)


def covered_vertices(inst: AuctionInstance, s: Iterable[int]) -> frozenset[int]:
    s = s if isinstance(s, (set, frozenset)) else set(s)
    return frozenset(v for v in inst.graph.vertices if 3 * v in s and 3 * v + 1 in s and 3 * v + 2 in s)


def greedy_exponent(inst: AuctionInstance, s: Iterable[int]) -> int:
    """``|V_S|``; the greedy agent values ``s`` at ``alpha ** greedy_exponent``."""
    return len(covered_vertices(inst, s))


def greedy_value(inst: AuctionInstance, s: Iterable[int]) -> Fraction:
    return inst.alpha ** greedy_exponent(inst, s)


# -- NSW^n as 2^k * alpha^g ---------------------------------------------------

@dataclass(frozen=True)
class NswPower:
    """Exact ``NSW^n``: either zero or ``2**two_exp * alpha**alpha_exp``."""

    two_exp: int = 0
    alpha_exp: int = 0
    is_zero: bool = False

    def __str__(self):
        return "0" if self.is_zero else f"2^{self.two_exp} * alpha^{self.alpha_exp}"

    def to_dict(self) -> dict:
        if self.is_zero:
            return {"zero": True, "two_exp": None, "alpha_exp": None}
        return {"zero": False, "two_exp": self.two_exp, "alpha_exp": self.alpha_exp}


ZERO = NswPower(is_zero=True)


def nsw_power(inst: AuctionInstance, a: Allocation) -> NswPower:
    check_partition(inst, a)
    k = 0
    for e, bundle in enumerate(a.edge_bundles, start=1):
        val = edge_value(inst, e, bundle)
        if val == 0:
            return ZERO
        k += val == 2
    return NswPower(k, greedy_exponent(inst, a.greedy_bundle))


def nsw_power_batch(inst: AuctionInstance, owners: np.ndarray) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Vectorised ``nsw_power`` over rows of owner vectors.

    Returns ``(positive, two_exp, alpha_exp)``; the exponents are meaningless
    where ``positive`` is False.
    """
    owners = np.atleast_2d(owners)
    pairs = np.asarray(inst.edge_to_items)
    agents = np.arange(inst.M)
    vals = (owners[:, pairs[:, 0]] == agents).astype(np.int8) + (owners[:, pairs[:, 1]] == agents)
    positive = (vals > 0).all(axis=1)
    two_exp = (vals == 2).sum(axis=1)
    alpha_exp = (owners.reshape(len(owners), inst.N, 3) == inst.M).all(axis=2).sum(axis=1)
    return positive, two_exp, alpha_exp


def compare(x: NswPower, y: NswPower, M: int) -> int:
    """Order two NSW^n values of one instance: -1, 0 or 1.

    Lexicographic on (alpha_exp, two_exp). Valid because alpha > 2^M, so one
    extra power of alpha beats any difference in powers of two up to 2^M.
    """
    for v in (x, y):
        if not v.is_zero and not 0 <= v.two_exp <= M:
            raise PreconditionError(f"two_exp {v.two_exp} outside [0, {M}]: comparison would be unsound")
    if x.is_zero or y.is_zero:
        return (not x.is_zero) - (not y.is_zero)
    a = (x.alpha_exp, x.two_exp)
    b = (y.alpha_exp, y.two_exp)
    return (a > b) - (a < b)


def to_big_rational(x: NswPower, alpha: Fraction) -> Fraction:
    if x.is_zero:
        return Fraction(0)
    return Fraction(2) ** x.two_exp * Fraction(alpha) ** x.alpha_exp


def nsw_log2(x: NswPower, alpha_log2: float, n: int) -> float:
    """log2 of the geometric mean; for display only."""
    if x.is_zero:
        raise PreconditionError("log2 of a zero NSW is undefined")
    return (x.two_exp + x.alpha_exp * alpha_log2) / n


# -- valuation-class checks --------------------------------------------------

@dataclass
class SupermodularityReport:
    mode: str
    seed: Optional[int]
    checked: int = 0
    violations: list = field(default_factory=list)
    monotonicity_checked: int = 0
    monotonicity_violations: list = field(default_factory=list)
    indicator_violations: int = 0
    v_g_empty: Fraction = Fraction(1)

    @property
    def ok(self) -> bool:
        return not self.violations and not self.monotonicity_violations and not self.indicator_violations

    def to_dict(self) -> dict:
        return {
            "checked": self.checked,
            "violations": self.violations,
            "v_g_empty": str(self.v_g_empty),
            "mode": self.mode,
            "seed": self.seed,
            "monotonicity_checked": self.monotonicity_checked,
            "monotonicity_violations": self.monotonicity_violations,
            "indicator_violations": self.indicator_violations,
            "normalized": self.v_g_empty == 0,
        }


def _exponent_key(gu, gi, gs, gt, base):
    return ((gu * base + gi) * base + gs) * base + gt


def _violating_keys(counts: np.ndarray, base: int, alpha: Fraction) -> set[int]:
    """Exponent tuples (gU, gI, gS, gT) seen in the sweep that break the inequality, checked exactly."""
    powers = [alpha ** g for g in range(base)]
    bad = set()
    for key in np.flatnonzero(counts):
        key = int(key)
        gt = key % base
        gs = key // base % base
        gi = key // base ** 2 % base
        gu = key // base ** 3
        if powers[gu] + powers[gi] < powers[gs] + powers[gt]:
            bad.add(key)
    return bad


def _bits(mask: int) -> list[int]:
    return [i for i in range(mask.bit_length()) if mask >> i & 1]


def _exhaustive(inst: AuctionInstance, report: SupermodularityReport, max_witnesses: int, block: int = 256) -> None:
    m, N = inst.item_count, inst.N
    base = N + 1
    masks = np.arange(1 << m, dtype=np.int64)
    cov = np.zeros_like(masks)
    for v in range(N):
        full = 7 << (3 * v)
        cov |= ((masks & full) == full).astype(np.int64) << v
    exp = np.array([bin(c).count("1") for c in range(1 << N)])[cov]

    counts = np.zeros(base ** 4, dtype=np.int64)
    T = masks[None, :]
    gT = exp[None, :]
    for s0 in range(0, 1 << m, block):
        S = masks[s0:s0 + block, None]
        U, I = S | T, S & T
        gS, gU, gI = exp[S], exp[U], exp[I]
        counts += np.bincount(_exponent_key(gU, gI, gS, gT, base).ravel(), minlength=base ** 4)

        sub = I == S
        report.monotonicity_checked += int(sub.sum())
        for s_idx, t_idx in zip(*np.nonzero(sub & (gS > gT))):
            if len(report.monotonicity_violations) < max_witnesses:
                report.monotonicity_violations.append([_bits(s0 + int(s_idx)), _bits(int(t_idx))])

        cS, cT, cU, cI = cov[S], cov[T], cov[U], cov[I]
        for v in range(N):
            ind = [(c >> v) & 1 for c in (cS, cT, cU, cI)]
            report.indicator_violations += int((ind[0] + ind[1] - ind[3] > ind[2]).sum())

    report.checked = (1 << m) ** 2
    bad = _violating_keys(counts, base, inst.alpha)
    if bad:
        bad_arr = np.array(sorted(bad))
        for s in range(1 << m):
            keys = _exponent_key(exp[s | masks], exp[s & masks], exp[s], exp, base)
            for t in np.flatnonzero(np.isin(keys, bad_arr)):
                report.violations.append([_bits(s), _bits(int(t))])
                if len(report.violations) >= max_witnesses:
                    return


def _sampled(inst: AuctionInstance, report: SupermodularityReport, budget: int, seed: int, max_witnesses: int) -> None:
    # Documented sampler: numpy PCG64 seeded with `seed`; each item joins S
    # (then T) independently with probability 1/2. Monotonicity pairs are
    # (S, S | R) with R drawn the same way.
    rng = np.random.default_rng(seed)
    m, N = inst.item_count, inst.N
    base = N + 1
    S = rng.random((budget, m)) < 0.5
    T = rng.random((budget, m)) < 0.5
    R = rng.random((budget, m)) < 0.5

    def cover(x):
        return x.reshape(len(x), N, 3).all(axis=2)

    cS, cT, cU, cI = cover(S), cover(T), cover(S | T), cover(S & T)
    gS, gT, gU, gI = (c.sum(axis=1) for c in (cS, cT, cU, cI))
    keys = _exponent_key(gU, gI, gS, gT, base)
    bad = _violating_keys(np.bincount(keys, minlength=base ** 4), base, inst.alpha)
    for row in np.flatnonzero(np.isin(keys, sorted(bad))) if bad else []:
        if len(report.violations) < max_witnesses:
            report.violations.append([np.flatnonzero(S[row]).tolist(), np.flatnonzero(T[row]).tolist()])
    report.indicator_violations = int((cS.astype(int) + cT - cI > cU).sum())
    report.checked = budget

    sup = S | R
    g_sup = cover(sup).sum(axis=1)
    report.monotonicity_checked = budget
    for row in np.flatnonzero(gS > g_sup)[:max_witnesses]:
        report.monotonicity_violations.append([np.flatnonzero(S[row]).tolist(), np.flatnonzero(sup[row]).tolist()])


def check_supermodular(
    inst: AuctionInstance,
    mode: str = "exhaustive",
    budget: int = 100_000,
    seed: int = 0,
    max_witnesses: int = 20,
) -> SupermodularityReport:
    """Check v_g(S|T) + v_g(S&T) >= v_g(S) + v_g(T) and monotonicity of v_g.

    The inequality depends only on the four exponents, so each distinct
    exponent tuple met in the sweep is decided once in exact rationals.
    Exhaustive mode covers all 4^m ordered pairs and needs m <= 14 items.
    """
    report = SupermodularityReport(mode=mode, seed=None if mode == "exhaustive" else seed)
    report.v_g_empty = greedy_value(inst, ())
    if mode == "exhaustive":
        if inst.item_count > EXHAUSTIVE_ITEM_LIMIT:
            raise PreconditionError(f"exhaustive mode needs <= {EXHAUSTIVE_ITEM_LIMIT} items, instance has {inst.item_count}")
        _exhaustive(inst, report, max_witnesses)
    elif mode == "sampled":
        _sampled(inst, report, budget, seed, max_witnesses)
    else:
        raise PreconditionError(f"unknown mode {mode!r}")
    for pairs in (report.violations, report.monotonicity_violations):
        pairs.sort()
    return report


@dataclass
class ClassReport:
    seed: int
    additive_checked: int = 0
    additive_violations: list = field(default_factory=list)
    superadditive_checked: int = 0
    superadditive_violations: list = field(default_factory=list)
    raw_superadditive_failures: int = 0
    v_g_empty: Fraction = Fraction(1)

    @property
    def violations(self) -> list:
        return self.additive_violations + self.superadditive_violations

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_dict(self) -> dict:
        return {
            "checked": self.additive_checked + self.superadditive_checked,
            "violations": self.violations,
            "v_g_empty": str(self.v_g_empty),
            "mode": "classes",
            "seed": self.seed,
            "additive_checked": self.additive_checked,
            "superadditive_checked": self.superadditive_checked,
            "raw_superadditive_failures": self.raw_superadditive_failures,
            "normalized": self.v_g_empty == 0,
        }


def check_superadditive_additive(inst: AuctionInstance, samples: int = 2000, seed: int = 0) -> ClassReport:
    """Additivity of every edge agent and superadditivity of the greedy agent.

    Edge agents: every subset of the two valued items, joined with sampled
    sets of other items, must be valued at the sum of singleton values.

    Greedy agent: checked on sampled disjoint nonempty pairs after shifting by
    v_g(empty) = 1. The raw valuation cannot be superadditive while
    v_g(empty) = 1 (two disjoint bundles covering nothing give 1 < 1 + 1);
    those raw failures are counted separately, not reported as violations.
    """
    rng = np.random.default_rng(seed)
    report = ClassReport(seed=seed, v_g_empty=greedy_value(inst, ()))
    m = inst.item_count
    reps = max(1, samples // max(1, inst.M))
    for e, (i, j) in enumerate(inst.edge_to_items, start=1):
        others = np.array([x for x in range(m) if x not in (i, j)])
        singles = {x: edge_value(inst, e, {x}) for x in range(m)}
        for _ in range(reps):
            rest = set(others[rng.random(len(others)) < 0.5].tolist())
            for core in ((), (i,), (j,), (i, j)):
                bundle = rest.union(core)
                report.additive_checked += 1
                if edge_value(inst, e, bundle) != sum(singles[x] for x in bundle):
                    report.additive_violations.append({"edge": e, "bundle": sorted(bundle)})

    alpha = inst.alpha
    for _ in range(samples):
        side = rng.integers(0, 3, size=m)
        S = np.flatnonzero(side == 0).tolist()
        T = np.flatnonzero(side == 1).tolist()
        if not S or not T:
            continue
        gS, gT = greedy_exponent(inst, S), greedy_exponent(inst, T)
        gU = greedy_exponent(inst, S + T)
        report.superadditive_checked += 1
        if alpha ** gU - 1 < (alpha ** gS - 1) + (alpha ** gT - 1):
            report.superadditive_violations.append({"S": S, "T": T})
        if alpha ** gU < alpha ** gS + alpha ** gT:
            report.raw_superadditive_failures += 1
    return report

"""Exact NSW maximisation on reduced instances and the structural constructions.

Two solvers that must agree:

* :func:`solve_bruteforce` searches allocations directly (dominance-reduced,
  3 choices per edge) and knows nothing about covers.
* :func:`solve_structured` searches vertex covers and realises the best one.
"""
from __future__ import annotations

from typing import Iterable

import numpy as np

from .allocation import Allocation, edge_held_vertices, from_owner, random_owner
from .errors import BudgetExceeded, PreconditionError
from .graphs import canonical_key, d_count, is_vertex_cover, select_cstar
from .reduction import AuctionInstance
from .valuations import NswPower, nsw_power, nsw_power_batch

BRUTEFORCE_MAX_EDGES = 16
STRUCTURED_MAX_VERTICES = 24
_CHUNK = 1 << 20


def _owner_from_choices(inst: AuctionInstance, choices) -> tuple[int, ...]:
    # choice 0: edge keeps its left endpoint's item, 1: right endpoint's, 2: both.
    owner = [inst.M] * inst.item_count
    for e, ch in enumerate(choices):
        left, right = inst.edge_to_items[e]
        if ch in (0, 2):
            owner[left] = e
        if ch in (1, 2):
            owner[right] = e
    return tuple(owner)


def solve_bruteforce(inst: AuctionInstance) -> tuple[Allocation, NswPower]:
    """Exhaustive optimum over the 3^M dominance-reduced allocations.

    Every item either stays with its valuing edge agent or goes to the greedy
    agent, and each edge agent keeps a nonempty subset of its two items. Ties
    go to the lexicographically smallest owner vector (edge agents ``0..M-1``,
    greedy agent ``M``).
    """
    M, N = inst.M, inst.N
    if M > BRUTEFORCE_MAX_EDGES:
        raise BudgetExceeded(f"brute force limited to M <= {BRUTEFORCE_MAX_EDGES} edges, got M={M}")
    ends = np.asarray(inst.graph.edges)
    total = 3 ** M
    best_score, best_idx = -1, []
    for start in range(0, total, _CHUNK):
        idx = np.arange(start, min(start + _CHUNK, total), dtype=np.int64)
        rest = idx.copy()
        handed = np.zeros((len(idx), N), dtype=bool)
        k = np.zeros(len(idx), dtype=np.int64)
        for e in range(M):
            rest, d = np.divmod(rest, 3)
            handed[:, ends[e, 0]] |= d != 1
            handed[:, ends[e, 1]] |= d != 0
            k += d == 2
        score = (N - handed.sum(axis=1)) * (M + 1) + k
        top = int(score.max())
        if top > best_score:
            best_score, best_idx = top, []
        if top == best_score:
            best_idx.extend(idx[score == top].tolist())

    def digits(i):
        out = []
        for _ in range(M):
            i, d = divmod(i, 3)
            out.append(d)
        return out

    owner = min(_owner_from_choices(inst, digits(i)) for i in best_idx)
    alloc = from_owner(inst, owner)
    value = nsw_power(inst, alloc)
    assert value == NswPower(best_score % (M + 1), best_score // (M + 1))
    return alloc, value


def construct_from_cover(inst: AuctionInstance, cover: Iterable[int]) -> Allocation:
    """Edge agent e keeps f_v(e) for each endpoint v in the cover; the rest go to the greedy agent."""
    cover = frozenset(cover)
    g = inst.graph
    if not is_vertex_cover(g, cover):
        raise PreconditionError("construct_from_cover needs a vertex cover")
    bundles = []
    for (u, v), (iu, iv) in zip(g.edges, inst.edge_to_items):
        bundles.append(frozenset(i for w, i in ((u, iu), (v, iv)) if w in cover))
    handed = frozenset().union(*bundles)
    return Allocation(tuple(bundles), frozenset(range(inst.item_count)) - handed)


def cover_value(inst: AuctionInstance, cover: Iterable[int]) -> NswPower:
    """Closed-form value of the cover construction: 2^{d_C} * alpha^{N - |C|}."""
    cover = frozenset(cover)
    return NswPower(d_count(inst.graph, cover), inst.N - len(cover))


def solve_structured(inst: AuctionInstance) -> tuple[Allocation, NswPower]:
    """Best vertex cover under (N - |C|, d_C), realised by :func:`construct_from_cover`.

    Ties go to the cover with the smallest sorted vertex tuple.
    """
    g = inst.graph
    N, M = g.n, g.m
    if N > STRUCTURED_MAX_VERTICES:
        raise BudgetExceeded(f"structured solver limited to N <= {STRUCTURED_MAX_VERTICES}, got N={N}")
    masks = np.arange(1 << N, dtype=np.int64)
    bits = (masks[:, None] >> np.arange(N)) & 1
    ends = np.asarray(g.edges)
    u_in, v_in = bits[:, ends[:, 0]], bits[:, ends[:, 1]]
    covers = ((u_in | v_in) == 1).all(axis=1)
    d = (u_in & v_in).sum(axis=1)
    score = np.where(covers, (N - bits.sum(axis=1)) * (M + 1) + d, -1)
    top = score.max()
    best = min((frozenset(np.flatnonzero(bits[i]).tolist()) for i in np.flatnonzero(score == top)), key=canonical_key)
    alloc = construct_from_cover(inst, best)
    value = nsw_power(inst, alloc)
    assert value == NswPower(int(top) % (M + 1), int(top) // (M + 1))
    return alloc, value


def opt_formula(inst: AuctionInstance) -> NswPower:
    """2^{d_{C*}} * alpha^{N - |C*|} with C* from :func:`select_cstar`."""
    return cover_value(inst, select_cstar(inst.graph))


def removable_vertices(inst: AuctionInstance, a: Allocation) -> list[int]:
    """Vertices vbar in V_E such that V_E - {vbar} is still a vertex cover."""
    ve = edge_held_vertices(inst, a)
    return [v for v in sorted(ve) if is_vertex_cover(inst.graph, ve - {v})]


def improve_allocation(inst: AuctionInstance, a: Allocation, vbar: int) -> Allocation:
    """Release ``vbar`` to the greedy agent, gaining a factor alpha/8 in NSW^n.

    Edges away from ``vbar`` just lose vbar's items. Each edge at ``vbar`` is
    reset to the single item f_vhat(e), vhat the smallest remaining cover
    vertex on it. Whatever those edges held besides is handed to the greedy
    agent, so the result stays a full partition.
    """
    if nsw_power(inst, a).is_zero:
        raise PreconditionError("improve_allocation needs an allocation with positive NSW")
    ve = edge_held_vertices(inst, a)
    rest = ve - {vbar}
    if vbar not in ve or not is_vertex_cover(inst.graph, rest):
        raise PreconditionError(f"vertex {vbar} cannot be removed from V_E while keeping a vertex cover")

    released = frozenset(inst.items_of_vertex(vbar))
    bundles = [set(b - released) for b in a.edge_bundles]
    greedy = set(a.greedy_bundle | released)
    for e, (u, v) in enumerate(inst.graph.edges):
        if vbar not in (u, v):
            continue
        vhat = min(w for w in (u, v) if w in rest)
        keep = inst.edge_to_items[e][(u, v).index(vhat)]
        for b in bundles:
            b.discard(keep)
        greedy.discard(keep)
        greedy |= bundles[e]
        bundles[e] = {keep}
    return Allocation(tuple(frozenset(b) for b in bundles), frozenset(greedy))


def check_dominance(inst: AuctionInstance, trials: int = 10_000, seed: int = 0, stray: float = 0.3) -> dict:
    """Moving an item away from an edge agent that does not value it never lowers NSW^n.

    Draws ``trials`` seeded owner vectors with stray items (see
    :func:`nswhard.allocation.random_owner`), then for every stray item, and
    for all strays at once, moves it to the greedy agent and compares values
    lexicographically on (positive, alpha_exp, two_exp).
    """
    rng = np.random.default_rng(seed)
    owners = np.stack([random_owner(inst, rng, stray=stray) for _ in range(trials)])
    home = np.asarray(inst.item_to_edge_agent) - 1
    strays = (owners != home) & (owners != inst.M)

    def rank(o):
        pos, k, g = nsw_power_batch(inst, o)
        return np.where(pos, 1 + g * (inst.M + 1) + k, 0)

    base = rank(owners)
    checked, violations = 0, []
    moves = [strays[:, [i]] & (np.arange(inst.item_count) == i) for i in range(inst.item_count)] + [strays]
    for mask in moves:
        rows = mask.any(axis=1)
        if not rows.any():
            continue
        moved = np.where(mask, inst.M, owners)
        after = rank(moved[rows])
        checked += int(rows.sum())
        for r in np.flatnonzero(after < base[rows]):
            violations.append({"trial": int(np.flatnonzero(rows)[r]), "items": np.flatnonzero(mask[rows][r]).tolist()})
    return {"trials": trials, "checked": checked, "stray_items": int(strays.sum()), "violations": violations}

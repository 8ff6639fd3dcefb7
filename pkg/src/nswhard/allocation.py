"""Allocations: one bundle per edge agent plus the greedy agent's bundle.

Agent indices used by owner vectors: edge number ``e`` is agent ``e - 1``,
the greedy agent is agent ``M``.
"""
from __future__ import annotations

import json
from dataclasses import dataclass
from typing import Sequence

import numpy as np

from .errors import FormatError, ValidationError
from .reduction import FORMAT_VERSION, AuctionInstance


@dataclass(frozen=True)
class Allocation:
    edge_bundles: tuple[frozenset[int], ...]
    greedy_bundle: frozenset[int]

    def __post_init__(self):
        object.__setattr__(self, "edge_bundles", tuple(frozenset(b) for b in self.edge_bundles))
        object.__setattr__(self, "greedy_bundle", frozenset(self.greedy_bundle))

    def bundle(self, edge: int) -> frozenset[int]:
        return self.edge_bundles[edge - 1]

    def owner_vector(self) -> tuple[int, ...]:
        m = len(self.edge_bundles)
        size = sum(len(b) for b in self.edge_bundles) + len(self.greedy_bundle)
        owner = [-1] * size
        for agent, b in enumerate(self.edge_bundles):
            for i in b:
                owner[i] = agent
        for i in self.greedy_bundle:
            owner[i] = m
        return tuple(owner)


def from_owner(inst: AuctionInstance, owner: Sequence[int]) -> Allocation:
    bundles: list[set[int]] = [set() for _ in range(inst.M + 1)]
    for item, agent in enumerate(owner):
        bundles[int(agent)].add(item)
    return Allocation(tuple(bundles[:-1]), bundles[-1])


def check_partition(inst: AuctionInstance, a: Allocation) -> None:
    if len(a.edge_bundles) != inst.M:
        raise ValidationError(f"not a partition: {len(a.edge_bundles)} edge bundles for {inst.M} edges")
    seen: set[int] = set()
    total = 0
    for b in (*a.edge_bundles, a.greedy_bundle):
        total += len(b)
        seen |= b
    if total != len(seen):
        raise ValidationError("not a partition: some item is assigned twice")
    if seen != set(range(inst.item_count)):
        missing = sorted(set(range(inst.item_count)) - seen)
        extra = sorted(seen - set(range(inst.item_count)))
        raise ValidationError(f"not a partition: missing items {missing}, unknown items {extra}")


def all_to_greedy(inst: AuctionInstance) -> Allocation:
    return Allocation((frozenset(),) * inst.M, frozenset(range(inst.item_count)))


def full_cover_allocation(inst: AuctionInstance) -> Allocation:
    """Every edge agent holds both of its valued items; the greedy agent gets nothing."""
    return Allocation(tuple(frozenset(p) for p in inst.edge_to_items), frozenset())


def allocation_to_dict(a: Allocation) -> dict:
    return {
        "format": FORMAT_VERSION,
        "edge_bundles": [sorted(b) for b in a.edge_bundles],
        "greedy_bundle": sorted(a.greedy_bundle),
    }


def serialize_allocation(a: Allocation) -> str:
    return json.dumps(allocation_to_dict(a)) + "\n"


def parse_allocation(text: str, inst: AuctionInstance, *, complete_to_greedy: bool = False) -> Allocation:
    """Read an allocation file and check it partitions the instance's items.

    With ``complete_to_greedy`` unassigned items are handed to the greedy agent
    instead of being rejected. Duplicates are always rejected.
    """
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"allocation is not valid JSON: {exc}") from None
    if not isinstance(obj, dict) or set(obj) != {"format", "edge_bundles", "greedy_bundle"}:
        raise FormatError("allocation must have exactly the fields format, edge_bundles, greedy_bundle")
    if obj["format"] != FORMAT_VERSION:
        raise FormatError(f"unsupported allocation format {obj['format']!r}")
    try:
        edge_lists = [[int(i) for i in b] for b in obj["edge_bundles"]]
        greedy_list = [int(i) for i in obj["greedy_bundle"]]
    except (TypeError, ValueError):
        raise FormatError("bundles must be lists of integer item indices") from None
    for b in (*edge_lists, greedy_list):
        if len(set(b)) != len(b):
            raise ValidationError("not a partition: repeated item inside a bundle")
    greedy = set(greedy_list)
    if complete_to_greedy:
        used = greedy.union(*edge_lists)
        greedy |= set(range(inst.item_count)) - used
    a = Allocation(tuple(frozenset(b) for b in edge_lists), frozenset(greedy))
    check_partition(inst, a)
    return a


def random_owner(
    inst: AuctionInstance,
    rng: np.random.Generator,
    *,
    force_positive: bool = True,
    stray: float = 0.0,
) -> np.ndarray:
    """Seeded random owner vector.

    Each item goes to its valuing edge agent or the greedy agent with
    probability 1/2 each. With ``stray > 0`` an item is instead handed, with
    that probability, to a uniformly random edge agent (usually one that does
    not value it). ``force_positive`` then gives every edge agent left at value
    zero one of its two items, chosen uniformly.
    """
    m_items = inst.item_count
    home = np.asarray(inst.item_to_edge_agent) - 1
    owner = np.where(rng.random(m_items) < 0.5, home, inst.M)
    if stray > 0:
        hit = rng.random(m_items) < stray
        owner = np.where(hit, rng.integers(0, inst.M, size=m_items), owner)
    if force_positive:
        for e, (i, j) in enumerate(inst.edge_to_items):
            if owner[i] != e and owner[j] != e:
                owner[i if rng.random() < 0.5 else j] = e
    return owner


def random_allocation(inst: AuctionInstance, rng: np.random.Generator, **kwargs) -> Allocation:
    return from_owner(inst, random_owner(inst, rng, **kwargs))


def edge_held_vertices(inst: AuctionInstance, a: Allocation) -> frozenset[int]:
    """V_E: vertices with at least one item sitting at some edge agent."""
    held = frozenset().union(*a.edge_bundles)
    return frozenset(v for v in inst.graph.vertices if any(i in held for i in inst.items_of_vertex(v)))

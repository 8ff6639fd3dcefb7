"""Compile a cubic graph into the NSW auction of the vertex-cover reduction.

Item ``(v, r)`` sits at canonical index ``3*v + r - 1``. Rank ``r`` is the
position (1, 2, 3) of the corresponding edge among v's incident edge numbers.
Edge agents are numbered like their edges (1-based); the greedy agent is
separate.
"""
from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import NamedTuple

from .errors import FormatError, PreconditionError, ValidationError
from .exact import format_fraction, log2_fraction, parse_reduced_fraction
from .graphs import CubicGraph

DEFAULT_EPSILON = Fraction(1, 100)
FORMAT_VERSION = 1


@dataclass(frozen=True)
class ReductionParams:
    c: Fraction = Fraction(1)
    epsilon: Fraction = DEFAULT_EPSILON

    def __post_init__(self):
        for name in ("c", "epsilon"):
            value = getattr(self, name)
            if isinstance(value, float):
                raise PreconditionError(f"{name} must be an exact rational, not a float")
            object.__setattr__(self, name, Fraction(value))
        if self.c < 1:
            raise PreconditionError(f"c must be >= 1, got {self.c}")
        if self.epsilon <= 0:
            raise PreconditionError(f"epsilon must be > 0, got {self.epsilon}")


class Item(NamedTuple):
    vertex: int
    rank: int


def item_index(vertex: int, rank: int) -> int:
    return 3 * vertex + rank - 1


@dataclass(frozen=True)
class AuctionInstance:
    graph: CubicGraph
    params: ReductionParams
    n: int
    items: tuple[Item, ...]
    item_to_edge_agent: tuple[int, ...]
    edge_to_items: tuple[tuple[int, int], ...]
    alpha: Fraction
    alpha_log2: float = field(compare=False)

    @property
    def N(self) -> int:
        return self.graph.n

    @property
    def M(self) -> int:
        return self.graph.m

    @property
    def item_count(self) -> int:
        return len(self.items)

    def items_of_vertex(self, v: int) -> tuple[int, int, int]:
        return (3 * v, 3 * v + 1, 3 * v + 2)

    def f(self, v: int, edge: int) -> int:
        """Item index that vertex ``v`` maps edge number ``edge`` to."""
        return item_index(v, self.graph.incident[v].index(edge) + 1)


def compute_alpha(g: CubicGraph, p: ReductionParams) -> Fraction:
    """``8^N * (c + eps)^(3N/2 + 1)``, exactly."""
    n_agents = 3 * g.n // 2 + 1
    alpha = Fraction(8) ** g.n * (p.c + p.epsilon) ** n_agents
    # Comparisons in exponent space are only sound if one alpha outweighs every power of two.
    assert alpha > 2 ** g.m, "alpha must exceed 2^M"
    return alpha


def build_instance(g: CubicGraph, p: ReductionParams = ReductionParams()) -> AuctionInstance:
    items = tuple(Item(v, r) for v in g.vertices for r in (1, 2, 3))
    owner = [0] * len(items)
    edge_items = []
    for number, (u, v) in enumerate(g.edges, start=1):
        pair = (item_index(u, g.incident[u].index(number) + 1), item_index(v, g.incident[v].index(number) + 1))
        for i in pair:
            owner[i] = number
        edge_items.append(pair)
    alpha = compute_alpha(g, p)
    inst = AuctionInstance(
        graph=g,
        params=p,
        n=3 * g.n // 2 + 1,
        items=items,
        item_to_edge_agent=tuple(owner),
        edge_to_items=tuple(edge_items),
        alpha=alpha,
        alpha_log2=log2_fraction(alpha),
    )
    assert len(inst.items) == 3 * g.n and inst.n == g.m + 1
    return inst


def instance_to_dict(inst: AuctionInstance) -> dict:
    return {
        "format": FORMAT_VERSION,
        "graph": {"n": inst.N, "edges": [list(e) for e in inst.graph.edges]},
        "c": format_fraction(inst.params.c),
        "epsilon": format_fraction(inst.params.epsilon),
        "n_agents": inst.n,
        "items": [{"vertex": it.vertex, "rank": it.rank} for it in inst.items],
        "edge_items": [list(pair) for pair in inst.edge_to_items],
        "alpha": format_fraction(inst.alpha),
    }


def serialize_instance(inst: AuctionInstance) -> str:
    return json.dumps(instance_to_dict(inst), indent=1) + "\n"


def instance_from_dict(obj: dict) -> AuctionInstance:
    expected = {"format", "graph", "c", "epsilon", "n_agents", "items", "edge_items", "alpha"}
    if not isinstance(obj, dict) or set(obj) != expected:
        raise FormatError(f"instance must have exactly the fields {sorted(expected)}")
    if obj["format"] != FORMAT_VERSION:
        raise FormatError(f"unsupported instance format {obj['format']!r}")
    try:
        graph = CubicGraph(obj["graph"]["n"], tuple(tuple(e) for e in obj["graph"]["edges"]))
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, ValidationError):
            raise
        raise FormatError(f"bad embedded graph: {exc}") from None
    params = ReductionParams(parse_reduced_fraction(obj["c"]), parse_reduced_fraction(obj["epsilon"]))
    alpha = parse_reduced_fraction(obj["alpha"])
    inst = build_instance(graph, params)

    if obj["n_agents"] != inst.n:
        raise ValidationError(f"n_agents is {obj['n_agents']}, expected {inst.n}")
    try:
        items = tuple(Item(int(it["vertex"]), int(it["rank"])) for it in obj["items"])
        edge_items = tuple((int(a), int(b)) for a, b in obj["edge_items"])
    except (KeyError, TypeError, ValueError):
        raise FormatError("malformed items or edge_items") from None
    if items != inst.items:
        raise ValidationError("items are not the canonical (vertex, rank) list")
    if edge_items != inst.edge_to_items:
        raise ValidationError("mapping violates ordering rule (f_v must follow ascending edge numbers)")
    if alpha != inst.alpha:
        raise ValidationError("alpha mismatch: does not equal 8^N (c+eps)^n for this graph and params")
    return inst


def parse_instance(text: str) -> AuctionInstance:
    try:
        obj = json.loads(text)
    except json.JSONDecodeError as exc:
        raise FormatError(f"instance is not valid JSON: {exc}") from None
    return instance_from_dict(obj)

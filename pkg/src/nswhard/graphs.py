"""Simple 3-regular graphs with a fixed edge numbering, plus exact vertex-cover tools.

Edges are stored in numbering order: ``edges[i]`` is edge number ``i + 1``.
Vertex sets are plain ``frozenset[int]``.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Optional

import numpy as np

from .errors import BudgetExceeded, FormatError, PreconditionError, ValidationError

VertexSet = frozenset

FAMILIES = ("k4", "k33", "prism", "petersen", "random")
MAX_RANDOM_ATTEMPTS = 10_000


@dataclass(frozen=True)
class CubicGraph:
    n: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        edges = tuple((min(u, v), max(u, v)) for u, v in self.edges)
        object.__setattr__(self, "edges", edges)
        _validate(self.n, edges)

    @property
    def m(self) -> int:
        return len(self.edges)

    @property
    def vertices(self) -> range:
        return range(self.n)

    @cached_property
    def incident(self) -> tuple[tuple[int, int, int], ...]:
        """Per vertex, the numbers of its three incident edges in ascending order."""
        inc: list[list[int]] = [[] for _ in range(self.n)]
        for number, (u, v) in enumerate(self.edges, start=1):
            inc[u].append(number)
            inc[v].append(number)
        return tuple(tuple(sorted(x)) for x in inc)

    def edge(self, number: int) -> tuple[int, int]:
        if not 1 <= number <= self.m:
            raise IndexError(f"edge number {number} out of range 1..{self.m}")
        return self.edges[number - 1]

    def to_text(self) -> str:
        lines = [f"{self.n} {self.m}"]
        lines += [f"{u} {v}" for u, v in self.edges]
        return "\n".join(lines) + "\n"


def _validate(n: int, edges: tuple[tuple[int, int], ...]) -> None:
    if not isinstance(n, int) or n <= 0:
        raise ValidationError(f"vertex count must be a positive integer, got {n!r}")
    if n % 2:
        raise ValidationError(f"vertex count must be even for a cubic graph, got {n}")
    degree = [0] * n
    seen = set()
    for number, (u, v) in enumerate(edges, start=1):
        if not (0 <= u < n and 0 <= v < n):
            raise ValidationError(f"edge {number} = ({u}, {v}) has an endpoint outside [0, {n})")
        if u == v:
            raise ValidationError(f"edge {number} is a self-loop at vertex {u}")
        if (u, v) in seen:
            raise ValidationError(f"duplicate edge {{{u}, {v}}} at edge {number}")
        seen.add((u, v))
        degree[u] += 1
        degree[v] += 1
    for v, d in enumerate(degree):
        if d != 3:
            raise ValidationError(f"degree of vertex {v} is {d}, expected 3")
    if len(edges) != 3 * n // 2:
        raise ValidationError(f"expected M = 3N/2 = {3 * n // 2} edges, got {len(edges)}")


def parse_graph(text: str) -> CubicGraph:
    """Parse the ``N M`` / ``u v`` edge-list format; ``#`` lines are comments.

    >>> g = parse_graph("4 6\\n0 1\\n1 2\\n2 3\\n0 3\\n0 2\\n1 3")
    >>> g.edge(1), g.edge(6)
    ((0, 1), (1, 3))
    """
    rows = []
    for lineno, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise FormatError(f"line {lineno}: expected two integers, got {raw!r}")
        try:
            rows.append((int(parts[0]), int(parts[1])))
        except ValueError:
            raise FormatError(f"line {lineno}: expected two integers, got {raw!r}") from None
    if not rows:
        raise FormatError("empty graph file")
    (n, m), body = rows[0], rows[1:]
    if len(body) != m:
        raise FormatError(f"header announces {m} edges but {len(body)} edge lines follow")
    return CubicGraph(n, tuple(body))


def _sorted_graph(n: int, edges: Iterable[tuple[int, int]]) -> CubicGraph:
    return CubicGraph(n, tuple(sorted((min(u, v), max(u, v)) for u, v in edges)))


def _random_cubic(n: int, seed: int) -> CubicGraph:
    # Configuration model: 3 stubs per vertex, random perfect matching of stubs,
    # reject the whole pairing on any loop or multi-edge.
    rng = np.random.default_rng(seed)
    stubs = np.repeat(np.arange(n), 3)
    for _ in range(MAX_RANDOM_ATTEMPTS):
        pairs = rng.permutation(stubs).reshape(-1, 2)
        pairs.sort(axis=1)
        if np.any(pairs[:, 0] == pairs[:, 1]):
            continue
        edges = {tuple(int(x) for x in p) for p in pairs}
        if len(edges) != len(pairs):
            continue
        return _sorted_graph(n, edges)
    raise BudgetExceeded(f"no simple pairing found after {MAX_RANDOM_ATTEMPTS} attempts (n={n}, seed={seed})")


def generate_family(name: str, n: Optional[int] = None, seed: Optional[int] = None) -> CubicGraph:
    """Build a named cubic graph, or a seeded random one via the configuration model."""
    if name == "random":
        if n is None or seed is None:
            raise PreconditionError("random family needs both n and seed")
        if n < 4 or n % 2:
            raise PreconditionError(f"random cubic graphs need even n >= 4, got {n}")
        return _random_cubic(n, seed)

    if name == "k4":
        g = _sorted_graph(4, itertools.combinations(range(4), 2))
    elif name == "k33":
        g = _sorted_graph(6, ((a, b) for a in range(3) for b in range(3, 6)))
    elif name == "prism":
        tri = [(0, 1), (1, 2), (0, 2)]
        g = _sorted_graph(6, tri + [(u + 3, v + 3) for u, v in tri] + [(i, i + 3) for i in range(3)])
    elif name == "petersen":
        outer = [(i, (i + 1) % 5) for i in range(5)]
        inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
        spokes = [(i, i + 5) for i in range(5)]
        g = _sorted_graph(10, outer + inner + spokes)
    else:
        raise PreconditionError(f"unknown family {name!r}; choose from {', '.join(FAMILIES)}")
    if n is not None and n != g.n:
        raise PreconditionError(f"family {name} has {g.n} vertices, not {n}")
    return g


def is_vertex_cover(g: CubicGraph, s: Iterable[int]) -> bool:
    s = set(s)
    return all(u in s or v in s for u, v in g.edges)


def is_minimal_cover(g: CubicGraph, s: Iterable[int]) -> bool:
    """True iff ``s`` is a cover from which no single vertex can be dropped.

    Single-vertex minimality suffices: covers are closed upward.
    """
    s = frozenset(s)
    if not is_vertex_cover(g, s):
        raise PreconditionError("set is not a vertex cover")
    return not any(is_vertex_cover(g, s - {v}) for v in s)


def _mask(s: Iterable[int]) -> int:
    return sum(1 << v for v in s)


def minimum_vertex_covers(g: CubicGraph) -> tuple[int, list[frozenset[int]]]:
    """Brute-force oracle: smallest cover size and every cover of that size.

    Covers come back in ascending bitmask order.
    """
    for size in range(g.n + 1):
        found = [frozenset(c) for c in itertools.combinations(g.vertices, size) if is_vertex_cover(g, c)]
        if found:
            return size, sorted(found, key=_mask)
    raise AssertionError("unreachable: the full vertex set is a cover")


def d_count(g: CubicGraph, s: Iterable[int]) -> int:
    """Number of edges with both endpoints in ``s``."""
    s = set(s)
    return sum(1 for u, v in g.edges if u in s and v in s)


def canonical_key(s: Iterable[int]) -> tuple[int, ...]:
    return tuple(sorted(s))


def select_cstar(g: CubicGraph) -> frozenset[int]:
    """A minimum cover with the most internal edges; ties go to the smallest sorted tuple."""
    _, covers = minimum_vertex_covers(g)
    return min(covers, key=lambda c: (-d_count(g, c), canonical_key(c)))


def all_vertex_covers(g: CubicGraph) -> list[frozenset[int]]:
    """Every vertex cover, ascending bitmask order. Vectorised over all 2^N masks."""
    if g.n > 24:
        raise BudgetExceeded(f"cover enumeration limited to N <= 24, got N={g.n}")
    masks = np.arange(1 << g.n, dtype=np.int64)
    ok = np.ones(masks.shape, dtype=bool)
    for u, v in g.edges:
        ok &= ((masks >> u) | (masks >> v)) & 1 == 1
    return [frozenset(v for v in g.vertices if (int(x) >> v) & 1) for x in masks[ok]]


def girth(g: CubicGraph) -> int:
    """Length of a shortest cycle, by BFS from every vertex."""
    adj = [[] for _ in g.vertices]
    for u, v in g.edges:
        adj[u].append(v)
        adj[v].append(u)
    best = g.n + 1
    for root in g.vertices:
        dist = {root: 0}
        parent = {root: -1}
        queue = [root]
        for x in queue:
            for y in adj[x]:
                if y not in dist:
                    dist[y] = dist[x] + 1
                    parent[y] = x
                    queue.append(y)
                elif parent[x] != y:
                    best = min(best, dist[x] + dist[y] + 1)
    return best

"""Compile the four-vertex complete graph into an NSW auction and inspect it.

Run with ``python demos/01_reduction_walkthrough.py``.
"""
from fractions import Fraction

from nswhard import ReductionParams, build_instance, parse_graph

# %% The graph: K4 with a hand-picked edge numbering (line order = edge number).
g = parse_graph("4 6\n0 1\n1 2\n2 3\n0 3\n0 2\n1 3\n")
for number, (u, v) in enumerate(g.edges, start=1):
    print(f"e{number} = {{{u}, {v}}}")

# %% Each vertex owns three items; rank r goes to its r-th smallest incident edge.
inst = build_instance(g, ReductionParams(c=Fraction(1), epsilon=Fraction(1, 100)))
print("\nincident edge numbers per vertex:", g.incident)
for number, pair in enumerate(inst.edge_to_items, start=1):
    names = [f"v{inst.items[i].vertex}{chr(39) * inst.items[i].rank}" for i in pair]
    print(f"agent of e{number} values {names}")

# %% alpha is kept exact; the float log is for reading only.
print(f"\nagents: {inst.n}, items: {inst.item_count}")
print(f"alpha = {inst.alpha}  (log2 ~ {inst.alpha_log2:.4f})")
print("alpha > 2^M:", inst.alpha > 2 ** inst.M)

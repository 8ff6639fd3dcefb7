"""Exact toolkit for the vertex-cover to Nash-social-welfare hardness reduction.

Cubic graphs are compiled into auctions with additive edge agents and one
supermodular greedy agent; optima are computed and verified exactly.
"""
from .allocation import Allocation, parse_allocation, serialize_allocation
from .errors import BudgetExceeded, FormatError, PreconditionError, ValidationError
from .graphs import (
    CubicGraph,
    d_count,
    generate_family,
    is_minimal_cover,
    is_vertex_cover,
    minimum_vertex_covers,
    parse_graph,
    select_cstar,
)
from .reduction import AuctionInstance, Item, ReductionParams, build_instance, compute_alpha, parse_instance, serialize_instance
from .solver import construct_from_cover, improve_allocation, opt_formula, solve_bruteforce, solve_structured
from .valuations import (
    ZERO,
    NswPower,
    check_superadditive_additive,
    check_supermodular,
    compare,
    covered_vertices,
    edge_value,
    greedy_exponent,
    nsw_log2,
    nsw_power,
    to_big_rational,
)
from .verifier import VerifierReport, decompose, extract_cover, theorem_sweep, verify_capprox

__version__ = "0.1.0"

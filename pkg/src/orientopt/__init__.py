"""Orientations and vertex orders of multigraphs optimizing indegree objectives."""

from .graph import (
    Multigraph,
    Orientation,
    DegreeVector,
    BlockTree,
    build_graph,
    degrees_of_order,
    degrees_of_orientation,
    orientation_of_order,
    is_acyclic,
    topological_order,
    block_tree,
    st_order,
)
from .objectives import (
    LiftedCost,
    LiftedPhi,
    PhiSpec,
    PhiSum,
    DecMin,
    IncMax,
    IncMin,
    DecMax,
    RhoDeltaSum,
    MaxWeightedIndeg,
    ForbiddenSubpaths,
    evaluate,
    lift,
    validate_convex,
)
from .flow import CyclicSolution, solve_cyclic, solve_mixed
from .ordering import (
    combine_st_orders,
    conditional_expectation,
    derandomized_order,
    exact_subset_dp,
    greedy_min_degree,
    linear_slope_order,
    random_order_trials,
    solve_acyclic_exact,
    weighted_smallest_last,
)
from .exhaustive import (
    BruteResult,
    brute_optimal,
    cycle_reversal_decomposition,
    enumerate_orders,
    enumerate_orientations,
    vertex_certificate,
)
from .instances import fig4_graph, gen_gk, named_instance, random_multigraph

__all__ = [
    "Multigraph",
    "Orientation",
    "DegreeVector",
    "BlockTree",
    "build_graph",
    "degrees_of_order",
    "degrees_of_orientation",
    "orientation_of_order",
    "is_acyclic",
    "topological_order",
    "block_tree",
    "st_order",
    "LiftedCost",
    "LiftedPhi",
    "PhiSpec",
    "PhiSum",
    "DecMin",
    "IncMax",
    "IncMin",
    "DecMax",
    "RhoDeltaSum",
    "MaxWeightedIndeg",
    "ForbiddenSubpaths",
    "evaluate",
    "lift",
    "validate_convex",
    "CyclicSolution",
    "solve_cyclic",
    "solve_mixed",
    "combine_st_orders",
    "conditional_expectation",
    "derandomized_order",
    "exact_subset_dp",
    "greedy_min_degree",
    "linear_slope_order",
    "random_order_trials",
    "solve_acyclic_exact",
    "weighted_smallest_last",
    "BruteResult",
    "brute_optimal",
    "cycle_reversal_decomposition",
    "enumerate_orders",
    "enumerate_orientations",
    "vertex_certificate",
    "fig4_graph",
    "gen_gk",
    "named_instance",
    "random_multigraph",
]

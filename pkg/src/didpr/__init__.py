"""Directed-network assortativity toolkit.

Generate directed random networks, measure the four directed
degree--degree assortativity coefficients, decide which target values are
jointly attainable, rewire a network toward attainable targets while
preserving every node's out- and in-degrees, and fit the
preferential-attachment model behind the generator.
"""
from .assortativity import (
    TYPE_PAIRS,
    AssortProfile,
    EdgeEndDistributions,
    EdgeMixMatrix,
    assortativity,
    assortativity_from_edges,
    assortativity_of_graph,
    edge_mix_from_graph,
    end_distributions,
    read_eta_csv,
    write_eta_csv,
)
from .eta import (
    AssortBounds,
    EtaProblem,
    assemble_constraints,
    coefficient_bounds,
    ends_from_nu,
    g_map,
    problem_from_graph,
    problem_from_nu,
    solve_target_eta,
)
from .fit import EvFit, beta_hat, fit_ev, invert_tail_indices, polar_transform, tail_index, tail_indices_from_params
from .generate import DpaParams, gen_dpa, gen_er, scenario_of_edge
from .graph import (
    DegreePairDist,
    DirectedGraph,
    GraphFormatError,
    degree_pair_dist,
    read_edge_labels,
    read_edge_list,
    sample_edge_pair,
    swap_edges,
    write_edge_labels,
    write_edge_list,
)
from .lp import LinearProgram, LpError, LpSolution, LpStatus, solve, solve_feasibility
from .rewire import (
    RewiringConfig,
    RewiringTrace,
    ScenarioGains,
    acceptance_probability,
    balance_ratio,
    read_trace_csv,
    rewire,
    rewire_with_scenario_gains,
)
from .weighted import CumulativeWeightTree

__version__ = "0.1.0"

__all__ = [
    "TYPE_PAIRS",
    "AssortProfile",
    "EdgeEndDistributions",
    "EdgeMixMatrix",
    "assortativity",
    "assortativity_from_edges",
    "assortativity_of_graph",
    "edge_mix_from_graph",
    "end_distributions",
    "read_eta_csv",
    "write_eta_csv",
    "AssortBounds",
    "EtaProblem",
    "assemble_constraints",
    "coefficient_bounds",
    "ends_from_nu",
    "g_map",
    "problem_from_graph",
    "problem_from_nu",
    "solve_target_eta",
    "EvFit",
    "beta_hat",
    "fit_ev",
    "invert_tail_indices",
    "polar_transform",
    "tail_index",
    "tail_indices_from_params",
    "DpaParams",
    "gen_dpa",
    "gen_er",
    "scenario_of_edge",
    "DegreePairDist",
    "DirectedGraph",
    "GraphFormatError",
    "degree_pair_dist",
    "read_edge_labels",
    "read_edge_list",
    "sample_edge_pair",
    "swap_edges",
    "write_edge_labels",
    "write_edge_list",
    "LinearProgram",
    "LpError",
    "LpSolution",
    "LpStatus",
    "solve",
    "solve_feasibility",
    "RewiringConfig",
    "RewiringTrace",
    "ScenarioGains",
    "acceptance_probability",
    "balance_ratio",
    "read_trace_csv",
    "rewire",
    "rewire_with_scenario_gains",
    "CumulativeWeightTree",
    "__version__",
]

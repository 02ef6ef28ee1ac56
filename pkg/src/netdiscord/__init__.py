"""Equilibrium, welfare and optimal interventions in network coordination games.

Agents on a symmetric, row-stochastic network choose actions balancing
coordination with neighbours against their own ideal points.  The package
computes the equilibrium, decomposes welfare and disagreement along the
network's principal components, and solves the planner's budgeted
intervention problem in closed form, with brute-force oracles to check it.
"""
__version__ = "0.1.0"

from .errors import (
    BlissPointError,
    ConsistencyError,
    ConvergenceError,
    InvalidNetworkError,
    NetDiscordError,
    NormalizationError,
    PreconditionError,
    VerificationError,
)
from .network import (
    Network,
    Violation,
    from_weighted_edges,
    load_json,
    make_circle,
    make_homophilous_blocks,
    save_json,
    validate,
)
from .spectral import Spectrum, decompose, from_pc_basis, to_pc_basis
from .equilibrium import GameParams, agent_payoffs, solve_equilibrium, solve_equilibrium_neumann, welfare
from .stats import cov_neighbors, cov_random_pair, eta, nu, welfare_spectral, zeta
from .planner import InterventionResult, optimal_intervention, simple_optimal_f
from .oracle import SearchConfig, constrained_search, sphere_search, verify_prop2_table
from .kernels import BACKEND

__all__ = [
    "BACKEND",
    "BlissPointError",
    "ConsistencyError",
    "ConvergenceError",
    "GameParams",
    "InterventionResult",
    "InvalidNetworkError",
    "NetDiscordError",
    "Network",
    "NormalizationError",
    "PreconditionError",
    "SearchConfig",
    "Spectrum",
    "VerificationError",
    "Violation",
    "agent_payoffs",
    "constrained_search",
    "cov_neighbors",
    "cov_random_pair",
    "decompose",
    "eta",
    "from_pc_basis",
    "from_weighted_edges",
    "load_json",
    "make_circle",
    "make_homophilous_blocks",
    "nu",
    "optimal_intervention",
    "save_json",
    "simple_optimal_f",
    "solve_equilibrium",
    "solve_equilibrium_neumann",
    "sphere_search",
    "to_pc_basis",
    "validate",
    "verify_prop2_table",
    "welfare",
    "welfare_spectral",
    "zeta",
]

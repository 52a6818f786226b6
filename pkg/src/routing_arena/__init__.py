"""Atomic routing games: exact costs, best-response dynamics and equilibrium analysis."""

from .analysis import (AnalysisReport, analyze, enumerate_nash, optimal_social_cost,
                       poa_bound_check, price_of_anarchy, price_of_stability)
from .dynamics import (DynamicsTrace, MoveRecord, Schedule, best_response, greedy_step, is_nash,
                       run_best_response, verify_lemma1_identity)
from .errors import (ArenaError, GenerationError, InstanceTooLargeError, InvalidPlayerError,
                     InvalidRoutingError, MalformedPairError, NoEquilibriumError,
                     NonConvergenceError, ValidationError)
from .estimators import BestResponseDynamics, EquilibriumAnalyzer
from .game import (EXPONENTIAL, CostModel, GameInstance, Player, congestion, player_cost,
                   player_costs, potential, social_cost)
from .generators import (GeneratorSpec, gen_expansion_chain, gen_fig2, gen_multi_nash_witness,
                         gen_random)
from .graph import Graph, Path, enumerate_simple_paths, validate_path

__version__ = "0.1.0"

__all__ = [
    "AnalysisReport", "ArenaError", "BestResponseDynamics", "CostModel", "DynamicsTrace",
    "EXPONENTIAL", "EquilibriumAnalyzer", "GameInstance", "GenerationError", "GeneratorSpec",
    "Graph", "InstanceTooLargeError", "InvalidPlayerError", "InvalidRoutingError",
    "MalformedPairError", "MoveRecord", "NoEquilibriumError", "NonConvergenceError", "Path",
    "Player", "Schedule", "ValidationError", "analyze", "best_response", "congestion",
    "enumerate_nash", "enumerate_simple_paths", "gen_expansion_chain", "gen_fig2",
    "gen_multi_nash_witness", "gen_random", "greedy_step", "is_nash", "optimal_social_cost",
    "player_cost", "player_costs", "poa_bound_check", "potential", "price_of_anarchy",
    "price_of_stability", "run_best_response", "social_cost", "validate_path",
    "verify_lemma1_identity",
]

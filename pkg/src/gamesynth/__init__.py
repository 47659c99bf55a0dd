"""Exact synthesis for weighted two-player games on graphs."""

from .admissibility import (
    AAResult,
    DominanceVerdict,
    ObjectivePair,
    admissible_strategies,
    assume_admissible_check,
    dominates,
    verify_win_hyp,
    win_hyp_solve,
)
from .arena import ADAM, EVE, Arena, ArenaError, Edge, Issue, Player, validate_arena
from .bwc import (
    BwcCertificate,
    BwcInstance,
    CapExceeded,
    NotFound,
    bwc_synthesize,
    combined_strategy,
    worst_case_value_of,
)
from .io import ArenaBundle, DocumentError, load_arena, load_automaton, parse_arena, parse_automaton, serialize_arena
from .mdp import (
    InducedChain,
    RandomizedMemorylessStrategy,
    SupportViolation,
    chain_expected_mp,
    expected_mp,
    induce_chain,
    optimal_expectation,
    stationary_distribution,
)
from .mpgames import GameValueReport, NonTotalRestriction, max_mean_cycle, min_mean_cycle, solve_mp_game
from .parity import solve_buchi, solve_parity3
from .play import BuchiObjective, Lasso, PayoffKind, outcome_lasso, payoff
from .rational import as_fraction, fraction_str
from .regret import (
    AdversaryClass,
    PlayWitness,
    RegretReport,
    min_regret_arbitrary,
    min_regret_memoryless_adversary,
    regret_brute_force,
    regret_vs_arbitrary,
    regret_vs_memoryless,
)
from .sim import SimConfig, SimReport, SplitMix64, estimate_expected_mp, simulate_run
from .strategy import FiniteMemoryStrategy, complete_strategy, enumerate_by_memory, enumerate_strategies, memoryless, strategy_from_table, strategy_table
from .words import (
    LassoWord,
    WeightedAutomaton,
    WordStrategy,
    is_alpha_gfg,
    is_det_by_pruning,
    min_regret_words,
    positional_resolver,
    regret_vs_words,
)

__version__ = "0.1.0"

"""Noisy-optimization suite for evolving skill-deep game rule sets."""

from .params import (
    GameParams, Genome, SearchSpace, decode, default_search_space, mutate,
    neighbours, random_genome,
)
from .game import Action, GameState, WorldConfig, init_game, is_terminal, step
from .agents import AgentBudgets, act, heuristic_value, ucb1_select
from .fitness import FitnessEvaluator, evaluate, game_score, play_game, skill_depth
from .optimizers import (
    NTupleModel, brmhc_preprocess, brmhc_run, ntbea_run, rmhc_run,
    softmax_select,
)
from .stats import mann_whitney_u, reevaluate, sort_and_tabulate
from .config import ExperimentConfig
from .harness import replay_games, run_experiment, run_single_trial

__version__ = "0.1.0"

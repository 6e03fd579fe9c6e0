"""Skill-depth fitness: how much stronger play pays off under a rule set.

One evaluation plays three seeded games, one per rung of the skill ladder
(OSLA, RAS, MCTS), each against the genome's own enemy agent, and scores
min(T_strong - T_medium, T_medium - T_weak). Positive fitness means every
extra rung of skill buys a real margin.
"""

from __future__ import annotations

from dataclasses import dataclass

from .agents import (
    AGENT_NAMES, AgentBudgets, MCTS_ID, OSLA_ID, RAS_ID, act,
)
from .game import GameState, Outcome, WorldConfig, init_game, is_terminal, step
from .params import Genome, SearchSpace, decode
from .seeds import derive_seed, make_rng

SKILL_LADDER = (OSLA_ID, RAS_ID, MCTS_ID)   # weak, medium, strong

SIDE_SKILL_FIRST = "skill_first"
SIDE_SKILL_SECOND = "skill_second"
SIDE_BOTH = "both"


@dataclass(frozen=True)
class GameOutcome:
    """Raw material for the game score: end scores plus win bonuses."""

    s1: float
    s2: float
    w1: float
    w2: float


def game_score(outcome: GameOutcome, divisor: float = 100.0) -> float:
    """Point lead of player 1 over player 2, win bonus included."""
    return (outcome.s1 / divisor + outcome.w1) - (outcome.s2 / divisor + outcome.w2)


def skill_depth(t_weak: float, t_mid: float, t_strong: float) -> float:
    """The narrower of the two skill gaps; the quantity being maximised."""
    return min(t_strong - t_mid, t_mid - t_weak)


def outcome_to_game_outcome(out: Outcome, world: WorldConfig) -> GameOutcome:
    w1 = float(world.win_bonus) if out.winner == 1 else 0.0
    w2 = float(world.win_bonus) if out.winner == 2 else 0.0
    return GameOutcome(float(out.scores[0]), float(out.scores[1]), w1, w2)


@dataclass(frozen=True)
class GameRecord:
    game_index: int
    agent1: str
    agent2: str
    seed: int
    ticks: int
    scores: tuple[int, int]
    lives: tuple[int, int]
    winner: int               # 1, 2, or 0 for a draw
    t_score: float            # game score from the skill agent's side


@dataclass(frozen=True)
class FitnessResult:
    fitness: float
    t_scores: tuple[float, float, float]
    records: tuple[GameRecord, ...]


def play_game(params, world: WorldConfig, agent1: int, agent2: int,
              budgets: AgentBudgets, seed: int) -> tuple[GameOutcome, Outcome]:
    """Run one full game to its terminal state."""
    state = init_game(params, world, derive_seed(seed, "game"))
    rng1 = make_rng(seed, "agent", 1)
    rng2 = make_rng(seed, "agent", 2)
    while (out := is_terminal(state)) is None:
        a1 = act(agent1, state, 1, budgets, rng1)
        a2 = act(agent2, state, 2, budgets, rng2)
        step(state, a1, a2)
    return outcome_to_game_outcome(out, world), out


def _skill_game(params, world, skill_agent: int, enemy: int, budgets,
                seed: int, skill_side: int, game_index: int) -> tuple[float, GameRecord]:
    if skill_side == 1:
        go, out = play_game(params, world, skill_agent, enemy, budgets, seed)
        t = game_score(go, world.score_divisor)
        a1, a2 = skill_agent, enemy
    else:
        go, out = play_game(params, world, enemy, skill_agent, budgets, seed)
        t = -game_score(go, world.score_divisor)
        a1, a2 = enemy, skill_agent
    record = GameRecord(
        game_index=game_index,
        agent1=AGENT_NAMES[a1],
        agent2=AGENT_NAMES[a2],
        seed=seed,
        ticks=out.ticks,
        scores=out.scores,
        lives=out.lives,
        winner=out.winner or 0,
        t_score=t,
    )
    return t, record


def evaluate(genome: Genome, space: SearchSpace, world: WorldConfig,
             budgets: AgentBudgets, seed: int,
             side_mode: str = SIDE_SKILL_FIRST) -> FitnessResult:
    """One noisy fitness sample for a genome.

    Per-game seeds derive from (seed, gameIndex), so a fixed seed reproduces
    the same three games exactly. side_mode picks which side the skill ladder
    plays; "both" plays each rung twice and averages, at double the game cost.
    """
    params = decode(genome, space)
    enemy = params.enemy_id
    ts: list[float] = []
    records: list[GameRecord] = []
    game_index = 0
    for skill_agent in SKILL_LADDER:
        if side_mode == SIDE_BOTH:
            sides: tuple[int, ...] = (1, 2)
        elif side_mode == SIDE_SKILL_SECOND:
            sides = (2,)
        else:
            sides = (1,)
        t_sum = 0.0
        for side in sides:
            game_seed = derive_seed(seed, game_index)
            t, rec = _skill_game(params, world, skill_agent, enemy, budgets,
                                 game_seed, side, game_index)
            t_sum += t
            records.append(rec)
            game_index += 1
        ts.append(t_sum / len(sides))
    fitness = skill_depth(ts[0], ts[1], ts[2])
    return FitnessResult(fitness=fitness, t_scores=(ts[0], ts[1], ts[2]),
                         records=tuple(records))


class FitnessEvaluator:
    """Callable evaluator with budget accounting.

    __call__ burns one unit of the evolution budget and derives its seed from
    (trialSeed, "eval", callIndex). sample() is for re-evaluation: explicitly
    seeded, never counted against the budget.
    """

    def __init__(self, space: SearchSpace, world: WorldConfig,
                 budgets: AgentBudgets, trial_seed: int,
                 side_mode: str = SIDE_SKILL_FIRST):
        self.space = space
        self.world = world
        self.budgets = budgets
        self.trial_seed = trial_seed
        self.side_mode = side_mode
        self.calls = 0
        self.games = 0

    def __call__(self, genome: Genome) -> float:
        seed = derive_seed(self.trial_seed, "eval", self.calls)
        self.calls += 1
        result = evaluate(genome, self.space, self.world, self.budgets,
                          seed, self.side_mode)
        self.games += len(result.records)
        return result.fitness

    def sample(self, genome: Genome, seed: int) -> float:
        result = evaluate(genome, self.space, self.world, self.budgets,
                          seed, self.side_mode)
        self.games += len(result.records)
        return result.fitness

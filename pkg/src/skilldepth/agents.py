"""The six controllers a genome can face, plus the skill ladder itself.

DoNothing and Random are the floors, OSLA / RAS / MCTS are the graded weak,
medium and strong players used for fitness, and MEA is a rolling-horizon
evolutionary planner. Budgets are iteration counts, never wall clock, so the
same config reproduces bit for bit on any machine.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from random import Random
from typing import Sequence

from .game import (
    ACTIONS, Action, DO_NOTHING, GameState, N_ACTIONS, is_terminal, step,
)

DO_NOTHING_ID = 0
RANDOM_ID = 1
OSLA_ID = 2
RAS_ID = 3
MCTS_ID = 4
MEA_ID = 5

AGENT_NAMES = ("donothing", "random", "osla", "ras", "mcts", "mea")

WIN_VALUE = 1_000_000.0
HEURISTIC_SCALE = 100.0  # one landed hit, in score points

RAS_ACTION = Action(turn=1, thrust=False, shoot=True)


@dataclass(frozen=True)
class AgentBudgets:
    mcts_iterations: int = 500
    mcts_rollout_depth: int = 20
    mcts_c: float = math.sqrt(2.0)
    mea_pop_size: int = 10
    mea_seq_length: int = 10
    mea_evals: int = 500

    def replace(self, **kw) -> "AgentBudgets":
        from dataclasses import replace as _replace
        return _replace(self, **kw)


def heuristic_value(state: GameState, player: int) -> float:
    """Score lead for `player` (1 or 2), with a decisive bonus at terminal states."""
    own = state.ships[player - 1]
    opp = state.ships[2 - player]
    v = float(own.score - opp.score)
    out = is_terminal(state)
    if out is not None:
        if out.winner == player:
            v += WIN_VALUE
        elif out.winner is not None:
            v -= WIN_VALUE
    return v


def squash(value: float) -> float:
    """Logistic map of a heuristic value onto [0, 1] for bandit arithmetic."""
    x = value / HEURISTIC_SCALE
    if x > 60.0:
        return 1.0
    if x < -60.0:
        return 0.0
    return 1.0 / (1.0 + math.exp(-x))


def ucb1_select(children: Sequence[tuple[float, int]], total_n: int, c: float) -> int:
    """Index of argmax q + c*sqrt(ln(totalN)/n).

    children are (q, n) pairs where q is the mean value. Unvisited children
    (n = 0) are taken first; all ties break toward the lowest index.
    """
    assert total_n >= 1
    log_n = math.log(total_n) if total_n > 1 else 0.0
    best_i = -1
    best_v = -math.inf
    for i, (q, n) in enumerate(children):
        if n == 0:
            return i
        v = q + c * math.sqrt(log_n / n)
        if v > best_v:
            best_v = v
            best_i = i
    return best_i


# --- individual controllers ------------------------------------------------


def osla_act(state: GameState, player: int) -> Action:
    """One-step lookahead against a DoNothing opponent; deterministic.

    Ties keep the lowest action index, and the passive variant of every move
    precedes its shooting twin, so OSLA only spends a missile when the shot
    connects on the very next tick.
    """
    best_i = 0
    best_v = -math.inf
    for i, act in enumerate(ACTIONS):
        s = state.copy()
        if player == 1:
            step(s, act, DO_NOTHING)
        else:
            step(s, DO_NOTHING, act)
        v = heuristic_value(s, player)
        if v > best_v:
            best_v = v
            best_i = i
    return ACTIONS[best_i]


class _Node:
    __slots__ = ("n", "child_n", "child_q", "children")

    def __init__(self) -> None:
        self.n = 0
        self.child_n = [0] * N_ACTIONS
        self.child_q = [0.0] * N_ACTIONS
        self.children: list[_Node | None] = [None] * N_ACTIONS


def mcts_act(state: GameState, player: int, budgets: AgentBudgets, rng: Random) -> Action:
    """Open-loop UCT over own actions, opponent modelled as Random.

    Every iteration replays its path from a fresh copy of the root state, so
    environment noise and opponent randomness are resampled rather than baked
    into the tree. Rollout leaf values are squashed to [0, 1]; the returned
    move is the most-visited root action (ties toward the lowest index), and
    root child visits always sum to the iteration budget.
    """
    root = _Node()
    c = budgets.mcts_c
    depth = budgets.mcts_rollout_depth
    me_first = player == 1
    actions = ACTIONS
    randrange = rng.randrange
    log = math.log
    sqrt = math.sqrt
    for _ in range(budgets.mcts_iterations):
        s = state.copy()
        node = root
        path: list[tuple[_Node, int]] = []
        value = 0.5
        while True:
            # selection, same policy as ucb1_select: unvisited first, then
            # argmax of mean + c*sqrt(ln(n)/n_i), ties toward the low index
            child_n = node.child_n
            child_q = node.child_q
            idx = -1
            best_v = -math.inf
            log_n = log(node.n) if node.n > 1 else 0.0
            for i in range(N_ACTIONS):
                ni = child_n[i]
                if ni == 0:
                    idx = i
                    break
                v = child_q[i] / ni + c * sqrt(log_n / ni)
                if v > best_v:
                    best_v = v
                    idx = i
            first_visit = child_n[idx] == 0
            path.append((node, idx))
            mine = actions[idx]
            theirs = actions[randrange(N_ACTIONS)]
            if me_first:
                step(s, mine, theirs)
            else:
                step(s, theirs, mine)
            if is_terminal(s) is not None:
                value = squash(heuristic_value(s, player))
                break
            if first_visit:
                node.children[idx] = _Node()
                for _ in range(depth):
                    step(s, actions[randrange(N_ACTIONS)],
                         actions[randrange(N_ACTIONS)])
                    if is_terminal(s) is not None:
                        break
                value = squash(heuristic_value(s, player))
                break
            node = node.children[idx]  # type: ignore[assignment]
        for n_, i_ in path:
            n_.n += 1
            n_.child_n[i_] += 1
            n_.child_q[i_] += value
    best = 0
    best_n = -1
    for i in range(N_ACTIONS):
        if root.child_n[i] > best_n:
            best_n = root.child_n[i]
            best = i
    return ACTIONS[best]


def mea_act(state: GameState, player: int, budgets: AgentBudgets, rng: Random) -> Action:
    """Rolling-horizon microbial EA over fixed-length action sequences.

    The budget counts sequence evaluations. Each tournament overwrites the
    loser with a winner-biased uniform crossover plus a single-gene mutation,
    then evaluates it once. Returns the first action of the fittest sequence.
    """
    pop_size = budgets.mea_pop_size
    seq_len = budgets.mea_seq_length
    budget = budgets.mea_evals
    assert budget >= pop_size, "MEA budget must cover the initial population"
    me_first = player == 1

    def rollout(seq: list[int]) -> float:
        s = state.copy()
        for a_idx in seq:
            if is_terminal(s) is not None:
                break
            mine = ACTIONS[a_idx]
            theirs = ACTIONS[rng.randrange(N_ACTIONS)]
            if me_first:
                step(s, mine, theirs)
            else:
                step(s, theirs, mine)
        return heuristic_value(s, player)

    pop = [[rng.randrange(N_ACTIONS) for _ in range(seq_len)] for _ in range(pop_size)]
    fit = [rollout(seq) for seq in pop]
    used = pop_size
    while used < budget:
        i, j = rng.sample(range(pop_size), 2)
        if fit[i] >= fit[j]:
            win, lose = i, j
        else:
            win, lose = j, i
        child = [pop[win][k] if rng.random() < 0.5 else pop[lose][k]
                 for k in range(seq_len)]
        child[rng.randrange(seq_len)] = rng.randrange(N_ACTIONS)
        pop[lose] = child
        fit[lose] = rollout(child)
        used += 1
    best = max(range(pop_size), key=lambda m: fit[m])
    return ACTIONS[pop[best][0]]


def act(agent_id: int, state: GameState, player: int,
        budgets: AgentBudgets, rng: Random) -> Action:
    """Ask agent `agent_id` for its move as player 1 or 2."""
    if agent_id == DO_NOTHING_ID:
        return DO_NOTHING
    if agent_id == RANDOM_ID:
        return ACTIONS[rng.randrange(N_ACTIONS)]
    if agent_id == OSLA_ID:
        return osla_act(state, player)
    if agent_id == RAS_ID:
        return RAS_ACTION
    if agent_id == MCTS_ID:
        return mcts_act(state, player, budgets, rng)
    if agent_id == MEA_ID:
        return mea_act(state, player, budgets, rng)
    raise ValueError(f"unknown agent id {agent_id}")

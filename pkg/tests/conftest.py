"""Shared fixtures: small search spaces and fast worlds for unit tests."""

import pytest

from skilldepth.agents import AgentBudgets
from skilldepth.game import WorldConfig
from skilldepth.params import (
    GameParams, GeneSpec, SearchSpace, default_search_space, encode,
)


def make_space(arities):
    """A synthetic space whose gene g takes levels 0..arities[g]-1."""
    return SearchSpace(tuple(
        GeneSpec(f"G{i}", tuple(range(a))) for i, a in enumerate(arities)
    ))


def make_params(**kw):
    """A quiet baseline rule set; override what the scenario needs."""
    base = dict(
        missile_max_speed=5, missile_cooldown=3, missile_radius=4,
        missile_max_ttl=100, grid_size=1, blackhole_cells=(0,) * 16,
        blackhole_radius=25, blackhole_force=0, blackhole_penalty=0,
        safe_zone=0, bomb_radius=20, missile_type=0,
        resource_ttl=400, resource_cooldown=100_000, enemy_id=0)
    base.update(kw)
    return GameParams(**base)


def make_genome(space, **kw):
    """Encode a make_params rule set, swapping in an encodable cooldown."""
    kw.setdefault("resource_cooldown", 250)
    return encode(make_params(**kw)._value_list(), space)


@pytest.fixture
def space():
    return default_search_space()


@pytest.fixture
def tiny_space():
    return make_space((3, 3, 2, 2))


@pytest.fixture
def fast_world():
    """Small arena, short games: agent tests stay under a second."""
    return WorldConfig(width=160.0, height=120.0, max_ticks=60,
                       start_missiles=10, pack_size=5)


@pytest.fixture
def fast_budgets():
    return AgentBudgets(mcts_iterations=30, mcts_rollout_depth=6,
                        mea_pop_size=4, mea_seq_length=3, mea_evals=12)

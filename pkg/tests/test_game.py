"""Simulation rules: movement, shooting, holes, resources, terminal states."""

import math
import random

import pytest

from skilldepth.game import (
    ACTIONS, ACTION_INDEX, Action, DO_NOTHING, Missile, N_ACTIONS, WorldConfig,
    init_game, is_terminal, step, toroidal_dist2,
)
from skilldepth.params import MISSILE_BOMB, MISSILE_TWIN

from conftest import make_params

IDLE = DO_NOTHING
SHOOT = Action(turn=0, thrust=False, shoot=True)
THRUST = Action(turn=0, thrust=True, shoot=False)


def run_ticks(state, n, a1=IDLE, a2=IDLE):
    for _ in range(n):
        step(state, a1, a2)
    return state


def test_action_table():
    assert N_ACTIONS == 12
    assert ACTIONS[0] == Action(0, False, False)
    assert len(set(ACTIONS)) == 12
    assert ACTION_INDEX[DO_NOTHING] == 0
    # the passive variant of every turn/thrust pair precedes its shooting twin
    for i, a in enumerate(ACTIONS):
        if a.shoot:
            passive = Action(a.turn, a.thrust, False)
            assert ACTION_INDEX[passive] == i - 1


def test_initial_placement():
    world = WorldConfig()
    st = init_game(make_params(), world, seed=1)
    s1, s2 = st.ships
    assert (s1.x, s1.y) == (160.0, 240.0)
    assert (s2.x, s2.y) == (480.0, 240.0)
    assert s1.heading == 0.0
    assert s2.heading == math.pi
    assert s1.lives == s2.lives == world.start_lives
    assert s1.missiles_left == s2.missiles_left == world.start_missiles
    assert st.tick == 0 and st.missiles == [] and st.resource is None


def test_hole_centers_grid2():
    # 640x480 split 2x2: cells are 320x240, centers at their midpoints
    params = make_params(grid_size=2, blackhole_cells=(1, 0, 0, 1) + (0,) * 12)
    st = init_game(params, WorldConfig(), seed=1)
    assert st.static.hole_centers == ((160.0, 120.0), (480.0, 360.0))


def test_hole_centers_respect_grid_window():
    # flags beyond grid_size^2 never spawn holes
    params = make_params(grid_size=1, blackhole_cells=(0,) + (1,) * 15)
    st = init_game(params, WorldConfig(), seed=1)
    assert st.static.hole_centers == ()


def test_thrust_and_friction():
    st = init_game(make_params(), WorldConfig(), seed=1)
    s1 = st.ships[0]
    step(st, THRUST, IDLE)
    # velocity (v + a) * f, position moves by the new velocity
    assert abs(s1.vx - 0.2 * 0.99) < 1e-12
    assert abs(s1.vy) < 1e-12
    assert abs(s1.x - (160.0 + 0.2 * 0.99)) < 1e-12
    step(st, IDLE, IDLE)
    assert abs(s1.vx - 0.2 * 0.99 * 0.99) < 1e-12


def test_rotation_rate_and_wrap():
    st = init_game(make_params(), WorldConfig(), seed=1)
    s1 = st.ships[0]
    step(st, Action(1, False, False), IDLE)
    assert abs(s1.heading - math.pi / 30) < 1e-12
    run_ticks(st, 59, a1=Action(1, False, False))
    # 60 ticks of pi/30 come back to a full turn
    assert abs(s1.heading) < 1e-9 or abs(s1.heading - 2 * math.pi) < 1e-9


def test_position_wraps_toroidally():
    st = init_game(make_params(), WorldConfig(width=100.0, height=80.0), seed=1)
    s1 = st.ships[0]
    s1.x, s1.y = 99.5, 79.5
    s1.vx, s1.vy = 2.0, 2.0
    step(st, IDLE, IDLE)
    assert 0.0 <= s1.x < 100.0
    assert 0.0 <= s1.y < 80.0


def test_shoot_spawns_missile_at_nose():
    params = make_params(missile_max_speed=7, missile_radius=4,
                         missile_max_ttl=80, missile_cooldown=5)
    st = init_game(params, WorldConfig(), seed=1)
    s1 = st.ships[0]
    step(st, SHOOT, IDLE)
    assert len(st.missiles) == 1
    m = st.missiles[0]
    assert m.owner == 0
    # heading 0: nose is ship_radius to the right
    assert abs(m.x - (160.0 + 10.0)) < 1e-12
    assert abs(m.y - 240.0) < 1e-12
    assert abs(m.vx - 7.0) < 1e-12 and abs(m.vy) < 1e-12
    assert m.ttl == 79            # spawned this tick, already aged once
    assert m.radius == 4.0
    assert s1.missiles_left == 99
    assert s1.shots_fired == 1
    assert s1.cooldown == 4       # set to 5 at the shot, aged once


def test_cooldown_blocks_shots():
    # cooldown 3 at the shot, aged at the end of each tick: the rack is
    # blocked for ticks 2 and 3 and free again on tick 4
    params = make_params(missile_cooldown=3)
    st = init_game(params, WorldConfig(), seed=1)
    s1 = st.ships[0]
    for expected_shots in (1, 1, 1, 2):
        step(st, SHOOT, IDLE)
        assert s1.shots_fired == expected_shots


def test_no_ammo_no_shot():
    st = init_game(make_params(), WorldConfig(start_missiles=0), seed=1)
    step(st, SHOOT, IDLE)
    assert st.missiles == []
    assert st.ships[0].shots_fired == 0


def test_twin_missiles_fork_45_degrees():
    params = make_params(missile_type=MISSILE_TWIN, missile_max_speed=6)
    st = init_game(params, WorldConfig(), seed=1)
    step(st, SHOOT, IDLE)
    assert len(st.missiles) == 2
    assert st.ships[0].missiles_left == 99    # one round, two projectiles
    angles = sorted(math.atan2(m.vy, m.vx) for m in st.missiles)
    assert abs(angles[0] - (-math.pi / 4)) < 1e-12
    assert abs(angles[1] - math.pi / 4) < 1e-12
    for m in st.missiles:
        assert abs(math.hypot(m.vx, m.vy) - 6.0) < 1e-12
        assert m.kind == 0                    # twins fly as normal missiles


def test_direct_hit_scores_and_costs_a_life():
    # p2 sits 30px ahead; missile speed 10, radius 2 reaches it on tick 2:
    # spawn at 110 -> 120, and |130-120| = 10 <= 10+2
    params = make_params(missile_max_speed=10, missile_radius=2)
    world = WorldConfig()
    st = init_game(params, world, seed=1)
    s1, s2 = st.ships
    s1.x, s1.y = 100.0, 100.0
    s2.x, s2.y = 130.0, 100.0
    step(st, SHOOT, IDLE)
    assert s1.score == 0 and len(st.missiles) == 1
    step(st, IDLE, IDLE)
    assert s1.score == world.hit_score
    assert s1.hits == 1
    assert s2.lives == world.start_lives - 1
    assert st.missiles == []


def test_hit_across_the_seam():
    # nearest-image distance: missile just under the right edge hits a ship
    # just past the left edge
    params = make_params(missile_max_speed=1, missile_radius=4)
    world = WorldConfig(width=200.0, height=100.0)
    st = init_game(params, world, seed=1)
    s1, s2 = st.ships
    s1.x, s1.y = 150.0, 80.0    # out of the way
    s2.x, s2.y = 2.0, 50.0
    st.missiles.append(Missile(owner=0, x=195.0, y=50.0, vx=1.0, vy=0.0,
                               ttl=50, kind=0, radius=4.0))
    step(st, IDLE, IDLE)
    # missile moved to 196: gap through the seam is 200-196+2 = 6 <= 14
    assert s1.score == world.hit_score
    assert st.missiles == []


def test_missile_ttl_expires():
    params = make_params(missile_max_ttl=3)
    st = init_game(params, WorldConfig(), seed=1)
    step(st, SHOOT, IDLE)
    assert len(st.missiles) == 1
    run_ticks(st, 2)
    assert st.missiles == []


def test_bomb_blast_hits_both_ships_but_only_scores_on_the_enemy():
    params = make_params(missile_type=MISSILE_BOMB, bomb_radius=50,
                         missile_max_ttl=1, missile_max_speed=1)
    world = WorldConfig()
    st = init_game(params, world, seed=1)
    s1, s2 = st.ships
    s1.x, s1.y = 100.0, 100.0
    s2.x, s2.y = 140.0, 100.0
    step(st, SHOOT, IDLE)
    # ttl 1: the bomb detonates at the end of its spawn tick at x=110;
    # both ships sit within 50px of the blast
    assert st.missiles == []
    assert s1.lives == world.start_lives - 1     # caught own blast
    assert s2.lives == world.start_lives - 1
    assert s1.score == world.hit_score           # enemy damage scores
    assert s1.hits == 1


def test_bomb_detonates_on_contact():
    params = make_params(missile_type=MISSILE_BOMB, bomb_radius=30,
                         missile_max_speed=10, missile_radius=2,
                         missile_max_ttl=100)
    world = WorldConfig()
    st = init_game(params, world, seed=1)
    s1, s2 = st.ships
    s1.x, s1.y = 100.0, 100.0
    s2.x, s2.y = 130.0, 100.0
    step(st, SHOOT, IDLE)
    step(st, IDLE, IDLE)
    assert st.missiles == []
    assert s2.lives == world.start_lives - 1
    assert s1.score == world.hit_score
    # blast at x=120: own ship at 100 is 20px away, inside the 30px blast
    assert s1.lives == world.start_lives - 1


def test_pull_accelerates_toward_center():
    params = make_params(grid_size=1, blackhole_cells=(1,) + (0,) * 15,
                         blackhole_force=2, blackhole_radius=200)
    world = WorldConfig()
    st = init_game(params, world, seed=1)
    s1 = st.ships[0]
    # hole center is the field center (320, 240); ship at 160 gets pulled +x
    step(st, IDLE, IDLE)
    assert s1.vx > 0.0
    assert abs(s1.vy) < 1e-9
    # pull magnitude: force * pullScale toward the center, friction applied
    # to the ship before the pull phase this tick
    assert abs(s1.vx - 2 * world.pull_scale) < 1e-12


def test_no_pull_outside_radius():
    params = make_params(grid_size=1, blackhole_cells=(1,) + (0,) * 15,
                         blackhole_force=3, blackhole_radius=25)
    st = init_game(params, WorldConfig(), seed=1)
    s1 = st.ships[0]
    step(st, IDLE, IDLE)
    assert s1.vx == 0.0 and s1.vy == 0.0


def test_no_pull_exactly_at_center():
    params = make_params(grid_size=1, blackhole_cells=(1,) + (0,) * 15,
                         blackhole_force=3, blackhole_radius=100)
    st = init_game(params, WorldConfig(), seed=1)
    s1 = st.ships[0]
    s1.x, s1.y = 320.0, 240.0
    step(st, IDLE, IDLE)
    assert (s1.vx, s1.vy) == (0.0, 0.0)


def test_penalty_outside_safe_center():
    params = make_params(grid_size=1, blackhole_cells=(1,) + (0,) * 15,
                         blackhole_radius=100, blackhole_penalty=7,
                         safe_zone=20)
    st = init_game(params, WorldConfig(), seed=1)
    s1 = st.ships[0]
    s1.x, s1.y = 320.0 - 50.0, 240.0     # inside hole, outside safe disk
    step(st, IDLE, IDLE)
    assert s1.score == -7
    assert s1.penalized_ticks == 1


def test_safe_disk_shields_the_center():
    params = make_params(grid_size=1, blackhole_cells=(1,) + (0,) * 15,
                         blackhole_radius=100, blackhole_penalty=7,
                         safe_zone=20)
    st = init_game(params, WorldConfig(), seed=1)
    s1 = st.ships[0]
    s1.x, s1.y = 320.0 - 15.0, 240.0     # within the 20px safe disk
    step(st, IDLE, IDLE)
    assert s1.score == 0


def test_safe_band_at_rim_mode():
    params = make_params(grid_size=1, blackhole_cells=(1,) + (0,) * 15,
                         blackhole_radius=100, blackhole_penalty=3,
                         safe_zone=20)
    world = WorldConfig(safe_zone_at_center=False)
    st = init_game(params, world, seed=1)
    s1 = st.ships[0]
    s1.x, s1.y = 320.0 - 90.0, 240.0     # near the rim: safe in this mode
    step(st, IDLE, IDLE)
    assert s1.score == 0
    s1.x, s1.y = 320.0 - 50.0, 240.0     # deep inside: penalized
    step(st, IDLE, IDLE)
    assert s1.score == -3


def test_one_penalty_per_tick_with_overlapping_holes():
    # grid 2 with all four holes at radius 200 overlaps everything; the
    # penalty still lands once per tick
    params = make_params(grid_size=2, blackhole_cells=(1, 1, 1, 1) + (0,) * 12,
                         blackhole_radius=200, blackhole_penalty=5)
    st = init_game(params, WorldConfig(), seed=1)
    s1 = st.ships[0]
    step(st, IDLE, IDLE)
    assert s1.score == -5
    assert s1.penalized_ticks == 1


def test_resource_spawns_after_cooldown_and_is_picked_up():
    params = make_params(resource_cooldown=5, resource_ttl=400)
    world = WorldConfig()
    st = init_game(params, world, seed=9)
    run_ticks(st, 4)
    assert st.resource is None
    run_ticks(st, 1)
    assert st.resource is not None
    x, y, ttl = st.resource
    assert 0.0 <= x < world.width and 0.0 <= y < world.height
    assert ttl == 400.0
    s1 = st.ships[0]
    s1.x, s1.y = x, y
    before = s1.missiles_left
    step(st, IDLE, IDLE)
    assert s1.missiles_left == before + world.pack_size
    assert s1.packs_collected == 1
    assert st.resource is None
    assert st.respawn_countdown == 5


def test_resource_expires_without_pickup():
    params = make_params(resource_cooldown=2, resource_ttl=3)
    st = init_game(params, WorldConfig(), seed=9)
    run_ticks(st, 2)
    assert st.resource is not None
    # park the ships half a torus away from the pickup
    for ship in st.ships:
        ship.x = (st.resource[0] + 320.0) % 640.0
        ship.y = (st.resource[1] + 240.0) % 480.0
    run_ticks(st, 3)
    assert st.resource is None
    assert st.respawn_countdown == 2


def test_hundred_hits_make_ten_thousand_points():
    # p1 fires every other tick at a stationary target until the ammo rack
    # is empty: exactly 100 hits, 100 * hitScore points
    params = make_params(missile_max_speed=10, missile_radius=2,
                         missile_cooldown=1)
    world = WorldConfig()
    st = init_game(params, world, seed=1)
    s1, s2 = st.ships
    s1.x, s1.y = 100.0, 100.0
    s2.x, s2.y = 130.0, 100.0
    while s1.missiles_left > 0 or st.missiles:
        step(st, SHOOT, IDLE)
        if is_terminal(st) is not None:
            break
    assert s1.shots_fired == 100
    assert s1.hits == 100
    assert s1.score == 10_000
    assert s2.lives == world.start_lives - 100
    assert s1.missiles_left + s1.shots_fired == world.start_missiles


def test_conservation_across_random_games(fast_world):
    # ammo bookkeeping and the score identity hold whatever happens
    rng = random.Random(23)
    for trial in range(6):
        params = make_params(
            missile_max_speed=rng.randrange(1, 11),
            missile_cooldown=rng.randrange(1, 5),
            missile_type=rng.choice((0, 1, 2)),
            grid_size=2,
            blackhole_cells=tuple(rng.randrange(2) for _ in range(16)),
            blackhole_radius=50, blackhole_force=rng.randrange(4),
            blackhole_penalty=rng.randrange(10),
            resource_cooldown=10, resource_ttl=400)
        st = init_game(params, fast_world, seed=trial)
        while is_terminal(st) is None:
            step(st, ACTIONS[rng.randrange(N_ACTIONS)],
                 ACTIONS[rng.randrange(N_ACTIONS)])
        for ship in st.ships:
            assert (ship.missiles_left + ship.shots_fired
                    - fast_world.pack_size * ship.packs_collected
                    == fast_world.start_missiles)
            assert (ship.score == fast_world.hit_score * ship.hits
                    - params.blackhole_penalty * ship.penalized_ticks)


def test_terminal_by_tick_limit_is_a_draw_without_scores():
    st = init_game(make_params(), WorldConfig(max_ticks=5), seed=1)
    run_ticks(st, 5)
    out = is_terminal(st)
    assert out is not None
    assert out.winner is None
    assert out.scores == (0, 0)
    assert out.ticks == 5


def test_terminal_by_lives_awards_the_higher_score():
    params = make_params(missile_max_speed=10, missile_radius=2)
    world = WorldConfig(start_lives=1)
    st = init_game(params, world, seed=1)
    s1, s2 = st.ships
    s1.x, s1.y = 100.0, 100.0
    s2.x, s2.y = 130.0, 100.0
    step(st, SHOOT, IDLE)
    step(st, IDLE, IDLE)
    out = is_terminal(st)
    assert out is not None
    assert out.winner == 1
    assert out.scores == (100, 0)
    assert out.lives == (1, 0)


def test_stepping_a_terminal_state_is_an_error():
    st = init_game(make_params(), WorldConfig(max_ticks=1), seed=1)
    step(st, IDLE, IDLE)
    with pytest.raises(AssertionError):
        step(st, IDLE, IDLE)


def test_same_seed_same_stream():
    params = make_params(grid_size=2, blackhole_cells=(1, 0, 1, 0) + (0,) * 12,
                         blackhole_force=2, blackhole_radius=100,
                         missile_type=MISSILE_TWIN, resource_cooldown=10)
    world = WorldConfig(width=200.0, height=150.0)

    def play(seed):
        st = init_game(params, world, seed)
        rng = random.Random(77)
        frames = []
        for _ in range(150):
            step(st, ACTIONS[rng.randrange(N_ACTIONS)],
                 ACTIONS[rng.randrange(N_ACTIONS)])
            frames.append(st.snapshot())
        return frames

    assert play(123) == play(123)
    a, b = play(123), play(456)
    assert a != b        # resource spawns differ between seeds


def test_copy_is_independent():
    params = make_params(resource_cooldown=5, missile_type=MISSILE_TWIN)
    st = init_game(params, WorldConfig(), seed=3)
    run_ticks(st, 8, a1=SHOOT, a2=SHOOT)
    clone = st.copy()
    before = clone.snapshot()
    run_ticks(st, 20, a1=SHOOT, a2=THRUST)
    assert clone.snapshot() == before
    # and the clone can continue on its own
    run_ticks(clone, 3)
    assert clone.tick == st.tick - 17


def test_snapshot_reports_owners_one_based():
    st = init_game(make_params(), WorldConfig(), seed=1)
    step(st, SHOOT, SHOOT)
    snap = st.snapshot()
    assert sorted(m["owner"] for m in snap["missiles"]) == [1, 2]


def test_toroidal_dist2_helper():
    world = WorldConfig(width=100.0, height=80.0)
    assert toroidal_dist2(1.0, 1.0, 99.0, 79.0, world) == 8.0   # 2^2 + 2^2
    assert toroidal_dist2(10.0, 10.0, 13.0, 14.0, world) == 25.0

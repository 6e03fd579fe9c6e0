"""Deterministic two-ship duel on a wrapping 640x480 field.

The simulation is the forward model for every agent, so step() is written for
speed: flat attribute access, squared distances, no allocation beyond missile
spawns. All randomness (only the resource respawn position) comes from a
splitmix64 counter embedded in the state, which makes copies cheap and replays
exact on any platform.

Geometry is toroidal throughout: movement wraps, and distances use the nearest
image, so objects near opposite edges interact as the player sees them.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

from .params import GameParams, MISSILE_BOMB, MISSILE_TWIN

_cos = math.cos
_sin = math.sin
_sqrt = math.sqrt


@dataclass(frozen=True)
class WorldConfig:
    width: float = 640.0
    height: float = 480.0
    max_ticks: int = 2000
    start_lives: int = 1000
    start_missiles: int = 100
    win_bonus: int = 1000
    score_divisor: int = 100
    hit_score: int = 100
    rotation_rate: float = math.pi / 30
    thrust_accel: float = 0.2
    friction: float = 0.99
    ship_radius: float = 10.0
    resource_radius: float = 10.0
    pack_size: int = 20
    pull_scale: float = 0.05       # black-hole accel = force * pull_scale, px/tick^2
    safe_zone_at_center: bool = True   # False puts the safe band at the rim instead

    def replace(self, **kw) -> "WorldConfig":
        from dataclasses import replace as _replace
        return _replace(self, **kw)


@dataclass(frozen=True)
class Action:
    turn: int = 0          # -1 anticlockwise, 0 none, 1 clockwise
    thrust: bool = False
    shoot: bool = False


# Fixed action order; ties in agents break toward the lowest index, so the
# passive variant of any turn/thrust combination sits before its shooting twin.
ACTIONS: tuple[Action, ...] = tuple(
    Action(turn, thrust, shoot)
    for turn in (0, 1, -1)
    for thrust in (False, True)
    for shoot in (False, True)
)
ACTION_INDEX = {a: i for i, a in enumerate(ACTIONS)}
DO_NOTHING = ACTIONS[0]
N_ACTIONS = len(ACTIONS)


@dataclass(frozen=True)
class Outcome:
    winner: Optional[int]  # 1, 2, or None for a draw
    scores: tuple[int, int]
    lives: tuple[int, int]
    ticks: int


class Ship:
    __slots__ = (
        "x", "y", "vx", "vy", "heading", "lives", "missiles_left", "score",
        "cooldown", "shots_fired", "hits", "packs_collected", "penalized_ticks",
    )

    def __init__(self, x: float, y: float, heading: float, lives: int, missiles: int):
        self.x = x
        self.y = y
        self.vx = 0.0
        self.vy = 0.0
        self.heading = heading
        self.lives = lives
        self.missiles_left = missiles
        self.score = 0
        self.cooldown = 0
        self.shots_fired = 0
        self.hits = 0
        self.packs_collected = 0
        self.penalized_ticks = 0

    def copy(self) -> "Ship":
        s = Ship.__new__(Ship)
        s.x = self.x
        s.y = self.y
        s.vx = self.vx
        s.vy = self.vy
        s.heading = self.heading
        s.lives = self.lives
        s.missiles_left = self.missiles_left
        s.score = self.score
        s.cooldown = self.cooldown
        s.shots_fired = self.shots_fired
        s.hits = self.hits
        s.packs_collected = self.packs_collected
        s.penalized_ticks = self.penalized_ticks
        return s


class Missile:
    __slots__ = ("owner", "x", "y", "vx", "vy", "ttl", "kind", "radius")

    def __init__(self, owner: int, x: float, y: float, vx: float, vy: float,
                 ttl: int, kind: int, radius: float):
        self.owner = owner
        self.x = x
        self.y = y
        self.vx = vx
        self.vy = vy
        self.ttl = ttl
        self.kind = kind
        self.radius = radius

    def copy(self) -> "Missile":
        m = Missile.__new__(Missile)
        m.owner = self.owner
        m.x = self.x
        m.y = self.y
        m.vx = self.vx
        m.vy = self.vy
        m.ttl = self.ttl
        m.kind = self.kind
        m.radius = self.radius
        return m


@dataclass(frozen=True)
class GameStatic:
    """Per-game constants shared by every copy of a state."""

    params: GameParams
    world: WorldConfig
    hole_centers: tuple[tuple[float, float], ...]
    hole_r2: float
    safe_r2: float           # meaning depends on safe_zone_at_center
    pull_accel: float


def _hole_centers(params: GameParams, world: WorldConfig) -> tuple[tuple[float, float], ...]:
    g = params.grid_size
    cw = world.width / g
    ch = world.height / g
    centers = []
    flags = params.expressed_cells()
    for i, flag in enumerate(flags):
        if flag:
            row, col = divmod(i, g)
            centers.append(((col + 0.5) * cw, (row + 0.5) * ch))
    return tuple(centers)


class GameState:
    __slots__ = ("static", "tick", "ships", "missiles", "resource",
                 "respawn_countdown", "rng_state")

    def __init__(self, static: GameStatic, seed: int):
        world = static.world
        self.static = static
        self.tick = 0
        self.ships = [
            Ship(world.width * 0.25, world.height * 0.5, 0.0,
                 world.start_lives, world.start_missiles),
            Ship(world.width * 0.75, world.height * 0.5, math.pi,
                 world.start_lives, world.start_missiles),
        ]
        self.missiles: list[Missile] = []
        self.resource: Optional[list[float]] = None   # [x, y, ttl]
        self.respawn_countdown = static.params.resource_cooldown
        self.rng_state = seed & 0xFFFFFFFFFFFFFFFF

    def copy(self) -> "GameState":
        st = GameState.__new__(GameState)
        st.static = self.static
        st.tick = self.tick
        st.ships = [self.ships[0].copy(), self.ships[1].copy()]
        st.missiles = [m.copy() for m in self.missiles]
        st.resource = None if self.resource is None else list(self.resource)
        st.respawn_countdown = self.respawn_countdown
        st.rng_state = self.rng_state
        return st

    def next_unit_float(self) -> float:
        """splitmix64 step, mapped to [0, 1)."""
        self.rng_state = (self.rng_state + 0x9E3779B97F4A7C15) & 0xFFFFFFFFFFFFFFFF
        z = self.rng_state
        z = ((z ^ (z >> 30)) * 0xBF58476D1CE4E5B9) & 0xFFFFFFFFFFFFFFFF
        z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & 0xFFFFFFFFFFFFFFFF
        z = z ^ (z >> 31)
        return z / 18446744073709551616.0

    def snapshot(self) -> dict:
        """Flat, ordered, numeric view of the state; the replay/golden format."""
        return {
            "tick": self.tick,
            "ships": [
                {
                    "x": s.x, "y": s.y, "vx": s.vx, "vy": s.vy,
                    "heading": s.heading, "lives": s.lives,
                    "missilesLeft": s.missiles_left, "score": s.score,
                    "cooldown": s.cooldown,
                }
                for s in self.ships
            ],
            "missiles": [
                {"owner": m.owner + 1, "x": m.x, "y": m.y, "vx": m.vx,
                 "vy": m.vy, "ttl": m.ttl, "kind": m.kind, "radius": m.radius}
                for m in self.missiles
            ],
            "blackHoles": [
                {"x": cx, "y": cy,
                 "radius": self.static.params.blackhole_radius,
                 "safeZone": self.static.params.safe_zone}
                for cx, cy in self.static.hole_centers
            ],
            "resource": (
                None if self.resource is None
                else {"x": self.resource[0], "y": self.resource[1],
                      "ttl": int(self.resource[2])}
            ),
            "respawnCountdown": self.respawn_countdown,
            "rngState": self.rng_state,
        }


def init_game(params: GameParams, world: WorldConfig, seed: int) -> GameState:
    r = float(params.blackhole_radius)
    if world.safe_zone_at_center:
        safe = float(params.safe_zone)
    else:
        safe = max(0.0, r - params.safe_zone)
    static = GameStatic(
        params=params,
        world=world,
        hole_centers=_hole_centers(params, world),
        hole_r2=r * r,
        safe_r2=safe * safe,
        pull_accel=params.blackhole_force * world.pull_scale,
    )
    return GameState(static, seed)


def is_terminal(state: GameState) -> Optional[Outcome]:
    s1, s2 = state.ships
    if s1.lives > 0 and s2.lives > 0 and state.tick < state.static.world.max_ticks:
        return None
    if s1.score > s2.score:
        winner: Optional[int] = 1
    elif s2.score > s1.score:
        winner = 2
    else:
        winner = None
    return Outcome(winner=winner, scores=(s1.score, s2.score),
                   lives=(s1.lives, s2.lives), ticks=state.tick)


def _explode(state: GameState, owner: int, x: float, y: float) -> None:
    st = state.static
    blast = float(st.params.bomb_radius)
    w, h = st.world.width, st.world.height
    half_w, half_h = w * 0.5, h * 0.5
    for idx, ship in enumerate(state.ships):
        dx = ship.x - x
        dy = ship.y - y
        if dx > half_w:
            dx -= w
        elif dx < -half_w:
            dx += w
        if dy > half_h:
            dy -= h
        elif dy < -half_h:
            dy += h
        if dx * dx + dy * dy <= blast * blast:
            if ship.lives > 0:
                ship.lives -= 1
            if idx != owner:
                own = state.ships[owner]
                own.score += st.world.hit_score
                own.hits += 1


def step(state: GameState, a1: Action, a2: Action) -> GameState:
    """Advance one tick in place and return the state.

    Phase order is fixed: rotation, movement, shooting, black-hole pull,
    collisions, black-hole penalty, resource, missile TTL, tick. Stepping a
    terminal state is a caller bug.
    """
    assert is_terminal(state) is None, "stepped a terminal state"
    st = state.static
    params = st.params
    world = st.world
    w, h = world.width, world.height
    half_w, half_h = w * 0.5, h * 0.5
    ships = state.ships
    actions = (a1, a2)

    # rotation, thrust, friction, movement
    rot = world.rotation_rate
    accel = world.thrust_accel
    fric = world.friction
    tau = 2.0 * math.pi
    for ship, act in zip(ships, actions):
        if act.turn:
            ship.heading = (ship.heading + act.turn * rot) % tau
        if act.thrust:
            ship.vx += accel * _cos(ship.heading)
            ship.vy += accel * _sin(ship.heading)
        ship.vx *= fric
        ship.vy *= fric
        ship.x = (ship.x + ship.vx) % w
        ship.y = (ship.y + ship.vy) % h
    for m in state.missiles:
        m.x = (m.x + m.vx) % w
        m.y = (m.y + m.vy) % h

    # shooting
    for pid, (ship, act) in enumerate(zip(ships, actions)):
        if act.shoot and ship.cooldown == 0 and ship.missiles_left > 0:
            ship.missiles_left -= 1
            ship.shots_fired += 1
            ship.cooldown = params.missile_cooldown
            speed = float(params.missile_max_speed)
            mr = float(params.missile_radius)
            ttl = params.missile_max_ttl
            nose = world.ship_radius
            if params.missile_type == MISSILE_TWIN:
                for da in (math.pi / 4, -math.pi / 4):
                    ang = ship.heading + da
                    c, s = _cos(ang), _sin(ang)
                    state.missiles.append(Missile(
                        pid, (ship.x + nose * c) % w, (ship.y + nose * s) % h,
                        speed * c, speed * s, ttl, 0, mr))
            else:
                kind = MISSILE_BOMB if params.missile_type == MISSILE_BOMB else 0
                c, s = _cos(ship.heading), _sin(ship.heading)
                state.missiles.append(Missile(
                    pid, (ship.x + nose * c) % w, (ship.y + nose * s) % h,
                    speed * c, speed * s, ttl, kind, mr))

    # black-hole pull: constant-magnitude acceleration toward each centre,
    # applied to ships and missiles inside the radius
    if st.hole_centers and st.pull_accel > 0.0:
        pull = st.pull_accel
        r2 = st.hole_r2
        centers = st.hole_centers
        for obj in ships + state.missiles:
            ox = obj.x
            oy = obj.y
            dvx = 0.0
            dvy = 0.0
            for cx, cy in centers:
                dx = cx - ox
                dy = cy - oy
                if dx > half_w:
                    dx -= w
                elif dx < -half_w:
                    dx += w
                if dy > half_h:
                    dy -= h
                elif dy < -half_h:
                    dy += h
                d2 = dx * dx + dy * dy
                if 0.0 < d2 <= r2:
                    d = _sqrt(d2)
                    dvx += pull * dx / d
                    dvy += pull * dy / d
            if dvx or dvy:
                obj.vx += dvx
                obj.vy += dvy

    # collisions: a missile touching the other ship lands a hit; bombs blast
    # an area instead and can catch their owner
    if state.missiles:
        ship_r = world.ship_radius
        hit_score = world.hit_score
        survivors = []
        for m in state.missiles:
            target = ships[1 - m.owner]
            dx = target.x - m.x
            dy = target.y - m.y
            if dx > half_w:
                dx -= w
            elif dx < -half_w:
                dx += w
            if dy > half_h:
                dy -= h
            elif dy < -half_h:
                dy += h
            reach = ship_r + m.radius
            if dx * dx + dy * dy <= reach * reach:
                if m.kind == MISSILE_BOMB:
                    _explode(state, m.owner, m.x, m.y)
                else:
                    if target.lives > 0:
                        target.lives -= 1
                    owner = ships[m.owner]
                    owner.score += hit_score
                    owner.hits += 1
            else:
                survivors.append(m)
        state.missiles = survivors

    # black-hole penalty: once per tick if inside any hole's zone and outside
    # that hole's safe region
    if st.hole_centers:
        r2 = st.hole_r2
        safe2 = st.safe_r2
        at_center = world.safe_zone_at_center
        penalty = params.blackhole_penalty
        for ship in ships:
            for cx, cy in st.hole_centers:
                dx = cx - ship.x
                dy = cy - ship.y
                if dx > half_w:
                    dx -= w
                elif dx < -half_w:
                    dx += w
                if dy > half_h:
                    dy -= h
                elif dy < -half_h:
                    dy += h
                d2 = dx * dx + dy * dy
                if d2 <= r2 and ((d2 > safe2) if at_center else (d2 <= safe2)):
                    ship.score -= penalty
                    ship.penalized_ticks += 1
                    break

    # resource: pickup, expiry, respawn
    if state.resource is not None:
        res = state.resource
        taken = False
        reach = world.ship_radius + world.resource_radius
        for ship in ships:
            dx = res[0] - ship.x
            dy = res[1] - ship.y
            if dx > half_w:
                dx -= w
            elif dx < -half_w:
                dx += w
            if dy > half_h:
                dy -= h
            elif dy < -half_h:
                dy += h
            if dx * dx + dy * dy <= reach * reach:
                ship.missiles_left += world.pack_size
                ship.packs_collected += 1
                taken = True
                break
        if taken:
            state.resource = None
            state.respawn_countdown = params.resource_cooldown
        else:
            res[2] -= 1
            if res[2] <= 0:
                state.resource = None
                state.respawn_countdown = params.resource_cooldown
    else:
        state.respawn_countdown -= 1
        if state.respawn_countdown <= 0:
            state.resource = [state.next_unit_float() * w,
                              state.next_unit_float() * h,
                              float(params.resource_ttl)]

    # missile ageing; bombs blow up when the fuse runs out
    aged = []
    for m in state.missiles:
        m.ttl -= 1
        if m.ttl <= 0:
            if m.kind == MISSILE_BOMB:
                _explode(state, m.owner, m.x, m.y)
        else:
            aged.append(m)
    state.missiles = aged

    for ship in ships:
        if ship.cooldown:
            ship.cooldown -= 1

    state.tick += 1
    return state


def toroidal_dist2(ax: float, ay: float, bx: float, by: float,
                   world: WorldConfig) -> float:
    dx = bx - ax
    dy = by - ay
    if dx > world.width * 0.5:
        dx -= world.width
    elif dx < -world.width * 0.5:
        dx += world.width
    if dy > world.height * 0.5:
        dy -= world.height
    elif dy < -world.height * 0.5:
        dy += world.height
    return dx * dx + dy * dy

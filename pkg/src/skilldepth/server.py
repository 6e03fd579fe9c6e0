"""Session service for human play against evolved rule sets.

One WebSocket per session. The client opens with a start frame naming the
genome, its side and the enemy agent; the server then streams state frames
and consumes action frames with latest-wins coalescing. Scripted clients may
request lockstep mode, where the game advances exactly one tick per action
frame instead of on a timer, which makes round trips fully deterministic.

Frames, client to server:
    {"type": "start", "genome": [30 ints], "humanSide": 1|2,
     "enemy": 0..5?, "seed": int?, "lockstep": bool?}
    {"type": "action", "turn": -1|0|1, "thrust": bool, "shoot": bool}
    {"type": "resume", "sessionId": str}
Frames, server to client:
    {"type": "session", "id": str}
    {"type": "state", ...}          one per tick
    {"type": "result", "winner": 0|1|2}
    {"type": "error", "message": str}
"""

from __future__ import annotations

import asyncio
import csv
import os
import time
import uuid
from dataclasses import dataclass, field
from random import Random
from typing import Optional

from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from .agents import AgentBudgets, act
from .game import Action, DO_NOTHING, GameState, WorldConfig, init_game, is_terminal, step
from .params import Genome, default_search_space, decode
from .seeds import derive_seed

PLAYTEST_BUDGETS = AgentBudgets(mcts_iterations=100)
DEFAULT_TICK_INTERVAL = 0.04


@dataclass
class Session:
    id: str
    state: GameState
    human: int               # 1 or 2
    enemy_id: int
    enemy_rng: Random
    lockstep: bool
    pending: Optional[Action] = None
    parked_until: Optional[float] = None
    ticker: Optional[asyncio.Task] = None
    finished: bool = False


@dataclass
class ServerContext:
    world: WorldConfig
    budgets: AgentBudgets
    tick_interval: float
    grace_seconds: float
    results_dir: Optional[str]
    sessions: dict[str, Session] = field(default_factory=dict)


def state_frame(state: GameState) -> dict:
    params = state.static.params
    s1, s2 = state.ships
    return {
        "type": "state",
        "tick": state.tick,
        "ships": [
            {"x": s.x, "y": s.y, "vx": s.vx, "vy": s.vy, "heading": s.heading}
            for s in (s1, s2)
        ],
        "missiles": [
            {"x": m.x, "y": m.y, "radius": m.radius, "kind": m.kind,
             "owner": m.owner + 1}
            for m in state.missiles
        ],
        "blackHoles": [
            {"x": cx, "y": cy, "radius": params.blackhole_radius,
             "safeZone": params.safe_zone}
            for cx, cy in state.static.hole_centers
        ],
        "resource": (
            None if state.resource is None
            else {"x": state.resource[0], "y": state.resource[1]}
        ),
        "scores": [s1.score, s2.score],
        "lives": [s1.lives, s2.lives],
        "missilesLeft": [s1.missiles_left, s2.missiles_left],
    }


def parse_action(msg: dict) -> Optional[Action]:
    turn = msg.get("turn")
    thrust = msg.get("thrust")
    shoot = msg.get("shoot")
    if turn not in (-1, 0, 1):
        return None
    if not isinstance(thrust, bool) or not isinstance(shoot, bool):
        return None
    return Action(turn=turn, thrust=thrust, shoot=shoot)


def session_tick(ctx: ServerContext, sess: Session) -> dict:
    """Advance one tick: latest human action (no-op if none) vs the enemy."""
    human_action = sess.pending if sess.pending is not None else DO_NOTHING
    sess.pending = None
    enemy_player = 2 if sess.human == 1 else 1
    enemy_action = act(sess.enemy_id, sess.state, enemy_player, ctx.budgets,
                       sess.enemy_rng)
    if sess.human == 1:
        step(sess.state, human_action, enemy_action)
    else:
        step(sess.state, enemy_action, human_action)
    return state_frame(sess.state)


def load_game_list(results_dir: Optional[str]) -> list[dict]:
    """Evolved genomes from a results directory, best first."""
    if not results_dir:
        return []
    path = os.path.join(results_dir, "summaries.csv")
    if not os.path.exists(path):
        return []
    rows = []
    with open(path, encoding="utf8", newline="") as fh:
        for row in csv.DictReader(fh):
            rows.append({
                "id": f"{row['algo']}-{int(row['trial']):03d}",
                "algo": row["algo"],
                "meanFitness": float(row["mean"]),
                "genome": [int(tok) for tok in row["genome"].split(",")],
            })
    rows.sort(key=lambda r: (-r["meanFitness"], r["id"]))
    return rows


def create_app(results_dir: Optional[str] = None,
               world: Optional[WorldConfig] = None,
               budgets: Optional[AgentBudgets] = None,
               tick_interval: float = DEFAULT_TICK_INTERVAL,
               grace_seconds: float = 60.0,
               ui_dir: Optional[str] = None) -> FastAPI:
    ctx = ServerContext(
        world=world or WorldConfig(),
        budgets=budgets or PLAYTEST_BUDGETS,
        tick_interval=tick_interval,
        grace_seconds=grace_seconds,
        results_dir=results_dir,
    )
    app = FastAPI(title="skilldepth playtest")
    app.state.ctx = ctx
    space = default_search_space()

    @app.get("/games")
    def games() -> list[dict]:
        return load_game_list(ctx.results_dir)

    def build_session(msg: dict) -> Session | str:
        genome_levels = msg.get("genome")
        if (not isinstance(genome_levels, list)
                or len(genome_levels) != space.n_genes
                or not all(isinstance(v, int) and not isinstance(v, bool)
                           for v in genome_levels)):
            return "genome must be a list of 30 integer levels"
        genome = Genome(tuple(genome_levels))
        try:
            genome.validate(space)
        except ValueError as exc:
            return str(exc)
        human = msg.get("humanSide")
        if human not in (1, 2):
            return "humanSide must be 1 or 2"
        params = decode(genome, space)
        enemy = msg.get("enemy", params.enemy_id)
        if enemy not in range(6):
            return "enemy must be 0..5"
        seed = msg.get("seed", uuid.uuid4().int & 0xFFFFFFFF)
        if not isinstance(seed, int):
            return "seed must be an integer"
        state = init_game(params, ctx.world, derive_seed(seed, "game"))
        sess = Session(
            id=uuid.uuid4().hex,
            state=state,
            human=human,
            enemy_id=enemy,
            enemy_rng=Random(derive_seed(seed, "enemy")),
            lockstep=bool(msg.get("lockstep", False)),
        )
        ctx.sessions[sess.id] = sess
        return sess

    def purge_parked() -> None:
        now = time.monotonic()
        for sid in [sid for sid, s in ctx.sessions.items()
                    if s.parked_until is not None and s.parked_until < now]:
            del ctx.sessions[sid]

    async def finish(ws: WebSocket, sess: Session) -> None:
        out = is_terminal(sess.state)
        assert out is not None
        sess.finished = True
        ctx.sessions.pop(sess.id, None)
        await ws.send_json({"type": "result", "winner": out.winner or 0})

    async def run_timer(ws: WebSocket, sess: Session) -> None:
        try:
            while is_terminal(sess.state) is None:
                await asyncio.sleep(ctx.tick_interval)
                frame = session_tick(ctx, sess)
                await ws.send_json(frame)
            await finish(ws, sess)
        except (WebSocketDisconnect, RuntimeError):
            pass  # reader side handles parking

    @app.websocket("/play")
    async def play(ws: WebSocket) -> None:
        await ws.accept()
        purge_parked()
        sess: Optional[Session] = None
        try:
            while True:
                msg = await ws.receive_json()
                if not isinstance(msg, dict):
                    await ws.send_json({"type": "error", "message": "bad frame"})
                    continue
                kind = msg.get("type")
                if kind == "start":
                    if sess is not None:
                        await ws.send_json({"type": "error",
                                            "message": "session already started"})
                        continue
                    built = build_session(msg)
                    if isinstance(built, str):
                        await ws.send_json({"type": "error", "message": built})
                        continue
                    sess = built
                    await ws.send_json({"type": "session", "id": sess.id})
                    await ws.send_json(state_frame(sess.state))
                    if not sess.lockstep:
                        sess.ticker = asyncio.create_task(run_timer(ws, sess))
                elif kind == "resume":
                    candidate = ctx.sessions.get(msg.get("sessionId", ""))
                    if candidate is None or candidate.finished:
                        await ws.send_json({"type": "error",
                                            "message": "no such session"})
                        continue
                    sess = candidate
                    sess.parked_until = None
                    await ws.send_json({"type": "session", "id": sess.id})
                    await ws.send_json(state_frame(sess.state))
                    if not sess.lockstep:
                        sess.ticker = asyncio.create_task(run_timer(ws, sess))
                elif kind == "action":
                    if sess is None:
                        await ws.send_json({"type": "error",
                                            "message": "no session"})
                        continue
                    action = parse_action(msg)
                    if action is None:
                        await ws.send_json({"type": "error",
                                            "message": "bad action"})
                        continue
                    if sess.lockstep:
                        if is_terminal(sess.state) is not None:
                            await ws.send_json({"type": "error",
                                                "message": "game over"})
                            continue
                        sess.pending = action
                        frame = session_tick(ctx, sess)
                        await ws.send_json(frame)
                        if is_terminal(sess.state) is not None:
                            await finish(ws, sess)
                    else:
                        sess.pending = action
                else:
                    await ws.send_json({"type": "error",
                                        "message": f"unknown frame {kind!r}"})
        except WebSocketDisconnect:
            if sess is not None and not sess.finished:
                if sess.ticker is not None:
                    sess.ticker.cancel()
                    sess.ticker = None
                sess.parked_until = time.monotonic() + ctx.grace_seconds

    if ui_dir and os.path.isdir(ui_dir):
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=ui_dir, html=True), name="ui")

    return app

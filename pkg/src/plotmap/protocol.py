"""Line-delimited JSON message protocol driving maps, tasks, and solvers.

One session owns at most one live environment. Every request produces
exactly one response echoing its id; streaming commands additionally emit
event objects (no id) before the final response. The same messages travel
over stdio, TCP, and WebSocket transports (see server.py).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from . import taskgen
from .env import ACTUAL_CONCURRENT, EnvConfig, LayoutEnv, SIMULATED_CONCURRENT
from .errors import (
    InvalidInputError,
    MissingReferenceError,
    PlotmapError,
)
from .mapindex import MapIndex
from .solvers import PolicySpec, anneal_solve, make_policy
from .taskgen import Task
from .worldgen import generate_map, load_map, map_from_dict
from .worldgen.types import MapGenConfig, WorldMap

PROTO_FORMAT = "plotmap-proto/1"

ERROR_CODES = (
    "invalid-config",
    "invalid-layout",
    "missing-reference",
    "episode-finished",
    "capacity",
    "generation-failed",
    "invalid-input",
)

COMMANDS = (
    "reset", "step", "step_joint", "set_pos", "solve", "get_state",
    "load_task", "render",
)


@dataclass
class SessionState:
    world: WorldMap | None = None
    index: MapIndex | None = None
    task: Task | None = None
    env: LayoutEnv | None = None
    last_breakdown: dict | None = None
    env_config: EnvConfig = field(default_factory=EnvConfig)
    # Entropy for reset requests that carry no seed of their own; seeded per
    # session so identical command streams give identical responses.
    default_seed: int = 0
    rng: np.random.Generator | None = None

    def session_rng(self) -> np.random.Generator:
        if self.rng is None:
            self.rng = np.random.default_rng(self.default_seed)
        return self.rng


def _state_payload(session: SessionState) -> dict:
    env = session.env
    breakdown = env.compute_reward()
    session.last_breakdown = {
        "scores": breakdown.scores,
        "satisfied": [f == 1.0 for f in breakdown.satisfied_flags],
        "reward": breakdown.reward,
        "all_satisfied": breakdown.all_satisfied,
    }
    return {
        "positions": {fid: list(p) for fid, p in env.positions.items()},
        "scores": breakdown.scores,
        "satisfied": [f == 1.0 for f in breakdown.satisfied_flags],
        "all_satisfied": breakdown.all_satisfied,
        "step_count": env.step_count,
        "turn_index": env.turn_index,
        "done": env.done,
        "constraints": [c.to_dict() for c in session.task.constraints],
    }


def _require_env(session: SessionState) -> LayoutEnv:
    if session.env is None or not session.env._started:
        raise InvalidInputError("no active environment; send load_task then reset")
    return session.env


def _load_world(payload: dict) -> WorldMap:
    if "map_json" in payload:
        return map_from_dict(payload["map_json"])
    if "map_path" in payload:
        return load_map(payload["map_path"])
    if "map_seed" in payload:
        cfg = MapGenConfig(seed=int(payload["map_seed"]),
                           cell_count=int(payload.get("map_cells", 1000)))
        return generate_map(cfg)
    raise InvalidInputError("load_task needs map_json, map_path, or map_seed")


def _cmd_load_task(session: SessionState, payload: dict) -> dict:
    if payload.get("demo"):
        world, task = taskgen_demo()
    else:
        if "task_json" in payload:
            task = Task.from_dict(payload["task_json"])
        elif "task_path" in payload:
            doc = json.loads(Path(payload["task_path"]).read_text())
            task = Task.from_dict(doc)
        else:
            raise InvalidInputError("load_task needs task_json, task_path, or demo")
        world = _load_world(payload)
    mode = payload.get("movement_mode", SIMULATED_CONCURRENT)
    horizon = int(payload.get("horizon", 200))
    max_step = float(payload.get("max_step_length", 0.05))
    session.env_config = EnvConfig(horizon=horizon, max_step_length=max_step,
                                   movement_mode=mode)
    session.world = world
    session.index = MapIndex(world)
    session.task = task
    session.env = LayoutEnv(task, world, session.env_config, index=session.index)
    from .worldgen.types import PALETTE
    return {
        "task_id": task.task_id,
        "map_id": world.map_id,
        "facilities": [{"id": fid, "name": name} for fid, name in task.facilities],
        "constraints": [c.to_dict() for c in task.constraints],
        "palette": {b.value: list(rgb) for b, rgb in PALETTE.items()},
        "cells": [
            {"id": c.id, "vertices": [list(v) for v in c.vertices],
             "biome": c.biome.value, "elevation": c.elevation}
            for c in world.cells
        ],
        "rivers": [[list(p) for p in path] for path in world.rivers],
    }


def _cmd_reset(session: SessionState, payload: dict) -> dict:
    env = session.env
    if env is None:
        raise InvalidInputError("load_task before reset")
    if "seed" in payload:
        rng = np.random.default_rng(int(payload["seed"]))
    else:
        rng = session.session_rng()
    positions = None
    if payload.get("positions"):
        positions = {fid: tuple(p) for fid, p in payload["positions"].items()}
    env.reset(initial_positions=positions, rng=rng)
    return _state_payload(session)


def _cmd_step(session: SessionState, payload: dict) -> dict:
    env = _require_env(session)
    _obs, breakdown, done, info = env.step((payload.get("dx", 0.0), payload.get("dy", 0.0)))
    out = _state_payload(session)
    out["reward"] = breakdown.reward
    out["done"] = done
    return out


def _cmd_step_joint(session: SessionState, payload: dict) -> dict:
    env = _require_env(session)
    if env.config.movement_mode != ACTUAL_CONCURRENT:
        raise InvalidInputError("step_joint requires movement_mode=actual_concurrent")
    moves = payload.get("moves")
    if not isinstance(moves, dict):
        raise InvalidInputError("step_joint needs a moves object {fid: [dx, dy]}")
    _obs, breakdown, done, info = env.step({fid: tuple(v) for fid, v in moves.items()})
    out = _state_payload(session)
    out["reward"] = breakdown.reward
    out["done"] = done
    return out


def _cmd_set_pos(session: SessionState, payload: dict) -> dict:
    env = _require_env(session)
    fid = payload.get("facility")
    if fid is None:
        raise InvalidInputError("set_pos needs a facility id")
    if fid not in env.positions:
        # Accept display names from the UI as well.
        names = {name: f for f, name in session.task.facilities}
        if fid in names:
            fid = names[fid]
        else:
            raise MissingReferenceError(f"unknown facility {payload.get('facility')!r}")
    env.set_facility_position(fid, (payload.get("x", 0.0), payload.get("y", 0.0)))
    return _state_payload(session)


def _cmd_solve(session: SessionState, payload: dict, emit) -> dict:
    env = _require_env(session)
    budget = int(payload.get("budget", 4000))
    method = payload.get("method", "anneal")
    stream = bool(payload.get("stream", True))
    seed = int(payload.get("seed", 0))
    rng = np.random.default_rng(seed)
    if budget == 0:
        out = _state_payload(session)
        out["success"] = out["all_satisfied"]
        out["iterations"] = 0
        return out

    if method == "anneal":
        def on_accept(i, fid, layout):
            if stream and emit is not None:
                x, y = layout[fid]
                emit({"event": "position", "facility": fid, "x": x, "y": y, "step": i})

        best, success = anneal_solve(session.task, session.index, budget, rng,
                                     initial_layout=dict(env.positions),
                                     on_accept=on_accept)
        for fid, p in best.items():
            env.set_facility_position(fid, p)
    elif method == "greedy":
        policy = make_policy(PolicySpec(kind="greedy"), env.config.movement_mode)
        success = False
        for i in range(budget):
            if env.compute_reward().all_satisfied:
                success = True
                break
            if env.done:
                env.done = False  # solve may continue past a finished episode
            action = policy(env.observation(), env, rng)
            _obs, breakdown, _done, _info = env.step(action)
            if stream and emit is not None:
                fid = env.facility_ids[(env.turn_index - 1) % len(env.facility_ids)]
                x, y = env.positions[fid]
                emit({"event": "position", "facility": fid, "x": x, "y": y, "step": i})
            if breakdown.all_satisfied:
                success = True
                break
    else:
        raise InvalidInputError(f"unknown solve method {method!r}")

    out = _state_payload(session)
    out["success"] = bool(success)
    return out


def _cmd_render(session: SessionState, payload: dict) -> dict:
    if session.world is None:
        raise InvalidInputError("load_task before render")
    path = payload.get("path")
    if not path:
        raise InvalidInputError("render needs a path")
    from .worldgen.raster import save_png
    save_png(np.asarray(session.world.raster), path)
    return {"path": str(path)}


def handle_message(session: SessionState, request: dict, emit=None) -> dict:
    """Dispatch one request; always returns a response with the request id."""
    req_id = request.get("id")
    try:
        cmd = request.get("cmd")
        payload = request.get("payload") or {}
        if not isinstance(payload, dict):
            raise InvalidInputError("payload must be an object")
        if cmd == "load_task":
            result = _cmd_load_task(session, payload)
        elif cmd == "reset":
            result = _cmd_reset(session, payload)
        elif cmd == "step":
            result = _cmd_step(session, payload)
        elif cmd == "step_joint":
            result = _cmd_step_joint(session, payload)
        elif cmd == "set_pos":
            result = _cmd_set_pos(session, payload)
        elif cmd == "solve":
            result = _cmd_solve(session, payload, emit)
        elif cmd == "get_state":
            _require_env(session)
            result = _state_payload(session)
        elif cmd == "render":
            result = _cmd_render(session, payload)
        else:
            raise InvalidInputError(f"unknown command {cmd!r}")
        return {"id": req_id, "ok": True, "payload": result}
    except PlotmapError as exc:
        return {"id": req_id, "ok": False,
                "error": {"code": exc.code, "message": str(exc)}}
    except (KeyError, TypeError, ValueError) as exc:
        return {"id": req_id, "ok": False,
                "error": {"code": "invalid-input", "message": str(exc)}}


def handle_line(session: SessionState, line: str, emit=None) -> str:
    """Parse one request line and serialize the response."""
    try:
        request = json.loads(line)
        if not isinstance(request, dict):
            raise ValueError("request must be an object")
    except ValueError as exc:
        return json.dumps({"id": None, "ok": False,
                           "error": {"code": "invalid-input", "message": str(exc)}})
    return json.dumps(handle_message(session, request, emit=emit))


_DEMO_CACHE: tuple[WorldMap, Task] | None = None


def taskgen_demo() -> tuple[WorldMap, Task]:
    """Built-in re-adaptation demo task (cached)."""
    global _DEMO_CACHE
    if _DEMO_CACHE is None:
        _DEMO_CACHE = taskgen.make_demo_task()
    world, task = _DEMO_CACHE
    return world, task

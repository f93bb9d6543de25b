"""Sequential decision environment over a layout task.

Facilities move one at a time (simulated concurrent movement) or all at once
(actual concurrent movement). Each step recomputes every constraint score;
the reward is +1 on full satisfaction and mean(score) - 1 otherwise, so it
always lies in [-1, 0] or equals 1.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .constraints.scoring import evaluate
from .constraints.types import Constraint, ConstraintType, Direction
from .errors import (
    CapacityError,
    EpisodeFinishedError,
    InvalidInputError,
    InvalidLayoutError,
    MissingReferenceError,
)
from .mapindex import MapIndex
from .taskgen import Task
from .worldgen.types import BiomeType, WorldMap

MAX_FACILITIES = 10
MAX_CONSTRAINTS = 10
# Relation row: family one-hot (12) + direction (4+none) + biome (9+none)
# + three facility slots (10+none each).
RELATION_ROW_WIDTH = 12 + 5 + 10 + 3 * 11

SIMULATED_CONCURRENT = "simulated_concurrent"
ACTUAL_CONCURRENT = "actual_concurrent"


@dataclass(frozen=True)
class EnvConfig:
    horizon: int = 200
    max_step_length: float = 0.05
    movement_mode: str = SIMULATED_CONCURRENT

    def validate(self) -> None:
        if self.horizon < 1:
            raise InvalidInputError("horizon must be >= 1")
        if not (0.0 < self.max_step_length <= 1.0):
            raise InvalidInputError("max_step_length must be in (0, 1]")
        if self.movement_mode not in (SIMULATED_CONCURRENT, ACTUAL_CONCURRENT):
            raise InvalidInputError(f"unknown movement mode {self.movement_mode!r}")


@dataclass
class RewardBreakdown:
    scores: list[float]
    reward: float
    all_satisfied: bool
    satisfied_flags: list[float] = field(default_factory=list)

    @property
    def n(self) -> int:
        return len(self.scores)


@dataclass
class Observation:
    raster: np.ndarray  # (S, S, 3) uint8, shared across the episode
    facility_block: np.ndarray  # (|F|, 4): x, y, motion indicator, id norm
    constraint_block: np.ndarray  # (10, RELATION_ROW_WIDTH)

    def vector(self) -> np.ndarray:
        """Flat observation: raster/255, padded relation rows, padded
        facility rows. Length 5932 at the default raster size."""
        fac = np.zeros((MAX_FACILITIES, 4))
        fac[: len(self.facility_block)] = self.facility_block
        return np.concatenate([
            self.raster.astype(np.float64).ravel() / 255.0,
            self.constraint_block.ravel(),
            fac.ravel(),
        ])


def encode_constraints(constraints: list[Constraint], facility_ids: list[str]) -> np.ndarray:
    """Relation-based one-hot rows, zero-padded to 10 rows."""
    if len(constraints) > MAX_CONSTRAINTS:
        raise CapacityError(f"too many constraints: {len(constraints)}")
    if len(facility_ids) > MAX_FACILITIES:
        raise CapacityError(f"too many facilities: {len(facility_ids)}")
    families = list(ConstraintType)
    biomes = list(BiomeType)
    directions = list(Direction)
    block = np.zeros((MAX_CONSTRAINTS, RELATION_ROW_WIDTH))
    for row, c in enumerate(constraints):
        offset = 0
        block[row, families.index(c.ctype)] = 1.0
        offset += len(families)
        d = directions.index(c.direction) if c.direction is not None else len(directions)
        block[row, offset + d] = 1.0
        offset += len(directions) + 1
        b = biomes.index(c.biome) if c.biome is not None else len(biomes)
        block[row, offset + b] = 1.0
        offset += len(biomes) + 1
        for slot in range(3):
            if slot < len(c.facilities):
                f = facility_ids.index(c.facilities[slot])
            else:
                f = MAX_FACILITIES
            block[row, offset + f] = 1.0
            offset += MAX_FACILITIES + 1
    return block


class LayoutEnv:
    """One episode of facility movement on a fixed task."""

    def __init__(self, task: Task, world: WorldMap, config: EnvConfig = EnvConfig(),
                 index: MapIndex | None = None):
        config.validate()
        self.task = task
        self.world = world
        self.config = config
        self.index = index or MapIndex(world)
        self.facility_ids = task.facility_ids
        if len(self.facility_ids) > MAX_FACILITIES:
            raise CapacityError("task exceeds the 10-facility limit")
        self._constraint_rows = encode_constraints(task.constraints, self.facility_ids)
        self.positions: dict[str, tuple[float, float]] = {}
        self.turn_index = 0
        self.step_count = 0
        self.done = False
        self._started = False

    # -- lifecycle -------------------------------------------------------

    def reset(self, initial_positions: dict | None = None,
              rng: np.random.Generator | None = None) -> Observation:
        if initial_positions is not None:
            missing = set(self.facility_ids) - set(initial_positions)
            if missing:
                raise InvalidLayoutError(f"positions missing facilities: {sorted(missing)}")
            self.positions = {
                fid: (float(initial_positions[fid][0]), float(initial_positions[fid][1]))
                for fid in self.facility_ids
            }
        else:
            rng = rng or np.random.default_rng()
            pts = rng.random((len(self.facility_ids), 2))
            self.positions = {fid: (float(x), float(y))
                              for fid, (x, y) in zip(self.facility_ids, pts)}
        self.turn_index = 0
        self.step_count = 0
        self.done = False
        self._started = True
        return self.observation()

    def compute_reward(self) -> RewardBreakdown:
        scores = [evaluate(c, self.positions, self.index).score
                  for c in self.task.constraints]
        flags = [1.0 if s == 1.0 else 0.0 for s in scores]
        all_sat = all(f == 1.0 for f in flags)
        if all_sat:
            reward = 1.0
        elif scores:
            reward = sum(scores) / len(scores) - 1.0
        else:
            reward = 1.0  # vacuous: no constraints means satisfied
        return RewardBreakdown(scores=scores, reward=reward,
                               all_satisfied=all_sat, satisfied_flags=flags)

    def _clip(self, dx: float, dy: float) -> tuple[float, float]:
        norm = math.hypot(dx, dy)
        cap = self.config.max_step_length
        if norm > cap and norm > 0.0:
            scale = cap / norm
            return dx * scale, dy * scale
        return dx, dy

    def step(self, action) -> tuple[Observation, RewardBreakdown, bool, dict]:
        """Apply one action; see module docstring for the movement modes.

        If the current state is already fully satisfied the episode ends
        immediately with reward +1 and the action is discarded, so an episode
        reset at a witness layout terminates at the first step regardless of
        the policy.
        """
        if not self._started:
            raise InvalidInputError("reset the environment before stepping")
        if self.done:
            raise EpisodeFinishedError("episode already finished")

        pre = self.compute_reward()
        if pre.all_satisfied:
            self.done = True
            return self.observation(), pre, True, {"step_count": self.step_count,
                                                   "short_circuit": True}

        if self.config.movement_mode == SIMULATED_CONCURRENT:
            dx, dy = float(action[0]), float(action[1])
            dx, dy = self._clip(dx, dy)
            fid = self.facility_ids[self.turn_index]
            x, y = self.positions[fid]
            self.positions[fid] = (min(1.0, max(0.0, x + dx)),
                                   min(1.0, max(0.0, y + dy)))
            self.turn_index = (self.turn_index + 1) % len(self.facility_ids)
        else:
            moves = self._joint_moves(action)
            for fid, (dx, dy) in moves.items():
                dx, dy = self._clip(dx, dy)
                x, y = self.positions[fid]
                self.positions[fid] = (min(1.0, max(0.0, x + dx)),
                                       min(1.0, max(0.0, y + dy)))

        self.step_count += 1
        breakdown = self.compute_reward()
        self.done = breakdown.all_satisfied or self.step_count >= self.config.horizon
        info = {"step_count": self.step_count, "turn_index": self.turn_index}
        return self.observation(), breakdown, self.done, info

    def _joint_moves(self, action) -> dict[str, tuple[float, float]]:
        if isinstance(action, dict):
            unknown = set(action) - set(self.facility_ids)
            if unknown:
                raise MissingReferenceError(f"unknown facilities: {sorted(unknown)}")
            return {fid: (float(v[0]), float(v[1])) for fid, v in action.items()}
        arr = np.asarray(action, dtype=float)
        if arr.shape != (len(self.facility_ids), 2):
            raise InvalidInputError(
                f"joint action must have shape ({len(self.facility_ids)}, 2)")
        return {fid: (float(arr[i, 0]), float(arr[i, 1]))
                for i, fid in enumerate(self.facility_ids)}

    def set_facility_position(self, facility_id: str, point) -> Observation:
        """User intervention: teleport a facility (clamped to the map).

        Not limited by the step length; reopens a finished episode when the
        new arrangement is no longer fully satisfied.
        """
        if not self._started:
            raise InvalidInputError("reset the environment before set_facility_position")
        if facility_id not in self.positions:
            raise MissingReferenceError(f"unknown facility {facility_id!r}")
        self.positions[facility_id] = (min(1.0, max(0.0, float(point[0]))),
                                       min(1.0, max(0.0, float(point[1]))))
        if self.done and not self.compute_reward().all_satisfied:
            self.done = False
        return self.observation()

    # -- observations ------------------------------------------------------

    def observation(self) -> Observation:
        n = len(self.facility_ids)
        block = np.zeros((n, 4))
        for i, fid in enumerate(self.facility_ids):
            x, y = self.positions[fid]
            block[i, 0] = x
            block[i, 1] = y
            block[i, 2] = 1.0 if i == self.turn_index else 0.0
            block[i, 3] = i / (n - 1) if n > 1 else 0.0
        raster = self.world.raster
        if raster is None:
            from .worldgen.raster import rasterize
            raster = self.world.raster = rasterize(self.world)
        return Observation(raster=raster, facility_block=block,
                           constraint_block=self._constraint_rows)

    def encode_observation(self) -> np.ndarray:
        return self.observation().vector()


@dataclass
class Trajectory:
    task_id: str
    success: bool
    steps: int
    rewards: list[float]
    trails: dict[str, list[tuple[float, float]]]
    final_positions: dict[str, tuple[float, float]]

    def to_dict(self) -> dict:
        return {
            "format": "plotmap-trajectory/1",
            "task_id": self.task_id,
            "success": self.success,
            "steps": self.steps,
            "rewards": self.rewards,
            "trails": {fid: [list(p) for p in path] for fid, path in self.trails.items()},
            "final_positions": {fid: list(p) for fid, p in self.final_positions.items()},
        }


def rollout(policy, env: LayoutEnv, rng: np.random.Generator,
            initial_positions: dict | None = None) -> Trajectory:
    """Run one episode; the policy is called as policy(obs, env, rng)."""
    obs = env.reset(initial_positions=initial_positions, rng=rng)
    trails = {fid: [env.positions[fid]] for fid in env.facility_ids}
    rewards: list[float] = []
    success = False
    while not env.done:
        action = policy(obs, env, rng)
        obs, breakdown, done, _ = env.step(action)
        rewards.append(breakdown.reward)
        for fid in env.facility_ids:
            if trails[fid][-1] != env.positions[fid]:
                trails[fid].append(env.positions[fid])
        if done and breakdown.all_satisfied:
            success = True
    return Trajectory(
        task_id=env.task.task_id,
        success=success,
        steps=env.step_count,
        rewards=rewards,
        trails=trails,
        final_positions=dict(env.positions),
    )


def export_trajectory(traj: Trajectory, json_path, png_path=None,
                      world: WorldMap | None = None, scale: int = 12) -> None:
    """Write the trail JSON and optionally a PNG overlay on the map raster."""
    Path(json_path).write_text(json.dumps(traj.to_dict()))
    if png_path is None:
        return
    if world is None:
        raise InvalidInputError("world map required for the PNG overlay")
    from PIL import Image, ImageDraw

    raster = world.raster
    size = raster.shape[0] * scale
    img = Image.fromarray(raster, mode="RGB").resize((size, size), Image.NEAREST)
    draw = ImageDraw.Draw(img)
    colors = ["red", "blue", "yellow", "magenta", "cyan", "orange",
              "white", "black", "lime", "purple"]
    for i, (fid, path) in enumerate(sorted(traj.trails.items())):
        px = [(p[0] * size, (1.0 - p[1]) * size) for p in path]
        if len(px) > 1:
            draw.line(px, fill=colors[i % len(colors)], width=2)
        r = 4
        x, y = px[-1]
        draw.ellipse([x - r, y - r, x + r, y + r], fill=colors[i % len(colors)],
                     outline="black")
    img.save(png_path, format="PNG")

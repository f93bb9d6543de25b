"""Baseline policies, an offline annealing solver, and rollout evaluation.

The greedy policy stands in for a trained agent: it has read access to the
exact scorer and looks one step ahead for the facility whose turn it is. Its
joint counterpart (actual concurrent movement) deliberately has no such
per-facility attribution -- it only observes how the aggregate score changed
after a whole round and hill-climbs on that signal, which reproduces the
credit-assignment failure of truly concurrent movement.
"""

from __future__ import annotations

import csv
import json
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .constraints.scoring import evaluate
from .env import ACTUAL_CONCURRENT, EnvConfig, LayoutEnv, rollout
from .errors import InvalidInputError
from .mapindex import MapIndex
from .taskgen import Task
from .worldgen.types import WorldMap

EVAL_FORMAT = "plotmap-eval/1"

DEFAULT_GREEDY_CANDIDATES = 16

# Annealing schedule: proposal spread shrinks geometrically over the budget,
# temperature decays per iteration.
ANNEAL_SIGMA_HI = 0.2
ANNEAL_SIGMA_LO = 0.01
ANNEAL_T0 = 1.0
ANNEAL_ALPHA = 0.995


def mean_score(constraints, layout, index: MapIndex) -> float:
    if not constraints:
        return 1.0
    return sum(evaluate(c, layout, index).score for c in constraints) / len(constraints)


def _disk_sample(rng: np.random.Generator, radius: float) -> tuple[float, float]:
    r = radius * math.sqrt(rng.random())
    theta = rng.random() * 2.0 * math.pi
    return (r * math.cos(theta), r * math.sin(theta))


def random_policy(obs, env: LayoutEnv, rng: np.random.Generator):
    """Uniform displacement on the disk of radius max_step_length."""
    cap = env.config.max_step_length
    if env.config.movement_mode == ACTUAL_CONCURRENT:
        return {fid: _disk_sample(rng, cap) for fid in env.facility_ids}
    return _disk_sample(rng, cap)


def greedy_policy(obs, env: LayoutEnv, rng: np.random.Generator,
                  candidates: int = DEFAULT_GREEDY_CANDIDATES):
    """Best of K sampled moves plus the zero move for the indicated facility.

    Ties go to the smaller displacement, then the earlier candidate. Only
    constraints referencing the moving facility are re-scored per candidate;
    the rest contribute a fixed sum.
    """
    fid = env.facility_ids[env.turn_index]
    cap = env.config.max_step_length
    options = [(0.0, 0.0)] + [_disk_sample(rng, cap) for _ in range(candidates)]
    layout = dict(env.positions)
    x, y = layout[fid]
    involved = [c for c in env.task.constraints if fid in c.facilities]
    fixed_sum = sum(evaluate(c, layout, env.index).score
                    for c in env.task.constraints if fid not in c.facilities)
    n = len(env.task.constraints) or 1
    best = None
    best_score = -1.0
    best_norm = 0.0
    for dx, dy in options:
        layout[fid] = (min(1.0, max(0.0, x + dx)), min(1.0, max(0.0, y + dy)))
        s = (fixed_sum + sum(evaluate(c, layout, env.index).score
                             for c in involved)) / n
        norm = math.hypot(dx, dy)
        if s > best_score or (s == best_score and norm < best_norm):
            best, best_score, best_norm = (dx, dy), s, norm
    return best


class GreedyJointPolicy:
    """Joint-movement counterpart of the greedy baseline.

    Under actual concurrent movement all facilities move in a single step
    and the observation updates once per round, so a score change cannot be
    attributed to any individual facility. The policy does the best it can
    with that signal: it keeps a per-facility directional estimate and
    reinforces it by (aggregate delta) x (that facility's last move), a
    simultaneous-perturbation gradient estimate. Because every facility's
    estimate absorbs credit earned by the others, the momentum it builds is
    largely spurious and facilities drift off toward the map edges.
    """

    def __init__(self, learning_rate: float = 2.0, noise_scale: float = 0.5):
        self.learning_rate = learning_rate
        self.noise_scale = noise_scale
        self.reset()

    def reset(self) -> None:
        self._momentum: dict[str, np.ndarray] | None = None
        self._last_move: dict[str, np.ndarray] | None = None
        self._last_score: float | None = None

    def __call__(self, obs, env: LayoutEnv, rng: np.random.Generator):
        cap = env.config.max_step_length
        if env.step_count == 0 or self._momentum is None:
            self.reset()
            self._momentum = {fid: np.array(_disk_sample(rng, cap))
                              for fid in env.facility_ids}
        current = mean_score(env.task.constraints, env.positions, env.index)
        if self._last_move is not None and self._last_score is not None:
            delta = current - self._last_score
            for fid in env.facility_ids:
                self._momentum[fid] = (
                    self._momentum[fid]
                    + self.learning_rate * delta * self._last_move[fid]
                )
        move = {}
        for fid in env.facility_ids:
            v = self._momentum[fid] + np.array(
                _disk_sample(rng, cap * self.noise_scale))
            norm = float(np.linalg.norm(v))
            if norm > cap:
                v = v * (cap / norm)
            move[fid] = v
        self._last_move = move
        self._last_score = current
        return {fid: (float(v[0]), float(v[1])) for fid, v in move.items()}


def scripted_policy(target_layout: dict):
    """Walks every facility straight toward a target layout (test helper)."""

    def policy(obs, env: LayoutEnv, rng: np.random.Generator):
        fid = env.facility_ids[env.turn_index]
        tx, ty = target_layout[fid]
        x, y = env.positions[fid]
        return (tx - x, ty - y)  # env clips to the step cap

    return policy


@dataclass(frozen=True)
class PolicySpec:
    kind: str = "random"  # random | greedy | scripted
    candidate_count: int = DEFAULT_GREEDY_CANDIDATES
    target_layout: dict | None = None

    def validate(self) -> None:
        if self.kind not in ("random", "greedy", "scripted"):
            raise InvalidInputError(f"unknown policy kind {self.kind!r}")
        if self.candidate_count < 1:
            raise InvalidInputError("candidate_count must be >= 1")


def make_policy(spec: PolicySpec, movement_mode: str = "simulated_concurrent"):
    spec.validate()
    if spec.kind == "random":
        return random_policy
    if spec.kind == "scripted":
        if spec.target_layout is None:
            raise InvalidInputError("scripted policy needs a target layout")
        return scripted_policy(spec.target_layout)
    if movement_mode == ACTUAL_CONCURRENT:
        return GreedyJointPolicy()
    def greedy(obs, env, rng, _k=spec.candidate_count):
        return greedy_policy(obs, env, rng, candidates=_k)
    return greedy


def _scores(constraints, layout, index: MapIndex) -> list[float]:
    return [evaluate(c, layout, index).score for c in constraints]


def anneal_solve(task: Task, index: MapIndex, budget: int,
                 rng: np.random.Generator, initial_layout: dict | None = None,
                 on_accept=None) -> tuple[dict, bool]:
    """Simulated annealing over full layouts.

    Energy is 1 - mean score; one random facility gets a Gaussian nudge per
    iteration with the spread annealed from 0.2 down to 0.01; Metropolis
    acceptance under a geometric temperature schedule. Only facilities
    involved in at least one unsatisfied constraint are perturbed, so a
    facility whose constraints all hold stays where the user put it. Returns
    the best layout seen and whether it satisfies every constraint; stops
    early once fully satisfied.
    """
    if budget < 1:
        raise InvalidInputError("budget must be >= 1")
    fids = task.facility_ids
    if initial_layout is not None:
        layout = {fid: (float(initial_layout[fid][0]), float(initial_layout[fid][1]))
                  for fid in fids}
    else:
        pts = rng.random((len(fids), 2))
        layout = {fid: (float(x), float(y)) for fid, (x, y) in zip(fids, pts)}

    scores = _scores(task.constraints, layout, index)
    n = len(scores) or 1
    energy = 1.0 - sum(scores) / n
    best_layout = dict(layout)
    best_energy = energy
    if best_energy == 0.0:
        return best_layout, True

    sigma_ratio = ANNEAL_SIGMA_LO / ANNEAL_SIGMA_HI
    for i in range(budget):
        movable = sorted({
            fid
            for c, s in zip(task.constraints, scores)
            if s < 1.0
            for fid in c.facilities
        }) or fids
        sigma = ANNEAL_SIGMA_HI * sigma_ratio ** (i / budget)
        temp = ANNEAL_T0 * ANNEAL_ALPHA ** i
        fid = movable[int(rng.integers(len(movable)))]
        old = layout[fid]
        cand = (min(1.0, max(0.0, old[0] + rng.normal(0.0, sigma))),
                min(1.0, max(0.0, old[1] + rng.normal(0.0, sigma))))
        layout[fid] = cand
        new_scores = _scores(task.constraints, layout, index)
        new_energy = 1.0 - sum(new_scores) / n
        delta = new_energy - energy
        if delta <= 0.0 or rng.random() < math.exp(-delta / max(temp, 1e-12)):
            energy = new_energy
            scores = new_scores
            if on_accept is not None:
                on_accept(i, fid, layout)
            if energy < best_energy:
                best_energy = energy
                best_layout = dict(layout)
                if best_energy == 0.0:
                    break
        else:
            layout[fid] = old
    return best_layout, best_energy == 0.0


def wilson_interval(successes: int, n: int, z: float = 1.96) -> tuple[float, float]:
    if n == 0:
        return (0.0, 1.0)
    p = successes / n
    denom = 1.0 + z * z / n
    center = (p + z * z / (2 * n)) / denom
    half = z * math.sqrt(p * (1.0 - p) / n + z * z / (4 * n * n)) / denom
    return (max(0.0, center - half), min(1.0, center + half))


@dataclass
class TaskEvalRow:
    task_id: str
    rollouts: int
    successes: int

    @property
    def rate(self) -> float:
        return self.successes / self.rollouts if self.rollouts else 0.0


@dataclass
class EvalReport:
    policy: str
    rollouts: int
    successes: int
    success_rate: float
    ci_low: float
    ci_high: float
    mean_steps_to_success: float | None
    per_task: list[TaskEvalRow] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "format": EVAL_FORMAT,
            "policy": self.policy,
            "rollouts": self.rollouts,
            "successes": self.successes,
            "success_rate": self.success_rate,
            "ci_low": self.ci_low,
            "ci_high": self.ci_high,
            "mean_steps_to_success": self.mean_steps_to_success,
            "per_task": [
                {"task_id": r.task_id, "rollouts": r.rollouts,
                 "successes": r.successes, "success_rate": r.rate}
                for r in self.per_task
            ],
        }

    def save(self, json_path, csv_path=None) -> None:
        Path(json_path).write_text(json.dumps(self.to_dict(), indent=2))
        if csv_path:
            with open(csv_path, "w", newline="") as fh:
                writer = csv.writer(fh)
                writer.writerow(["task_id", "rollouts", "successes", "success_rate"])
                for r in self.per_task:
                    writer.writerow([r.task_id, r.rollouts, r.successes, f"{r.rate:.6f}"])


def evaluate_policy(spec: PolicySpec, tasks: list[Task],
                    worlds: dict[str, WorldMap], rollouts: int, seed: int = 0,
                    env_config: EnvConfig = EnvConfig()) -> EvalReport:
    """Success rate over `rollouts` episodes spread round-robin over tasks.

    Success means every constraint satisfied before the horizon. Each
    rollout's rng derives from (seed, task index, repeat index), so results
    do not depend on execution order.
    """
    if rollouts < 1:
        raise InvalidInputError("rollouts must be >= 1")
    if not tasks:
        raise InvalidInputError("task set is empty")
    indexes: dict[str, MapIndex] = {}
    envs: list[LayoutEnv] = []
    for task in tasks:
        world = worlds[task.map_ref]
        if task.map_ref not in indexes:
            indexes[task.map_ref] = MapIndex(world)
        envs.append(LayoutEnv(task, world, env_config, index=indexes[task.map_ref]))

    rows = [TaskEvalRow(task.task_id, 0, 0) for task in tasks]
    steps_to_success: list[int] = []
    for j in range(rollouts):
        ti = j % len(tasks)
        repeat = j // len(tasks)
        rng = np.random.default_rng([seed, ti, repeat])
        policy = make_policy(spec, env_config.movement_mode)
        traj = rollout(policy, envs[ti], rng)
        rows[ti].rollouts += 1
        if traj.success:
            rows[ti].successes += 1
            steps_to_success.append(traj.steps)

    successes = sum(r.successes for r in rows)
    lo, hi = wilson_interval(successes, rollouts)
    return EvalReport(
        policy=spec.kind,
        rollouts=rollouts,
        successes=successes,
        success_rate=successes / rollouts,
        ci_low=lo,
        ci_high=hi,
        mean_steps_to_success=(sum(steps_to_success) / len(steps_to_success)
                               if steps_to_success else None),
        per_task=rows,
    )

"""Solvable layout-task generation.

A task is built backwards from a random witness layout: place the facilities,
enumerate every constraint instantiation the layout already satisfies, then
sample a subset and phrase it in English. The witness ships with the task as
its solvability certificate.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .constraints.types import (
    Constraint,
    ConstraintType,
    Direction,
    SIGNATURES,
    SYMMETRIC_FACILITY_PAIRS,
)
from .constraints.scoring import evaluate
from .constraints.utterances import render_utterance
from .errors import GenerationFailedError, InvalidConfigError, InvalidInputError
from .mapindex import MapIndex
from .worldgen.types import WorldMap

TASK_FORMAT = "plotmap-task/1"

DEFAULT_RETRY_BUDGET = 50

_NAME_PREFIXES = [
    "Marke", "Veil", "Hearth", "Aqua", "Forge", "Mire", "Storm", "Ash",
    "Bright", "Frost", "Gold", "Raven", "Thorn", "Wolf", "Ember", "Moon",
    "Iron", "Silver", "Oak", "Briar",
]
_NAME_SUFFIXES = [
    "town", "stead", "fire Hold", "frost Garrison", "wind Citadel", "step",
    "watch", "haven", "ford", "gate", "fall Keep", "shade", "rock", "field",
    "brook", "spire", "march", "crest", "moor", "landing",
]


def facility_names(count: int, rng: np.random.Generator) -> list[str]:
    """Distinct fantasy-flavored display names."""
    combos = [p + s for p in _NAME_PREFIXES for s in _NAME_SUFFIXES]
    picks = rng.choice(len(combos), size=count, replace=False)
    return [combos[i] for i in picks]


@dataclass(frozen=True)
class TaskGenConfig:
    facility_count: int = 10
    min_constraints: int = 3
    max_constraints: int = 10
    families: tuple[ConstraintType, ...] = tuple(ConstraintType)
    seed: int = 0
    balance_sampling: bool = False
    retry_budget: int = DEFAULT_RETRY_BUDGET

    def validate(self) -> None:
        if not (1 <= self.facility_count <= 10):
            raise InvalidConfigError("facility_count must be in [1, 10]")
        if not (1 <= self.min_constraints <= self.max_constraints <= 10):
            raise InvalidConfigError("need 1 <= min_constraints <= max_constraints <= 10")
        if not self.families:
            raise InvalidConfigError("constraint family whitelist is empty")


@dataclass
class Task:
    task_id: str
    map_ref: str
    facilities: list[tuple[str, str]]  # (id, display name)
    constraints: list[Constraint]
    witness_layout: dict[str, tuple[float, float]]

    @property
    def facility_ids(self) -> list[str]:
        return [fid for fid, _ in self.facilities]

    @property
    def names(self) -> dict[str, str]:
        return dict(self.facilities)

    def to_dict(self) -> dict:
        return {
            "format": TASK_FORMAT,
            "task_id": self.task_id,
            "map_ref": self.map_ref,
            "facilities": [{"id": fid, "name": name} for fid, name in self.facilities],
            "constraints": [c.to_dict() for c in self.constraints],
            "witness": {fid: list(p) for fid, p in self.witness_layout.items()},
        }

    @classmethod
    def from_dict(cls, d: dict) -> "Task":
        if d.get("format") != TASK_FORMAT:
            raise InvalidInputError(f"unsupported task format: {d.get('format')!r}")
        return cls(
            task_id=d["task_id"],
            map_ref=d["map_ref"],
            facilities=[(f["id"], f["name"]) for f in d["facilities"]],
            constraints=[Constraint.from_dict(c) for c in d["constraints"]],
            witness_layout={fid: tuple(p) for fid, p in d["witness"].items()},
        )


def enumerate_satisfied(layout: dict, index: MapIndex,
                        families=tuple(ConstraintType)) -> list[Constraint]:
    """All whitelisted instantiations satisfied by the layout.

    Deduplication: symmetric facility pairs (CloseTo/AwayFrom/Across/Visible)
    keep only the id-ordered instance, and InBetween orders its two anchor
    facilities; directional families keep all ordered pairs.
    """
    fids = sorted(layout.keys())
    biomes = index.world.biomes_present()
    out = []
    for ctype in families:
        n_biomes, n_facilities, needs_dir = SIGNATURES[ctype]
        if len(fids) < n_facilities:
            continue
        if ctype in SYMMETRIC_FACILITY_PAIRS:
            fac_combos = list(itertools.combinations(fids, 2))
        elif ctype == ConstraintType.IN_BETWEEN:
            fac_combos = [
                (a, b, c)
                for a in fids
                for b, c in itertools.combinations([f for f in fids if f != a], 2)
            ]
        elif n_facilities == 1:
            fac_combos = [(f,) for f in fids]
        else:
            fac_combos = list(itertools.permutations(fids, n_facilities))
        biome_options = biomes if n_biomes else [None]
        dir_options = list(Direction) if needs_dir else [None]
        for facs in fac_combos:
            for biome in biome_options:
                for direction in dir_options:
                    c = Constraint(ctype, tuple(facs), biome=biome, direction=direction)
                    if evaluate(c, layout, index).satisfied:
                        out.append(c)
    return out


def _sample_constraints(pool: list[Constraint], k: int, rng: np.random.Generator,
                        balance: bool) -> list[Constraint]:
    if not balance:
        picks = rng.choice(len(pool), size=k, replace=False)
        return [pool[i] for i in picks]
    # Stratified: pick a family uniformly among those with remaining
    # candidates, then one candidate of that family.
    by_family: dict[ConstraintType, list[Constraint]] = {}
    for c in pool:
        by_family.setdefault(c.ctype, []).append(c)
    chosen = []
    while len(chosen) < k:
        families = sorted(by_family.keys(), key=lambda f: f.value)
        fam = families[int(rng.integers(len(families)))]
        bucket = by_family[fam]
        c = bucket.pop(int(rng.integers(len(bucket))))
        if not bucket:
            del by_family[fam]
        chosen.append(c)
    return chosen


def generate_task(world: WorldMap, config: TaskGenConfig,
                  rng: np.random.Generator, task_id: str | None = None,
                  index: MapIndex | None = None) -> Task:
    """Place facilities at random, harvest satisfied constraints, sample."""
    config.validate()
    index = index or MapIndex(world)
    n = config.facility_count
    fids = [f"p{i+1}" for i in range(n)]
    names = facility_names(n, rng)

    for _ in range(config.retry_budget):
        layout = {fid: (float(x), float(y)) for fid, (x, y) in
                  zip(fids, rng.random((n, 2)))}
        pool = enumerate_satisfied(layout, index, config.families)
        if len(pool) < config.min_constraints:
            continue
        k_hi = min(config.max_constraints, len(pool))
        k = int(rng.integers(config.min_constraints, k_hi + 1))
        chosen = _sample_constraints(pool, k, rng, config.balance_sampling)
        name_map = dict(zip(fids, names))
        constraints = [
            Constraint(
                c.ctype, c.facilities, biome=c.biome, direction=c.direction,
                utterance=render_utterance(c, rng, names=name_map),
            )
            for c in chosen
        ]
        return Task(
            task_id=task_id or f"task-{config.seed}",
            map_ref=world.map_id,
            facilities=list(zip(fids, names)),
            constraints=constraints,
            witness_layout=layout,
        )
    raise GenerationFailedError(
        f"no layout with >= {config.min_constraints} satisfied constraints "
        f"after {config.retry_budget} placements"
    )


def verify_witness(task: Task, index: MapIndex) -> bool:
    """Re-evaluate every constraint at the stored witness layout."""
    return all(
        evaluate(c, task.witness_layout, index).satisfied for c in task.constraints
    )


def family_histogram(tasks: list[Task]) -> dict[str, int]:
    hist = {ct.value: 0 for ct in ConstraintType}
    for task in tasks:
        for c in task.constraints:
            hist[c.ctype.value] += 1
    return hist


def generate_dataset(worlds: list[WorldMap], config: TaskGenConfig, count: int,
                     out_path=None, max_failures: int | None = None) -> list[Task]:
    """Generate `count` tasks over uniformly sampled maps.

    Writes JSON-lines with a header line when out_path is given, plus a
    family-frequency histogram side-car. A handful of per-task generation
    failures are skipped; past the budget the error propagates.
    """
    if not worlds:
        raise InvalidInputError("need at least one map")
    rng = np.random.default_rng(int(config.seed))
    indexes = [MapIndex(w) for w in worlds]
    if max_failures is None:
        max_failures = count // 10 + 10
    tasks: list[Task] = []
    failures = 0
    i = 0
    while len(tasks) < count:
        w = int(rng.integers(len(worlds)))
        try:
            task = generate_task(
                worlds[w], config, rng,
                task_id=f"task-{config.seed}-{i:05d}", index=indexes[w],
            )
            tasks.append(task)
        except GenerationFailedError:
            failures += 1
            if failures > max_failures:
                raise
        i += 1

    if out_path is not None:
        out_path = Path(out_path)
        header = {
            "format": TASK_FORMAT,
            "count": len(tasks),
            "seed": int(config.seed),
            "maps": [w.map_id for w in worlds],
        }
        lines = [json.dumps(header)]
        lines += [json.dumps(t.to_dict()) for t in tasks]
        out_path.write_text("\n".join(lines) + "\n")
        hist_path = out_path.with_suffix(".histogram.json")
        hist_path.write_text(json.dumps(family_histogram(tasks), indent=2))
    return tasks


DEMO_MAP_SEED = 1
DEMO_MAP_CELLS = 1000
DEMO_WITNESS_SEED = 2024


def make_demo_task() -> tuple[WorldMap, "Task"]:
    """Fixed re-adaptation demo: three facilities tied to Marketown across a
    lake plus one directional constraint. The witness is solved once by the
    annealing oracle from a fixed seed, so the task is deterministic."""
    from .solvers import anneal_solve  # local import to avoid a cycle
    from .worldgen.pipeline import generate_map
    from .worldgen.types import BiomeType, MapGenConfig

    world = generate_map(MapGenConfig(seed=DEMO_MAP_SEED, cell_count=DEMO_MAP_CELLS))
    index = MapIndex(world)
    facilities = [
        ("p1", "Marketown"),
        ("p2", "Veilstead Kingdom"),
        ("p3", "Hearthfire Hold"),
        ("p4", "Aquafrost Garrison"),
    ]
    names = dict(facilities)
    specs = [
        Constraint(ConstraintType.ACROSS_BIOME_FROM, ("p2", "p1"), biome=BiomeType.LAKE),
        Constraint(ConstraintType.ACROSS_BIOME_FROM, ("p3", "p1"), biome=BiomeType.LAKE),
        Constraint(ConstraintType.DIR_OF_FACILITY, ("p4", "p1"), direction=Direction.S),
    ]
    constraints = [
        Constraint(c.ctype, c.facilities, biome=c.biome, direction=c.direction,
                   utterance=render_utterance(c, names=names))
        for c in specs
    ]
    task = Task(
        task_id="demo-readapt",
        map_ref=world.map_id,
        facilities=facilities,
        constraints=constraints,
        witness_layout={},
    )
    witness, ok = anneal_solve(task, index, budget=20000,
                               rng=np.random.default_rng(DEMO_WITNESS_SEED))
    if not ok:
        raise GenerationFailedError("demo witness search failed")
    task.witness_layout = witness
    return world, task


def load_dataset(path) -> list[Task]:
    lines = Path(path).read_text().splitlines()
    tasks = []
    for line in lines:
        if not line.strip():
            continue
        doc = json.loads(line)
        if "task_id" not in doc:
            continue  # header line
        tasks.append(Task.from_dict(doc))
    return tasks

import itertools
import json
import math

import numpy as np
import pytest

from plotmap.constraints import ConstraintType, evaluate
from plotmap.constraints.types import SIGNATURES, SYMMETRIC_FACILITY_PAIRS
from plotmap.errors import GenerationFailedError, InvalidConfigError, InvalidInputError
from plotmap.mapindex import MapIndex
from plotmap.taskgen import (
    Task,
    TaskGenConfig,
    enumerate_satisfied,
    facility_names,
    family_histogram,
    generate_dataset,
    generate_task,
    load_dataset,
    make_demo_task,
    verify_witness,
)
from plotmap.worldgen.types import BiomeType

from fixtures import make_grid_map


class TestEnumerate:
    def test_single_facility_has_no_pairwise(self, small_index):
        layout = {"p1": (0.5, 0.5)}
        pool = enumerate_satisfied(layout, small_index)
        assert all(len(c.facilities) == 1 for c in pool)

    def test_facility_in_ocean_yields_inside_ocean(self, small_index):
        # border cells are always ocean
        layout = {"p1": (0.001, 0.001)}
        pool = enumerate_satisfied(layout, small_index)
        keys = {(c.ctype, c.biome) for c in pool}
        assert (ConstraintType.INSIDE, BiomeType.OCEAN) in keys

    def test_instantiation_count_matches_nested_loops(self, small_index):
        """Closed-form arity count vs a literal brute-force counter."""
        rng = np.random.default_rng(3)
        layout = {f"p{i}": tuple(rng.random(2)) for i in range(1, 5)}
        fids = sorted(layout)
        n = len(fids)
        biomes = small_index.world.biomes_present()
        b = len(biomes)

        # Closed form per family.
        pairs = math.comb(n, 2)
        expected_total = (
            b * pairs                     # AcrossBiomeFrom (symmetric pair)
            + 4 * (b * n)                 # Inside/Outside/CloseToBiome/AwayFromBiome
            + 4 * b * n                   # DirOfBiome
            + 2 * pairs                   # CloseToFacility/AwayFromFacility
            + n * math.comb(n - 1, 2)     # InBetween
            + 4 * n                       # OnMapSide
            + 4 * n * (n - 1)             # DirOfFacility (ordered)
            + pairs                       # VisibleFrom
        )

        # Literal nested loops over the same argument space.
        brute = 0
        for ct in ConstraintType:
            nb, nf, nd = SIGNATURES[ct]
            if ct in SYMMETRIC_FACILITY_PAIRS:
                combos = list(itertools.combinations(fids, 2))
            elif ct == ConstraintType.IN_BETWEEN:
                combos = [
                    (a, x, y) for a in fids
                    for x, y in itertools.combinations([f for f in fids if f != a], 2)
                ]
            elif nf == 1:
                combos = [(f,) for f in fids]
            else:
                combos = list(itertools.permutations(fids, nf))
            brute += (len(combos)
                      * (b if nb else 1)
                      * (4 if nd else 1))
        assert brute == expected_total

        # The satisfied pool is a subset of the instantiation space and every
        # member re-evaluates satisfied.
        pool = enumerate_satisfied(layout, small_index)
        assert len(pool) <= expected_total
        assert len({c.key() for c in pool}) == len(pool)
        for c in pool:
            assert evaluate(c, layout, small_index).satisfied

    def test_symmetric_dedup(self, small_index, rng):
        layout = {f"p{i}": tuple(rng.random(2)) for i in range(1, 4)}
        pool = enumerate_satisfied(layout, small_index)
        for c in pool:
            if c.ctype in SYMMETRIC_FACILITY_PAIRS:
                assert list(c.facilities) == sorted(c.facilities)


class TestGenerateTask:
    def test_witness_verifies(self, small_map, small_index):
        cfg = TaskGenConfig(facility_count=6, seed=11)
        task = generate_task(small_map, cfg, np.random.default_rng(11), index=small_index)
        assert verify_witness(task, small_index)

    def test_determinism(self, small_map, small_index):
        cfg = TaskGenConfig(facility_count=5, seed=8)
        a = generate_task(small_map, cfg, np.random.default_rng(8), index=small_index)
        b = generate_task(small_map, cfg, np.random.default_rng(8), index=small_index)
        assert json.dumps(a.to_dict()) == json.dumps(b.to_dict())

    def test_constraint_count_in_bounds(self, small_map, small_index):
        cfg = TaskGenConfig(facility_count=8, min_constraints=4, max_constraints=7, seed=2)
        for s in range(5):
            task = generate_task(small_map, cfg, np.random.default_rng(s), index=small_index)
            assert 4 <= len(task.constraints) <= 7

    def test_constraints_reference_declared_facilities(self, small_map, small_index):
        cfg = TaskGenConfig(facility_count=4, seed=3)
        task = generate_task(small_map, cfg, np.random.default_rng(3), index=small_index)
        declared = set(task.facility_ids)
        for c in task.constraints:
            assert set(c.facilities) <= declared

    def test_generation_failure_when_impossible(self):
        # Single facility on an all-plains grid with only the InBetween
        # family whitelisted can never produce 3 constraints.
        world = make_grid_map(4)
        cfg = TaskGenConfig(facility_count=1, min_constraints=3,
                            families=(ConstraintType.IN_BETWEEN,), seed=0,
                            retry_budget=5)
        with pytest.raises(GenerationFailedError):
            generate_task(world, cfg, np.random.default_rng(0))

    def test_invalid_config(self):
        with pytest.raises(InvalidConfigError):
            TaskGenConfig(facility_count=11).validate()
        with pytest.raises(InvalidConfigError):
            TaskGenConfig(min_constraints=5, max_constraints=2).validate()

    def test_utterances_parse_back(self, small_map, small_index):
        from plotmap.constraints import parse_utterance
        cfg = TaskGenConfig(facility_count=5, seed=21)
        task = generate_task(small_map, cfg, np.random.default_rng(21), index=small_index)
        for c in task.constraints:
            back = parse_utterance(c.utterance, names=task.names)
            assert back.ctype == c.ctype
            assert back.biome == c.biome
            assert back.direction == c.direction
            # symmetric families may round-trip with swapped arguments
            if c.ctype in SYMMETRIC_FACILITY_PAIRS:
                assert sorted(back.facilities) == sorted(c.facilities)
            else:
                assert back.facilities == c.facilities


class TestDataset:
    def test_count_and_header(self, small_map, tmp_path):
        cfg = TaskGenConfig(facility_count=4, seed=5)
        out = tmp_path / "ds.jsonl"
        tasks = generate_dataset([small_map], cfg, 6, out_path=out)
        lines = out.read_text().splitlines()
        header = json.loads(lines[0])
        assert header["format"] == "plotmap-task/1"
        assert header["count"] == 6
        assert len(lines) == 7
        assert len(load_dataset(out)) == 6
        hist = json.loads((tmp_path / "ds.histogram.json").read_text())
        assert sum(hist.values()) == sum(len(t.constraints) for t in tasks)

    def test_empty_dataset_has_header(self, small_map, tmp_path):
        cfg = TaskGenConfig(seed=5)
        out = tmp_path / "empty.jsonl"
        generate_dataset([small_map], cfg, 0, out_path=out)
        lines = out.read_text().splitlines()
        assert json.loads(lines[0])["count"] == 0
        assert load_dataset(out) == []

    def test_deterministic_bytes(self, small_map, tmp_path):
        cfg = TaskGenConfig(facility_count=4, seed=13)
        a, b = tmp_path / "a.jsonl", tmp_path / "b.jsonl"
        generate_dataset([small_map], cfg, 4, out_path=a)
        generate_dataset([small_map], cfg, 4, out_path=b)
        assert a.read_bytes() == b.read_bytes()

    def test_needs_maps(self):
        with pytest.raises(InvalidInputError):
            generate_dataset([], TaskGenConfig(), 1)

    def test_balance_sampling_caps_modal_family(self, seed1_map, seed1_index):
        cfg = TaskGenConfig(facility_count=10, seed=17, balance_sampling=True)
        tasks = generate_dataset([seed1_map], cfg, 40)
        hist = family_histogram(tasks)
        total = sum(hist.values())
        assert max(hist.values()) / total <= 0.40

    def test_default_sampling_skew(self, seed1_map):
        # AcrossBiomeFrom dominates and AwayFromFacility > CloseToFacility.
        cfg = TaskGenConfig(facility_count=10, seed=23)
        tasks = generate_dataset([seed1_map], cfg, 40)
        hist = family_histogram(tasks)
        assert max(hist, key=hist.get) == ConstraintType.ACROSS_BIOME_FROM.value
        assert (hist[ConstraintType.AWAY_FROM_FACILITY.value]
                > hist[ConstraintType.CLOSE_TO_FACILITY.value])


class TestNamesAndDemo:
    def test_names_unique(self):
        names = facility_names(10, np.random.default_rng(0))
        assert len(set(names)) == 10

    def test_demo_task(self):
        world, task = make_demo_task()
        index = MapIndex(world)
        assert verify_witness(task, index)
        assert [n for _, n in task.facilities][:2] == ["Marketown", "Veilstead Kingdom"]

    def test_task_roundtrip(self, small_map, small_index):
        cfg = TaskGenConfig(facility_count=3, seed=2)
        task = generate_task(small_map, cfg, np.random.default_rng(2), index=small_index)
        again = Task.from_dict(json.loads(json.dumps(task.to_dict())))
        assert again.to_dict() == task.to_dict()

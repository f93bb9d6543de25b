"""Core map data model: configuration, cells, biomes, and the assembled map."""

from __future__ import annotations

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from ..errors import InvalidConfigError


class TerrainClass(str, Enum):
    OCEAN = "OCEAN"
    COAST = "COAST"
    LAKE = "LAKE"
    LAND = "LAND"


class BiomeType(str, Enum):
    OCEAN = "OCEAN"
    LAKE = "LAKE"
    COAST = "COAST"
    PLAINS = "PLAINS"
    FOREST = "FOREST"
    DESERT = "DESERT"
    SWAMP = "SWAMP"
    TUNDRA = "TUNDRA"
    MOUNTAIN = "MOUNTAIN"


LAND_BIOMES = (
    BiomeType.PLAINS,
    BiomeType.FOREST,
    BiomeType.DESERT,
    BiomeType.SWAMP,
    BiomeType.TUNDRA,
    BiomeType.MOUNTAIN,
)

# Fixed render palette (RGB). Golden tests and the UI rely on these exact values.
PALETTE: dict[BiomeType, tuple[int, int, int]] = {
    BiomeType.OCEAN: (26, 68, 128),
    BiomeType.LAKE: (70, 130, 180),
    BiomeType.COAST: (240, 220, 170),
    BiomeType.PLAINS: (130, 180, 90),
    BiomeType.FOREST: (50, 120, 60),
    BiomeType.DESERT: (210, 190, 130),
    BiomeType.SWAMP: (90, 110, 70),
    BiomeType.TUNDRA: (200, 200, 210),
    BiomeType.MOUNTAIN: (140, 130, 120),
}


@dataclass(frozen=True)
class MapGenConfig:
    seed: int = 0
    cell_count: int = 1000
    water_edge_ratio: float = 0.35
    lake_seed_count: int = 3
    river_count: int = 4
    lloyd_iterations: int = 2
    raster_size: int = 42

    def validate(self) -> None:
        if self.cell_count < 1:
            raise InvalidConfigError("cell_count must be >= 1")
        if not (0.0 < self.water_edge_ratio < 1.0):
            raise InvalidConfigError("water_edge_ratio must be in (0, 1)")
        if self.lake_seed_count < 0:
            raise InvalidConfigError("lake_seed_count must be >= 0")
        if self.river_count < 0:
            raise InvalidConfigError("river_count must be >= 0")
        if self.lloyd_iterations < 0:
            raise InvalidConfigError("lloyd_iterations must be >= 0")
        if self.raster_size < 8:
            raise InvalidConfigError("raster_size must be >= 8")
        if not (0 <= int(self.seed) < 2**64):
            raise InvalidConfigError("seed must fit in 64 unsigned bits")

    def to_dict(self) -> dict:
        return {
            "seed": int(self.seed),
            "cell_count": self.cell_count,
            "water_edge_ratio": self.water_edge_ratio,
            "lake_seed_count": self.lake_seed_count,
            "river_count": self.river_count,
            "lloyd_iterations": self.lloyd_iterations,
            "raster_size": self.raster_size,
        }

    @classmethod
    def from_dict(cls, d: dict) -> "MapGenConfig":
        return cls(**{k: d[k] for k in cls.__dataclass_fields__ if k in d})


@dataclass
class Cell:
    id: int
    site: tuple[float, float]
    vertices: list[tuple[float, float]]  # CCW
    neighbor_ids: list[int]
    terrain_class: TerrainClass = TerrainClass.LAND
    biome: BiomeType = BiomeType.PLAINS
    elevation: float = 0.0
    moisture: float = 0.0

    @property
    def is_water(self) -> bool:
        return self.terrain_class in (TerrainClass.OCEAN, TerrainClass.LAKE)


@dataclass
class WorldMap:
    config: MapGenConfig
    cells: list[Cell]
    rivers: list[list[tuple[float, float]]] = field(default_factory=list)
    raster: np.ndarray | None = None  # (S, S, 3) uint8, row 0 = north edge

    @property
    def map_id(self) -> str:
        c = self.config
        return f"m{int(c.seed):x}c{c.cell_count}"

    def biomes_present(self) -> list[BiomeType]:
        seen = {cell.biome for cell in self.cells}
        return [b for b in BiomeType if b in seen]

"""Map serialization: JSON document plus a PNG raster side-car."""

from __future__ import annotations

import json
from pathlib import Path

import numpy as np

from ..errors import InvalidInputError
from .raster import rasterize, save_png
from .types import BiomeType, Cell, MapGenConfig, TerrainClass, WorldMap

MAP_FORMAT = "plotmap-map/1"


def map_to_dict(world: WorldMap) -> dict:
    return {
        "format": MAP_FORMAT,
        "map_id": world.map_id,
        "config": world.config.to_dict(),
        "cells": [
            {
                "id": c.id,
                "site": list(c.site),
                "vertices": [list(v) for v in c.vertices],
                "neighbors": c.neighbor_ids,
                "class": c.terrain_class.value,
                "biome": c.biome.value,
                "elevation": c.elevation,
                "moisture": c.moisture,
            }
            for c in world.cells
        ],
        "rivers": [[list(p) for p in path] for path in world.rivers],
    }


def map_from_dict(doc: dict) -> WorldMap:
    if doc.get("format") != MAP_FORMAT:
        raise InvalidInputError(f"unsupported map format: {doc.get('format')!r}")
    cells = [
        Cell(
            id=c["id"],
            site=tuple(c["site"]),
            vertices=[tuple(v) for v in c["vertices"]],
            neighbor_ids=list(c["neighbors"]),
            terrain_class=TerrainClass(c["class"]),
            biome=BiomeType(c["biome"]),
            elevation=c["elevation"],
            moisture=c["moisture"],
        )
        for c in doc["cells"]
    ]
    world = WorldMap(
        config=MapGenConfig.from_dict(doc["config"]),
        cells=cells,
        rivers=[[tuple(p) for p in path] for path in doc["rivers"]],
    )
    world.raster = rasterize(world)
    return world


def save_map(world: WorldMap, json_path, png_path=None) -> None:
    json_path = Path(json_path)
    json_path.write_text(json.dumps(map_to_dict(world)))
    if png_path is None:
        png_path = json_path.with_suffix(".png")
    raster = world.raster if world.raster is not None else rasterize(world)
    save_png(np.asarray(raster), png_path)


def load_map(json_path) -> WorldMap:
    return map_from_dict(json.loads(Path(json_path).read_text()))

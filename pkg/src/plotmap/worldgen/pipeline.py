"""Map synthesis pipeline: water flooding, elevation, rivers, moisture, biomes.

Stages mutate the cell list in place and are deterministic for a given
(config, rng-state). generate_map composes them.
"""

from __future__ import annotations

import math
from collections import deque

import numpy as np

from ..geometry import point_polygon_distance, point_segment_distance
from .mesh import MeshGraph, build_cells, build_mesh_graph
from .raster import rasterize
from .types import BiomeType, Cell, MapGenConfig, TerrainClass, WorldMap

# Local flood growth around each inland lake seed, in expansion rounds.
LAKE_GROWTH_ROUNDS = 2
# Radius of the "proximate area" water seeds placed next to the border.
BORDER_SEED_RADIUS = 0.08
BORDER_SEED_COUNT = 2
# Rivers spring from corners at least this high (fall back to the highest).
RIVER_SPRING_ELEVATION = 0.6
# e-folding distance of freshwater moisture.
MOISTURE_SCALE = 0.15


def _edge_midpoint(graph: MeshGraph, ei: int) -> tuple[float, float]:
    a, b = graph.edges[ei].corners
    pa, pb = graph.corner_points[a], graph.corner_points[b]
    return ((pa[0] + pb[0]) / 2.0, (pa[1] + pb[1]) / 2.0)


def _adjacent_edges(graph: MeshGraph, ei: int) -> list[int]:
    out = []
    for c in graph.edges[ei].corners:
        out.extend(e for e in graph.corner_edges[c] if e != ei)
    return out


def flood_water(cells: list[Cell], config: MapGenConfig, rng: np.random.Generator,
                graph: MeshGraph | None = None) -> list[Cell]:
    """Classify cells into OCEAN/COAST/LAKE/LAND via edge flooding.

    Water starts at the square border plus a couple of random near-border
    patches, grows along the corner graph until the requested fraction of
    edges is wet, then a few inland seeds grow into lakes. A cell turns to
    water when at least half its perimeter edges are wet; border-touching
    cells are always ocean.
    """
    graph = graph or build_mesh_graph(cells)
    n_edges = len(graph.edges)
    water = {ei for ei, e in enumerate(graph.edges) if e.is_border}

    border_edge_ids = sorted(water)
    if border_edge_ids:
        for _ in range(BORDER_SEED_COUNT):
            anchor = _edge_midpoint(graph, border_edge_ids[rng.integers(len(border_edge_ids))])
            for ei in range(n_edges):
                m = _edge_midpoint(graph, ei)
                if math.hypot(m[0] - anchor[0], m[1] - anchor[1]) <= BORDER_SEED_RADIUS:
                    water.add(ei)

    target = int(math.ceil(config.water_edge_ratio * n_edges))
    frontier = sorted(water)
    while len(water) < target and frontier:
        pick = int(rng.integers(len(frontier)))
        ei = frontier[pick]
        frontier[pick] = frontier[-1]
        frontier.pop()
        for nb in _adjacent_edges(graph, ei):
            if nb not in water:
                water.add(nb)
                frontier.append(nb)

    # Inland lake seeds: short local floods away from existing water.
    dry = [ei for ei in range(n_edges) if ei not in water]
    for _ in range(config.lake_seed_count):
        if not dry:
            break
        seed = dry[int(rng.integers(len(dry)))]
        region = {seed}
        rim = [seed]
        for _ in range(LAKE_GROWTH_ROUNDS):
            nxt = []
            for ei in rim:
                for nb in _adjacent_edges(graph, ei):
                    if nb not in region:
                        region.add(nb)
                        nxt.append(nb)
            rim = nxt
        water.update(region)
        dry = [ei for ei in dry if ei not in region]

    border_cells = {
        cid
        for ei, e in enumerate(graph.edges)
        if e.is_border
        for cid in e.cell_ids
    }
    water_cells = set()
    for cell in cells:
        edge_ids = graph.cell_edges[cell.id]
        wet = sum(1 for ei in edge_ids if ei in water)
        if cell.id in border_cells or wet / len(edge_ids) >= 0.5:
            water_cells.add(cell.id)

    # Ocean = water component reachable from the border through water cells.
    ocean: set[int] = set()
    queue = deque(border_cells & water_cells)
    ocean.update(queue)
    while queue:
        cid = queue.popleft()
        for nb in cells[cid].neighbor_ids:
            if nb in water_cells and nb not in ocean:
                ocean.add(nb)
                queue.append(nb)

    for cell in cells:
        if cell.id in ocean:
            cell.terrain_class = TerrainClass.OCEAN
        elif cell.id in water_cells:
            cell.terrain_class = TerrainClass.LAKE
        elif any(nb in ocean for nb in cell.neighbor_ids):
            cell.terrain_class = TerrainClass.COAST
        else:
            cell.terrain_class = TerrainClass.LAND
    return cells


def assign_elevation(cells: list[Cell]) -> list[Cell]:
    """Elevation = squared normalized BFS distance from the nearest shore.

    Shore (COAST or OCEAN) cells sit at level 0; levels spread over the full
    adjacency graph. Squaring keeps most land low and the far interior high.
    Water cells are forced flat.
    """
    sources = [c.id for c in cells
               if c.terrain_class in (TerrainClass.COAST, TerrainClass.OCEAN)]
    level = {cid: 0 for cid in sources}
    queue = deque(sources)
    while queue:
        cid = queue.popleft()
        for nb in cells[cid].neighbor_ids:
            if nb not in level:
                level[nb] = level[cid] + 1
                queue.append(nb)

    land_levels = [level[c.id] for c in cells
                   if c.terrain_class == TerrainClass.LAND and c.id in level]
    max_level = max(land_levels) if land_levels else 0
    for cell in cells:
        if cell.is_water:
            cell.elevation = 0.0
        elif max_level == 0:
            cell.elevation = 0.0
        else:
            cell.elevation = (level.get(cell.id, 0) / max_level) ** 2
    return cells


def corner_elevations(cells: list[Cell], graph: MeshGraph) -> np.ndarray:
    """Corner height = mean elevation of the touching cells."""
    out = np.zeros(len(graph.corner_points))
    for corner, owners in graph.corner_cells.items():
        out[corner] = sum(cells[cid].elevation for cid in owners) / len(owners)
    return out


def carve_rivers(cells: list[Cell], config: MapGenConfig, rng: np.random.Generator,
                 graph: MeshGraph | None = None) -> list[list[tuple[float, float]]]:
    """Trace rivers downhill along polygon corners.

    Each river starts at a random high corner and repeatedly steps to its
    lowest neighboring corner, stopping at a corner of a lake/ocean cell or
    at a local minimum.
    """
    if config.river_count == 0:
        return []
    graph = graph or build_mesh_graph(cells)
    heights = corner_elevations(cells, graph)

    def touches_water(corner: int) -> bool:
        return any(cells[cid].is_water for cid in graph.corner_cells.get(corner, ()))

    springs = [c for c in range(len(heights)) if heights[c] >= RIVER_SPRING_ELEVATION]
    if not springs:
        springs = [int(np.argmax(heights))]

    rivers = []
    for _ in range(config.river_count):
        corner = springs[int(rng.integers(len(springs)))]
        path = [corner]
        while not touches_water(corner):
            neighbors = graph.corner_neighbors(corner)
            if not neighbors:
                break
            nxt = min(neighbors, key=lambda c: (heights[c], c))
            if heights[nxt] >= heights[corner]:
                break  # local minimum
            corner = nxt
            path.append(corner)
        rivers.append([(float(graph.corner_points[c][0]), float(graph.corner_points[c][1]))
                       for c in path])
    return rivers


def assign_moisture(cells: list[Cell],
                    rivers: list[list[tuple[float, float]]]) -> list[Cell]:
    """Moisture decays exponentially with distance to fresh water.

    Fresh water is the boundary of any lake cell or any river polyline;
    oceans are always fully moist but do not moisten the land.
    """
    lake_polys = [c.vertices for c in cells if c.terrain_class == TerrainClass.LAKE]
    river_segs = []
    for path in rivers:
        if len(path) == 1:
            river_segs.append((path[0], path[0]))
        for k in range(len(path) - 1):
            river_segs.append((path[k], path[k + 1]))

    for cell in cells:
        if cell.terrain_class == TerrainClass.OCEAN:
            cell.moisture = 1.0
            continue
        d = math.inf
        for poly in lake_polys:
            d = min(d, point_polygon_distance(cell.site, poly))
            if d == 0.0:
                break
        if d > 0.0:
            for a, b in river_segs:
                d = min(d, point_segment_distance(cell.site, a, b))
                if d == 0.0:
                    break
        cell.moisture = math.exp(-d / MOISTURE_SCALE) if math.isfinite(d) else 0.0
    return cells


def land_biome(elevation: float, moisture: float) -> BiomeType:
    """Whittaker-style lookup covering all of [0,1]^2."""
    if elevation >= 0.8:
        return BiomeType.MOUNTAIN
    if elevation >= 0.6:
        return BiomeType.TUNDRA if moisture < 0.5 else BiomeType.FOREST
    if elevation >= 0.3:
        if moisture < 0.33:
            return BiomeType.DESERT
        return BiomeType.PLAINS if moisture < 0.66 else BiomeType.FOREST
    if moisture < 0.33:
        return BiomeType.DESERT
    return BiomeType.PLAINS if moisture < 0.66 else BiomeType.SWAMP


def assign_biomes(cells: list[Cell]) -> list[Cell]:
    for cell in cells:
        if cell.terrain_class == TerrainClass.OCEAN:
            cell.biome = BiomeType.OCEAN
        elif cell.terrain_class == TerrainClass.LAKE:
            cell.biome = BiomeType.LAKE
        elif cell.terrain_class == TerrainClass.COAST:
            cell.biome = BiomeType.COAST
        else:
            cell.biome = land_biome(cell.elevation, cell.moisture)
    return cells


def generate_map(config: MapGenConfig) -> WorldMap:
    """Run the full six-stage pipeline. Pure function of the config."""
    config.validate()
    rng = np.random.default_rng(int(config.seed))
    cells = build_cells(config, rng)
    graph = build_mesh_graph(cells)
    flood_water(cells, config, rng, graph)
    assign_elevation(cells)
    rivers = carve_rivers(cells, config, rng, graph)
    assign_moisture(cells, rivers)
    assign_biomes(cells)
    world = WorldMap(config=config, cells=cells, rivers=rivers)
    world.raster = rasterize(world)
    return world

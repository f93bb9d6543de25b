from .types import (
    BiomeType,
    Cell,
    LAND_BIOMES,
    MapGenConfig,
    PALETTE,
    TerrainClass,
    WorldMap,
)
from .mesh import build_cells, build_mesh_graph, mean_site_centroid_distance
from .pipeline import (
    assign_biomes,
    assign_elevation,
    assign_moisture,
    carve_rivers,
    corner_elevations,
    flood_water,
    generate_map,
    land_biome,
)
from .raster import rasterize, save_png
from .io import MAP_FORMAT, load_map, map_from_dict, map_to_dict, save_map

__all__ = [
    "BiomeType",
    "Cell",
    "LAND_BIOMES",
    "MapGenConfig",
    "PALETTE",
    "TerrainClass",
    "WorldMap",
    "build_cells",
    "build_mesh_graph",
    "mean_site_centroid_distance",
    "assign_biomes",
    "assign_elevation",
    "assign_moisture",
    "carve_rivers",
    "corner_elevations",
    "flood_water",
    "generate_map",
    "land_biome",
    "rasterize",
    "save_png",
    "MAP_FORMAT",
    "load_map",
    "map_from_dict",
    "map_to_dict",
    "save_map",
]

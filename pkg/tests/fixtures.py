"""Hand-built maps for controlled geometry tests."""

from plotmap.constraints.types import Constraint, ConstraintType
from plotmap.taskgen import Task
from plotmap.worldgen.raster import rasterize
from plotmap.worldgen.types import BiomeType, Cell, MapGenConfig, TerrainClass, WorldMap

_WATER_CLASSES = {
    BiomeType.OCEAN: TerrainClass.OCEAN,
    BiomeType.LAKE: TerrainClass.LAKE,
    BiomeType.COAST: TerrainClass.COAST,
}


def make_grid_map(n, biome_grid=None, elevation_grid=None, default=BiomeType.PLAINS):
    """n x n axis-aligned square cells; (row, col) overrides via dicts.

    Row 0 is the south edge (y in [0, 1/n]). Square cells are the Voronoi
    regions of their centers, so nearest-site lookups stay exact.
    """
    biome_grid = biome_grid or {}
    elevation_grid = elevation_grid or {}
    cells = []
    for r in range(n):
        for c in range(n):
            cid = r * n + c
            x0, x1 = c / n, (c + 1) / n
            y0, y1 = r / n, (r + 1) / n
            biome = biome_grid.get((r, c), default)
            nbrs = []
            for dr, dc in ((1, 0), (-1, 0), (0, 1), (0, -1)):
                rr, cc = r + dr, c + dc
                if 0 <= rr < n and 0 <= cc < n:
                    nbrs.append(rr * n + cc)
            cells.append(Cell(
                id=cid,
                site=((x0 + x1) / 2, (y0 + y1) / 2),
                vertices=[(x0, y0), (x1, y0), (x1, y1), (x0, y1)],
                neighbor_ids=sorted(nbrs),
                terrain_class=_WATER_CLASSES.get(biome, TerrainClass.LAND),
                biome=biome,
                elevation=elevation_grid.get((r, c), 0.0),
                moisture=0.5,
            ))
    world = WorldMap(config=MapGenConfig(seed=0, cell_count=n * n), cells=cells)
    world.raster = rasterize(world)
    return world


INSIDE_LAKE_GRID = 13
INSIDE_LAKE_CELLS = ((3, 3), (3, 9), (9, 3), (9, 9), (6, 6))


def inside_lake_fixture():
    """Two facilities, each required to be inside a lake.

    Five scattered single-cell lakes keep the shaped score informative from
    everywhere on the map while the total lake area stays small, so the
    random baseline lands in the single-digit percent range.
    """
    grid = {pos: BiomeType.LAKE for pos in INSIDE_LAKE_CELLS}
    world = make_grid_map(INSIDE_LAKE_GRID, grid)
    n = INSIDE_LAKE_GRID
    task = Task(
        task_id="inside-lake",
        map_ref=world.map_id,
        facilities=[("p1", "P1"), ("p2", "P2")],
        constraints=[
            Constraint(ConstraintType.INSIDE, ("p1",), biome=BiomeType.LAKE,
                       utterance="P1 is inside the lake"),
            Constraint(ConstraintType.INSIDE, ("p2",), biome=BiomeType.LAKE,
                       utterance="P2 is inside the lake"),
        ],
        witness_layout={"p1": (3.5 / n, 3.5 / n), "p2": (9.5 / n, 9.5 / n)},
    )
    return world, task


def ridge_map():
    """Flat map with a tall north-south wall through the middle."""
    n = 9
    elev = {(r, 4): 1.0 for r in range(n)}
    return make_grid_map(n, elevation_grid=elev)
